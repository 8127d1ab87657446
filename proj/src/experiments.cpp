#include "drawopt/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "drawopt/constraints.hpp"
#include "drawopt/exactprob.hpp"

namespace drawopt {

namespace {

constexpr std::uint64_t kBlockSize = 1ull << 16;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t z = seed + tag * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// The five canonical constraint flags in scenario bit positions
// (bit 4 = AFC, ..., bit 1 = CONMEBOL: at most 1; bit 0 = UEFA: 1 or 2).
const char* kCanonicalCodes[5] = {"AFC", "CAF", "CONCACAF", "CONMEBOL", "UEFA"};

struct FastDrawContext {
    std::vector<std::vector<int>> pot_members;   // per pot, index order
    std::vector<std::uint32_t> team_nibbles;     // per team, 4 bits per confed
    std::array<std::uint32_t, 32> scenario_mask; // flags -> satisfied scenarios

    explicit FastDrawContext(const DrawInstance& inst) {
        for (int p = 1; p <= inst.pot_count; ++p)
            pot_members.push_back(inst.pot_members(p));
        for (const Team& t : inst.teams) {
            std::uint32_t nib = 0;
            for (int c = 0; c < 5; ++c)
                if (t.in_confed(kCanonicalCodes[c])) nib |= 1u << (4 * (4 - c));
            team_nibbles.push_back(nib);
        }
        for (std::uint32_t f = 0; f < 32; ++f) {
            std::uint32_t mask = 0;
            for (std::uint32_t k = 0; k < 32; ++k)
                if ((k & ~f) == 0) mask |= 1u << k;
            scenario_mask[f] = mask;
        }
    }
};

struct RejWorkerState {
    std::vector<MatchupAccumulator> flag_acc;  // one per flag pattern
    std::uint64_t target_hits = 0;
    // scratch
    std::vector<int> perm;
    std::vector<std::vector<int>> groups;

    RejWorkerState(const DrawInstance& inst) : perm(inst.group_count) {
        for (int f = 0; f < 32; ++f) flag_acc.emplace_back(inst);
        groups.resize(inst.group_count);
        for (auto& g : groups) g.reserve(inst.pot_count);
    }
};

void rejection_block(const DrawInstance& inst, const FastDrawContext& ctx,
                     const PairWeights& weights, std::uint64_t seed,
                     std::uint64_t block, int target_scenario,
                     RejWorkerState& w) {
    RandomStream rng(seed, block);
    const int G = inst.group_count;
    const int P = inst.pot_count;
    for (std::uint64_t iter = 0; iter < kBlockSize; ++iter) {
        for (auto& g : w.groups) g.clear();
        for (int p = 0; p < P; ++p) {
            // Fisher-Yates, identical RNG consumption to unconstrained_draw.
            for (int i = 0; i < G; ++i) w.perm[i] = i;
            for (int i = G - 1; i >= 1; --i) {
                int j = static_cast<int>(rng.below(std::uint32_t(i + 1)));
                std::swap(w.perm[i], w.perm[j]);
            }
            const auto& members = ctx.pot_members[p];
            for (int i = 0; i < G; ++i)
                w.groups[w.perm[i]].push_back(members[i]);
        }
        std::uint32_t flags = 0x1f;
        double weight = 0.0;
        for (int g = 0; g < G; ++g) {
            const auto& m = w.groups[g];
            std::uint32_t packed = 0;
            for (int t : m) packed += ctx.team_nibbles[t];
            for (int c = 0; c < 4; ++c)
                if (((packed >> (4 * (4 - c))) & 0xF) > 1)
                    flags &= ~(1u << (4 - c));
            std::uint32_t uefa = (packed >> 0) & 0xF;
            if (uefa < 1 || uefa > 2) flags &= ~1u;
            for (std::size_t i = 0; i < m.size(); ++i)
                for (std::size_t j = i + 1; j < m.size(); ++j)
                    weight += weights.weight(m[i], m[j]);
        }
        w.flag_acc[flags].record_groups(w.groups.data(), G, weight);
        if ((std::uint32_t(target_scenario) & ~flags) == 0) ++w.target_hits;
    }
}

void flatten_groups(const DrawInstance& inst, const GroupAssignment& a,
                    std::vector<std::vector<int>>& groups) {
    for (int g = 0; g < inst.group_count; ++g) {
        groups[g].clear();
        for (int p = 1; p <= inst.pot_count; ++p) groups[g].push_back(a.team_at(p, g));
    }
}

std::string format6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

bool skip_provably_uniform(const ConstraintScenario& s) {
    if (s.bounds.empty()) return true;
    if (s.bounds.size() != 1) return false;
    const Bound& b = s.bounds.begin()->second;
    return b.min_per_group == 0 && b.max_per_group == 1;
}

RejectionSweepResult rejection_sweep(const DrawInstance& inst,
                                     std::uint64_t target_accepted,
                                     int target_scenario, std::uint64_t seed,
                                     int workers, std::uint32_t record_mask,
                                     std::uint64_t max_draws) {
    if (target_scenario < 0 || target_scenario >= kScenarioCount)
        throw std::invalid_argument("target scenario out of range");
    workers = std::max(1, workers);
    FastDrawContext ctx(inst);
    PairWeights weights(inst);
    std::vector<RejWorkerState> ws;
    ws.reserve(workers);
    for (int w = 0; w < workers; ++w) ws.emplace_back(inst);

    std::uint64_t block = 0;
    for (;;) {
        if (workers == 1) {
            rejection_block(inst, ctx, weights, seed, block, target_scenario,
                            ws[0]);
            ++block;
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w)
                pool.emplace_back([&, w] {
                    rejection_block(inst, ctx, weights, seed, block + w,
                                    target_scenario, ws[w]);
                });
            for (auto& t : pool) t.join();
            block += workers;
        }
        std::uint64_t hits = 0;
        for (const auto& w : ws) hits += w.target_hits;
        if (hits >= target_accepted) break;
        if (max_draws && block * kBlockSize >= max_draws) break;
    }

    RejectionSweepResult result;
    result.total_draws = block * kBlockSize;
    result.target_scenario = target_scenario;
    result.accumulators.assign(kScenarioCount, MatchupAccumulator{});
    for (int k = 0; k < kScenarioCount; ++k) {
        bool recorded = (record_mask >> k) & 1u;
        MatchupAccumulator acc(inst);
        for (const auto& w : ws)
            for (int f = 0; f < 32; ++f) {
                if ((std::uint32_t(k) & ~std::uint32_t(f)) != 0) continue;
                result.accepted[k] += w.flag_acc[f].draw_count();
                if (recorded) acc.merge(w.flag_acc[f]);
            }
        if (recorded) result.accumulators[k] = std::move(acc);
    }
    return result;
}

SkipRunResult skip_run(const DrawInstance& inst, const ConstraintScenario& s,
                       HostPolicy policy, std::uint64_t iterations,
                       std::uint64_t seed, int workers,
                       std::vector<int> pot_order) {
    workers = std::max(1, workers);
    const std::uint64_t blocks = (iterations + kBlockSize - 1) / kBlockSize;
    PairWeights weights(inst);

    std::vector<MatchupAccumulator> accs;
    std::vector<std::uint64_t> skips(workers, 0);
    for (int w = 0; w < workers; ++w) accs.emplace_back(inst);

    auto run_worker = [&](int w) {
        SkipSampler sampler(inst, s, policy, pot_order);
        GroupAssignment a(inst.pot_count, inst.group_count);
        std::vector<std::vector<int>> groups(inst.group_count);
        for (std::uint64_t b = w; b < blocks; b += workers) {
            RandomStream rng(seed, b);
            std::uint64_t n = std::min(kBlockSize, iterations - b * kBlockSize);
            for (std::uint64_t i = 0; i < n; ++i) {
                sampler.draw(rng, a);
                flatten_groups(inst, a, groups);
                double weight = 0.0;
                for (const auto& m : groups)
                    for (std::size_t x = 0; x < m.size(); ++x)
                        for (std::size_t y = x + 1; y < m.size(); ++y)
                            weight += weights.weight(m[x], m[y]);
                accs[w].record_groups(groups.data(), inst.group_count, weight);
            }
        }
        skips[w] = sampler.skip_count();
    };

    if (workers == 1) {
        run_worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(run_worker, w);
        for (auto& t : pool) t.join();
    }

    SkipRunResult result;
    result.accumulator = MatchupAccumulator(inst);
    for (int w = 0; w < workers; ++w) {
        result.accumulator.merge(accs[w]);
        result.skip_count += skips[w];
    }
    return result;
}

SweepResult run_scenario_sweep(const DrawInstance& inst, const SweepConfig& cfg) {
    std::vector<int> scenarios = cfg.scenarios;
    if (scenarios.empty()) {
        scenarios.resize(kScenarioCount);
        std::iota(scenarios.begin(), scenarios.end(), 0);
    }
    std::sort(scenarios.begin(), scenarios.end());
    scenarios.erase(std::unique(scenarios.begin(), scenarios.end()),
                    scenarios.end());
    for (int k : scenarios)
        if (k < 0 || k >= kScenarioCount)
            throw std::invalid_argument("scenario index out of range");

    std::array<double, kScenarioCount> exact_validity{};
    int target = -1;
    std::uint32_t record_mask = 0;
    for (int k : scenarios) {
        exact_validity[k] = validity_probability(inst, scenario_from_index(k));
        record_mask |= 1u << k;
        if (exact_validity[k] > 0.0) target = std::max(target, k);
    }
    if (target < 0)
        throw std::invalid_argument("no requested scenario admits a valid assignment");

    RejectionSweepResult rej = rejection_sweep(inst, cfg.iterations, target,
                                               cfg.seed, cfg.workers,
                                               record_mask);

    SweepResult result;
    result.total_unconstrained_draws = rej.total_draws;
    result.target_scenario = target;
    const int n = static_cast<int>(inst.teams.size());
    for (int k : scenarios) {
        ConstraintScenario s = scenario_from_index(k);
        SweepRow row;
        row.metrics.scenario = k;
        row.metrics.validity = rej.validity(k);
        row.metrics.uniform_samples = rej.accepted[k];
        auto support = pair_support(inst, s);
        row.support_pairs = support.size();
        if (exact_validity[k] <= 0.0) {  // Skip cannot run; report and move on
            result.rows.push_back(row);
            continue;
        }
        SkipRunResult skip =
            skip_run(inst, s, cfg.policy, cfg.iterations,
                     derive_seed(cfg.seed, std::uint64_t(k) + 1), cfg.workers,
                     cfg.pot_order);
        row.metrics.skip_samples = cfg.iterations;
        auto p_uniform = rej.accumulators[k].matchup_matrix();
        auto p_skip = skip.accumulator.matchup_matrix();
        row.metrics.delta_pp = mean_abs_bias(p_uniform, p_skip, support, n);
        row.metrics.omega_pp = max_abs_bias(p_uniform, p_skip, support, n);
        if (cfg.zero_uniform_scenarios && skip_provably_uniform(s)) {
            row.metrics.delta_pp = 0.0;
            row.metrics.omega_pp = 0.0;
        }
        row.psi_uniform = psi(rej.accumulators[k]);
        row.psi_skip = psi(skip.accumulator);
        row.metrics.psi = cfg.psi_mechanism == PsiMechanism::Uniform
                              ? row.psi_uniform
                              : row.psi_skip;
        result.rows.push_back(row);
    }
    return result;
}

namespace {

SweepConfig sweep_config_of(const ExperimentConfig& config) {
    SweepConfig cfg;
    cfg.iterations = config.iterations;
    cfg.seed = config.seed;
    cfg.workers = config.workers;
    cfg.policy = config.policy;
    cfg.pot_order = config.pot_order;
    cfg.scenarios = config.scenarios;
    cfg.psi_mechanism = config.psi_mechanism;
    return cfg;
}

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& res) {
    std::ofstream out(path);
    out << "scenario,constraints,validity,delta_pp,omega_pp,psi,psi_uniform,"
           "psi_skip,support_pairs,uniform_samples,skip_samples\n";
    for (const auto& row : res.rows) {
        const auto& m = row.metrics;
        out << m.scenario << ',' << scenario_name(m.scenario) << ','
            << format6(m.validity) << ',' << format6(m.delta_pp) << ','
            << format6(m.omega_pp) << ',' << format6(m.psi) << ','
            << format6(row.psi_uniform) << ',' << format6(row.psi_skip) << ','
            << row.support_pairs << ',' << m.uniform_samples << ','
            << m.skip_samples << '\n';
    }
}

const char* objective_label(Objective kind) {
    return kind == Objective::MeanBias ? "mean-bias" : "max-bias";
}

void write_frontier_csvs(const std::filesystem::path& out_dir,
                         const std::vector<ScenarioMetrics>& table,
                         double alpha_step) {
    std::ofstream bp(out_dir / "frontier_breakpoints.csv");
    bp << "objective,alpha_low,alpha_high,scenario,constraints\n";
    for (Objective kind : {Objective::MeanBias, Objective::MaxBias})
        for (const auto& b : breakpoints(kind, table))
            bp << objective_label(kind) << ',' << format6(b.alpha_low) << ','
               << format6(b.alpha_high) << ',' << b.scenario << ','
               << scenario_name(b.scenario) << '\n';

    std::ofstream env(out_dir / "frontier_envelope.csv");
    env << "objective,alpha,scenario,value\n";
    for (Objective kind : {Objective::MeanBias, Objective::MaxBias}) {
        long steps = std::lround(1.0 / alpha_step);
        for (long i = 0; i <= steps; ++i) {
            double alpha = std::min(1.0, i * alpha_step);
            int k = optimal_scenario(kind, table, alpha);
            const ScenarioMetrics* m = nullptr;
            for (const auto& row : table)
                if (row.scenario == k) m = &row;
            env << objective_label(kind) << ',' << format6(alpha) << ',' << k
                << ',' << format6(objective_value(kind, *m, alpha)) << '\n';
        }
    }
}

int run_example_verify();

}  // namespace

int run_experiment(const ExperimentConfig& config) {
    if (config.iterations < 1)
        throw std::invalid_argument("iterations must be at least 1");
    if (!(config.alpha_step > 0.0 && config.alpha_step <= 1.0))
        throw std::invalid_argument("alpha step must lie in (0, 1]");
    std::filesystem::create_directories(config.out_dir);
    const std::filesystem::path out_dir(config.out_dir);

    if (config.experiment == "example1-verify") return run_example_verify();

    DrawInstance inst = load_instance(config.instance_path);

    if (config.experiment == "scenario-sweep") {
        SweepResult res = run_scenario_sweep(inst, sweep_config_of(config));
        write_sweep_csv(out_dir / "scenario_metrics.csv", res);
        std::printf("wrote %s (%llu unconstrained draws)\n",
                    (out_dir / "scenario_metrics.csv").c_str(),
                    static_cast<unsigned long long>(res.total_unconstrained_draws));
        return 0;
    }

    if (config.experiment == "frontier") {
        SweepResult res = run_scenario_sweep(inst, sweep_config_of(config));
        write_sweep_csv(out_dir / "scenario_metrics.csv", res);
        // The frontier trades the Skip mechanism's non-uniformity against the
        // attractiveness of the draws it actually produces, so the objective
        // always uses the Skip-conditioned psi.
        std::vector<ScenarioMetrics> table;
        for (const auto& row : res.rows) {
            if (!row.metrics.skip_samples) continue;  // infeasible scenario
            table.push_back(row.metrics);
            table.back().psi = row.psi_skip;
        }
        write_frontier_csvs(out_dir, table, config.alpha_step);
        std::printf("wrote %s and %s\n",
                    (out_dir / "frontier_breakpoints.csv").c_str(),
                    (out_dir / "frontier_envelope.csv").c_str());
        return 0;
    }

    if (config.experiment == "host-policy") {
        // Most constrained feasible scenario among those requested.
        std::vector<int> candidates = config.scenarios;
        if (candidates.empty()) {
            candidates.resize(kScenarioCount);
            std::iota(candidates.begin(), candidates.end(), 0);
        }
        int k = -1;
        for (int c : candidates)
            if (validity_probability(inst, scenario_from_index(c)) > 0.0)
                k = std::max(k, c);
        if (k < 0)
            throw std::invalid_argument("no requested scenario admits a valid assignment");
        ConstraintScenario s = scenario_from_index(k);
        const int n = static_cast<int>(inst.teams.size());

        RejectionSweepResult rej = rejection_sweep(
            inst, config.iterations, k, config.seed, config.workers, 1u << k);
        auto p_uniform = rej.accumulators[k].matchup_matrix();
        auto support = pair_support(inst, s);

        struct PolicyRun {
            HostPolicy policy;
            const char* label;
            std::vector<double> p_skip;
            double delta, omega, psi_value;
        };
        std::vector<PolicyRun> runs;
        for (auto [policy, label, tag] :
             {std::tuple{HostPolicy::PreAssign, "preassign", 1000ull},
              std::tuple{HostPolicy::DrawAndRelabel, "relabel", 2000ull}}) {
            SkipRunResult skip = skip_run(
                inst, s, policy, config.iterations,
                derive_seed(config.seed, tag + std::uint64_t(k)),
                config.workers, config.pot_order);
            PolicyRun run;
            run.policy = policy;
            run.label = label;
            run.p_skip = skip.accumulator.matchup_matrix();
            run.delta = mean_abs_bias(p_uniform, run.p_skip, support, n);
            run.omega = max_abs_bias(p_uniform, run.p_skip, support, n);
            run.psi_value = psi(skip.accumulator);
            runs.push_back(std::move(run));
        }

        std::ofstream pair_csv(out_dir / "host_policy_pair_bias.csv");
        pair_csv << "team_i,team_j,bias_preassign_pp,bias_relabel_pp\n";
        for (const auto& [i, j] : support) {
            pair_csv << inst.teams[i].name << ',' << inst.teams[j].name;
            for (const auto& run : runs)
                pair_csv << ','
                         << format6(100.0 * (run.p_skip[i * n + j] -
                                             p_uniform[i * n + j]));
            pair_csv << '\n';
        }

        std::ofstream team_csv(out_dir / "host_policy_team_bias.csv");
        team_csv << "team,mean_abs_bias_preassign_pp,mean_abs_bias_relabel_pp\n";
        for (int t = 0; t < n; ++t) {
            team_csv << inst.teams[t].name;
            for (const auto& run : runs) {
                double sum = 0.0;
                int pairs = 0;
                for (const auto& [i, j] : support) {
                    if (i != t && j != t) continue;
                    sum += std::abs(run.p_skip[i * n + j] - p_uniform[i * n + j]);
                    ++pairs;
                }
                team_csv << ',' << format6(pairs ? 100.0 * sum / pairs : 0.0);
            }
            team_csv << '\n';
        }

        std::ofstream summary(out_dir / "host_policy_summary.csv");
        summary << "policy,scenario,delta_pp,omega_pp,psi_skip\n";
        for (const auto& run : runs)
            summary << run.label << ',' << k << ',' << format6(run.delta) << ','
                    << format6(run.omega) << ',' << format6(run.psi_value)
                    << '\n';

        std::printf("wrote host-policy reports for scenario %d to %s\n", k,
                    out_dir.c_str());
        return 0;
    }

    throw std::invalid_argument("unknown experiment: " + config.experiment);
}

namespace {

// Exact checks on the small reference instance, plus sampled cross-checks.
int run_example_verify() {
    DrawInstance inst = make_example_instance();
    ConstraintScenario s = example_constraint();
    const int n = static_cast<int>(inst.teams.size());
    const int i = inst.team_index("1");
    const int j = inst.team_index("4");

    bool ok = true;
    auto check = [&ok](const char* label, double got, double want, double tol) {
        bool pass = std::abs(got - want) <= tol;
        std::printf("%s: %s (got %.6f, want %.6f)\n", pass ? "PASS" : "FAIL",
                    label, got, want);
        ok = ok && pass;
    };

    auto valid = enumerate_valid(inst, s);
    auto p_uniform = matchup_from_assignments(valid, inst);
    check("exact uniform matchup p(1,4)", p_uniform[i * n + j], 2.0 / 3.0, 1e-12);

    auto dist = exact_skip_distribution(inst, s, HostPolicy::DrawAndRelabel);
    auto p_skip = matchup_from_skip_distribution(dist, inst);
    check("exact skip matchup p(1,4)", p_skip[i * n + j], 0.5, 1e-12);

    const std::uint64_t draws = 100000;
    MatchupAccumulator uniform_acc(inst);
    RandomStream rng(7, 0);
    std::uint64_t accepted = 0;
    while (accepted < draws) {
        GroupAssignment a = unconstrained_draw(inst, HostPolicy::DrawAndRelabel, rng);
        if (!assignment_valid(inst, a, s)) continue;
        uniform_acc.record(a);
        ++accepted;
    }
    check("sampled uniform matchup p(1,4)",
          uniform_acc.matchup_matrix()[i * n + j], 2.0 / 3.0, 0.01);

    MatchupAccumulator skip_acc(inst);
    SkipSampler sampler(inst, s, HostPolicy::DrawAndRelabel);
    RandomStream rng2(7, 1);
    for (std::uint64_t d = 0; d < draws; ++d) skip_acc.record(sampler.draw(rng2));
    check("sampled skip matchup p(1,4)", skip_acc.matchup_matrix()[i * n + j],
          0.5, 0.01);

    std::printf("%s\n", ok ? "PASS" : "FAIL");
    return ok ? 0 : 1;
}

}  // namespace

}  // namespace drawopt
