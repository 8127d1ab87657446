#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "drawopt/frontier.hpp"
#include "drawopt/metrics.hpp"
#include "drawopt/samplers.hpp"

namespace drawopt {

/// One unconstrained stream feeds all 32 scenarios at once: a draw is
/// recorded for every scenario whose constraints it satisfies, so the
/// effective sample sizes differ per scenario. The stream stops at the end
/// of the wave in which the target scenario reaches `target_accepted` draws.
struct RejectionSweepResult {
    std::uint64_t total_draws = 0;
    int target_scenario = 31;
    std::array<std::uint64_t, kScenarioCount> accepted{};
    std::vector<MatchupAccumulator> accumulators;  // one per recorded scenario

    double validity(int scenario) const {
        return static_cast<double>(accepted[scenario]) /
               static_cast<double>(total_draws);
    }
};

RejectionSweepResult rejection_sweep(const DrawInstance& inst,
                                     std::uint64_t target_accepted,
                                     int target_scenario, std::uint64_t seed,
                                     int workers = 1,
                                     std::uint32_t record_mask = 0xffffffffu,
                                     std::uint64_t max_draws = 0);

struct SkipRunResult {
    MatchupAccumulator accumulator;
    std::uint64_t skip_count = 0;
};

SkipRunResult skip_run(const DrawInstance& inst, const ConstraintScenario& s,
                       HostPolicy policy, std::uint64_t iterations,
                       std::uint64_t seed, int workers = 1,
                       std::vector<int> pot_order = {});

/// True for constraint sets under which the Skip mechanism provably draws
/// uniformly (no bounds, or a single max-1 bound): their delta and omega are
/// exactly zero and are reported as such instead of Monte Carlo noise.
bool skip_provably_uniform(const ConstraintScenario& s);

enum class PsiMechanism { Uniform, Skip };

struct SweepConfig {
    std::uint64_t iterations = 1'000'000;  // skip draws per scenario, and the
                                           // rejection target for the most
                                           // constrained feasible scenario
    std::uint64_t seed = 1;
    int workers = 1;
    HostPolicy policy = HostPolicy::DrawAndRelabel;
    std::vector<int> pot_order;
    std::vector<int> scenarios;            // empty = all 32
    PsiMechanism psi_mechanism = PsiMechanism::Uniform;
    bool zero_uniform_scenarios = true;
};

struct SweepRow {
    ScenarioMetrics metrics;
    double psi_skip = 0.0;
    double psi_uniform = 0.0;
    std::size_t support_pairs = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::uint64_t total_unconstrained_draws = 0;
    int target_scenario = 31;
};

SweepResult run_scenario_sweep(const DrawInstance& inst, const SweepConfig& cfg);

struct ExperimentConfig {
    std::string instance_path;
    std::string experiment;  // scenario-sweep | host-policy | frontier | example1-verify
    std::uint64_t iterations = 1'000'000;
    std::uint64_t seed = 1;
    int workers = 1;
    std::vector<int> pot_order;
    HostPolicy policy = HostPolicy::DrawAndRelabel;
    std::vector<int> scenarios;  // empty = all
    PsiMechanism psi_mechanism = PsiMechanism::Uniform;
    double alpha_step = 0.001;
    std::string out_dir = ".";
};

/// Runs one experiment and writes its report files under out_dir. Returns 0
/// on success. Identical config (seed and worker count included) yields
/// byte-identical outputs.
int run_experiment(const ExperimentConfig& config);

}  // namespace drawopt
