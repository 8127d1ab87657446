#include "drawopt/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace drawopt {

double win_expectancy(double rating_i, double rating_j) {
    return 1.0 / (1.0 + std::pow(10.0, -(rating_i - rating_j) / 400.0));
}

PlayoffBracket PlayoffBracket::entrant(std::string name, std::string confed,
                                       double rating) {
    PlayoffBracket b;
    b.name = std::move(name);
    b.confed = std::move(confed);
    b.rating = rating;
    return b;
}

PlayoffBracket PlayoffBracket::match(PlayoffBracket a, PlayoffBracket b) {
    PlayoffBracket m;
    m.name = a.name + "/" + b.name;
    m.entrants.push_back(std::move(a));
    m.entrants.push_back(std::move(b));
    return m;
}

namespace {

struct LeafProb {
    const PlayoffBracket* leaf;
    double prob;
};

// Probability of each leaf winning the subtree.
std::vector<LeafProb> winners(const PlayoffBracket& b) {
    if (b.entrants.empty()) return {{&b, 1.0}};
    if (b.entrants.size() != 2)
        throw std::invalid_argument("bracket nodes must have two entrants");
    auto left = winners(b.entrants[0]);
    auto right = winners(b.entrants[1]);
    std::vector<LeafProb> out;
    for (const auto& a : left) {
        double p = 0.0;
        for (const auto& o : right)
            p += o.prob * win_expectancy(a.leaf->rating, o.leaf->rating);
        out.push_back({a.leaf, a.prob * p});
    }
    for (const auto& a : right) {
        double p = 0.0;
        for (const auto& o : left)
            p += o.prob * win_expectancy(a.leaf->rating, o.leaf->rating);
        out.push_back({a.leaf, a.prob * p});
    }
    return out;
}

}  // namespace

std::map<std::string, double> placeholder_distribution(
    const PlayoffBracket& bracket) {
    std::map<std::string, double> dist;
    for (const auto& w : winners(bracket)) dist[w.leaf->confed] += w.prob;
    return dist;
}

double intra_confed_weight(const GroupAssignment& a, const DrawInstance& inst) {
    double total = 0.0;
    for (int g = 0; g < a.group_count(); ++g) {
        auto members = a.group_members(g);
        for (std::size_t i = 0; i < members.size(); ++i)
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                if (inst.psi_excluded(members[i], members[j])) continue;
                const auto& di = inst.teams[members[i]].confed_distribution;
                const auto& dj = inst.teams[members[j]].confed_distribution;
                for (const auto& [code, pi] : di) {
                    auto it = dj.find(code);
                    if (it != dj.end()) total += pi * it->second;
                }
            }
    }
    return total;
}

PairWeights::PairWeights(const DrawInstance& inst)
    : n_(static_cast<int>(inst.teams.size())), w_(n_ * n_, 0.0) {
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            if (i == j || inst.psi_excluded(i, j)) continue;
            const auto& di = inst.teams[i].confed_distribution;
            const auto& dj = inst.teams[j].confed_distribution;
            for (const auto& [code, pi] : di) {
                auto it = dj.find(code);
                if (it != dj.end()) w_[i * n_ + j] += pi * it->second;
            }
        }
}

MatchupAccumulator::MatchupAccumulator(const DrawInstance& inst)
    : inst_(&inst),
      owned_weights_(std::make_shared<PairWeights>(inst)),
      n_(static_cast<int>(inst.teams.size())),
      counts_(static_cast<std::size_t>(n_) * n_, 0) {
    weights_ = owned_weights_.get();
}

void MatchupAccumulator::record(const GroupAssignment& a) {
    ++draws_;
    psi_sum_ += intra_confed_weight(a, *inst_);
    for (int g = 0; g < a.group_count(); ++g) {
        auto members = a.group_members(g);
        for (std::size_t i = 0; i < members.size(); ++i)
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                int lo = std::min(members[i], members[j]);
                int hi = std::max(members[i], members[j]);
                ++counts_[lo * n_ + hi];
            }
    }
}

void MatchupAccumulator::record_groups(const std::vector<int>* groups,
                                       int group_count, double weight) {
    ++draws_;
    psi_sum_ += weight;
    for (int g = 0; g < group_count; ++g) {
        const std::vector<int>& m = groups[g];
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = i + 1; j < m.size(); ++j) {
                int lo = std::min(m[i], m[j]);
                int hi = std::max(m[i], m[j]);
                ++counts_[lo * n_ + hi];
            }
    }
}

void MatchupAccumulator::merge(const MatchupAccumulator& other) {
    if (n_ != other.n_)
        throw std::invalid_argument("cannot merge accumulators of different instances");
    draws_ += other.draws_;
    psi_sum_ += other.psi_sum_;
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

std::uint64_t MatchupAccumulator::pair_count(int i, int j) const {
    return counts_[std::min(i, j) * n_ + std::max(i, j)];
}

std::vector<double> MatchupAccumulator::matchup_matrix() const {
    std::vector<double> p(static_cast<std::size_t>(n_) * n_, 0.0);
    if (!draws_) return p;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) {
            double v = static_cast<double>(counts_[i * n_ + j]) /
                       static_cast<double>(draws_);
            p[i * n_ + j] = v;
            p[j * n_ + i] = v;
        }
    return p;
}

double mean_abs_bias(const std::vector<double>& p_uniform,
                     const std::vector<double>& p_skip, const PairList& support,
                     int team_count) {
    if (support.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& [i, j] : support)
        sum += std::abs(p_uniform[i * team_count + j] -
                        p_skip[i * team_count + j]);
    return 100.0 * sum / static_cast<double>(support.size());
}

double max_abs_bias(const std::vector<double>& p_uniform,
                    const std::vector<double>& p_skip, const PairList& support,
                    int team_count) {
    double worst = 0.0;
    for (const auto& [i, j] : support)
        worst = std::max(worst, std::abs(p_uniform[i * team_count + j] -
                                         p_skip[i * team_count + j]));
    return 100.0 * worst;
}

double psi(const MatchupAccumulator& acc) {
    if (!acc.draw_count()) return 0.0;
    return acc.psi_sum() / static_cast<double>(acc.draw_count());
}

}  // namespace drawopt
