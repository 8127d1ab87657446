#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "drawopt/model.hpp"

namespace drawopt {

/// World Football Elo Ratings win expectancy, 1 / (1 + 10^(-(ri-rj)/400)).
double win_expectancy(double rating_i, double rating_j);

/// Single-elimination play-off bracket; a leaf is an entrant, an inner node
/// a match between the winners of its children.
struct PlayoffBracket {
    std::string name;
    std::string confed;
    double rating = 0.0;
    std::vector<PlayoffBracket> entrants;  // empty for a leaf, else exactly 2

    static PlayoffBracket entrant(std::string name, std::string confed, double rating);
    static PlayoffBracket match(PlayoffBracket a, PlayoffBracket b);
};

/// Probability that the bracket winner belongs to each confederation,
/// propagating win expectancies through the rounds. Also returns the
/// per-confederation expected rating conditional on winning via the second
/// overload used internally.
std::map<std::string, double> placeholder_distribution(const PlayoffBracket& bracket);

/// Expected number of same-confederation matches in a complete assignment:
/// sum over groups and unordered pairs of sum_c d_i(c) * d_j(c).
double intra_confed_weight(const GroupAssignment& a, const DrawInstance& inst);

/// Precomputed pairwise weights for the accumulator hot path.
class PairWeights {
public:
    explicit PairWeights(const DrawInstance& inst);
    double weight(int i, int j) const { return w_[i * n_ + j]; }
    int team_count() const { return n_; }

private:
    int n_;
    std::vector<double> w_;
};

/// Pair co-occurrence counts plus the running intra-confederation weight
/// sum over recorded draws. Single writer; parallel reduction via merge.
class MatchupAccumulator {
public:
    MatchupAccumulator() = default;
    explicit MatchupAccumulator(const DrawInstance& inst);

    void record(const GroupAssignment& a);
    /// Hot path: the caller has already flattened the draw into group member
    /// lists and computed its weight once.
    void record_groups(const std::vector<int>* groups, int group_count,
                       double weight);

    void merge(const MatchupAccumulator& other);

    std::uint64_t draw_count() const { return draws_; }
    std::uint64_t pair_count(int i, int j) const;
    double psi_sum() const { return psi_sum_; }

    /// Matchup probability matrix p_ij (row-major, n x n, symmetric).
    std::vector<double> matchup_matrix() const;

private:
    const DrawInstance* inst_ = nullptr;
    const PairWeights* weights_ = nullptr;  // optional fast path
    std::shared_ptr<PairWeights> owned_weights_;
    int n_ = 0;
    std::uint64_t draws_ = 0;
    double psi_sum_ = 0.0;
    std::vector<std::uint64_t> counts_;
};

using PairList = std::vector<std::pair<int, int>>;

/// Mean absolute bias over the support pairs, percentage points.
double mean_abs_bias(const std::vector<double>& p_uniform,
                     const std::vector<double>& p_skip, const PairList& support,
                     int team_count);

/// Maximum absolute bias over the support pairs, percentage points.
double max_abs_bias(const std::vector<double>& p_uniform,
                    const std::vector<double>& p_skip, const PairList& support,
                    int team_count);

double psi(const MatchupAccumulator& acc);

/// Per-scenario summary feeding the frontier computations.
struct ScenarioMetrics {
    int scenario = 0;
    double delta_pp = 0.0;   // mean absolute bias
    double omega_pp = 0.0;   // maximum absolute bias
    double psi = 0.0;        // expected intra-confederation matches
    double validity = 0.0;   // proportion of valid unconstrained draws
    std::uint64_t uniform_samples = 0;
    std::uint64_t skip_samples = 0;
};

}  // namespace drawopt
