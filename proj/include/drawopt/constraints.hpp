#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "drawopt/model.hpp"

namespace drawopt {

inline constexpr int kMaxBounded = 8;

/// Confederation occupancy of one group while a draw is in progress.
struct GroupProfile {
    std::map<std::string, int> counts;   // confed -> assigned members
    std::vector<int> filled_slots;       // per pot, 0/1
};

/// Max-bound check on a single (possibly unfinished) group. Min bounds are
/// not checked here; they only bind complete groups.
bool group_within_max(const GroupProfile& profile, const ConstraintScenario& s,
                      int group_size);

/// Full validity of a complete assignment: every group within max bounds
/// and meeting min bounds.
bool assignment_valid(const DrawInstance& inst, const GroupAssignment& a,
                      const ConstraintScenario& s);

/// Search state over confederation classes. Teams with the same pot and the
/// same bounded-confederation signature are interchangeable, so only class
/// counts matter.
struct FeasState {
    std::vector<std::uint8_t> free_mask;                      // per group, bit(pot-1)
    std::vector<std::array<std::uint8_t, kMaxBounded>> counts; // per group, per bounded confed
    std::vector<std::uint8_t> remaining;                      // per class
};

/// Completion-feasibility (deadlock) detection.
///
/// Backtracking over class counts with memoization on a canonicalized state
/// (groups with identical residual descriptors are sorted to a canonical
/// order before keying). The memo table persists across queries, which makes
/// repeated calls from a sampler cheap.
class FeasibilityChecker {
public:
    FeasibilityChecker(const DrawInstance& inst, const ConstraintScenario& s);
    ~FeasibilityChecker();
    FeasibilityChecker(FeasibilityChecker&&) noexcept;
    FeasibilityChecker& operator=(FeasibilityChecker&&) noexcept;

    /// True iff the remaining (unplaced) teams can complete `partial` into a
    /// valid assignment.
    bool completion_exists(const GroupAssignment& partial) const;

    /// Same check on an explicit class-count state.
    bool feasible(FeasState& state) const;

    FeasState initial_state() const;
    FeasState state_of(const GroupAssignment& partial) const;

    bool has_bounds() const { return bounded_count_ > 0; }
    int bounded_count() const { return bounded_count_; }
    int class_count() const;
    int class_of_team(int team) const { return team_class_[team]; }
    std::uint8_t class_bits(int cls) const;   // bounded-confed bitmask
    int min_bound(int b) const;
    int max_bound(int b) const;

    /// Applies one placement to a state; does not check anything.
    void apply(FeasState& state, int cls, int group, int pot) const;
    void undo(FeasState& state, int cls, int group, int pot) const;

    /// Max-bound check for placing class `cls` into `group`.
    bool fits_max(const FeasState& state, int cls, int group) const;

    const DrawInstance& instance() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::vector<int> team_class_;
    int bounded_count_ = 0;
};

bool completion_exists(const DrawInstance& inst, const GroupAssignment& partial,
                       const ConstraintScenario& s);

/// Unordered cross-pot pairs (i < j) that can share a group in at least one
/// valid assignment.
std::vector<std::pair<int, int>> pair_support(const DrawInstance& inst,
                                              const ConstraintScenario& s);

}  // namespace drawopt
