#pragma once

#include <cstdint>
#include <vector>

#include "drawopt/constraints.hpp"
#include "drawopt/model.hpp"

namespace drawopt {

enum class HostPolicy {
    PreAssign,       // host fixed to the first group before drawing
    DrawAndRelabel,  // host drawn normally; its group relabelled first afterwards
};

/// Deterministic random stream: identical (seed, stream_index) reproduce
/// identical draw sequences on every platform (xoshiro256**, splitmix64
/// initialization, rejection-based bounded sampling).
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream_index = 0);

    std::uint64_t next();
    /// Uniform integer in [0, n), n >= 1, without modulo bias.
    std::uint32_t below(std::uint32_t n);

private:
    std::uint64_t s_[4];
};

/// Independent uniform permutation of each pot onto the group labels. Every
/// complete assignment is equally likely (given the host policy).
GroupAssignment unconstrained_draw(const DrawInstance& inst, HostPolicy policy,
                                   RandomStream& rng);

/// Bit k is set iff the assignment satisfies canonical scenario k.
std::uint32_t scenario_satisfaction_mask(const DrawInstance& inst,
                                         const GroupAssignment& a);

/// Swaps the labels of the host's group and the first group.
GroupAssignment relabel_host_to_first(const GroupAssignment& a, int host,
                                      const DrawInstance& inst);

/// The Skip mechanism: teams are drawn uniformly without replacement from
/// each pot in `pot_order`; each drawn team goes to the first group (in
/// label order) with a free slot that keeps the max bounds satisfied and
/// leaves at least one valid completion.
class SkipSampler {
public:
    SkipSampler(const DrawInstance& inst, const ConstraintScenario& s,
                HostPolicy policy, std::vector<int> pot_order = {});

    GroupAssignment draw(RandomStream& rng);
    /// Allocation-free variant for hot loops; `out` must be sized for the
    /// instance (its contents are overwritten).
    void draw(RandomStream& rng, GroupAssignment& out);

    /// Times a drawn team was not placed in its first available group.
    std::uint64_t skip_count() const { return skips_; }

private:
    const DrawInstance& inst_;
    FeasibilityChecker checker_;
    HostPolicy policy_;
    std::vector<int> pot_order_;
    int host_ = -1;
    std::uint64_t skips_ = 0;
    // scratch, reused across draws
    std::vector<int> urn_;
    FeasState state_;
};

GroupAssignment skip_draw(const DrawInstance& inst, const ConstraintScenario& s,
                          HostPolicy policy, RandomStream& rng,
                          std::vector<int> pot_order = {});

}  // namespace drawopt
