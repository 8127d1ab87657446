#include "drawopt/samplers.hpp"

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace drawopt {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

inline std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_index) {
    std::uint64_t x = seed ^ (0x9E3779B97F4A7C15ULL * (stream_index + 1));
    for (auto& word : s_) word = splitmix64(x);
    if (!(s_[0] | s_[1] | s_[2] | s_[3])) s_[0] = 1;  // xoshiro forbids all-zero
}

std::uint64_t RandomStream::next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

std::uint32_t RandomStream::below(std::uint32_t n) {
    if (n <= 1) return 0;
    // 2^64 mod n; values at or above 2^64 - rem are rejected to kill bias.
    const std::uint64_t rem =
        (std::numeric_limits<std::uint64_t>::max() % n + 1) % n;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - rem;
    std::uint64_t r;
    do {
        r = next();
    } while (r > limit);
    return static_cast<std::uint32_t>(r % n);
}

GroupAssignment unconstrained_draw(const DrawInstance& inst, HostPolicy policy,
                                   RandomStream& rng) {
    GroupAssignment a(inst.pot_count, inst.group_count);
    auto host = inst.host_index();
    for (int p = 1; p <= inst.pot_count; ++p) {
        std::vector<int> groups(inst.group_count);
        std::iota(groups.begin(), groups.end(), 0);
        std::vector<int> members = inst.pot_members(p);
        if (policy == HostPolicy::PreAssign && host &&
            inst.teams[*host].pot == p) {
            a.place(p, 0, *host);
            std::erase(members, *host);
            groups.erase(groups.begin());
        }
        const int m = static_cast<int>(members.size());
        for (int i = m - 1; i >= 1; --i) {
            int j = static_cast<int>(rng.below(static_cast<std::uint32_t>(i + 1)));
            std::swap(groups[i], groups[j]);
        }
        for (int i = 0; i < m; ++i) a.place(p, groups[i], members[i]);
    }
    if (policy == HostPolicy::DrawAndRelabel && host)
        return relabel_host_to_first(a, *host, inst);
    return a;
}

std::uint32_t scenario_satisfaction_mask(const DrawInstance& inst,
                                         const GroupAssignment& a) {
    static const char* kCodes[5] = {"AFC", "CAF", "CONCACAF", "CONMEBOL",
                                    "UEFA"};
    // Satisfaction flags in scenario bit positions: bit 4 = AFC max 1, ...,
    // bit 0 = UEFA 1-or-2.
    std::uint32_t flags = 0x1f;
    for (int g = 0; g < inst.group_count && flags; ++g) {
        int counts[5] = {0, 0, 0, 0, 0};
        for (int p = 1; p <= inst.pot_count; ++p) {
            int t = a.team_at(p, g);
            if (t < 0) continue;
            for (int c = 0; c < 5; ++c)
                if (inst.teams[t].in_confed(kCodes[c])) ++counts[c];
        }
        for (int c = 0; c < 4; ++c)
            if (counts[c] > 1) flags &= ~(1u << (4 - c));
        if (counts[4] < 1 || counts[4] > 2) flags &= ~1u;
    }
    // Scenario k holds iff every constraint it activates is satisfied.
    std::uint32_t mask = 0;
    for (std::uint32_t k = 0; k < kScenarioCount; ++k)
        if ((k & ~flags) == 0) mask |= 1u << k;
    return mask;
}

GroupAssignment relabel_host_to_first(const GroupAssignment& a, int host,
                                      const DrawInstance& inst) {
    GroupAssignment out = a;
    int g = out.group_of(host, inst);
    if (g > 0) out.swap_groups(0, g);
    return out;
}

SkipSampler::SkipSampler(const DrawInstance& inst, const ConstraintScenario& s,
                         HostPolicy policy, std::vector<int> pot_order)
    : inst_(inst),
      checker_(inst, s),
      policy_(policy),
      pot_order_(std::move(pot_order)) {
    if (pot_order_.empty()) {
        pot_order_.resize(inst.pot_count);
        std::iota(pot_order_.begin(), pot_order_.end(), 1);
    }
    if (static_cast<int>(pot_order_.size()) != inst.pot_count)
        throw std::invalid_argument("pot order must list every pot once");
    std::vector<bool> seen(inst.pot_count + 1, false);
    for (int p : pot_order_) {
        if (p < 1 || p > inst.pot_count || seen[p])
            throw std::invalid_argument("pot order must list every pot once");
        seen[p] = true;
    }
    if (auto h = inst.host_index()) host_ = *h;
    state_ = checker_.initial_state();
    FeasState probe = state_;
    if (!checker_.feasible(probe))
        throw std::invalid_argument("constraints admit no valid assignment");
}

GroupAssignment SkipSampler::draw(RandomStream& rng) {
    GroupAssignment a(inst_.pot_count, inst_.group_count);
    draw(rng, a);
    return a;
}

void SkipSampler::draw(RandomStream& rng, GroupAssignment& out) {
    state_ = checker_.initial_state();
    for (int p = 1; p <= inst_.pot_count; ++p)
        for (int g = 0; g < inst_.group_count; ++g) out.clear(p, g);

    const bool preassigned = policy_ == HostPolicy::PreAssign && host_ >= 0;
    if (preassigned) {
        out.place(inst_.teams[host_].pot, 0, host_);
        checker_.apply(state_, checker_.class_of_team(host_), 0,
                       inst_.teams[host_].pot);
    }

    const bool bounded = checker_.has_bounds();
    for (int p : pot_order_) {
        urn_.clear();
        for (int t = 0; t < static_cast<int>(inst_.teams.size()); ++t)
            if (inst_.teams[t].pot == p && !(preassigned && t == host_))
                urn_.push_back(t);
        while (!urn_.empty()) {
            const int idx = static_cast<int>(
                rng.below(static_cast<std::uint32_t>(urn_.size())));
            const int team = urn_[idx];
            urn_[idx] = urn_.back();
            urn_.pop_back();

            const int cls = checker_.class_of_team(team);
            const std::uint8_t pot_bit = std::uint8_t(1u << (p - 1));
            bool placed = false, first_free = true;
            for (int g = 0; g < inst_.group_count; ++g) {
                if (!(state_.free_mask[g] & pot_bit)) continue;
                if (checker_.fits_max(state_, cls, g)) {
                    checker_.apply(state_, cls, g, p);
                    if (!bounded || checker_.feasible(state_)) {
                        out.place(p, g, team);
                        if (!first_free) ++skips_;
                        placed = true;
                        break;
                    }
                    checker_.undo(state_, cls, g, p);
                }
                first_free = false;
            }
            if (!placed)
                throw std::logic_error("skip draw reached an unplaceable team");
        }
    }
    if (policy_ == HostPolicy::DrawAndRelabel && host_ >= 0) {
        int g = out.group_of(host_, inst_);
        if (g > 0) out.swap_groups(0, g);
    }
}

GroupAssignment skip_draw(const DrawInstance& inst, const ConstraintScenario& s,
                          HostPolicy policy, RandomStream& rng,
                          std::vector<int> pot_order) {
    SkipSampler sampler(inst, s, policy, std::move(pot_order));
    return sampler.draw(rng);
}

}  // namespace drawopt
