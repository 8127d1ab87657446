#include "drawopt/constraints.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace drawopt {

bool group_within_max(const GroupProfile& profile, const ConstraintScenario& s,
                      int group_size) {
    for (const auto& [code, count] : profile.counts)
        if (count > s.bound_for(code, group_size).max_per_group) return false;
    return true;
}

bool assignment_valid(const DrawInstance& inst, const GroupAssignment& a,
                      const ConstraintScenario& s) {
    for (int g = 0; g < inst.group_count; ++g) {
        for (const auto& [code, bound] : s.bounds) {
            int count = 0;
            for (int p = 1; p <= inst.pot_count; ++p) {
                int t = a.team_at(p, g);
                if (t >= 0 && inst.teams[t].in_confed(code)) ++count;
            }
            if (count < bound.min_per_group || count > bound.max_per_group)
                return false;
        }
    }
    return true;
}

struct FeasibilityChecker::Impl {
    const DrawInstance& inst;
    ConstraintScenario scenario;

    std::vector<std::string> bounded;  // bounded confed codes, sorted
    std::array<int, kMaxBounded> min{};
    std::array<int, kMaxBounded> max{};

    // A class is a (pot, bounded-confed bitmask) pair; teams of one class are
    // interchangeable for feasibility.
    std::vector<int> class_pot;
    std::vector<std::uint8_t> class_bits;
    std::vector<int> class_initial;

    // Memoized feasibility of canonicalized states; persists across queries.
    mutable std::unordered_map<std::string, bool> memo;
    static constexpr std::size_t kMemoCap = 8u << 20;

    explicit Impl(const DrawInstance& i, const ConstraintScenario& s)
        : inst(i), scenario(s) {
        for (const auto& [code, bound] : s.bounds) {
            if (static_cast<int>(bounded.size()) == kMaxBounded)
                throw std::invalid_argument("too many bounded confederations");
            min[bounded.size()] = bound.min_per_group;
            max[bounded.size()] = bound.max_per_group;
            bounded.push_back(code);
        }
    }

    std::uint8_t team_bits(const Team& t) const {
        std::uint8_t bits = 0;
        for (int b = 0; b < static_cast<int>(bounded.size()); ++b)
            if (t.in_confed(bounded[b])) bits |= std::uint8_t(1u << b);
        return bits;
    }

    int find_class(int pot, std::uint8_t bits) const {
        for (int c = 0; c < static_cast<int>(class_pot.size()); ++c)
            if (class_pot[c] == pot && class_bits[c] == bits) return c;
        return -1;
    }

    bool feasible(FeasState& state) const;
    bool prune_bounds(const FeasState& state) const;
    std::string canonical_key(const FeasState& state) const;
    bool search(FeasState& state) const;
};

FeasibilityChecker::FeasibilityChecker(const DrawInstance& inst,
                                       const ConstraintScenario& s)
    : impl_(std::make_unique<Impl>(inst, s)) {
    team_class_.resize(inst.teams.size());
    bounded_count_ = static_cast<int>(impl_->bounded.size());
    for (int t = 0; t < static_cast<int>(inst.teams.size()); ++t) {
        int pot = inst.teams[t].pot;
        std::uint8_t bits = impl_->team_bits(inst.teams[t]);
        int c = impl_->find_class(pot, bits);
        if (c < 0) {
            c = static_cast<int>(impl_->class_pot.size());
            impl_->class_pot.push_back(pot);
            impl_->class_bits.push_back(bits);
            impl_->class_initial.push_back(0);
        }
        ++impl_->class_initial[c];
        team_class_[t] = c;
    }
}

FeasibilityChecker::~FeasibilityChecker() = default;
FeasibilityChecker::FeasibilityChecker(FeasibilityChecker&&) noexcept = default;
FeasibilityChecker& FeasibilityChecker::operator=(FeasibilityChecker&&) noexcept =
    default;

int FeasibilityChecker::class_count() const {
    return static_cast<int>(impl_->class_pot.size());
}

std::uint8_t FeasibilityChecker::class_bits(int cls) const {
    return impl_->class_bits[cls];
}

int FeasibilityChecker::min_bound(int b) const { return impl_->min[b]; }
int FeasibilityChecker::max_bound(int b) const { return impl_->max[b]; }

const DrawInstance& FeasibilityChecker::instance() const { return impl_->inst; }

FeasState FeasibilityChecker::initial_state() const {
    FeasState state;
    state.free_mask.assign(impl_->inst.group_count,
                           std::uint8_t((1u << impl_->inst.pot_count) - 1));
    state.counts.assign(impl_->inst.group_count, {});
    state.remaining.assign(impl_->class_initial.begin(),
                           impl_->class_initial.end());
    return state;
}

FeasState FeasibilityChecker::state_of(const GroupAssignment& partial) const {
    FeasState state = initial_state();
    for (int p = 1; p <= impl_->inst.pot_count; ++p)
        for (int g = 0; g < impl_->inst.group_count; ++g) {
            int t = partial.team_at(p, g);
            if (t >= 0) apply(state, team_class_[t], g, p);
        }
    return state;
}

void FeasibilityChecker::apply(FeasState& state, int cls, int group,
                               int pot) const {
    state.free_mask[group] &= std::uint8_t(~(1u << (pot - 1)));
    std::uint8_t bits = impl_->class_bits[cls];
    for (int b = 0; bits; ++b, bits >>= 1)
        if (bits & 1) ++state.counts[group][b];
    --state.remaining[cls];
}

void FeasibilityChecker::undo(FeasState& state, int cls, int group,
                              int pot) const {
    state.free_mask[group] |= std::uint8_t(1u << (pot - 1));
    std::uint8_t bits = impl_->class_bits[cls];
    for (int b = 0; bits; ++b, bits >>= 1)
        if (bits & 1) --state.counts[group][b];
    ++state.remaining[cls];
}

bool FeasibilityChecker::fits_max(const FeasState& state, int cls,
                                  int group) const {
    std::uint8_t bits = impl_->class_bits[cls];
    for (int b = 0; bits; ++b, bits >>= 1)
        if ((bits & 1) && state.counts[group][b] + 1 > impl_->max[b])
            return false;
    return true;
}

bool FeasibilityChecker::Impl::prune_bounds(const FeasState& state) const {
    const int nb = static_cast<int>(bounded.size());
    // Remaining carriers per bounded confed (classes may carry several bits).
    std::array<int, kMaxBounded> carriers{};
    for (int c = 0; c < static_cast<int>(class_pot.size()); ++c) {
        std::uint8_t bits = class_bits[c];
        for (int b = 0; bits; ++b, bits >>= 1)
            if (bits & 1) carriers[b] += state.remaining[c];
    }
    for (int b = 0; b < nb; ++b) {
        int deficit = 0, capacity = 0;
        for (std::size_t g = 0; g < state.free_mask.size(); ++g) {
            int free_slots = std::popcount(unsigned(state.free_mask[g]));
            int need = min[b] - state.counts[g][b];
            if (need > free_slots) return false;
            if (need > 0) deficit += need;
            capacity += std::min(free_slots, max[b] - state.counts[g][b]);
        }
        if (deficit > carriers[b]) return false;
        if (capacity < carriers[b]) return false;
    }
    return true;
}

std::string FeasibilityChecker::Impl::canonical_key(
    const FeasState& state) const {
    const int nb = static_cast<int>(bounded.size());
    // Pack each group descriptor (free mask + per-confed counts) into one
    // 64-bit word, sort the words, then append the per-class remainders.
    std::array<std::uint64_t, 64> desc{};
    const std::size_t groups = state.free_mask.size();
    for (std::size_t g = 0; g < groups; ++g) {
        std::uint64_t d = state.free_mask[g];
        for (int b = 0; b < nb; ++b) d = (d << 7) | state.counts[g][b];
        desc[g] = d;
    }
    std::sort(desc.begin(), desc.begin() + groups);
    std::string key;
    key.reserve(groups * 8 + state.remaining.size());
    for (std::size_t g = 0; g < groups; ++g)
        key.append(reinterpret_cast<const char*>(&desc[g]), 8);
    key.append(reinterpret_cast<const char*>(state.remaining.data()),
               state.remaining.size());
    return key;
}

bool FeasibilityChecker::Impl::search(FeasState& state) const {
    // Next slot: the most constrained group (fewest free slots), lowest free
    // pot within it.
    int best_g = -1, best_free = 1 << 10;
    for (std::size_t g = 0; g < state.free_mask.size(); ++g) {
        if (!state.free_mask[g]) continue;
        int free_slots = std::popcount(unsigned(state.free_mask[g]));
        if (free_slots < best_free) {
            best_free = free_slots;
            best_g = static_cast<int>(g);
        }
    }
    if (best_g < 0) {  // complete: every group must meet its min bounds
        for (std::size_t g = 0; g < state.free_mask.size(); ++g)
            for (int b = 0; b < static_cast<int>(bounded.size()); ++b)
                if (state.counts[g][b] < min[b]) return false;
        return true;
    }

    if (!prune_bounds(state)) return false;

    std::string key = canonical_key(state);
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    int pot = std::countr_zero(unsigned(state.free_mask[best_g])) + 1;
    bool ok = false;
    for (int c = 0; c < static_cast<int>(class_pot.size()) && !ok; ++c) {
        if (class_pot[c] != pot || !state.remaining[c]) continue;
        std::uint8_t bits = class_bits[c];
        bool fits = true;
        for (int b = 0; bits && fits; ++b, bits >>= 1)
            if ((bits & 1) && state.counts[best_g][b] + 1 > max[b]) fits = false;
        if (!fits) continue;
        state.free_mask[best_g] &= std::uint8_t(~(1u << (pot - 1)));
        bits = class_bits[c];
        for (int b = 0; bits; ++b, bits >>= 1)
            if (bits & 1) ++state.counts[best_g][b];
        --state.remaining[c];
        ok = search(state);
        ++state.remaining[c];
        bits = class_bits[c];
        for (int b = 0; bits; ++b, bits >>= 1)
            if (bits & 1) --state.counts[best_g][b];
        state.free_mask[best_g] |= std::uint8_t(1u << (pot - 1));
    }
    if (memo.size() >= kMemoCap) memo.clear();
    memo.emplace(std::move(key), ok);
    return ok;
}

bool FeasibilityChecker::Impl::feasible(FeasState& state) const {
    // A finished group below a min bound can never recover.
    for (std::size_t g = 0; g < state.free_mask.size(); ++g) {
        if (state.free_mask[g]) continue;
        for (int b = 0; b < static_cast<int>(bounded.size()); ++b)
            if (state.counts[g][b] < min[b]) return false;
    }
    return search(state);
}

bool FeasibilityChecker::feasible(FeasState& state) const {
    return impl_->feasible(state);
}

bool FeasibilityChecker::completion_exists(const GroupAssignment& partial) const {
    FeasState state = state_of(partial);
    // Reject partials that already break a max bound.
    for (std::size_t g = 0; g < state.free_mask.size(); ++g)
        for (int b = 0; b < bounded_count_; ++b)
            if (state.counts[g][b] > impl_->max[b]) return false;
    return impl_->feasible(state);
}

bool completion_exists(const DrawInstance& inst, const GroupAssignment& partial,
                       const ConstraintScenario& s) {
    return FeasibilityChecker(inst, s).completion_exists(partial);
}

std::vector<std::pair<int, int>> pair_support(const DrawInstance& inst,
                                              const ConstraintScenario& s) {
    FeasibilityChecker checker(inst, s);
    std::vector<std::pair<int, int>> out;
    const int n = static_cast<int>(inst.teams.size());
    GroupAssignment partial(inst.pot_count, inst.group_count);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (inst.teams[i].pot == inst.teams[j].pot) continue;
            // Group labels are symmetric for validity, so co-occurrence in
            // group 0 is representative.
            partial.place(inst.teams[i].pot, 0, i);
            partial.place(inst.teams[j].pot, 0, j);
            if (checker.completion_exists(partial)) out.emplace_back(i, j);
            partial.clear(inst.teams[i].pot, 0);
            partial.clear(inst.teams[j].pot, 0);
        }
    return out;
}

}  // namespace drawopt
