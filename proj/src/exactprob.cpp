#include "drawopt/exactprob.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "drawopt/constraints.hpp"

namespace drawopt {

namespace {

// Confederation classes for exact computations: teams of one pot with the
// same bounded-confederation signature are interchangeable.
struct Classes {
    std::vector<std::string> bounded;
    std::vector<int> min, max;
    std::vector<int> pot;                // per class
    std::vector<std::uint8_t> bits;      // per class
    std::vector<int> count;              // per class
    std::vector<std::vector<int>> per_pot;  // pot-1 -> class ids

    Classes(const DrawInstance& inst, const ConstraintScenario& s) {
        for (const auto& [code, bound] : s.bounds) {
            bounded.push_back(code);
            min.push_back(bound.min_per_group);
            max.push_back(bound.max_per_group);
        }
        if (bounded.size() > 16)
            throw std::invalid_argument("too many bounded confederations");
        per_pot.resize(inst.pot_count);
        for (const Team& t : inst.teams) {
            std::uint8_t b = 0;
            for (std::size_t k = 0; k < bounded.size(); ++k)
                if (t.in_confed(bounded[k])) b |= std::uint8_t(1u << k);
            int cls = -1;
            for (std::size_t c = 0; c < pot.size(); ++c)
                if (pot[c] == t.pot && bits[c] == b) cls = static_cast<int>(c);
            if (cls < 0) {
                cls = static_cast<int>(pot.size());
                pot.push_back(t.pot);
                bits.push_back(b);
                count.push_back(0);
                per_pot[t.pot - 1].push_back(cls);
            }
            ++count[cls];
        }
    }

    bool group_ok(const std::vector<int>& confed_counts) const {
        for (std::size_t k = 0; k < bounded.size(); ++k)
            if (confed_counts[k] < min[k] || confed_counts[k] > max[k])
                return false;
        return true;
    }
};

template <class T>
T validity_impl(const DrawInstance& inst, const ConstraintScenario& s) {
    Classes cls(inst, s);
    const int pots = inst.pot_count;
    std::unordered_map<std::string, T> memo;

    std::vector<int> remaining = cls.count;
    std::function<T(int)> go = [&](int groups_left) -> T {
        if (groups_left == 0) return T(1);
        std::string key(remaining.size() + 1, '\0');
        for (std::size_t i = 0; i < remaining.size(); ++i)
            key[i] = static_cast<char>(remaining[i]);
        key.back() = static_cast<char>(groups_left);
        if (auto it = memo.find(key); it != memo.end()) return it->second;

        // Enumerate the class combination of the next group, one class per
        // pot, with hypergeometric weight remaining[c] / groups_left per pot.
        T total(0);
        std::vector<int> confed(cls.bounded.size(), 0);
        std::function<void(int, T)> pick = [&](int p, T weight) {
            if (p == pots) {
                if (!cls.group_ok(confed)) return;
                total += weight * go(groups_left - 1);
                return;
            }
            for (int c : cls.per_pot[p]) {
                if (!remaining[c]) continue;
                T w = weight * T(remaining[c]) / T(groups_left);
                --remaining[c];
                std::uint8_t b = cls.bits[c];
                for (int k = 0; b; ++k, b >>= 1)
                    if (b & 1) ++confed[k];
                pick(p + 1, w);
                b = cls.bits[c];
                for (int k = 0; b; ++k, b >>= 1)
                    if (b & 1) --confed[k];
                ++remaining[c];
            }
        };
        pick(0, T(1));
        memo.emplace(std::move(key), total);
        return total;
    };
    return go(inst.group_count);
}

double factorial_product(const DrawInstance& inst, bool drop_one_from_host_pot) {
    auto host = inst.host_index();
    double prod = 1.0;
    for (int p = 1; p <= inst.pot_count; ++p) {
        int m = static_cast<int>(inst.pot_members(p).size());
        if (drop_one_from_host_pot && host && inst.teams[*host].pot == p) --m;
        for (int k = 2; k <= m; ++k) prod *= k;
    }
    return prod;
}

}  // namespace

double validity_probability(const DrawInstance& inst,
                            const ConstraintScenario& s) {
    return validity_impl<double>(inst, s);
}

Rational validity_probability_exact(const DrawInstance& inst,
                                    const ConstraintScenario& s) {
    return validity_impl<Rational>(inst, s);
}

std::vector<GroupAssignment> enumerate_valid(const DrawInstance& inst,
                                             const ConstraintScenario& s) {
    if (factorial_product(inst, false) > 1e7)
        throw std::invalid_argument("instance too large to enumerate");
    std::vector<GroupAssignment> out;
    GroupAssignment a(inst.pot_count, inst.group_count);
    const int n = static_cast<int>(inst.teams.size());
    std::function<void(int)> place = [&](int t) {
        if (t == n) {
            if (assignment_valid(inst, a, s)) out.push_back(a);
            return;
        }
        int p = inst.teams[t].pot;
        for (int g = 0; g < inst.group_count; ++g) {
            if (a.team_at(p, g) >= 0) continue;
            a.place(p, g, t);
            place(t + 1);
            a.clear(p, g);
        }
    };
    place(0);
    return out;
}

std::string composition_key(const GroupAssignment& a, const DrawInstance& inst) {
    std::vector<std::string> groups;
    for (int g = 0; g < a.group_count(); ++g) {
        std::vector<std::string> names;
        for (int t : a.group_members(g)) names.push_back(inst.teams[t].name);
        std::sort(names.begin(), names.end());
        std::string part;
        for (const auto& name : names) {
            if (!part.empty()) part += '|';
            part += name;
        }
        groups.push_back(std::move(part));
    }
    std::sort(groups.begin(), groups.end());
    std::string key;
    for (const auto& part : groups) {
        if (!key.empty()) key += ';';
        key += part;
    }
    return key;
}

std::map<std::string, Rational> exact_skip_distribution(
    const DrawInstance& inst, const ConstraintScenario& s, HostPolicy policy,
    std::vector<int> pot_order) {
    if (pot_order.empty()) {
        pot_order.resize(inst.pot_count);
        std::iota(pot_order.begin(), pot_order.end(), 1);
    }
    const bool preassign = policy == HostPolicy::PreAssign;
    if (factorial_product(inst, preassign) > 1e7)
        throw std::invalid_argument("instance too large to enumerate");

    FeasibilityChecker checker(inst, s);
    auto host = inst.host_index();
    FeasState state = checker.initial_state();
    GroupAssignment a(inst.pot_count, inst.group_count);
    if (preassign && host) {
        a.place(inst.teams[*host].pot, 0, *host);
        checker.apply(state, checker.class_of_team(*host), 0,
                      inst.teams[*host].pot);
    }

    // Deterministic Skip placement: first group in label order with a free
    // slot that keeps max bounds and completion feasibility.
    auto place_team = [&](int team) -> int {
        int p = inst.teams[team].pot;
        int cls = checker.class_of_team(team);
        for (int g = 0; g < inst.group_count; ++g) {
            if (a.team_at(p, g) >= 0) continue;
            if (!checker.fits_max(state, cls, g)) continue;
            checker.apply(state, cls, g, p);
            if (!checker.has_bounds() || checker.feasible(state)) {
                a.place(p, g, team);
                return g;
            }
            checker.undo(state, cls, g, p);
        }
        return -1;
    };

    std::map<std::string, Rational> dist;
    std::vector<int> urn;
    std::function<void(std::size_t, Rational)> over_pots;
    std::function<void(std::size_t, Rational)> over_orders =
        [&](std::size_t pot_idx, Rational weight) {
            if (urn.empty()) {
                over_pots(pot_idx + 1, weight);
                return;
            }
            Rational w = weight / Rational(urn.size());
            std::vector<int> snapshot = urn;
            for (int team : snapshot) {
                urn = snapshot;
                urn.erase(std::find(urn.begin(), urn.end(), team));
                int g = place_team(team);
                if (g < 0) throw std::logic_error("unplaceable team");
                std::vector<int> saved = urn;
                over_orders(pot_idx, w);
                urn = saved;
                checker.undo(state, checker.class_of_team(team), g,
                             inst.teams[team].pot);
                a.clear(inst.teams[team].pot, g);
            }
            urn = snapshot;
        };
    over_pots = [&](std::size_t pot_idx, Rational weight) {
        if (pot_idx == pot_order.size()) {
            GroupAssignment finished = a;
            if (policy == HostPolicy::DrawAndRelabel && host)
                finished = relabel_host_to_first(finished, *host, inst);
            dist[composition_key(finished, inst)] += weight;
            return;
        }
        int p = pot_order[pot_idx];
        urn.clear();
        for (int t = 0; t < static_cast<int>(inst.teams.size()); ++t)
            if (inst.teams[t].pot == p && !(preassign && host && t == *host))
                urn.push_back(t);
        over_orders(pot_idx, weight);
    };
    over_pots(0, Rational(1));
    return dist;
}

std::vector<double> matchup_from_assignments(
    const std::vector<GroupAssignment>& assignments, const DrawInstance& inst) {
    const int n = static_cast<int>(inst.teams.size());
    std::vector<double> p(n * n, 0.0);
    for (const auto& a : assignments)
        for (int g = 0; g < a.group_count(); ++g) {
            auto members = a.group_members(g);
            for (std::size_t i = 0; i < members.size(); ++i)
                for (std::size_t j = i + 1; j < members.size(); ++j) {
                    p[members[i] * n + members[j]] += 1.0;
                    p[members[j] * n + members[i]] += 1.0;
                }
        }
    if (!assignments.empty())
        for (double& v : p) v /= static_cast<double>(assignments.size());
    return p;
}

std::vector<double> matchup_from_skip_distribution(
    const std::map<std::string, Rational>& dist, const DrawInstance& inst) {
    const int n = static_cast<int>(inst.teams.size());
    std::vector<double> p(n * n, 0.0);
    for (const auto& [key, prob] : dist) {
        double w = prob.convert_to<double>();
        std::stringstream groups(key);
        std::string part;
        while (std::getline(groups, part, ';')) {
            std::vector<int> members;
            std::stringstream names(part);
            std::string name;
            while (std::getline(names, name, '|'))
                members.push_back(inst.team_index(name));
            for (std::size_t i = 0; i < members.size(); ++i)
                for (std::size_t j = i + 1; j < members.size(); ++j) {
                    p[members[i] * n + members[j]] += w;
                    p[members[j] * n + members[i]] += w;
                }
        }
    }
    return p;
}

}  // namespace drawopt
