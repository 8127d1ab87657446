#include "drawopt/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace drawopt {

bool Team::in_confed(const std::string& code) const {
    return std::find(constraint_confeds.begin(), constraint_confeds.end(),
                     code) != constraint_confeds.end();
}

std::optional<int> DrawInstance::host_index() const {
    for (int i = 0; i < static_cast<int>(teams.size()); ++i)
        if (teams[i].is_host) return i;
    return std::nullopt;
}

std::vector<int> DrawInstance::pot_members(int pot) const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(teams.size()); ++i)
        if (teams[i].pot == pot) out.push_back(i);
    return out;
}

int DrawInstance::team_index(const std::string& name) const {
    for (int i = 0; i < static_cast<int>(teams.size()); ++i)
        if (teams[i].name == name) return i;
    return -1;
}

bool DrawInstance::psi_excluded(int i, int j) const {
    for (const auto& [a, b] : psi_excluded_pairs)
        if ((a == i && b == j) || (a == j && b == i)) return true;
    return false;
}

std::vector<int> DrawInstance::confed_pot_counts(const std::string& code) const {
    std::vector<int> counts(pot_count, 0);
    for (const Team& t : teams)
        if (t.in_confed(code)) ++counts[t.pot - 1];
    return counts;
}

Bound ConstraintScenario::bound_for(const std::string& code,
                                    int group_size) const {
    auto it = bounds.find(code);
    if (it != bounds.end()) return it->second;
    return Bound{0, group_size};
}

namespace {

// Canonical constraint letters, in bit order from the most significant of
// the five scenario bits down to the least significant.
struct CanonicalBound {
    const char* letter;
    const char* confed;
    Bound bound;
};

constexpr int kCanonicalCount = 5;

const CanonicalBound kCanonical[kCanonicalCount] = {
    {"A", "AFC", {0, 1}},
    {"B", "CAF", {0, 1}},
    {"C", "CONCACAF", {0, 1}},
    {"D", "CONMEBOL", {0, 1}},
    {"E", "UEFA", {1, 2}},
};

}  // namespace

ConstraintScenario scenario_from_index(int k) {
    ConstraintScenario s;
    for (int b = 0; b < kCanonicalCount; ++b)
        if (k & (1 << (kCanonicalCount - 1 - b)))
            s.bounds[kCanonical[b].confed] = kCanonical[b].bound;
    return s;
}

std::optional<int> index_of_scenario(const ConstraintScenario& s) {
    int k = 0;
    std::size_t matched = 0;
    for (int b = 0; b < kCanonicalCount; ++b) {
        auto it = s.bounds.find(kCanonical[b].confed);
        if (it == s.bounds.end()) continue;
        if (!(it->second == kCanonical[b].bound)) return std::nullopt;
        k |= 1 << (kCanonicalCount - 1 - b);
        ++matched;
    }
    if (matched != s.bounds.size()) return std::nullopt;
    return k;
}

std::string scenario_name(int k) {
    std::string out;
    for (int b = 0; b < kCanonicalCount; ++b) {
        if (!(k & (1 << (kCanonicalCount - 1 - b)))) continue;
        if (!out.empty()) out += ',';
        out += kCanonical[b].letter;
    }
    return out.empty() ? "none" : out;
}

std::vector<std::string> validate_instance(const DrawInstance& inst) {
    std::vector<std::string> errors;
    auto fail = [&](const std::string& msg) { errors.push_back(msg); };

    if (inst.group_count < 1) fail("group_count must be positive");
    if (inst.pot_count < 1) fail("pot_count must be positive");
    if (static_cast<int>(inst.group_labels.size()) != inst.group_count)
        fail("group_labels size must equal group_count");
    for (std::size_t i = 1; i < inst.group_labels.size(); ++i)
        if (inst.group_labels[i] <= inst.group_labels[i - 1])
            fail("group_labels must be strictly increasing");

    if (static_cast<int>(inst.teams.size()) !=
        inst.group_count * inst.pot_count)
        fail("team count must equal group_count * pot_count");
    for (int p = 1; p <= inst.pot_count; ++p)
        if (static_cast<int>(inst.pot_members(p).size()) != inst.group_count)
            fail("pot " + std::to_string(p) + " must hold exactly one team per group");

    int hosts = 0;
    for (const Team& t : inst.teams) {
        if (t.is_host) ++hosts;
        if (t.pot < 1 || t.pot > inst.pot_count)
            fail("team " + t.name + " has pot outside [1, pot_count]");
        if (t.constraint_confeds.empty())
            fail("team " + t.name + " has no constraint confederation");
        double total = 0.0;
        for (const auto& [code, prob] : t.confed_distribution) {
            if (prob < 0.0) fail("team " + t.name + " has a negative probability");
            if (!t.in_confed(code))
                fail("team " + t.name + " distributes mass to an unlisted confederation");
            total += prob;
        }
        if (std::abs(total - 1.0) > 1e-9)
            fail("team " + t.name + " confederation probabilities must sum to 1");
    }
    if (hosts > 1) fail("at most one team may be the host");

    std::vector<std::string> seen;
    for (const Team& t : inst.teams) {
        if (std::find(seen.begin(), seen.end(), t.name) != seen.end())
            fail("duplicate team name " + t.name);
        seen.push_back(t.name);
    }

    const int n = static_cast<int>(inst.teams.size());
    for (const auto& [a, b] : inst.psi_excluded_pairs) {
        if (a < 0 || a >= n || b < 0 || b >= n)
            fail("psi-excluded pair references an unknown team");
        else if (a == b)
            fail("psi-excluded pair must name two distinct teams");
    }
    return errors;
}

GroupAssignment::GroupAssignment(int pot_count, int group_count)
    : slots_(pot_count, std::vector<int>(group_count, -1)) {}

void GroupAssignment::place(int pot, int group, int team) {
    slots_[pot - 1][group] = team;
}

void GroupAssignment::clear(int pot, int group) { slots_[pot - 1][group] = -1; }

bool GroupAssignment::complete() const {
    for (const auto& row : slots_)
        for (int t : row)
            if (t < 0) return false;
    return true;
}

int GroupAssignment::group_count() const {
    return slots_.empty() ? 0 : static_cast<int>(slots_[0].size());
}

int GroupAssignment::group_of(int team, const DrawInstance& inst) const {
    int pot = inst.teams[team].pot;
    const auto& row = slots_[pot - 1];
    for (int g = 0; g < static_cast<int>(row.size()); ++g)
        if (row[g] == team) return g;
    return -1;
}

std::vector<int> GroupAssignment::group_members(int group) const {
    std::vector<int> out;
    for (const auto& row : slots_)
        if (row[group] >= 0) out.push_back(row[group]);
    return out;
}

void GroupAssignment::swap_groups(int a, int b) {
    for (auto& row : slots_) std::swap(row[a], row[b]);
}

DrawInstance make_example_instance() {
    DrawInstance inst;
    inst.name = "example";
    inst.group_count = 2;
    inst.pot_count = 3;
    inst.group_labels = {"A", "B"};
    for (int i = 1; i <= 6; ++i) {
        Team t;
        t.name = std::to_string(i);
        t.pot = (i + 1) / 2;
        // Even-numbered teams form the restricted set.
        t.constraint_confeds = {i % 2 == 0 ? "X" : "Y"};
        t.confed_distribution = {{t.constraint_confeds[0], 1.0}};
        inst.teams.push_back(std::move(t));
    }
    return inst;
}

ConstraintScenario example_constraint() {
    ConstraintScenario s;
    s.bounds["X"] = Bound{0, 2};
    return s;
}

}  // namespace drawopt
