#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace drawopt {

/// A national team or a play-off placeholder.
///
/// Placeholders are ordinary teams whose `constraint_confeds` lists every
/// confederation a potential winner belongs to, and whose
/// `confed_distribution` gives the probability of each outcome. A settled
/// team has a single constraint confederation with probability one.
struct Team {
    std::string name;
    int pot = 1;  // 1-based
    std::vector<std::string> constraint_confeds;
    std::map<std::string, double> confed_distribution;
    bool is_host = false;

    bool in_confed(const std::string& code) const;
};

struct DrawInstance {
    std::string name;
    int group_count = 0;
    int pot_count = 0;
    std::vector<std::string> group_labels;  // strictly increasing
    std::vector<Team> teams;

    /// Team-index pairs whose shared-confederation weight is left out of the
    /// attractiveness score even when they land in the same group.
    std::vector<std::pair<int, int>> psi_excluded_pairs;

    bool psi_excluded(int i, int j) const;

    std::optional<int> host_index() const;
    std::vector<int> pot_members(int pot) const;  // team indices, pot 1-based
    int team_index(const std::string& name) const;

    /// Number of teams per pot whose constraint set contains `code`.
    std::vector<int> confed_pot_counts(const std::string& code) const;
};

/// Per-confederation group bounds; confederations absent from the map are
/// unbounded.
struct Bound {
    int min_per_group = 0;
    int max_per_group = 0;
    bool operator==(const Bound&) const = default;
};

struct ConstraintScenario {
    std::map<std::string, Bound> bounds;

    Bound bound_for(const std::string& code, int group_size) const;
    bool operator==(const ConstraintScenario&) const = default;
};

inline constexpr int kScenarioCount = 32;

/// Decodes one of the 32 canonical constraint sets. Bits 4..0 of `k`
/// activate the max-1 bounds for AFC, CAF, CONCACAF, CONMEBOL and the
/// 1-or-2 bound for UEFA, respectively.
ConstraintScenario scenario_from_index(int k);

/// Inverse of scenario_from_index; nullopt for non-canonical scenarios.
std::optional<int> index_of_scenario(const ConstraintScenario& s);

/// Short human-readable constraint list, e.g. "A,B,E" or "none".
std::string scenario_name(int k);

/// Returns violated invariants; empty means the instance is valid.
std::vector<std::string> validate_instance(const DrawInstance& inst);

/// A complete or partial mapping of teams to (pot, group) slots.
class GroupAssignment {
public:
    GroupAssignment() = default;
    GroupAssignment(int pot_count, int group_count);

    int team_at(int pot, int group) const { return slots_[pot - 1][group]; }
    void place(int pot, int group, int team);
    void clear(int pot, int group);
    bool complete() const;
    int pot_count() const { return static_cast<int>(slots_.size()); }
    int group_count() const;

    /// Group index of a team, or -1 if unplaced.
    int group_of(int team, const DrawInstance& inst) const;

    /// Teams of one group, ordered by pot.
    std::vector<int> group_members(int group) const;

    /// Swaps the columns of two group labels across all pots.
    void swap_groups(int a, int b);

    bool operator==(const GroupAssignment&) const = default;

private:
    std::vector<std::vector<int>> slots_;  // [pot-1][group] -> team or -1
};

DrawInstance load_instance(const std::string& path);

/// Six teams, three pots of two, two groups, "at most two of {2,4,6}
/// together"; used throughout the tests as a tractable reference case.
DrawInstance make_example_instance();
ConstraintScenario example_constraint();

}  // namespace drawopt
