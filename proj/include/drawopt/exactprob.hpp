#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <string>
#include <vector>

#include "drawopt/model.hpp"
#include "drawopt/samplers.hpp"

namespace drawopt {

using Rational = boost::multiprecision::cpp_rational;

/// Exact probability that an unconstrained uniform draw satisfies the
/// scenario. Groups are filled one at a time, drawing one confederation
/// class from every pot with hypergeometric weights; states are memoized on
/// the remaining class-count multiset.
double validity_probability(const DrawInstance& inst, const ConstraintScenario& s);
Rational validity_probability_exact(const DrawInstance& inst,
                                    const ConstraintScenario& s);

/// All labeled valid assignments of a small instance (guard: at most 1e7
/// labeled outcomes). Throws std::invalid_argument beyond the guard.
std::vector<GroupAssignment> enumerate_valid(const DrawInstance& inst,
                                             const ConstraintScenario& s);

/// Unlabeled composition key: groups as sorted team-name lists, sorted.
std::string composition_key(const GroupAssignment& a, const DrawInstance& inst);

/// Exact output distribution of the Skip mechanism, by averaging its
/// deterministic placement rule over all equally likely within-pot draw
/// orders (guard: product of pot factorials at most 1e7). Keys are
/// composition_key strings.
std::map<std::string, Rational> exact_skip_distribution(
    const DrawInstance& inst, const ConstraintScenario& s, HostPolicy policy,
    std::vector<int> pot_order = {});

/// Matchup matrix (probability that i and j share a group) from an explicit
/// distribution over assignments; both used as exact oracles in the tests.
std::vector<double> matchup_from_assignments(
    const std::vector<GroupAssignment>& assignments, const DrawInstance& inst);
std::vector<double> matchup_from_skip_distribution(
    const std::map<std::string, Rational>& dist, const DrawInstance& inst);

}  // namespace drawopt
