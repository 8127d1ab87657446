#include <doctest.h>

#include "drawopt/exactprob.hpp"
#include "drawopt/model.hpp"

using namespace drawopt;

namespace {

DrawInstance wc2018() { return load_instance(DRAWOPT_DATA_DIR "/wc2018.json"); }

ConstraintScenario uefa_bound(int lo, int hi) {
    ConstraintScenario s;
    s.bounds["UEFA"] = Bound{lo, hi};
    return s;
}

}  // namespace

TEST_CASE("reference-instance validity is 3/4") {
    DrawInstance inst = make_example_instance();
    ConstraintScenario s = example_constraint();
    CHECK(validity_probability(inst, s) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(validity_probability_exact(inst, s) == Rational(3, 4));
    // Cross-check against full enumeration: 2 of the 8 labeled assignments
    // put all three restricted teams together.
    CHECK(enumerate_valid(inst, s).size() == 6);
    CHECK(enumerate_valid(inst, scenario_from_index(0)).size() == 8);
}

TEST_CASE("2018 exact validity closed forms") {
    DrawInstance inst = wc2018();
    CHECK(validity_probability_exact(inst, scenario_from_index(1)) ==
          Rational(95, 1568));
    CHECK(validity_probability_exact(inst, uefa_bound(1, 4)) ==
          Rational(1601, 3136));
    CHECK(validity_probability_exact(inst, uefa_bound(0, 2)) ==
          Rational(209, 3136));
    // The two one-sided bounds conjoin to the two-sided one.
    CHECK(validity_probability_exact(inst, uefa_bound(1, 2)) ==
          Rational(95, 1568));
}

TEST_CASE("double and rational validity agree") {
    DrawInstance inst = wc2018();
    for (int k : {0, 1, 7, 18, 31}) {
        double d = validity_probability(inst, scenario_from_index(k));
        double r = validity_probability_exact(inst, scenario_from_index(k))
                       .convert_to<double>();
        CHECK(d == doctest::Approx(r).epsilon(1e-12));
    }
}

TEST_CASE("validity is monotone in the constraint set") {
    DrawInstance inst = wc2018();
    std::array<double, kScenarioCount> v{};
    for (int k = 0; k < kScenarioCount; ++k)
        v[k] = validity_probability(inst, scenario_from_index(k));
    CHECK(v[0] == doctest::Approx(1.0).epsilon(1e-12));
    for (int k = 0; k < kScenarioCount; ++k)
        for (int b = 0; b < 5; ++b)
            CHECK(v[k | (1 << b)] <= v[k] + 1e-12);
}

TEST_CASE("exact uniform matchup on the reference instance") {
    DrawInstance inst = make_example_instance();
    auto valid = enumerate_valid(inst, example_constraint());
    auto p = matchup_from_assignments(valid, inst);
    const int n = static_cast<int>(inst.teams.size());
    int i = inst.team_index("1"), j = inst.team_index("4");
    CHECK(p[i * n + j] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    // Same-pot teams never meet; rows sum to pot_count - 1.
    CHECK(p[inst.team_index("1") * n + inst.team_index("2")] == 0.0);
    for (int t = 0; t < n; ++t) {
        double row = 0.0;
        for (int u = 0; u < n; ++u) row += p[t * n + u];
        CHECK(row == doctest::Approx(inst.pot_count - 1).epsilon(1e-12));
    }
}

TEST_CASE("exact skip distribution on the reference instance") {
    DrawInstance inst = make_example_instance();
    auto dist = exact_skip_distribution(inst, example_constraint(),
                                        HostPolicy::DrawAndRelabel);
    Rational total(0);
    for (const auto& [key, prob] : dist) total += prob;
    CHECK(total == Rational(1));

    auto p = matchup_from_skip_distribution(dist, inst);
    const int n = static_cast<int>(inst.teams.size());
    CHECK(p[inst.team_index("1") * n + inst.team_index("4")] ==
          doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("skip distribution is sensitive to the pot order") {
    DrawInstance inst = make_example_instance();
    auto forward = exact_skip_distribution(inst, example_constraint(),
                                           HostPolicy::DrawAndRelabel, {1, 2, 3});
    auto backward = exact_skip_distribution(inst, example_constraint(),
                                            HostPolicy::DrawAndRelabel, {3, 2, 1});
    auto pf = matchup_from_skip_distribution(forward, inst);
    auto pb = matchup_from_skip_distribution(backward, inst);
    const int n = static_cast<int>(inst.teams.size());
    // Both are proper distributions; the reversed order reweights outcomes.
    double diff = 0.0;
    for (int i = 0; i < n * n; ++i) diff += std::abs(pf[i] - pb[i]);
    CHECK(diff > 1e-6);
}

TEST_CASE("composition keys are label-invariant") {
    DrawInstance inst = make_example_instance();
    auto valid = enumerate_valid(inst, example_constraint());
    REQUIRE(!valid.empty());
    for (auto a : valid) {
        std::string before = composition_key(a, inst);
        a.swap_groups(0, 1);
        CHECK(composition_key(a, inst) == before);
    }
}

TEST_CASE("enumeration guard rejects large instances") {
    DrawInstance inst = wc2018();
    CHECK_THROWS(enumerate_valid(inst, scenario_from_index(0)));
    CHECK_THROWS(exact_skip_distribution(inst, scenario_from_index(0),
                                         HostPolicy::DrawAndRelabel));
}
