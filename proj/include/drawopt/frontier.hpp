#pragma once

#include <vector>

#include "drawopt/metrics.hpp"

namespace drawopt {

enum class Objective {
    MeanBias,  // alpha * 10 * delta + (1 - alpha) * psi
    MaxBias,   // alpha * omega + (1 - alpha) * psi
};

double objective_value(Objective kind, const ScenarioMetrics& m, double alpha);

/// Argmin over the table at a fixed alpha; ties broken toward the scenario
/// with more active constraints, then the lower index.
int optimal_scenario(Objective kind, const std::vector<ScenarioMetrics>& table,
                     double alpha);

struct Breakpoint {
    double alpha_low = 0.0;
    double alpha_high = 0.0;
    int scenario = 0;
};

/// Maximal intervals of [0,1] with constant argmin, computed analytically as
/// the lower envelope of the 32 objective lines; intervals narrower than
/// 1e-9 are dropped. Ordered by alpha_low.
std::vector<Breakpoint> breakpoints(Objective kind,
                                    const std::vector<ScenarioMetrics>& table);

/// Scenarios optimal for some alpha in [0,1] (the Pareto efficient set),
/// sorted ascending.
std::vector<int> pareto_front(Objective kind,
                              const std::vector<ScenarioMetrics>& table);

}  // namespace drawopt
