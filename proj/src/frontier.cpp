#include "drawopt/frontier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace drawopt {

namespace {

constexpr double kEps = 1e-12;

// Each scenario's objective is a line a + b*alpha.
struct Line {
    double a = 0.0, b = 0.0;
    int scenario = 0;
};

Line line_of(Objective kind, const ScenarioMetrics& m) {
    double bias = kind == Objective::MeanBias ? 10.0 * m.delta_pp : m.omega_pp;
    return {m.psi, bias - m.psi, m.scenario};
}

bool tie_break_before(int a, int b) {
    int ca = std::popcount(static_cast<unsigned>(a));
    int cb = std::popcount(static_cast<unsigned>(b));
    if (ca != cb) return ca > cb;  // more active constraints first
    return a < b;
}

}  // namespace

double objective_value(Objective kind, const ScenarioMetrics& m, double alpha) {
    Line l = line_of(kind, m);
    return l.a + l.b * alpha;
}

int optimal_scenario(Objective kind, const std::vector<ScenarioMetrics>& table,
                     double alpha) {
    if (table.empty()) throw std::invalid_argument("empty metrics table");
    int best = -1;
    double best_value = 0.0;
    for (const auto& m : table) {
        double v = objective_value(kind, m, alpha);
        if (best < 0 || v < best_value - kEps) {
            best = m.scenario;
            best_value = v;
        } else if (v <= best_value + kEps && tie_break_before(m.scenario, best)) {
            best = m.scenario;
            best_value = std::min(best_value, v);
        }
    }
    return best;
}

std::vector<Breakpoint> breakpoints(Objective kind,
                                    const std::vector<ScenarioMetrics>& table) {
    if (table.empty()) throw std::invalid_argument("empty metrics table");
    std::vector<Line> lines;
    for (const auto& m : table) lines.push_back(line_of(kind, m));

    std::vector<Breakpoint> out;
    double alpha = 0.0;
    int guard = 0;
    while (alpha < 1.0 && ++guard <= 4 * static_cast<int>(lines.size())) {
        // Active line just after alpha: minimal value, then minimal slope,
        // then the scenario tie-break.
        const Line* cur = nullptr;
        double best_v = 0.0;
        for (const auto& l : lines) {
            double v = l.a + l.b * alpha;
            if (!cur || v < best_v - kEps) {
                cur = &l;
                best_v = v;
            } else if (v <= best_v + kEps) {
                if (l.b < cur->b - kEps ||
                    (l.b <= cur->b + kEps &&
                     tie_break_before(l.scenario, cur->scenario)))
                    cur = &l;
            }
        }
        // Earliest crossing where some steeper-decreasing line undercuts.
        double next = 1.0;
        for (const auto& l : lines) {
            if (l.b >= cur->b - kEps) continue;
            double x = (l.a - cur->a) / (cur->b - l.b);
            if (x > alpha + 1e-12 && x < next) next = x;
        }
        if (!out.empty() && out.back().scenario == cur->scenario)
            out.back().alpha_high = next;
        else
            out.push_back({alpha, next, cur->scenario});
        alpha = next;
    }
    std::erase_if(out, [](const Breakpoint& b) {
        return b.alpha_high - b.alpha_low < 1e-9;
    });
    if (!out.empty()) {
        out.front().alpha_low = 0.0;
        out.back().alpha_high = 1.0;
        for (std::size_t i = 1; i < out.size(); ++i)
            out[i].alpha_low = out[i - 1].alpha_high;
    }
    return out;
}

std::vector<int> pareto_front(Objective kind,
                              const std::vector<ScenarioMetrics>& table) {
    std::vector<int> out;
    for (const auto& b : breakpoints(kind, table)) out.push_back(b.scenario);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace drawopt
