#include "carnot/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace carnot {

namespace {

double eval_margin(const std::vector<FitConstraint>& cs, double c, double d) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& k : cs) m = std::min(m, c * k.a + d * k.b - k.lhs);
    return m;
}

} // namespace

// Two-variable LP by vertex enumeration: the optimum sits at an intersection
// of two active constraints or of one constraint with an axis.
TwoConstantFit fit_two_constants(const std::vector<FitConstraint>& constraints, double lambda,
                                 double cap) {
    TwoConstantFit best;
    best.c = best.d = cap;
    double best_obj = std::numeric_limits<double>::infinity();

    auto consider = [&](double c, double d) {
        if (!(c >= 0.0) || !(d >= 0.0) || c > cap || d > cap) return;
        const double m = eval_margin(constraints, c, d);
        if (m < -1e-9 * std::max(1.0, std::abs(c) + std::abs(d))) return;
        const double obj = c + lambda * d;
        if (obj < best_obj) {
            best_obj = obj;
            best = {c, d, m, true};
        }
    };

    consider(0.0, 0.0);
    const std::size_t n = constraints.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& ki = constraints[i];
        // axis intercepts: D = 0 and C = 0
        if (ki.a != 0.0) consider(ki.lhs / ki.a, 0.0);
        if (ki.b != 0.0) consider(0.0, ki.lhs / ki.b);
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto& kj = constraints[j];
            const double det = ki.a * kj.b - kj.a * ki.b;
            if (std::abs(det) < 1e-300) continue;
            const double c = (ki.lhs * kj.b - kj.lhs * ki.b) / det;
            const double d = (ki.a * kj.lhs - kj.a * ki.lhs) / det;
            consider(c, d);
        }
    }
    if (!best.feasible) {
        best.c = best.d = cap;
        best.margin = eval_margin(constraints, cap, cap);
        best.feasible = best.margin >= -1e-9;
    }
    return best;
}

} // namespace carnot
