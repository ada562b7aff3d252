// Minimal-(C, D) feasibility fits: given member constraints
// lhs_i <= C a_i + D b_i with C, D >= 0, pick the feasible pair minimizing
// C + lambda D (lambda keeps the representative canonical across runs).
#pragma once

#include <optional>
#include <vector>

namespace carnot {

struct FitConstraint {
    double lhs = 0.0;
    double a = 0.0; // coefficient of C
    double b = 0.0; // coefficient of D
};

struct TwoConstantFit {
    double c = 0.0;
    double d = 0.0;
    double margin = 0.0; // min_i (C a_i + D b_i - lhs_i)
    bool feasible = false;
};

TwoConstantFit fit_two_constants(const std::vector<FitConstraint>& constraints,
                                 double lambda = 1e-2, double cap = 1e12);

} // namespace carnot
