// Stratified (Carnot) groups in exponential coordinates of the first kind:
// the Heisenberg family H^n and Euclidean R^n as the one-stratum case.
//
// Coordinates are ordered first-stratum-then-center: (x_1,...,x_{2n}, z) for
// H^n. Generator fields are X_i = d/dx_i + (s_i/2) x_{2n-i+1} d/dz with the
// sign sequence s_i fixed by the convention tag:
//   canonical: s_i = (-1)^i      (the convention the norm jets below match)
//   example:   s_i = (-1)^{i+1}  (the H^1 presentation X = dx + y/2 dz)
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "carnot/diff_op.hpp"

namespace carnot {

enum class GroupKind { heisenberg, euclidean };
enum class HeisenbergConvention { canonical, example };

struct Point {
    std::vector<double> x;

    std::size_t size() const { return x.size(); }
    double operator[](std::size_t i) const { return x[i]; }
    double& operator[](std::size_t i) { return x[i]; }
};

struct CarnotGroup {
    GroupKind kind = GroupKind::euclidean;
    int n = 1; // heisenberg(n) or euclidean(n)
    HeisenbergConvention convention = HeisenbergConvention::canonical;

    std::vector<int> strata_dims; // (n_1, ..., n_r)
    int dim = 0;                  // total coordinate count
    int hom_dim = 0;              // Q = sum j * n_j
    int horizontal_dim = 0;       // n_1

    std::vector<DiffOp> generators;    // X_1..X_{n_1}
    std::vector<DiffOp> center_fields; // Z fields of strata >= 2

    bool is_heisenberg() const { return kind == GroupKind::heisenberg; }
    // sign s_i (0-based generator index) in the field formula above
    int sign(int i) const;
    // partner index 2n-i+1 in 0-based form
    int partner(int i) const { return 2 * n - 1 - i; }

    std::vector<std::string> coordinate_names() const;
};

CarnotGroup make_group(GroupKind kind, int n,
                       HeisenbergConvention conv = HeisenbergConvention::canonical);

// Group law / inverse / dilations, exact on rational points and floating on
// double points. Euclidean groups reduce to vector arithmetic.
Point group_product(const CarnotGroup& G, const Point& p, const Point& q);
Point group_inverse(const CarnotGroup& G, const Point& p);
Point dilate(const CarnotGroup& G, double lambda, const Point& p);
std::vector<Rational> group_product(const CarnotGroup& G, std::span<const Rational> p,
                                    std::span<const Rational> q);
std::vector<Rational> dilate(const CarnotGroup& G, const Rational& lambda,
                             std::span<const Rational> p);

// The group law as polynomials in the coordinates of q, for a fixed left
// factor p (exact): coordinates of p o q. Used by left-invariance checks.
std::vector<Polynomial> left_translation_polys(const CarnotGroup& G, std::span<const Rational> p);

// Kaplan quartic K = |x|^4 + 16 z^2 and norm N = K^{1/4} (Heisenberg only).
double kaplan_quartic(const CarnotGroup& G, const Point& p);
Rational kaplan_quartic(const CarnotGroup& G, std::span<const Rational> p);
double kaplan_norm(const CarnotGroup& G, const Point& p);
Polynomial kaplan_quartic_poly(const CarnotGroup& G);

// Closed-form jets of the Kaplan norm. Entries blow up like 1/N near the
// group identity; evaluation inside N <= delta_sing is refused.
struct HomNormJet {
    double value = 0.0;                             // N
    std::vector<double> grad_h;                     // X_i N
    std::vector<std::vector<double>> hess_h;        // X_j X_i N, indexed [j][i]
    std::optional<std::pair<double, double>> z_jet; // (ZN, Z^2 N)
    double gradsq = 0.0;                            // |grad N|^2 = |x|^2/N^2
    double laplacian = 0.0;                         // Delta N = (Q-1)|x|^2/N^3
};

inline constexpr double kDefaultSingularRadius = 1e-8;

HomNormJet kaplan_jet(const CarnotGroup& G, const Point& p,
                      double delta_sing = kDefaultSingularRadius);

// Coordinate functional eta_h (1-based h over all coordinates).
Polynomial eta_functional(const CarnotGroup& G, int h);

// eta^alpha over the horizontal coordinates (alpha indexed by generators).
Polynomial horizontal_monomial(const CarnotGroup& G, const MultiIndex& alpha);
// Dual weight w_alpha = eta^alpha / alpha!, satisfying grad^beta w_alpha =
// delta_{alpha beta} for |alpha| = |beta|.
Polynomial dual_weight(const CarnotGroup& G, const MultiIndex& alpha);

// grad^beta = X_1^{b1} ... X_{n1}^{b_{n1}} as a single normal-ordered operator.
DiffOp sub_gradient_power(const CarnotGroup& G, const MultiIndex& beta);

// Sub-Laplacian sum_i X_i^2.
DiffOp sub_laplacian(const CarnotGroup& G);

} // namespace carnot
