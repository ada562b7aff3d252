// Interaction families U and their closed-form jets (value, horizontal
// gradient/Hessian, center derivatives), plus the finite-difference oracle
// and the derived potentials V = |grad U|^2/4 - (Delta U)/2 and V_Z.
//
// All U(N)-type families evaluate through the one-dimensional chain rule in
// the norm: scalar profile derivatives x norm jets.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "carnot/group.hpp"

namespace carnot {

enum class NormKind { euclidean, kaplan };

struct OuterProfile {
    enum class Kind { power, exp_power };
    Kind kind = Kind::power;
    double s = 1.0; // exponent
    double c = 1.0; // rate, exp_power only: g(t) = exp(c t^s)
};

struct KaplanPower { // U = N^kappa on a Heisenberg group
    double kappa = 2.0;
};
struct RadialCosine { // U = t^alpha (1 + eps cos(omega t^kappa)), t = r or N
    double alpha = 1.0;
    double eps = 0.5;
    double omega = 1.0;
    double kappa = 1.0;
    NormKind norm = NormKind::euclidean;
};
struct PolarLog { // U = r^{(1+eps cos(phi))/(1-eps)} on euclidean(2)
    double eps = 0.5;
};
struct QuadricPower { // U = (x^2+y^2+2z^2)^n / (2n) on heisenberg(1)
    int n = 1;
};
struct DualMonomial { // U = g(eta^alpha), alpha over the horizontal coordinates
    MultiIndex alpha;
    OuterProfile outer;
};
struct PolynomialPotential {
    Polynomial poly;
};

using PotentialSpec =
    std::variant<KaplanPower, RadialCosine, PolarLog, QuadricPower, DualMonomial,
                 PolynomialPotential>;

// Throws on parameter-range violations or family/group mismatch.
void validate_potential(const CarnotGroup& G, const PotentialSpec& pot);
std::string potential_family_name(const PotentialSpec& pot);
// True when e^{-U} is normalizable for the family's admissible parameters.
// Polynomial potentials get a numeric growth check at integration time.
bool potential_integrable(const PotentialSpec& pot);
// Exact polynomial representation when the family has one.
std::optional<Polynomial> as_polynomial(const CarnotGroup& G, const PotentialSpec& pot);

struct Jet2 {
    double u = 0.0;
    std::vector<double> grad_h;                      // X_i U
    std::vector<std::vector<double>> hess_h;         // X_j X_i U, indexed [j][i]
    std::optional<std::pair<double, double>> center; // (Z U, Z^2 U)
    double gradsq = 0.0;                             // |grad U|^2
    double lap = 0.0;                                // Delta U

    double hess_abs_sum() const; // sum over ordered pairs |X_j X_i U|
};

// Bound evaluator: compiles the polynomial data once so per-point calls are
// cheap inside scan/quadrature loops. Stateless after construction.
class PotentialEvaluator {
public:
    PotentialEvaluator(const CarnotGroup& G, PotentialSpec pot);

    double value(std::span<const double> x) const;
    double value(const Point& p) const { return value(std::span<const double>(p.x)); }
    Jet2 jet(const Point& p, double delta_sing = kDefaultSingularRadius) const;

    const CarnotGroup& group() const { return G_; }
    const PotentialSpec& spec() const { return pot_; }

private:
    Jet2 jet_from_profile(const Point& p, double delta_sing) const;
    Jet2 jet_polynomial(const Point& p) const;
    Jet2 jet_polar(const Point& p, double delta_sing) const;
    Jet2 jet_dual(const Point& p) const;

    const CarnotGroup& G_;
    PotentialSpec pot_;
    // compiled symbolic jets (polynomial families)
    PolyEval u_eval_;
    std::vector<PolyEval> grad_eval_;
    std::vector<std::vector<PolyEval>> hess_eval_;
    std::vector<PolyEval> center_eval_; // (ZU, Z^2U)
    bool symbolic_ = false;
};

Jet2 u_jet(const CarnotGroup& G, const PotentialSpec& pot, const Point& p,
           double delta_sing = kDefaultSingularRadius);
double u_value(const CarnotGroup& G, const PotentialSpec& pot, const Point& p);

// Independent oracle: nested central differences of the value function,
// contracted against the generator coefficients. O(h^2).
Jet2 fd_jet(const CarnotGroup& G, const PotentialSpec& pot, const Point& p, double h = 1e-4);

// V = |grad U|^2/4 - (Delta U)/2 at p.
double v_potential(const CarnotGroup& G, const PotentialSpec& pot, const Point& p,
                   double delta_sing = kDefaultSingularRadius);

struct VzValue {
    double jet = 0.0;                  // from the center jets
    std::optional<double> closed_form; // Kaplan-power closed form when available
};
VzValue v_z_potential(const CarnotGroup& G, const PotentialSpec& pot, const Point& p,
                      double delta_sing = kDefaultSingularRadius);

struct PolarJet {
    double gradsq = 0.0;
    double lap = 0.0;
};
// The polar-coordinate closed forms for the polar-log family (r > 0).
PolarJet polar_jet(const PolarLog& pot, double r, double phi);

// Central finite-difference gradient of an arbitrary scalar along the group's
// generator directions (used where third-order U data would be needed).
std::vector<double> fd_horizontal_gradient(const CarnotGroup& G,
                                           const std::function<double(const Point&)>& f,
                                           const Point& p, double h = 1e-4);

} // namespace carnot
