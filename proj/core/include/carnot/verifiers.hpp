// Numbered verification procedures: Adams-condition scans, U-bound defect
// identities, inductive moment bounds, Poincare/LSI estimation, statistical
// polynomials, the step-2 operator identity, Hardy bounds, and the worked
// example theorems.
#pragma once

#include <optional>

#include "carnot/fields.hpp"
#include "carnot/fitting.hpp"
#include "carnot/integrate.hpp"
#include "carnot/reports.hpp"

namespace carnot {

// --- symbolic helpers -------------------------------------------------------

std::vector<Polynomial> horizontal_gradient(const CarnotGroup& G, const Polynomial& f);
Polynomial gradient_square_poly(const CarnotGroup& G, const Polynomial& f);
// sum_{|alpha| = m} (grad^alpha f)^2 over canonical multi-indices
Polynomial grad_power_square_poly(const CarnotGroup& G, const Polynomial& f, unsigned m);
// sum over all length-m generator words w of (X_{w_1} ... X_{w_m} f)^2; the
// iterated-Poincare induction controls this quantity (the generators do not
// commute, so it differs from the multi-index sum)
Polynomial grad_word_square_poly(const CarnotGroup& G, const Polynomial& f, unsigned m);

NamedObservable poly_observable(std::string name, const Polynomial& p);

// --- Adams regularity scans -------------------------------------------------

enum class ScanPath { z_axis, radial, box };

struct AdamsScanSpec {
    ScanPath path = ScanPath::z_axis;
    // z (or r) values per shell; box uses the max; empty = geometric x10 ladder
    std::vector<double> shells;
    double epsilon = 0.0; // the 2 - eps exponent
    int box_nodes = 5;
    // optional expectation on the scan: "bounded" asserts max ratio <= bound,
    // "divergent" asserts the last/first ratio growth >= growth_min
    std::optional<std::string> expect;
    double bound = 1e3;
    double growth_min = 10.0;
};

ScanReport adams_scan(const CarnotGroup& G, const PotentialSpec& pot, AdamsScanSpec spec);

struct DualScanSpec {
    double t_start = 1.0; // leading coordinate start; walks down `decades`
    int decades = 3;
    int per_decade = 4;
    double epsilon = 1.0;
};

ScanReport adams_dual_scan(const CarnotGroup& G, const PotentialSpec& pot,
                           const DualScanSpec& spec);

// --- quadratic-form checks ---------------------------------------------------

// mu(f^2 V) vs mu|grad f|^2 with the independently computed defect
// mu(|grad f - f grad U / 2|^2); contract rhs - lhs = defect.
DefectReport ubound_defect(const CarnotGroup& G, const PotentialSpec& pot, const Polynomial& f,
                           MeasureIntegrator& integrator, double tol = 1e-3);

// Integration by parts for the deformed fields: mu(f V_j g) + mu((V_j f) g) = 0.
DefectReport ibp_check(const CarnotGroup& G, const Polynomial& U, const Polynomial& f,
                       const Polynomial& g, MeasureIntegrator& integrator, double tol = 1e-3);

// ||L f||^2 + sum ||[V_l,V_j] f||^2 = sum ||V_j V_l f||^2 on step-2 groups.
DefectReport step2_identity_check(const CarnotGroup& G, const PotentialSpec& pot,
                                  const Polynomial& f, MeasureIntegrator& integrator,
                                  double tol = 1e-3);

// --- inductive moment bounds (condition (*) and the a_m ladder) -------------

struct InductiveBoundSpec {
    int n = 2;                 // target power
    double epsilon = 1e-2;     // the (*) epsilon
    double ball_radius = 1.0;  // scan only outside this ball
    double e_cap = 1e9;        // refusal threshold for E_eps
    std::vector<double> shell_radii = {1.0, 10.0, 100.0, 1000.0};
    int per_shell = 64; // scan points per shell
    enum class Weight { shifted_abs, v_plus_c } weight = Weight::shifted_abs;
    double shift_c = 0.0; // C for the v_plus_c weight
};

FitResult inductive_bound_pipeline(const CarnotGroup& G, const PotentialSpec& pot,
                                   const InductiveBoundSpec& spec,
                                   const std::vector<Polynomial>& family,
                                   MeasureIntegrator& integrator);

// --- Poincare / statistical polynomials -------------------------------------

// Certified lower bound on the best Poincare constant from a test family.
FitResult poincare_estimate(const CarnotGroup& G, const PotentialSpec& pot,
                            const std::vector<Polynomial>& family,
                            MeasureIntegrator& integrator);

struct StatPolyResult {
    Polynomial zeta;
    DefectReport residual; // lhs = mu|f - zeta|^2
    std::vector<std::string> warnings;
};

StatPolyResult statpoly_build(const CarnotGroup& G, const PotentialSpec& pot, const Polynomial& f,
                              unsigned m, MeasureIntegrator& integrator);

// mu|f - zeta_m|^2 <= C^m mu|grad^m f|^2 with C the Poincare estimate.
DefectReport higher_poincare_check(const CarnotGroup& G, const PotentialSpec& pot,
                                   const Polynomial& f, unsigned m, double poincare_constant,
                                   MeasureIntegrator& integrator, double tol = 1e-9);

// --- beta-LSI empirical ratio ------------------------------------------------

DefectReport lsi_defect(const CarnotGroup& G, const PotentialSpec& pot, const Polynomial& f,
                        double beta, unsigned m, double p, MeasureIntegrator& integrator);

// --- Hardy inequalities -------------------------------------------------------

struct HardyParams {
    double hardy_c = 1.0; // the Haar-measure Hardy constant C
    // Delta N = c |grad N|^2 / N: Q - 1 by default, override for the (n+2m-1)
    // variant
    std::optional<double> delta_n_constant;
    std::optional<double> weight_shift; // D added to W; auto when unset
    double tol = 1e-9;
};

struct HardyReport {
    DefectReport direct;  // mu(f^2/|x|^2) vs 2C mu|grad f|^2 + C/2 mu(f^2 |grad U|^2)
    FitResult improved;   // minimal (C~, D~) for mu(f^2 W^{1/2}/N)
    std::vector<std::string> notices;
};

HardyReport hardy_check(const CarnotGroup& G, const PotentialSpec& pot,
                        const std::vector<Polynomial>& family, MeasureIntegrator& integrator,
                        const HardyParams& params = {});

// log-log slope of W^{1/2}/N across Kaplan shells (profile families only).
ScanReport hardy_weight_scan(const CarnotGroup& G, const PotentialSpec& pot,
                             const std::vector<double>& shells, const HardyParams& params = {});

// --- worked example theorems --------------------------------------------------

struct CriticalPointSpec {
    std::vector<long> shells = {10, 100, 1000}; // phase-window indices k
    double grad_tol = 1e-3;                     // |grad U| < tol at located points
    int samples_per_shell = 512;
};

// Locates near-critical points of the radial-cosine interaction per shell and
// records the two diverging Laplacian sign classes.
ScanReport eg2_critical_points(const CarnotGroup& G, const PotentialSpec& pot,
                               const CriticalPointSpec& spec);

struct StarBoundSpec {
    double A = 4.0;
    double hardy_c = 1.0;
    double n_tilde = 0.0; // no default: must be set explicitly
    double D = 1.0;
};

FitResult eg3_star_bound(const CarnotGroup& G, const PotentialSpec& pot,
                         const std::vector<Polynomial>& family, const StarBoundSpec& spec,
                         MeasureIntegrator& integrator);

struct RocklandTermsSpec {
    int n = 2; // Rockland order parameter: R has order 2n
};

FitResult rockland_terms(const CarnotGroup& G, const PotentialSpec& pot,
                         const std::vector<Polynomial>& family, const RocklandTermsSpec& spec,
                         MeasureIntegrator& integrator);

// --- built-in exact identity suite ---------------------------------------------

IdentityReport identity_suite(std::uint64_t seed = 7);

} // namespace carnot
