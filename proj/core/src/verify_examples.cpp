// Worked-example verifiers: near-critical point location for the radial
// cosine interaction, the quadric-power weighted bound, Rockland quadratic
// form fits, and the built-in exact identity suite.
#include <cmath>
#include <random>
#include <sstream>

#include "carnot/error.hpp"
#include "carnot/harmonic.hpp"
#include "carnot/verifiers.hpp"

namespace carnot {

ScanReport eg2_critical_points(const CarnotGroup& G, const PotentialSpec& pot,
                               const CriticalPointSpec& spec) {
    const auto* rc = std::get_if<RadialCosine>(&pot);
    if (rc == nullptr || rc->norm != NormKind::euclidean || G.kind != GroupKind::euclidean)
        throw UnsupportedError("critical-point scan needs a euclidean radial-cosine interaction");
    validate_potential(G, pot);
    const PotentialEvaluator eval(G, pot);

    // |grad U| = r^{alpha-1} |g(r)| with
    // g(r) = alpha (1 + eps cos(w r^k)) - eps w k r^k sin(w r^k)
    auto g = [&](double r) {
        const double ph = rc->omega * std::pow(r, rc->kappa);
        return rc->alpha * (1.0 + rc->eps * std::cos(ph)) -
               rc->eps * rc->omega * rc->kappa * std::pow(r, rc->kappa) * std::sin(ph);
    };
    auto grad_norm = [&](double r) { return std::pow(r, rc->alpha - 1.0) * std::abs(g(r)); };
    auto point_at = [&](double r) {
        Point p{std::vector<double>(G.dim, 0.0)};
        p[0] = r;
        return p;
    };

    ScanReport rep;
    rep.title = "eg2_critical_points";
    rep.coord_names = {"r"};
    rep.value_names = {"shell_k", "phase_cos", "grad_norm", "lap_u"};
    bool all_classes = true;
    std::vector<double> pos_mags, neg_mags; // per-shell |Delta U| maxima by sign

    for (long k : spec.shells) {
        // r-window where the phase w r^kappa sweeps [2 pi k, 2 pi (k+1)]
        const double r_lo = std::pow(2.0 * M_PI * k / rc->omega, 1.0 / rc->kappa);
        const double r_hi = std::pow(2.0 * M_PI * (k + 1) / rc->omega, 1.0 / rc->kappa);
        bool has_pos = false, has_neg = false;
        double max_pos = 0.0, max_neg = 0.0;
        double prev_r = r_lo, prev_g = g(r_lo);
        for (int s = 1; s <= spec.samples_per_shell; ++s) {
            const double r = r_lo + (r_hi - r_lo) * s / spec.samples_per_shell;
            const double gr = g(r);
            if ((prev_g < 0.0) != (gr < 0.0)) {
                double a = prev_r, b = r;
                for (int it = 0; it < 200 && grad_norm(0.5 * (a + b)) >= spec.grad_tol; ++it) {
                    const double mid = 0.5 * (a + b);
                    if ((g(a) < 0.0) != (g(mid) < 0.0))
                        b = mid;
                    else
                        a = mid;
                }
                const double root = 0.5 * (a + b);
                if (grad_norm(root) < spec.grad_tol) {
                    const Jet2 jet = eval.jet(point_at(root));
                    const double ph = rc->omega * std::pow(root, rc->kappa);
                    ScanPoint sp;
                    sp.coords = {root};
                    sp.values = {static_cast<double>(k), std::cos(ph), grad_norm(root), jet.lap};
                    rep.points.push_back(std::move(sp));
                    if (jet.lap > 0.0) {
                        has_pos = true;
                        max_pos = std::max(max_pos, jet.lap);
                    } else {
                        has_neg = true;
                        max_neg = std::max(max_neg, -jet.lap);
                    }
                }
            }
            prev_r = r;
            prev_g = gr;
        }
        if (!has_pos || !has_neg) {
            all_classes = false;
            rep.notes.push_back({"shell_" + std::to_string(k),
                                 "resolution warning: missing a Laplacian sign class"});
        }
        pos_mags.push_back(max_pos);
        neg_mags.push_back(max_neg);
        rep.summary.push_back({"shell_" + std::to_string(k) + "_lap_pos", max_pos});
        rep.summary.push_back({"shell_" + std::to_string(k) + "_lap_neg", max_neg});
    }

    bool growing = true;
    for (std::size_t i = 1; i < pos_mags.size(); ++i) {
        if (!(pos_mags[i] > pos_mags[i - 1]) || !(neg_mags[i] > neg_mags[i - 1])) growing = false;
    }
    rep.summary.push_back({"magnitudes_grow", growing ? 1.0 : 0.0});
    rep.contract_ok = all_classes && growing;
    return rep;
}

FitResult eg3_star_bound(const CarnotGroup& G, const PotentialSpec& pot,
                         const std::vector<Polynomial>& family, const StarBoundSpec& spec,
                         MeasureIntegrator& integrator) {
    const auto* qp = std::get_if<QuadricPower>(&pot);
    if (qp == nullptr) throw UnsupportedError("star bound needs the quadric-power interaction");
    validate_potential(G, pot);
    if (!(spec.n_tilde > 2.0))
        throw ScenarioError("eg3_star_bound: n_tilde must be set explicitly (> 2)");
    if (!(spec.A > 1.0)) throw ScenarioError("eg3_star_bound: A must exceed 1");

    const double hardy_coeff = spec.hardy_c / ((spec.n_tilde - 2.0) * (spec.n_tilde - 2.0));
    const double rhs_coeff = 4.0 * spec.A * spec.A / (spec.A - 1.0) * hardy_coeff;
    const int n = qp->n;

    FitResult out;
    out.title = "eg3_star_bound";
    out.family = std::to_string(family.size()) + "-member polynomial family";
    out.constants.push_back({"A", spec.A});
    out.constants.push_back({"D", spec.D});
    out.constants.push_back({"n_tilde", spec.n_tilde});
    out.constants.push_back({"rhs_gradient_coeff", rhs_coeff});
    const double gate = 0.25 - 2.0 * spec.hardy_c * spec.A * spec.A /
                                   ((spec.n_tilde - 2.0) * (spec.n_tilde - 2.0));
    out.details.push_back({"gate_quarter_minus", gate});
    out.details.push_back({"gate_ok", gate > 0.125 ? 1.0 : 0.0});

    double margin = 1e300;
    for (std::size_t idx = 0; idx < family.size(); ++idx) {
        const Polynomial& f = family[idx];
        auto f_ev = std::make_shared<PolyEval>(f);
        NamedObservable weighted{"lhs", [f_ev, n, &spec](const Point& p) {
                                     const double fv = (*f_ev)(std::span<const double>(p.x));
                                     const double r2 =
                                         p[0] * p[0] + p[1] * p[1] + 2.0 * p[2] * p[2];
                                     const double w = 0.25 * spec.A *
                                                      std::pow(r2, static_cast<double>(n - 1)) *
                                                      std::sqrt(1.0 + p[2] * p[2]);
                                     return fv * fv * w;
                                 }};
        auto ests = integrator.means(
            {weighted, poly_observable("|grad f|^2", gradient_square_poly(G, f)),
             poly_observable("f^2", f * f)});
        const double m = rhs_coeff * ests[1].mean + spec.D * ests[2].mean - ests[0].mean;
        out.details.push_back({"margin_" + std::to_string(idx + 1), m});
        margin = std::min(margin, m);
    }
    out.margin = family.empty() ? 0.0 : margin;
    out.feasible = out.margin >= -1e-9;
    return out;
}

FitResult rockland_terms(const CarnotGroup& G, const PotentialSpec& pot,
                         const std::vector<Polynomial>& family, const RocklandTermsSpec& spec,
                         MeasureIntegrator& integrator) {
    const auto U = as_polynomial(G, pot);
    if (!U) throw UnsupportedError("Rockland term fits need a polynomial interaction");
    if (spec.n < 1) throw Error("Rockland order parameter must be >= 1");
    const DiffOp R = rockland_op(G, spec.n);
    const int k = G.horizontal_dim;

    // per m: sum_j mu((X_j^m f)^2 (X_j^{2n-m} U)^2) <= b_m mu|Rf|^2 + c_m mu f^2
    FitResult out;
    out.title = "rockland_terms";
    out.family = std::to_string(family.size()) + "-member polynomial family";
    double min_margin = 1e300;
    bool feasible = true;

    std::vector<std::vector<FitConstraint>> constraints(2 * spec.n);
    for (const auto& f : family) {
        Polynomial rf = R.apply(f);
        std::vector<NamedObservable> obs;
        obs.push_back(poly_observable("|Rf|^2", rf * rf));
        obs.push_back(poly_observable("f^2", f * f));
        for (int m = 0; m < 2 * spec.n; ++m) {
            Polynomial term(G.dim);
            for (int j = 0; j < k; ++j) {
                Polynomial xf = f, xu = *U;
                for (int t = 0; t < m; ++t) xf = G.generators[j].apply(xf);
                for (int t = 0; t < 2 * spec.n - m; ++t) xu = G.generators[j].apply(xu);
                term += (xf * xf) * (xu * xu);
            }
            obs.push_back(poly_observable("term_m" + std::to_string(m), term));
        }
        const auto ests = integrator.means(obs);
        for (int m = 0; m < 2 * spec.n; ++m)
            constraints[m].push_back({ests[2 + m].mean, ests[0].mean, ests[1].mean});
    }
    for (int m = 0; m < 2 * spec.n; ++m) {
        const TwoConstantFit fit = fit_two_constants(constraints[m]);
        out.constants.push_back({"b_" + std::to_string(m), fit.c});
        out.constants.push_back({"c_" + std::to_string(m), fit.d});
        min_margin = std::min(min_margin, fit.margin);
        feasible = feasible && fit.feasible;
    }
    out.margin = family.empty() ? 0.0 : min_margin;
    out.feasible = feasible;
    return out;
}

namespace {

Polynomial random_polynomial(int dim, int max_deg, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-4, 4);
    std::uniform_int_distribution<int> den(1, 3);
    std::uniform_real_distribution<double> keep(0.0, 1.0);
    Polynomial out(dim);
    for (int deg = 0; deg <= max_deg; ++deg) {
        for (const auto& alpha : multi_indices_of_degree(dim, deg)) {
            if (keep(rng) > 0.35) continue;
            const int n = num(rng);
            if (n == 0) continue;
            out.insert_term(alpha, Rational(n, den(rng)));
        }
    }
    return out;
}

} // namespace

IdentityReport identity_suite(std::uint64_t seed) {
    IdentityReport rep;
    rep.title = "exact_identity_suite";
    auto add = [&](const std::string& name, bool ok) {
        rep.checks.push_back({name, ok});
        rep.all_exact = rep.all_exact && ok;
    };

    // harmonic polynomials and the Kaplan identity on H^1, H^2, H^3
    for (int n = 1; n <= 3; ++n) {
        const CarnotGroup G = make_group(GroupKind::heisenberg, n);
        const HarmonicLibrary lib = harmonic_library(G);
        add("harmonic_H" + std::to_string(n), lib.all_exact());
    }

    // sub-Laplacian kills x^2 - y^2 on H^1
    {
        const CarnotGroup G = make_group(GroupKind::heisenberg, 1);
        Polynomial v = Polynomial::coordinate(3, 0) * Polynomial::coordinate(3, 0) -
                       Polynomial::coordinate(3, 1) * Polynomial::coordinate(3, 1);
        add("sublaplacian_x2_minus_y2", sub_laplacian(G).apply(v).is_zero());
    }

    // dual biorthogonality grad^beta w_alpha = delta on H^1 (orders <= 4)
    {
        const CarnotGroup G = make_group(GroupKind::heisenberg, 1);
        bool ok = true;
        for (unsigned deg = 0; deg <= 4 && ok; ++deg) {
            const auto idxs = multi_indices_of_degree(G.horizontal_dim, deg);
            for (const auto& alpha : idxs)
                for (const auto& beta : idxs) {
                    const Polynomial r = sub_gradient_power(G, beta).apply(dual_weight(G, alpha));
                    const Polynomial want =
                        alpha == beta ? Polynomial::constant(G.dim, 1) : Polynomial::zero(G.dim);
                    ok = ok && (r == want);
                }
        }
        add("dual_biorthogonality_H1", ok);
    }

    // [V_j, V_k] = V_{j,k} for random polynomial interactions on H^1, H^2
    std::mt19937_64 rng(seed);
    for (int n = 1; n <= 2; ++n) {
        const CarnotGroup G = make_group(GroupKind::heisenberg, n);
        bool ok = true;
        for (int trial = 0; trial < 5 && ok; ++trial) {
            const Polynomial U = random_polynomial(G.dim, 4, rng);
            for (int j = 0; j < G.horizontal_dim && ok; ++j)
                for (int l = 0; l < G.horizontal_dim && ok; ++l)
                    ok = commutator(v_field(G, U, j), v_field(G, U, l)) ==
                         v_bracket_field(G, U, j, l);
        }
        add("deformed_commutator_H" + std::to_string(n), ok);
    }

    // generator brackets close onto the center; triple brackets vanish
    for (int n = 1; n <= 3; ++n) {
        const CarnotGroup G = make_group(GroupKind::heisenberg, n);
        bool ok = true;
        for (int i = 0; i < G.horizontal_dim && ok; ++i)
            for (int j = 0; j < G.horizontal_dim && ok; ++j) {
                const DiffOp b = commutator(G.generators[i], G.generators[j]);
                // bracket must be an exact multiple of the center field
                bool in_center = false;
                for (const auto& c : {Rational(0), Rational(1), Rational(-1)})
                    if (b == G.center_fields.front().scaled(c)) in_center = true;
                ok = ok && in_center;
                for (int l = 0; l < G.horizontal_dim && ok; ++l)
                    ok = commutator(b, G.generators[l]).is_zero();
            }
        add("bracket_closure_H" + std::to_string(n), ok);
    }

    // X_j eta_i = delta_ij over the horizontal coordinates (H^2)
    {
        const CarnotGroup G = make_group(GroupKind::heisenberg, 2);
        bool ok = true;
        for (int j = 0; j < G.horizontal_dim && ok; ++j)
            for (int i = 1; i <= G.horizontal_dim && ok; ++i) {
                const Polynomial r = G.generators[j].apply(eta_functional(G, i));
                const Polynomial want = (i == j + 1) ? Polynomial::constant(G.dim, 1)
                                                     : Polynomial::zero(G.dim);
                ok = r == want;
            }
        add("eta_duality_H2", ok);
    }

    return rep;
}

} // namespace carnot
