// Poincare constant estimation, statistical polynomials (the downhill
// induction), the higher-order Poincare chain, and the inductive (*) moment
// bound pipeline.
#include <cmath>
#include <memory>
#include <sstream>

#include "carnot/error.hpp"
#include "carnot/verifiers.hpp"

namespace carnot {

FitResult poincare_estimate(const CarnotGroup& G, const PotentialSpec& pot,
                            const std::vector<Polynomial>& family,
                            MeasureIntegrator& integrator) {
    validate_potential(G, pot);
    FitResult out;
    out.title = "poincare_estimate";
    out.family = std::to_string(family.size()) + "-member polynomial family";

    double c_lower = 0.0;
    std::vector<std::pair<double, double>> member_data; // (var, dirichlet)
    for (std::size_t idx = 0; idx < family.size(); ++idx) {
        const Polynomial& f = family[idx];
        const Polynomial gsq = gradient_square_poly(G, f);
        if (gsq.is_zero()) {
            out.details.push_back({"skipped_constant_" + std::to_string(idx + 1), 1.0});
            continue;
        }
        auto ests = integrator.means({poly_observable("f", f), poly_observable("f^2", f * f),
                                      poly_observable("|grad f|^2", gsq)});
        const double var = ests[1].mean - ests[0].mean * ests[0].mean;
        const double dir = ests[2].mean;
        if (!(dir > 0.0)) {
            out.details.push_back({"skipped_degenerate_" + std::to_string(idx + 1), 1.0});
            continue;
        }
        const double ratio = var / dir;
        out.details.push_back({"ratio_" + std::to_string(idx + 1), ratio});
        member_data.push_back({var, dir});
        c_lower = std::max(c_lower, ratio);
    }
    out.constants.push_back({"C_lower", c_lower});
    double margin = 1e300;
    for (const auto& [var, dir] : member_data) margin = std::min(margin, c_lower * dir - var);
    out.margin = member_data.empty() ? 0.0 : margin;
    out.feasible = out.margin >= -1e-9;
    return out;
}

StatPolyResult statpoly_build(const CarnotGroup& G, const PotentialSpec& pot, const Polynomial& f,
                              unsigned m, MeasureIntegrator& integrator) {
    validate_potential(G, pot);
    if (m < 1) throw Error("statistical polynomial order must be >= 1");
    if (f.dim() != G.dim) throw DimensionError("test polynomial dimension mismatch");

    StatPolyResult out;
    out.zeta = Polynomial::zero(G.dim);
    Polynomial current = f;

    for (int level = static_cast<int>(m) - 1; level >= 0; --level) {
        const auto gammas = multi_indices_of_degree(G.horizontal_dim, level);
        std::vector<Polynomial> derived;
        std::vector<Rational> moments(gammas.size(), 0);
        std::vector<std::size_t> numeric;
        std::vector<NamedObservable> obs;
        for (std::size_t i = 0; i < gammas.size(); ++i) {
            Polynomial g = sub_gradient_power(G, gammas[i]).apply(current);
            // a constant integrates to itself against any probability measure
            if (g.is_constant()) {
                moments[i] = g.constant_term();
            } else {
                numeric.push_back(i);
                obs.push_back(poly_observable("moment", g));
            }
            derived.push_back(std::move(g));
        }
        if (!obs.empty()) {
            const auto ests = integrator.means(obs);
            for (std::size_t k = 0; k < numeric.size(); ++k) {
                if (ests[k].std_err > 0.1 * std::abs(ests[k].mean) &&
                    std::abs(ests[k].mean) > 1e-12) {
                    std::ostringstream w;
                    w << "low-precision moment at level " << level << " (std_err "
                      << ests[k].std_err << " vs mean " << ests[k].mean << ")";
                    out.warnings.push_back(w.str());
                }
                // double -> rational conversion is exact (dyadic)
                moments[numeric[k]] = Rational(ests[k].mean);
            }
        }
        Polynomial level_sum(G.dim);
        for (std::size_t i = 0; i < gammas.size(); ++i) {
            if (moments[i] == 0) continue;
            level_sum += dual_weight(G, gammas[i]).scaled(moments[i]);
        }
        out.zeta += level_sum;
        current -= level_sum;
    }

    const Polynomial resid = f - out.zeta;
    out.residual.title = "statpoly_residual";
    out.residual.lhs = integrator.mean(poly_observable("|f-zeta|^2", resid * resid).fn,
                                       "|f-zeta|^2");
    out.residual.rhs = Estimate{};
    out.residual.defect = out.residual.lhs.mean;
    out.residual.contract = "informational: mu|f - zeta_m|^2";
    out.residual.contract_ok = true;
    return out;
}

DefectReport higher_poincare_check(const CarnotGroup& G, const PotentialSpec& pot,
                                   const Polynomial& f, unsigned m, double poincare_constant,
                                   MeasureIntegrator& integrator, double tol) {
    StatPolyResult sp = statpoly_build(G, pot, f, m, integrator);
    // the induction descends through nested gradients, so the controlled
    // derivative energy is the all-words sum
    const Estimate grad_m =
        integrator.mean(poly_observable("|grad^m f|^2", grad_word_square_poly(G, f, m)).fn,
                        "|grad^m f|^2");

    DefectReport rep;
    rep.title = "higher_poincare";
    rep.lhs = sp.residual.lhs;
    rep.rhs = Estimate{std::pow(poincare_constant, static_cast<double>(m)) * grad_m.mean,
                       std::pow(poincare_constant, static_cast<double>(m)) * grad_m.std_err, 0.0};
    rep.defect = rep.rhs.mean - rep.lhs.mean; // margin
    rep.defect_err = std::hypot(rep.lhs.std_err, rep.rhs.std_err);
    rep.contract = "mu|f - zeta_m|^2 <= C^m mu|grad^m f|^2";
    rep.contract_ok = rep.lhs.mean <= rep.rhs.mean + 3.0 * rep.defect_err +
                                          tol * std::max(1.0, std::abs(rep.rhs.mean));
    rep.extra.push_back({"poincare_constant", poincare_constant});
    rep.extra.push_back({"order", static_cast<double>(m)});
    return rep;
}

namespace {

// deterministic direction lattice scaled onto the shell N = R (Heisenberg,
// via the dilation homogeneity) or |x| = R (euclidean)
std::vector<Point> shell_points(const CarnotGroup& G, double R, int count) {
    std::vector<Point> out;
    const int d = G.dim;
    // golden-ratio lattice on the unit cube surface directions
    std::uint64_t state = 0x5DEECE66Dull;
    auto next01 = [&state]() {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>(state >> 11) / 9007199254740992.0;
    };
    for (int i = 0; i < count; ++i) {
        Point p{std::vector<double>(d)};
        double norm = 0.0;
        for (int c = 0; c < d; ++c) {
            p[c] = 2.0 * next01() - 1.0;
            norm += p[c] * p[c];
        }
        if (norm < 1e-12) {
            p[0] = 1.0;
            norm = 1.0;
        }
        for (int c = 0; c < d; ++c) p[c] /= std::sqrt(norm);
        if (G.is_heisenberg()) {
            const double nu = kaplan_norm(G, p);
            out.push_back(dilate(G, R / nu, p));
        } else {
            for (int c = 0; c < d; ++c) p[c] *= R;
            out.push_back(p);
        }
    }
    return out;
}

} // namespace

FitResult inductive_bound_pipeline(const CarnotGroup& G, const PotentialSpec& pot,
                                   const InductiveBoundSpec& spec,
                                   const std::vector<Polynomial>& family,
                                   MeasureIntegrator& integrator) {
    validate_potential(G, pot);
    const auto U = as_polynomial(G, pot);

    // V and grad V, symbolic when possible, else jets + finite differences
    std::shared_ptr<PolyEval> v_sym;
    std::shared_ptr<std::vector<PolyEval>> v_grad_sym;
    const auto eval = std::make_shared<PotentialEvaluator>(G, pot);
    if (U) {
        const Polynomial vp = v_potential_poly(G, *U);
        v_sym = std::make_shared<PolyEval>(vp);
        v_grad_sym = std::make_shared<std::vector<PolyEval>>();
        for (const auto& g : horizontal_gradient(G, vp)) v_grad_sym->push_back(PolyEval(g));
    }
    auto v_fn = [&](const Point& p) -> double {
        if (v_sym) return (*v_sym)(std::span<const double>(p.x));
        const Jet2 j = eval->jet(p);
        return 0.25 * j.gradsq - 0.5 * j.lap;
    };
    auto v_grad_fn = [&](const Point& p) -> std::vector<double> {
        if (v_grad_sym) {
            std::vector<double> g;
            for (const auto& ev : *v_grad_sym) g.push_back(ev(std::span<const double>(p.x)));
            return g;
        }
        return fd_horizontal_gradient(
            G, [&](const Point& q) { return v_fn(q); }, p);
    };
    const bool shifted = spec.weight == InductiveBoundSpec::Weight::shifted_abs;
    auto w_fn = [&, shifted](const Point& p) -> double {
        const double v = v_fn(p);
        return shifted ? std::sqrt(v * v + 1.0) : v + spec.shift_c;
    };

    FitResult out;
    out.title = "inductive_bound_pipeline";
    out.family = std::to_string(family.size()) + "-member family, weight " +
                 (shifted ? std::string("<V> = (V^2+1)^(1/2)") : std::string("V + C"));

    // (*) scan: (1/W)|grad W|^2 <= eps W^2 + E outside the ball
    double e_eps = 0.0;
    bool star_ok = true;
    std::string fail_note;
    double w_min = 1e300;
    for (double R : spec.shell_radii) {
        if (R <= spec.ball_radius) continue;
        for (const auto& p : shell_points(G, R, spec.per_shell)) {
            const double w = w_fn(p);
            w_min = std::min(w_min, w);
            if (w == 0.0) continue; // (*) is conditioned on W != 0
            const auto gv = v_grad_fn(p);
            double gw2 = 0.0;
            if (shifted) {
                const double v = v_fn(p);
                double gv2 = 0.0;
                for (double t : gv) gv2 += t * t;
                gw2 = v * v * gv2 / (w * w);
            } else {
                for (double t : gv) gw2 += t * t;
            }
            const double q = gw2 / w - spec.epsilon * w * w;
            if (q > e_eps) e_eps = q;
            if (e_eps > spec.e_cap) {
                star_ok = false;
                std::ostringstream os;
                os << "condition (*) fails at shell R=" << R << " point (";
                for (std::size_t c = 0; c < p.x.size(); ++c) os << (c ? "," : "") << p[c];
                os << "): required E = " << q;
                fail_note = os.str();
                break;
            }
        }
        if (!star_ok) break;
    }
    e_eps = std::max(e_eps, 0.0);

    // a_m ladder over the family (single shared pass per member)
    std::vector<double> a(spec.n + 1, 0.0);
    double margin = 1e300;
    std::vector<std::vector<double>> member_ests;
    for (const auto& f : family) {
        auto f_ev = std::make_shared<PolyEval>(f);
        std::vector<NamedObservable> obs;
        obs.push_back(poly_observable("f^2", f * f));
        for (int kk = 1; kk <= spec.n; ++kk)
            obs.push_back(poly_observable("grad_k", grad_power_square_poly(G, f, kk)));
        for (int mm = 1; mm <= spec.n; ++mm) {
            obs.push_back({"w^m f^2", [f_ev, &w_fn, mm](const Point& p) {
                               const double fv = (*f_ev)(std::span<const double>(p.x));
                               return std::pow(w_fn(p), mm) * fv * fv;
                           }});
        }
        const auto ests = integrator.means(obs);
        std::vector<double> vals;
        for (const auto& e : ests) vals.push_back(e.mean);
        const double f2 = vals[0];
        double grad_cum = 0.0;
        for (int mm = 1; mm <= spec.n; ++mm) {
            grad_cum += vals[mm];
            const double num = vals[spec.n + mm];
            const double den = grad_cum + f2;
            if (den > 1e-12) {
                a[mm] = std::max(a[mm], num / den);
            } else {
                margin = std::min(margin, -num); // degenerate member: holds iff num <= 0
            }
        }
        member_ests.push_back(std::move(vals));
    }
    for (const auto& vals : member_ests) {
        double grad_cum = 0.0;
        for (int mm = 1; mm <= spec.n; ++mm) {
            grad_cum += vals[mm];
            const double den = grad_cum + vals[0];
            if (den > 1e-12)
                margin = std::min(margin, a[mm] * den - vals[spec.n + mm]);
        }
    }

    out.constants.push_back({"epsilon", spec.epsilon});
    out.constants.push_back({"E_eps", e_eps});
    for (int mm = 1; mm <= spec.n; ++mm)
        out.constants.push_back({"a_" + std::to_string(mm), a[mm]});
    out.constants.push_back({"gate", spec.epsilon * a[1] * spec.n * spec.n / 2.0});
    out.details.push_back({"weight_min_on_scan", w_min});
    out.margin = margin == 1e300 ? 0.0 : margin;
    out.feasible = star_ok && (shifted || w_min >= 0.0);
    if (!fail_note.empty()) out.details.push_back({"condition_failed", 1.0});
    return out;
}

} // namespace carnot
