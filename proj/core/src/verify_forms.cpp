// Quadratic-form verifiers: U-bound defect, integration by parts, the step-2
// operator identity, the beta-LSI ratio, and the Hardy inequalities.
#include <cmath>
#include <memory>
#include <sstream>

#include "carnot/error.hpp"
#include "carnot/verifiers.hpp"

namespace carnot {

std::vector<Polynomial> horizontal_gradient(const CarnotGroup& G, const Polynomial& f) {
    std::vector<Polynomial> out;
    for (const auto& X : G.generators) out.push_back(X.apply(f));
    return out;
}

Polynomial gradient_square_poly(const CarnotGroup& G, const Polynomial& f) {
    Polynomial out(G.dim);
    for (const auto& X : G.generators) {
        Polynomial g = X.apply(f);
        out += g * g;
    }
    return out;
}

Polynomial grad_power_square_poly(const CarnotGroup& G, const Polynomial& f, unsigned m) {
    Polynomial out(G.dim);
    for (const auto& alpha : multi_indices_of_degree(G.horizontal_dim, m)) {
        Polynomial g = sub_gradient_power(G, alpha).apply(f);
        out += g * g;
    }
    return out;
}

Polynomial grad_word_square_poly(const CarnotGroup& G, const Polynomial& f, unsigned m) {
    Polynomial out(G.dim);
    std::vector<Polynomial> level{f};
    for (unsigned t = 0; t < m; ++t) {
        std::vector<Polynomial> next;
        next.reserve(level.size() * G.generators.size());
        for (const auto& g : level)
            for (const auto& X : G.generators) next.push_back(X.apply(g));
        level = std::move(next);
    }
    for (const auto& g : level) out += g * g;
    return out;
}

NamedObservable poly_observable(std::string name, const Polynomial& p) {
    auto ev = std::make_shared<PolyEval>(p);
    return {std::move(name),
            [ev](const Point& q) { return (*ev)(std::span<const double>(q.x)); }};
}

namespace {

bool grid_contract(double resid, double scale, double tol) {
    return std::abs(resid) <= tol * std::max(scale, 1e-12);
}

bool mc_contract(const Estimate& identity) {
    return std::abs(identity.mean) <= 3.0 * identity.std_err + 1e-12;
}

} // namespace

DefectReport ubound_defect(const CarnotGroup& G, const PotentialSpec& pot, const Polynomial& f,
                           MeasureIntegrator& integrator, double tol) {
    if (f.dim() != G.dim) throw DimensionError("test polynomial dimension mismatch");
    const auto eval = std::make_shared<PotentialEvaluator>(G, pot);
    auto f_ev = std::make_shared<PolyEval>(f);
    auto grads = std::make_shared<std::vector<PolyEval>>();
    for (const auto& g : horizontal_gradient(G, f)) grads->push_back(PolyEval(g));
    const int k = G.horizontal_dim;

    NamedObservable lhs_obs{"f^2 V", [=](const Point& p) {
                                const Jet2 j = eval->jet(p);
                                const double fv = (*f_ev)(std::span<const double>(p.x));
                                return fv * fv * (0.25 * j.gradsq - 0.5 * j.lap);
                            }};
    NamedObservable rhs_obs = poly_observable("|grad f|^2", gradient_square_poly(G, f));
    NamedObservable defect_obs{"|grad(f e^{-U/2})|^2", [=](const Point& p) {
                                   const Jet2 j = eval->jet(p);
                                   const double fv = (*f_ev)(std::span<const double>(p.x));
                                   double s = 0.0;
                                   for (int i = 0; i < k; ++i) {
                                       const double t =
                                           (*grads)[i](std::span<const double>(p.x)) -
                                           0.5 * fv * j.grad_h[i];
                                       s += t * t;
                                   }
                                   return s;
                               }};
    // expectation-zero identity observable for the MC contract
    NamedObservable ident_obs{"three_way", [=](const Point& p) {
                                  const Jet2 j = eval->jet(p);
                                  const std::span<const double> x(p.x);
                                  const double fv = (*f_ev)(x);
                                  double s = 0.0;
                                  for (int i = 0; i < k; ++i) {
                                      const double gi = (*grads)[i](x);
                                      const double ti = gi - 0.5 * fv * j.grad_h[i];
                                      s += gi * gi - ti * ti;
                                  }
                                  return s - fv * fv * (0.25 * j.gradsq - 0.5 * j.lap);
                              }};

    auto ests = integrator.means({lhs_obs, rhs_obs, defect_obs, ident_obs});

    DefectReport rep;
    rep.title = "ubound_defect";
    rep.lhs = ests[0];
    rep.rhs = ests[1];
    rep.defect = ests[2].mean;
    rep.defect_err = ests[2].std_err;
    const double resid = rep.rhs.mean - rep.lhs.mean - rep.defect;
    rep.extra.push_back({"three_way_residual", resid});
    rep.extra.push_back({"identity_mean", ests[3].mean});
    rep.extra.push_back({"identity_std_err", ests[3].std_err});
    rep.contract = "rhs - lhs = defect";
    const double scale =
        std::max({std::abs(rep.lhs.mean), std::abs(rep.rhs.mean), std::abs(rep.defect)});
    rep.contract_ok = integrator.deterministic() ? grid_contract(resid, scale, tol)
                                                 : mc_contract(ests[3]);
    if (rep.rhs.mean != 0.0) rep.ratio = rep.lhs.mean / rep.rhs.mean;
    return rep;
}

DefectReport ibp_check(const CarnotGroup& G, const Polynomial& U, const Polynomial& f,
                       const Polynomial& g, MeasureIntegrator& integrator, double tol) {
    const int k = G.horizontal_dim;
    std::vector<NamedObservable> obs;
    for (int j = 0; j < k; ++j) {
        const DiffOp V = v_field(G, U, j);
        // f (V_j g) + (V_j f) g integrates to zero
        Polynomial a = f * V.apply(g) + V.apply(f) * g;
        obs.push_back(poly_observable("ibp_" + std::to_string(j + 1), a));
        obs.push_back(poly_observable("fVg_" + std::to_string(j + 1), f * V.apply(g)));
    }
    auto ests = integrator.means(obs);

    DefectReport rep;
    rep.title = "ibp_check";
    rep.contract = "mu(f V_j g) = -mu((V_j f) g) for every j";
    double lhs_sum = 0.0, defect = 0.0, scale = 0.0;
    bool ok = true;
    for (int j = 0; j < k; ++j) {
        const Estimate& resid = ests[2 * j];
        const Estimate& fvg = ests[2 * j + 1];
        lhs_sum += fvg.mean;
        defect += resid.mean;
        scale = std::max(scale, std::abs(fvg.mean));
        rep.extra.push_back({"residual_" + std::to_string(j + 1), resid.mean});
        ok = ok && (integrator.deterministic() ? grid_contract(resid.mean, std::abs(fvg.mean), tol)
                                               : mc_contract(resid));
    }
    rep.lhs = Estimate{lhs_sum, 0.0, 0.0};
    rep.rhs = Estimate{lhs_sum - defect, 0.0, 0.0};
    rep.defect = defect;
    rep.contract_ok = ok;
    return rep;
}

DefectReport step2_identity_check(const CarnotGroup& G, const PotentialSpec& pot,
                                  const Polynomial& f, MeasureIntegrator& integrator, double tol) {
    const auto U = as_polynomial(G, pot);
    if (!U) throw UnsupportedError("step-2 identity check needs a polynomial interaction");
    const int k = G.horizontal_dim;

    const DiffOp L = l_operator(G, *U);
    Polynomial lf = L.apply(f);
    Polynomial lhs_op = lf * lf; // ||L f||^2 integrand

    Polynomial brackets(G.dim);
    Polynomial products(G.dim);
    std::vector<DiffOp> V;
    for (int j = 0; j < k; ++j) V.push_back(v_field(G, *U, j));
    for (int j = 0; j < k; ++j) {
        for (int l = 0; l < k; ++l) {
            Polynomial b = commutator(V[l], V[j]).apply(f);
            brackets += b * b;
            Polynomial q = V[j].apply(V[l].apply(f));
            products += q * q;
        }
    }

    auto ests = integrator.means({poly_observable("Lf^2", lhs_op),
                                  poly_observable("bracket_sq", brackets),
                                  poly_observable("product_sq", products),
                                  poly_observable("identity", lhs_op + brackets - products)});

    DefectReport rep;
    rep.title = "step2_identity";
    rep.lhs = Estimate{ests[0].mean + ests[1].mean,
                       std::hypot(ests[0].std_err, ests[1].std_err), 0.0};
    rep.rhs = ests[2];
    rep.defect = rep.rhs.mean - rep.lhs.mean;
    rep.defect_err = std::hypot(rep.lhs.std_err, rep.rhs.std_err);
    rep.extra.push_back({"norm_Lf_sq", ests[0].mean});
    rep.extra.push_back({"bracket_sum", ests[1].mean});
    rep.extra.push_back({"identity_mean", ests[3].mean});
    rep.extra.push_back({"identity_std_err", ests[3].std_err});
    rep.contract = "||Lf||^2 + sum||[V_l,V_j]f||^2 = sum||V_j V_l f||^2";
    const double scale = std::max(std::abs(rep.lhs.mean), std::abs(rep.rhs.mean));
    rep.contract_ok = integrator.deterministic()
                          ? grid_contract(rep.defect, scale, tol)
                          : mc_contract(ests[3]);
    return rep;
}

DefectReport lsi_defect(const CarnotGroup& G, const PotentialSpec& pot, const Polynomial& f,
                        double beta, unsigned m, double p, MeasureIntegrator& integrator) {
    validate_potential(G, pot);
    if (!(beta > 0.0 && beta < 1.0)) throw Error("beta must lie in (0,1)");
    if (!(p > 0.0)) throw Error("p must be positive");
    auto f_ev = std::make_shared<PolyEval>(f);
    auto abs_pow = [f_ev, p](const Point& q) {
        return std::pow(std::abs((*f_ev)(std::span<const double>(q.x))), p);
    };
    const Estimate mass = integrator.mean(abs_pow, "|f|^p");
    if (!(mass.mean > 0.0))
        throw Error("undefined LSI ratio: mu|f|^p vanishes for this member");
    const double M = mass.mean;
    const double exponent = beta * static_cast<double>(m);

    std::vector<NamedObservable> obs;
    obs.push_back({"entropy", [f_ev, p, M, exponent](const Point& q) {
                       const double a = std::pow(std::abs((*f_ev)(std::span<const double>(q.x))), p);
                       if (a == 0.0) return 0.0;
                       return a * std::pow(std::abs(std::log(a / M)), exponent);
                   }});
    for (unsigned order = 0; order <= m; ++order) {
        for (const auto& alpha : multi_indices_of_degree(G.horizontal_dim, order)) {
            Polynomial g = sub_gradient_power(G, alpha).apply(f);
            auto g_ev = std::make_shared<PolyEval>(g);
            obs.push_back({"grad_term", [g_ev, p](const Point& q) {
                               return std::pow(std::abs((*g_ev)(std::span<const double>(q.x))), p);
                           }});
        }
    }
    auto ests = integrator.means(obs);

    DefectReport rep;
    rep.title = "lsi_defect";
    rep.lhs = ests[0];
    double rhs = 0.0, rhs_err_sq = 0.0;
    for (std::size_t i = 1; i < ests.size(); ++i) {
        rhs += ests[i].mean;
        rhs_err_sq += ests[i].std_err * ests[i].std_err;
    }
    rep.rhs = Estimate{rhs, std::sqrt(rhs_err_sq), 0.0};
    rep.defect = rhs - rep.lhs.mean;
    rep.ratio = rep.lhs.mean / rhs;
    rep.extra.push_back({"mu_abs_f_p", M});
    // both normalizations: the tight form lhs <= C rhs_core, and the
    // two-constant form lhs <= C rhs_core + D mu|f|^p (canonical minimal fit)
    rep.extra.push_back({"c_only_ratio", rep.lhs.mean / rhs});
    const TwoConstantFit fit = fit_two_constants({{rep.lhs.mean, rhs, M}});
    rep.extra.push_back({"c_fit", fit.c});
    rep.extra.push_back({"d_fit", fit.d});
    rep.contract = "informational: empirical constant lhs / sum_{|a|<=m} mu|grad^a f|^p";
    rep.contract_ok = true;
    return rep;
}

namespace {

// scalar profile (value, first, second derivative) of U as a function of the
// Kaplan norm, for the families that are genuinely norm-profiles
bool norm_profile(const PotentialSpec& pot, double t, double& h, double& h1, double& h2) {
    if (const auto* kp = std::get_if<KaplanPower>(&pot)) {
        h = std::pow(t, kp->kappa);
        h1 = kp->kappa * std::pow(t, kp->kappa - 1.0);
        h2 = kp->kappa * (kp->kappa - 1.0) * std::pow(t, kp->kappa - 2.0);
        return true;
    }
    if (const auto* rc = std::get_if<RadialCosine>(&pot)) {
        if (rc->norm != NormKind::kaplan) return false;
        const double a = rc->alpha, e = rc->eps, w = rc->omega, kk = rc->kappa;
        const double tk = std::pow(t, kk);
        const double cw = std::cos(w * tk), sw = std::sin(w * tk);
        h = std::pow(t, a) * (1.0 + e * cw);
        h1 = std::pow(t, a - 1.0) * (a * (1.0 + e * cw) - e * w * kk * tk * sw);
        h2 = a * (a - 1.0) * std::pow(t, a - 2.0) * (1.0 + e * cw) -
             e * w * kk * (2.0 * a + kk - 1.0) * std::pow(t, a + kk - 2.0) * sw -
             e * w * w * kk * kk * std::pow(t, a + 2.0 * kk - 2.0) * cw;
        return true;
    }
    return false;
}

double hardy_weight_raw(const PotentialSpec& pot, double delta_const, double t) {
    double h, h1, h2;
    if (!norm_profile(pot, t, h, h1, h2))
        throw UnsupportedError("improved Hardy weight needs a norm-profile interaction");
    return 0.25 * h1 * h1 - 0.5 * h2 - 0.5 * delta_const * h1 / t;
}

// f^2/|x|^2 is mu-integrable when every term of f carries a horizontal
// factor: then f = sum_i x_i g_i and f^2 <= |x|^2 n sum g_i^2
bool vanishes_on_center_axis(const CarnotGroup& G, const Polynomial& f) {
    for (const auto& [a, c] : f.terms()) {
        std::uint64_t horiz = 0;
        for (int i = 0; i < G.horizontal_dim; ++i) horiz += a[i];
        if (horiz == 0) return false;
    }
    return true;
}

} // namespace

HardyReport hardy_check(const CarnotGroup& G, const PotentialSpec& pot,
                        const std::vector<Polynomial>& family, MeasureIntegrator& integrator,
                        const HardyParams& params) {
    if (!G.is_heisenberg()) throw UnsupportedError("Hardy check targets Heisenberg groups");
    validate_potential(G, pot);
    const auto eval = std::make_shared<PotentialEvaluator>(G, pot);
    const int k = G.horizontal_dim;
    const double dc = params.delta_n_constant.value_or(static_cast<double>(G.hom_dim - 1));

    // shift D making W >= 0 along a norm scan
    double shift = params.weight_shift.value_or(-1.0);
    if (!params.weight_shift.has_value()) {
        double mn = 0.0;
        for (double t = 0.5; t <= 64.0; t *= 1.1)
            mn = std::min(mn, hardy_weight_raw(pot, dc, t));
        shift = std::max(0.0, -mn) + (mn < 0.0 ? 1e-9 : 0.0);
    }

    HardyReport out;
    out.direct.title = "hardy_direct";
    out.direct.contract =
        "mu(f^2/|x|^2) <= 2C mu|grad f|^2 + (C/2) mu(f^2 |grad U|^2), summed over members";
    out.improved.title = "hardy_improved";
    out.improved.family = "minimal (C~, D~) for mu(f^2 W^{1/2}/N) <= C~ mu|grad f|^2 + D~ mu f^2";

    std::vector<FitConstraint> constraints;
    double lhs_sum = 0.0, rhs_sum = 0.0, min_margin = 1e300;
    int used = 0;
    for (std::size_t idx = 0; idx < family.size(); ++idx) {
        const Polynomial& f = family[idx];
        if (!vanishes_on_center_axis(G, f)) {
            out.notices.push_back("member " + std::to_string(idx + 1) +
                                  " rejected: f^2/|x|^2 not integrable (term without a "
                                  "horizontal factor)");
            continue;
        }
        auto f_ev = std::make_shared<PolyEval>(f);
        NamedObservable inv_sq{"f^2/|x|^2", [f_ev, k](const Point& q) {
                                   const double fv = (*f_ev)(std::span<const double>(q.x));
                                   double xs = 0.0;
                                   for (int i = 0; i < k; ++i) xs += q[i] * q[i];
                                   return xs > 0.0 ? fv * fv / xs : 0.0;
                               }};
        NamedObservable grad_sq = poly_observable("|grad f|^2", gradient_square_poly(G, f));
        NamedObservable f_sq = poly_observable("f^2", f * f);
        NamedObservable f2_gradU{"f^2 |grad U|^2", [f_ev, eval](const Point& q) {
                                     const double fv = (*f_ev)(std::span<const double>(q.x));
                                     return fv * fv * eval->jet(q).gradsq;
                                 }};
        NamedObservable weighted{"f^2 W^(1/2)/N",
                                 [f_ev, eval, dc, shift, &pot, &G](const Point& q) {
                                     const double fv = (*f_ev)(std::span<const double>(q.x));
                                     const double N = kaplan_norm(G, q);
                                     if (N <= 0.0) return 0.0;
                                     const double W = hardy_weight_raw(pot, dc, N) + shift;
                                     return fv * fv * std::sqrt(std::max(W, 0.0)) / N;
                                 }};
        auto ests = integrator.means({inv_sq, grad_sq, f_sq, f2_gradU, weighted});
        const double lhs1 = ests[0].mean;
        const double rhs1 = 2.0 * params.hardy_c * ests[1].mean + 0.5 * params.hardy_c * ests[3].mean;
        lhs_sum += lhs1;
        rhs_sum += rhs1;
        min_margin = std::min(min_margin, rhs1 - lhs1);
        out.direct.extra.push_back({"margin_" + std::to_string(idx + 1), rhs1 - lhs1});
        constraints.push_back({ests[4].mean, ests[1].mean, ests[2].mean});
        ++used;
    }
    out.direct.lhs = Estimate{lhs_sum, 0.0, 0.0};
    out.direct.rhs = Estimate{rhs_sum, 0.0, 0.0};
    out.direct.defect = rhs_sum - lhs_sum;
    out.direct.contract_ok = used > 0 && min_margin >= -params.tol;

    const TwoConstantFit fit = fit_two_constants(constraints);
    out.improved.constants.push_back({"C_tilde", fit.c});
    out.improved.constants.push_back({"D_tilde", fit.d});
    out.improved.constants.push_back({"weight_shift", shift});
    out.improved.constants.push_back({"delta_n_constant", dc});
    out.improved.margin = fit.margin;
    out.improved.feasible = fit.feasible;
    return out;
}

ScanReport hardy_weight_scan(const CarnotGroup& G, const PotentialSpec& pot,
                             const std::vector<double>& shells, const HardyParams& params) {
    if (shells.size() < 2) throw Error("weight scan needs at least two shells");
    const double dc = params.delta_n_constant.value_or(static_cast<double>(G.hom_dim - 1));
    double shift = params.weight_shift.value_or(0.0);

    ScanReport rep;
    rep.title = "hardy_weight_scan";
    rep.coord_names = {"N"};
    rep.value_names = {"weight"}; // W^{1/2}/N
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (double N : shells) {
        const double w = std::sqrt(std::max(hardy_weight_raw(pot, dc, N) + shift, 0.0)) / N;
        rep.points.push_back({{N}, {w}, false, ""});
        const double lx = std::log(N), ly = std::log(w);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(shells.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    rep.summary.push_back({"loglog_slope", slope});
    return rep;
}

} // namespace carnot
