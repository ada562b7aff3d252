#include "carnot/potential.hpp"

#include <cmath>

#include "carnot/error.hpp"

namespace carnot {

namespace {

bool is_integral(double s) { return std::nearbyint(s) == s && std::isfinite(s); }

double powi(double b, long e) {
    double out = 1.0;
    bool inv = e < 0;
    unsigned long k = inv ? -e : e;
    while (k != 0) {
        if (k & 1ul) out *= b;
        b *= b;
        k >>= 1ul;
    }
    return inv ? 1.0 / out : out;
}

// scalar profile h and its first two derivatives at t
struct Profile {
    double h = 0.0, d1 = 0.0, d2 = 0.0;
};

Profile power_profile(double kappa, double t) {
    Profile p;
    p.h = std::pow(t, kappa);
    p.d1 = kappa * std::pow(t, kappa - 1.0);
    p.d2 = kappa * (kappa - 1.0) * std::pow(t, kappa - 2.0);
    return p;
}

Profile radial_cosine_profile(const RadialCosine& rc, double t) {
    const double a = rc.alpha, e = rc.eps, w = rc.omega, k = rc.kappa;
    const double tk = std::pow(t, k);
    const double cw = std::cos(w * tk), sw = std::sin(w * tk);
    Profile p;
    p.h = std::pow(t, a) * (1.0 + e * cw);
    p.d1 = std::pow(t, a - 1.0) * (a * (1.0 + e * cw) - e * w * k * tk * sw);
    p.d2 = a * (a - 1.0) * std::pow(t, a - 2.0) * (1.0 + e * cw) -
           e * w * k * (2.0 * a + k - 1.0) * std::pow(t, a + k - 2.0) * sw -
           e * w * w * k * k * std::pow(t, a + 2.0 * k - 2.0) * cw;
    return p;
}

struct OuterJet {
    double g = 0.0, d1 = 0.0, d2 = 0.0;
};

OuterJet outer_jet(const OuterProfile& o, double t) {
    OuterJet j;
    auto pw = [&](double e) -> double {
        if (t > 0.0) return std::pow(t, e);
        if (is_integral(e) && (e >= 0.0 || t != 0.0)) return powi(t, static_cast<long>(e));
        throw SingularPointError("outer profile t^" + std::to_string(e) +
                                 " undefined at t = " + std::to_string(t));
    };
    // vanishing coefficients must not force evaluation of negative powers
    auto term = [&](double coef, double expnt) { return coef == 0.0 ? 0.0 : coef * pw(expnt); };
    if (o.kind == OuterProfile::Kind::power) {
        j.g = pw(o.s);
        j.d1 = term(o.s, o.s - 1.0);
        j.d2 = term(o.s * (o.s - 1.0), o.s - 2.0);
    } else {
        const double ts = pw(o.s);
        j.g = std::exp(o.c * ts);
        const double u1 = term(o.c * o.s, o.s - 1.0);
        const double u2 = term(o.c * o.s * (o.s - 1.0), o.s - 2.0);
        j.d1 = u1 * j.g;
        j.d2 = (u1 * u1 + u2) * j.g;
    }
    return j;
}

const char* kind_name(const PotentialSpec& pot) {
    return std::visit(
        [](const auto& v) -> const char* {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, KaplanPower>) return "kaplan_power";
            if constexpr (std::is_same_v<T, RadialCosine>) return "radial_cosine";
            if constexpr (std::is_same_v<T, PolarLog>) return "polar_log";
            if constexpr (std::is_same_v<T, QuadricPower>) return "quadric_power";
            if constexpr (std::is_same_v<T, DualMonomial>) return "dual_monomial";
            return "polynomial";
        },
        pot);
}

} // namespace

std::string potential_family_name(const PotentialSpec& pot) { return kind_name(pot); }

void validate_potential(const CarnotGroup& G, const PotentialSpec& pot) {
    const std::string fam = kind_name(pot);
    auto require = [&](bool ok, const std::string& what) {
        if (!ok) throw Error(fam + ": " + what);
    };
    if (const auto* kp = std::get_if<KaplanPower>(&pot)) {
        require(kp->kappa > 0.0, "kappa must be > 0");
        if (!G.is_heisenberg()) throw UnsupportedError(fam + " requires a Heisenberg group");
    } else if (const auto* rc = std::get_if<RadialCosine>(&pot)) {
        require(rc->alpha > 0.0, "alpha must be > 0");
        require(rc->omega > 0.0, "omega must be > 0");
        require(rc->kappa > 0.0, "kappa must be > 0");
        require(rc->eps > 0.0 && rc->eps < 1.0, "eps must lie in (0,1)");
        if (rc->norm == NormKind::kaplan && !G.is_heisenberg())
            throw UnsupportedError(fam + " with the Kaplan norm requires a Heisenberg group");
        if (rc->norm == NormKind::euclidean && G.is_heisenberg())
            throw UnsupportedError(fam + " with the euclidean norm requires a euclidean group");
    } else if (const auto* pl = std::get_if<PolarLog>(&pot)) {
        require(pl->eps > 0.0 && pl->eps < 1.0, "eps must lie in (0,1)");
        if (G.kind != GroupKind::euclidean || G.dim != 2)
            throw UnsupportedError(fam + " requires euclidean(2)");
    } else if (const auto* qp = std::get_if<QuadricPower>(&pot)) {
        require(qp->n >= 1, "power must be >= 1");
        if (!(G.is_heisenberg() && G.n == 1))
            throw UnsupportedError(fam + " requires heisenberg(1)");
    } else if (const auto* dm = std::get_if<DualMonomial>(&pot)) {
        require(static_cast<int>(dm->alpha.size()) == G.horizontal_dim,
                "multi-index length must equal the generator count");
        require(mi_total(dm->alpha) >= 1, "multi-index must be nonzero");
        require(dm->outer.s > 0.0, "outer exponent must be > 0");
    } else if (const auto* pp = std::get_if<PolynomialPotential>(&pot)) {
        if (pp->poly.dim() != G.dim) throw DimensionError(fam + ": dimension mismatch");
    }
}

bool potential_integrable(const PotentialSpec& pot) {
    if (std::holds_alternative<DualMonomial>(pot)) return false;
    if (const auto* rc = std::get_if<RadialCosine>(&pot))
        return rc->alpha > 0.0 && rc->eps < 1.0;
    if (const auto* kp = std::get_if<KaplanPower>(&pot)) return kp->kappa > 0.0;
    return true; // polynomial growth is checked numerically at integration time
}

std::optional<Polynomial> as_polynomial(const CarnotGroup& G, const PotentialSpec& pot) {
    if (const auto* pp = std::get_if<PolynomialPotential>(&pot)) return pp->poly;
    if (const auto* qp = std::get_if<QuadricPower>(&pot)) {
        // (x^2 + y^2 + 2 z^2)^n / (2n)
        Polynomial base(G.dim);
        for (int i = 0; i < G.horizontal_dim; ++i)
            base += Polynomial::coordinate(G.dim, i) * Polynomial::coordinate(G.dim, i);
        Polynomial z2 = Polynomial::coordinate(G.dim, G.dim - 1) * Polynomial::coordinate(G.dim, G.dim - 1);
        base += 2 * z2;
        Polynomial out = Polynomial::constant(G.dim, 1);
        for (int k = 0; k < qp->n; ++k) out = out * base;
        return out.scaled(Rational(1, 2 * qp->n));
    }
    if (const auto* kp = std::get_if<KaplanPower>(&pot)) {
        // N^kappa is polynomial exactly when kappa is a multiple of 4
        if (is_integral(kp->kappa) && static_cast<long>(kp->kappa) % 4 == 0 && kp->kappa > 0) {
            const long q = static_cast<long>(kp->kappa) / 4;
            Polynomial K = kaplan_quartic_poly(G);
            Polynomial out = Polynomial::constant(G.dim, 1);
            for (long k = 0; k < q; ++k) out = out * K;
            return out;
        }
    }
    if (const auto* dm = std::get_if<DualMonomial>(&pot)) {
        if (dm->outer.kind == OuterProfile::Kind::power && is_integral(dm->outer.s)) {
            Polynomial m = horizontal_monomial(G, dm->alpha);
            Polynomial out = Polynomial::constant(G.dim, 1);
            for (long k = 0; k < static_cast<long>(dm->outer.s); ++k) out = out * m;
            return out;
        }
    }
    return std::nullopt;
}

double Jet2::hess_abs_sum() const {
    double s = 0.0;
    for (const auto& row : hess_h)
        for (double v : row) s += std::abs(v);
    return s;
}

PotentialEvaluator::PotentialEvaluator(const CarnotGroup& G, PotentialSpec pot)
    : G_(G), pot_(std::move(pot)) {
    validate_potential(G_, pot_);
    const auto poly = as_polynomial(G_, pot_);
    const bool dual = std::holds_alternative<DualMonomial>(pot_);
    if (poly && !dual) {
        symbolic_ = true;
        u_eval_ = PolyEval(*poly);
        const int k = G_.horizontal_dim;
        std::vector<Polynomial> grads;
        for (int i = 0; i < k; ++i) grads.push_back(G_.generators[i].apply(*poly));
        for (int i = 0; i < k; ++i) grad_eval_.push_back(PolyEval(grads[i]));
        hess_eval_.resize(k);
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < k; ++i)
                hess_eval_[j].push_back(PolyEval(G_.generators[j].apply(grads[i])));
        if (!G_.center_fields.empty()) {
            Polynomial zu = G_.center_fields.front().apply(*poly);
            center_eval_.push_back(PolyEval(zu));
            center_eval_.push_back(PolyEval(G_.center_fields.front().apply(zu)));
        }
    }
}

double PotentialEvaluator::value(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != G_.dim) throw DimensionError("point dimension mismatch");
    if (symbolic_) return u_eval_(x);
    if (const auto* kp = std::get_if<KaplanPower>(&pot_)) {
        const Point p{std::vector<double>(x.begin(), x.end())};
        return std::pow(kaplan_quartic(G_, p), kp->kappa / 4.0);
    }
    if (const auto* rc = std::get_if<RadialCosine>(&pot_)) {
        double t;
        if (rc->norm == NormKind::kaplan) {
            const Point p{std::vector<double>(x.begin(), x.end())};
            t = kaplan_norm(G_, p);
        } else {
            double s = 0.0;
            for (double v : x) s += v * v;
            t = std::sqrt(s);
        }
        return std::pow(t, rc->alpha) * (1.0 + rc->eps * std::cos(rc->omega * std::pow(t, rc->kappa)));
    }
    if (const auto* pl = std::get_if<PolarLog>(&pot_)) {
        const double r = std::hypot(x[0], x[1]);
        if (r == 0.0) return 0.0;
        const double a = (1.0 + pl->eps * (x[0] / r)) / (1.0 - pl->eps);
        return std::pow(r, a);
    }
    if (const auto* dm = std::get_if<DualMonomial>(&pot_)) {
        double t = 1.0;
        for (int i = 0; i < G_.horizontal_dim; ++i) t *= powi(x[i], dm->alpha[i]);
        return outer_jet(dm->outer, t).g;
    }
    // polynomial potentials take the symbolic branch above
    throw Error("unreachable potential kind");
}

Jet2 PotentialEvaluator::jet(const Point& p, double delta_sing) const {
    if (std::holds_alternative<DualMonomial>(pot_)) return jet_dual(p);
    if (symbolic_) return jet_polynomial(p);
    if (std::holds_alternative<PolarLog>(pot_)) return jet_polar(p, delta_sing);
    return jet_from_profile(p, delta_sing);
}

Jet2 PotentialEvaluator::jet_polynomial(const Point& p) const {
    Jet2 jet;
    const std::span<const double> x(p.x);
    const int k = G_.horizontal_dim;
    jet.u = u_eval_(x);
    jet.grad_h.resize(k);
    jet.hess_h.assign(k, std::vector<double>(k, 0.0));
    for (int i = 0; i < k; ++i) jet.grad_h[i] = grad_eval_[i](x);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < k; ++i) jet.hess_h[j][i] = hess_eval_[j][i](x);
    if (!center_eval_.empty()) jet.center = {center_eval_[0](x), center_eval_[1](x)};
    jet.gradsq = 0.0;
    for (double g : jet.grad_h) jet.gradsq += g * g;
    jet.lap = 0.0;
    for (int i = 0; i < k; ++i) jet.lap += jet.hess_h[i][i];
    return jet;
}

Jet2 PotentialEvaluator::jet_from_profile(const Point& p, double delta_sing) const {
    const int k = G_.horizontal_dim;
    Jet2 jet;
    jet.grad_h.resize(k);
    jet.hess_h.assign(k, std::vector<double>(k, 0.0));

    Profile prof;
    if (const auto* kp = std::get_if<KaplanPower>(&pot_)) {
        const HomNormJet nj = kaplan_jet(G_, p, delta_sing);
        prof = power_profile(kp->kappa, nj.value);
        jet.u = prof.h;
        for (int i = 0; i < k; ++i) jet.grad_h[i] = prof.d1 * nj.grad_h[i];
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < k; ++i)
                jet.hess_h[j][i] =
                    prof.d2 * nj.grad_h[j] * nj.grad_h[i] + prof.d1 * nj.hess_h[j][i];
        jet.gradsq = prof.d1 * prof.d1 * nj.gradsq;
        jet.lap = prof.d2 * nj.gradsq + prof.d1 * nj.laplacian;
        const auto [zn, z2n] = *nj.z_jet;
        jet.center = {prof.d1 * zn, prof.d2 * zn * zn + prof.d1 * z2n};
        return jet;
    }
    const auto& rc = std::get<RadialCosine>(pot_);
    if (rc.norm == NormKind::kaplan) {
        const HomNormJet nj = kaplan_jet(G_, p, delta_sing);
        prof = radial_cosine_profile(rc, nj.value);
        jet.u = prof.h;
        for (int i = 0; i < k; ++i) jet.grad_h[i] = prof.d1 * nj.grad_h[i];
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < k; ++i)
                jet.hess_h[j][i] =
                    prof.d2 * nj.grad_h[j] * nj.grad_h[i] + prof.d1 * nj.hess_h[j][i];
        jet.gradsq = prof.d1 * prof.d1 * nj.gradsq;
        jet.lap = prof.d2 * nj.gradsq + prof.d1 * nj.laplacian;
        const auto [zn, z2n] = *nj.z_jet;
        jet.center = {prof.d1 * zn, prof.d2 * zn * zn + prof.d1 * z2n};
        return jet;
    }
    // euclidean radius route: grad r = x/r, hess r = (I - x x^T/r^2)/r
    double rsq = 0.0;
    for (double v : p.x) rsq += v * v;
    const double r = std::sqrt(rsq);
    if (!(r > delta_sing)) throw SingularPointError("radial jet requested at the origin");
    prof = radial_cosine_profile(rc, r);
    jet.u = prof.h;
    for (int i = 0; i < k; ++i) jet.grad_h[i] = prof.d1 * p[i] / r;
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < k; ++i) {
            double h = prof.d2 * p[i] * p[j] / rsq - prof.d1 * p[i] * p[j] / (rsq * r);
            if (i == j) h += prof.d1 / r;
            jet.hess_h[j][i] = h;
        }
    jet.gradsq = prof.d1 * prof.d1;
    jet.lap = prof.d2 + (k - 1) * prof.d1 / r;
    return jet;
}

PolarJet polar_jet(const PolarLog& pot, double r, double phi) {
    if (!(r > 0.0)) throw SingularPointError("polar jet requires r > 0");
    const double e = pot.eps;
    const double cphi = std::cos(phi), sphi = std::sin(phi);
    const double a = (1.0 + e * cphi) / (1.0 - e);
    const double U = std::pow(r, a);
    const double L = std::log(r);
    PolarJet out;
    out.gradsq = U * U / ((1.0 - e) * (1.0 - e) * r * r) *
                 ((1.0 + e * cphi) * (1.0 + e * cphi) + e * e * sphi * sphi * L * L);
    out.lap = U / ((1.0 - e) * (1.0 - e) * r * r) *
              ((1.0 + e * cphi) * (1.0 + e * cphi) + e * e * sphi * sphi * L * L -
               e * (1.0 - e) * cphi * L);
    return out;
}

Jet2 PotentialEvaluator::jet_polar(const Point& p, double delta_sing) const {
    const auto& pl = std::get<PolarLog>(pot_);
    const double x = p[0], y = p[1];
    const double r = std::hypot(x, y);
    if (!(r > delta_sing)) throw SingularPointError("polar-log jet requested at the origin");
    const double c = x / r, s = y / r;
    const double phi = std::atan2(y, x);
    const double e = pl.eps;
    const double L = std::log(r);
    const double a = (1.0 + e * c) / (1.0 - e);
    const double a1 = -e * s / (1.0 - e);  // d a / d phi
    const double a2 = -e * c / (1.0 - e);  // d^2 a / d phi^2
    const double U = std::pow(r, a);

    // U = exp(g), g = a(phi) log r
    const double g_r = a / r;
    const double g_p = a1 * L;
    const double g_rr = -a / (r * r);
    const double g_rp = a1 / r;
    const double g_pp = a2 * L;

    const double U_r = U * g_r;
    const double U_p = U * g_p;
    const double U_rr = U * (g_r * g_r + g_rr);
    const double U_rp = U * (g_r * g_p + g_rp);
    const double U_pp = U * (g_p * g_p + g_pp);

    Jet2 jet;
    jet.u = U;
    jet.grad_h = {c * U_r - s * U_p / r, s * U_r + c * U_p / r};
    jet.hess_h.assign(2, std::vector<double>(2, 0.0));
    const double Uxx = c * c * U_rr - 2.0 * c * s * U_rp / r + s * s * U_pp / (r * r) +
                       s * s * U_r / r + 2.0 * c * s * U_p / (r * r);
    const double Uyy = s * s * U_rr + 2.0 * c * s * U_rp / r + c * c * U_pp / (r * r) +
                       c * c * U_r / r - 2.0 * c * s * U_p / (r * r);
    const double Uxy = c * s * U_rr + (c * c - s * s) * U_rp / r - c * s * U_pp / (r * r) -
                       c * s * U_r / r - (c * c - s * s) * U_p / (r * r);
    jet.hess_h[0][0] = Uxx;
    jet.hess_h[0][1] = Uxy;
    jet.hess_h[1][0] = Uxy;
    jet.hess_h[1][1] = Uyy;

    const PolarJet pj = polar_jet(pl, r, phi);
    jet.gradsq = pj.gradsq;
    jet.lap = pj.lap;
    return jet;
}

Jet2 PotentialEvaluator::jet_dual(const Point& p) const {
    const auto& dm = std::get<DualMonomial>(pot_);
    const int k = G_.horizontal_dim;
    auto mono = [&](const std::vector<long>& exps) {
        double out = 1.0;
        for (int i = 0; i < k; ++i) {
            if (exps[i] < 0) return 0.0; // paired with a vanishing combinatorial factor
            out *= powi(p[i], exps[i]);
        }
        return out;
    };
    std::vector<long> base(dm.alpha.begin(), dm.alpha.end());
    const double t = mono(base);
    const OuterJet g = outer_jet(dm.outer, t);

    Jet2 jet;
    jet.u = g.g;
    jet.grad_h.resize(k);
    jet.hess_h.assign(k, std::vector<double>(k, 0.0));
    for (int i = 0; i < k; ++i) {
        if (dm.alpha[i] == 0) {
            jet.grad_h[i] = 0.0;
            continue;
        }
        auto e = base;
        e[i] -= 1;
        jet.grad_h[i] = dm.alpha[i] * g.d1 * mono(e);
    }
    std::vector<long> dbl(base);
    for (auto& v : dbl) v *= 2;
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i < k; ++i) {
            const double ai = dm.alpha[i], aj = dm.alpha[j];
            double h = 0.0;
            if (i == j) {
                if (dm.alpha[i] >= 1) {
                    auto e2 = dbl;
                    e2[i] -= 2;
                    h += ai * ai * g.d2 * mono(e2);
                }
                if (dm.alpha[i] >= 2) {
                    auto e1 = base;
                    e1[i] -= 2;
                    h += ai * (ai - 1.0) * g.d1 * mono(e1);
                }
            } else if (dm.alpha[i] >= 1 && dm.alpha[j] >= 1) {
                auto e1 = base;
                e1[i] -= 1;
                e1[j] -= 1;
                auto e2 = dbl;
                e2[i] -= 1;
                e2[j] -= 1;
                h = ai * aj * (g.d1 * mono(e1) + g.d2 * mono(e2));
            }
            jet.hess_h[j][i] = h;
        }
    }
    if (G_.is_heisenberg()) jet.center = {0.0, 0.0}; // eta^alpha has no z-dependence
    jet.gradsq = 0.0;
    for (double v : jet.grad_h) jet.gradsq += v * v;
    jet.lap = 0.0;
    for (int i = 0; i < k; ++i) jet.lap += jet.hess_h[i][i];
    return jet;
}

Jet2 u_jet(const CarnotGroup& G, const PotentialSpec& pot, const Point& p, double delta_sing) {
    return PotentialEvaluator(G, pot).jet(p, delta_sing);
}

double u_value(const CarnotGroup& G, const PotentialSpec& pot, const Point& p) {
    return PotentialEvaluator(G, pot).value(p);
}

Jet2 fd_jet(const CarnotGroup& G, const PotentialSpec& pot, const Point& p, double h) {
    const PotentialEvaluator eval(G, pot);
    const int k = G.horizontal_dim;
    const int d = G.dim;

    // field coefficient a_{ic}(q): generator i, partial c
    auto field_coeffs = [&](const DiffOp& X, const Point& q) {
        std::vector<double> a(d, 0.0);
        for (const auto& [alpha, coeff] : X.terms()) {
            for (int c = 0; c < d; ++c)
                if (alpha == mi_unit(d, c)) a[c] = coeff(std::span<const double>(q.x));
        }
        return a;
    };
    auto partial = [&](const std::function<double(const Point&)>& f, const Point& q, int c) {
        Point qp = q, qm = q;
        qp[c] += h;
        qm[c] -= h;
        return (f(qp) - f(qm)) / (2.0 * h);
    };
    auto along_field = [&](const DiffOp& X, const std::function<double(const Point&)>& f,
                           const Point& q) {
        const auto a = field_coeffs(X, q);
        double out = 0.0;
        for (int c = 0; c < d; ++c)
            if (a[c] != 0.0) out += a[c] * partial(f, q, c);
        return out;
    };

    std::function<double(const Point&)> value_fn = [&](const Point& q) { return eval.value(q); };

    Jet2 jet;
    jet.u = eval.value(p);
    jet.grad_h.resize(k);
    jet.hess_h.assign(k, std::vector<double>(k, 0.0));
    for (int i = 0; i < k; ++i) jet.grad_h[i] = along_field(G.generators[i], value_fn, p);
    for (int i = 0; i < k; ++i) {
        std::function<double(const Point&)> xi_fn = [&, i](const Point& q) {
            return along_field(G.generators[i], value_fn, q);
        };
        for (int j = 0; j < k; ++j) jet.hess_h[j][i] = along_field(G.generators[j], xi_fn, p);
    }
    if (!G.center_fields.empty()) {
        const DiffOp& Z = G.center_fields.front();
        std::function<double(const Point&)> z_fn = [&](const Point& q) {
            return along_field(Z, value_fn, q);
        };
        jet.center = {along_field(Z, value_fn, p), along_field(Z, z_fn, p)};
    }
    jet.gradsq = 0.0;
    for (double v : jet.grad_h) jet.gradsq += v * v;
    jet.lap = 0.0;
    for (int i = 0; i < k; ++i) jet.lap += jet.hess_h[i][i];
    return jet;
}

double v_potential(const CarnotGroup& G, const PotentialSpec& pot, const Point& p,
                   double delta_sing) {
    const Jet2 j = u_jet(G, pot, p, delta_sing);
    return 0.25 * j.gradsq - 0.5 * j.lap;
}

VzValue v_z_potential(const CarnotGroup& G, const PotentialSpec& pot, const Point& p,
                      double delta_sing) {
    if (!G.is_heisenberg())
        throw UnsupportedError("center-direction potential requires a Heisenberg group");
    const Jet2 j = u_jet(G, pot, p, delta_sing);
    VzValue out;
    const auto [zu, z2u] = *j.center;
    out.jet = 0.25 * zu * zu - 0.5 * z2u;
    if (const auto* kp = std::get_if<KaplanPower>(&pot)) {
        // V_Z = 16 k N^{k-4} [ (k N^k + 6 - 2(k-1)) z^2/N^4 - 1/4 ]
        const double N = kaplan_norm(G, p);
        const double z = p[G.dim - 1];
        const double kpw = kp->kappa;
        out.closed_form = 16.0 * kpw * std::pow(N, kpw - 4.0) *
                          ((kpw * std::pow(N, kpw) + 6.0 - 2.0 * (kpw - 1.0)) * z * z /
                               (N * N * N * N) -
                           0.25);
    }
    return out;
}

std::vector<double> fd_horizontal_gradient(const CarnotGroup& G,
                                           const std::function<double(const Point&)>& f,
                                           const Point& p, double h) {
    const int d = G.dim;
    std::vector<double> out;
    for (const auto& X : G.generators) {
        double acc = 0.0;
        for (const auto& [alpha, coeff] : X.terms()) {
            for (int c = 0; c < d; ++c) {
                if (alpha != mi_unit(d, c)) continue;
                const double a = coeff(std::span<const double>(p.x));
                if (a == 0.0) continue;
                Point qp = p, qm = p;
                qp[c] += h;
                qm[c] -= h;
                acc += a * (f(qp) - f(qm)) / (2.0 * h);
            }
        }
        out.push_back(acc);
    }
    return out;
}

} // namespace carnot
