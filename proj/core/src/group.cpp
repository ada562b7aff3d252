#include "carnot/group.hpp"

#include <cmath>

#include "carnot/error.hpp"

namespace carnot {

int CarnotGroup::sign(int i) const {
    // 0-based i; formulas in 1-based terms: canonical (-1)^(i+1-based) etc.
    const int one_based = i + 1;
    int s = (one_based % 2 == 0) ? 1 : -1; // (-1)^i for canonical
    if (convention == HeisenbergConvention::example) s = -s;
    return s;
}

std::vector<std::string> CarnotGroup::coordinate_names() const {
    std::vector<std::string> names;
    for (int i = 0; i < horizontal_dim; ++i) names.push_back("x" + std::to_string(i + 1));
    if (is_heisenberg()) names.push_back("z");
    return names;
}

CarnotGroup make_group(GroupKind kind, int n, HeisenbergConvention conv) {
    if (n < 1) throw DimensionError("group dimension parameter must be >= 1");
    CarnotGroup G;
    G.kind = kind;
    G.n = n;
    G.convention = conv;
    if (kind == GroupKind::euclidean) {
        G.strata_dims = {n};
        G.dim = n;
        G.hom_dim = n;
        G.horizontal_dim = n;
        for (int i = 0; i < n; ++i) G.generators.push_back(DiffOp::partial(n, i));
        return G;
    }
    const int dim = 2 * n + 1;
    G.strata_dims = {2 * n, 1};
    G.dim = dim;
    G.hom_dim = 2 * n + 2;
    G.horizontal_dim = 2 * n;
    for (int i = 0; i < 2 * n; ++i) {
        DiffOp X = DiffOp::partial(dim, i);
        Polynomial c = Polynomial::coordinate(dim, G.partner(i)).scaled(Rational(G.sign(i), 2));
        X.insert_term(mi_unit(dim, dim - 1), c);
        G.generators.push_back(std::move(X));
    }
    G.center_fields.push_back(DiffOp::partial(dim, dim - 1));
    return G;
}

namespace {

template <typename T>
std::vector<T> product_impl(const CarnotGroup& G, std::span<const T> p, std::span<const T> q) {
    if (static_cast<int>(p.size()) != G.dim || static_cast<int>(q.size()) != G.dim)
        throw DimensionError("point dimension mismatch in group product");
    std::vector<T> out(p.begin(), p.end());
    for (int i = 0; i < G.dim; ++i) out[i] = p[i] + q[i];
    if (G.is_heisenberg()) {
        // z + z' + (1/2) sum_i s_i x_{partner(i)} x'_i
        T bil{};
        for (int i = 0; i < G.horizontal_dim; ++i) {
            T term = p[G.partner(i)] * q[i];
            if (G.sign(i) < 0)
                bil -= term;
            else
                bil += term;
        }
        out[G.dim - 1] = p[G.dim - 1] + q[G.dim - 1] + bil / 2;
    }
    return out;
}

template <typename T>
std::vector<T> dilate_impl(const CarnotGroup& G, const T& lambda, std::span<const T> p) {
    if (static_cast<int>(p.size()) != G.dim) throw DimensionError("point dimension mismatch in dilation");
    std::vector<T> out(p.begin(), p.end());
    for (int i = 0; i < G.horizontal_dim; ++i) out[i] = lambda * p[i];
    if (G.is_heisenberg()) out[G.dim - 1] = lambda * lambda * p[G.dim - 1];
    return out;
}

} // namespace

Point group_product(const CarnotGroup& G, const Point& p, const Point& q) {
    return Point{product_impl<double>(G, p.x, q.x)};
}

std::vector<Rational> group_product(const CarnotGroup& G, std::span<const Rational> p,
                                    std::span<const Rational> q) {
    return product_impl<Rational>(G, p, q);
}

Point group_inverse(const CarnotGroup&, const Point& p) {
    Point out = p;
    for (auto& v : out.x) v = -v;
    return out;
}

Point dilate(const CarnotGroup& G, double lambda, const Point& p) {
    if (!(lambda > 0.0)) throw Error("dilation requires lambda > 0");
    return Point{dilate_impl<double>(G, lambda, p.x)};
}

std::vector<Rational> dilate(const CarnotGroup& G, const Rational& lambda,
                             std::span<const Rational> p) {
    if (!(lambda > 0)) throw Error("dilation requires lambda > 0");
    return dilate_impl<Rational>(G, lambda, p);
}

std::vector<Polynomial> left_translation_polys(const CarnotGroup& G, std::span<const Rational> p) {
    if (static_cast<int>(p.size()) != G.dim) throw DimensionError("point dimension mismatch");
    std::vector<Polynomial> out;
    for (int i = 0; i < G.dim; ++i)
        out.push_back(Polynomial::constant(G.dim, p[i]) + Polynomial::coordinate(G.dim, i));
    if (G.is_heisenberg()) {
        Polynomial bil(G.dim);
        for (int i = 0; i < G.horizontal_dim; ++i) {
            Rational c = p[G.partner(i)] * Rational(G.sign(i), 2);
            bil += Polynomial::coordinate(G.dim, i).scaled(c);
        }
        out[G.dim - 1] += bil;
    }
    return out;
}

double kaplan_quartic(const CarnotGroup& G, const Point& p) {
    if (!G.is_heisenberg()) throw UnsupportedError("Kaplan norm requires a Heisenberg group");
    if (static_cast<int>(p.size()) != G.dim) throw DimensionError("point dimension mismatch");
    double xsq = 0.0;
    for (int i = 0; i < G.horizontal_dim; ++i) xsq += p[i] * p[i];
    const double z = p[G.dim - 1];
    return xsq * xsq + 16.0 * z * z;
}

Rational kaplan_quartic(const CarnotGroup& G, std::span<const Rational> p) {
    if (!G.is_heisenberg()) throw UnsupportedError("Kaplan norm requires a Heisenberg group");
    if (static_cast<int>(p.size()) != G.dim) throw DimensionError("point dimension mismatch");
    Rational xsq = 0;
    for (int i = 0; i < G.horizontal_dim; ++i) xsq += p[i] * p[i];
    const Rational& z = p[G.dim - 1];
    return xsq * xsq + 16 * z * z;
}

double kaplan_norm(const CarnotGroup& G, const Point& p) {
    return std::pow(kaplan_quartic(G, p), 0.25);
}

Polynomial kaplan_quartic_poly(const CarnotGroup& G) {
    if (!G.is_heisenberg()) throw UnsupportedError("Kaplan norm requires a Heisenberg group");
    Polynomial xsq(G.dim);
    for (int i = 0; i < G.horizontal_dim; ++i)
        xsq += Polynomial::coordinate(G.dim, i) * Polynomial::coordinate(G.dim, i);
    Polynomial z = Polynomial::coordinate(G.dim, G.dim - 1);
    return xsq * xsq + (16 * (z * z));
}

HomNormJet kaplan_jet(const CarnotGroup& G, const Point& p, double delta_sing) {
    const double N = kaplan_norm(G, p);
    if (!(N > delta_sing))
        throw SingularPointError("Kaplan jet requested inside the singular radius (N = " +
                                 std::to_string(N) + ")");
    const int k = G.horizontal_dim;
    const double z = p[G.dim - 1];
    double xsq = 0.0;
    for (int i = 0; i < k; ++i) xsq += p[i] * p[i];

    const double N3 = N * N * N;
    const double N7 = N3 * N3 * N;

    // numerators of X_i N: |x|^2 x_i + 4 s_i x_{partner(i)} z
    std::vector<double> num(k);
    for (int i = 0; i < k; ++i) num[i] = xsq * p[i] + 4.0 * G.sign(i) * p[G.partner(i)] * z;

    HomNormJet jet;
    jet.value = N;
    jet.grad_h.resize(k);
    for (int i = 0; i < k; ++i) jet.grad_h[i] = num[i] / N3;

    jet.hess_h.assign(k, std::vector<double>(k, 0.0));
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i < k; ++i) {
            // T_ij = X_j(num_i) = 2 x_j x_i + |x|^2 delta_ij
            //        + 4 s_i delta_{j,partner(i)} z
            //        + 2 s_i s_j x_{partner(i)} x_{partner(j)}
            double T = 2.0 * p[j] * p[i] +
                       2.0 * G.sign(i) * G.sign(j) * p[G.partner(i)] * p[G.partner(j)];
            if (i == j) T += xsq;
            if (j == G.partner(i)) T += 4.0 * G.sign(i) * z;
            jet.hess_h[j][i] = -3.0 * num[i] * num[j] / N7 + T / N3;
        }
    }

    jet.gradsq = xsq / (N * N);
    jet.laplacian = (G.hom_dim - 1) * xsq / N3;

    // center jets: ZN = 8 z / N^3, Z^2 N = 8/N^3 - 192 z^2 / N^7
    jet.z_jet = {8.0 * z / N3, 8.0 / N3 - 192.0 * z * z / N7};
    return jet;
}

Polynomial eta_functional(const CarnotGroup& G, int h) {
    if (h < 1 || h > G.dim) throw DimensionError("coordinate functional index out of range");
    return Polynomial::coordinate(G.dim, h - 1);
}

Polynomial horizontal_monomial(const CarnotGroup& G, const MultiIndex& alpha) {
    if (static_cast<int>(alpha.size()) != G.horizontal_dim)
        throw DimensionError("horizontal multi-index length must equal the generator count");
    MultiIndex full = mi_zero(G.dim);
    for (int i = 0; i < G.horizontal_dim; ++i) full[i] = alpha[i];
    return Polynomial::monomial(full, 1);
}

Polynomial dual_weight(const CarnotGroup& G, const MultiIndex& alpha) {
    Polynomial m = horizontal_monomial(G, alpha);
    BigInt fact = 1;
    for (auto a : alpha)
        for (std::uint32_t v = 2; v <= a; ++v) fact *= v;
    return m.scaled(Rational(BigInt(1), fact));
}

DiffOp sub_gradient_power(const CarnotGroup& G, const MultiIndex& beta) {
    if (static_cast<int>(beta.size()) != G.horizontal_dim)
        throw DimensionError("horizontal multi-index length must equal the generator count");
    DiffOp op = DiffOp::identity(G.dim);
    // X_1^{b1} X_2^{b2} ... applied left-to-right: op = X_1^{b1} ∘ ... first
    for (int i = G.horizontal_dim - 1; i >= 0; --i)
        for (std::uint32_t kk = 0; kk < beta[i]; ++kk) op = G.generators[i].compose(op);
    return op;
}

DiffOp sub_laplacian(const CarnotGroup& G) {
    DiffOp out = DiffOp::zero(G.dim);
    for (const auto& X : G.generators) out += X.compose(X);
    return out;
}

} // namespace carnot
