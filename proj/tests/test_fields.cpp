// Deformed fields V_j = X_j - (X_j U)/2: the commutator identity, the
// operator L, Rockland operators, closed-form ad expansions against brute
// force, and the harmonic polynomial library.
#include <doctest.h>

#include <cmath>
#include <random>

#include "carnot/error.hpp"
#include "carnot/fields.hpp"
#include "carnot/harmonic.hpp"

using namespace carnot;

namespace {

Polynomial random_poly(int dim, int max_deg, std::mt19937_64& rng, double density = 0.4) {
    std::uniform_int_distribution<int> num(-4, 4);
    std::uniform_int_distribution<int> den(1, 3);
    std::uniform_real_distribution<double> keep(0.0, 1.0);
    Polynomial out(dim);
    for (int deg = 0; deg <= max_deg; ++deg)
        for (const auto& a : multi_indices_of_degree(dim, deg)) {
            if (keep(rng) > density) continue;
            const int n = num(rng);
            if (n != 0) out.insert_term(a, Rational(n, den(rng)));
        }
    return out;
}

} // namespace

TEST_CASE("harmonic polynomials annihilated by the sub-Laplacian") {
    // the H^1 presentation with X = dx + y/2 dz annihilates W- = 4z - 2xy
    const CarnotGroup E = make_group(GroupKind::heisenberg, 1, HeisenbergConvention::example);
    const HarmonicLibrary lib = harmonic_library(E);
    CHECK(E.generators[0].apply(lib.w_minus).is_zero());
    // X(4z + 2xy) = 4y
    CHECK(E.generators[0].apply(lib.w_plus) == Polynomial::coordinate(3, 1).scaled(4));
    CHECK(E.generators[1].apply(lib.w_plus).is_zero());
    CHECK(E.generators[1].apply(lib.w_minus) == Polynomial::coordinate(3, 0).scaled(-4));
}

TEST_CASE("harmonic library identity W+^2 + W-^2 + 2 sum V_jk^2 = 2K on H^1..H^3") {
    for (int n : {1, 2, 3}) {
        for (auto conv : {HeisenbergConvention::canonical, HeisenbergConvention::example}) {
            const CarnotGroup G = make_group(GroupKind::heisenberg, n, conv);
            const HarmonicLibrary lib = harmonic_library(G);
            CHECK(lib.lap_w_plus.is_zero());
            CHECK(lib.lap_w_minus.is_zero());
            for (const auto& r : lib.lap_v_jk) CHECK(r.is_zero());
            CHECK(lib.norm_identity.is_zero());
            CHECK(lib.all_exact());
        }
    }
    CHECK_THROWS_AS(harmonic_library(make_group(GroupKind::euclidean, 2)), UnsupportedError);
}

TEST_CASE("deformed commutator identity [V_j, V_k] = V_{j,k}") {
    std::mt19937_64 rng(53);
    for (int n : {1, 2}) {
        const CarnotGroup G = make_group(GroupKind::heisenberg, n);
        for (int trial = 0; trial < 20; ++trial) {
            const Polynomial U = random_poly(G.dim, 4, rng);
            for (int j = 0; j < G.horizontal_dim; ++j)
                for (int k = 0; k < G.horizontal_dim; ++k)
                    CHECK(commutator(v_field(G, U, j), v_field(G, U, k)) ==
                          v_bracket_field(G, U, j, k));
        }
    }
}

TEST_CASE("triple V-brackets have no derivative part on H^n") {
    std::mt19937_64 rng(59);
    for (int n : {1, 2}) {
        const CarnotGroup G = make_group(GroupKind::heisenberg, n);
        for (int trial = 0; trial < 5; ++trial) {
            const Polynomial U = random_poly(G.dim, 4, rng);
            std::vector<DiffOp> V;
            for (int j = 0; j < G.horizontal_dim; ++j) V.push_back(v_field(G, U, j));
            for (int j = 0; j < G.horizontal_dim; ++j)
                for (int k = 0; k < G.horizontal_dim; ++k)
                    for (int l = 0; l < G.horizontal_dim; ++l)
                        CHECK(commutator(commutator(V[j], V[k]), V[l]).is_multiplication());
        }
    }
}

TEST_CASE("sub-Laplacian and the operator L on the euclidean line") {
    const CarnotGroup R1 = make_group(GroupKind::euclidean, 1);
    // U = x^2/2: V = d/dx - x/2
    const Polynomial U =
        (Polynomial::coordinate(1, 0) * Polynomial::coordinate(1, 0)).scaled(Rational(1, 2));
    const DiffOp V = v_field(R1, U, 0);
    DiffOp want(1);
    want.insert_term(mi_unit(1, 0), Polynomial::constant(1, 1));
    want.insert_term(mi_zero(1), Polynomial::coordinate(1, 0).scaled(Rational(-1, 2)));
    CHECK(V == want);
    const DiffOp L = l_operator(R1, U);
    CHECK(L == V.compose(V).scaled(-1));
    // L applied to the constant function gives minus the Schroedinger
    // potential: L(1) = (1/2) Delta U - (1/4)|grad U|^2 = -V
    CHECK(L.apply(Polynomial::constant(1, 1)) == v_potential_poly(R1, U).scaled(-1));
    // V as a polynomial: x^2/4 - 1/2
    const Polynomial vp = (Polynomial::coordinate(1, 0) * Polynomial::coordinate(1, 0))
                              .scaled(Rational(1, 4)) -
                          Polynomial::constant(1, Rational(1, 2));
    CHECK(v_potential_poly(R1, U) == vp);
}

TEST_CASE("L(1) = -V for random interactions on H^1") {
    std::mt19937_64 rng(61);
    const CarnotGroup G = make_group(GroupKind::heisenberg, 1);
    for (int trial = 0; trial < 10; ++trial) {
        const Polynomial U = random_poly(G.dim, 4, rng);
        CHECK(l_operator(G, U).apply(Polynomial::constant(G.dim, 1)) ==
              v_potential_poly(G, U).scaled(-1));
    }
}

TEST_CASE("sub-Laplacian kills x^2 - y^2") {
    const CarnotGroup G = make_group(GroupKind::heisenberg, 1);
    const Polynomial v = Polynomial::coordinate(3, 0) * Polynomial::coordinate(3, 0) -
                         Polynomial::coordinate(3, 1) * Polynomial::coordinate(3, 1);
    CHECK(sub_laplacian(G).apply(v).is_zero());
}

TEST_CASE("Rockland operators") {
    const CarnotGroup G = make_group(GroupKind::heisenberg, 1);
    CHECK(rockland_op(G, 1) == sub_laplacian(G).scaled(-1));
    // order-4 operator applied to x^4 gives 24
    const Polynomial x4 = Polynomial::monomial(MultiIndex{4, 0, 0}, 1);
    CHECK(rockland_op(G, 2).apply(x4) == Polynomial::constant(3, 24));
    CHECK(rockland_op(G, 2).order() == 4);
    CHECK_THROWS(rockland_op(G, 0));
}

TEST_CASE("Rockland operator is formally self-adjoint (quadrature oracle)") {
    const CarnotGroup G = make_group(GroupKind::heisenberg, 1);
    const DiffOp R = rockland_op(G, 2);
    // compactly-cut polynomials: coordinate pieces times a bump that vanishes
    // to high order on the box boundary, so the Haar (Lebesgue) integration
    // by parts carries no boundary terms
    auto bump1d = [](int dim, int i) {
        const Polynomial t = Polynomial::coordinate(dim, i).scaled(Rational(1, 5));
        const Polynomial b = Polynomial::constant(dim, 1) - t * t;
        return b * b * b;
    };
    const Polynomial bump = bump1d(3, 0) * bump1d(3, 1) * bump1d(3, 2);
    const Polynomial f = Polynomial::coordinate(3, 0) * bump;
    const Polynomial g = (Polynomial::coordinate(3, 1) + Polynomial::coordinate(3, 2)) * bump;
    const PolyEval rf(R.apply(f)), rg(R.apply(g)), fe(f), ge(g);
    const int m = 61;
    double a = 0.0, b = 0.0, scale = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                const double x[3] = {-5.0 + 10.0 * i / (m - 1.0), -5.0 + 10.0 * j / (m - 1.0),
                                     -5.0 + 10.0 * k / (m - 1.0)};
                const std::span<const double> xs(x, 3);
                a += rf(xs) * ge(xs);
                b += fe(xs) * rg(xs);
                scale += std::abs(rf(xs) * ge(xs));
            }
    CHECK(std::abs(a - b) <= 1e-3 * std::max(scale, 1.0));
}

TEST_CASE("closed-form ad expansions match brute force exactly") {
    std::mt19937_64 rng(67);
    for (int n : {1, 2}) {
        const CarnotGroup G = make_group(GroupKind::heisenberg, n);
        // sparse interactions keep the brute-force expansion tractable on H^2
        const double density = n == 1 ? 0.3 : 0.12;
        for (int trial = 0; trial < 10; ++trial) {
            const Polynomial U = random_poly(G.dim, 4, rng, density);
            const DiffOp L = l_operator(G, U);
            const int l = trial % G.horizontal_dim;
            DiffOp cur = v_field(G, U, l);
            for (unsigned m : {1u, 2u, 3u}) {
                cur = L.compose(cur, 16) - cur.compose(L, 16);
                CHECK(cur == ad_closed(G, U, l, m, 16));
            }
        }
    }
}

TEST_CASE("m = 1 ad expansion equals the anticommutator form") {
    std::mt19937_64 rng(71);
    const CarnotGroup G = make_group(GroupKind::heisenberg, 1);
    for (int trial = 0; trial < 5; ++trial) {
        const Polynomial U = random_poly(G.dim, 4, rng);
        const DiffOp L = l_operator(G, U);
        for (int l = 0; l < G.horizontal_dim; ++l) {
            DiffOp anti(G.dim);
            for (int j = 0; j < G.horizontal_dim; ++j) {
                const DiffOp vj = v_field(G, U, j);
                const DiffOp vlj = commutator(v_field(G, U, l), vj); // V_{l,j}
                anti += anticommutator(vj, vlj);
            }
            CHECK(ad_power(L, v_field(G, U, l), 1) == anti);
        }
    }
}

TEST_CASE("ad of a center field with a flat interaction vanishes") {
    const CarnotGroup G = make_group(GroupKind::heisenberg, 1);
    const Polynomial U = Polynomial::zero(G.dim);
    const DiffOp L = l_operator(G, U);
    CHECK(ad_power(L, G.center_fields.front(), 1).is_zero());
}

TEST_CASE("center-direction potential polynomial") {
    // H^1, U = z^2: V_Z = z^2/4 - 1/2... with Z = d/dz: |ZU|^2/4 - Z^2U/2
    const CarnotGroup G = make_group(GroupKind::heisenberg, 1);
    const Polynomial z = Polynomial::coordinate(3, 2);
    const Polynomial U = z * z;
    const Polynomial want = (z * z) - Polynomial::constant(3, 1);
    CHECK(v_z_potential_poly(G, U) == want);
}
