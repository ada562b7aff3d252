// Group structure: the constructor conventions, group law, dilations,
// Kaplan norm and its closed-form jets against the finite-difference oracle.
#include <doctest.h>

#include <cmath>
#include <random>

#include "carnot/error.hpp"
#include "carnot/group.hpp"

using namespace carnot;

namespace {

std::vector<Rational> rational_point(std::mt19937_64& rng, int dim) {
    std::uniform_int_distribution<int> num(-6, 6);
    std::uniform_int_distribution<int> den(1, 4);
    std::vector<Rational> p;
    for (int i = 0; i < dim; ++i) p.push_back(Rational(num(rng), den(rng)));
    return p;
}

} // namespace

TEST_CASE("make_group: Heisenberg fields match the sign convention") {
    const CarnotGroup G = make_group(GroupKind::heisenberg, 1);
    CHECK(G.dim == 3);
    CHECK(G.hom_dim == 4);
    // X1 = d/dx1 - (1/2) x2 d/dz, X2 = d/dx2 + (1/2) x1 d/dz
    DiffOp x1(3);
    x1.insert_term(mi_unit(3, 0), Polynomial::constant(3, 1));
    x1.insert_term(mi_unit(3, 2), Polynomial::coordinate(3, 1).scaled(Rational(-1, 2)));
    CHECK(G.generators[0] == x1);
    DiffOp x2(3);
    x2.insert_term(mi_unit(3, 1), Polynomial::constant(3, 1));
    x2.insert_term(mi_unit(3, 2), Polynomial::coordinate(3, 0).scaled(Rational(1, 2)));
    CHECK(G.generators[1] == x2);

    // the example convention flips the signs: X = dx + y/2 dz, Y = dy - x/2 dz
    const CarnotGroup E = make_group(GroupKind::heisenberg, 1, HeisenbergConvention::example);
    DiffOp ex(3);
    ex.insert_term(mi_unit(3, 0), Polynomial::constant(3, 1));
    ex.insert_term(mi_unit(3, 2), Polynomial::coordinate(3, 1).scaled(Rational(1, 2)));
    CHECK(E.generators[0] == ex);

    const CarnotGroup R1 = make_group(GroupKind::euclidean, 1);
    CHECK(R1.dim == 1);
    CHECK(R1.hom_dim == 1);
    CHECK(R1.generators[0] == DiffOp::partial(1, 0));

    const CarnotGroup H2 = make_group(GroupKind::heisenberg, 2);
    CHECK(H2.generators.size() == 4);
    CHECK(H2.center_fields.size() == 1);
    CHECK(H2.hom_dim == 6);

    CHECK_THROWS_AS(make_group(GroupKind::heisenberg, 0), DimensionError);
}

TEST_CASE("group law: identity, inverse, the z-coordinate, associativity") {
    const CarnotGroup G = make_group(GroupKind::heisenberg, 1);
    const Point p{{0.3, -1.2, 0.7}};
    const Point id{{0.0, 0.0, 0.0}};
    const Point pi = group_product(G, p, id);
    for (int i = 0; i < 3; ++i) CHECK(pi[i] == doctest::Approx(p[i]));
    const Point inv = group_inverse(G, p);
    const Point e = group_product(G, p, inv);
    for (int i = 0; i < 3; ++i) CHECK(e[i] == doctest::Approx(0.0));

    // ((1,0,0) o (0,1,0)).z = 1/2 <Lambda (1,0), (0,1)> = 1/2
    const std::vector<Rational> a{1, 0, 0}, b{0, 1, 0};
    const auto ab = group_product(G, std::span<const Rational>(a), std::span<const Rational>(b));
    CHECK(ab[2] == Rational(1, 2));

    // euclidean groups reduce to vector addition
    const CarnotGroup R2 = make_group(GroupKind::euclidean, 2);
    const Point s = group_product(R2, Point{{1.5, -2.0}}, Point{{0.25, 1.0}});
    CHECK(s[0] == doctest::Approx(1.75));
    CHECK(s[1] == doctest::Approx(-1.0));

    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = rational_point(rng, 3);
        const auto y = rational_point(rng, 3);
        const auto z = rational_point(rng, 3);
        const auto left = group_product(G, std::span<const Rational>(group_product(
                                               G, std::span<const Rational>(x),
                                               std::span<const Rational>(y))),
                                        std::span<const Rational>(z));
        const auto right = group_product(G, std::span<const Rational>(x),
                                         std::span<const Rational>(group_product(
                                             G, std::span<const Rational>(y),
                                             std::span<const Rational>(z))));
        CHECK(left == right);
    }
}

TEST_CASE("dilations scale strata and commute with the group law") {
    const CarnotGroup G = make_group(GroupKind::heisenberg, 1);
    const Point p{{1.0, 1.0, 1.0}};
    const Point q = dilate(G, 2.0, p);
    CHECK(q[0] == doctest::Approx(2.0));
    CHECK(q[1] == doctest::Approx(2.0));
    CHECK(q[2] == doctest::Approx(4.0));
    const Point r = dilate(G, 1.0, p);
    for (int i = 0; i < 3; ++i) CHECK(r[i] == p[i]);
    CHECK_THROWS(dilate(G, 0.0, p));

    std::mt19937_64 rng(37);
    std::uniform_int_distribution<int> lam_num(1, 5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = rational_point(rng, 3);
        const auto y = rational_point(rng, 3);
        const Rational lam(lam_num(rng), lam_num(rng));
        const auto lhs = dilate(G, lam, std::span<const Rational>(group_product(
                                            G, std::span<const Rational>(x),
                                            std::span<const Rational>(y))));
        const auto rhs = group_product(
            G, std::span<const Rational>(dilate(G, lam, std::span<const Rational>(x))),
            std::span<const Rational>(dilate(G, lam, std::span<const Rational>(y))));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("Kaplan quartic and norm") {
    const CarnotGroup G = make_group(GroupKind::heisenberg, 1);
    CHECK(kaplan_norm(G, Point{{1.0, 0.0, 0.0}}) == doctest::Approx(1.0));
    CHECK(kaplan_norm(G, Point{{0.0, 0.0, 1.0}}) == doctest::Approx(2.0));
    CHECK(kaplan_norm(G, Point{{1.0, 1.0, 0.25}}) == doctest::Approx(std::pow(5.0, 0.25)));
    const std::vector<Rational> p{1, 1, Rational(1, 4)};
    CHECK(kaplan_quartic(G, std::span<const Rational>(p)) == Rational(5));

    // quartic homogeneity is exact on rationals: K(delta_l p) = l^4 K(p)
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> lam_num(1, 5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = rational_point(rng, 3);
        const Rational lam(lam_num(rng), lam_num(rng));
        const auto scaled = dilate(G, lam, std::span<const Rational>(x));
        CHECK(kaplan_quartic(G, std::span<const Rational>(scaled)) ==
              rational_pow(lam, 4) * kaplan_quartic(G, std::span<const Rational>(x)));
    }
    // and as a polynomial identity under substitution
    const Polynomial K = kaplan_quartic_poly(G);
    std::vector<Polynomial> subs{Polynomial::coordinate(3, 0).scaled(3),
                                 Polynomial::coordinate(3, 1).scaled(3),
                                 Polynomial::coordinate(3, 2).scaled(9)};
    CHECK(K.substitute(subs) == K.scaled(81));
}

TEST_CASE("left invariance of the generators, exact") {
    // X(f o L_q) = (Xf) o L_q as polynomials in the right factor
    for (auto conv : {HeisenbergConvention::canonical, HeisenbergConvention::example}) {
        const CarnotGroup G = make_group(GroupKind::heisenberg, 1, conv);
        std::mt19937_64 rng(43);
        for (int trial = 0; trial < 6; ++trial) {
            const auto q = rational_point(rng, 3);
            const auto L = left_translation_polys(G, std::span<const Rational>(q));
            std::uniform_int_distribution<int> pick(0, 2);
            Polynomial f = Polynomial::coordinate(3, pick(rng)) *
                               Polynomial::coordinate(3, pick(rng)) +
                           Polynomial::coordinate(3, pick(rng));
            for (const auto& X : G.generators)
                CHECK(X.apply(f.substitute(L)) == X.apply(f).substitute(L));
        }
    }
}

TEST_CASE("Kaplan jets: closed forms at anchor points") {
    const CarnotGroup G = make_group(GroupKind::heisenberg, 1);
    // z-axis: horizontal gradient vanishes, |X2X1N| = |X1X2N| = 4z/N^3 = 1/N
    for (double z : {0.5, 2.0, 100.0}) {
        const HomNormJet jet = kaplan_jet(G, Point{{0.0, 0.0, z}});
        const double N = jet.value;
        CHECK(jet.grad_h[0] == doctest::Approx(0.0));
        CHECK(jet.grad_h[1] == doctest::Approx(0.0));
        CHECK(std::abs(jet.hess_h[1][0]) == doctest::Approx(1.0 / N));
        CHECK(std::abs(jet.hess_h[0][1]) == doctest::Approx(1.0 / N));
        CHECK(jet.hess_h[0][0] == doctest::Approx(0.0));
        CHECK(jet.hess_h[1][1] == doctest::Approx(0.0));
        // ZN = 8 z / N^3, Z^2 N = 8/N^3 - 192 z^2/N^7
        CHECK(jet.z_jet->first == doctest::Approx(8.0 * z / std::pow(N, 3)));
    }
    const HomNormJet j1 = kaplan_jet(G, Point{{1.0, 0.0, 0.0}});
    CHECK(j1.grad_h[0] == doctest::Approx(1.0));
    CHECK(j1.grad_h[1] == doctest::Approx(0.0));

    CHECK_THROWS_AS(kaplan_jet(G, Point{{0.0, 0.0, 0.0}}), SingularPointError);
}

TEST_CASE("Kaplan jet homogeneity under dilations") {
    const CarnotGroup G = make_group(GroupKind::heisenberg, 2);
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        Point p{{u(rng), u(rng), u(rng), u(rng), u(rng)}};
        if (kaplan_norm(G, p) < 0.3) continue;
        const double lam = 3.7;
        const Point q = dilate(G, lam, p);
        const HomNormJet a = kaplan_jet(G, p);
        const HomNormJet b = kaplan_jet(G, q);
        for (int i = 0; i < 4; ++i) {
            CHECK(b.grad_h[i] == doctest::Approx(a.grad_h[i]).epsilon(1e-10)); // degree 0
            for (int j = 0; j < 4; ++j)
                CHECK(b.hess_h[j][i] ==
                      doctest::Approx(a.hess_h[j][i] / lam).epsilon(1e-10)); // degree -1
        }
    }
}

TEST_CASE("eta functionals and their duality with the generators") {
    const CarnotGroup G = make_group(GroupKind::heisenberg, 1);
    CHECK(eta_functional(G, 1) == Polynomial::coordinate(3, 0));
    CHECK(eta_functional(G, 3) == Polynomial::coordinate(3, 2));
    CHECK_THROWS_AS(eta_functional(G, 4), DimensionError);
    for (int j = 0; j < 2; ++j)
        for (int i = 1; i <= 2; ++i) {
            const Polynomial r = G.generators[j].apply(eta_functional(G, i));
            if (i == j + 1)
                CHECK(r == Polynomial::constant(3, 1));
            else
                CHECK(r.is_zero());
        }
}

TEST_CASE("bracket closure onto the center, all conventions") {
    for (int n : {1, 2, 3}) {
        const CarnotGroup G = make_group(GroupKind::heisenberg, n);
        const DiffOp& Z = G.center_fields.front();
        for (int i = 0; i < G.horizontal_dim; ++i)
            for (int j = 0; j < G.horizontal_dim; ++j) {
                const DiffOp b = commutator(G.generators[i], G.generators[j]);
                const bool center = b.is_zero() || b == Z || b == Z.scaled(-1);
                CHECK(center);
                for (int l = 0; l < G.horizontal_dim; ++l)
                    CHECK(commutator(b, G.generators[l]).is_zero());
            }
        // the recorded bracket sign: [X1, X2] = +Z under the canonical convention
        if (n == 1) CHECK(commutator(G.generators[0], G.generators[1]) == Z);
    }
    // the example convention computes [X, Y] = -Z (recorded; the text asserts +Z)
    const CarnotGroup E = make_group(GroupKind::heisenberg, 1, HeisenbergConvention::example);
    CHECK(commutator(E.generators[0], E.generators[1]) == E.center_fields.front().scaled(-1));
}
