// Exact rational polynomial arithmetic: ring identities, derivatives,
// evaluation, dual weights, and the text round-trip.
#include <doctest.h>

#include <random>

#include "carnot/group.hpp"
#include "carnot/polynomial.hpp"

using namespace carnot;

namespace {

Polynomial coord(int dim, int i) { return Polynomial::coordinate(dim, i); }

Polynomial random_poly(int dim, int max_deg, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-5, 5);
    std::uniform_int_distribution<int> den(1, 4);
    std::uniform_real_distribution<double> keep(0.0, 1.0);
    Polynomial out(dim);
    for (int deg = 0; deg <= max_deg; ++deg)
        for (const auto& a : multi_indices_of_degree(dim, deg)) {
            if (keep(rng) > 0.4) continue;
            const int n = num(rng);
            if (n != 0) out.insert_term(a, Rational(n, den(rng)));
        }
    return out;
}

} // namespace

TEST_CASE("ring operations on simple examples") {
    const auto x = coord(2, 0), y = coord(2, 1);
    CHECK((x + y) * (x - y) == x * x - y * y);
    const Polynomial a = x * y + 3 * x;
    CHECK(a + Polynomial::zero(2) == a);
    const Polynomial square = (x + y) * (x + y);
    CHECK((square - (x * x + 2 * (x * y) + y * y)).is_zero());
}

TEST_CASE("ring axioms and Leibniz rule on random polynomials") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        const Polynomial a = random_poly(3, 3, rng);
        const Polynomial b = random_poly(3, 3, rng);
        const Polynomial c = random_poly(3, 3, rng);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        for (int i = 0; i < 3; ++i)
            CHECK((a * b).derivative(i) == a.derivative(i) * b + a * b.derivative(i));
    }
}

TEST_CASE("partial derivatives") {
    const auto x = coord(3, 0), y = coord(3, 1);
    const Polynomial f = x * x * y; // x^2 y
    CHECK(f.derivative(0) == 2 * (x * y));
    CHECK(f.derivative(2).is_zero());
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const Polynomial g = random_poly(3, 4, rng);
        CHECK(g.derivative(0).derivative(1) == g.derivative(1).derivative(0));
    }
}

TEST_CASE("evaluation is exact on rationals and a ring homomorphism") {
    // (x^2+y^2)^2 + 16 z^2 at (1, 1, 1/4) -> 5
    const auto x = coord(3, 0), y = coord(3, 1), z = coord(3, 2);
    const Polynomial K = (x * x + y * y) * (x * x + y * y) + 16 * (z * z);
    const std::vector<Rational> p{1, 1, Rational(1, 4)};
    CHECK(K(std::span<const Rational>(p)) == Rational(5));

    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> coords(-3, 3);
    for (int trial = 0; trial < 20; ++trial) {
        const Polynomial a = random_poly(3, 3, rng);
        const Polynomial b = random_poly(3, 3, rng);
        const std::vector<Rational> q{coords(rng), Rational(coords(rng), 2), coords(rng)};
        const std::span<const Rational> qs(q);
        CHECK((a * b)(qs) == a(qs) * b(qs));
        CHECK(a(qs) + b(qs) == (a + b)(qs));
        // constant term at the origin
        const std::vector<Rational> origin{0, 0, 0};
        CHECK(a(std::span<const Rational>(origin)) == a.constant_term());
    }
}

TEST_CASE("floating evaluation matches the exact route") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const Polynomial a = random_poly(3, 5, rng);
        const std::vector<Rational> q{Rational(3, 2), Rational(-1, 4), Rational(2)};
        const std::vector<double> qd{1.5, -0.25, 2.0};
        const double exact = to_double(a(std::span<const Rational>(q)));
        const double fast = a(std::span<const double>(qd));
        CHECK(fast == doctest::Approx(exact).epsilon(1e-12));
        const PolyEval ev(a);
        CHECK(ev(std::span<const double>(qd)) == doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("dual weights on the Heisenberg horizontals") {
    const CarnotGroup G = make_group(GroupKind::heisenberg, 1);
    // alpha = (2,1): w = x^2 y / 2
    const Polynomial w = dual_weight(G, {2, 1});
    Polynomial want =
        Polynomial::coordinate(3, 0) * Polynomial::coordinate(3, 0) * Polynomial::coordinate(3, 1);
    want = want.scaled(Rational(1, 2));
    CHECK(w == want);
    // alpha = 0 -> constant 1
    CHECK(dual_weight(G, {0, 0}) == Polynomial::constant(3, 1));
    // grad^beta(w_alpha) = delta_{alpha beta} for all |alpha| = |beta| <= 4
    for (unsigned deg = 0; deg <= 4; ++deg) {
        const auto idxs = multi_indices_of_degree(2, deg);
        for (const auto& alpha : idxs)
            for (const auto& beta : idxs) {
                const Polynomial got = sub_gradient_power(G, beta).apply(dual_weight(G, alpha));
                if (alpha == beta)
                    CHECK(got == Polynomial::constant(3, 1));
                else
                    CHECK(got.is_zero());
            }
    }
    // dual weights reject center coordinates by arity
    CHECK_THROWS_AS(dual_weight(G, {1, 0, 1}), DimensionError);
}

TEST_CASE("serialization round-trip") {
    const std::vector<std::string> names{"x1", "x2", "z"};
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const Polynomial a = random_poly(3, 4, rng);
        const Polynomial back = Polynomial::parse(a.to_string(names), names);
        CHECK(back == a);
    }
    CHECK(Polynomial::parse("0/1", names).is_zero());
    const Polynomial p = Polynomial::parse("3/2 * x1^2 x2 + -1 * z", names);
    CHECK(p.coefficient({2, 1, 0}) == Rational(3, 2));
    CHECK(p.coefficient({0, 0, 1}) == Rational(-1));
    CHECK_THROWS_AS(Polynomial::parse("2 * q1", names), ParseError);
}
