// Sampler and quadrature: Gaussian oracles, determinism, error bars, and the
// truncation/integrability guards.
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "carnot/error.hpp"
#include "carnot/integrate.hpp"

using namespace carnot;

namespace {

PotentialSpec gaussian_1d() {
    Polynomial U =
        (Polynomial::coordinate(1, 0) * Polynomial::coordinate(1, 0)).scaled(Rational(1, 2));
    return PolynomialPotential{U};
}

} // namespace

TEST_CASE("grid quadrature reproduces Gaussian moments") {
    const CarnotGroup R1 = make_group(GroupKind::euclidean, 1);
    const GridSpec spec{12.0, 2001};
    const double second = grid_quadrature(R1, gaussian_1d(),
                                          [](const Point& p) { return p[0] * p[0]; }, spec);
    CHECK(std::abs(second - 1.0) <= 1e-6);
    const double odd =
        grid_quadrature(R1, gaussian_1d(), [](const Point& p) { return -p[0]; }, spec);
    CHECK(std::abs(odd) <= 1e-9);
    const double one = grid_quadrature(R1, gaussian_1d(), [](const Point&) { return 1.0; }, spec);
    CHECK(one == doctest::Approx(1.0));
    // fourth moment against the exact double-factorial oracle
    const Polynomial x4 = Polynomial::monomial(MultiIndex{4}, 1);
    const double fourth =
        grid_quadrature(R1, gaussian_1d(), [](const Point& p) { return std::pow(p[0], 4); }, spec);
    CHECK(std::abs(fourth - to_double(gaussian_moment_exact(x4))) <= 1e-6);
}

TEST_CASE("exact Gaussian moments") {
    Polynomial p(1); // 3 x^6 - x^2 + 5
    p.insert_term({6}, 3);
    p.insert_term({2}, -1);
    p.insert_term({0}, 5);
    CHECK(gaussian_moment_exact(p) == Rational(3 * 15 - 1 + 5));
    CHECK(gaussian_moment_exact(Polynomial::monomial(MultiIndex{3}, 1)) == 0);
}

TEST_CASE("normalized quadrature on the quadric measure") {
    const CarnotGroup H1 = make_group(GroupKind::heisenberg, 1, HeisenbergConvention::example);
    const PotentialSpec pot = QuadricPower{1};
    const GridSpec spec{9.0, 61};
    const double one = grid_quadrature(H1, pot, [](const Point&) { return 1.0; }, spec);
    CHECK(one == doctest::Approx(1.0));
    // odd symmetry kills first moments
    const double mx = grid_quadrature(H1, pot, [](const Point& p) { return p[0]; }, spec);
    CHECK(std::abs(mx) <= 1e-10);
}

TEST_CASE("truncation and measure guards") {
    const CarnotGroup R1 = make_group(GroupKind::euclidean, 1);
    CHECK_THROWS_AS(grid_quadrature(R1, gaussian_1d(), [](const Point&) { return 1.0; },
                                    GridSpec{2.0, 101}),
                    TruncationError);
    // a linear interaction is not normalizable
    const PotentialSpec bad = PolynomialPotential{Polynomial::coordinate(1, 0)};
    CHECK_THROWS_AS(grid_quadrature(R1, bad, [](const Point&) { return 1.0; }, GridSpec{8.0, 64}),
                    InvalidMeasureError);
    // dual monomials are rejected outright
    const CarnotGroup H1 = make_group(GroupKind::heisenberg, 1);
    SamplerConfig cfg;
    CHECK_THROWS_AS(
        run_chains(H1, DualMonomial{{1, 1}, OuterProfile{OuterProfile::Kind::power, 2.0}}, cfg),
        InvalidMeasureError);
    CHECK_THROWS_AS(grid_quadrature(R1, gaussian_1d(), [](const Point&) { return 1.0; },
                                    GridSpec{8.0, 1}),
                    Error);
    // tensor grids stop at three coordinates
    const CarnotGroup R4 = make_group(GroupKind::euclidean, 4);
    Polynomial U4(4);
    for (int i = 0; i < 4; ++i)
        U4 += (Polynomial::coordinate(4, i) * Polynomial::coordinate(4, i)).scaled(Rational(1, 2));
    CHECK_THROWS_AS(grid_quadrature(R4, PolynomialPotential{U4}, [](const Point&) { return 1.0; },
                                    GridSpec{8.0, 21}),
                    UnsupportedError);
}

TEST_CASE("sampler determinism and acceptance bands") {
    const CarnotGroup R1 = make_group(GroupKind::euclidean, 1);
    SamplerConfig cfg;
    cfg.chains = 2;
    cfg.steps = 4000;
    cfg.burn_in = 1000;
    cfg.seed = 42;
    const SampleBatch a = run_chains(R1, gaussian_1d(), cfg);
    const SampleBatch b = run_chains(R1, gaussian_1d(), cfg);
    REQUIRE(a.chains.size() == b.chains.size());
    for (std::size_t c = 0; c < a.chains.size(); ++c) {
        REQUIRE(a.chains[c].size() == b.chains[c].size());
        for (std::size_t t = 0; t < a.chains[c].size(); ++t)
            CHECK(a.chains[c][t].x == b.chains[c][t].x); // bit-identical
    }
    // tuned acceptance sits in the target band
    for (double acc : a.acceptance_rate) {
        CHECK(acc > 0.2);
        CHECK(acc < 0.45);
    }
    // different seeds decorrelate
    cfg.seed = 43;
    const SampleBatch c = run_chains(R1, gaussian_1d(), cfg);
    CHECK(a.chains[0][0].x != c.chains[0][0].x);

    // an absurd proposal scale collapses acceptance and raises the diagnostic
    cfg.proposal_scale = 1e8;
    cfg.steps = 400;
    cfg.burn_in = 100;
    const SampleBatch frozen = run_chains(R1, gaussian_1d(), cfg);
    CHECK_FALSE(frozen.warnings.empty());
    CHECK(frozen.warnings.front().find("below 1%") != std::string::npos);
}

TEST_CASE("estimates: mean, error bars, linearity, taint") {
    const CarnotGroup R1 = make_group(GroupKind::euclidean, 1);
    SamplerConfig cfg;
    cfg.chains = 4;
    cfg.steps = 9000;
    cfg.burn_in = 1000;
    cfg.seed = 7;
    const SampleBatch batch = run_chains(R1, gaussian_1d(), cfg);

    const Estimate one = estimate(batch, [](const Point&) { return 1.0; });
    CHECK(one.mean == doctest::Approx(1.0));
    CHECK(one.std_err == doctest::Approx(0.0));

    const Estimate mean_x = estimate(batch, [](const Point& p) { return p[0]; });
    CHECK(std::abs(mean_x.mean) <= 3.0 * mean_x.std_err + 1e-12);
    const Estimate var_x = estimate(batch, [](const Point& p) { return p[0] * p[0]; });
    CHECK(std::abs(var_x.mean - 1.0) <= 3.0 * var_x.std_err);
    CHECK(var_x.ess <= static_cast<double>(batch.total()));
    CHECK(var_x.ess > 0.0);

    // linearity on a fixed batch
    const Estimate sum = estimate(batch, [](const Point& p) { return p[0] + p[0] * p[0]; });
    CHECK(sum.mean == doctest::Approx(mean_x.mean + var_x.mean).epsilon(1e-12));

    CHECK_THROWS_AS(estimate(batch, [](const Point& p) { return std::log(p[0] - 1e9); }),
                    TaintedEstimateError);
}

TEST_CASE("sampler agrees with quadrature on the 3-d quadric measure") {
    const CarnotGroup H1 = make_group(GroupKind::heisenberg, 1, HeisenbergConvention::example);
    const PotentialSpec pot = QuadricPower{1};
    SamplerConfig cfg;
    cfg.chains = 4;
    cfg.steps = 16000;
    cfg.burn_in = 2000;
    cfg.seed = 11;
    const SampleBatch batch = run_chains(H1, pot, cfg);
    const GridSpec spec{9.0, 81};
    auto n4 = [&H1](const Point& p) {
        const double k = kaplan_quartic(H1, p);
        return k;
    };
    const Estimate mc = estimate(batch, n4);
    const double exact = grid_quadrature(H1, pot, n4, spec);
    CHECK(std::abs(mc.mean - exact) <= 3.5 * mc.std_err);
    // pooled chain agreement: single-chain estimates overlap
    SamplerConfig one = cfg;
    one.chains = 1;
    const Estimate solo = estimate(run_chains(H1, pot, one), n4);
    CHECK(std::abs(solo.mean - exact) <= 4.0 * solo.std_err);
}

TEST_CASE("drifted proposals stay correct") {
    const CarnotGroup R1 = make_group(GroupKind::euclidean, 1);
    SamplerConfig cfg;
    cfg.chains = 2;
    cfg.steps = 9000;
    cfg.burn_in = 1000;
    cfg.seed = 3;
    cfg.drift = true;
    const SampleBatch batch = run_chains(R1, gaussian_1d(), cfg);
    const Estimate var_x = estimate(batch, [](const Point& p) { return p[0] * p[0]; });
    CHECK(std::abs(var_x.mean - 1.0) <= 4.0 * var_x.std_err);
}

TEST_CASE("CSV export shape") {
    const CarnotGroup R1 = make_group(GroupKind::euclidean, 1);
    SamplerConfig cfg;
    cfg.chains = 2;
    cfg.steps = 60;
    cfg.burn_in = 10;
    cfg.seed = 5;
    cfg.proposal_scale = 1.0;
    const SampleBatch batch = run_chains(R1, gaussian_1d(), cfg);
    std::ostringstream os;
    export_csv(batch, os);
    const std::string text = os.str();
    CHECK(text.rfind("chain,step,c1\n", 0) == 0);
    std::size_t rows = 0;
    for (char ch : text)
        if (ch == '\n') ++rows;
    CHECK(rows == 1 + batch.total());
}

TEST_CASE("MeasureIntegrator shares one batch across observables") {
    const CarnotGroup R1 = make_group(GroupKind::euclidean, 1);
    McSpec mc;
    mc.config.chains = 2;
    mc.config.steps = 3000;
    mc.config.burn_in = 500;
    mc.config.seed = 19;
    MeasureIntegrator integ(R1, gaussian_1d(), mc);
    const auto ests = integ.means({{"x", [](const Point& p) { return p[0]; }},
                                   {"x2", [](const Point& p) { return p[0] * p[0]; }}});
    const Estimate again = integ.mean([](const Point& p) { return p[0]; });
    CHECK(ests[0].mean == again.mean); // same cached batch
}
