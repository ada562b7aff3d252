// Normalized integration against d.mu = e^{-U} d.lambda / Z: deterministic
// tensor-grid quadrature (dim <= 3) and a Monte Carlo route through the
// sampler, behind one interface so verifiers can swap oracles.
#pragma once

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "carnot/potential.hpp"
#include "carnot/sampler.hpp"

namespace carnot {

struct GridSpec {
    double radius = 10.0; // box [-R, R]^dim
    int nodes = 121;      // per axis
    enum class Rule { simpson, midpoint } rule = Rule::simpson;
    // boundary-shell decay threshold for the truncation check
    double tail_tol = 1e-10;
};

struct NamedObservable {
    std::string name;
    std::function<double(const Point&)> fn;
};

// Tensor-grid mean of f against the normalized measure. Throws
// TruncationError when the boundary shell carries too much integrand mass,
// InvalidMeasureError when e^{-U} fails the growth check.
double grid_quadrature(const CarnotGroup& G, const PotentialSpec& pot,
                       const std::function<double(const Point&)>& f, const GridSpec& spec);

// One shared pass for many observables.
std::vector<double> grid_means(const CarnotGroup& G, const PotentialSpec& pot,
                               const std::vector<NamedObservable>& obs, const GridSpec& spec);

// Exact moment of a 1-d polynomial against the standard Gaussian weight
// e^{-x^2/2} (normalized): mu(x^k) = (k-1)!! for even k, 0 for odd.
Rational gaussian_moment_exact(const Polynomial& p);

// Numeric growth screen for polynomial interactions (boundary-shell values of
// U must grow): throws InvalidMeasureError on failure.
void check_measure(const CarnotGroup& G, const PotentialSpec& pot);

struct McSpec {
    SamplerConfig config;
};

using IntegratorSpec = std::variant<GridSpec, McSpec>;

// Bound integrator: grid specs integrate on demand; MC specs draw one batch
// lazily and reuse it for every observable (deterministic given the seed).
class MeasureIntegrator {
public:
    MeasureIntegrator(const CarnotGroup& G, PotentialSpec pot, IntegratorSpec spec);

    Estimate mean(const std::function<double(const Point&)>& f, const std::string& name = "");
    std::vector<Estimate> means(const std::vector<NamedObservable>& obs);

    bool deterministic() const { return std::holds_alternative<GridSpec>(spec_); }
    const IntegratorSpec& spec() const { return spec_; }

private:
    const SampleBatch& batch();

    const CarnotGroup& G_;
    PotentialSpec pot_;
    IntegratorSpec spec_;
    std::shared_ptr<SampleBatch> batch_; // lazy MC batch
};

} // namespace carnot
