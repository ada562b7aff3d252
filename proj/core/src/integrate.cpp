#include "carnot/integrate.hpp"

#include <cmath>
#include <sstream>

#include "carnot/error.hpp"

namespace carnot {

namespace {

// axis nodes and weights for the chosen rule on [-R, R]
void axis_rule(const GridSpec& spec, std::vector<double>& nodes, std::vector<double>& weights) {
    int n = spec.nodes;
    if (n < 2) throw Error("grid needs at least 2 nodes per axis");
    nodes.clear();
    weights.clear();
    if (spec.rule == GridSpec::Rule::midpoint) {
        const double h = 2.0 * spec.radius / n;
        for (int i = 0; i < n; ++i) {
            nodes.push_back(-spec.radius + (i + 0.5) * h);
            weights.push_back(h);
        }
        return;
    }
    if (n % 2 == 0) ++n; // composite Simpson needs an odd node count
    const double h = 2.0 * spec.radius / (n - 1);
    for (int i = 0; i < n; ++i) {
        nodes.push_back(-spec.radius + i * h);
        double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        weights.push_back(w * h / 3.0);
    }
}

struct GridAccumulator {
    std::vector<double> sums;     // sum w e^{-U} f_k
    double z = 0.0;               // sum w e^{-U}
    std::vector<double> max_in;   // max |f_k| e^{-U} over interior points
    std::vector<double> max_bnd;  // ... over the boundary shell
    double max_win = 0.0, max_wbnd = 0.0;
};

} // namespace

void check_measure(const CarnotGroup& G, const PotentialSpec& pot) {
    validate_potential(G, pot);
    if (!potential_integrable(pot))
        throw InvalidMeasureError("e^{-U} is not normalizable for family " +
                                  potential_family_name(pot));
    if (!std::holds_alternative<PolynomialPotential>(pot)) return;
    // growth screen on two boundary shells of lattice directions
    const PotentialEvaluator eval(G, pot);
    const int d = G.dim;
    const double R1 = 8.0, R2 = 16.0;
    double min1 = 1e300, min2 = 1e300;
    std::vector<int> dir(d, -1);
    while (true) {
        bool all_zero = true;
        for (int c : dir)
            if (c != 0) all_zero = false;
        if (!all_zero) {
            Point p1{std::vector<double>(d)}, p2{std::vector<double>(d)};
            for (int c = 0; c < d; ++c) {
                p1[c] = R1 * dir[c];
                p2[c] = R2 * dir[c];
            }
            min1 = std::min(min1, eval.value(p1));
            min2 = std::min(min2, eval.value(p2));
        }
        int pos = 0;
        while (pos < d && ++dir[pos] > 1) dir[pos++] = -1;
        if (pos == d) break;
    }
    if (!(min1 > 4.0) || !(min2 > 2.0 * min1))
        throw InvalidMeasureError(
            "polynomial interaction fails the boundary growth screen (min U on shells " +
            std::to_string(min1) + ", " + std::to_string(min2) + ")");
}

std::vector<double> grid_means(const CarnotGroup& G, const PotentialSpec& pot,
                               const std::vector<NamedObservable>& obs, const GridSpec& spec) {
    if (G.dim > 3) throw UnsupportedError("grid quadrature supports dimension <= 3 only");
    check_measure(G, pot);
    const PotentialEvaluator eval(G, pot);

    std::vector<double> nodes, weights;
    axis_rule(spec, nodes, weights);
    const int m = static_cast<int>(nodes.size());
    const int d = G.dim;
    const std::size_t K = obs.size();

    GridAccumulator acc;
    acc.sums.assign(K, 0.0);
    acc.max_in.assign(K, 0.0);
    acc.max_bnd.assign(K, 0.0);

    Point p{std::vector<double>(d, 0.0)};
    std::vector<int> idx(d, 0);
    while (true) {
        double w = 1.0;
        bool boundary = false;
        for (int c = 0; c < d; ++c) {
            w *= weights[idx[c]];
            p[c] = nodes[idx[c]];
            if (idx[c] == 0 || idx[c] == m - 1) boundary = true;
        }
        const double dens = std::exp(-eval.value(p));
        acc.z += w * dens;
        (boundary ? acc.max_wbnd : acc.max_win) = std::max(boundary ? acc.max_wbnd : acc.max_win, dens);
        for (std::size_t k = 0; k < K; ++k) {
            const double f = obs[k].fn(p);
            acc.sums[k] += w * dens * f;
            double& mx = boundary ? acc.max_bnd[k] : acc.max_in[k];
            mx = std::max(mx, std::abs(f) * dens);
        }
        int pos = 0;
        while (pos < d && ++idx[pos] == m) idx[pos++] = 0;
        if (pos == d) break;
    }

    if (acc.z <= 0.0 || !std::isfinite(acc.z))
        throw InvalidMeasureError("normalization integral is not positive/finite");
    // truncation check: boundary-shell integrand mass must be negligible
    auto tail_fail = [&](double bnd, double inner) {
        return inner > 0.0 && bnd > spec.tail_tol * inner;
    };
    if (tail_fail(acc.max_wbnd, acc.max_win)) {
        std::ostringstream os;
        os << "density tail not resolved at R = " << spec.radius << "; suggest R >= "
           << 1.5 * spec.radius;
        throw TruncationError(os.str());
    }
    for (std::size_t k = 0; k < K; ++k) {
        if (tail_fail(acc.max_bnd[k], acc.max_in[k])) {
            std::ostringstream os;
            os << "integrand '" << (obs[k].name.empty() ? "f" : obs[k].name)
               << "' tail not resolved at R = " << spec.radius << "; suggest R >= "
               << 1.5 * spec.radius;
            throw TruncationError(os.str());
        }
    }

    std::vector<double> out(K);
    for (std::size_t k = 0; k < K; ++k) out[k] = acc.sums[k] / acc.z;
    return out;
}

double grid_quadrature(const CarnotGroup& G, const PotentialSpec& pot,
                       const std::function<double(const Point&)>& f, const GridSpec& spec) {
    return grid_means(G, pot, {{"f", f}}, spec)[0];
}

Rational gaussian_moment_exact(const Polynomial& p) {
    if (p.dim() != 1) throw DimensionError("exact Gaussian moments are 1-dimensional");
    Rational out = 0;
    for (const auto& [a, c] : p.terms()) {
        const std::uint32_t k = a[0];
        if (k % 2 == 1) continue;
        BigInt dfact = 1; // (k-1)!!
        for (std::uint32_t v = k; v > 1; v -= 2) dfact *= (v - 1);
        out += c * Rational(dfact);
    }
    return out;
}

MeasureIntegrator::MeasureIntegrator(const CarnotGroup& G, PotentialSpec pot, IntegratorSpec spec)
    : G_(G), pot_(std::move(pot)), spec_(std::move(spec)) {
    validate_potential(G_, pot_);
}

const SampleBatch& MeasureIntegrator::batch() {
    if (!batch_) {
        const auto& mc = std::get<McSpec>(spec_);
        batch_ = std::make_shared<SampleBatch>(run_chains(G_, pot_, mc.config));
    }
    return *batch_;
}

Estimate MeasureIntegrator::mean(const std::function<double(const Point&)>& f,
                                 const std::string& name) {
    return means({{name, f}})[0];
}

std::vector<Estimate> MeasureIntegrator::means(const std::vector<NamedObservable>& obs) {
    std::vector<Estimate> out;
    if (const auto* gs = std::get_if<GridSpec>(&spec_)) {
        const auto vals = grid_means(G_, pot_, obs, *gs);
        for (double v : vals) out.push_back(Estimate{v, 0.0, 0.0});
        return out;
    }
    for (const auto& o : obs) out.push_back(estimate(batch(), o.fn));
    return out;
}

} // namespace carnot
