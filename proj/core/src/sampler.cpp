#include "carnot/sampler.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

#include "carnot/error.hpp"

namespace carnot {

std::uint64_t split_seed(std::uint64_t master, std::uint64_t counter) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (counter + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

namespace {

struct Target {
    const CarnotGroup& G;
    PotentialEvaluator eval;
    bool drift;
    double fd_h = 1e-5;

    double logpi(const Point& p) const { return -eval.value(p); }

    std::vector<double> grad_logpi(const Point& p) const {
        std::vector<double> g(G.dim, 0.0);
        Point q = p;
        for (int c = 0; c < G.dim; ++c) {
            const double orig = q[c];
            q[c] = orig + fd_h;
            const double up = eval.value(q);
            q[c] = orig - fd_h;
            const double dn = eval.value(q);
            q[c] = orig;
            g[c] = -(up - dn) / (2.0 * fd_h);
        }
        return g;
    }
};

// One chain; returns kept points and acceptance rate.
std::pair<std::vector<Point>, double> run_one_chain(const Target& target, long steps, long burn_in,
                                                    double scale, std::uint64_t seed,
                                                    bool record) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int d = target.G.dim;

    Point x{std::vector<double>(d, 1.0)};
    double lx = target.logpi(x);
    std::vector<double> gx;
    if (target.drift) gx = target.grad_logpi(x);

    std::vector<Point> kept;
    if (record && steps > burn_in) kept.reserve(steps - burn_in);
    long accepted = 0;
    const double half_s2 = 0.5 * scale * scale;

    for (long t = 0; t < steps; ++t) {
        Point y{std::vector<double>(d)};
        for (int c = 0; c < d; ++c) {
            double mean_c = x[c];
            if (target.drift) mean_c += half_s2 * gx[c];
            y[c] = mean_c + scale * normal(rng);
        }
        const double ly = target.logpi(y);
        double log_alpha = ly - lx;
        std::vector<double> gy;
        if (target.drift) {
            gy = target.grad_logpi(y);
            double fwd = 0.0, bwd = 0.0; // -log q(y|x), -log q(x|y) up to consts
            for (int c = 0; c < d; ++c) {
                const double dy = y[c] - x[c] - half_s2 * gx[c];
                const double dx = x[c] - y[c] - half_s2 * gy[c];
                fwd += dy * dy;
                bwd += dx * dx;
            }
            log_alpha += (fwd - bwd) / (2.0 * scale * scale);
        }
        if (std::log(unif(rng)) < log_alpha) {
            x = y;
            lx = ly;
            if (target.drift) gx = gy;
            ++accepted;
        }
        if (record && t >= burn_in) kept.push_back(x);
    }
    return {std::move(kept), static_cast<double>(accepted) / static_cast<double>(steps)};
}

double tune_scale(const Target& target, const SamplerConfig& cfg) {
    const long pilot = std::min<long>(std::max<long>(cfg.burn_in, 400), 2000);
    const std::uint64_t tune_seed = split_seed(cfg.seed, 0xABCDull);
    double s = 1.0, lo = 0.0, hi = 0.0;
    for (int it = 0; it < 30; ++it) {
        const double acc = run_one_chain(target, pilot, pilot, s, tune_seed, false).second;
        if (acc > 0.40) {
            lo = s;
            s = (hi > 0.0) ? 0.5 * (s + hi) : s * 2.0;
        } else if (acc < 0.25) {
            hi = s;
            s = (lo > 0.0) ? 0.5 * (s + lo) : s * 0.5;
        } else {
            break;
        }
    }
    return s;
}

} // namespace

SampleBatch run_chains(const CarnotGroup& G, const PotentialSpec& pot, const SamplerConfig& cfg) {
    validate_potential(G, pot);
    if (!potential_integrable(pot))
        throw InvalidMeasureError("e^{-U} is not normalizable for family " +
                                  potential_family_name(pot));
    if (cfg.chains < 1) throw Error("sampler needs at least one chain");
    if (cfg.burn_in < 0 || cfg.burn_in >= cfg.steps)
        throw Error("sampler needs steps > burn_in >= 0");

    Target target{G, PotentialEvaluator(G, pot), cfg.drift};
    const double scale = cfg.proposal_scale > 0.0 ? cfg.proposal_scale : tune_scale(target, cfg);

    SampleBatch batch;
    batch.dim = G.dim;
    batch.seed = cfg.seed;
    batch.proposal_scale = scale;
    batch.chains.resize(cfg.chains);
    batch.acceptance_rate.resize(cfg.chains);
    for (int c = 0; c < cfg.chains; ++c) {
        auto [kept, acc] =
            run_one_chain(target, cfg.steps, cfg.burn_in, scale, split_seed(cfg.seed, c), true);
        batch.chains[c] = std::move(kept);
        batch.acceptance_rate[c] = acc;
        if (acc < 0.01) {
            std::ostringstream w;
            w << "chain " << c << " acceptance " << acc << " below 1%";
            batch.warnings.push_back(w.str());
        }
    }
    return batch;
}

Estimate estimate(const SampleBatch& batch, const std::function<double(const Point&)>& obs) {
    std::vector<double> vals;
    vals.reserve(batch.total());
    for (std::size_t c = 0; c < batch.chains.size(); ++c) {
        for (std::size_t t = 0; t < batch.chains[c].size(); ++t) {
            const double v = obs(batch.chains[c][t]);
            if (!std::isfinite(v)) {
                std::ostringstream os;
                os << "observable non-finite at chain " << c << " step " << t << " point (";
                for (std::size_t i = 0; i < batch.chains[c][t].size(); ++i)
                    os << (i ? "," : "") << batch.chains[c][t][i];
                os << ")";
                throw TaintedEstimateError(os.str());
            }
            vals.push_back(v);
        }
    }
    const std::size_t n = vals.size();
    if (n == 0) throw Error("estimate over an empty batch");

    Estimate est;
    double sum = 0.0;
    for (double v : vals) sum += v;
    est.mean = sum / static_cast<double>(n);

    const std::size_t B = std::min<std::size_t>(32, n);
    const std::size_t bs = n / B;
    double var_bm = 0.0;
    if (B >= 2 && bs >= 1) {
        std::vector<double> bm(B, 0.0);
        for (std::size_t b = 0; b < B; ++b) {
            double s = 0.0;
            for (std::size_t i = b * bs; i < (b + 1) * bs; ++i) s += vals[i];
            bm[b] = s / static_cast<double>(bs);
        }
        double mb = 0.0;
        for (double v : bm) mb += v;
        mb /= static_cast<double>(B);
        for (double v : bm) var_bm += (v - mb) * (v - mb);
        var_bm /= static_cast<double>(B - 1);
        est.std_err = std::sqrt(var_bm / static_cast<double>(B));
    }
    double s2 = 0.0;
    for (double v : vals) s2 += (v - est.mean) * (v - est.mean);
    s2 /= std::max<std::size_t>(n - 1, 1);
    if (var_bm > 0.0 && s2 > 0.0) {
        const double tau = static_cast<double>(bs) * var_bm / s2;
        est.ess = std::min(static_cast<double>(n), static_cast<double>(n) / std::max(tau, 1e-12));
    } else {
        est.ess = static_cast<double>(n);
    }
    return est;
}

void export_csv(const SampleBatch& batch, std::ostream& os) {
    os << "chain,step";
    for (int i = 0; i < batch.dim; ++i) os << ",c" << i + 1;
    os << "\n";
    for (std::size_t c = 0; c < batch.chains.size(); ++c) {
        for (std::size_t t = 0; t < batch.chains[c].size(); ++t) {
            os << c << "," << t;
            const Point& p = batch.chains[c][t];
            for (int i = 0; i < batch.dim; ++i) {
                char buf[32];
                const auto r = std::to_chars(buf, buf + sizeof buf, p[i]);
                os << ",";
                os.write(buf, r.ptr - buf);
            }
            os << "\n";
        }
    }
}

} // namespace carnot
