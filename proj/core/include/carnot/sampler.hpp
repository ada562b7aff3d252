// Metropolis random-walk sampler for d.mu = e^{-U} d.lambda / Z with
// deterministic counter-split seeding, optional gradient-informed proposals,
// and batch-means error bars.
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "carnot/potential.hpp"

namespace carnot {

struct SamplerConfig {
    int chains = 4;
    long steps = 20000;  // per chain, including burn-in
    long burn_in = 4000; // discarded prefix, >= 0 and < steps
    // <= 0 requests the automatic doubling search targeting 25-40% acceptance
    double proposal_scale = 0.0;
    std::uint64_t seed = 1;
    bool drift = false; // gradient-informed (Langevin) proposals
};

struct SampleBatch {
    int dim = 0;
    std::uint64_t seed = 0;
    double proposal_scale = 0.0; // scale actually used
    std::vector<std::vector<Point>> chains;
    std::vector<double> acceptance_rate;
    std::vector<std::string> warnings;

    std::size_t total() const {
        std::size_t n = 0;
        for (const auto& c : chains) n += c.size();
        return n;
    }
};

struct Estimate {
    double mean = 0.0;
    double std_err = 0.0;
    double ess = 0.0;
};

// Draws `chains` Metropolis chains. Deterministic: identical inputs give a
// bit-identical batch. Throws InvalidMeasureError for non-normalizable U.
SampleBatch run_chains(const CarnotGroup& G, const PotentialSpec& pot, const SamplerConfig& cfg);

// Batch-means estimate over the chains merged in fixed chain-index order.
// Throws TaintedEstimateError naming the sample where obs is non-finite.
Estimate estimate(const SampleBatch& batch, const std::function<double(const Point&)>& obs);

// One row per sample: chain, step, coordinates.
void export_csv(const SampleBatch& batch, std::ostream& os);

// splitmix64; used for counter-based per-chain seed derivation.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t counter);

} // namespace carnot
