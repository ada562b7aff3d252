// Harmonic polynomials on the Heisenberg group and their exact relation to
// the Kaplan quartic: W+^2 + W-^2 + 2 sum_{j,k} V_{j,k}^2 = 2 K.
#pragma once

#include "carnot/group.hpp"

namespace carnot {

struct HarmonicLibrary {
    Polynomial w_plus;  // 4z + 2 sum_j x_j x_{2n-j+1}
    Polynomial w_minus; // 4z - 2 sum_j x_j x_{2n-j+1}
    // V_{j,k} = (x_j - x_{2n-j+1})(x_k + x_{2n-k+1}), j,k = 1..n (row-major)
    std::vector<Polynomial> v_jk;
    Polynomial kaplan_quartic; // K = |x|^4 + 16 z^2

    // residuals of the asserted identities (all zero polynomials when exact)
    Polynomial lap_w_plus;
    Polynomial lap_w_minus;
    std::vector<Polynomial> lap_v_jk;
    Polynomial norm_identity; // W+^2 + W-^2 + 2 sum V_{j,k}^2 - 2K

    bool all_exact() const;
};

HarmonicLibrary harmonic_library(const CarnotGroup& G);

} // namespace carnot
