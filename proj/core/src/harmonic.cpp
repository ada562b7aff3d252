#include "carnot/harmonic.hpp"

#include "carnot/error.hpp"

namespace carnot {

bool HarmonicLibrary::all_exact() const {
    if (!lap_w_plus.is_zero() || !lap_w_minus.is_zero() || !norm_identity.is_zero()) return false;
    for (const auto& r : lap_v_jk)
        if (!r.is_zero()) return false;
    return true;
}

HarmonicLibrary harmonic_library(const CarnotGroup& G) {
    if (!G.is_heisenberg()) throw UnsupportedError("harmonic library requires a Heisenberg group");
    const int d = G.dim;
    const int n = G.n;
    auto coord = [&](int i) { return Polynomial::coordinate(d, i); };

    Polynomial pairs(d); // sum_{j=1}^n x_j x_{2n-j+1}
    for (int j = 0; j < n; ++j) pairs += coord(j) * coord(G.partner(j));
    Polynomial z = coord(d - 1);

    HarmonicLibrary lib;
    lib.w_plus = 4 * z + 2 * pairs;
    lib.w_minus = 4 * z - 2 * pairs;
    lib.kaplan_quartic = kaplan_quartic_poly(G);

    Polynomial vsq(d);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            Polynomial v = (coord(j) - coord(G.partner(j))) * (coord(k) + coord(G.partner(k)));
            vsq += v * v;
            lib.v_jk.push_back(std::move(v));
        }
    }

    const DiffOp lap = sub_laplacian(G);
    lib.lap_w_plus = lap.apply(lib.w_plus);
    lib.lap_w_minus = lap.apply(lib.w_minus);
    for (const auto& v : lib.v_jk) lib.lap_v_jk.push_back(lap.apply(v));

    lib.norm_identity = lib.w_plus * lib.w_plus + lib.w_minus * lib.w_minus + 2 * vsq -
                        2 * lib.kaplan_quartic;
    return lib;
}

} // namespace carnot
