// Multi-indices over the ambient coordinates, with the graded-lexicographic
// order used as the canonical term order everywhere.
#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace carnot {

using MultiIndex = std::vector<std::uint32_t>;

inline std::uint64_t mi_total(const MultiIndex& a) {
    return std::accumulate(a.begin(), a.end(), std::uint64_t{0});
}

// Graded-lex: compare by total degree first, then lexicographically.
struct GradedLexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        const auto ta = mi_total(a);
        const auto tb = mi_total(b);
        if (ta != tb) return ta < tb;
        return a < b;
    }
};

inline MultiIndex mi_zero(std::size_t dim) { return MultiIndex(dim, 0); }

inline MultiIndex mi_unit(std::size_t dim, std::size_t i) {
    MultiIndex e(dim, 0);
    e[i] = 1;
    return e;
}

inline MultiIndex mi_add(const MultiIndex& a, const MultiIndex& b) {
    MultiIndex out(a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    return out;
}

// Component-wise a <= b.
inline bool mi_leq(const MultiIndex& a, const MultiIndex& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline MultiIndex mi_sub(const MultiIndex& a, const MultiIndex& b) {
    MultiIndex out(a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
    return out;
}

// All multi-indices of the given total degree over `dim` slots, in graded-lex
// order. Used for dual-weight levels and |alpha| = k derivative sums.
std::vector<MultiIndex> multi_indices_of_degree(std::size_t dim, std::uint32_t degree);

} // namespace carnot
