// Deformed fields V_j = X_j - (X_j U)/2 for a polynomial interaction U, the
// associated operator L = -sum V_j^2, Rockland operators, and the closed-form
// ad_L expansions available on step-2 groups.
#pragma once

#include "carnot/group.hpp"

namespace carnot {

// V_j = X_j - (1/2)(X_j U) as a first-order-plus-multiplication operator.
DiffOp v_field(const CarnotGroup& G, const Polynomial& U, int j);

// V_{j,k} = [X_j, X_k] - (1/2)([X_j, X_k]U); equals [V_j, V_k].
DiffOp v_bracket_field(const CarnotGroup& G, const Polynomial& U, int j, int k);

// L = -sum_j V_j^2.
DiffOp l_operator(const CarnotGroup& G, const Polynomial& U);

// Rockland operator (-1)^m sum_j X_j^{2m} of order 2m.
DiffOp rockland_op(const CarnotGroup& G, int m);

// Closed-form ad_L^m(V_l) on a step-2 group:
//   m = 1:  sum_j {V_j, [V_l, V_j]}
//   m >= 1: 2^m sum_{j_1..j_m} V_{j_m} [V_{j_m},V_{j_{m-1}}]^* ... [V_l,V_{j_1}]^*
// where the starred factors are the central bracket fields V_{a,b}. Both forms
// agree on step-2 groups; brute force (ad_power) is the oracle elsewhere.
// l is a 0-based generator index.
DiffOp ad_closed(const CarnotGroup& G, const Polynomial& U, int l, unsigned m,
                 std::uint32_t order_cap = DiffOp::kDefaultOrderCap);

// V = (1/4)|grad U|^2 - (1/2) Delta U as an exact polynomial (the U-bound
// potential). Horizontal fields only.
Polynomial v_potential_poly(const CarnotGroup& G, const Polynomial& U);

// Center-direction analogue over the listed center fields.
Polynomial v_z_potential_poly(const CarnotGroup& G, const Polynomial& U);

} // namespace carnot
