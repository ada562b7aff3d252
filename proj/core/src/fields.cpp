#include "carnot/fields.hpp"

#include "carnot/error.hpp"

namespace carnot {

DiffOp v_field(const CarnotGroup& G, const Polynomial& U, int j) {
    if (j < 0 || j >= G.horizontal_dim) throw DimensionError("generator index out of range");
    const DiffOp& X = G.generators[j];
    return X - DiffOp::multiplication(X.apply(U).scaled(Rational(1, 2)));
}

DiffOp v_bracket_field(const CarnotGroup& G, const Polynomial& U, int j, int k) {
    DiffOp C = commutator(G.generators[j], G.generators[k]);
    return C - DiffOp::multiplication(C.apply(U).scaled(Rational(1, 2)));
}

DiffOp l_operator(const CarnotGroup& G, const Polynomial& U) {
    DiffOp out = DiffOp::zero(G.dim);
    for (int j = 0; j < G.horizontal_dim; ++j) {
        DiffOp V = v_field(G, U, j);
        out -= V.compose(V);
    }
    return out;
}

DiffOp rockland_op(const CarnotGroup& G, int m) {
    if (m < 1) throw Error("Rockland order parameter must be >= 1");
    DiffOp out = DiffOp::zero(G.dim);
    for (const auto& X : G.generators) {
        DiffOp pw = DiffOp::identity(G.dim);
        for (int k = 0; k < 2 * m; ++k) pw = X.compose(pw);
        out += pw;
    }
    if (m % 2 == 1) out = -out;
    return out;
}

DiffOp ad_closed(const CarnotGroup& G, const Polynomial& U, int l, unsigned m,
                 std::uint32_t order_cap) {
    if (m < 1) throw Error("ad power must be >= 1");
    if (G.is_heisenberg() == false && G.kind != GroupKind::euclidean)
        throw UnsupportedError("closed-form ad expansion needs a step <= 2 group");
    // Euclidean groups are abelian (step 1): all brackets vanish.
    const int k = G.horizontal_dim;
    std::vector<DiffOp> V;
    for (int j = 0; j < k; ++j) V.push_back(v_field(G, U, j));
    // central bracket fields B[a][b] = [V_a, V_b]
    std::vector<std::vector<DiffOp>> B(k, std::vector<DiffOp>(k, DiffOp::zero(G.dim)));
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) B[a][b] = v_bracket_field(G, U, a, b);

    // 2^m sum over (j_1,...,j_m) of V_{j_m} B[j_m][j_{m-1}] ... B[j_2][j_1]? --
    // factor chain per the step-2 induction: leading V_{j_m}, then
    // B[j_{t}][j_{t+1}] for t = m-1..1, closing with B[l][j_1].
    DiffOp total = DiffOp::zero(G.dim);
    std::vector<int> idx(m, 0);
    while (true) {
        OperatorWord word;
        word.factors.push_back(V[idx[m - 1]]);
        for (int t = static_cast<int>(m) - 1; t >= 1; --t)
            word.factors.push_back(B[idx[t - 1]][idx[t]]);
        word.factors.push_back(B[l][idx[0]]);
        total += word.expand(order_cap);
        // advance multi-counter
        int pos = 0;
        while (pos < static_cast<int>(m)) {
            if (++idx[pos] < k) break;
            idx[pos] = 0;
            ++pos;
        }
        if (pos == static_cast<int>(m)) break;
    }
    Rational two_m = 1;
    for (unsigned t = 0; t < m; ++t) two_m *= 2;
    return total.scaled(two_m);
}

Polynomial v_potential_poly(const CarnotGroup& G, const Polynomial& U) {
    Polynomial gradsq(G.dim);
    Polynomial lap(G.dim);
    for (const auto& X : G.generators) {
        Polynomial XU = X.apply(U);
        gradsq += XU * XU;
        lap += X.apply(XU);
    }
    return gradsq.scaled(Rational(1, 4)) - lap.scaled(Rational(1, 2));
}

Polynomial v_z_potential_poly(const CarnotGroup& G, const Polynomial& U) {
    Polynomial gradsq(G.dim);
    Polynomial lap(G.dim);
    for (const auto& Z : G.center_fields) {
        Polynomial ZU = Z.apply(U);
        gradsq += ZU * ZU;
        lap += Z.apply(ZU);
    }
    return gradsq.scaled(Rational(1, 4)) - lap.scaled(Rational(1, 2));
}

} // namespace carnot
