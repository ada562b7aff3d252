// Non-commutative algebra of differential operators with polynomial
// coefficients, kept in normal order (all coefficients left of all partials)
// so that operator equality is decidable coefficient-wise.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "carnot/polynomial.hpp"

namespace carnot {

class DiffOp {
public:
    // term map: partial-derivative multi-index -> polynomial coefficient
    using TermMap = std::map<MultiIndex, Polynomial, GradedLexLess>;

    // Compositions refuse to grow past this total derivative order; ad
    // expansions otherwise blow up silently.
    static constexpr std::uint32_t kDefaultOrderCap = 12;

    DiffOp() : dim_(0) {}
    explicit DiffOp(int dim) : dim_(dim) {}

    static DiffOp zero(int dim) { return DiffOp(dim); }
    static DiffOp identity(int dim);
    static DiffOp partial(int dim, int i); // d/dx_i
    static DiffOp multiplication(const Polynomial& p);
    // coeff * d^alpha
    static DiffOp term(const Polynomial& coeff, const MultiIndex& alpha);

    int dim() const { return dim_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    // Highest total derivative order with nonzero coefficient; -1 if zero.
    long order() const;
    // True when no term carries a derivative (pure multiplication operator).
    bool is_multiplication() const;
    Polynomial coefficient(const MultiIndex& alpha) const;

    DiffOp& operator+=(const DiffOp& o);
    DiffOp& operator-=(const DiffOp& o);
    DiffOp operator-() const;
    friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
    friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }
    DiffOp scaled(const Rational& s) const;
    friend DiffOp operator*(const Rational& s, const DiffOp& a) { return a.scaled(s); }

    bool operator==(const DiffOp& o) const { return dim_ == o.dim_ && terms_ == o.terms_; }
    bool operator!=(const DiffOp& o) const { return !(*this == o); }

    // Exact application to a polynomial.
    Polynomial apply(const Polynomial& f) const;

    // Normal-ordered composition (this ∘ o), Leibniz-expanding derivatives
    // through the right factor's coefficients. Throws OperatorOverflowError
    // past `order_cap`.
    DiffOp compose(const DiffOp& o, std::uint32_t order_cap = kDefaultOrderCap) const;

    void insert_term(const MultiIndex& alpha, const Polynomial& coeff);

    // Pretty form mirroring the polynomial text format with D[x1]^k markers.
    std::string to_string(const std::vector<std::string>& names) const;

private:
    int dim_;
    TermMap terms_;
};

inline DiffOp compose_ops(const DiffOp& a, const DiffOp& b) { return a.compose(b); }
inline Polynomial apply_op(const DiffOp& a, const Polynomial& f) { return a.apply(f); }

// A product of operator factors kept unexpanded (e.g. V_{j2} V_{j1 j2} V_{l j1});
// expansion to a single normal-ordered operator is bracketing-independent.
struct OperatorWord {
    std::vector<DiffOp> factors;

    DiffOp expand(std::uint32_t order_cap = DiffOp::kDefaultOrderCap) const;
};

DiffOp commutator(const DiffOp& a, const DiffOp& b);
DiffOp anticommutator(const DiffOp& a, const DiffOp& b);

// m-fold iterated commutator ad_L^m(V) by brute-force expansion.
DiffOp ad_power(const DiffOp& L, const DiffOp& V, unsigned m,
                std::uint32_t order_cap = DiffOp::kDefaultOrderCap);

} // namespace carnot
