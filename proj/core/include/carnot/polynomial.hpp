// Sparse multivariate polynomials with exact rational coefficients.
//
// This is the substrate every symbolic identity in the toolkit reduces to:
// equality of two Polynomial values is decidable coefficient-wise.
#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "carnot/multi_index.hpp"
#include "carnot/rational.hpp"

namespace carnot {

class Polynomial {
public:
    using TermMap = std::map<MultiIndex, Rational, GradedLexLess>;

    Polynomial() : dim_(0) {}
    explicit Polynomial(int dim) : dim_(dim) {}

    static Polynomial zero(int dim) { return Polynomial(dim); }
    static Polynomial constant(int dim, const Rational& c);
    static Polynomial coordinate(int dim, int i); // 0-based coordinate index
    static Polynomial monomial(const MultiIndex& alpha, const Rational& c = 1);

    int dim() const { return dim_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    // Total degree; -1 for the zero polynomial.
    long degree() const;

    Rational coefficient(const MultiIndex& alpha) const;
    Rational constant_term() const;

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial operator-() const;
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    Polynomial scaled(const Rational& s) const;
    friend Polynomial operator*(const Rational& s, const Polynomial& p) { return p.scaled(s); }

    bool operator==(const Polynomial& o) const { return dim_ == o.dim_ && terms_ == o.terms_; }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    // Exact partial derivative in coordinate i (0-based).
    Polynomial derivative(int i) const;

    // Exact evaluation at a rational point.
    Rational operator()(std::span<const Rational> x) const;
    // Floating evaluation, Horner-style recursion over variables.
    double operator()(std::span<const double> x) const;

    // Substitute coordinate i -> subs[i]; all subs must share one dimension.
    Polynomial substitute(const std::vector<Polynomial>& subs) const;

    // Text form: terms as "num/den * x1^a1 x2 z" joined by " + ", graded-lex
    // term order; "0/1" for the zero polynomial. `names` gives one name per
    // coordinate.
    std::string to_string(const std::vector<std::string>& names) const;
    static Polynomial parse(const std::string& text, const std::vector<std::string>& names);

    void insert_term(const MultiIndex& alpha, const Rational& c);

private:
    void check_dim(const Polynomial& o) const;

    int dim_;
    TermMap terms_; // no zero coefficients stored
};

// Compiled double-precision evaluation form for hot loops (quadrature grids).
// Shares nothing with the exact representation once built.
class PolyEval {
public:
    PolyEval() = default;
    explicit PolyEval(const Polynomial& p);

    double operator()(std::span<const double> x) const;
    int dim() const { return dim_; }

private:
    struct Term {
        std::vector<std::pair<int, std::uint32_t>> powers; // (coordinate, exponent)
        double coeff = 0.0;
    };
    int dim_ = 0;
    std::vector<Term> terms_;
};

// Default coordinate names "x1".."xd" (no group structure implied).
std::vector<std::string> default_names(int dim);

} // namespace carnot
