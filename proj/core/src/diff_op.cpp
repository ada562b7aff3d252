#include "carnot/diff_op.hpp"

#include <functional>
#include <sstream>

#include "carnot/error.hpp"

namespace carnot {

DiffOp DiffOp::identity(int dim) {
    DiffOp a(dim);
    a.insert_term(mi_zero(dim), Polynomial::constant(dim, 1));
    return a;
}

DiffOp DiffOp::partial(int dim, int i) {
    if (i < 0 || i >= dim) throw DimensionError("partial index out of range");
    DiffOp a(dim);
    a.insert_term(mi_unit(dim, i), Polynomial::constant(dim, 1));
    return a;
}

DiffOp DiffOp::multiplication(const Polynomial& p) {
    DiffOp a(p.dim());
    a.insert_term(mi_zero(p.dim()), p);
    return a;
}

DiffOp DiffOp::term(const Polynomial& coeff, const MultiIndex& alpha) {
    DiffOp a(coeff.dim());
    a.insert_term(alpha, coeff);
    return a;
}

long DiffOp::order() const {
    if (terms_.empty()) return -1;
    return static_cast<long>(mi_total(terms_.rbegin()->first));
}

bool DiffOp::is_multiplication() const {
    for (const auto& [a, c] : terms_)
        if (mi_total(a) != 0) return false;
    return true;
}

Polynomial DiffOp::coefficient(const MultiIndex& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? Polynomial::zero(dim_) : it->second;
}

void DiffOp::insert_term(const MultiIndex& alpha, const Polynomial& coeff) {
    if (static_cast<int>(alpha.size()) != dim_ || coeff.dim() != dim_)
        throw DimensionError("operator term dimension mismatch");
    if (coeff.is_zero()) return;
    auto [it, inserted] = terms_.emplace(alpha, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

DiffOp& DiffOp::operator+=(const DiffOp& o) {
    if (dim_ != o.dim_) throw DimensionError("operator dimension mismatch");
    for (const auto& [a, c] : o.terms_) insert_term(a, c);
    return *this;
}

DiffOp& DiffOp::operator-=(const DiffOp& o) {
    if (dim_ != o.dim_) throw DimensionError("operator dimension mismatch");
    for (const auto& [a, c] : o.terms_) insert_term(a, -c);
    return *this;
}

DiffOp DiffOp::operator-() const { return scaled(-1); }

DiffOp DiffOp::scaled(const Rational& s) const {
    DiffOp out(dim_);
    if (s == 0) return out;
    for (const auto& [a, c] : terms_) out.terms_.emplace(a, c.scaled(s));
    return out;
}

Polynomial DiffOp::apply(const Polynomial& f) const {
    if (f.dim() != dim_) throw DimensionError("operand dimension mismatch");
    Polynomial out(dim_);
    for (const auto& [a, c] : terms_) {
        Polynomial g = f;
        for (int i = 0; i < dim_ && !g.is_zero(); ++i)
            for (std::uint32_t k = 0; k < a[i]; ++k) g = g.derivative(i);
        out += c * g;
    }
    return out;
}

namespace {

Rational mi_binomial(const MultiIndex& alpha, const MultiIndex& gamma) {
    Rational out = 1;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        // binom(alpha_i, gamma_i)
        BigInt num = 1, den = 1;
        for (std::uint32_t k = 0; k < gamma[i]; ++k) {
            num *= alpha[i] - k;
            den *= k + 1;
        }
        out *= Rational(num, den);
    }
    return out;
}

// enumerate gamma <= alpha component-wise
void each_sub_index(const MultiIndex& alpha, const std::function<void(const MultiIndex&)>& fn) {
    MultiIndex g(alpha.size(), 0);
    auto rec = [&](auto&& self, std::size_t pos) -> void {
        if (pos == alpha.size()) {
            fn(g);
            return;
        }
        for (std::uint32_t v = 0; v <= alpha[pos]; ++v) {
            g[pos] = v;
            self(self, pos + 1);
        }
    };
    rec(rec, 0);
}

} // namespace

DiffOp DiffOp::compose(const DiffOp& o, std::uint32_t order_cap) const {
    if (dim_ != o.dim_) throw DimensionError("operator dimension mismatch");
    DiffOp out(dim_);
    for (const auto& [alpha, p] : terms_) {
        for (const auto& [beta, q] : o.terms_) {
            // p d^alpha (q d^beta) = sum_{gamma <= alpha} C(alpha,gamma)
            //                        p (d^gamma q) d^{alpha-gamma+beta}
            const long q_deg = q.degree();
            each_sub_index(alpha, [&](const MultiIndex& gamma) {
                if (static_cast<long>(mi_total(gamma)) > q_deg) return; // d^gamma q = 0
                Polynomial dq = q;
                for (int i = 0; i < dim_ && !dq.is_zero(); ++i)
                    for (std::uint32_t k = 0; k < gamma[i]; ++k) dq = dq.derivative(i);
                if (dq.is_zero()) return;
                const MultiIndex rest = mi_add(mi_sub(alpha, gamma), beta);
                if (mi_total(rest) > order_cap)
                    throw OperatorOverflowError("operator order cap (" + std::to_string(order_cap) +
                                                ") exceeded during composition");
                out.insert_term(rest, mi_binomial(alpha, gamma) * (p * dq));
            });
        }
    }
    return out;
}

DiffOp OperatorWord::expand(std::uint32_t order_cap) const {
    if (factors.empty()) throw Error("cannot expand an empty operator word");
    DiffOp out = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) out = out.compose(factors[i], order_cap);
    return out;
}

DiffOp commutator(const DiffOp& a, const DiffOp& b) { return a.compose(b) - b.compose(a); }

DiffOp anticommutator(const DiffOp& a, const DiffOp& b) { return a.compose(b) + b.compose(a); }

DiffOp ad_power(const DiffOp& L, const DiffOp& V, unsigned m, std::uint32_t order_cap) {
    DiffOp cur = V;
    for (unsigned k = 0; k < m; ++k) cur = L.compose(cur, order_cap) - cur.compose(L, order_cap);
    return cur;
}

std::string DiffOp::to_string(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [a, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.to_string(names) << ")";
        for (int i = 0; i < dim_; ++i) {
            if (a[i] == 0) continue;
            os << " D[" << names[i] << "]";
            if (a[i] > 1) os << "^" << a[i];
        }
    }
    return os.str();
}

} // namespace carnot
