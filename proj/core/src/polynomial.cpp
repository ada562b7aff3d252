#include "carnot/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "carnot/error.hpp"

namespace carnot {

Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(text));
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0) throw ParseError("rational with zero denominator: " + text);
        return Rational(num, den);
    } catch (const std::exception& e) {
        throw ParseError("bad rational '" + text + "': " + e.what());
    }
}

std::vector<MultiIndex> multi_indices_of_degree(std::size_t dim, std::uint32_t degree) {
    std::vector<MultiIndex> out;
    MultiIndex cur(dim, 0);
    // depth-first over remaining degree, lexicographic in coordinate order
    auto rec = [&](auto&& self, std::size_t pos, std::uint32_t left) -> void {
        if (pos + 1 == dim) {
            cur[pos] = left;
            out.push_back(cur);
            return;
        }
        for (std::uint32_t v = left + 1; v-- > 0;) {
            cur[pos] = v;
            self(self, pos + 1, left - v);
        }
    };
    if (dim == 0) {
        if (degree == 0) out.push_back({});
        return out;
    }
    rec(rec, 0, degree);
    std::sort(out.begin(), out.end(), GradedLexLess{});
    return out;
}

Polynomial Polynomial::constant(int dim, const Rational& c) {
    Polynomial p(dim);
    p.insert_term(mi_zero(dim), c);
    return p;
}

Polynomial Polynomial::coordinate(int dim, int i) {
    if (i < 0 || i >= dim) throw DimensionError("coordinate index out of range");
    Polynomial p(dim);
    p.insert_term(mi_unit(dim, i), 1);
    return p;
}

Polynomial Polynomial::monomial(const MultiIndex& alpha, const Rational& c) {
    Polynomial p(static_cast<int>(alpha.size()));
    p.insert_term(alpha, c);
    return p;
}

bool Polynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && mi_total(terms_.begin()->first) == 0);
}

long Polynomial::degree() const {
    if (terms_.empty()) return -1;
    return static_cast<long>(mi_total(terms_.rbegin()->first));
}

Rational Polynomial::coefficient(const MultiIndex& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? Rational(0) : it->second;
}

Rational Polynomial::constant_term() const { return coefficient(mi_zero(dim_)); }

void Polynomial::insert_term(const MultiIndex& alpha, const Rational& c) {
    if (static_cast<int>(alpha.size()) != dim_)
        throw DimensionError("multi-index length does not match polynomial dimension");
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(alpha, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

void Polynomial::check_dim(const Polynomial& o) const {
    if (dim_ != o.dim_) throw DimensionError("polynomial dimension mismatch");
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    check_dim(o);
    for (const auto& [a, c] : o.terms_) insert_term(a, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    check_dim(o);
    for (const auto& [a, c] : o.terms_) insert_term(a, -c);
    return *this;
}

Polynomial Polynomial::operator-() const { return scaled(-1); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_dim(b);
    Polynomial out(a.dim_);
    // collect pair products, sort, merge equal monomials, then bulk-insert
    // with an end hint; avoids per-product map lookups on large operands
    std::vector<std::pair<MultiIndex, Rational>> prods;
    prods.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& [ai, ac] : a.terms_)
        for (const auto& [bi, bc] : b.terms_) prods.emplace_back(mi_add(ai, bi), ac * bc);
    std::sort(prods.begin(), prods.end(), [](const auto& x, const auto& y) {
        return GradedLexLess{}(x.first, y.first);
    });
    std::size_t i = 0;
    while (i < prods.size()) {
        MultiIndex key = prods[i].first;
        Rational sum = std::move(prods[i].second);
        std::size_t j = i + 1;
        while (j < prods.size() && prods[j].first == key) {
            sum += prods[j].second;
            ++j;
        }
        if (sum != 0) out.terms_.emplace_hint(out.terms_.end(), std::move(key), std::move(sum));
        i = j;
    }
    return out;
}

Polynomial Polynomial::scaled(const Rational& s) const {
    Polynomial out(dim_);
    if (s == 0) return out;
    for (const auto& [a, c] : terms_) out.terms_.emplace(a, c * s);
    return out;
}

Polynomial Polynomial::derivative(int i) const {
    if (i < 0 || i >= dim_) throw DimensionError("derivative index out of range");
    Polynomial out(dim_);
    for (const auto& [a, c] : terms_) {
        if (a[i] == 0) continue;
        MultiIndex b(a);
        b[i] -= 1;
        out.insert_term(b, c * a[i]);
    }
    return out;
}

Rational Polynomial::operator()(std::span<const Rational> x) const {
    if (static_cast<int>(x.size()) != dim_) throw DimensionError("evaluation point dimension mismatch");
    Rational acc = 0;
    for (const auto& [a, c] : terms_) {
        Rational t = c;
        for (int i = 0; i < dim_; ++i)
            if (a[i] != 0) t *= rational_pow(x[i], a[i]);
        acc += t;
    }
    return acc;
}

namespace {

// Horner over variable `var` on a term range sharing exponents in vars < var.
double horner(const std::vector<std::pair<const MultiIndex*, double>>& terms, std::size_t lo,
              std::size_t hi, int var, int dim, std::span<const double> x) {
    if (var == dim) return terms[lo].second; // fully split: a single constant
    // group by exponent of `var`, descending, then Horner-accumulate
    std::vector<std::pair<std::uint32_t, std::pair<std::size_t, std::size_t>>> groups;
    std::size_t i = lo;
    while (i < hi) {
        std::uint32_t e = (*terms[i].first)[var];
        std::size_t j = i;
        while (j < hi && (*terms[j].first)[var] == e) ++j;
        groups.push_back({e, {i, j}});
        i = j;
    }
    std::sort(groups.begin(), groups.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    double acc = 0.0;
    std::uint32_t prev_exp = 0;
    bool first = true;
    for (const auto& [e, range] : groups) {
        if (first) {
            prev_exp = e;
            first = false;
        } else {
            for (std::uint32_t k = e; k < prev_exp; ++k) acc *= x[var];
            prev_exp = e;
        }
        acc += horner(terms, range.first, range.second, var + 1, dim, x);
    }
    for (std::uint32_t k = 0; k < prev_exp; ++k) acc *= x[var];
    return acc;
}

} // namespace

double Polynomial::operator()(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_) throw DimensionError("evaluation point dimension mismatch");
    if (terms_.empty()) return 0.0;
    std::vector<std::pair<const MultiIndex*, double>> flat;
    flat.reserve(terms_.size());
    for (const auto& [a, c] : terms_) flat.push_back({&a, to_double(c)});
    // sort lexicographically by exponents so each recursion level sees
    // contiguous groups
    std::sort(flat.begin(), flat.end(),
              [](const auto& a, const auto& b) { return *a.first > *b.first; });
    return horner(flat, 0, flat.size(), 0, dim_, x);
}

Polynomial Polynomial::substitute(const std::vector<Polynomial>& subs) const {
    if (static_cast<int>(subs.size()) != dim_)
        throw DimensionError("substitution list length does not match dimension");
    const int out_dim = subs.empty() ? 0 : subs.front().dim();
    for (const auto& s : subs)
        if (s.dim() != out_dim) throw DimensionError("substitution polynomials dimension mismatch");
    Polynomial out(out_dim);
    for (const auto& [a, c] : terms_) {
        Polynomial t = Polynomial::constant(out_dim, c);
        for (int i = 0; i < dim_; ++i)
            for (std::uint32_t k = 0; k < a[i]; ++k) t = t * subs[i];
        out += t;
    }
    return out;
}

std::string Polynomial::to_string(const std::vector<std::string>& names) const {
    if (static_cast<int>(names.size()) != dim_)
        throw DimensionError("name list length does not match dimension");
    if (terms_.empty()) return "0/1";
    std::ostringstream os;
    bool first = true;
    for (const auto& [a, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << rational_to_string(c);
        std::ostringstream mono;
        for (int i = 0; i < dim_; ++i) {
            if (a[i] == 0) continue;
            mono << ' ' << names[i];
            if (a[i] > 1) mono << '^' << a[i];
        }
        if (!mono.str().empty()) os << " *" << mono.str();
    }
    return os.str();
}

Polynomial Polynomial::parse(const std::string& text, const std::vector<std::string>& names) {
    const int dim = static_cast<int>(names.size());
    Polynomial out(dim);
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        if (b == std::string::npos) return std::string{};
        return s.substr(b, e - b + 1);
    };
    // split on '+' at top level (coefficients carry their own sign)
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == '+') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    parts.push_back(cur);
    for (auto& raw : parts) {
        std::string term = trim(raw);
        if (term.empty()) throw ParseError("empty term in polynomial text");
        // term := coeff ['*' factors] | factors (implicit coefficient 1)
        std::string coeff_text;
        std::string mono_text;
        const auto star = term.find('*');
        if (star != std::string::npos) {
            coeff_text = trim(term.substr(0, star));
            mono_text = trim(term.substr(star + 1));
        } else if (!term.empty() && (std::isdigit(static_cast<unsigned char>(term[0])) || term[0] == '-')) {
            coeff_text = term;
        } else {
            coeff_text = "1";
            mono_text = term;
        }
        Rational c = parse_rational(coeff_text);
        MultiIndex alpha = mi_zero(dim);
        std::istringstream ms(mono_text);
        std::string factor;
        while (ms >> factor) {
            std::string name = factor;
            std::uint32_t exp = 1;
            const auto caret = factor.find('^');
            if (caret != std::string::npos) {
                name = factor.substr(0, caret);
                try {
                    exp = static_cast<std::uint32_t>(std::stoul(factor.substr(caret + 1)));
                } catch (const std::exception&) {
                    throw ParseError("bad exponent in '" + factor + "'");
                }
            }
            const auto it = std::find(names.begin(), names.end(), name);
            if (it == names.end()) throw ParseError("unknown coordinate '" + name + "'");
            alpha[static_cast<std::size_t>(it - names.begin())] += exp;
        }
        if (c == 0 && mono_text.empty() && parts.size() == 1) continue; // "0/1"
        out.insert_term(alpha, c);
    }
    return out;
}

PolyEval::PolyEval(const Polynomial& p) : dim_(p.dim()) {
    for (const auto& [a, c] : p.terms()) {
        Term t;
        t.coeff = to_double(c);
        for (int i = 0; i < dim_; ++i)
            if (a[i] != 0) t.powers.push_back({i, a[i]});
        terms_.push_back(std::move(t));
    }
}

double PolyEval::operator()(std::span<const double> x) const {
    double acc = 0.0;
    for (const auto& t : terms_) {
        double v = t.coeff;
        for (const auto& [i, e] : t.powers) {
            double b = x[i];
            std::uint32_t k = e;
            double pw = 1.0;
            while (k != 0) { // exponentiation by squaring; exponents are small
                if (k & 1u) pw *= b;
                b *= b;
                k >>= 1u;
            }
            v *= pw;
        }
        acc += v;
    }
    return acc;
}

std::vector<std::string> default_names(int dim) {
    std::vector<std::string> names;
    names.reserve(dim);
    for (int i = 0; i < dim; ++i) names.push_back("x" + std::to_string(i + 1));
    return names;
}

} // namespace carnot
