#ifndef SKEWPF_POLYNOMIAL_HPP
#define SKEWPF_POLYNOMIAL_HPP

#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "skewpf/rational.hpp"
#include "skewpf/varset.hpp"

namespace skewpf {

// Dense exponent vector over a (small) VariableSet.
using Monomial = std::vector<int>;

inline int total_degree(const Monomial& m) {
    return std::accumulate(m.begin(), m.end(), 0);
}

// Graded reverse lexicographic order. a < b iff deg a < deg b, or the
// degrees agree and at the last position where they differ a has the
// larger exponent.
struct GrevlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        int da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        for (std::size_t i = a.size(); i-- > 0;) {
            if (a[i] != b[i]) return a[i] > b[i];
        }
        return false;
    }
};

inline bool monomial_divides(const Monomial& a, const Monomial& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline Monomial monomial_mul(const Monomial& a, const Monomial& b) {
    Monomial r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Monomial monomial_div(const Monomial& a, const Monomial& b) {
    Monomial r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        r[i] = a[i] - b[i];
        if (r[i] < 0) throw std::logic_error("monomial_div: not divisible");
    }
    return r;
}

inline Monomial monomial_lcm(const Monomial& a, const Monomial& b) {
    Monomial r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
    return r;
}

// Exact sparse multivariate polynomial with rational coefficients.
// Terms are kept in grevlex order; no zero coefficient is ever stored.
class Polynomial {
public:
    using TermMap = std::map<Monomial, Rat, GrevlexLess>;

    Polynomial() = default;
    explicit Polynomial(VarSetPtr vars) : vars_(std::move(vars)) {}

    static Polynomial zero(VarSetPtr vars) { return Polynomial(std::move(vars)); }

    static Polynomial constant(VarSetPtr vars, const Rat& c) {
        Polynomial p(std::move(vars));
        if (c != 0) p.terms_[Monomial(p.nvars(), 0)] = c;
        return p;
    }

    static Polynomial variable(VarSetPtr vars, std::size_t i) {
        Polynomial p(std::move(vars));
        if (i >= p.nvars()) throw std::out_of_range("variable index");
        Monomial m(p.nvars(), 0);
        m[i] = 1;
        p.terms_[m] = 1;
        return p;
    }

    static Polynomial term(VarSetPtr vars, Monomial m, const Rat& c) {
        Polynomial p(std::move(vars));
        if (m.size() != p.nvars()) throw std::invalid_argument("exponent vector length");
        if (c != 0) p.terms_[std::move(m)] = c;
        return p;
    }

    const VarSetPtr& vars() const { return vars_; }
    std::size_t nvars() const { return vars_ ? vars_->size() : 0; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    int degree() const {  // -1 for the zero polynomial
        int d = -1;
        for (const auto& [m, c] : terms_) d = std::max(d, total_degree(m));
        return d;
    }

    bool is_homogeneous() const {
        if (terms_.empty()) return true;
        int d = total_degree(terms_.begin()->first);
        for (const auto& [m, c] : terms_)
            if (total_degree(m) != d) return false;
        return true;
    }

    // Homogeneous of degree exactly 1, or zero.
    bool is_linear_form() const {
        for (const auto& [m, c] : terms_)
            if (total_degree(m) != 1) return false;
        return true;
    }

    Rat coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    Rat coeff_of_var(std::size_t i) const {
        Monomial m(nvars(), 0);
        m.at(i) = 1;
        return coeff(m);
    }

    // Largest term in grevlex order.
    const std::pair<const Monomial, Rat>& leading_term() const {
        if (terms_.empty()) throw std::logic_error("leading_term of zero polynomial");
        return *terms_.rbegin();
    }

    Polynomial& operator+=(const Polynomial& o) {
        require_same_varset(vars_, o.vars_);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        require_same_varset(vars_, o.vars_);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    Polynomial operator+(const Polynomial& o) const {
        Polynomial r = *this;
        r += o;
        return r;
    }
    Polynomial operator-(const Polynomial& o) const {
        Polynomial r = *this;
        r -= o;
        return r;
    }
    Polynomial operator-() const {
        Polynomial r = *this;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    Polynomial operator*(const Polynomial& o) const {
        require_same_varset(vars_, o.vars_);
        Polynomial r(vars_);
        for (const auto& [ma, ca] : terms_)
            for (const auto& [mb, cb] : o.terms_) r.add_term(monomial_mul(ma, mb), ca * cb);
        return r;
    }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    Polynomial operator*(const Rat& c) const {
        Polynomial r(vars_);
        if (c == 0) return r;
        r.terms_ = terms_;
        for (auto& [m, cc] : r.terms_) cc *= c;
        return r;
    }
    Polynomial& operator*=(const Rat& c) { return *this = *this * c; }
    Polynomial operator/(const Rat& c) const {
        if (c == 0) throw std::invalid_argument("division by zero");
        return *this * (Rat(1) / c);
    }

    bool operator==(const Polynomial& o) const {
        return same_varset(vars_, o.vars_) && terms_ == o.terms_;
    }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    Rat evaluate(const std::vector<Rat>& point) const {
        if (point.size() != nvars()) throw std::invalid_argument("point length mismatch");
        Rat result(0);
        for (const auto& [m, c] : terms_) {
            Rat t = c;
            for (std::size_t i = 0; i < m.size(); ++i)
                for (int e = 0; e < m[i]; ++e) t *= point[i];
            result += t;
        }
        return result;
    }

    Polynomial partial_derivative(std::size_t var) const {
        if (var >= nvars()) throw std::out_of_range("unknown variable");
        Polynomial r(vars_);
        for (const auto& [m, c] : terms_) {
            if (m[var] == 0) continue;
            Monomial d = m;
            d[var] -= 1;
            r.add_term(d, c * m[var]);
        }
        return r;
    }

    // Substitute each variable by the given polynomial (all over one
    // common target variable set).
    Polynomial substitute(const std::vector<Polynomial>& images) const {
        if (images.size() != nvars()) throw std::invalid_argument("substitution arity");
        if (images.empty()) return *this;
        const VarSetPtr& target = images.front().vars();
        Polynomial r(target);
        for (const auto& [m, c] : terms_) {
            Polynomial t = Polynomial::constant(target, c);
            for (std::size_t i = 0; i < m.size(); ++i)
                for (int e = 0; e < m[i]; ++e) t *= images[i];
            r += t;
        }
        return r;
    }

    // Exact division: returns quotient iff *this = q * divisor.
    std::optional<Polynomial> divide_exact(const Polynomial& divisor) const {
        require_same_varset(vars_, divisor.vars_);
        if (divisor.is_zero()) return std::nullopt;
        Polynomial rem = *this;
        Polynomial quot(vars_);
        const auto& [dm, dc] = divisor.leading_term();
        while (!rem.is_zero()) {
            const auto& [rm, rc] = rem.leading_term();
            if (!monomial_divides(dm, rm)) return std::nullopt;
            Polynomial t = Polynomial::term(vars_, monomial_div(rm, dm), rc / dc);
            quot += t;
            rem -= t * divisor;
        }
        return quot;
    }

    // Display normalization for linear forms: first nonzero coefficient
    // (in variable order) scaled to +1. Does not affect computations.
    Polynomial normalized() const {
        if (is_zero()) return *this;
        for (std::size_t i = 0; i < nvars(); ++i) {
            Rat c = coeff_of_var(i);
            if (c != 0) return *this / c;
        }
        return *this / leading_term().second;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        // print highest terms first
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [m, c] = *it;
            Rat a = c;
            if (first) {
                if (a < 0) {
                    os << "-";
                    a = -a;
                }
            } else {
                os << (a < 0 ? " - " : " + ");
                if (a < 0) a = -a;
            }
            first = false;
            bool unit = (a == 1);
            bool constant_term = (total_degree(m) == 0);
            if (!unit || constant_term) os << rat_to_string(a);
            bool printed = false;
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (m[i] == 0) continue;
                if (!unit || printed) os << "*";
                os << vars_->name(i);
                if (m[i] > 1) os << "^" << m[i];
                printed = true;
            }
        }
        return os.str();
    }

private:
    void add_term(const Monomial& m, const Rat& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    VarSetPtr vars_;
    TermMap terms_;
};

inline Polynomial operator*(const Rat& c, const Polynomial& p) { return p * c; }

// Linear form with rational coefficients: c0*x0 + ... (zero allowed).
inline Polynomial linear_form(const VarSetPtr& vars, const std::vector<Rat>& coeffs) {
    if (coeffs.size() != vars->size()) throw std::invalid_argument("coefficient count");
    Polynomial p(vars);
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        p += Polynomial::variable(vars, i) * coeffs[i];
    return p;
}

inline std::vector<Rat> linear_form_coeffs(const Polynomial& p) {
    if (!p.is_linear_form()) throw std::invalid_argument("not a linear form");
    std::vector<Rat> c(p.nvars());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = p.coeff_of_var(i);
    return c;
}

}  // namespace skewpf

#endif
