#ifndef SKEWPF_GROEBNER_HPP
#define SKEWPF_GROEBNER_HPP

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "skewpf/linalg.hpp"
#include "skewpf/matrix.hpp"
#include "skewpf/polynomial.hpp"

namespace skewpf {

// Thrown when a basis computation exceeds its configured budget. Callers
// either propagate it or report an explicit "unknown" outcome — a budget
// overrun is never converted into an answer.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GroebnerBudget {
    std::size_t max_basis = 600;          // polynomials in the working basis
    std::size_t max_pairs = 100000;       // S-pairs processed
    int max_degree = 40;                  // degree of any S-polynomial
};

// Ideal given by generators over one variable set. Zero generators are
// dropped; the zero ideal keeps a single zero generator.
class Ideal {
public:
    Ideal(VarSetPtr vars, std::vector<Polynomial> gens) : vars_(std::move(vars)) {
        for (auto& g : gens) {
            require_same_varset(vars_, g.vars());
            if (!g.is_zero()) gens_.push_back(std::move(g));
        }
        if (gens_.empty()) gens_.push_back(Polynomial::zero(vars_));
    }

    const VarSetPtr& vars() const { return vars_; }
    const std::vector<Polynomial>& generators() const { return gens_; }
    bool is_zero_ideal() const { return gens_.size() == 1 && gens_[0].is_zero(); }
    bool is_homogeneous() const {
        for (const auto& g : gens_)
            if (!g.is_homogeneous()) return false;
        return true;
    }

private:
    VarSetPtr vars_;
    std::vector<Polynomial> gens_;
};

// Full reduction of p modulo the list: no term of the result is divisible
// by any leading term of the divisors.
inline Polynomial normal_form(const Polynomial& p, const std::vector<Polynomial>& basis) {
    Polynomial rem(p.vars());
    Polynomial cur = p;
    while (!cur.is_zero()) {
        const auto& [lm, lc] = cur.leading_term();
        bool reduced = false;
        for (const auto& g : basis) {
            if (g.is_zero()) continue;
            const auto& [gm, gc] = g.leading_term();
            if (!monomial_divides(gm, lm)) continue;
            cur -= g * Polynomial::term(p.vars(), monomial_div(lm, gm), lc / gc);
            reduced = true;
            break;
        }
        if (!reduced) {
            auto t = Polynomial::term(p.vars(), lm, lc);
            rem += t;
            cur -= t;
        }
    }
    return rem;
}

class GroebnerBasis {
public:
    GroebnerBasis(VarSetPtr vars, std::vector<Polynomial> elements)
        : vars_(std::move(vars)), elements_(std::move(elements)) {
        for (const auto& g : elements_)
            if (!g.is_zero()) leading_.push_back(g.leading_term().first);
    }

    const VarSetPtr& vars() const { return vars_; }
    const std::vector<Polynomial>& elements() const { return elements_; }
    const std::vector<Monomial>& leading_terms() const { return leading_; }
    bool contains_one() const {
        return elements_.size() == 1 && elements_[0].degree() == 0;
    }

private:
    VarSetPtr vars_;
    std::vector<Polynomial> elements_;
    std::vector<Monomial> leading_;
};

namespace detail {

inline Polynomial s_polynomial(const Polynomial& f, const Polynomial& g) {
    const auto& [fm, fc] = f.leading_term();
    const auto& [gm, gc] = g.leading_term();
    Monomial l = monomial_lcm(fm, gm);
    auto tf = Polynomial::term(f.vars(), monomial_div(l, fm), Rat(1) / fc);
    auto tg = Polynomial::term(g.vars(), monomial_div(l, gm), Rat(1) / gc);
    return f * tf - g * tg;
}

inline bool coprime(const Monomial& a, const Monomial& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > 0 && b[i] > 0) return false;
    return true;
}

}  // namespace detail

// Buchberger with the normal selection strategy: pairs ordered by total
// degree of the lcm of the leading terms, ties by pair index. The result
// is the reduced (auto-reduced, monic) basis, so it is unique for the
// ideal under the fixed grevlex order.
inline GroebnerBasis buchberger(const Ideal& ideal, const GroebnerBudget& budget = {}) {
    const VarSetPtr& vars = ideal.vars();
    if (ideal.is_zero_ideal()) return GroebnerBasis(vars, {Polynomial::zero(vars)});

    std::vector<Polynomial> g;
    for (const auto& p : ideal.generators()) g.push_back(p / p.leading_term().second);
    // de-duplicate identical generators up front
    std::sort(g.begin(), g.end(), [](const Polynomial& a, const Polynomial& b) {
        return GrevlexLess{}(a.leading_term().first, b.leading_term().first);
    });
    g.erase(std::unique(g.begin(), g.end()), g.end());

    struct Pair {
        std::size_t i, j;
        int deg;
    };
    std::vector<Pair> pairs;
    auto push_pairs = [&](std::size_t j) {
        for (std::size_t i = 0; i < j; ++i) {
            Monomial l = monomial_lcm(g[i].leading_term().first, g[j].leading_term().first);
            pairs.push_back({i, j, total_degree(l)});
        }
    };
    for (std::size_t j = 0; j < g.size(); ++j) push_pairs(j);

    std::size_t processed = 0;
    while (!pairs.empty()) {
        if (++processed > budget.max_pairs) throw ResourceError("S-pair budget exceeded");
        // normal strategy: minimal lcm degree, then lexicographic pair index
        std::size_t best = 0;
        for (std::size_t k = 1; k < pairs.size(); ++k) {
            const auto &a = pairs[k], &b = pairs[best];
            if (a.deg < b.deg || (a.deg == b.deg && (a.i < b.i || (a.i == b.i && a.j < b.j))))
                best = k;
        }
        Pair pr = pairs[best];
        pairs.erase(pairs.begin() + best);

        const auto& mi = g[pr.i].leading_term().first;
        const auto& mj = g[pr.j].leading_term().first;
        if (detail::coprime(mi, mj)) continue;  // Buchberger's first criterion
        Polynomial s = normal_form(detail::s_polynomial(g[pr.i], g[pr.j]), g);
        if (s.is_zero()) continue;
        if (s.degree() > budget.max_degree) throw ResourceError("degree budget exceeded");
        g.push_back(s / s.leading_term().second);
        if (g.size() > budget.max_basis) throw ResourceError("basis size budget exceeded");
        push_pairs(g.size() - 1);
    }

    // minimalize: drop elements whose leading term is divisible by another's
    std::vector<Polynomial> minimal;
    for (std::size_t i = 0; i < g.size(); ++i) {
        bool redundant = false;
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (i == j) continue;
            const auto& mi = g[i].leading_term().first;
            const auto& mj = g[j].leading_term().first;
            if (monomial_divides(mj, mi) && !(mi == mj && j > i)) {
                redundant = true;
                break;
            }
        }
        if (!redundant) minimal.push_back(g[i]);
    }
    // inter-reduce fully
    std::vector<Polynomial> reduced;
    for (std::size_t i = 0; i < minimal.size(); ++i) {
        std::vector<Polynomial> others;
        for (std::size_t j = 0; j < minimal.size(); ++j)
            if (j != i) others.push_back(minimal[j]);
        Polynomial r = normal_form(minimal[i], others);
        if (!r.is_zero()) reduced.push_back(r / r.leading_term().second);
    }
    std::sort(reduced.begin(), reduced.end(), [](const Polynomial& a, const Polynomial& b) {
        return GrevlexLess{}(a.leading_term().first, b.leading_term().first);
    });
    return GroebnerBasis(vars, std::move(reduced));
}

inline bool ideal_member(const Polynomial& p, const GroebnerBasis& gb) {
    require_same_varset(p.vars(), gb.vars());
    return normal_form(p, gb.elements()).is_zero();
}

inline bool ideal_member(const Polynomial& p, const Ideal& ideal,
                         const GroebnerBudget& budget = {}) {
    return ideal_member(p, buchberger(ideal, budget));
}

// Radical membership via the Rabinowitsch trick: p vanishes on V(I) iff
// 1 lies in I + (1 - t*p) in the ring extended by a fresh variable t.
inline bool radical_member(const Polynomial& p, const Ideal& ideal,
                           const GroebnerBudget& budget = {}) {
    require_same_varset(p.vars(), ideal.vars());
    if (p.is_zero()) return true;
    auto names = ideal.vars()->names();
    std::string tname = "_t";
    while (ideal.vars()->index_of(tname) >= 0) tname += "_";
    names.push_back(tname);
    VarSetPtr ext = VariableSet::make(names);
    std::size_t tindex = ext->size() - 1;
    std::vector<Polynomial> images;
    for (std::size_t i = 0; i + 1 < ext->size(); ++i)
        images.push_back(Polynomial::variable(ext, i));
    std::vector<Polynomial> gens;
    for (const auto& gpoly : ideal.generators()) gens.push_back(gpoly.substitute(images));
    gens.push_back(Polynomial::constant(ext, 1) -
                   Polynomial::variable(ext, tindex) * p.substitute(images));
    return buchberger(Ideal(ext, std::move(gens)), budget).contains_one();
}

// ---- dimension and degree via the leading-term monomial ideal ----

constexpr int PROJ_EMPTY = -1;  // sentinel: the projective scheme is empty

namespace detail {

// Affine Krull dimension of a monomial ideal: size of the largest subset
// S of variables such that no generator's support is contained in S.
inline int monomial_ideal_dimension(const std::vector<Monomial>& gens, std::size_t nvars) {
    for (const auto& m : gens)
        if (total_degree(m) == 0) return -1;  // unit ideal
    int best = -1;
    for (std::size_t mask = 0; mask < (std::size_t{1} << nvars); ++mask) {
        int size = __builtin_popcountll(mask);
        if (size <= best) continue;
        bool independent = true;
        for (const auto& m : gens) {
            bool inside = true;
            for (std::size_t v = 0; v < nvars; ++v)
                if (m[v] > 0 && !(mask >> v & 1)) {
                    inside = false;
                    break;
                }
            if (inside) {  // generator lives on the subset: not independent
                independent = false;
                break;
            }
        }
        if (independent) best = size;
    }
    return best < 0 ? 0 : best;  // proper monomial ideal always allows S = {}
}

using UniPoly = std::vector<Rat>;  // univariate polynomial in t, ascending

inline UniPoly uni_sub(UniPoly a, const UniPoly& b, int shift) {
    if (a.size() < b.size() + shift) a.resize(b.size() + shift, Rat(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= b[i];
    while (a.size() > 1 && a.back() == 0) a.pop_back();
    return a;
}

inline Rat uni_eval_at_one(const UniPoly& a) {
    Rat s(0);
    for (const auto& c : a) s += c;
    return s;
}

// Divides by (1 - t); precondition: evaluates to zero at t = 1.
inline UniPoly uni_div_one_minus_t(const UniPoly& a) {
    // a(t) = (1 - t) q(t): q_0 = a_0, q_i = a_i + q_{i-1}
    UniPoly q;
    Rat carry(0);
    for (std::size_t i = 0; i + 1 < a.size() || i < 1; ++i) {
        Rat c = (i < a.size() ? a[i] : Rat(0)) + carry;
        q.push_back(c);
        carry = c;
    }
    while (q.size() > 1 && q.back() == 0) q.pop_back();
    return q;
}

inline std::vector<Monomial> minimalize_monomials(std::vector<Monomial> gens) {
    std::vector<Monomial> out;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        bool redundant = false;
        for (std::size_t j = 0; j < gens.size(); ++j) {
            if (i == j) continue;
            if (monomial_divides(gens[j], gens[i]) &&
                !(gens[i] == gens[j] && j > i)) {
                redundant = true;
                break;
            }
        }
        if (!redundant) out.push_back(gens[i]);
    }
    return out;
}

// Numerator K(t) of the Hilbert series Hilb(R/I) = K(t)/(1-t)^n for a
// monomial ideal, by the colon recursion K_{I+(m)} = K_I - t^deg(m) K_{I:m}.
inline UniPoly hilbert_numerator(std::vector<Monomial> gens) {
    gens = minimalize_monomials(std::move(gens));
    if (gens.empty()) return {Rat(1)};
    for (const auto& m : gens)
        if (total_degree(m) == 0) return {Rat(0)};
    Monomial m = gens.back();
    gens.pop_back();
    std::vector<Monomial> colon;
    for (const auto& gmon : gens) {
        Monomial q(gmon.size());
        for (std::size_t v = 0; v < gmon.size(); ++v) q[v] = std::max(0, gmon[v] - m[v]);
        colon.push_back(std::move(q));
    }
    UniPoly rest = hilbert_numerator(gens);
    UniPoly quot = hilbert_numerator(std::move(colon));
    return uni_sub(std::move(rest), quot, total_degree(m));
}

}  // namespace detail

// Projective dimension of V(I): Krull dimension of the leading-term
// ideal minus one; PROJ_EMPTY for the empty projective scheme.
inline int projective_dimension(const GroebnerBasis& gb) {
    if (gb.contains_one()) return PROJ_EMPTY;
    if (gb.elements().size() == 1 && gb.elements()[0].is_zero())
        return static_cast<int>(gb.vars()->size()) - 1;
    int affine = detail::monomial_ideal_dimension(gb.leading_terms(), gb.vars()->size());
    return affine <= 0 ? PROJ_EMPTY : affine - 1;
}

inline int projective_dimension(const Ideal& ideal, const GroebnerBudget& budget = {}) {
    if (!ideal.is_homogeneous())
        throw std::invalid_argument("projective_dimension needs homogeneous generators");
    return projective_dimension(buchberger(ideal, budget));
}

// Degree of the projective scheme, read from the Hilbert series of the
// leading-term ideal: write K(t)/(1-t)^n = Q(t)/(1-t)^d with Q(1) != 0;
// then d-1 is the projective dimension and Q(1) the degree.
inline int projective_degree(const GroebnerBasis& gb) {
    int pdim = projective_dimension(gb);
    if (pdim == PROJ_EMPTY) throw std::invalid_argument("projective_degree of empty scheme");
    std::size_t n = gb.vars()->size();
    detail::UniPoly k =
        gb.elements()[0].is_zero()
            ? detail::UniPoly{Rat(1)}
            : detail::hilbert_numerator(gb.leading_terms());
    std::size_t divisions = 0;
    while (detail::uni_eval_at_one(k) == 0) {
        k = detail::uni_div_one_minus_t(k);
        ++divisions;
    }
    // sanity: Krull dimension from the Hilbert series matches
    if (static_cast<int>(n - divisions) != pdim + 1)
        throw std::logic_error("dimension mismatch between Hilbert series and independent sets");
    Rat q1 = detail::uni_eval_at_one(k);
    if (q1 <= 0 || q1.get_den() != 1) throw std::logic_error("degree is not a positive integer");
    return static_cast<int>(q1.get_num().get_si());
}

inline int projective_degree(const Ideal& ideal, const GroebnerBudget& budget = {}) {
    if (!ideal.is_homogeneous())
        throw std::invalid_argument("projective_degree needs homogeneous generators");
    return projective_degree(buchberger(ideal, budget));
}

// ---- linear subspaces inside V(I) ----

enum class SubspaceSearch { FOUND, NOT_FOUND, UNKNOWN };

// Does V(I) contain a linear P^k? Certified in both directions where
// possible: FOUND via an explicit subspace (coordinate subspaces first,
// then echelon-parametrized existence over the algebraic closure);
// NOT_FOUND when the dimension rules it out or when every echelon pivot
// shape leads to an inconsistent parameter system. Budget overruns give
// UNKNOWN, never a wrong answer.
inline SubspaceSearch contains_linear_subspace(const Ideal& ideal, int k,
                                               const GroebnerBudget& budget = {}) {
    if (!ideal.is_homogeneous())
        throw std::invalid_argument("contains_linear_subspace needs homogeneous generators");
    std::size_t n = ideal.vars()->size();
    if (k < 0 || static_cast<std::size_t>(k) >= n) return SubspaceSearch::NOT_FOUND;
    bool unknown = false;
    int pdim;
    try {
        pdim = projective_dimension(ideal, budget);
    } catch (const ResourceError&) {
        pdim = static_cast<int>(n) - 1;  // no dimension bound available
        unknown = true;
    }
    if (pdim == PROJ_EMPTY || pdim < k) return unknown ? SubspaceSearch::UNKNOWN
                                                       : SubspaceSearch::NOT_FOUND;

    std::size_t d = static_cast<std::size_t>(k) + 1;  // affine dimension of the subspace
    // (1) coordinate subspaces: keep the variables in the subset, zero the rest
    for (const auto& keep : detail::all_subsets(n, d)) {
        std::vector<Polynomial> images(n, Polynomial::zero(ideal.vars()));
        for (std::size_t i : keep) images[i] = Polynomial::variable(ideal.vars(), i);
        bool vanishes = true;
        for (const auto& g : ideal.generators())
            if (!g.substitute(images).is_zero()) {
                vanishes = false;
                break;
            }
        if (vanishes) return SubspaceSearch::FOUND;
    }

    // (2) echelon-parametrized search per pivot shape. The subspace is the
    // row space of a d x n reduced-echelon matrix with pivots at `piv`;
    // the free entries become unknowns a_*, the subspace coordinates s_*.
    for (const auto& piv : detail::all_subsets(n, d)) {
        std::vector<std::size_t> free_cols;
        for (std::size_t c = 0; c < n; ++c)
            if (std::find(piv.begin(), piv.end(), c) == piv.end()) free_cols.push_back(c);
        std::size_t na = d * free_cols.size();
        VarSetPtr avars = VariableSet::prefixed("a", na);
        VarSetPtr mixed;  // a-variables then s-variables
        {
            auto names = avars->names();
            for (std::size_t i = 0; i < d; ++i) names.push_back("s" + std::to_string(i));
            mixed = VariableSet::make(names);
        }
        auto avar = [&](std::size_t r, std::size_t fc) {
            return Polynomial::variable(mixed, r * free_cols.size() + fc);
        };
        auto svar = [&](std::size_t r) { return Polynomial::variable(mixed, na + r); };
        // y_j = sum_r rowentry(r, j) * s_r
        std::vector<Polynomial> images(n, Polynomial::zero(mixed));
        for (std::size_t r = 0; r < d; ++r) images[piv[r]] = svar(r);
        for (std::size_t fc = 0; fc < free_cols.size(); ++fc)
            for (std::size_t r = 0; r < d; ++r)
                images[free_cols[fc]] += avar(r, fc) * svar(r);
        // collect the s-coefficients of every substituted generator
        std::vector<Polynomial> conditions;
        for (const auto& g : ideal.generators()) {
            Polynomial sub = g.substitute(images);
            // split by the s-part of each term
            std::map<Monomial, Polynomial, GrevlexLess> by_s;
            for (const auto& [m, c] : sub.terms()) {
                Monomial sm(d, 0), am(na, 0);
                for (std::size_t v = 0; v < na; ++v) am[v] = m[v];
                for (std::size_t r = 0; r < d; ++r) sm[r] = m[na + r];
                auto [it, fresh] = by_s.try_emplace(sm, Polynomial::zero(avars));
                it->second += Polynomial::term(avars, am, c);
            }
            for (auto& [sm, coeff] : by_s)
                if (!coeff.is_zero()) conditions.push_back(coeff);
        }
        if (conditions.empty()) return SubspaceSearch::FOUND;  // identically satisfied
        try {
            auto gb = buchberger(Ideal(avars, std::move(conditions)), budget);
            if (!gb.contains_one()) return SubspaceSearch::FOUND;  // solvable over C
        } catch (const ResourceError&) {
            unknown = true;  // this pivot shape undecided
        }
    }
    return unknown ? SubspaceSearch::UNKNOWN : SubspaceSearch::NOT_FOUND;
}

}  // namespace skewpf

#endif
