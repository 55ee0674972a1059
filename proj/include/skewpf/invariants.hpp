#ifndef SKEWPF_INVARIANTS_HPP
#define SKEWPF_INVARIANTS_HPP

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "skewpf/formats.hpp"
#include "skewpf/groebner.hpp"
#include "skewpf/linalg.hpp"
#include "skewpf/normal_forms.hpp"
#include "skewpf/skew_matrix.hpp"

// Congruence invariants of 6x6 skew matrices of linear forms: the span
// dimension d4 of the 4x4 Pfaffians, the rank-2 locus, the generalized-row
// rank loci Z_s, and the fingerprint that separates the six normal forms of
// semistable matrices with vanishing Pfaffian over five variables.

namespace skewpf {

namespace detail {

inline void require_size6(const SkewLinMatrix& m, const char* where) {
    if (m.size() != 6) throw std::invalid_argument(std::string(where) + ": matrix must be 6x6");
}

}  // namespace detail

// Dimension of the linear span of the fifteen 4x4 Pfaffians.
inline int d4(const SkewLinMatrix& m) {
    detail::require_size6(m, "d4");
    return static_cast<int>(span_dimension(pfaffians4(m)));
}

// Ideal of the rank-2 locus in the variable ring, generated by the 4x4
// Pfaffians.
inline Ideal rank2_ideal(const SkewLinMatrix& m) {
    detail::require_size6(m, "rank2_ideal");
    return Ideal(m.vars(), pfaffians4(m));
}

// Ideal (in the row-space ring) of generalized rows of rank at most s,
// generated by the (s+1)x(s+1) minors of the flipped matrix.
inline Ideal z_locus(const SkewLinMatrix& m, int s) {
    std::size_t bound = std::min<std::size_t>(m.vars()->size(), m.size());
    if (s < 0 || s + 1 > static_cast<int>(bound))
        throw std::invalid_argument("z_locus: rank bound out of range");
    PolyMatrix f = flipped(m);
    return Ideal(f.vars(), f.minors(static_cast<std::size_t>(s) + 1));
}

// Projective dimension of the span of all entries (-1 for the zero matrix).
inline int entry_span_dim(const SkewLinMatrix& m) {
    std::vector<Polynomial> entries;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j) entries.push_back(m.at(i, j));
    return static_cast<int>(span_dimension(entries)) - 1;
}

// Invariant tuple separating the six normal forms: entry-span dimension r,
// d4, projective dimension and degree of the rank-2 locus, and the projective
// dimensions of the rank loci Z_0..Z_3 of generalized rows.  Every field is
// constant on congruence orbits.
struct Fingerprint {
    int r = -1;
    int d4 = 0;
    int rank2_dim = PROJ_EMPTY;
    int rank2_deg = 0;  // 0 when the locus is empty
    std::vector<std::pair<int, int>> z_profile;  // (s, projective dimension)
    // Projective dimension of the locus where the rank-2 scheme is singular
    // or non-reduced (Jacobian rank drop).  The fields above coincide for the
    // normal-form pairs (b)/(d) and (c)/(e); this one tells them apart.
    int rank2_sing_dim = PROJ_EMPTY;

    bool operator==(const Fingerprint& o) const = default;

    std::string to_string() const {
        std::ostringstream out;
        out << "r=" << r << " d4=" << d4 << " rank2=(" << rank2_dim << "," << rank2_deg
            << ") z=[";
        for (std::size_t i = 0; i < z_profile.size(); ++i)
            out << (i ? " " : "") << z_profile[i].first << ":" << z_profile[i].second;
        out << "] sing=" << rank2_sing_dim;
        return out.str();
    }
};

namespace detail {

inline std::pair<int, int> ideal_dim_deg(const Ideal& ideal, const GroebnerBudget& budget) {
    GroebnerBasis gb = buchberger(ideal, budget);
    int dim = projective_dimension(gb);
    int deg = (dim == PROJ_EMPTY) ? 0 : projective_degree(gb);
    return {dim, deg};
}

}  // namespace detail

// Projective dimension of the subscheme of the rank-2 locus where the
// Jacobian of its degree-2 equations has rank < 3, i.e. where the
// codimension-3 locus fails to be smooth and reduced.  Computed from the
// reduced Groebner basis, so it depends only on the ideal and is therefore
// constant on congruence orbits.
inline int rank2_singular_dim(const SkewLinMatrix& m, const GroebnerBudget& budget = {}) {
    detail::require_size6(m, "rank2_singular_dim");
    Ideal ideal = rank2_ideal(m);
    GroebnerBasis gb = buchberger(ideal, budget);
    std::vector<Polynomial> quads;
    for (const auto& g : gb.elements())
        if (g.degree() == 2) quads.push_back(g);
    auto vars = m.vars();
    std::vector<Polynomial> gens = ideal.generators();
    if (!quads.empty()) {
        PolyMatrix jac(vars, quads.size(), vars->size());
        for (std::size_t i = 0; i < quads.size(); ++i)
            for (std::size_t j = 0; j < vars->size(); ++j)
                jac.at(i, j) = quads[i].partial_derivative(j);
        if (quads.size() >= 3 && vars->size() >= 3)
            for (auto& mi : jac.minors(3)) gens.push_back(std::move(mi));
    }
    return projective_dimension(Ideal(vars, gens), budget);
}

// Full invariant tuple.  The z-profile requires Groebner bases of minor
// ideals over the row-space ring, which can be expensive for dense matrices;
// pass with_z_profile = false to skip it (the remaining fields already
// separate the six normal forms).
inline Fingerprint fingerprint(const SkewLinMatrix& m, const GroebnerBudget& budget = {},
                               bool with_z_profile = true) {
    detail::require_size6(m, "fingerprint");
    Fingerprint fp;
    fp.r = entry_span_dim(m);
    fp.d4 = d4(m);
    auto [ydim, ydeg] = detail::ideal_dim_deg(rank2_ideal(m), budget);
    fp.rank2_dim = ydim;
    fp.rank2_deg = ydeg;
    if (with_z_profile) {
        int smax =
            std::min<int>(3, static_cast<int>(std::min<std::size_t>(m.vars()->size(), 6)) - 1);
        for (int s = 0; s <= smax; ++s) {
            GroebnerBasis gb = buchberger(z_locus(m, s), budget);
            fp.z_profile.emplace_back(s, projective_dimension(gb));
        }
    }
    fp.rank2_sing_dim = rank2_singular_dim(m, budget);
    return fp;
}

// Measured fingerprints of the six normal forms over five independent
// variables; frozen values double-checked by the test suite.
inline const std::vector<std::pair<P4Label, Fingerprint>>& p4_fingerprint_table() {
    static const std::vector<std::pair<P4Label, Fingerprint>> table = {
        {P4Label::a, {4, 10, 1, 2, {{0, -1}, {1, -1}, {2, 1}, {3, 4}}, PROJ_EMPTY}},
        {P4Label::b, {4, 9, 1, 2, {{0, -1}, {1, -1}, {2, 2}, {3, 3}}, PROJ_EMPTY}},
        {P4Label::c, {3, 8, 1, 2, {{0, -1}, {1, -1}, {2, 2}, {3, 4}}, 0}},
        {P4Label::d, {4, 9, 1, 2, {{0, -1}, {1, -1}, {2, 2}, {3, 3}}, 1}},
        {P4Label::e, {3, 8, 1, 2, {{0, -1}, {1, -1}, {2, 2}, {3, 4}}, 1}},
        {P4Label::f, {2, 6, 1, 4, {{0, -1}, {1, -1}, {2, 3}, {3, 5}}, 1}},
    };
    return table;
}

// Matches a semistable matrix over five variables with vanishing Pfaffian
// against the six normal-form fingerprints.  The caller must have ruled out
// instability (an unstable matrix can collide with a row of the table).
inline P4Label p4_fingerprint(const SkewLinMatrix& m, const GroebnerBudget& budget = {}) {
    detail::require_size6(m, "p4_fingerprint");
    if (m.vars()->size() != 5)
        throw std::invalid_argument("p4_fingerprint: need a five-variable ring");
    if (!pfaffian(m).is_zero())
        throw std::invalid_argument("p4_fingerprint: Pfaffian does not vanish");
    Fingerprint fp = fingerprint(m, budget, /*with_z_profile=*/false);
    for (const auto& [label, row] : p4_fingerprint_table())
        if (fp.r == row.r && fp.d4 == row.d4 && fp.rank2_dim == row.rank2_dim &&
            fp.rank2_deg == row.rank2_deg && fp.rank2_sing_dim == row.rank2_sing_dim)
            return label;
    return P4Label::none;
}

// ---------------------------------------------------------------------------
// Stability screening
// ---------------------------------------------------------------------------

enum class Stability { UNSTABLE, STRICTLY_SEMISTABLE, STABLE, POLYSTABLE, UNKNOWN };

inline std::string stability_name(Stability s) {
    switch (s) {
        case Stability::UNSTABLE: return "UNSTABLE";
        case Stability::STRICTLY_SEMISTABLE: return "STRICTLY_SEMISTABLE";
        case Stability::STABLE: return "STABLE";
        case Stability::POLYSTABLE: return "POLYSTABLE";
        case Stability::UNKNOWN: return "UNKNOWN";
    }
    throw std::logic_error("stability_name: bad value");
}

struct StabilityVerdict {
    Stability level = Stability::UNKNOWN;
    // (criterion, justification) pairs; every non-UNKNOWN verdict has >= 1.
    std::vector<std::pair<std::string, std::string>> evidence;
    std::optional<std::string> witness_pattern;
    std::optional<Congruence> witness;
};

namespace detail {

// Constant skew coefficient matrix of each variable.
inline std::vector<QMatrix> coefficient_slices(const SkewLinMatrix& m) {
    std::size_t n = m.size(), nv = m.vars()->size();
    std::vector<QMatrix> slices(nv, QMatrix(n, n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < nv; ++k) slices[k](i, j) = m.at(i, j).coeff_of_var(k);
    return slices;
}

// Strict-upper-triangle coordinates of a skew matrix, row by row.
inline QVec upper_coords(const QMatrix& a) {
    QVec v;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) v.push_back(a(i, j));
    return v;
}

inline QMatrix skew_from_upper(const QVec& v, std::size_t n) {
    QMatrix a(n, n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j, ++k) {
            a(i, j) = v.at(k);
            a(j, i) = -v.at(k);
        }
    return a;
}

// Basis of the annihilator of the coefficient span inside the space of skew
// forms, returned as skew matrices.
inline std::vector<QMatrix> coefficient_annihilator(const std::vector<QMatrix>& slices,
                                                    std::size_t n) {
    std::vector<QVec> rows;
    for (const auto& a : slices) rows.push_back(upper_coords(a));
    std::vector<QMatrix> out;
    for (const auto& k : QMatrix(rows).kernel_basis()) out.push_back(skew_from_upper(k, n));
    return out;
}

inline std::vector<QVec> column_space(const QMatrix& a) {
    std::vector<QVec> cols;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        QVec c(a.rows());
        for (std::size_t i = 0; i < a.rows(); ++i) c[i] = a(i, j);
        cols.push_back(std::move(c));
    }
    return span_basis(cols);
}

// All w with u^t A_k w = 0 for every u in U and every coefficient slice.
inline std::vector<QVec> orthogonal_space(const std::vector<QMatrix>& slices,
                                          const std::vector<QVec>& u) {
    if (slices.empty() || u.empty()) return {};
    std::size_t n = slices[0].rows();
    std::vector<QVec> rows;
    for (const auto& a : slices)
        for (const auto& v : u) {
            QVec r(n, Rat(0));
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t i = 0; i < n; ++i) r[j] += v[i] * a(i, j);
            rows.push_back(std::move(r));
        }
    return QMatrix(rows).kernel_basis();
}

inline bool subspace_contained(const std::vector<QVec>& inner, const std::vector<QVec>& outer) {
    for (const auto& v : inner)
        if (!in_span(outer, v)) return false;
    return true;
}

// First `count` vectors of a reduced spanning set.
inline std::vector<QVec> trim_span(const std::vector<QVec>& vecs, std::size_t count) {
    auto basis = span_basis(vecs);
    if (basis.size() > count) basis.resize(count);
    return basis;
}

// The flag shape behind each pattern: the pattern holds after a congruence
// iff there are subspaces U of dim p inside W of dim q with u^t M w = 0 for
// all u in U, w in W.  (The remaining zero cells of the mask are forced by
// skew-symmetry.)
inline std::optional<std::pair<std::size_t, std::size_t>> flag_shape(const std::string& name) {
    if (name == "NSS1") return {{1, 6}};
    if (name == "NSS2") return {{2, 5}};
    if (name == "NSS3") return {{4, 4}};
    if (name == "NS1") return {{1, 5}};
    if (name == "NS2") return {{2, 4}};
    if (name == "NS3") return {{3, 3}};
    return std::nullopt;
}

// Assembles a congruence whose first p rows span U (trimmed from u_seed) and
// first q rows span a compatible W; verifies the target form exactly.
inline std::optional<Congruence> build_flag_witness(const SkewLinMatrix& m,
                                                    const std::vector<QMatrix>& slices,
                                                    const FormatPattern& pat, std::size_t p,
                                                    std::size_t q,
                                                    const std::vector<QVec>& u_seed) {
    auto u = trim_span(u_seed, p);
    if (u.size() != p) return std::nullopt;
    auto w_all = orthogonal_space(slices, u);
    if (!subspace_contained(u, w_all)) return std::nullopt;
    if (span_dim(w_all) < q) return std::nullopt;
    // extend U inside w_all up to dimension q
    std::vector<QVec> rows = u;
    for (const auto& w : w_all) {
        if (rows.size() == q) break;
        std::vector<QVec> trial = rows;
        trial.push_back(w);
        if (span_dim(trial) > rows.size()) rows = std::move(trial);
    }
    if (rows.size() != q) return std::nullopt;
    QMatrix s = complete_to_basis(rows, m.size());
    Congruence g{s};
    if (!verify_format_witness(m, g, pat)) return std::nullopt;
    return g;
}

}  // namespace detail

// Searches for a congruence putting M into the given flag-type zero pattern
// (one of NS1..NS3, NSS1..NSS3).  The candidate flags are extracted exactly
// from kernels of random coefficient combinations and from the annihilator of
// the coefficient span; every candidate is verified before being returned, so
// a result is always sound while absence of one proves nothing.
inline std::optional<Congruence> flag_pattern_witness(const SkewLinMatrix& m,
                                                      const std::string& pattern_name,
                                                      std::uint64_t seed = 1) {
    detail::require_size6(m, "flag_pattern_witness");
    auto shape = detail::flag_shape(pattern_name);
    if (!shape) throw std::invalid_argument("flag_pattern_witness: not a flag pattern");
    auto [p, q] = *shape;
    const FormatPattern& pat = pattern(pattern_name);
    if (has_form(m, pat)) return Congruence::identity(m.size());

    auto slices = detail::coefficient_slices(m);
    std::vector<std::vector<QVec>> seeds;
    // constant kernel of the whole matrix
    {
        std::vector<QVec> rows;
        for (const auto& a : slices)
            for (std::size_t i = 0; i < a.rows(); ++i) rows.push_back(a.row(i));
        seeds.push_back(QMatrix(rows).kernel_basis());
    }
    // kernels of random combinations of the coefficient slices
    SmallIntStream rng(seed);
    std::vector<QVec> kernel_union;
    for (int t = 0; t < 8; ++t) {
        QMatrix combo(m.size(), m.size());
        for (const auto& a : slices) {
            Rat c = rng.next_rat();
            for (std::size_t i = 0; i < a.rows(); ++i)
                for (std::size_t j = 0; j < a.cols(); ++j) combo(i, j) += c * a(i, j);
        }
        auto ker = combo.kernel_basis();
        for (const auto& v : ker) kernel_union.push_back(v);
        seeds.push_back(std::move(ker));
    }
    seeds.push_back(span_basis(kernel_union));
    // column spaces of the annihilator of the coefficient span, their union,
    // and their pairwise intersections
    auto ann = detail::coefficient_annihilator(slices, m.size());
    std::vector<std::vector<QVec>> ann_cols;
    std::vector<QVec> ann_union;
    for (const auto& b : ann) {
        auto cols = detail::column_space(b);
        for (const auto& v : cols) ann_union.push_back(v);
        ann_cols.push_back(std::move(cols));
    }
    for (std::size_t i = 0; i < ann_cols.size(); ++i) {
        seeds.push_back(ann_cols[i]);
        for (std::size_t j = i + 1; j < ann_cols.size(); ++j)
            seeds.push_back(intersect_spans(ann_cols[i], ann_cols[j]));
    }
    seeds.push_back(span_basis(ann_union));

    for (const auto& seed_space : seeds) {
        if (seed_space.empty()) continue;
        // the seed as a candidate for U
        if (auto g = detail::build_flag_witness(m, slices, pat, p, q, seed_space)) return g;
        // the seed as a candidate for W: recover U as the largest subspace of
        // the seed orthogonal to it
        if (p < q && span_dim(seed_space) >= p) {
            auto u = intersect_spans(detail::orthogonal_space(slices, seed_space), seed_space);
            if (!u.empty())
                if (auto g = detail::build_flag_witness(m, slices, pat, p, q, u)) return g;
        }
    }
    return std::nullopt;
}

// Screens M for GIT (in)stability under congruence.  d4 bounds give positive
// certificates; verified flag-pattern witnesses give negative ones.  UNKNOWN
// is a legitimate outcome: failing to find a witness proves nothing.
inline StabilityVerdict stability_screen(const SkewLinMatrix& m, std::uint64_t seed = 1) {
    detail::require_size6(m, "stability_screen");
    StabilityVerdict verdict;
    int d = d4(m);
    std::string dstr = "d4 = " + std::to_string(d);

    if (d <= 7) {
        for (const char* name : {"NSS1", "NSS2", "NSS3"}) {
            if (auto g = flag_pattern_witness(m, name, seed)) {
                verdict.level = Stability::UNSTABLE;
                verdict.witness_pattern = name;
                verdict.witness = g;
                verdict.evidence.emplace_back(
                    std::string("verified congruence to form ") + name,
                    "a matrix congruent to this zero pattern is unstable");
                return verdict;
            }
        }
    } else {
        verdict.evidence.emplace_back(
            dstr + " >= 8", "every unstable zero pattern forces d4 <= 7, so M is semistable");
    }

    if (d >= 13) {
        verdict.level = Stability::STABLE;
        verdict.evidence.emplace_back(
            dstr + " >= 13", "every not-stable zero pattern forces d4 <= 12, so M is stable");
        return verdict;
    }

    std::optional<Congruence> ns;
    std::string ns_name;
    for (const char* name : {"NS1", "NS2", "NS3"}) {
        if ((ns = flag_pattern_witness(m, name, seed))) {
            ns_name = name;
            break;
        }
    }
    if (ns) {
        verdict.witness_pattern = ns_name;
        verdict.witness = ns;
        verdict.evidence.emplace_back(
            "verified congruence to form " + ns_name,
            "a matrix congruent to this zero pattern is not stable");
        if (d >= 8) {
            verdict.level = Stability::STRICTLY_SEMISTABLE;
        } else {
            verdict.level = Stability::UNKNOWN;  // not stable, but possibly unstable
        }
        return verdict;
    }
    verdict.level = Stability::UNKNOWN;
    if (d >= 8)
        verdict.evidence.emplace_back("no stability certificate",
                                      "semistable, but neither stable nor strictly semistable "
                                      "could be certified");
    return verdict;
}

// Stability classes of the six normal-form types.
inline StabilityVerdict type_stability(P4Label label) {
    StabilityVerdict v;
    switch (label) {
        case P4Label::a:
        case P4Label::b:
        case P4Label::c:
            v.level = Stability::STABLE;
            v.evidence.emplace_back("type " + label_name(label),
                                    "the six semistable normal-form types are distinguished by "
                                    "their fingerprints; this type admits no not-stable pattern");
            break;
        case P4Label::d:
        case P4Label::e:
            v.level = Stability::STRICTLY_SEMISTABLE;
            v.evidence.emplace_back("type " + label_name(label),
                                    "strictly semistable but not polystable: the type-f "
                                    "degeneration lies in the orbit closure");
            break;
        case P4Label::f:
            v.level = Stability::POLYSTABLE;
            v.evidence.emplace_back("type f",
                                    "polystable: d4 is constant on orbits and minimal here, so "
                                    "the semistable orbit is closed");
            break;
        case P4Label::none:
            v.level = Stability::UNKNOWN;
            break;
    }
    return v;
}

}  // namespace skewpf

#endif
