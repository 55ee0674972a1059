#ifndef SKEWPF_SMALL_CLASSIFY_HPP
#define SKEWPF_SMALL_CLASSIFY_HPP

#include <optional>
#include <string>
#include <vector>

#include "skewpf/formats.hpp"

namespace skewpf {

// Witness for a two-sided (S*M*T) format reduction.
struct PlainWitness {
    std::string pattern;
    QMatrix s, t;
};

// Witness for a congruence (S*M*S^t) format reduction.
struct SkewWitness {
    std::string pattern;
    QMatrix s;
};

namespace detail {

// One flat coefficient vector for a list of polynomials over a common
// variable set (linear forms only — used to compare column/row tuples).
inline QVec stack_coeffs(const std::vector<Polynomial>& ps) {
    QVec v;
    for (const auto& p : ps) {
        auto c = linear_form_coeffs(p);
        v.insert(v.end(), c.begin(), c.end());
    }
    return v;
}

// Constant right kernel of a matrix of linear forms: v with N*v = 0
// identically. Returns a basis of all such v.
inline std::vector<QVec> constant_right_kernel(const PolyMatrix& n) {
    std::size_t nv = n.vars()->size();
    // one equation per (row, variable) pair
    QMatrix sys(n.rows() * nv, n.cols());
    for (std::size_t i = 0; i < n.rows(); ++i)
        for (std::size_t j = 0; j < n.cols(); ++j)
            for (std::size_t k = 0; k < nv; ++k) sys(i * nv + k, j) = n.at(i, j).coeff_of_var(k);
    return sys.kernel_basis();
}

inline std::vector<Rat> random_point(SmallIntStream& rng, std::size_t n) {
    std::vector<Rat> p(n);
    for (auto& x : p) x = rng.next_rat();
    return p;
}

// Sampled kernel vectors of N at points where N drops rank by exactly one.
inline std::vector<QVec> sampled_kernels(const PolyMatrix& n, SmallIntStream& rng,
                                         int samples) {
    std::vector<QVec> out;
    std::size_t nv = n.vars()->size();
    for (int s = 0; s < samples; ++s) {
        auto p = random_point(rng, nv);
        auto m = n.evaluate(p);
        auto ker = m.kernel_basis();
        if (ker.size() == 1) out.push_back(ker[0]);
    }
    return out;
}

// First invertible matrix whose rows are combinations of the given
// solution-space basis (particular + kernel of a linear system flattened
// row-major into an n x n matrix).
inline std::optional<QMatrix> invertible_from_solution_space(const QVec& particular,
                                                            const std::vector<QVec>& kernel,
                                                            std::size_t n, SmallIntStream& rng,
                                                            int tries) {
    for (int t = 0; t < tries; ++t) {
        QVec v = particular;
        for (const auto& k : kernel) {
            Rat c = (t == 0) ? Rat(0) : Rat(rng.next());
            for (std::size_t i = 0; i < v.size(); ++i) v[i] += c * k[i];
        }
        QMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = v[i * n + j];
        if (m.det() != 0) return m;
    }
    return std::nullopt;
}

}  // namespace detail

// ---- 2x2 ----

// Symmetric case: congruence to [[*,0],[0,0]]. Plain case: S*M*T to a
// zero column or zero row. Precondition det = 0 is checked exactly.
inline std::optional<PlainWitness> classify_2x2(const PolyMatrix& n, bool symmetric) {
    if (n.rows() != 2 || n.cols() != 2) throw std::invalid_argument("classify_2x2 size");
    if (!n.determinant().is_zero()) throw std::invalid_argument("classify_2x2 needs det = 0");
    auto done = [&](const std::string& pat, QMatrix s, QMatrix t) -> std::optional<PlainWitness> {
        if (!verify_format_witness(n, s, t, pattern(pat))) return std::nullopt;
        return PlainWitness{pat, std::move(s), std::move(t)};
    };
    if (symmetric) {
        if (n != n.transpose()) throw std::invalid_argument("matrix is not symmetric");
        const Polynomial &a = n.at(0, 0), &b = n.at(0, 1), &c = n.at(1, 1);
        QMatrix swap(2, 2);
        swap(0, 1) = swap(1, 0) = 1;
        if (a.is_zero() && c.is_zero()) {
            // det = -b^2 = 0 forces b = 0: the zero matrix
            return done("sym2-corner", QMatrix::identity(2), QMatrix::identity(2));
        }
        QMatrix s = QMatrix::identity(2);
        Polynomial diag = a;
        if (a.is_zero()) {
            s = swap;
            diag = c;
        }
        // det = 0 forces the off-diagonal entry to be a constant multiple
        // of the nonzero diagonal one; clear it.
        auto q = b.divide_exact(diag);
        if (!q.has_value() || q->degree() > 0) return std::nullopt;
        Rat lambda = q->is_zero() ? Rat(0) : q->leading_term().second;
        QMatrix clear = QMatrix::identity(2);
        clear(1, 0) = -lambda;
        QMatrix w = clear * s;
        return done("sym2-corner", w, w.transpose());
    }
    // plain: columns proportional -> zero column; rows proportional -> zero row
    std::vector<Polynomial> c0 = {n.at(0, 0), n.at(1, 0)};
    std::vector<Polynomial> c1 = {n.at(0, 1), n.at(1, 1)};
    if (span_dim({detail::stack_coeffs(c0), detail::stack_coeffs(c1)}) <= 1) {
        QMatrix t = QMatrix::identity(2);
        if (!(c1[0].is_zero() && c1[1].is_zero())) {
            if (c0[0].is_zero() && c0[1].is_zero()) {
                t = QMatrix(2, 2);
                t(0, 1) = t(1, 0) = 1;  // move the nonzero column first
            } else {
                // c1 = mu * c0
                auto q = (c1[0].is_zero() ? c1[1] : c1[0])
                             .divide_exact(c1[0].is_zero() ? c0[1] : c0[0]);
                if (!q.has_value() || q->degree() > 0) return std::nullopt;
                t(0, 1) = -q->leading_term().second;
            }
        }
        return done("p2-zerocol", QMatrix::identity(2), t);
    }
    std::vector<Polynomial> r0 = {n.at(0, 0), n.at(0, 1)};
    std::vector<Polynomial> r1 = {n.at(1, 0), n.at(1, 1)};
    if (span_dim({detail::stack_coeffs(r0), detail::stack_coeffs(r1)}) <= 1) {
        QMatrix s = QMatrix::identity(2);
        if (c0[1].is_zero() && c1[1].is_zero()) {
            // second row already zero
        } else if (r0[0].is_zero() && r0[1].is_zero()) {
            s = QMatrix(2, 2);
            s(0, 1) = s(1, 0) = 1;
        } else {
            auto q = (r1[0].is_zero() ? r1[1] : r1[0])
                         .divide_exact(r1[0].is_zero() ? r0[1] : r0[0]);
            if (!q.has_value() || q->degree() > 0) return std::nullopt;
            s(1, 0) = -q->leading_term().second;
        }
        return done("p2-zerorow", s, QMatrix::identity(2));
    }
    return std::nullopt;
}

// ---- 3x3 ----

// Reduces a 3x3 matrix of linear forms with identically vanishing
// determinant to one of four patterns: zero column, zero row, zero
// lower-right 2x2 block, or skew-symmetric. The witness is always
// post-verified; the sampling steps can only fail safe.
inline std::optional<PlainWitness> classify_3x3_detzero(const PolyMatrix& n,
                                                        std::uint64_t seed = 1,
                                                        int samples = 20) {
    if (n.rows() != 3 || n.cols() != 3) throw std::invalid_argument("classify_3x3 size");
    if (!n.determinant().is_zero()) throw std::invalid_argument("classify_3x3 needs det = 0");
    auto done = [&](const std::string& pat, QMatrix s, QMatrix t) -> std::optional<PlainWitness> {
        if (!verify_format_witness(n, s, t, pattern(pat))) return std::nullopt;
        return PlainWitness{pat, std::move(s), std::move(t)};
    };

    // (1) constant right kernel -> zero third column
    auto rk = detail::constant_right_kernel(n);
    if (!rk.empty()) {
        auto basis = complete_to_basis({rk[0]}, 3);  // rows: v, w1, w2
        // T columns: w1, w2, v
        QMatrix t(3, 3);
        for (std::size_t i = 0; i < 3; ++i) {
            t(i, 0) = basis(1, i);
            t(i, 1) = basis(2, i);
            t(i, 2) = basis(0, i);
        }
        auto r = done("p3-zerocol", QMatrix::identity(3), t);
        if (r) return r;
    }

    // (2) constant left kernel -> zero third row
    auto lk = detail::constant_right_kernel(n.transpose());
    if (!lk.empty()) {
        auto basis = complete_to_basis({lk[0]}, 3);
        QMatrix s(3, 3);
        for (std::size_t j = 0; j < 3; ++j) {
            s(0, j) = basis(1, j);
            s(1, j) = basis(2, j);
            s(2, j) = basis(0, j);
        }
        auto r = done("p3-zerorow", s, QMatrix::identity(3));
        if (r) return r;
    }

    SmallIntStream rng(seed);
    auto kernels = detail::sampled_kernels(n, rng, samples);
    auto kspan = span_basis(kernels);

    if (kspan.size() == 2) {
        // Compression: N maps the kernel-span plane into a single constant
        // column direction z. Rows 1,2 of S annihilate z; columns 1,2 of T
        // span the plane.
        std::vector<Polynomial> img;  // N * u for u in the plane, stacked
        for (const auto& u : kspan)
            for (std::size_t i = 0; i < 3; ++i) {
                Polynomial e = Polynomial::zero(n.vars());
                for (std::size_t j = 0; j < 3; ++j) e += n.at(i, j) * u[j];
                img.push_back(e);
            }
        // coefficient vectors of the image columns: rows indexed by matrix
        // row, find the common direction z
        std::size_t nv = n.vars()->size();
        std::vector<QVec> zcols;
        for (std::size_t blk = 0; blk < kspan.size(); ++blk)
            for (std::size_t k = 0; k < nv; ++k) {
                QVec col(3);
                for (std::size_t i = 0; i < 3; ++i) col[i] = img[blk * 3 + i].coeff_of_var(k);
                bool zero = col[0] == 0 && col[1] == 0 && col[2] == 0;
                if (!zero) zcols.push_back(col);
            }
        auto zspan = span_basis(zcols);
        if (zspan.size() == 1) {
            QVec z = zspan[0];
            // S rows 1,2 = basis of z-perp, row 0 completes
            QMatrix zp(1, 3);
            for (std::size_t j = 0; j < 3; ++j) zp(0, j) = z[j];
            auto perp = zp.kernel_basis();  // 2 vectors
            auto sb = complete_to_basis(perp, 3);
            QMatrix s(3, 3);
            for (std::size_t j = 0; j < 3; ++j) {
                s(0, j) = sb(2, j);
                s(1, j) = sb(0, j);
                s(2, j) = sb(1, j);
            }
            auto tb = complete_to_basis(kspan, 3);
            QMatrix t(3, 3);
            for (std::size_t i = 0; i < 3; ++i) {
                t(i, 0) = tb(2, i);
                t(i, 1) = tb(0, i);
                t(i, 2) = tb(1, i);
            }
            auto r = done("p3-block", s, t);
            if (r) return r;
        }
    }

    // (3) skew-equivalent: for T = identity (then random tries), the
    // condition "S*N*T is skew" is linear in S; an invertible solution
    // exists whenever N is equivalent to a skew matrix.
    std::size_t nv = n.vars()->size();
    for (int attempt = 0; attempt < 4; ++attempt) {
        QMatrix t = QMatrix::identity(3);
        if (attempt > 0) {
            do {
                for (std::size_t i = 0; i < 3; ++i)
                    for (std::size_t j = 0; j < 3; ++j) t(i, j) = rng.next_rat();
            } while (t.det() == 0);
        }
        PolyMatrix nt = n.right_mul(t);
        // unknowns s(i,k); equations: (S*NT)(i,j) + (S*NT)(j,i) = 0 for i<=j
        std::vector<QVec> rows;
        QVec rhs;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = i; j < 3; ++j)
                for (std::size_t v = 0; v < nv; ++v) {
                    QVec row(9, Rat(0));
                    for (std::size_t k = 0; k < 3; ++k) {
                        row[i * 3 + k] += nt.at(k, j).coeff_of_var(v);
                        row[j * 3 + k] += nt.at(k, i).coeff_of_var(v);
                    }
                    rows.push_back(std::move(row));
                    rhs.push_back(Rat(0));
                }
        auto sol = solve_linear(QMatrix(rows), rhs);
        if (!sol.particular) continue;
        auto s = detail::invertible_from_solution_space(*sol.particular, sol.kernel, 3, rng, 60);
        if (!s) continue;
        auto r = done("p3-skew", *s, t);
        if (r) return r;
    }
    return std::nullopt;
}

// ---- 4x4 skew ----

// Reduces a 4x4 skew matrix with identically vanishing Pfaffian to one
// of two patterns: all stars in row/column 0, or a 3x3 skew block with
// zero last row and column.
inline std::optional<SkewWitness> classify_4x4_skew_pfzero(const SkewLinMatrix& n,
                                                           std::uint64_t seed = 1,
                                                           int samples = 20) {
    if (n.size() != 4) throw std::invalid_argument("classify_4x4 size");
    if (!pfaffian(n).is_zero()) throw std::invalid_argument("classify_4x4 needs Pf = 0");
    auto done = [&](const std::string& pat, QMatrix s) -> std::optional<SkewWitness> {
        Congruence c(s);
        if (!verify_format_witness(n, c, pattern(pat))) return std::nullopt;
        return SkewWitness{pat, std::move(s)};
    };
    if (n.grid().is_zero()) return done("s4-row0", QMatrix::identity(4));

    // (1) constant kernel vector -> zero last row/column
    auto rk = detail::constant_right_kernel(n.grid());
    if (!rk.empty()) {
        auto basis = complete_to_basis({rk[0]}, 4);
        QMatrix s(4, 4);
        for (std::size_t j = 0; j < 4; ++j) {
            s(0, j) = basis(1, j);
            s(1, j) = basis(2, j);
            s(2, j) = basis(3, j);
            s(3, j) = basis(0, j);  // the kernel vector becomes the last row
        }
        auto r = done("s4-corner", s);
        if (r) return r;
    }

    // (2) decomposable case: the column spaces at sample points share a
    // common constant direction u; rows 1..3 of S annihilate u.
    SmallIntStream rng(seed);
    std::optional<std::vector<QVec>> common;
    int used = 0;
    for (int t = 0; t < samples && used < 6; ++t) {
        auto p = detail::random_point(rng, n.vars()->size());
        auto m = n.grid().evaluate(p);
        if (m.rank() == 0) continue;
        auto cols = m.transpose().row_space_basis();
        common = common ? intersect_spans(*common, cols) : cols;
        ++used;
    }
    if (common && common->size() == 1) {
        QVec u = (*common)[0];
        QMatrix up(1, 4);
        for (std::size_t j = 0; j < 4; ++j) up(0, j) = u[j];
        auto perp = up.kernel_basis();  // 3 vectors
        auto sb = complete_to_basis(perp, 4);
        QMatrix s(4, 4);
        for (std::size_t j = 0; j < 4; ++j) {
            s(0, j) = sb(3, j);
            for (std::size_t i = 0; i < 3; ++i) s(i + 1, j) = sb(i, j);
        }
        auto r = done("s4-row0", s);
        if (r) return r;
    }
    return std::nullopt;
}

}  // namespace skewpf

#endif
