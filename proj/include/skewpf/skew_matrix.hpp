#ifndef SKEWPF_SKEW_MATRIX_HPP
#define SKEWPF_SKEW_MATRIX_HPP

#include <optional>
#include <stdexcept>
#include <vector>

#include "skewpf/matrix.hpp"

namespace skewpf {

// Skew-symmetric matrix of linear forms. The skew invariant and the
// linear-form invariant are enforced at construction; only the upper
// triangle ever needs to be supplied.
class SkewLinMatrix {
public:
    explicit SkewLinMatrix(PolyMatrix grid) : grid_(std::move(grid)) {
        if (grid_.rows() != grid_.cols()) throw std::invalid_argument("skew matrix must be square");
        if (!grid_.is_skew_symmetric())
            throw std::invalid_argument("matrix is not skew-symmetric");
        if (!grid_.entries_are_linear_forms())
            throw std::invalid_argument("entries must be linear forms");
    }

    // Build from the strict upper triangle, row by row:
    // (0,1),(0,2),...,(0,n-1),(1,2),...
    static SkewLinMatrix from_upper_triangle(const VarSetPtr& vars, std::size_t n,
                                             const std::vector<Polynomial>& upper) {
        if (upper.size() != n * (n - 1) / 2)
            throw std::invalid_argument("upper triangle entry count");
        PolyMatrix g(vars, n, n);
        std::size_t k = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j, ++k) {
                g.at(i, j) = upper[k];
                g.at(j, i) = -upper[k];
            }
        return SkewLinMatrix(std::move(g));
    }

    static SkewLinMatrix zero(const VarSetPtr& vars, std::size_t n) {
        return SkewLinMatrix(PolyMatrix(vars, n, n));
    }

    std::size_t size() const { return grid_.rows(); }
    const VarSetPtr& vars() const { return grid_.vars(); }
    const PolyMatrix& grid() const { return grid_; }
    const Polynomial& at(std::size_t i, std::size_t j) const { return grid_.at(i, j); }

    bool operator==(const SkewLinMatrix& o) const { return grid_ == o.grid_; }

    SkewLinMatrix substitute(const std::vector<Polynomial>& images) const {
        return SkewLinMatrix(grid_.substitute(images));
    }

private:
    PolyMatrix grid_;
};

// Invertible change-of-basis matrix for the congruence action M -> S M S^t.
class Congruence {
public:
    explicit Congruence(QMatrix s) : s_(std::move(s)) {
        if (s_.rows() != s_.cols()) throw std::invalid_argument("congruence must be square");
        det_ = s_.det();
        if (det_ == 0) throw std::invalid_argument("congruence matrix is singular");
    }

    static Congruence identity(std::size_t n) { return Congruence(QMatrix::identity(n)); }

    const QMatrix& matrix() const { return s_; }
    const Rat& det() const { return det_; }
    Congruence compose(const Congruence& inner) const { return Congruence(s_ * inner.s_); }
    Congruence inverse() const { return Congruence(*s_.inverse()); }

private:
    QMatrix s_;
    Rat det_;
};

inline SkewLinMatrix apply_congruence(const Congruence& s, const SkewLinMatrix& m) {
    if (s.matrix().rows() != m.size()) throw std::invalid_argument("congruence size mismatch");
    return SkewLinMatrix(m.grid().left_mul(s.matrix()).right_mul(s.matrix().transpose()));
}

namespace detail {

// Perfect-matching sum. `order` lists the still-unmatched indices in
// increasing order; the sign of each matching is the sign of the
// permutation (i1 j1 i2 j2 ...) read against the sorted index list.
inline void pfaffian_rec(const PolyMatrix& g, std::vector<std::size_t>& avail, int sign,
                         const Polynomial& partial, Polynomial& acc) {
    if (avail.empty()) {
        acc += sign > 0 ? partial : -partial;
        return;
    }
    std::size_t i = avail.front();
    for (std::size_t k = 1; k < avail.size(); ++k) {
        std::size_t j = avail[k];
        if (g.at(i, j).is_zero()) continue;
        // pairing i with avail[k] crosses the k-1 indices between them
        int s = (k % 2 == 1) ? sign : -sign;
        std::vector<std::size_t> rest;
        for (std::size_t t = 1; t < avail.size(); ++t)
            if (t != k) rest.push_back(avail[t]);
        pfaffian_rec(g, rest, s, partial * g.at(i, j), acc);
    }
}

}  // namespace detail

// Pfaffian via the perfect-matching sum; Pf([[0,a],[-a,0]]) = a.
inline Polynomial pfaffian(const SkewLinMatrix& m) {
    std::size_t n = m.size();
    if (n % 2 != 0) throw std::invalid_argument("pfaffian needs even size");
    Polynomial acc = Polynomial::zero(m.vars());
    std::vector<std::size_t> avail(n);
    for (std::size_t i = 0; i < n; ++i) avail[i] = i;
    detail::pfaffian_rec(m.grid(), avail, 1, Polynomial::constant(m.vars(), 1), acc);
    return acc;
}

inline SkewLinMatrix delete_rows_cols(const SkewLinMatrix& m, std::size_t i, std::size_t j) {
    if (i == j) throw std::invalid_argument("delete_rows_cols needs distinct indices");
    if (i >= m.size() || j >= m.size()) throw std::out_of_range("delete_rows_cols index");
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < m.size(); ++k)
        if (k != i && k != j) keep.push_back(k);
    return SkewLinMatrix(m.grid().submatrix(keep, keep));
}

// Laplace-style expansion along row i; must agree with pfaffian() for
// every i. The sign exponent is i+j+1+theta with theta = 0 if i<=j, 1
// otherwise.
inline Polynomial pfaffian_laplace(const SkewLinMatrix& m, std::size_t i) {
    std::size_t n = m.size();
    if (n % 2 != 0) throw std::invalid_argument("pfaffian needs even size");
    if (i >= n) throw std::out_of_range("pfaffian_laplace row index");
    if (n == 0) return Polynomial::constant(m.vars(), 1);
    Polynomial acc = Polynomial::zero(m.vars());
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i || m.at(i, j).is_zero()) continue;
        int theta = (i <= j) ? 0 : 1;
        int exp = static_cast<int>(i + j + 1) + theta;
        Polynomial sub = (n == 2) ? Polynomial::constant(m.vars(), 1)
                                  : pfaffian(delete_rows_cols(m, i, j));
        Polynomial t = m.at(i, j) * sub;
        acc += (exp % 2 == 0) ? t : -t;
    }
    return acc;
}

// The 15 sub-Pfaffians Pf(M_ij), 0 <= i < j <= 5, lexicographic (i,j).
inline std::vector<Polynomial> pfaffians4(const SkewLinMatrix& m) {
    if (m.size() != 6) throw std::invalid_argument("pfaffians4 needs a 6x6 matrix");
    std::vector<Polynomial> out;
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = i + 1; j < 6; ++j) out.push_back(pfaffian(delete_rows_cols(m, i, j)));
    return out;
}

// Reversal of rows and columns: entry (i,j) -> (n-1-i, n-1-j). This is
// the congruence by the anti-diagonal permutation.
inline SkewLinMatrix reverse(const SkewLinMatrix& m) {
    std::size_t n = m.size();
    PolyMatrix g(m.vars(), n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g.at(i, j) = m.at(n - 1 - i, n - 1 - j);
    return SkewLinMatrix(std::move(g));
}

// The flipped matrix over a fresh y-ring: row i is the coefficient of
// the i-th original variable in the row vector (y0,...,y_{n-1}) * M.
// Entry (i,j) = sum_s y_s * [coeff of x_i in M(s,j)].
inline PolyMatrix flipped(const SkewLinMatrix& m) {
    std::size_t n = m.size();
    std::size_t v = m.vars()->size();
    VarSetPtr yvars = VariableSet::prefixed("y", n);
    for (std::size_t i = 0; i < v; ++i)
        if (yvars->index_of(m.vars()->name(i)) >= 0)
            throw std::invalid_argument("variable name collides with auxiliary y-basis");
    PolyMatrix f(yvars, v, n);
    for (std::size_t i = 0; i < v; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t s = 0; s < n; ++s) {
                Rat c = m.at(s, j).coeff_of_var(i);
                if (c != 0) f.at(i, j) += Polynomial::variable(yvars, s) * c;
            }
    return f;
}

// Inverse of flipped(): reconstructs M over the given variable set.
inline SkewLinMatrix unflip(const PolyMatrix& f, const VarSetPtr& vars) {
    std::size_t n = f.cols();
    if (f.rows() != vars->size()) throw std::invalid_argument("unflip variable count");
    PolyMatrix g(vars, n, n);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < vars->size(); ++i) {
                Rat c = f.at(i, j).coeff_of_var(s);
                if (c != 0) g.at(s, j) += Polynomial::variable(vars, i) * c;
            }
    return SkewLinMatrix(std::move(g));
}

struct DoubleSkewBlocks {
    SkewLinMatrix n0, n1, n2;
};

// Succeeds iff M = [[N0,N1],[N1,N2]] with all three 3x3 blocks skew.
inline std::optional<DoubleSkewBlocks> double_skew_decompose(const SkewLinMatrix& m) {
    if (m.size() != 6) throw std::invalid_argument("double_skew_decompose needs 6x6");
    std::vector<std::size_t> top = {0, 1, 2}, bot = {3, 4, 5};
    PolyMatrix n0 = m.grid().submatrix(top, top);
    PolyMatrix n1 = m.grid().submatrix(top, bot);
    PolyMatrix n2 = m.grid().submatrix(bot, bot);
    if (!n1.is_skew_symmetric()) return std::nullopt;
    return DoubleSkewBlocks{SkewLinMatrix(std::move(n0)), SkewLinMatrix(std::move(n1)),
                            SkewLinMatrix(std::move(n2))};
}

inline std::size_t rank_at_point(const SkewLinMatrix& m, const std::vector<Rat>& point) {
    if (point.size() != m.vars()->size()) throw std::invalid_argument("point length");
    return m.grid().evaluate(point).rank();
}

}  // namespace skewpf

#endif
