#ifndef SKEWPF_LINALG_HPP
#define SKEWPF_LINALG_HPP

#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "skewpf/polynomial.hpp"
#include "skewpf/rational.hpp"

namespace skewpf {

using QVec = std::vector<Rat>;

// Dense matrix over the rationals. All eliminations are exact.
class QMatrix {
public:
    QMatrix() = default;
    QMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows, QVec(cols, Rat(0))) {}
    explicit QMatrix(std::vector<QVec> rows) : data_(std::move(rows)) {
        rows_ = data_.size();
        cols_ = rows_ ? data_[0].size() : 0;
        for (const auto& r : data_)
            if (r.size() != cols_) throw std::invalid_argument("ragged matrix");
    }

    static QMatrix identity(std::size_t n) {
        QMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rat& operator()(std::size_t i, std::size_t j) { return data_.at(i).at(j); }
    const Rat& operator()(std::size_t i, std::size_t j) const { return data_.at(i).at(j); }
    const QVec& row(std::size_t i) const { return data_.at(i); }

    QMatrix transpose() const {
        QMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = data_[i][j];
        return t;
    }

    QMatrix operator*(const QMatrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape");
        QMatrix r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                if (data_[i][k] == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    r(i, j) += data_[i][k] * o(k, j);
            }
        return r;
    }

    QVec operator*(const QVec& v) const {
        if (v.size() != cols_) throw std::invalid_argument("matrix-vector shape");
        QVec r(rows_, Rat(0));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r[i] += data_[i][j] * v[j];
        return r;
    }

    QMatrix operator-(const QMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("shape");
        QMatrix r = *this;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(i, j) -= o(i, j);
        return r;
    }

    bool operator==(const QMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    // In-place reduced row echelon form; returns pivot column indices.
    std::vector<std::size_t> rref() {
        std::vector<std::size_t> pivots;
        std::size_t r = 0;
        for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
            std::size_t p = r;
            while (p < rows_ && data_[p][c] == 0) ++p;
            if (p == rows_) continue;
            std::swap(data_[p], data_[r]);
            Rat inv = Rat(1) / data_[r][c];
            for (auto& x : data_[r]) x *= inv;
            for (std::size_t i = 0; i < rows_; ++i) {
                if (i == r || data_[i][c] == 0) continue;
                Rat f = data_[i][c];
                for (std::size_t j = 0; j < cols_; ++j) data_[i][j] -= f * data_[r][j];
            }
            pivots.push_back(c);
            ++r;
        }
        return pivots;
    }

    std::size_t rank() const {
        QMatrix m = *this;
        return m.rref().size();
    }

    Rat det() const {
        if (rows_ != cols_) throw std::invalid_argument("det of non-square matrix");
        QMatrix m = *this;
        Rat d(1);
        for (std::size_t c = 0; c < cols_; ++c) {
            std::size_t p = c;
            while (p < rows_ && m(p, c) == 0) ++p;
            if (p == rows_) return Rat(0);
            if (p != c) {
                std::swap(m.data_[p], m.data_[c]);
                d = -d;
            }
            d *= m(c, c);
            Rat inv = Rat(1) / m(c, c);
            for (std::size_t i = c + 1; i < rows_; ++i) {
                if (m(i, c) == 0) continue;
                Rat f = m(i, c) * inv;
                for (std::size_t j = c; j < cols_; ++j) m(i, j) -= f * m(c, j);
            }
        }
        return d;
    }

    std::optional<QMatrix> inverse() const {
        if (rows_ != cols_) throw std::invalid_argument("inverse of non-square matrix");
        QMatrix aug(rows_, 2 * cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) aug(i, j) = data_[i][j];
            aug(i, cols_ + i) = 1;
        }
        auto pivots = aug.rref();
        if (pivots.size() != rows_ || pivots.back() >= cols_) return std::nullopt;
        QMatrix inv(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) inv(i, j) = aug(i, cols_ + j);
        return inv;
    }

    // Basis of { v : A v = 0 }.
    std::vector<QVec> kernel_basis() const {
        QMatrix m = *this;
        auto pivots = m.rref();
        std::set<std::size_t> piv(pivots.begin(), pivots.end());
        std::vector<QVec> basis;
        for (std::size_t c = 0; c < cols_; ++c) {
            if (piv.count(c)) continue;
            QVec v(cols_, Rat(0));
            v[c] = 1;
            for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, c);
            basis.push_back(std::move(v));
        }
        return basis;
    }

    std::vector<QVec> row_space_basis() const {
        QMatrix m = *this;
        auto pivots = m.rref();
        std::vector<QVec> basis;
        for (std::size_t r = 0; r < pivots.size(); ++r) basis.push_back(m.row(r));
        return basis;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<QVec> data_;
};

struct LinearSolution {
    std::optional<QVec> particular;  // nullopt = inconsistent system
    std::vector<QVec> kernel;        // basis of the homogeneous solutions
};

// Exact solve A v = b: particular solution plus kernel basis, or a
// certificate of inconsistency (empty particular).
inline LinearSolution solve_linear(const QMatrix& a, const QVec& b) {
    if (b.size() != a.rows()) throw std::invalid_argument("solve_linear: dimension mismatch");
    QMatrix aug(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
        aug(i, a.cols()) = b[i];
    }
    auto pivots = aug.rref();
    LinearSolution sol;
    sol.kernel = a.kernel_basis();
    if (!pivots.empty() && pivots.back() == a.cols()) return sol;  // 0 = 1 row
    QVec v(a.cols(), Rat(0));
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = aug(r, a.cols());
    sol.particular = std::move(v);
    return sol;
}

// --- subspace utilities (subspaces given by spanning row vectors) ---

inline std::vector<QVec> span_basis(const std::vector<QVec>& vectors) {
    if (vectors.empty()) return {};
    return QMatrix(vectors).row_space_basis();
}

inline std::size_t span_dim(const std::vector<QVec>& vectors) {
    if (vectors.empty()) return 0;
    return QMatrix(vectors).rank();
}

inline bool in_span(const std::vector<QVec>& basis, const QVec& v) {
    if (basis.empty()) {
        for (const auto& x : v)
            if (x != 0) return false;
        return true;
    }
    auto all = basis;
    all.push_back(v);
    return QMatrix(all).rank() == QMatrix(basis).rank();
}

// Intersection of two subspaces of Q^n.
inline std::vector<QVec> intersect_spans(const std::vector<QVec>& a, const std::vector<QVec>& b) {
    if (a.empty() || b.empty()) return {};
    std::size_t n = a[0].size();
    // v in A∩B  <=>  v = x·A = y·B; solve [A^t | -B^t] (x,y)^t = 0.
    QMatrix m(n, a.size() + b.size());
    for (std::size_t j = 0; j < a.size(); ++j)
        for (std::size_t i = 0; i < n; ++i) m(i, j) = a[j][i];
    for (std::size_t j = 0; j < b.size(); ++j)
        for (std::size_t i = 0; i < n; ++i) m(i, a.size() + j) = -b[j][i];
    std::vector<QVec> out;
    for (const auto& k : m.kernel_basis()) {
        QVec v(n, Rat(0));
        for (std::size_t j = 0; j < a.size(); ++j)
            for (std::size_t i = 0; i < n; ++i) v[i] += k[j] * a[j][i];
        out.push_back(std::move(v));
    }
    return span_basis(out);
}

// Extends the given independent rows to a basis of Q^n with unit vectors.
inline QMatrix complete_to_basis(const std::vector<QVec>& rows, std::size_t n) {
    std::vector<QVec> basis = rows;
    for (std::size_t i = 0; i < n && basis.size() < n; ++i) {
        QVec e(n, Rat(0));
        e[i] = 1;
        auto trial = basis;
        trial.push_back(e);
        if (QMatrix(trial).rank() == basis.size() + 1) basis.push_back(std::move(e));
    }
    if (basis.size() != n) throw std::logic_error("complete_to_basis: dependent input rows");
    return QMatrix(basis);
}

// --- spans of polynomials ---

// Coefficient matrix of the given polynomials: one row per polynomial,
// one column per monomial occurring in any of them (grevlex order).
inline QMatrix coefficient_matrix(const std::vector<Polynomial>& polys) {
    VarSetPtr vars;
    for (const auto& p : polys) {
        if (!vars) {
            vars = p.vars();
        } else {
            require_same_varset(vars, p.vars());
        }
    }
    std::map<Monomial, std::size_t, GrevlexLess> columns;
    for (const auto& p : polys)
        for (const auto& [m, c] : p.terms()) columns.try_emplace(m, 0);
    std::size_t idx = 0;
    for (auto& [m, col] : columns) col = idx++;
    QMatrix mat(polys.size(), columns.size());
    for (std::size_t i = 0; i < polys.size(); ++i)
        for (const auto& [m, c] : polys[i].terms()) mat(i, columns.at(m)) = c;
    return mat;
}

// Dimension of the linear span of the given polynomials.
inline std::size_t span_dimension(const std::vector<Polynomial>& polys) {
    if (polys.empty()) return 0;
    return coefficient_matrix(polys).rank();
}

// Expresses `target` as a rational combination of `basis`, if possible.
inline std::optional<QVec> express_in_span(const std::vector<Polynomial>& basis,
                                           const Polynomial& target) {
    std::vector<Polynomial> all = basis;
    all.push_back(target);
    QMatrix mat = coefficient_matrix(all).transpose();
    // columns 0..n-1 = basis, last column = target
    QMatrix a(mat.rows(), basis.size());
    QVec b(mat.rows());
    for (std::size_t i = 0; i < mat.rows(); ++i) {
        for (std::size_t j = 0; j < basis.size(); ++j) a(i, j) = mat(i, j);
        b[i] = mat(i, basis.size());
    }
    auto sol = solve_linear(a, b);
    return sol.particular;
}

}  // namespace skewpf

#endif
