#ifndef SKEWPF_MATRIX_HPP
#define SKEWPF_MATRIX_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "skewpf/linalg.hpp"
#include "skewpf/polynomial.hpp"

namespace skewpf {

// Rectangular matrix of polynomials over one common variable set.
class PolyMatrix {
public:
    PolyMatrix() = default;
    PolyMatrix(VarSetPtr vars, std::size_t rows, std::size_t cols)
        : vars_(std::move(vars)),
          rows_(rows),
          cols_(cols),
          data_(rows * cols, Polynomial::zero(vars_)) {}

    const VarSetPtr& vars() const { return vars_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Polynomial& at(std::size_t i, std::size_t j) {
        check(i, j);
        return data_[i * cols_ + j];
    }
    const Polynomial& at(std::size_t i, std::size_t j) const {
        check(i, j);
        return data_[i * cols_ + j];
    }

    bool operator==(const PolyMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    PolyMatrix operator+(const PolyMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape");
        PolyMatrix r = *this;
        for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] += o.data_[k];
        return r;
    }
    PolyMatrix operator-(const PolyMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape");
        PolyMatrix r = *this;
        for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] -= o.data_[k];
        return r;
    }
    PolyMatrix operator-() const {
        PolyMatrix r = *this;
        for (auto& p : r.data_) p = -p;
        return r;
    }

    PolyMatrix transpose() const {
        PolyMatrix t(vars_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    bool is_zero() const {
        for (const auto& p : data_)
            if (!p.is_zero()) return false;
        return true;
    }

    bool is_skew_symmetric() const {
        if (rows_ != cols_) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j <= i; ++j)
                if (at(i, j) != -at(j, i)) return false;
        return true;
    }

    bool entries_are_linear_forms() const {
        for (const auto& p : data_)
            if (!p.is_linear_form()) return false;
        return true;
    }

    // S * M, with S a constant matrix.
    PolyMatrix left_mul(const QMatrix& s) const {
        if (s.cols() != rows_) throw std::invalid_argument("left_mul shape");
        PolyMatrix r(vars_, s.rows(), cols_);
        for (std::size_t i = 0; i < s.rows(); ++i)
            for (std::size_t k = 0; k < rows_; ++k) {
                if (s(i, k) == 0) continue;
                for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) += at(k, j) * s(i, k);
            }
        return r;
    }

    // M * T, with T a constant matrix.
    PolyMatrix right_mul(const QMatrix& t) const {
        if (t.rows() != cols_) throw std::invalid_argument("right_mul shape");
        PolyMatrix r(vars_, rows_, t.cols());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                if (at(i, k).is_zero()) continue;
                for (std::size_t j = 0; j < t.cols(); ++j) r.at(i, j) += at(i, k) * t(k, j);
            }
        return r;
    }

    QMatrix evaluate(const std::vector<Rat>& point) const {
        QMatrix m(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(i, j) = at(i, j).evaluate(point);
        return m;
    }

    // Entrywise substitution (coordinate change on the variables).
    PolyMatrix substitute(const std::vector<Polynomial>& images) const {
        VarSetPtr target = images.empty() ? vars_ : images.front().vars();
        PolyMatrix r(target, rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j).substitute(images);
        return r;
    }

    // Keeps the listed rows/columns, in the given order.
    PolyMatrix submatrix(const std::vector<std::size_t>& keep_rows,
                         const std::vector<std::size_t>& keep_cols) const {
        PolyMatrix r(vars_, keep_rows.size(), keep_cols.size());
        for (std::size_t i = 0; i < keep_rows.size(); ++i)
            for (std::size_t j = 0; j < keep_cols.size(); ++j)
                r.at(i, j) = at(keep_rows[i], keep_cols[j]);
        return r;
    }

    Polynomial determinant() const {
        if (rows_ != cols_) throw std::invalid_argument("determinant of non-square matrix");
        if (rows_ == 0) return Polynomial::constant(vars_, 1);
        if (rows_ == 1) return at(0, 0);
        // cofactor expansion along the first row
        Polynomial d = Polynomial::zero(vars_);
        std::vector<std::size_t> rest_rows;
        for (std::size_t i = 1; i < rows_; ++i) rest_rows.push_back(i);
        for (std::size_t j = 0; j < cols_; ++j) {
            if (at(0, j).is_zero()) continue;
            std::vector<std::size_t> cols;
            for (std::size_t c = 0; c < cols_; ++c)
                if (c != j) cols.push_back(c);
            Polynomial m = submatrix(rest_rows, cols).determinant();
            d += (j % 2 == 0 ? at(0, j) : -at(0, j)) * m;
        }
        return d;
    }

    // All k×k minors, rows and column index sets in lexicographic order.
    std::vector<Polynomial> minors(std::size_t k) const;

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < rows_; ++i) {
            s += "[ ";
            for (std::size_t j = 0; j < cols_; ++j) {
                s += at(i, j).to_string();
                if (j + 1 < cols_) s += ", ";
            }
            s += " ]\n";
        }
        return s;
    }

private:
    void check(std::size_t i, std::size_t j) const {
        if (i >= rows_ || j >= cols_) throw std::out_of_range("matrix index");
    }

    VarSetPtr vars_;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Polynomial> data_;
};

namespace detail {
inline void subsets(std::size_t n, std::size_t k, std::vector<std::size_t>& cur,
                    std::size_t start, std::vector<std::vector<std::size_t>>& out) {
    if (cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = start; i + (k - cur.size()) <= n; ++i) {
        cur.push_back(i);
        subsets(n, k, cur, i + 1, out);
        cur.pop_back();
    }
}

inline std::vector<std::vector<std::size_t>> all_subsets(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
    subsets(n, k, cur, 0, out);
    return out;
}
}  // namespace detail

inline std::vector<Polynomial> PolyMatrix::minors(std::size_t k) const {
    std::vector<Polynomial> out;
    for (const auto& rs : detail::all_subsets(rows_, k))
        for (const auto& cs : detail::all_subsets(cols_, k))
            out.push_back(submatrix(rs, cs).determinant());
    return out;
}

}  // namespace skewpf

#endif
