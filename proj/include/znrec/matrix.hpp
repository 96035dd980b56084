#pragma once

#include "znrec/int_types.hpp"

#include <algorithm>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

namespace znrec {

// Dense row-major matrix of arbitrary-precision integers. All arithmetic is
// exact; magnitudes are unbounded.
class IntegerMatrix {
public:
    IntegerMatrix() = default;

    IntegerMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), e_(static_cast<std::size_t>(rows) * cols) {
        if (rows < 0 || cols < 0) throw DimensionError("negative matrix dimension");
    }

    IntegerMatrix(std::initializer_list<std::initializer_list<long>> rows) {
        rows_ = static_cast<int>(rows.size());
        cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
        e_.reserve(static_cast<std::size_t>(rows_) * cols_);
        for (const auto& r : rows) {
            if (static_cast<int>(r.size()) != cols_)
                throw DimensionError("ragged initializer");
            for (long v : r) e_.emplace_back(v);
        }
    }

    static IntegerMatrix identity(int n) {
        IntegerMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Integer& operator()(int i, int j) { return e_[static_cast<std::size_t>(i) * cols_ + j]; }
    const Integer& operator()(int i, int j) const {
        return e_[static_cast<std::size_t>(i) * cols_ + j];
    }

    bool operator==(const IntegerMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }
    bool operator!=(const IntegerMatrix& o) const { return !(*this == o); }

    IntegerMatrix transposed() const {
        IntegerMatrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    IntegerMatrix operator*(const IntegerMatrix& o) const {
        if (cols_ != o.rows_) throw DimensionError("matrix product shape mismatch");
        IntegerMatrix p(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i) {
            for (int k = 0; k < cols_; ++k) {
                const Integer& a = (*this)(i, k);
                if (sgn(a) == 0) continue;
                for (int j = 0; j < o.cols_; ++j) {
                    mpz_addmul(p(i, j).get_mpz_t(), a.get_mpz_t(), o(k, j).get_mpz_t());
                }
            }
        }
        return p;
    }

    IntegerMatrix operator-(const IntegerMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("shape mismatch");
        IntegerMatrix d(rows_, cols_);
        for (std::size_t t = 0; t < e_.size(); ++t) d.e_[t] = e_[t] - o.e_[t];
        return d;
    }

    void swap_rows(int a, int b) {
        if (a == b) return;
        for (int j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }
    void swap_cols(int a, int b) {
        if (a == b) return;
        for (int i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
    }
    void negate_row(int i) {
        for (int j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
    }
    void negate_col(int j) {
        for (int i = 0; i < rows_; ++i) (*this)(i, j) = -(*this)(i, j);
    }

    // row dst += coef * row src
    void add_multiple_of_row(int dst, int src, const Integer& coef) {
        if (sgn(coef) == 0) return;
        for (int j = 0; j < cols_; ++j)
            mpz_addmul((*this)(dst, j).get_mpz_t(), coef.get_mpz_t(),
                       (*this)(src, j).get_mpz_t());
    }
    // col dst += coef * col src
    void add_multiple_of_col(int dst, int src, const Integer& coef) {
        if (sgn(coef) == 0) return;
        for (int i = 0; i < rows_; ++i)
            mpz_addmul((*this)(i, dst).get_mpz_t(), coef.get_mpz_t(),
                       (*this)(i, src).get_mpz_t());
    }

    std::vector<Integer> row(int i) const {
        std::vector<Integer> r(cols_);
        for (int j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
        return r;
    }

    bool is_symmetric() const {
        if (!is_square()) return false;
        for (int i = 0; i < rows_; ++i)
            for (int j = i + 1; j < cols_; ++j)
                if ((*this)(i, j) != (*this)(j, i)) return false;
        return true;
    }

    bool is_identity() const {
        if (!is_square()) return false;
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
        return true;
    }

    Integer max_abs() const {
        Integer m = 0;
        for (const auto& v : e_)
            if (cmp(m, abs(v)) < 0) m = abs(v);
        return m;
    }

    std::size_t max_entry_bits() const { return bit_length(max_abs()); }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Integer> e_;
};

inline std::ostream& operator<<(std::ostream& os, const IntegerMatrix& m) {
    for (int i = 0; i < m.rows(); ++i) {
        os << (i == 0 ? "[" : " ");
        for (int j = 0; j < m.cols(); ++j) os << (j ? " " : "[") << m(i, j).get_str();
        os << "]" << (i + 1 == m.rows() ? "]" : "\n");
    }
    return os;
}

// Permutation with per-row signs: as a matrix, row i has its single nonzero
// entry sign[i] in column image[i].
struct SignedPermutation {
    std::vector<int> image;
    std::vector<int> sign;

    int size() const { return static_cast<int>(image.size()); }

    IntegerMatrix to_matrix() const {
        IntegerMatrix m(size(), size());
        for (int i = 0; i < size(); ++i) m(i, image[i]) = sign[i];
        return m;
    }
};

inline std::optional<SignedPermutation> as_signed_permutation(const IntegerMatrix& w) {
    if (!w.is_square()) return std::nullopt;
    const int n = w.rows();
    SignedPermutation sp;
    sp.image.assign(n, -1);
    sp.sign.assign(n, 0);
    std::vector<bool> col_used(n, false);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Integer& v = w(i, j);
            if (sgn(v) == 0) continue;
            if (sp.image[i] != -1 || col_used[j]) return std::nullopt;
            if (v != 1 && v != -1) return std::nullopt;
            sp.image[i] = j;
            sp.sign[i] = sgn(v);
            col_used[j] = true;
        }
        if (sp.image[i] == -1) return std::nullopt;
    }
    return sp;
}

inline bool is_signed_permutation(const IntegerMatrix& w) {
    return as_signed_permutation(w).has_value();
}

}  // namespace znrec
