#pragma once

#include "znrec/int_types.hpp"
#include "znrec/matrix.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace znrec {

inline IntegerMatrix gram_of(const IntegerMatrix& m) {
    if (!m.is_square()) throw DimensionError("gram_of: square matrix required");
    const int n = m.rows();
    IntegerMatrix g(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            Integer s = 0;
            for (int k = 0; k < n; ++k)
                mpz_addmul(s.get_mpz_t(), m(i, k).get_mpz_t(), m(j, k).get_mpz_t());
            g(i, j) = s;
            if (i != j) g(j, i) = s;
        }
    }
    return g;
}

// Exact determinant by fraction-free (Bareiss) elimination.
inline Integer det_exact(IntegerMatrix m) {
    if (!m.is_square()) throw DimensionError("det_exact: square matrix required");
    const int n = m.rows();
    if (n == 0) return 1;
    Integer prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (sgn(m(k, k)) == 0) {
            int p = k + 1;
            while (p < n && sgn(m(p, k)) == 0) ++p;
            if (p == n) return 0;
            m.swap_rows(k, p);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                Integer t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                mpz_divexact(m(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            m(i, k) = 0;
        }
        prev = m(k, k);
    }
    return sign > 0 ? m(n - 1, n - 1) : Integer(-m(n - 1, n - 1));
}

namespace detail {

// Gauss-Jordan over the rationals on [A | B]. Returns A^{-1}B and det(A), or
// nullopt when A is singular.
struct RationalSolve {
    std::vector<std::vector<Rational>> solution;
    Rational det;
};

inline std::optional<RationalSolve> solve_rational(const IntegerMatrix& a,
                                                   const std::vector<std::vector<Integer>>& rhs) {
    const int n = a.rows();
    if (a.cols() != n) throw DimensionError("solve_rational: square matrix required");
    const int w = rhs.empty() ? 0 : static_cast<int>(rhs[0].size());
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n + w));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m[i][j] = Rational(a(i, j));
        for (int j = 0; j < w; ++j) m[i][n + j] = Rational(rhs[i][j]);
    }
    Rational det = 1;
    for (int k = 0; k < n; ++k) {
        int p = k;
        while (p < n && sgn(m[p][k]) == 0) ++p;
        if (p == n) return std::nullopt;
        if (p != k) {
            std::swap(m[p], m[k]);
            det = -det;
        }
        Rational piv = m[k][k];
        det *= piv;
        for (int j = k; j < n + w; ++j) m[k][j] /= piv;
        for (int i = 0; i < n; ++i) {
            if (i == k || sgn(m[i][k]) == 0) continue;
            Rational f = m[i][k];
            for (int j = k; j < n + w; ++j) m[i][j] -= f * m[k][j];
        }
    }
    RationalSolve out;
    out.det = det;
    out.solution.assign(n, std::vector<Rational>(w));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < w; ++j) out.solution[i][j] = m[i][n + j];
    return out;
}

}  // namespace detail

// Exact integer inverse of a matrix with determinant +-1.
inline IntegerMatrix unimodular_inverse(const IntegerMatrix& m) {
    if (!m.is_square()) throw DimensionError("unimodular_inverse: square matrix required");
    const int n = m.rows();
    std::vector<std::vector<Integer>> rhs(n, std::vector<Integer>(n));
    for (int i = 0; i < n; ++i) rhs[i][i] = 1;
    auto sol = detail::solve_rational(m, rhs);
    if (!sol || abs(sol->det) != 1)
        throw NotUnimodularError("unimodular_inverse: determinant is not +-1");
    IntegerMatrix inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (sol->solution[i][j].get_den() != 1)
                throw NotUnimodularError("unimodular_inverse: non-integral inverse");
            inv(i, j) = sol->solution[i][j].get_num();
        }
    return inv;
}

struct HnfDecomposition {
    IntegerMatrix triangular;  // U, no nonzero entries above the diagonal
    IntegerMatrix unimodular;  // M, det +-1, with input = U * M
};

namespace detail {

// Column mix on (B, M): columns (i, c) of B get the 2x2 transform
// [alpha gamma; beta delta] (col_i' = alpha*col_i + beta*col_c, col_c' =
// gamma*col_i + delta*col_c), and rows (i, c) of M get its inverse so that
// B*M stays fixed. Requires |alpha*delta - beta*gamma| = 1.
inline void column_pair_op(IntegerMatrix& b, IntegerMatrix& m, int i, int c,
                           const Integer& alpha, const Integer& beta,
                           const Integer& gamma, const Integer& delta) {
    Integer det = alpha * delta - beta * gamma;
    for (int r = 0; r < b.rows(); ++r) {
        Integer vi = b(r, i), vc = b(r, c);
        b(r, i) = alpha * vi + beta * vc;
        b(r, c) = gamma * vi + delta * vc;
    }
    // inverse of [[alpha, gamma], [beta, delta]] applied to rows (i, c)
    for (int j = 0; j < m.cols(); ++j) {
        Integer ri = m(i, j), rc = m(c, j);
        m(i, j) = (delta * ri - gamma * rc) / det;
        m(c, j) = (alpha * rc - beta * ri) / det;
    }
}

}  // namespace detail

// Decomposes B (m x n, m >= n, full column rank) as B = U * M with M in
// GL(n, Z) and U lower-triangular (no nonzero entries with row index < column
// index). Canonical form: positive pivots, entries left of each pivot in its
// row reduced to least nonnegative residues.
inline HnfDecomposition hnf_column_decompose(const IntegerMatrix& b_in) {
    const int mrows = b_in.rows();
    const int n = b_in.cols();
    if (mrows < n) throw DimensionError("hnf_column_decompose: need rows >= cols");
    IntegerMatrix u = b_in;
    IntegerMatrix m = IntegerMatrix::identity(n);

    std::vector<int> pivot_row(n, -1);
    int p = 0;  // next pivot column
    for (int i = 0; i < mrows && p < n; ++i) {
        // gather the gcd of row i across columns p..n-1 into column p
        for (int c = p + 1; c < n; ++c) {
            if (sgn(u(i, c)) == 0) continue;
            if (sgn(u(i, p)) == 0) {
                u.swap_cols(p, c);
                m.swap_rows(p, c);
                continue;
            }
            Integer g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(),
                       u(i, p).get_mpz_t(), u(i, c).get_mpz_t());
            Integer a_div = u(i, p) / g, b_div = u(i, c) / g;
            detail::column_pair_op(u, m, p, c, s, t, -b_div, a_div);
        }
        if (sgn(u(i, p)) == 0) continue;  // row in the span of earlier pivots
        if (sgn(u(i, p)) < 0) {
            u.negate_col(p);
            m.negate_row(p);
        }
        pivot_row[p] = i;
        ++p;
    }
    if (p < n) throw RankDeficientError("hnf_column_decompose: rank-deficient input");

    // canonical residues: 0 <= u(pivot_row[j], c) < pivot for c < j
    for (int j = 1; j < n; ++j) {
        const int r = pivot_row[j];
        for (int c = 0; c < j; ++c) {
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), u(r, c).get_mpz_t(), u(r, j).get_mpz_t());
            if (sgn(q) == 0) continue;
            u.add_multiple_of_col(c, j, -q);
            m.add_multiple_of_row(j, c, q);
        }
    }
    return {std::move(u), std::move(m)};
}

// Signed maximal minors of an (n-1) x n matrix, in column-deletion order with
// alternating cofactor signs (-1)^(1+j), so the result is orthogonal to every
// input row. Computed via one rational solve: for C = [e_k; bottom] with
// det(C) != 0, det(C) * C^{-1} e_1 is exactly the cofactor vector.
inline std::vector<Integer> cofactor_minor_vector(const IntegerMatrix& bottom) {
    const int n = bottom.cols();
    if (bottom.rows() != n - 1)
        throw DimensionError("cofactor_minor_vector: need (n-1) x n input");
    if (n == 1) return {Integer(1)};  // empty minor has determinant 1
    std::vector<std::vector<Integer>> rhs(n, std::vector<Integer>(1));
    rhs[0][0] = 1;
    for (int k = 0; k < n; ++k) {
        IntegerMatrix c(n, n);
        c(0, k) = 1;
        for (int i = 0; i < n - 1; ++i)
            for (int j = 0; j < n; ++j) c(i + 1, j) = bottom(i, j);
        auto sol = detail::solve_rational(c, rhs);
        if (!sol) continue;
        std::vector<Integer> v(n);
        for (int j = 0; j < n; ++j) {
            Rational x = sol->det * sol->solution[j][0];
            if (x.get_den() != 1)
                throw std::logic_error("cofactor_minor_vector: non-integral cofactor");
            v[j] = x.get_num();
        }
        return v;
    }
    return std::vector<Integer>(n, Integer(0));  // all maximal minors vanish
}

// Chained two-term extended gcd, left to right. Returns g = gcd(c) >= 0 and
// coefficients with sum(coeffs[i] * c[i]) = g. Once a prefix reaches gcd 1
// the remaining coefficients are zero.
inline std::pair<Integer, std::vector<Integer>> extended_gcd_chain(
    const std::vector<Integer>& c) {
    const int n = static_cast<int>(c.size());
    bool all_zero = true;
    for (const auto& v : c)
        if (sgn(v) != 0) all_zero = false;
    if (n == 0 || all_zero) throw std::invalid_argument("extended_gcd_chain: all-zero input");

    std::vector<Integer> coeffs(n, Integer(0));
    Integer g = abs(c[0]);
    coeffs[0] = sgn(c[0]) < 0 ? -1 : 1;
    for (int k = 1; k < n; ++k) {
        if (g == 1) break;
        Integer g2, s, t;
        mpz_gcdext(g2.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(),
                   g.get_mpz_t(), c[k].get_mpz_t());
        for (int j = 0; j < k; ++j) coeffs[j] *= s;
        coeffs[k] = t;
        g = g2;
    }
    return {g, coeffs};
}

// top - sum round(c_i) * rows_i where c solves the real least-squares problem
// min ||top - sum c_i rows_i||_2. The normal equations are solved exactly over
// the rationals and rounding is half-away-from-zero, so the result is
// deterministic at any entry size.
inline std::vector<Integer> least_squares_round_reduce(const std::vector<Integer>& top,
                                                       const IntegerMatrix& rows) {
    const int k = rows.rows();
    const int n = rows.cols();
    if (static_cast<int>(top.size()) != n)
        throw DimensionError("least_squares_round_reduce: row length mismatch");
    IntegerMatrix a(k, k);
    std::vector<std::vector<Integer>> rhs(k, std::vector<Integer>(1));
    for (int i = 0; i < k; ++i) {
        for (int j = i; j < k; ++j) {
            Integer s = 0;
            for (int t = 0; t < n; ++t)
                mpz_addmul(s.get_mpz_t(), rows(i, t).get_mpz_t(), rows(j, t).get_mpz_t());
            a(i, j) = s;
            if (i != j) a(j, i) = s;
        }
        Integer s = 0;
        for (int t = 0; t < n; ++t)
            mpz_addmul(s.get_mpz_t(), rows(i, t).get_mpz_t(), top[t].get_mpz_t());
        rhs[i][0] = s;
    }
    auto sol = detail::solve_rational(a, rhs);
    if (!sol) throw RankDeficientError("least_squares_round_reduce: rank-deficient rows");
    std::vector<Integer> out = top;
    for (int i = 0; i < k; ++i) {
        Integer q = round_half_away_from_zero(sol->solution[i][0]);
        if (sgn(q) == 0) continue;
        for (int t = 0; t < n; ++t)
            mpz_submul(out[t].get_mpz_t(), q.get_mpz_t(), rows(i, t).get_mpz_t());
    }
    return out;
}

// Unimodular k x k matrix whose first row is c; requires gcd(c) = 1.
inline IntegerMatrix unimodular_row_completion(const std::vector<Integer>& c) {
    const int k = static_cast<int>(c.size());
    IntegerMatrix row(1, k);
    for (int j = 0; j < k; ++j) row(0, j) = c[j];
    IntegerMatrix w = IntegerMatrix::identity(k);
    // column ops reducing `row` to (g, 0, ..., 0); their inverses accumulate
    // into w, whose first row then equals c
    for (int cidx = 1; cidx < k; ++cidx) {
        if (sgn(row(0, cidx)) == 0) continue;
        if (sgn(row(0, 0)) == 0) {
            row.swap_cols(0, cidx);
            w.swap_rows(0, cidx);
            continue;
        }
        Integer g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(),
                   row(0, 0).get_mpz_t(), row(0, cidx).get_mpz_t());
        Integer a_div = row(0, 0) / g, b_div = row(0, cidx) / g;
        detail::column_pair_op(row, w, 0, cidx, s, t, -b_div, a_div);
    }
    if (abs(row(0, 0)) != 1)
        throw std::invalid_argument("unimodular_row_completion: gcd(c) != 1");
    if (row(0, 0) == -1) w.negate_row(0);
    return w;
}

}  // namespace znrec
