#pragma once

#include "znrec/gram.hpp"
#include "znrec/int_types.hpp"
#include "znrec/matrix.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace znrec {

// All-integer Gram-Schmidt data for an exact Gram matrix: d[0..n] with
// d[0] = 1 and d[i] the determinant of the leading i x i Gram block, and
// lam[i][j] = mu_ij * d[j+1]. Every update below is integer-exact, so LLL
// conditions checked through this state are certificates, not estimates.
class IntegralGso {
public:
    // nullopt when the Gram matrix is not positive definite.
    static std::optional<IntegralGso> from_gram(const IntegerMatrix& g) {
        const int n = g.rows();
        IntegralGso s;
        s.n_ = n;
        s.d_.assign(n + 1, Integer(1));
        s.lam_.resize(n);
        for (int i = 0; i < n; ++i) s.lam_[i].assign(i, Integer(0));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j <= i; ++j) {
                Integer u = g(i, j);
                for (int t = 0; t < j; ++t) {
                    Integer v = s.d_[t + 1] * u - s.lam_[i][t] * s.lam_[j][t];
                    mpz_divexact(u.get_mpz_t(), v.get_mpz_t(), s.d_[t].get_mpz_t());
                }
                if (j < i)
                    s.lam_[i][j] = u;
                else {
                    if (sgn(u) <= 0) return std::nullopt;
                    s.d_[i + 1] = u;
                }
            }
        }
        return s;
    }

    int n() const { return n_; }
    const Integer& d(int i) const { return d_[i]; }
    const Integer& lam(int i, int j) const { return lam_[i][j]; }

    // |mu_ij| <= 1/2 for all i > j.
    bool size_reduced() const {
        for (int i = 1; i < n_; ++i)
            for (int j = 0; j < i; ++j)
                if (2 * abs(lam_[i][j]) > d_[j + 1]) return false;
        return true;
    }

    // delta * r_{k-1} <= r_k + mu^2 * r_{k-1} with delta = num/den.
    bool lovasz_holds(int k, const Integer& num, const Integer& den) const {
        Integer lhs = num * d_[k] * d_[k];
        Integer rhs = den * (d_[k + 1] * d_[k - 1] + lam_[k][k - 1] * lam_[k][k - 1]);
        return lhs <= rhs;
    }

    bool fully_reduced(const Integer& num, const Integer& den) const {
        if (!size_reduced()) return false;
        for (int k = 1; k < n_; ++k)
            if (!lovasz_holds(k, num, den)) return false;
        return true;
    }

    // b_k -= q * b_j, mirrored into the lambda state.
    void apply_row_op(int k, int j, const Integer& q) {
        for (int t = 0; t < j; ++t) lam_[k][t] -= q * lam_[j][t];
        lam_[k][j] -= q * d_[j + 1];
    }

    // swap b_{k-1} and b_k
    void apply_swap(int k) {
        for (int j = 0; j < k - 1; ++j) std::swap(lam_[k - 1][j], lam_[k][j]);
        const Integer lambda = lam_[k][k - 1];
        Integer b_new;
        {
            Integer t = d_[k - 1] * d_[k + 1] + lambda * lambda;
            mpz_divexact(b_new.get_mpz_t(), t.get_mpz_t(), d_[k].get_mpz_t());
        }
        for (int i = k + 1; i < n_; ++i) {
            Integer t = lam_[i][k];
            Integer v = d_[k + 1] * lam_[i][k - 1] - lambda * t;
            mpz_divexact(lam_[i][k].get_mpz_t(), v.get_mpz_t(), d_[k].get_mpz_t());
            v = b_new * t + lambda * lam_[i][k];
            mpz_divexact(lam_[i][k - 1].get_mpz_t(), v.get_mpz_t(), d_[k + 1].get_mpz_t());
        }
        d_[k] = b_new;
    }

private:
    int n_ = 0;
    std::vector<Integer> d_;
    std::vector<std::vector<Integer>> lam_;
};

namespace detail {

// Exact row op on the (G, U) pair: b_k -= q * b_j.
inline void exact_row_op(IntegerMatrix& g, IntegerMatrix& u, int k, int j,
                         const Integer& q) {
    u.add_multiple_of_row(k, j, -q);
    const int n = g.rows();
    Integer gkk_new = g(k, k) + q * q * g(j, j) - 2 * q * g(k, j);
    for (int t = 0; t < n; ++t) {
        if (t == k) continue;
        mpz_submul(g(k, t).get_mpz_t(), q.get_mpz_t(), g(j, t).get_mpz_t());
        g(t, k) = g(k, t);
    }
    g(k, k) = gkk_new;
}

}  // namespace detail

struct ExactLllResult {
    long swaps = 0;
    bool timed_out = false;
};

// Exact LLL on (G, U) via the integral state. Guarantees |mu| <= 1/2 and the
// Lovasz condition with delta = delta_num/delta_den exactly at termination.
// Fast when the input is already nearly reduced, which is how it is used: the
// floating loop does the bulk of the work, this pass lands the certificate.
inline ExactLllResult exact_lll(IntegerMatrix& g, IntegerMatrix& u,
                                const Integer& delta_num, const Integer& delta_den,
                                const Deadline& deadline = {}) {
    auto state_opt = IntegralGso::from_gram(g);
    if (!state_opt) throw NotPositiveDefiniteError("exact_lll: Gram not positive definite");
    IntegralGso s = std::move(*state_opt);
    const int n = s.n();
    ExactLllResult out;

    auto reduce_entry = [&](int k, int j) {
        if (2 * abs(s.lam(k, j)) <= s.d(j + 1)) return;
        Integer q = round_half_away_from_zero(Rational(s.lam(k, j), s.d(j + 1)));
        detail::exact_row_op(g, u, k, j, q);
        s.apply_row_op(k, j, q);
    };

    int k = 1;
    long steps = 0;
    while (k < n) {
        if (++steps % 256 == 0 && deadline.expired()) {
            out.timed_out = true;
            return out;
        }
        reduce_entry(k, k - 1);
        if (!s.lovasz_holds(k, delta_num, delta_den)) {
            g.swap_rows(k - 1, k);
            g.swap_cols(k - 1, k);
            u.swap_rows(k - 1, k);
            s.apply_swap(k);
            ++out.swaps;
            if (k > 1) --k;
        } else {
            for (int j = k - 2; j >= 0; --j) reduce_entry(k, j);
            ++k;
        }
    }
    return out;
}

// Independent certificate check on a finished Gram matrix.
inline bool verify_lll_reduced(const IntegerMatrix& g, const Integer& delta_num,
                               const Integer& delta_den) {
    auto s = IntegralGso::from_gram(g);
    return s && s->fully_reduced(delta_num, delta_den);
}

inline bool is_positive_definite(const IntegerMatrix& g) {
    return IntegralGso::from_gram(g).has_value();
}

}  // namespace znrec
