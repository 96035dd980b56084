#pragma once

#include "znrec/gram.hpp"
#include "znrec/int_types.hpp"
#include "znrec/matrix.hpp"

#include <cmath>
#include <cstdlib>
#include <utility>
#include <vector>

namespace znrec {

// Floating Gram-Schmidt state over an exact integer Gram matrix, with the
// accumulated unimodular transform maintained exactly. mu and r evolve
// incrementally through row operations and adjacent swaps; rows can be
// recomputed from the exact Gram at any time, and the exact finishing pass in
// exact_gso.hpp is the correctness authority.
template <typename FT>
class GramGso {
public:
    GramGso(IntegerMatrix g, IntegerMatrix u) : g_(std::move(g)), u_(std::move(u)) {
        n_ = g_.rows();
        mu_.resize(n_);
        for (int i = 0; i < n_; ++i) mu_[i].assign(i, FT(0));
        r_.assign(n_, FT(0));
    }

    int n() const { return n_; }
    const IntegerMatrix& gram() const { return g_; }
    const IntegerMatrix& transform() const { return u_; }
    IntegerMatrix& gram_mutable() { return g_; }
    IntegerMatrix& transform_mutable() { return u_; }
    FT r(int i) const { return r_[i]; }
    FT mu(int i, int j) const { return mu_[i][j]; }
    long swaps() const { return swaps_; }

    // mu/r of row k from the exact Gram; rows < k must be current.
    void refresh_row(int k) {
        for (int j = 0; j < k; ++j) {
            FT s = to_float<FT>(g_(k, j));
            for (int t = 0; t < j; ++t) s -= mu_[j][t] * mu_[k][t] * r_[t];
            mu_[k][j] = s / r_[j];
        }
        FT rk = to_float<FT>(g_(k, k));
        for (int t = 0; t < k; ++t) rk -= mu_[k][t] * mu_[k][t] * r_[t];
        r_[k] = rk;
    }

    void refresh_rows(int lo, int hi) {
        for (int k = lo; k < hi; ++k) refresh_row(k);
    }

    void full_refresh() { refresh_rows(0, n_); }

    // b_k -= q * b_j (j < k), exact on G and U, first-order on mu row k.
    void row_op(int k, int j, const Integer& q) {
        if (sgn(q) == 0) return;
        u_.add_multiple_of_row(k, j, -q);
        Integer gkk_new = g_(k, k) + q * q * g_(j, j) - 2 * q * g_(k, j);
        for (int t = 0; t < n_; ++t) {
            if (t == k) continue;
            mpz_submul(g_(k, t).get_mpz_t(), q.get_mpz_t(), g_(j, t).get_mpz_t());
            g_(t, k) = g_(k, t);
        }
        g_(k, k) = gkk_new;
        FT qf = to_float<FT>(q);
        for (int t = 0; t < j; ++t) mu_[k][t] -= qf * mu_[j][t];
        mu_[k][j] -= qf;
    }

    // Swap rows k-1 and k, updating mu/r by the standard recurrences.
    void swap_adjacent(int k) {
        g_.swap_rows(k - 1, k);
        g_.swap_cols(k - 1, k);
        u_.swap_rows(k - 1, k);
        ++swaps_;
        const FT mu_old = mu_[k][k - 1];
        const FT r_top = r_[k] + mu_old * mu_old * r_[k - 1];
        const FT mu_new = mu_old * r_[k - 1] / r_top;
        r_[k] = r_[k - 1] * r_[k] / r_top;
        r_[k - 1] = r_top;
        mu_[k][k - 1] = mu_new;
        for (int j = 0; j < k - 1; ++j) std::swap(mu_[k - 1][j], mu_[k][j]);
        for (int i = k + 1; i < n_; ++i) {
            FT t = mu_[i][k];
            mu_[i][k] = mu_[i][k - 1] - mu_old * t;
            mu_[i][k - 1] = t + mu_new * mu_[i][k];
        }
    }

    // Size-reduce row k against rows below, iterating when rounding was lossy.
    void size_reduce_row(int k, double eta) {
        const FT eta_f = FT(eta);
        const FT big = FT(1048576);  // 2^20: rounding error becomes material
        for (int pass = 0; pass < 64; ++pass) {
            bool any = false, lossy = false;
            for (int j = k - 1; j >= 0; --j) {
                FT m = mu_[k][j];
                FT am = m < 0 ? -m : m;
                if (am <= eta_f) continue;
                Integer q = round_to_integer<FT>(m);
                if (am > big) lossy = true;
                row_op(k, j, q);
                any = true;
            }
            if (!any) return;
            if (!lossy) return;
            refresh_row(k);
        }
    }

    bool lovasz_holds(int k, double delta) const {
        // no swap in marginal cases; the exact pass settles them
        FT lhs = FT(delta) * r_[k - 1];
        FT rhs = r_[k] + mu_[k][k - 1] * mu_[k][k - 1] * r_[k - 1];
        return lhs <= rhs * (FT(1) + FT(1e-10));
    }

private:
    IntegerMatrix g_;
    IntegerMatrix u_;
    int n_ = 0;
    std::vector<std::vector<FT>> mu_;
    std::vector<FT> r_;
    long swaps_ = 0;
};

enum class LoopStatus { Done, TimedOut, NumericTrouble };

// LLL over rows [0, hi) of the state, with deep insertions by default: a row
// whose projection would beat delta * r_i at any earlier position i moves
// there (as a run of adjacent swaps, which keeps the incremental state
// consistent). deep = false gives the plain adjacent-swap schedule; both
// yield bases satisfying the same size-reduction and Lovasz certificates.
// Assumes mu/r rows [0, hi) are current on entry. Returns NumericTrouble when
// a nonpositive projected norm persists through a refresh.
// deep_depth = 0 gives the plain adjacent-swap schedule; otherwise insertions
// are considered in the leading window [0, deep_depth) and within deep_depth
// of the current index (the usual blocked deep-insertion windows).
template <typename FT>
LoopStatus lll_loop(GramGso<FT>& gso, double delta, int hi, const Deadline& deadline,
                    int deep_depth = 0) {
    int k = 1;
    long steps = 0;
    const long refresh_every = 1L << 16;
    const long max_steps =
        2048L * hi * hi * static_cast<long>(8 + gso.gram().max_entry_bits());
    const FT slack = FT(1) + FT(1e-10);
    const FT delta_f = FT(delta);
    bool refreshed_after_trouble = false;
    while (k < hi) {
        ++steps;
        if (steps % 1024 == 0 && deadline.expired()) return LoopStatus::TimedOut;
        if (steps % refresh_every == 0) gso.refresh_rows(0, hi);
        if (steps > max_steps) return LoopStatus::NumericTrouble;
        if (gso.r(k - 1) <= FT(0) || gso.r(k) <= FT(0)) {
            if (refreshed_after_trouble) return LoopStatus::NumericTrouble;
            gso.refresh_rows(0, hi);
            refreshed_after_trouble = true;
            if (gso.r(k - 1) <= FT(0) || gso.r(k) <= FT(0)) return LoopStatus::NumericTrouble;
        }
        gso.size_reduce_row(k, 0.51);
        int target = -1;
        if (deep_depth > 0) {
            FT c = to_float<FT>(gso.gram()(k, k));
            const FT floor_c = gso.r(k);  // projected norms never drop below r_k
            for (int i = 0; i < k; ++i) {
                if (i >= deep_depth && k - i > deep_depth) {
                    c -= gso.mu(k, i) * gso.mu(k, i) * gso.r(i);
                    continue;
                }
                FT ci = c > floor_c ? c : floor_c;
                if (delta_f * gso.r(i) > ci * slack) {
                    target = i;
                    break;
                }
                c -= gso.mu(k, i) * gso.mu(k, i) * gso.r(i);
            }
        } else if (!gso.lovasz_holds(k, delta)) {
            target = k - 1;
        }
        if (target < 0) {
            ++k;
            continue;
        }
        for (int j = k; j > target; --j) gso.swap_adjacent(j);
        k = target > 1 ? target : 1;
    }
    return LoopStatus::Done;
}

}  // namespace znrec
