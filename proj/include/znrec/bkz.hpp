#pragma once

#include "znrec/enumerate.hpp"
#include "znrec/exact_gso.hpp"
#include "znrec/gram.hpp"
#include "znrec/gso.hpp"
#include "znrec/lll.hpp"

#include <chrono>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

namespace znrec {

namespace detail {

struct BkzRunStats {
    int rounds_used = 0;
    long insertions = 0;
    long swaps = 0;
    bool converged = false;
    bool timed_out = false;
};

// Unimodular block transform whose first row is x. When some |x_i| = 1 the
// remaining rows are unit vectors, otherwise a gcd completion is used.
inline IntegerMatrix insertion_transform(const std::vector<long long>& x) {
    const int k = static_cast<int>(x.size());
    int unit = -1;
    for (int i = k - 1; i >= 0; --i)
        if (x[i] == 1 || x[i] == -1) {
            unit = i;
            break;
        }
    if (unit >= 0) {
        IntegerMatrix t(k, k);
        for (int j = 0; j < k; ++j) t(0, j) = int_of(x[j]);
        int row = 1;
        for (int j = 0; j < k; ++j) {
            if (j == unit) continue;
            t(row, j) = 1;
            ++row;
        }
        return t;
    }
    std::vector<Integer> xi(k);
    for (int i = 0; i < k; ++i) xi[i] = int_of(x[i]);
    return unimodular_row_completion(xi);
}

// G <- T G T^t and U <- T U restricted to rows [kappa, kappa+k).
inline void apply_block_transform(IntegerMatrix& g, IntegerMatrix& u, int kappa,
                                  const IntegerMatrix& w) {
    const int k = w.rows();
    const int n = g.rows();
    std::vector<std::vector<Integer>> buf(k, std::vector<Integer>(n));
    for (int i = 0; i < k; ++i)
        for (int c = 0; c < u.cols(); ++c) {
            Integer s = 0;
            for (int j = 0; j < k; ++j)
                mpz_addmul(s.get_mpz_t(), w(i, j).get_mpz_t(), u(kappa + j, c).get_mpz_t());
            buf[i][c] = s;
        }
    for (int i = 0; i < k; ++i)
        for (int c = 0; c < u.cols(); ++c) u(kappa + i, c) = buf[i][c];

    for (int i = 0; i < k; ++i)
        for (int c = 0; c < n; ++c) {
            Integer s = 0;
            for (int j = 0; j < k; ++j)
                mpz_addmul(s.get_mpz_t(), w(i, j).get_mpz_t(), g(kappa + j, c).get_mpz_t());
            buf[i][c] = s;
        }
    for (int i = 0; i < k; ++i)
        for (int c = 0; c < n; ++c) g(kappa + i, c) = buf[i][c];
    for (int r = 0; r < n; ++r) {
        for (int i = 0; i < k; ++i) {
            Integer s = 0;
            for (int j = 0; j < k; ++j)
                mpz_addmul(s.get_mpz_t(), w(i, j).get_mpz_t(), g(r, kappa + j).get_mpz_t());
            buf[i][0] = s;
        }
        for (int i = 0; i < k; ++i) g(r, kappa + i) = buf[i][0];
    }
}

template <typename FT>
BkzRunStats run_bkz(IntegerMatrix& g, IntegerMatrix& u, int beta,
                    const ReductionOptions& opts) {
    const int n = g.rows();
    GramGso<FT> gso(std::move(g), std::move(u));
    gso.full_refresh();
    BkzRunStats stats;
    LoopStatus st = lll_loop(gso, opts.delta, n, opts.deadline, opts.deep_depth);
    if (st != LoopStatus::Done) {
        stats.timed_out = st == LoopStatus::TimedOut;
        g = std::move(gso.gram_mutable());
        u = std::move(gso.transform_mutable());
        stats.swaps = gso.swaps();
        return stats;
    }

    for (int round = 0; round < opts.max_rounds; ++round) {
        stats.rounds_used = round + 1;
        bool inserted = false;
        gso.full_refresh();
        for (int kappa = 0; kappa + 2 <= n; ++kappa) {
            if (opts.deadline.expired()) {
                stats.timed_out = true;
                break;
            }
            const int e = std::min(kappa + beta, n);
            const int kdim = e - kappa;
            if (kdim < 2) continue;
            gso.refresh_rows(kappa, e);
            std::vector<std::vector<FT>> mu_block(kdim);
            std::vector<FT> r_block(kdim);
            for (int i = 0; i < kdim; ++i) {
                mu_block[i].assign(i, FT(0));
                for (int j = 0; j < i; ++j) mu_block[i][j] = gso.mu(kappa + i, kappa + j);
                r_block[i] = gso.r(kappa + i);
            }
            FT bound = r_block[0] * (FT(1) - FT(1e-9));
            auto cands = enumerate_candidates<FT>(mu_block, r_block, bound);
            if (cands.empty()) continue;
            const EnumCandidate<FT>* best = &cands[0];
            for (const auto& c : cands)
                if (c.norm < best->norm ||
                    (c.norm == best->norm && lex_less(c.x, best->x)))
                    best = &c;
            IntegerMatrix w = insertion_transform(best->x);
            apply_block_transform(gso.gram_mutable(), gso.transform_mutable(), kappa, w);
            gso.refresh_rows(kappa, e);
            st = lll_loop(gso, opts.delta, e, opts.deadline, opts.deep_depth);
            if (st == LoopStatus::TimedOut) {
                stats.timed_out = true;
                break;
            }
            ++stats.insertions;
            inserted = true;
        }
        if (stats.timed_out) break;
        if (!inserted) {
            stats.converged = true;
            break;
        }
    }
    stats.swaps = gso.swaps();
    g = std::move(gso.gram_mutable());
    u = std::move(gso.transform_mutable());
    return stats;
}

}  // namespace detail

// BKZ with block size beta on a Gram matrix: after the final tour every
// projected block of size <= beta has its first vector at the block minimum
// found by enumeration (full below dimension 9, linearly pruned above).
// Terminates after max_rounds even without convergence and reports which.
inline ReductionResult bkz_reduce_gram(const GramMatrix& gram, int beta,
                                       const ReductionOptions& opts = {}) {
    if (beta < 2 || beta > opts.enum_cap)
        throw std::invalid_argument("bkz_reduce_gram: beta outside [2, enumeration cap]");
    auto start = std::chrono::steady_clock::now();
    IntegerMatrix g = gram.matrix();
    IntegerMatrix u = IntegerMatrix::identity(gram.n());

    detail::BkzRunStats stats;
    if (g.max_entry_bits() <= detail::kLongDoubleBitCap)
        stats = detail::run_bkz<long double>(g, u, beta, opts);
    else
        stats = detail::run_bkz<BigFloat>(g, u, beta, opts);

    long swaps = stats.swaps;
    if (!stats.timed_out) {
        auto [num, den] = detail::delta_fraction(opts.delta);
        auto fin = exact_lll(g, u, num, den, opts.deadline);
        swaps += fin.swaps;
        stats.timed_out = fin.timed_out;
        if (!fin.timed_out && !verify_lll_reduced(g, num, den))
            throw std::logic_error("reduction certificate failed after the exact pass");
    }

    ReductionResult res;
    res.timed_out = stats.timed_out;
    res.converged = stats.converged && !stats.timed_out;
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    res.trace.push_back(detail::make_stage_trace("bkz-" + std::to_string(beta), beta, g,
                                                 secs, swaps, stats.rounds_used,
                                                 res.converged));
    res.reduced = GramMatrix(std::move(g));
    res.transform = std::move(u);
    return res;
}

}  // namespace znrec
