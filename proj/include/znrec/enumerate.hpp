#pragma once

#include "znrec/gram.hpp"
#include "znrec/gso.hpp"
#include "znrec/int_types.hpp"

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <vector>

namespace znrec {

namespace detail {

// Sign-normalize so the first nonzero coefficient is positive.
inline void normalize_coeff_sign(std::vector<long long>& x) {
    for (long long v : x) {
        if (v == 0) continue;
        if (v < 0)
            for (auto& w : x) w = -w;
        return;
    }
}

inline bool lex_less(const std::vector<long long>& a, const std::vector<long long>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

template <typename FT>
struct EnumCandidate {
    std::vector<long long> x;
    FT norm;
};

// Depth-first shortest-vector search over the quadratic form given by
// Gram-Schmidt data (mu, r). Bound is inclusive; full enumeration for
// dim <= 8, linear pruning above. Collects every vector whose float norm is
// within (1 + 1e-9) of the running best so exact arithmetic can pick the
// final winner.
template <typename FT>
std::vector<EnumCandidate<FT>> enumerate_candidates(
    const std::vector<std::vector<FT>>& mu, const std::vector<FT>& r, FT bound) {
    const int k = static_cast<int>(r.size());
    const bool prune = k > 8;
    const FT slack = FT(1) + FT(1e-9);
    std::vector<EnumCandidate<FT>> cands;
    FT best = bound;

    auto level_bound = [&](int t) -> FT {
        FT b = best * slack;
        if (!prune) return b;
        return b * FT(k - t) / FT(k);
    };

    std::vector<long long> x(k, 0), base(k, 0);
    std::vector<int> tries(k, 0), dir(k, 1);
    std::vector<FT> center(k, FT(0)), partial(k + 1, FT(0));

    auto set_level = [&](int t) {
        FT c = FT(0);
        for (int i = t + 1; i < k; ++i) c -= mu[i][t] * FT(x[i]);
        center[t] = c;
        Integer rounded = round_to_integer<FT>(c);
        base[t] = static_cast<long long>(rounded.get_si());
        dir[t] = (c >= FT(base[t])) ? 1 : -1;
        tries[t] = 0;
        x[t] = base[t];
    };

    auto advance_level = [&](int t) {
        ++tries[t];
        int step = (tries[t] + 1) / 2;
        x[t] = (tries[t] % 2 == 1) ? base[t] + dir[t] * step : base[t] - dir[t] * step;
    };

    int t = k - 1;
    set_level(t);
    for (;;) {
        FT diff = FT(x[t]) - center[t];
        FT dist = partial[t + 1] + r[t] * diff * diff;
        if (dist <= level_bound(t)) {
            if (t == 0) {
                bool zero = true;
                for (long long v : x)
                    if (v != 0) zero = false;
                if (!zero) {
                    if (dist < best) best = dist;
                    if (dist <= best * slack) {
                        EnumCandidate<FT> c;
                        c.x = x;
                        normalize_coeff_sign(c.x);
                        c.norm = dist;
                        cands.push_back(std::move(c));
                        if (cands.size() > 512) {
                            FT keep = best * slack;
                            cands.erase(std::remove_if(cands.begin(), cands.end(),
                                                       [&](const EnumCandidate<FT>& e) {
                                                           return e.norm > keep;
                                                       }),
                                        cands.end());
                        }
                    }
                }
                advance_level(t);
            } else {
                partial[t] = dist;
                --t;
                set_level(t);
            }
        } else {
            // exhaust this level: siblings only grow the term once both
            // zigzag directions have crossed the bound
            ++t;
            if (t == k) break;
            advance_level(t);
        }
    }
    FT keep = best * slack;
    cands.erase(std::remove_if(cands.begin(), cands.end(),
                               [&](const EnumCandidate<FT>& e) { return e.norm > keep; }),
                cands.end());
    return cands;
}

}  // namespace detail

struct SvpSolution {
    std::vector<Integer> coeffs;
    Integer norm;
};

// Shortest nonzero coefficient vector of the integral quadratic form G:
// minimizes c^t G c. Float enumeration proposes candidates, exact integer
// arithmetic picks the minimum; ties resolve to the lexicographically
// smallest vector with positive leading coefficient.
inline SvpSolution svp_enumerate_block(const GramMatrix& g, int enum_cap = 30) {
    const int k = g.n();
    if (k < 1) throw DimensionError("svp_enumerate_block: empty Gram");
    if (k > enum_cap)
        throw DimensionError("svp_enumerate_block: dimension above enumeration cap " +
                             std::to_string(enum_cap));
    using FT = long double;
    // plain Cholesky-style GS from the Gram matrix
    std::vector<std::vector<FT>> mu(k);
    std::vector<FT> r(k);
    for (int i = 0; i < k; ++i) {
        mu[i].assign(i, FT(0));
        for (int j = 0; j < i; ++j) {
            FT s = to_float<FT>(g(i, j));
            for (int t = 0; t < j; ++t) s -= mu[j][t] * mu[i][t] * r[t];
            mu[i][j] = s / r[j];
        }
        FT ri = to_float<FT>(g(i, i));
        for (int t = 0; t < i; ++t) ri -= mu[i][t] * mu[i][t] * r[t];
        if (ri <= 0) throw NotPositiveDefiniteError("svp_enumerate_block: not positive definite");
        r[i] = ri;
    }
    Integer min_diag = g(0, 0);
    int min_index = 0;
    for (int i = 1; i < k; ++i)
        if (g(i, i) < min_diag) {
            min_diag = g(i, i);
            min_index = i;
        }
    FT bound = to_float<FT>(min_diag) * (FT(1) + FT(1e-9));

    auto cands = detail::enumerate_candidates<FT>(mu, r, bound);
    {
        // pruned searches may drop even the trivial unit vector; keep it
        detail::EnumCandidate<FT> unit;
        unit.x.assign(k, 0);
        unit.x[min_index] = 1;
        unit.norm = to_float<FT>(min_diag);
        cands.push_back(std::move(unit));
    }
    SvpSolution bestsol;
    bool have = false;
    std::vector<long long> best_x;
    for (const auto& c : cands) {
        Integer norm = 0;
        for (int i = 0; i < k; ++i) {
            if (c.x[i] == 0) continue;
            for (int j = 0; j < k; ++j) {
                if (c.x[j] == 0) continue;
                norm += int_of(c.x[i]) * int_of(c.x[j]) * g(i, j);
            }
        }
        if (!have || norm < bestsol.norm ||
            (norm == bestsol.norm && detail::lex_less(c.x, best_x))) {
            have = true;
            best_x = c.x;
            bestsol.norm = norm;
            bestsol.coeffs.assign(k, Integer(0));
            for (int i = 0; i < k; ++i) bestsol.coeffs[i] = int_of(c.x[i]);
        }
    }
    if (!have) throw std::logic_error("svp_enumerate_block: enumeration found nothing");
    return bestsol;
}

}  // namespace znrec
