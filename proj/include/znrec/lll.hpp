#pragma once

#include "znrec/exact_gso.hpp"
#include "znrec/gram.hpp"
#include "znrec/gso.hpp"
#include "znrec/int_types.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <chrono>
#include <cmath>
#include <utility>

namespace znrec {

using BigFloat = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<62>>;

namespace detail {

// delta as an exact fraction, quantized to 1e-6.
inline std::pair<Integer, Integer> delta_fraction(double delta) {
    if (!(delta > 0.25 && delta < 1.0))
        throw std::invalid_argument("delta must lie in (1/4, 1)");
    Integer num(static_cast<long>(std::llround(delta * 1e6)));
    Integer den(1000000);
    return {num, den};
}

constexpr std::size_t kLongDoubleBitCap = 44;

}  // namespace detail

struct ReductionOptions {
    double delta = 0.99;
    Deadline deadline;
    int enum_cap = 30;    // BKZ block enumeration limit
    int max_rounds = 64;  // BKZ tour limit
    int deep_depth = 8;   // deep-insertion window; 0 = plain adjacent swaps
};

namespace detail {

template <typename FT>
LoopStatus run_float_lll(IntegerMatrix& g, IntegerMatrix& u, double delta,
                         const Deadline& deadline, long* swaps, int deep_depth) {
    GramGso<FT> gso(std::move(g), std::move(u));
    gso.full_refresh();
    LoopStatus st = lll_loop(gso, delta, gso.n(), deadline, deep_depth);
    *swaps += gso.swaps();
    g = std::move(gso.gram_mutable());
    u = std::move(gso.transform_mutable());
    return st;
}

// Floating stage at a precision chosen from the entry size, then the exact
// integral pass that lands the certificate. Throws NotPositiveDefiniteError
// for bad input; on timeout returns with timed_out set and (g, u) consistent.
inline ExactLllResult lll_with_exact_finish(IntegerMatrix& g, IntegerMatrix& u,
                                            double delta, const Deadline& deadline,
                                            long* float_swaps, int deep_depth) {
    LoopStatus st;
    if (g.max_entry_bits() <= kLongDoubleBitCap)
        st = run_float_lll<long double>(g, u, delta, deadline, float_swaps, deep_depth);
    else
        st = run_float_lll<BigFloat>(g, u, delta, deadline, float_swaps, deep_depth);
    if (st == LoopStatus::NumericTrouble &&
        g.max_entry_bits() <= kLongDoubleBitCap) {
        st = run_float_lll<BigFloat>(g, u, delta, deadline, float_swaps, deep_depth);
    }
    ExactLllResult fin;
    if (st == LoopStatus::TimedOut) {
        fin.timed_out = true;
        return fin;
    }
    // NumericTrouble falls through: the exact pass either proves the input
    // non-positive-definite or finishes the reduction outright.
    auto [num, den] = delta_fraction(delta);
    fin = exact_lll(g, u, num, den, deadline);
    if (!fin.timed_out && !verify_lll_reduced(g, num, den))
        throw std::logic_error("reduction certificate failed after the exact pass");
    return fin;
}

inline StageTrace make_stage_trace(const std::string& name, int block,
                                   const IntegerMatrix& g, double seconds, long swaps,
                                   int rounds, bool converged) {
    StageTrace t;
    t.stage = name;
    t.block_size = block;
    t.seconds = seconds;
    t.min_diag = g(0, 0);
    t.max_diag = g(0, 0);
    for (int i = 1; i < g.rows(); ++i) {
        if (g(i, i) < t.min_diag) t.min_diag = g(i, i);
        if (g(i, i) > t.max_diag) t.max_diag = g(i, i);
    }
    t.swaps = swaps;
    t.rounds = rounds;
    t.converged = converged;
    return t;
}

}  // namespace detail

// Gram-based LLL. The result satisfies |mu_ij| <= 1/2 and the Lovasz
// condition with the given delta, certified in exact integer arithmetic, and
// transform * G_input * transform^t = reduced exactly.
inline ReductionResult lll_reduce_gram(const GramMatrix& gram,
                                       const ReductionOptions& opts = {}) {
    auto start = std::chrono::steady_clock::now();
    IntegerMatrix g = gram.matrix();
    IntegerMatrix u = IntegerMatrix::identity(gram.n());
    long swaps = 0;
    auto fin = detail::lll_with_exact_finish(g, u, opts.delta, opts.deadline, &swaps,
                                             opts.deep_depth);
    swaps += fin.swaps;

    ReductionResult res;
    res.timed_out = fin.timed_out;
    res.converged = !fin.timed_out;
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    res.trace.push_back(detail::make_stage_trace("lll", 0, g, secs, swaps, 1, res.converged));
    res.reduced = GramMatrix(std::move(g));
    res.transform = std::move(u);
    return res;
}

inline ReductionResult lll_reduce_gram(const GramMatrix& gram, double delta) {
    ReductionOptions opts;
    opts.delta = delta;
    return lll_reduce_gram(gram, opts);
}

}  // namespace znrec
