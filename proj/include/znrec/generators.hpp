#pragma once

#include "znrec/int_types.hpp"
#include "znrec/linalg.hpp"
#include "znrec/matrix.hpp"
#include "znrec/rng.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace znrec {

struct GenerationRecord {
    std::string generator;
    std::map<std::string, long long> params;
    std::uint64_t seed = 0;
    IntegerMatrix matrix;
    double entropy_bits = 0.0;
    double wall_seconds = 0.0;
};

namespace detail {

class RecordTimer {
public:
    explicit RecordTimer(const RngStream& rng)
        : start_(std::chrono::steady_clock::now()), entropy_start_(rng.entropy_bits()) {}

    GenerationRecord finish(std::string name, std::map<std::string, long long> params,
                            const RngStream& rng, IntegerMatrix matrix) const {
        GenerationRecord rec;
        rec.generator = std::move(name);
        rec.params = std::move(params);
        rec.seed = rng.seed();
        rec.matrix = std::move(matrix);
        rec.entropy_bits = rng.entropy_bits() - entropy_start_;
        rec.wall_seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start_)
                               .count();
        return rec;
    }

private:
    std::chrono::steady_clock::time_point start_;
    double entropy_start_;
};

inline Integer vector_gcd(const std::vector<Integer>& v) {
    Integer g = 0;
    for (const auto& x : v) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

}  // namespace detail

struct BoxOptions {
    int feasibility_cap = 6;
    long long max_attempts = 20'000'000;
    bool coprime_prefilter = true;
};

namespace detail {

inline void fill_uniform_box(IntegerMatrix& m, long long t, RngStream& rng) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m(i, j) = int_of(rng.uniform_int(-t, t));
}

inline bool rows_and_cols_coprime(const IntegerMatrix& m) {
    for (int i = 0; i < m.rows(); ++i) {
        Integer g = 0;
        for (int j = 0; j < m.cols(); ++j)
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), m(i, j).get_mpz_t());
        if (g != 1) return false;
    }
    for (int j = 0; j < m.cols(); ++j) {
        Integer g = 0;
        for (int i = 0; i < m.rows(); ++i)
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), m(i, j).get_mpz_t());
        if (g != 1) return false;
    }
    return true;
}

// One attempt per call; shared by the standalone generator and the embedded
// sampler. Throws BudgetExhaustedError when no accept occurs in the budget.
inline IntegerMatrix box_rejection_matrix(int n, long long t, RngStream& rng,
                                          const BoxOptions& opts) {
    IntegerMatrix m(n, n);
    for (long long attempt = 0; attempt < opts.max_attempts; ++attempt) {
        fill_uniform_box(m, t, rng);
        if (opts.coprime_prefilter && !rows_and_cols_coprime(m)) continue;
        Integer d = det_exact(m);
        if (abs(d) == 1) return m;
    }
    throw BudgetExhaustedError("box rejection: attempt budget exhausted");
}

}  // namespace detail

inline GenerationRecord gen_box_rejection(int n, long long t, RngStream& rng,
                                          const BoxOptions& opts = {}) {
    if (n < 1 || t < 1) throw std::invalid_argument("gen_box_rejection: need n >= 1, T >= 1");
    if (n > opts.feasibility_cap)
        throw DimensionError("gen_box_rejection: n exceeds feasibility cap " +
                             std::to_string(opts.feasibility_cap));
    detail::RecordTimer timer(rng);
    IntegerMatrix m = detail::box_rejection_matrix(n, t, rng, opts);
    return timer.finish("box", {{"n", n}, {"T", t}}, rng, std::move(m));
}

struct UnipotentFactor {
    int row;   // i of I + x*E(i,j)
    int col;   // j
    long long x;
};

inline GenerationRecord gen_unipotent_product(int n, long long b, long long ell,
                                              RngStream& rng,
                                              std::vector<UnipotentFactor>* trace = nullptr) {
    if (n < 2 || b < 1 || ell < 0)
        throw std::invalid_argument("gen_unipotent_product: need n >= 2, b >= 1, ell >= 0");
    detail::RecordTimer timer(rng);
    IntegerMatrix m = IntegerMatrix::identity(n);
    const std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n - 1);
    for (long long k = 0; k < ell; ++k) {
        std::uint64_t p = rng.uniform_below(pairs);
        int i = static_cast<int>(p / (n - 1));
        int rem = static_cast<int>(p % (n - 1));
        int j = rem >= i ? rem + 1 : rem;
        long long x = rng.uniform_int(-b, b);
        if (trace) trace->push_back({i, j, x});
        // right-multiplying by I + x*E(i,j) adds x * column i to column j
        m.add_multiple_of_col(j, i, int_of(x));
    }
    return timer.finish("unipotent", {{"n", n}, {"b", b}, {"ell", ell}}, rng, std::move(m));
}

// Places h (d x d, det +-1) on the rows/columns selected by `indices`
// (0-based, strictly increasing) of an n x n identity.
inline IntegerMatrix embed_small(const IntegerMatrix& h, const std::vector<int>& indices,
                                 int n) {
    const int d = h.rows();
    if (!h.is_square() || static_cast<int>(indices.size()) != d)
        throw DimensionError("embed_small: index count must match h");
    for (int i = 0; i < d; ++i) {
        if (indices[i] < 0 || indices[i] >= n)
            throw std::invalid_argument("embed_small: index out of range");
        if (i > 0 && indices[i] <= indices[i - 1])
            throw std::invalid_argument("embed_small: indices must be strictly increasing");
    }
    if (abs(det_exact(h)) != 1) throw NotUnimodularError("embed_small: det(h) != +-1");
    IntegerMatrix m = IntegerMatrix::identity(n);
    for (int i = 0; i < d; ++i) {
        m(indices[i], indices[i]) = 0;
        for (int j = 0; j < d; ++j) m(indices[i], indices[j]) = h(i, j);
    }
    return m;
}

struct EmbeddedFactor {
    std::vector<int> indices;
    IntegerMatrix small;
};

inline GenerationRecord gen_embedded_product(int n, int d, long long t, long long ell,
                                             RngStream& rng,
                                             std::vector<EmbeddedFactor>* trace = nullptr,
                                             const BoxOptions& box_opts = {}) {
    if (d < 2 || d > 4 || d >= n || t < 1 || ell < 0)
        throw std::invalid_argument("gen_embedded_product: need 2 <= d <= 4 < n, T >= 1");
    detail::RecordTimer timer(rng);
    IntegerMatrix m = IntegerMatrix::identity(n);
    std::vector<int> pool(n);
    for (long long k = 0; k < ell; ++k) {
        std::iota(pool.begin(), pool.end(), 0);
        std::vector<int> idx(d);
        for (int i = 0; i < d; ++i) {
            std::uint64_t r = rng.uniform_below(static_cast<std::uint64_t>(n - i));
            idx[i] = pool[i + r];
            std::swap(pool[i], pool[i + r]);
        }
        std::sort(idx.begin(), idx.end());
        IntegerMatrix small = detail::box_rejection_matrix(d, t, rng, box_opts);
        if (trace) trace->push_back({idx, small});
        // right-multiply by the embedding: mix the d selected columns
        std::vector<std::vector<Integer>> old(d, std::vector<Integer>(n));
        for (int c = 0; c < d; ++c)
            for (int r = 0; r < n; ++r) old[c][r] = m(r, idx[c]);
        for (int c = 0; c < d; ++c) {
            for (int r = 0; r < n; ++r) {
                Integer s = 0;
                for (int i = 0; i < d; ++i)
                    mpz_addmul(s.get_mpz_t(), old[i][r].get_mpz_t(), small(i, c).get_mpz_t());
                m(r, idx[c]) = s;
            }
        }
    }
    return timer.finish("embedded", {{"n", n}, {"d", d}, {"T", t}, {"ell", ell}}, rng,
                        std::move(m));
}

struct SilvermanStats {
    long long gcd_resamples = 0;
    long long rank_resamples = 0;
};

inline GenerationRecord gen_silverman(int n, long long t, RngStream& rng,
                                      SilvermanStats* stats = nullptr,
                                      long long max_resamples = 4096) {
    if (n < 2 || t < 1) throw std::invalid_argument("gen_silverman: need n >= 2, T >= 1");
    detail::RecordTimer timer(rng);
    IntegerMatrix bottom(n - 1, n);
    for (long long attempt = 0; attempt < max_resamples; ++attempt) {
        detail::fill_uniform_box(bottom, t, rng);
        std::vector<Integer> minors = cofactor_minor_vector(bottom);
        bool zero = std::all_of(minors.begin(), minors.end(),
                                [](const Integer& v) { return sgn(v) == 0; });
        if (zero) {
            if (stats) ++stats->rank_resamples;
            continue;
        }
        if (detail::vector_gcd(minors) != 1) {
            if (stats) ++stats->gcd_resamples;
            continue;
        }
        auto [g, coeffs] = extended_gcd_chain(minors);
        int sign = rng.sign_bit();
        std::vector<Integer> top(n);
        for (int j = 0; j < n; ++j) top[j] = sign * coeffs[j];
        std::vector<Integer> reduced = least_squares_round_reduce(top, bottom);
        IntegerMatrix m(n, n);
        for (int j = 0; j < n; ++j) m(0, j) = reduced[j];
        for (int i = 0; i < n - 1; ++i)
            for (int j = 0; j < n; ++j) m(i + 1, j) = bottom(i, j);
        return timer.finish("silverman", {{"n", n}, {"T", t}}, rng, std::move(m));
    }
    std::string msg = "gen_silverman: resample budget exhausted after " +
                      std::to_string(max_resamples) + " attempts";
    if (stats)
        msg += " (gcd failures " + std::to_string(stats->gcd_resamples) +
               ", rank failures " + std::to_string(stats->rank_resamples) + ")";
    throw BudgetExhaustedError(msg);
}

inline GenerationRecord gen_hnf(int n, int m_rows, long long t, RngStream& rng,
                                IntegerMatrix* basis_out = nullptr,
                                long long max_resamples = 4096) {
    if (m_rows < n || n < 1 || t < 1)
        throw std::invalid_argument("gen_hnf: need m >= n >= 1, T >= 1");
    detail::RecordTimer timer(rng);
    IntegerMatrix b(m_rows, n);
    for (long long attempt = 0; attempt < max_resamples; ++attempt) {
        detail::fill_uniform_box(b, t, rng);
        try {
            HnfDecomposition dec = hnf_column_decompose(b);
            if (basis_out) *basis_out = b;
            return timer.finish("hnf", {{"n", n}, {"m", m_rows}, {"T", t}}, rng,
                                std::move(dec.unimodular));
        } catch (const RankDeficientError&) {
            continue;
        }
    }
    throw BudgetExhaustedError("gen_hnf: resample budget exhausted");
}

struct DrsOptions {
    // With full_symmetric_group the permutation factors range over all of S_n,
    // negating one row on odd parity to keep determinant +1.
    bool full_symmetric_group = false;
};

namespace detail {

struct SignedPermDraw {
    std::vector<int> image;
    std::vector<int> sign;
};

inline SignedPermDraw draw_permutation(int n, RngStream& rng, bool full_sn) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    bool odd = false;
    for (int i = 0; i < n - 1; ++i) {
        std::uint64_t r = rng.uniform_below(static_cast<std::uint64_t>(n - i));
        if (r != 0) {
            std::swap(perm[i], perm[i + r]);
            odd = !odd;
        }
    }
    SignedPermDraw out;
    out.sign.assign(n, 1);
    if (odd) {
        if (full_sn)
            out.sign[0] = -1;  // det correction
        else
            std::swap(perm[0], perm[1]);  // compose with a transposition
    }
    out.image = std::move(perm);
    return out;
}

inline void apply_signed_column_permutation(IntegerMatrix& m, const SignedPermDraw& p) {
    const int n = m.cols();
    IntegerMatrix out(m.rows(), n);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < m.rows(); ++r)
            out(r, p.image[c]) = p.sign[c] >= 0 ? m(r, c) : Integer(-m(r, c));
    m = std::move(out);
}

}  // namespace detail

inline GenerationRecord gen_drs(int n, int big_r, RngStream& rng,
                                const DrsOptions& opts = {}) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("gen_drs: n must be even");
    if (big_r < 1) throw std::invalid_argument("gen_drs: R >= 1 required");
    detail::RecordTimer timer(rng);
    IntegerMatrix m = IntegerMatrix::identity(n);
    detail::apply_signed_column_permutation(
        m, detail::draw_permutation(n, rng, opts.full_symmetric_group));
    for (int r = 0; r < big_r; ++r) {
        for (int blk = 0; blk < n / 2; ++blk) {
            const int c1 = 2 * blk, c2 = 2 * blk + 1;
            bool plus = rng.uniform_below(2) == 0;
            // right-multiply columns (c1, c2) by [[1,1],[1,2]] or [[1,-1],[-1,2]]
            for (int row = 0; row < n; ++row) {
                Integer a = m(row, c1), b = m(row, c2);
                if (plus) {
                    m(row, c1) = a + b;
                    m(row, c2) = a + 2 * b;
                } else {
                    m(row, c1) = a - b;
                    m(row, c2) = -a + 2 * b;
                }
            }
        }
        detail::apply_signed_column_permutation(
            m, detail::draw_permutation(n, rng, opts.full_symmetric_group));
    }
    return timer.finish("drs", {{"n", n}, {"R", big_r}}, rng, std::move(m));
}

// [[I, X], [0, qI]] with X the circulant of the given n/2 coefficients.
inline IntegerMatrix ntru_matrix_from_coeffs(int n, long long q,
                                             const std::vector<long long>& x) {
    const int half = n / 2;
    if (static_cast<int>(x.size()) != half)
        throw DimensionError("ntru_matrix_from_coeffs: need n/2 coefficients");
    IntegerMatrix m(n, n);
    for (int i = 0; i < half; ++i) {
        m(i, i) = 1;
        m(half + i, half + i) = int_of(q);
        for (int j = 0; j < half; ++j) m(i, half + j) = int_of(x[(i + j) % half]);
    }
    return m;
}

inline GenerationRecord gen_ntru_reference(int n, long long q, RngStream& rng) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("gen_ntru_reference: n must be even");
    if (q < 2) throw std::invalid_argument("gen_ntru_reference: q >= 2 required");
    detail::RecordTimer timer(rng);
    std::vector<long long> x(n / 2);
    for (auto& v : x) v = rng.uniform_int(-q / 2, q / 2);
    return timer.finish("ntru", {{"n", n}, {"q", q}}, rng, ntru_matrix_from_coeffs(n, q, x));
}

}  // namespace znrec
