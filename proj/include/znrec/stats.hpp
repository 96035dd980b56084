#pragma once

#include "znrec/generators.hpp"
#include "znrec/gram.hpp"
#include "znrec/int_types.hpp"
#include "znrec/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace znrec {

// Per-row log2 of the Euclidean norm. Squared norms are computed exactly in
// integers; the log is taken at the end. A zero row reports -infinity, which
// is excluded from min/max (norm-1 rows legitimately report 0.0).
struct RowLengthSummary {
    std::vector<double> bits;
    double min_bits = std::numeric_limits<double>::infinity();
    double max_bits = -std::numeric_limits<double>::infinity();
    bool has_zero_row = false;
};

inline RowLengthSummary row_norm_bits(const IntegerMatrix& m) {
    RowLengthSummary s;
    s.bits.reserve(m.rows());
    for (int i = 0; i < m.rows(); ++i) {
        Integer norm2 = 0;
        for (int j = 0; j < m.cols(); ++j)
            mpz_addmul(norm2.get_mpz_t(), m(i, j).get_mpz_t(), m(i, j).get_mpz_t());
        if (sgn(norm2) == 0) {
            s.has_zero_row = true;
            s.bits.push_back(-std::numeric_limits<double>::infinity());
            continue;
        }
        double b = 0.5 * log2_abs(norm2);
        s.bits.push_back(b);
        s.min_bits = std::min(s.min_bits, b);
        s.max_bits = std::max(s.max_bits, b);
    }
    return s;
}

struct HeatmapGrid {
    int rows = 0;
    int cols = 0;
    std::vector<double> values;  // row-major log2(1 + |entry|)

    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * cols + j]; }
};

inline HeatmapGrid log_heatmap(const IntegerMatrix& m) {
    HeatmapGrid g;
    g.rows = m.rows();
    g.cols = m.cols();
    g.values.reserve(static_cast<std::size_t>(g.rows) * g.cols);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            Integer v = abs(m(i, j)) + 1;
            g.values.push_back(log2_abs(v));
        }
    return g;
}

inline HeatmapGrid gram_log_heatmap(const GramMatrix& g) { return log_heatmap(g.matrix()); }

inline std::string heatmap_to_csv(const HeatmapGrid& g) {
    std::ostringstream os;
    os.precision(10);
    for (int i = 0; i < g.rows; ++i) {
        for (int j = 0; j < g.cols; ++j) {
            if (j) os << ',';
            os << g.at(i, j);
        }
        os << '\n';
    }
    return os.str();
}

constexpr double kBandRatioCap = 1e9;

// Mean of log2(1+|G_ij|) over |i-j| <= w divided by the mean over |i-j| > w.
// An all-zero off-band reports the cap sentinel.
inline double band_ratio(const GramMatrix& g, int w) {
    const int n = g.n();
    if (w < 1 || w >= n) throw std::invalid_argument("band_ratio: need 1 <= w < n");
    double in_sum = 0, out_sum = 0;
    long in_count = 0, out_count = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Integer v = abs(g(i, j)) + 1;
            double x = log2_abs(v);
            if (std::abs(i - j) <= w) {
                in_sum += x;
                ++in_count;
            } else {
                out_sum += x;
                ++out_count;
            }
        }
    double in_mean = in_sum / static_cast<double>(in_count);
    if (out_count == 0 || out_sum == 0.0) return kBandRatioCap;
    double out_mean = out_sum / static_cast<double>(out_count);
    double ratio = in_mean / out_mean;
    return std::min(ratio, kBandRatioCap);
}

// Singular values (descending) by one-sided Jacobi in double precision.
// Diagnostic only; entries far beyond the double range are scaled first and
// scaled back at the end.
inline std::vector<double> near_rank_profile(const IntegerMatrix& m) {
    const int rows = m.rows(), cols = m.cols();
    long shift = 0;
    if (m.max_entry_bits() > 500) shift = static_cast<long>(m.max_entry_bits()) - 500;
    std::vector<std::vector<double>> a(rows, std::vector<double>(cols));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            long e = 0;
            double d = mpz_get_d_2exp(&e, m(i, j).get_mpz_t());
            a[i][j] = std::ldexp(d, static_cast<int>(e - shift));
        }
    auto col_dot = [&](int p, int q) {
        double s = 0;
        for (int i = 0; i < rows; ++i) s += a[i][p] * a[i][q];
        return s;
    };
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < cols - 1; ++p)
            for (int q = p + 1; q < cols; ++q) {
                double app = col_dot(p, p), aqq = col_dot(q, q), apq = col_dot(p, q);
                if (std::abs(apq) <= 1e-15 * std::sqrt(app * aqq)) continue;
                double tau = (aqq - app) / (2 * apq);
                double t = (tau >= 0 ? 1.0 : -1.0) /
                           (std::abs(tau) + std::sqrt(1 + tau * tau));
                double c = 1 / std::sqrt(1 + t * t), s = c * t;
                for (int i = 0; i < rows; ++i) {
                    double vp = a[i][p], vq = a[i][q];
                    a[i][p] = c * vp - s * vq;
                    a[i][q] = s * vp + c * vq;
                }
                rotated = true;
            }
        if (!rotated) break;
    }
    std::vector<double> sv(cols);
    for (int j = 0; j < cols; ++j)
        sv[j] = std::ldexp(std::sqrt(col_dot(j, j)), static_cast<int>(shift));
    std::sort(sv.begin(), sv.end(), std::greater<double>());
    return sv;
}

inline double nonzero_fraction(const IntegerMatrix& m) {
    long nz = 0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (sgn(m(i, j)) != 0) ++nz;
    return static_cast<double>(nz) /
           (static_cast<double>(m.rows()) * static_cast<double>(m.cols()));
}

struct EntropySummaryRow {
    std::string generator;
    long count = 0;
    double total_entropy_bits = 0;
    double mean_entropy_bits = 0;
    double mean_nonzero_fraction = 0;
    double min_row_bits = std::numeric_limits<double>::infinity();
    double max_row_bits = -std::numeric_limits<double>::infinity();
};

// The comparison axes used across generators: randomness consumed, fill, and
// row-length range.
inline std::vector<EntropySummaryRow> entropy_summary(
    const std::vector<GenerationRecord>& records) {
    std::map<std::string, EntropySummaryRow> by_gen;
    for (const auto& rec : records) {
        auto& row = by_gen[rec.generator];
        row.generator = rec.generator;
        ++row.count;
        row.total_entropy_bits += rec.entropy_bits;
        row.mean_nonzero_fraction += nonzero_fraction(rec.matrix);
        RowLengthSummary s = row_norm_bits(rec.matrix);
        row.min_row_bits = std::min(row.min_row_bits, s.min_bits);
        row.max_row_bits = std::max(row.max_row_bits, s.max_bits);
    }
    std::vector<EntropySummaryRow> out;
    for (auto& [name, row] : by_gen) {
        row.mean_entropy_bits = row.total_entropy_bits / row.count;
        row.mean_nonzero_fraction /= row.count;
        out.push_back(row);
    }
    return out;
}

inline std::string entropy_summary_to_csv(const std::vector<EntropySummaryRow>& rows) {
    std::ostringstream os;
    os.precision(10);
    os << "generator,count,total_entropy_bits,mean_entropy_bits,mean_nonzero_fraction,"
          "min_row_bits,max_row_bits\n";
    for (const auto& r : rows)
        os << r.generator << ',' << r.count << ',' << r.total_entropy_bits << ','
           << r.mean_entropy_bits << ',' << r.mean_nonzero_fraction << ','
           << r.min_row_bits << ',' << r.max_row_bits << '\n';
    return os.str();
}

// Spearman rank correlation with average ranks on ties.
inline double spearman_rank_correlation(const std::vector<double>& x,
                                        const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2)
        throw std::invalid_argument("spearman_rank_correlation: need matched series");
    auto ranks = [](const std::vector<double>& v) {
        const std::size_t n = v.size();
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return v[a] < v[b];
        });
        std::vector<double> r(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
            double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    std::vector<double> rx = ranks(x), ry = ranks(y);
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;
    double num = 0, dx = 0, dy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (rx[i] - mx) * (ry[i] - my);
        dx += (rx[i] - mx) * (rx[i] - mx);
        dy += (ry[i] - my) * (ry[i] - my);
    }
    return num / std::sqrt(dx * dy);
}

}  // namespace znrec
