#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace znrec {

static_assert(GMP_NUMB_BITS == 64, "64-bit GMP limbs expected");

using Integer = mpz_class;
using Rational = mpq_class;

static_assert(sizeof(long) == 8, "64-bit long expected");

inline Integer int_of(long long v) { return Integer(static_cast<long>(v)); }
inline Rational rat_of(long long v) { return Rational(static_cast<long>(v)); }

// Number of bits in |x|; bit_length(0) == 0.
inline std::size_t bit_length(const Integer& x) {
    if (sgn(x) == 0) return 0;
    return mpz_sizeinbase(x.get_mpz_t(), 2);
}

// log2|x| as a double; valid far beyond the double exponent range.
inline double log2_abs(const Integer& x) {
    if (sgn(x) == 0) throw std::domain_error("log2_abs: zero argument");
    long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, x.get_mpz_t());
    return std::log2(std::fabs(mant)) + static_cast<double>(exp2);
}

// Converts an Integer into a floating type limb by limb, so the result is
// correctly rounded to the full target mantissa (mpz_get_d only yields 53 bits).
template <typename FT>
FT to_float(const Integer& x) {
    const std::size_t limbs = mpz_size(x.get_mpz_t());
    const FT limb_base = FT(18446744073709551616.0L);  // 2^64
    FT acc = 0;
    for (std::size_t i = limbs; i-- > 0;) {
        acc = acc * limb_base +
              FT(static_cast<std::uint64_t>(mpz_getlimbn(x.get_mpz_t(), i)));
    }
    return sgn(x) < 0 ? -acc : acc;
}

// Nearest integer, ties away from zero. Exact.
inline Integer round_half_away_from_zero(const Rational& q) {
    Integer quot, rem;
    mpz_tdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(),
                q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    Integer twice_rem = 2 * abs(rem);
    if (twice_rem >= q.get_den()) quot += sgn(q.get_num()) >= 0 ? 1 : -1;
    return quot;
}

// Nearest integer from a floating value. Exact for |x| < 2^62; above that the
// low bits are approximate, which is fine for iterated size reduction.
template <typename FT>
Integer round_to_integer(FT x) {
    const FT ax = x < 0 ? -x : x;
    if (ax < FT(4611686018427387904.0L)) {  // 2^62
        long double rounded = std::roundl(static_cast<long double>(x));
        return Integer(static_cast<long>(rounded));
    }
    double d = static_cast<double>(x);
    Integer z;
    mpz_set_d(z.get_mpz_t(), d);  // truncates; |x| huge so the fraction is noise
    return z;
}

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct RankDeficientError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotUnimodularError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotPositiveDefiniteError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BudgetExhaustedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace znrec
