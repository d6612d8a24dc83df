#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

#include "primorbit/errors.hpp"

namespace primorbit {

inline mpq_class make_mpq(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw ValidationError("denominator must be nonzero");
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

// Closed interval [lo, hi] with exact rational endpoints.  All arithmetic on
// rational endpoints is exact, so no rounding direction is ever needed here;
// only transcendental covers (below) round outward.
struct QInterval {
    mpq_class lo, hi;

    QInterval() : lo(0), hi(0) {}
    QInterval(const mpq_class& v) : lo(v), hi(v) {}
    QInterval(mpq_class l, mpq_class h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo > hi) throw ValidationError("interval endpoints out of order");
    }

    bool degenerate() const { return lo == hi; }
    mpq_class width() const { return hi - lo; }
    mpq_class mid() const { return (lo + hi) / 2; }
    bool contains(const mpq_class& v) const { return lo <= v && v <= hi; }
    bool contains_zero() const { return lo <= 0 && 0 <= hi; }
};

QInterval operator+(const QInterval& a, const QInterval& b);
QInterval operator-(const QInterval& a, const QInterval& b);
QInterval operator*(const QInterval& a, const QInterval& b);
QInterval operator-(const QInterval& a);
QInterval operator*(const mpq_class& s, const QInterval& a);
QInterval abs_interval(const QInterval& a);
QInterval max_interval(const QInterval& a, const QInterval& b);
QInterval intersect(const QInterval& a, const QInterval& b);
// Reciprocal; requires the interval to exclude zero.
QInterval reciprocal(const QInterval& a);

inline bool certainly_lt(const QInterval& a, const QInterval& b) { return a.hi < b.lo; }
inline bool certainly_le(const QInterval& a, const QInterval& b) { return a.hi <= b.lo; }

// 2^-bits as an exact rational.
mpq_class pow2_inv(long bits);

// ---- MPFR-backed certified covers ------------------------------------------
//
// Every cover returns a rational interval guaranteed to contain the exact
// value, computed with directed rounding at `prec` working bits.  Widths
// shrink as prec grows.

mpq_class mpq_of_mpfr(const void* mpfr_value); // internal helper, see .cpp

QInterval log_cover(const mpq_class& x, long prec);      // natural log, x > 0
QInterval log_cover(const QInterval& x, long prec);      // x.lo > 0
QInterval log2_cover(const mpq_class& x, long prec);     // base-2 log, x > 0
QInterval exp_cover(const mpq_class& x, long prec);
QInterval exp_cover(const QInterval& x, long prec);

// base^expo for base > 0.  Detects exactly-rational powers (so that certified
// floors of power expressions terminate even when the value is an integer).
std::optional<mpq_class> pow_exact(const mpq_class& base, const mpq_class& expo);
QInterval pow_cover(const mpq_class& base, const mpq_class& expo, long prec);
QInterval pow_cover(const QInterval& base, const mpq_class& expo, long prec);

// [lo, hi] cover of sqrt(c) for integer c >= 0, width <= 2^-prec.  Pure GMP.
QInterval sqrt_cover(const mpz_class& c, long prec);

// e^e cover (domain threshold of the log|Y|/loglog|Y| budget).
QInterval e_to_e_cover(long prec);

std::string to_string(const mpq_class& q);
std::string to_string(const QInterval& i);

} // namespace primorbit
