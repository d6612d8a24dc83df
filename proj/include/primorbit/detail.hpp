#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <numeric>

namespace primorbit::detail {

inline mpz_class fdiv(const mpz_class& a, const mpz_class& b) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline mpz_class cdiv(const mpz_class& a, const mpz_class& b) {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

// Intersects the u-range of |base + u*step| <= bound into [lo, hi]; when
// step == 0 this degrades to a feasibility check on |base|.  Returns false
// when the combined range is empty.
inline bool constrain_u(const mpz_class& base, const mpz_class& step, const mpz_class& bound,
                        mpz_class& lo, mpz_class& hi, bool& unbounded) {
    if (step == 0) return abs(base) <= bound;
    mpz_class a = -bound - base, b = bound - base;
    mpz_class u_lo, u_hi;
    if (step > 0) {
        u_lo = cdiv(a, step);
        u_hi = fdiv(b, step);
    } else {
        u_lo = cdiv(b, step);
        u_hi = fdiv(a, step);
    }
    if (unbounded) {
        lo = u_lo;
        hi = u_hi;
        unbounded = false;
    } else {
        lo = std::max(lo, u_lo);
        hi = std::min(hi, u_hi);
    }
    return lo <= hi;
}

inline std::int64_t fdiv64(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

inline std::int64_t cdiv64(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b, r = a % b;
    if (r != 0 && ((r < 0) == (b < 0))) ++q;
    return q;
}

inline bool constrain_u64(std::int64_t base, std::int64_t step, std::int64_t bound,
                          std::int64_t& lo, std::int64_t& hi, bool& unbounded) {
    if (step == 0) return std::abs(base) <= bound;
    std::int64_t a = -bound - base, b = bound - base;
    std::int64_t u_lo, u_hi;
    if (step > 0) {
        u_lo = cdiv64(a, step);
        u_hi = fdiv64(b, step);
    } else {
        u_lo = cdiv64(b, step);
        u_hi = fdiv64(a, step);
    }
    if (unbounded) {
        lo = u_lo;
        hi = u_hi;
        unbounded = false;
    } else {
        lo = std::max(lo, u_lo);
        hi = std::min(hi, u_hi);
    }
    return lo <= hi;
}

// Extended gcd: returns g = gcd(a, b) and s, t with a*s + b*t = g.
inline std::int64_t xgcd64(std::int64_t a, std::int64_t b, std::int64_t& s, std::int64_t& t) {
    std::int64_t old_r = a, r = b;
    std::int64_t old_s = 1, s1 = 0;
    std::int64_t old_t = 0, t1 = 1;
    while (r != 0) {
        std::int64_t q = old_r / r;
        std::int64_t tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s1;
        old_s = s1;
        s1 = tmp;
        tmp = old_t - q * t1;
        old_t = t1;
        t1 = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    s = old_s;
    t = old_t;
    return old_r;
}

} // namespace primorbit::detail
