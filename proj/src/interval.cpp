#include "primorbit/interval.hpp"

#include <mpfr.h>

#include <algorithm>
#include <array>

namespace primorbit {

QInterval operator+(const QInterval& a, const QInterval& b) {
    return {mpq_class(a.lo + b.lo), mpq_class(a.hi + b.hi)};
}

QInterval operator-(const QInterval& a, const QInterval& b) {
    return {mpq_class(a.lo - b.hi), mpq_class(a.hi - b.lo)};
}

QInterval operator-(const QInterval& a) { return {mpq_class(-a.hi), mpq_class(-a.lo)}; }

QInterval operator*(const QInterval& a, const QInterval& b) {
    std::array<mpq_class, 4> p = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return {*std::min_element(p.begin(), p.end()), *std::max_element(p.begin(), p.end())};
}

QInterval operator*(const mpq_class& s, const QInterval& a) {
    if (s >= 0) return {mpq_class(s * a.lo), mpq_class(s * a.hi)};
    return {mpq_class(s * a.hi), mpq_class(s * a.lo)};
}

QInterval abs_interval(const QInterval& a) {
    if (a.lo >= 0) return a;
    if (a.hi <= 0) return -a;
    return {mpq_class(0), std::max<mpq_class>(-a.lo, a.hi)};
}

QInterval max_interval(const QInterval& a, const QInterval& b) {
    return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)};
}

QInterval intersect(const QInterval& a, const QInterval& b) {
    mpq_class lo = std::max(a.lo, b.lo);
    mpq_class hi = std::min(a.hi, b.hi);
    if (lo > hi) throw ValidationError("refiner produced disjoint intervals");
    return {lo, hi};
}

QInterval reciprocal(const QInterval& a) {
    if (a.contains_zero()) throw ValidationError("reciprocal of interval containing zero");
    return {mpq_class(1 / a.hi), mpq_class(1 / a.lo)};
}

mpq_class pow2_inv(long bits) {
    mpz_class den = 1;
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
    return make_mpq(1, den);
}

namespace {

struct Mpfr {
    mpfr_t x;
    explicit Mpfr(long prec) { mpfr_init2(x, static_cast<mpfr_prec_t>(std::max(8L, prec))); }
    ~Mpfr() { mpfr_clear(x); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
};

mpq_class rat_of(mpfr_srcptr f) {
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), f);
    return q;
}

// Apply a monotone-increasing mpfr function to a rational interval with
// outward rounding.
template <typename Fn>
QInterval mono_cover(const QInterval& x, long prec, Fn&& fn) {
    Mpfr lo(prec), hi(prec), out_lo(prec), out_hi(prec);
    mpfr_set_q(lo.x, x.lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi.x, x.hi.get_mpq_t(), MPFR_RNDU);
    fn(out_lo.x, lo.x, MPFR_RNDD);
    fn(out_hi.x, hi.x, MPFR_RNDU);
    return {rat_of(out_lo.x), rat_of(out_hi.x)};
}

} // namespace

mpq_class mpq_of_mpfr(const void* f) { return rat_of(static_cast<mpfr_srcptr>(f)); }

QInterval log_cover(const QInterval& x, long prec) {
    if (x.lo <= 0) throw ValidationError("log of non-positive value");
    return mono_cover(x, prec, [](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t rnd) { mpfr_log(r, a, rnd); });
}

QInterval log_cover(const mpq_class& x, long prec) { return log_cover(QInterval(x), prec); }

QInterval log2_cover(const mpq_class& x, long prec) {
    if (x <= 0) throw ValidationError("log2 of non-positive value");
    return mono_cover(QInterval(x), prec,
                      [](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t rnd) { mpfr_log2(r, a, rnd); });
}

QInterval exp_cover(const QInterval& x, long prec) {
    return mono_cover(x, prec, [](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t rnd) { mpfr_exp(r, a, rnd); });
}

QInterval exp_cover(const mpq_class& x, long prec) { return exp_cover(QInterval(x), prec); }

std::optional<mpq_class> pow_exact(const mpq_class& base, const mpq_class& expo) {
    if (base <= 0) return std::nullopt;
    mpz_class en = expo.get_num(), ed = expo.get_den(); // ed > 0 canonical
    if (!en.fits_slong_p() || !ed.fits_ulong_p()) return std::nullopt;
    long e_num = en.get_si();
    unsigned long e_den = ed.get_ui();
    mpz_class num = base.get_num(), den = base.get_den();
    if (e_num < 0) {
        std::swap(num, den);
        e_num = -e_num;
    }
    auto root_exact = [&](const mpz_class& v) -> std::optional<mpz_class> {
        if (e_den == 1) return v;
        mpz_class r;
        int exact = mpz_root(r.get_mpz_t(), v.get_mpz_t(), e_den);
        if (!exact) return std::nullopt;
        return r;
    };
    auto rn = root_exact(num);
    if (!rn) return std::nullopt;
    auto rd = root_exact(den);
    if (!rd) return std::nullopt;
    mpz_class pn, pd;
    mpz_pow_ui(pn.get_mpz_t(), rn->get_mpz_t(), static_cast<unsigned long>(e_num));
    mpz_pow_ui(pd.get_mpz_t(), rd->get_mpz_t(), static_cast<unsigned long>(e_num));
    return make_mpq(pn, pd);
}

QInterval pow_cover(const QInterval& base, const mpq_class& expo, long prec) {
    if (base.lo <= 0) throw ValidationError("pow_cover requires positive base");
    if (base.degenerate()) {
        if (auto exact = pow_exact(base.lo, expo)) return QInterval(*exact);
    }
    // base^e = exp(e * log base), every step outward.
    QInterval lg = log_cover(base, prec);
    QInterval s = expo * lg;
    return exp_cover(s, prec);
}

QInterval pow_cover(const mpq_class& base, const mpq_class& expo, long prec) {
    return pow_cover(QInterval(base), expo, prec);
}

QInterval sqrt_cover(const mpz_class& c, long prec) {
    if (c < 0) throw ValidationError("sqrt of negative integer");
    mpz_class scaled;
    mpz_mul_2exp(scaled.get_mpz_t(), c.get_mpz_t(), static_cast<mp_bitcnt_t>(2 * prec));
    mpz_class s;
    mpz_sqrt(s.get_mpz_t(), scaled.get_mpz_t());
    mpz_class den = 1;
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(prec));
    mpz_class s1 = s;
    if (s * s != scaled) s1 = s + 1; // exact square -> degenerate-tight cover
    return {make_mpq(s, den), make_mpq(s1, den)};
}

QInterval e_to_e_cover(long prec) {
    QInterval e = exp_cover(mpq_class(1), prec);
    return exp_cover(e, prec);
}

std::string to_string(const mpq_class& q) { return q.get_str(); }

std::string to_string(const QInterval& i) {
    return "[" + i.lo.get_str() + ", " + i.hi.get_str() + "]";
}

} // namespace primorbit
