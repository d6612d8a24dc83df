#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

#include "primorbit/detail.hpp"
#include "primorbit/exactnum.hpp"
#include "primorbit/mat2.hpp"
#include "primorbit/parallel.hpp"
#include "primorbit/primlat.hpp"

namespace primorbit {

// Norm cap of the int64 scan engine.  Entry magnitudes stay <= 2R and the
// u-window arithmetic stays within ~R^2, so this keeps every product far from
// overflow.
inline constexpr std::int64_t kMaxScanRadius = 1 << 20;

namespace detail {

struct URange {
    std::int64_t c0 = 0, d0 = 0; // canonical base second row
    std::int64_t lo = 0, hi = -1;
};

// Base second row and u-window for a primitive first row (a, b) under norm
// bound R.  Second rows are c = c0 + u*a, d = d0 + u*b for u in [lo, hi];
// the base is canonicalized by reducing the dominant coordinate mod the first
// row, so the enumeration order is reproducible.
inline bool row_window(std::int64_t a, std::int64_t b, std::int64_t R, URange& w) {
    std::int64_t s, t;
    xgcd64(a, b, s, t); // a s + b t = 1
    std::int64_t w1 = -t, w2 = s; // a*w2 - b*w1 = 1
    if (a != 0 && std::abs(a) >= std::abs(b)) {
        std::int64_t A = std::abs(a);
        std::int64_t red = ((w1 % A) + A) % A;
        std::int64_t k = (w1 - red) / a;
        w1 = red;
        w2 -= k * b;
    } else {
        std::int64_t B = std::abs(b);
        std::int64_t red = ((w2 % B) + B) % B;
        std::int64_t k = (w2 - red) / b;
        w2 = red;
        w1 -= k * a;
    }
    bool unbounded = true;
    if (!constrain_u64(w1, a, R, w.lo, w.hi, unbounded)) return false;
    if (!constrain_u64(w2, b, R, w.lo, w.hi, unbounded)) return false;
    if (unbounded) return false; // impossible: (a, b) != (0, 0)
    w.c0 = w1;
    w.d0 = w2;
    return true;
}

} // namespace detail

// Streams every gamma in SL2(Z) with |gamma| <= R exactly once, in a fixed
// order: primitive first rows (a, b) lexicographically, then u ascending.
// body(a, b, c, d, rowseq, uoff); rowseq/uoff give the global position.
template <typename Body>
inline void scan_rows_range(std::int64_t R, std::int64_t a_lo, std::int64_t a_hi, Body&& body) {
    const std::uint64_t stride = static_cast<std::uint64_t>(2 * R + 1);
    for (std::int64_t a = a_lo; a < a_hi; ++a) {
        const std::uint64_t base_seq = static_cast<std::uint64_t>(a + R) * stride;
        for (std::int64_t b = -R; b <= R; ++b) {
            if (std::gcd(a < 0 ? -a : a, b < 0 ? -b : b) != 1) continue;
            detail::URange w;
            if (!detail::row_window(a, b, R, w)) continue;
            body(a, b, w, base_seq + static_cast<std::uint64_t>(b + R));
        }
    }
}

template <typename Body>
inline void scan_ball_serial(std::int64_t R, Body&& body) {
    if (R < 1) throw ValidationError("radius must be >= 1");
    if (R > kMaxScanRadius) throw BudgetError("radius exceeds the scan engine cap");
    scan_rows_range(R, -R, R + 1,
                    [&](std::int64_t a, std::int64_t b, const detail::URange& w,
                        std::uint64_t rowseq) {
                        std::int64_t c = w.c0 + w.lo * a;
                        std::int64_t d = w.d0 + w.lo * b;
                        for (std::int64_t u = w.lo; u <= w.hi; ++u, c += a, d += b)
                            body(a, b, c, d, rowseq, static_cast<std::uint64_t>(u - w.lo));
                    });
}

// Parallel variant: workers own a Local; rows are dispatched by first-row
// chunks, so any order-sensitive reduction must key on (rowseq, uoff).
template <typename Local, typename Body>
inline std::vector<Local> scan_ball_locals(std::int64_t R, int threads,
                                           const std::function<Local()>& make_local, Body body) {
    if (R < 1) throw ValidationError("radius must be >= 1");
    if (R > kMaxScanRadius) throw BudgetError("radius exceeds the scan engine cap");
    return parallel_chunks<Local>(
        -R, R + 1, /*grain=*/8, threads, make_local,
        [&](Local& local, std::int64_t lo, std::int64_t hi) {
            scan_rows_range(R, lo, hi,
                            [&](std::int64_t a, std::int64_t b, const detail::URange& w,
                                std::uint64_t rowseq) {
                                std::int64_t c = w.c0 + w.lo * a;
                                std::int64_t d = w.d0 + w.lo * b;
                                for (std::int64_t u = w.lo; u <= w.hi; ++u, c += a, d += b)
                                    body(local, a, b, c, d, rowseq,
                                         static_cast<std::uint64_t>(u - w.lo));
                            });
        });
}

// Spec-facing stream: every |gamma| <= R exactly once, deterministic order.
void enum_ball(std::int64_t R, const std::function<void(const Mat2Z&)>& visit);

std::uint64_t ball_cardinality(std::int64_t R, int threads = 0);
// Conservative a-priori size estimate used for budget gating.
std::uint64_t ball_cardinality_estimate(std::int64_t R);

struct OrbitPoint {
    mpz_class z1, z2;
    std::uint64_t multiplicity = 0;
};

struct OrbitOptions {
    int threads = 0;
    std::uint64_t max_points = 100'000'000; // distinct-point budget
};

// Distinct values X*gamma over the R-ball with multiplicities, sorted
// lexicographically.
std::vector<OrbitPoint> truncated_orbit(const PrimitivePoint& x, std::int64_t R,
                                        const OrbitOptions& opts = {});

// All gamma with |gamma| <= R and X*gamma = Z, ascending in the fiber
// parameter u.  List length is at most 2R/(|X||Z|) + 1.
std::vector<Mat2Z> fiber(const PrimitivePoint& x, const PrimitivePoint& z, const mpz_class& R);

struct Box {
    mpq_class x_lo, x_hi, y_lo, y_hi;
    bool valid() const { return x_lo <= x_hi && y_lo <= y_hi; }
};

struct CountOptions {
    int threads = 0;
};

// Card{gamma : |gamma| <= r, X gamma in box} for each r in `schedule`
// (ascending radii).  Closed-box convention; membership certified.
std::vector<std::pair<std::int64_t, std::uint64_t>> count_in_box(
    const Point2& x, const Box& box, const std::vector<std::int64_t>& schedule,
    const CountOptions& opts = {});

// Doubling schedule ending at R: {..., R/4, R/2, R}.
std::vector<std::int64_t> geometric_schedule(std::int64_t R);

struct AnnulusStat {
    std::int64_t ring = 0;
    mpq_class lo, hi;                 // sup-norm band covered by the ring
    std::uint64_t cells = 0;          // cells in the ring
    std::uint64_t occupied = 0;       // cells holding at least one orbit point
    std::uint64_t max_empty_run = 0;  // longest circular run of empty cells
};

struct CoverageReport {
    mpq_class cell;
    std::int64_t rings = 0;
    std::vector<AnnulusStat> annuli;
};

// Occupancy of the square |Y| <= 2|X|R by the truncated orbit, on a grid of
// side `cell` centered at the origin.  Purely diagnostic.
CoverageReport coverage_stats(const PrimitivePoint& x, std::int64_t R, const mpq_class& cell,
                              const CountOptions& opts = {});

} // namespace primorbit
