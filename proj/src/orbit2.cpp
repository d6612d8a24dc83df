#include "primorbit/orbit2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace primorbit {

namespace {

std::int64_t to_i64(const mpz_class& v, const char* what) {
    if (!v.fits_slong_p()) throw ValidationError(std::string(what) + " too large for the scan engine");
    return v.get_si();
}

} // namespace

void enum_ball(std::int64_t R, const std::function<void(const Mat2Z&)>& visit) {
    scan_ball_serial(R, [&](std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d,
                            std::uint64_t, std::uint64_t) {
        visit(Mat2Z{a, b, c, d});
    });
}

std::uint64_t ball_cardinality(std::int64_t R, int threads) {
    if (R < 1) throw ValidationError("radius must be >= 1");
    if (R > kMaxScanRadius) throw BudgetError("radius exceeds the scan engine cap");
    auto locals = parallel_chunks<std::uint64_t>(
        -R, R + 1, 8, threads, [] { return std::uint64_t{0}; },
        [&](std::uint64_t& acc, std::int64_t lo, std::int64_t hi) {
            scan_rows_range(R, lo, hi,
                            [&](std::int64_t, std::int64_t, const detail::URange& w,
                                std::uint64_t) {
                                acc += static_cast<std::uint64_t>(w.hi - w.lo + 1);
                            });
        });
    std::uint64_t total = 0;
    for (auto v : locals) total += v;
    return total;
}

std::uint64_t ball_cardinality_estimate(std::int64_t R) {
    // Empirically the ball holds ~12.2 R^2 matrices; 13 R^2 errs on the large
    // side so budget gates refuse early rather than late.
    return static_cast<std::uint64_t>(13) * static_cast<std::uint64_t>(R) *
           static_cast<std::uint64_t>(R);
}

std::vector<OrbitPoint> truncated_orbit(const PrimitivePoint& x, std::int64_t R,
                                        const OrbitOptions& opts) {
    if (x.dim() != 2) throw ValidationError("truncated_orbit needs a plane point");
    if (R < 1) throw ValidationError("radius must be >= 1");
    std::int64_t x1 = to_i64(x.coords[0], "X");
    std::int64_t x2 = to_i64(x.coords[1], "X");
    std::int64_t xn = std::max(std::abs(x1), std::abs(x2));
    if (xn > 0 && R > (std::int64_t{1} << 30) / (2 * xn))
        throw BudgetError("|X| * R too large for packed orbit keys");

    using Map = std::unordered_map<std::uint64_t, std::uint64_t>;
    auto pack = [](std::int64_t z1, std::int64_t z2) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(z1)) << 32) |
               static_cast<std::uint64_t>(static_cast<std::uint32_t>(z2));
    };
    auto locals = scan_ball_locals<Map>(
        R, opts.threads, [] { return Map{}; },
        [&](Map& m, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d,
            std::uint64_t, std::uint64_t) {
            ++m[pack(x1 * a + x2 * c, x1 * b + x2 * d)];
        });
    Map merged = std::move(locals[0]);
    for (std::size_t i = 1; i < locals.size(); ++i)
        for (const auto& [k, v] : locals[i]) merged[k] += v;
    if (merged.size() > opts.max_points) throw BudgetError("orbit point budget exceeded");

    std::vector<OrbitPoint> out;
    out.reserve(merged.size());
    for (const auto& [k, v] : merged) {
        auto z1 = static_cast<std::int32_t>(k >> 32);
        auto z2 = static_cast<std::int32_t>(k & 0xffffffffu);
        out.push_back(OrbitPoint{mpz_class(z1), mpz_class(z2), v});
    }
    std::sort(out.begin(), out.end(), [](const OrbitPoint& p, const OrbitPoint& q) {
        if (p.z1 != q.z1) return p.z1 < q.z1;
        return p.z2 < q.z2;
    });
    return out;
}

std::vector<Mat2Z> fiber(const PrimitivePoint& x, const PrimitivePoint& z, const mpz_class& R) {
    if (x.dim() != 2 || z.dim() != 2) throw ValidationError("fiber needs plane points");
    if (R < 1) throw ValidationError("radius must be >= 1");
    const Mat2Z lx = lift(x)[0].matrix;
    const Mat2Z lz = lift(z)[0].matrix;
    const mpz_class &x1 = lx.a, &x2 = lx.b, &x1p = lx.c, &x2p = lx.d;
    const mpz_class &z1 = lz.a, &z2 = lz.b, &z1p = lz.c, &z2p = lz.d;

    // gamma(u) entries are affine in the fiber parameter u.
    mpz_class e11 = x2p * z1 - x2 * z1p, k11 = -(x2 * z1);
    mpz_class e12 = x2p * z2 - x2 * z2p, k12 = -(x2 * z2);
    mpz_class e21 = x1 * z1p - x1p * z1, k21 = x1 * z1;
    mpz_class e22 = x1 * z2p - x1p * z2, k22 = x1 * z2;

    mpz_class lo, hi;
    bool unbounded = true;
    if (!detail::constrain_u(e11, k11, R, lo, hi, unbounded) ||
        !detail::constrain_u(e12, k12, R, lo, hi, unbounded) ||
        !detail::constrain_u(e21, k21, R, lo, hi, unbounded) ||
        !detail::constrain_u(e22, k22, R, lo, hi, unbounded) || unbounded)
        return {};

    std::vector<Mat2Z> out;
    for (mpz_class u = lo; u <= hi; ++u) {
        Mat2Z g{e11 + u * k11, e12 + u * k12, e21 + u * k21, e22 + u * k22};
        out.push_back(std::move(g));
    }
    return out;
}

std::vector<std::int64_t> geometric_schedule(std::int64_t R) {
    std::vector<std::int64_t> out;
    for (std::int64_t r = R; r >= 1; r /= 2) out.push_back(r);
    std::reverse(out.begin(), out.end());
    return out;
}

namespace {

// Per-component row-action filter: double approximation plus an error bound
// conservative enough that any in/out call it makes is certain.
struct ComponentFilter {
    double x1 = 0, x2 = 0;       // midpoints of the X coordinates
    double e1 = 0, e2 = 0;       // absolute errors of those midpoints
    double m1 = 0, m2 = 0;       // |x1|, |x2| upper bounds
    double lo_in = 0, lo_out = 0, hi_in = 0, hi_out = 0;

    void init(const ExactReal& c1, const ExactReal& c2, const mpq_class& lo,
              const mpq_class& hi) {
        QInterval i1 = c1.approx(80), i2 = c2.approx(80);
        x1 = i1.mid().get_d();
        x2 = i2.mid().get_d();
        e1 = i1.width().get_d() + 1e-18;
        e2 = i2.width().get_d() + 1e-18;
        m1 = std::abs(x1) + e1;
        m2 = std::abs(x2) + e2;
        double lod = lo.get_d(), hid = hi.get_d();
        lo_in = std::nextafter(lod, std::numeric_limits<double>::infinity());
        lo_out = std::nextafter(lod, -std::numeric_limits<double>::infinity());
        hi_in = std::nextafter(hid, -std::numeric_limits<double>::infinity());
        hi_out = std::nextafter(hid, std::numeric_limits<double>::infinity());
    }

    // -1 certainly below box, 0 ambiguous, 1 certainly inside, 2 certainly above
    int classify(std::int64_t a, std::int64_t c) const {
        double ad = static_cast<double>(a), cd = static_cast<double>(c);
        double v = x1 * ad + x2 * cd;
        double aa = std::abs(ad), ac = std::abs(cd);
        double err = aa * e1 + ac * e2 + 8e-16 * (aa * m1 + ac * m2) + 1e-300;
        if (v + err < lo_out) return -1;
        if (v - err > hi_out) return 2;
        if (v - err >= lo_in && v + err <= hi_in) return 1;
        return 0;
    }
};

} // namespace

std::vector<std::pair<std::int64_t, std::uint64_t>> count_in_box(
    const Point2& x, const Box& box, const std::vector<std::int64_t>& schedule,
    const CountOptions& opts) {
    if (schedule.empty()) throw ValidationError("empty radius schedule");
    if (!box.valid()) throw ValidationError("box corners out of order");
    std::vector<std::int64_t> sched = schedule;
    std::sort(sched.begin(), sched.end());
    if (sched.front() < 1) throw ValidationError("radii must be >= 1");
    const std::int64_t R = sched.back();

    ComponentFilter f1, f2;
    f1.init(x[0], x[1], box.x_lo, box.x_hi);
    f2.init(x[0], x[1], box.y_lo, box.y_hi);

    // ambiguous entries store the full matrix; resolved with exact arithmetic
    struct Amb {
        std::int64_t a, b, c, d;
    };
    struct LocalState {
        std::vector<std::uint64_t> per_norm;
        std::vector<Amb> ambiguous;
    };

    auto locals = scan_ball_locals<LocalState>(
        R, opts.threads,
        [&] {
            LocalState s;
            s.per_norm.assign(static_cast<std::size_t>(R) + 1, 0);
            return s;
        },
        [&](LocalState& s, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d,
            std::uint64_t, std::uint64_t) {
            int c1 = f1.classify(a, c);
            if (c1 == -1 || c1 == 2) return;
            int c2 = f2.classify(b, d);
            if (c2 == -1 || c2 == 2) return;
            std::int64_t n = std::max(std::max(std::abs(a), std::abs(b)),
                                      std::max(std::abs(c), std::abs(d)));
            if (c1 == 1 && c2 == 1) {
                ++s.per_norm[static_cast<std::size_t>(n)];
            } else {
                s.ambiguous.push_back(Amb{a, b, c, d});
            }
        });

    std::vector<std::uint64_t> per_norm(static_cast<std::size_t>(R) + 1, 0);
    std::vector<Amb> ambiguous;
    for (auto& s : locals) {
        for (std::size_t i = 0; i < per_norm.size(); ++i) per_norm[i] += s.per_norm[i];
        ambiguous.insert(ambiguous.end(), s.ambiguous.begin(), s.ambiguous.end());
    }
    // Certified membership for the filter's undecided cases (box boundaries).
    for (const Amb& g : ambiguous) {
        ExactReal comp1 = x[0] * ExactReal(g.a) + x[1] * ExactReal(g.c);
        ExactReal comp2 = x[0] * ExactReal(g.b) + x[1] * ExactReal(g.d);
        ExactReal lo1{mpq_class(box.x_lo)}, hi1{mpq_class(box.x_hi)};
        ExactReal lo2{mpq_class(box.y_lo)}, hi2{mpq_class(box.y_hi)};
        bool in = certified_le(lo1, comp1) && certified_le(comp1, hi1) &&
                  certified_le(lo2, comp2) && certified_le(comp2, hi2);
        if (in) {
            std::int64_t n = std::max(std::max(std::abs(g.a), std::abs(g.b)),
                                      std::max(std::abs(g.c), std::abs(g.d)));
            ++per_norm[static_cast<std::size_t>(n)];
        }
    }

    std::vector<std::pair<std::int64_t, std::uint64_t>> out;
    out.reserve(sched.size());
    std::uint64_t acc = 0;
    std::size_t next = 0;
    for (std::int64_t n = 1; n <= R; ++n) {
        acc += per_norm[static_cast<std::size_t>(n)];
        while (next < sched.size() && sched[next] == n) {
            out.emplace_back(n, acc);
            ++next;
        }
    }
    return out;
}

CoverageReport coverage_stats(const PrimitivePoint& x, std::int64_t R, const mpq_class& cell,
                              const CountOptions& opts) {
    if (x.dim() != 2) throw ValidationError("coverage_stats needs a plane point");
    if (cell <= 0) throw ValidationError("cell side must be positive");
    if (R < 1) throw ValidationError("radius must be >= 1");
    std::int64_t x1 = to_i64(x.coords[0], "X");
    std::int64_t x2 = to_i64(x.coords[1], "X");
    mpz_class xn = x.norm();
    mpz_class L = 2 * xn * R; // orbit points satisfy |X gamma| <= 2|X|R

    const mpz_class p = cell.get_num(), q = cell.get_den();
    auto ring_of = [&](const mpz_class& v) {
        // cell index i = floor((2 v + cell) / (2 cell)) for center-aligned cells
        return detail::fdiv(2 * v * q + p, 2 * p);
    };
    mpz_class Kz = ring_of(L);
    if (!Kz.fits_slong_p()) throw BudgetError("coverage grid too large");
    std::int64_t K = Kz.get_si();
    std::int64_t side = 2 * K + 1;
    if (side > 0 && side > (1 << 14)) throw BudgetError("coverage grid too large");

    // exact cell assignment: i = floor((2 z q + p) / (2 p)) in 128-bit
    if (!p.fits_slong_p() || !q.fits_slong_p())
        throw ValidationError("cell side numerator/denominator too large");
    const std::int64_t pi = p.get_si(), qi = q.get_si();
    auto cell_index = [&](std::int64_t v) -> std::int64_t {
        __int128 num = static_cast<__int128>(2) * v * qi + pi;
        __int128 den = static_cast<__int128>(2) * pi;
        __int128 qq = num / den;
        __int128 rr = num % den;
        if (rr != 0 && ((rr < 0) != (den < 0))) --qq;
        return static_cast<std::int64_t>(qq);
    };

    std::vector<char> bitmap(static_cast<std::size_t>(side) * side, 0);
    auto locals = scan_ball_locals<std::vector<char>>(
        R, opts.threads,
        [&] { return std::vector<char>(static_cast<std::size_t>(side) * side, 0); },
        [&](std::vector<char>& bm, std::int64_t a, std::int64_t b, std::int64_t c,
            std::int64_t d, std::uint64_t, std::uint64_t) {
            std::int64_t z1 = x1 * a + x2 * c;
            std::int64_t z2 = x1 * b + x2 * d;
            std::int64_t i = cell_index(z1), j = cell_index(z2);
            bm[static_cast<std::size_t>(i + K) * side + (j + K)] = 1;
        });
    for (auto& bm : locals)
        for (std::size_t i = 0; i < bitmap.size(); ++i) bitmap[i] |= bm[i];

    auto occupied_at = [&](std::int64_t i, std::int64_t j) {
        return bitmap[static_cast<std::size_t>(i + K) * side + (j + K)] != 0;
    };

    CoverageReport rep;
    rep.cell = cell;
    rep.rings = K + 1;
    mpq_class half = cell / 2;
    for (std::int64_t k = 0; k <= K; ++k) {
        AnnulusStat st;
        st.ring = k;
        st.lo = k == 0 ? mpq_class(0) : mpq_class(k * cell - half);
        st.hi = k * cell + half;
        if (k == 0) {
            st.cells = 1;
            st.occupied = occupied_at(0, 0) ? 1 : 0;
            st.max_empty_run = st.occupied ? 0 : 1;
            rep.annuli.push_back(st);
            continue;
        }
        std::vector<char> walk;
        walk.reserve(static_cast<std::size_t>(8 * k));
        for (std::int64_t j = -k; j <= k; ++j) walk.push_back(occupied_at(k, j));
        for (std::int64_t i = k - 1; i >= -k; --i) walk.push_back(occupied_at(i, k));
        for (std::int64_t j = k - 1; j >= -k; --j) walk.push_back(occupied_at(-k, j));
        for (std::int64_t i = -k + 1; i <= k - 1; ++i) walk.push_back(occupied_at(i, -k));
        st.cells = walk.size();
        for (char oc : walk) st.occupied += oc ? 1 : 0;
        if (st.occupied == 0) {
            st.max_empty_run = st.cells;
        } else {
            // circular max run of empty cells
            std::uint64_t best = 0, run = 0;
            for (int pass = 0; pass < 2; ++pass)
                for (char oc : walk) {
                    if (!oc) {
                        ++run;
                        if (run > best) best = run;
                    } else {
                        run = 0;
                    }
                }
            st.max_empty_run = std::min<std::uint64_t>(best, st.cells);
        }
        rep.annuli.push_back(st);
    }
    return rep;
}

} // namespace primorbit
