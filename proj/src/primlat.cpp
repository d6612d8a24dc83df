#include "primorbit/primlat.hpp"

#include <algorithm>

namespace primorbit {

namespace {

mpz_class fdiv(const mpz_class& a, const mpz_class& b) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

mpz_class cdiv(const mpz_class& a, const mpz_class& b) {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

// Intersects the u-range of |base + u*step| <= bound into [lo, hi].
// step == 0 turns into a feasibility check on |base|.
bool constrain_u(const mpz_class& base, const mpz_class& step, const mpz_class& bound,
                 mpz_class& lo, mpz_class& hi, bool& unbounded) {
    if (step == 0) return abs(base) <= bound;
    mpz_class a = -bound - base, b = bound - base; // step*u in [a, b]
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

} // namespace

bool is_primitive(std::span<const mpz_class> v) {
    if (v.size() < 2) throw ValidationError("primitive points need dimension >= 2");
    mpz_class g = 0;
    for (const auto& x : v) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
        if (g == 1) return true;
    }
    return g == 1;
}

PrimitivePoint::PrimitivePoint(std::vector<mpz_class> cs) : coords(std::move(cs)) {
    if (!is_primitive(coords)) throw ValidationError("coordinates are not coprime");
}

mpz_class PrimitivePoint::norm() const {
    mpz_class n = 0;
    for (const auto& x : coords) {
        mpz_class t = abs(x);
        if (t > n) n = t;
    }
    return n;
}

Partition Partition::trivial(int m, int n) {
    Partition pi;
    pi.m = m;
    pi.n = n;
    std::vector<int> all(m + n);
    for (int i = 0; i < m + n; ++i) all[i] = i + 1;
    pi.blocks = {all};
    pi.validate();
    return pi;
}

Partition Partition::parse(std::string_view text, int m, int n) {
    Partition pi;
    pi.m = m;
    pi.n = n;
    std::string s(text);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw ValidationError("partition literal must look like [1,2|3,4]");
    s = s.substr(1, s.size() - 2);
    std::vector<int> block;
    std::string cur;
    auto flush_index = [&]() {
        if (cur.empty()) throw ValidationError("empty index in partition literal");
        block.push_back(std::stoi(cur));
        cur.clear();
    };
    for (char ch : s) {
        if (ch == ',') {
            flush_index();
        } else if (ch == '|') {
            flush_index();
            pi.blocks.push_back(block);
            block.clear();
        } else if (std::isdigit(static_cast<unsigned char>(ch))) {
            cur.push_back(ch);
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            throw ValidationError("unexpected character in partition literal");
        }
    }
    flush_index();
    pi.blocks.push_back(block);
    pi.validate();
    return pi;
}

void Partition::validate() const {
    if (m < 1 || n < 1) throw ValidationError("m, n must be positive");
    std::vector<bool> seen(m + n, false);
    std::size_t total = 0;
    for (const auto& b : blocks) {
        for (int i : b) {
            if (i < 1 || i > m + n) throw ValidationError("partition index out of range");
            if (seen[i - 1]) throw ValidationError("partition blocks are not disjoint");
            seen[i - 1] = true;
            ++total;
        }
    }
    if (total != static_cast<std::size_t>(m + n))
        throw ValidationError("partition does not cover {1..m+n}");
}

bool Partition::admissible() const {
    for (const auto& b : blocks)
        if (b.size() < static_cast<std::size_t>(n + 1)) return false;
    return true;
}

bool is_pi_primitive(std::span<const mpz_class> v, const Partition& pi) {
    if (v.size() != static_cast<std::size_t>(pi.m + pi.n))
        throw ValidationError("vector length does not match partition");
    for (const auto& block : pi.blocks) {
        mpz_class g = 0;
        for (int i : block) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v[i - 1].get_mpz_t());
        if (g != 1) return false;
    }
    return true;
}

std::vector<Lift> lift(const PrimitivePoint& z) {
    if (z.dim() != 2) throw ValidationError("lift is defined for plane points");
    const mpz_class& z1 = z.coords[0];
    const mpz_class& z2 = z.coords[1];
    mpz_class bound = z.norm();
    // z1*w2 - z2*w1 = 1 via extended gcd
    mpz_class g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), z1.get_mpz_t(), z2.get_mpz_t());
    // z1*s + z2*t = 1  ->  w2 = s, w1 = -t
    mpz_class w1 = -t, w2 = s;
    mpz_class lo = 0, hi = 0;
    bool unbounded = true;
    if (!constrain_u(w1, z1, bound, lo, hi, unbounded) ||
        !constrain_u(w2, z2, bound, lo, hi, unbounded) || unbounded)
        throw Error("lift window unexpectedly empty");
    std::vector<Lift> out;
    for (mpz_class u = lo; u <= hi; ++u) {
        Mat2Z m{z1, z2, w1 + u * z1, w2 + u * z2};
        out.push_back(Lift{m});
    }
    std::sort(out.begin(), out.end(), [](const Lift& x, const Lift& y) {
        if (x.matrix.c != y.matrix.c) return x.matrix.c < y.matrix.c;
        return x.matrix.d < y.matrix.d;
    });
    return out;
}

NearestPrimitive nearest_primitive(const Point2& y, const mpq_class& bound) {
    if (bound < 1) throw ValidationError("search bound must be >= 1");
    ExactReal b{bound};
    std::array<mpz_class, 2> lo, hi;
    for (int i = 0; i < 2; ++i) {
        lo[i] = (y[i] - b).ceil();
        hi[i] = (y[i] + b).floor();
        if (lo[i] > hi[i]) throw EmptyWindowError("no lattice point within the search bound");
    }
    mpz_class cols = hi[1] - lo[1] + 1;
    mpz_class cells = (hi[0] - lo[0] + 1) * cols;
    if (cells > 100'000'000) throw BudgetError("nearest-primitive window too large");

    bool found = false;
    std::array<mpz_class, 2> best{};
    ExactReal best_dist;
    mpz_class g;
    for (mpz_class v1 = lo[0]; v1 <= hi[0]; ++v1) {
        for (mpz_class v2 = lo[1]; v2 <= hi[1]; ++v2) {
            mpz_gcd(g.get_mpz_t(), v1.get_mpz_t(), v2.get_mpz_t());
            if (g != 1) continue;
            ExactReal dist =
                max_exact((y[0] - ExactReal(v1)).abs(), (y[1] - ExactReal(v2)).abs());
            if (!certified_le(dist, b)) continue; // corner outside the closed sup-ball
            if (!found || certified_less(dist, best_dist)) {
                found = true;
                best = {v1, v2};
                best_dist = dist;
            }
            // enumeration is lexicographic, so the first minimum wins ties
        }
    }
    if (!found) throw EmptyWindowError("no primitive point within the search bound");
    long prec = 96;
    return NearestPrimitive{PrimitivePoint(best[0], best[1]), best_dist.approx(prec)};
}

mpq_class erdos_budget(const Point2& y) {
    ExactReal norm = sup_norm(y);
    // certified |Y| > e^e gate; an undecidable gate rejects the input
    ExactReal ee = ExactReal::stream([](long p) {
        long work = p + 8;
        while (true) {
            QInterval v = e_to_e_cover(work);
            if (v.width() <= pow2_inv(p)) return v;
            work *= 2;
        }
    });
    try {
        if (!certified_less(ee, norm)) throw ValidationError("erdos_budget requires |Y| > e^e");
    } catch (const RefinementBudgetError&) {
        throw ValidationError("cannot certify |Y| > e^e within budget");
    }
    const long prec = 160;
    QInterval t = norm.approx(128);
    // log t / loglog t is increasing for t > e^e: evaluate at the upper end,
    // numerator rounded up, denominator rounded down.
    QInterval l = log_cover(t.hi, prec);
    QInterval ll = log_cover(l.lo, prec);
    if (ll.lo <= 0) throw Error("erdos_budget: unexpected loglog sign");
    return l.hi / ll.lo;
}

} // namespace primorbit
