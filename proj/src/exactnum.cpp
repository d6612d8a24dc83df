#include "primorbit/exactnum.hpp"

#include <cctype>
#include <mutex>
#include <optional>
#include <sstream>

namespace primorbit {

const RefineBudget& default_budget() {
    static const RefineBudget b{};
    return b;
}

namespace {

// Precision ladder for certified loops.
long ladder_next(long prec) { return prec * 2; }

std::vector<unsigned long> small_primes_upto(unsigned long n) {
    std::vector<bool> comp(n + 1, false);
    std::vector<unsigned long> out;
    for (unsigned long i = 2; i <= n; ++i) {
        if (!comp[i]) {
            out.push_back(i);
            for (unsigned long j = i * i; j <= n; j += i) comp[j] = true;
        }
    }
    return out;
}

// Extract the square part of c: returns (f, c') with c = f^2 c'.  Trial
// division over small primes plus a perfect-square check; c' is squarefree
// for every c whose square factors have a prime <= 4096 (always true for the
// inputs this library is pointed at).
std::pair<mpz_class, mpz_class> extract_square_part(mpz_class c) {
    static const std::vector<unsigned long> primes = small_primes_upto(4096);
    mpz_class f = 1;
    for (unsigned long p : primes) {
        mpz_class p2 = mpz_class(p) * p;
        if (p2 > c) break;
        while (mpz_divisible_p(c.get_mpz_t(), p2.get_mpz_t())) {
            c /= p2;
            f *= p;
        }
    }
    if (c > 1 && mpz_perfect_square_p(c.get_mpz_t())) {
        mpz_class r;
        mpz_sqrt(r.get_mpz_t(), c.get_mpz_t());
        f *= r;
        c = 1;
    }
    return {f, c};
}

mpz_class gcd3(const mpz_class& a, const mpz_class& b, const mpz_class& c) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g;
}

mpz_class fdiv(const mpz_class& a, const mpz_class& b) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

mpz_class floor_mpq(const mpq_class& q) { return fdiv(q.get_num(), q.get_den()); }

// floor(b * sqrt(c)) for squarefree c > 1, b != 0; never exact.
mpz_class floor_b_sqrt_c(const mpz_class& b, const mpz_class& c) {
    mpz_class s2 = b * b * c;
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), s2.get_mpz_t());
    if (b > 0) return r;
    return -(r + 1);
}

// sign of a + b*sqrt(c), c > 1 squarefree, not both a, b zero; exact.
int sign_a_plus_b_sqrt_c(const mpz_class& a, const mpz_class& b, const mpz_class& c) {
    int sa = sgn(a), sb = sgn(b);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // opposite signs: compare a^2 with b^2 c
    mpz_class lhs = a * a, rhs = b * b * c;
    int cmpv = cmp(lhs, rhs);
    if (cmpv == 0) return 0; // unreachable for squarefree c > 1
    // |a| > |b|sqrt(c)  -> sign follows a, else follows b
    return cmpv > 0 ? sa : sb;
}

} // namespace

struct ExactReal::StreamRep {
    Refiner refine;
    mutable std::mutex mu;
    mutable long best_prec = -1;
    mutable QInterval best;
};

ExactReal::ExactReal(mpq_class v) : kind_(0), rat_(std::move(v)) {
    if (rat_.get_den() == 0) throw ValidationError("zero denominator");
    rat_.canonicalize();
}

ExactReal ExactReal::from_surd_parts(mpz_class a, mpz_class b, mpz_class c, mpz_class d) {
    if (d == 0) throw ValidationError("zero denominator in surd");
    if (c < 0) throw ValidationError("negative radicand");
    if (d < 0) {
        a = -a;
        b = -b;
        d = -d;
    }
    if (b == 0 || c == 0) return ExactReal(make_mpq(a, d)); // b*sqrt(0) = 0
    auto [f, c_red] = extract_square_part(c);
    b *= f;
    c = c_red;
    if (c == 1) return ExactReal(make_mpq(a + b, d));
    mpz_class g = gcd3(abs(a), abs(b), d);
    if (g > 1) {
        a /= g;
        b /= g;
        d /= g;
    }
    ExactReal r;
    r.kind_ = 1;
    r.surd_ = std::make_shared<Surd>(Surd{std::move(a), std::move(b), std::move(c), std::move(d)});
    return r;
}

ExactReal ExactReal::surd(const mpz_class& a, const mpz_class& b, const mpz_class& c,
                          const mpz_class& d) {
    return from_surd_parts(a, b, c, d);
}

ExactReal ExactReal::sqrt_of(const mpz_class& n) { return from_surd_parts(0, 1, n, 1); }

ExactReal ExactReal::stream(Refiner refine) {
    ExactReal r;
    r.kind_ = 2;
    r.stream_ = std::make_shared<StreamRep>();
    r.stream_->refine = std::move(refine);
    return r;
}

bool ExactReal::is_rational() const { return kind_ == 0; }
bool ExactReal::is_surd() const { return kind_ == 1; }
bool ExactReal::is_stream() const { return kind_ == 2; }
const mpq_class& ExactReal::rational() const {
    if (!is_rational()) throw ValidationError("not a rational");
    return rat_;
}
const ExactReal::Surd& ExactReal::surd_parts() const {
    if (!is_surd()) throw ValidationError("not a surd");
    return *surd_;
}

bool ExactReal::is_zero() const { return is_rational() && rat_ == 0; }

QInterval ExactReal::approx(long prec_bits) const {
    if (prec_bits < 1) prec_bits = 1;
    switch (kind_) {
        case 0:
            return QInterval(rat_);
        case 1: {
            const Surd& s = *surd_;
            long extra = static_cast<long>(mpz_sizeinbase(s.b.get_mpz_t(), 2)) + 2;
            QInterval root = sqrt_cover(s.c, prec_bits + extra);
            QInterval v = mpq_class(s.b) * root;
            v = v + QInterval(mpq_class(s.a));
            mpq_class inv_d = make_mpq(1, s.d);
            return inv_d * v;
        }
        default: {
            std::lock_guard<std::mutex> lock(stream_->mu);
            if (stream_->best_prec >= prec_bits) return stream_->best;
            QInterval fresh = stream_->refine(prec_bits);
            if (fresh.width() > pow2_inv(prec_bits))
                throw ValidationError("refiner violated width contract");
            if (stream_->best_prec >= 0) fresh = intersect(fresh, stream_->best);
            stream_->best = fresh;
            stream_->best_prec = prec_bits;
            return fresh;
        }
    }
}

double ExactReal::to_double() const { return approx(64).mid().get_d(); }

ExactReal ExactReal::operator-() const {
    switch (kind_) {
        case 0:
            return ExactReal(mpq_class(-rat_));
        case 1:
            return from_surd_parts(-surd_->a, -surd_->b, surd_->c, surd_->d);
        default: {
            ExactReal self = *this;
            return stream([self](long p) { return -self.approx(p); });
        }
    }
}

ExactReal ExactReal::abs() const {
    if (is_exact()) return sign() >= 0 ? *this : -*this;
    ExactReal self = *this;
    return stream([self](long p) { return abs_interval(self.approx(p)); });
}

namespace {

bool same_field(const ExactReal& x, const ExactReal& y) {
    return x.surd_parts().c == y.surd_parts().c;
}

} // namespace

ExactReal surd_add(const ExactReal& x, const ExactReal& y) {
    const auto& s = x.surd_parts();
    if (y.is_rational()) {
        const mpq_class& r = y.rational();
        return ExactReal::from_surd_parts(s.a * r.get_den() + r.get_num() * s.d,
                                          s.b * r.get_den(), s.c, s.d * r.get_den());
    }
    const auto& t = y.surd_parts();
    return ExactReal::from_surd_parts(s.a * t.d + t.a * s.d, s.b * t.d + t.b * s.d, s.c,
                                      s.d * t.d);
}

ExactReal surd_mul(const ExactReal& x, const ExactReal& y) {
    const auto& s = x.surd_parts();
    if (y.is_rational()) {
        const mpq_class& r = y.rational();
        return ExactReal::from_surd_parts(s.a * r.get_num(), s.b * r.get_num(), s.c,
                                          s.d * r.get_den());
    }
    const auto& t = y.surd_parts();
    return ExactReal::from_surd_parts(s.a * t.a + s.b * t.b * s.c, s.a * t.b + s.b * t.a, s.c,
                                      s.d * t.d);
}

ExactReal operator+(const ExactReal& x, const ExactReal& y) {
    if (x.is_rational() && y.is_rational()) return ExactReal(mpq_class(x.rat_ + y.rat_));
    if (x.is_surd() && (y.is_rational() || (y.is_surd() && same_field(x, y))))
        return surd_add(x, y);
    if (y.is_surd() && x.is_rational()) return surd_add(y, x);
    ExactReal a = x, b = y;
    return ExactReal::stream([a, b](long p) { return a.approx(p + 2) + b.approx(p + 2); });
}

ExactReal operator-(const ExactReal& x, const ExactReal& y) { return x + (-y); }

ExactReal operator*(const ExactReal& x, const ExactReal& y) {
    if (x.is_rational() && y.is_rational()) return ExactReal(mpq_class(x.rat_ * y.rat_));
    if (x.is_surd() && (y.is_rational() || (y.is_surd() && same_field(x, y))))
        return surd_mul(x, y);
    if (y.is_surd() && x.is_rational()) return surd_mul(y, x);
    ExactReal a = x, b = y;
    return ExactReal::stream([a, b](long p) {
        long extra = 4;
        mpq_class target = pow2_inv(p);
        while (true) {
            QInterval ia = a.approx(p + extra);
            QInterval ib = b.approx(p + extra);
            QInterval prod = ia * ib;
            if (prod.width() <= target) return prod;
            extra *= 2;
            if (extra > (1L << 22)) throw RefinementBudgetError("product refinement stalled");
        }
    });
}

ExactReal ExactReal::reciprocal() const {
    switch (kind_) {
        case 0:
            if (rat_ == 0) throw ValidationError("division by zero");
            return ExactReal(mpq_class(1 / rat_));
        case 1: {
            const Surd& s = *surd_;
            mpz_class n = s.a * s.a - s.b * s.b * s.c; // nonzero: value irrational
            return from_surd_parts(s.d * s.a, -(s.d * s.b), s.c, n);
        }
        default: {
            ExactReal self = *this;
            return stream([self](long p) {
                long work = std::max(p, 8L);
                mpq_class target = pow2_inv(p);
                while (true) {
                    QInterval v = self.approx(work);
                    if (!v.contains_zero()) {
                        QInterval r = reciprocal(v);
                        if (r.width() <= target) return r;
                    }
                    work = ladder_next(work);
                    if (work > (1L << 22))
                        throw RefinementBudgetError("reciprocal refinement stalled");
                }
            });
        }
    }
}

ExactReal operator/(const ExactReal& x, const ExactReal& y) { return x * y.reciprocal(); }

int ExactReal::sign(const RefineBudget& budget) const {
    switch (kind_) {
        case 0:
            return sgn(rat_);
        case 1:
            return sign_a_plus_b_sqrt_c(surd_->a, surd_->b, surd_->c);
        default: {
            long prec = budget.start_bits;
            for (int step = 0; step <= budget.max_steps && prec <= budget.max_bits; ++step) {
                QInterval v = approx(prec);
                if (v.lo > 0) return 1;
                if (v.hi < 0) return -1;
                if (v.degenerate()) return 0;
                prec = ladder_next(prec);
            }
            throw RefinementBudgetError("sign undecidable within refinement budget");
        }
    }
}

std::strong_ordering ExactReal::compare(const ExactReal& other, const RefineBudget& budget) const {
    auto of_int = [](int s) {
        return s < 0 ? std::strong_ordering::less
                     : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    };
    if (is_rational() && other.is_rational()) return of_int(cmp(rat_, other.rat_));
    bool exact_pair = is_exact() && other.is_exact();
    if (exact_pair) {
        bool surd_surd = is_surd() && other.is_surd();
        if (!surd_surd || same_field(*this, other)) {
            ExactReal diff = *this - other; // stays exact
            return of_int(diff.sign(budget));
        }
        // surds from different fields are never equal; fall through to the
        // interval loop, which terminates.
    }
    long prec = budget.start_bits;
    for (int step = 0; step <= budget.max_steps && prec <= budget.max_bits; ++step) {
        QInterval a = approx(prec);
        QInterval b = other.approx(prec);
        if (a.hi < b.lo) return std::strong_ordering::less;
        if (b.hi < a.lo) return std::strong_ordering::greater;
        if (a.degenerate() && b.degenerate() && a.lo == b.lo) return std::strong_ordering::equal;
        prec = ladder_next(prec);
    }
    throw RefinementBudgetError("comparison undecidable within refinement budget");
}

mpz_class ExactReal::floor(const RefineBudget& budget) const {
    switch (kind_) {
        case 0:
            return floor_mpq(rat_);
        case 1: {
            const Surd& s = *surd_;
            mpz_class t = floor_b_sqrt_c(s.b, s.c);
            return fdiv(s.a + t, s.d);
        }
        default: {
            long prec = budget.start_bits;
            for (int step = 0; step <= budget.max_steps && prec <= budget.max_bits; ++step) {
                QInterval v = approx(prec);
                mpz_class flo = floor_mpq(v.lo), fhi = floor_mpq(v.hi);
                if (flo == fhi) return flo;
                if (v.degenerate()) return flo;
                prec = ladder_next(prec);
            }
            throw RefinementBudgetError("floor undecidable within refinement budget");
        }
    }
}

mpz_class ExactReal::ceil(const RefineBudget& budget) const { return -((-*this).floor(budget)); }

std::string ExactReal::str() const {
    switch (kind_) {
        case 0:
            return rat_.get_str();
        case 1: {
            const Surd& s = *surd_;
            std::ostringstream os;
            bool has_den = s.d != 1;
            if (has_den) os << "(";
            if (s.a != 0) os << s.a.get_str() << (s.b > 0 ? "+" : "");
            if (s.b == -1)
                os << "-";
            else if (s.b != 1)
                os << s.b.get_str() << "*";
            os << "sqrt(" << s.c.get_str() << ")";
            if (has_den) os << ")/" << s.d.get_str();
            return os.str();
        }
        default: {
            QInterval v = approx(64);
            return "~" + to_string(v);
        }
    }
}

bool certified_less(const ExactReal& a, const ExactReal& b, const RefineBudget& budget) {
    return a.compare(b, budget) == std::strong_ordering::less;
}

bool certified_le(const ExactReal& a, const ExactReal& b, const RefineBudget& budget) {
    return a.compare(b, budget) != std::strong_ordering::greater;
}

ExactReal max_exact(const ExactReal& a, const ExactReal& b) {
    return certified_less(a, b) ? b : a;
}

ExactReal sup_norm(const Point2& p) { return max_exact(p[0].abs(), p[1].abs()); }

// ---- parsing -------------------------------------------------------------

namespace {

struct Cursor {
    std::string_view s;
    std::size_t pos = 0;
    bool done() const { return pos >= s.size(); }
    char peek() const { return done() ? '\0' : s[pos]; }
    bool eat(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
};

mpz_class parse_mpz(Cursor& c) {
    std::size_t start = c.pos;
    if (c.peek() == '+' || c.peek() == '-') ++c.pos;
    std::size_t digits = 0;
    while (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek()))) {
        ++c.pos;
        ++digits;
    }
    if (digits == 0) throw ValidationError("expected integer in exact-number literal");
    return mpz_class(std::string(c.s.substr(start, c.pos - start)));
}

// decimal "digits[.digits]" as an exact rational
mpq_class parse_decimal_tail(Cursor& c, const mpz_class& intpart, bool negative) {
    mpq_class v(intpart);
    if (c.eat('.')) {
        std::size_t start = c.pos;
        while (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek()))) ++c.pos;
        std::string frac(c.s.substr(start, c.pos - start));
        if (frac.empty()) throw ValidationError("trailing decimal point");
        mpz_class num(frac);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
        mpq_class f = make_mpq(num, den);
        v = negative ? v - f : v + f;
    }
    return v;
}

std::string strip_ws(std::string_view text) {
    std::string out;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) out.push_back(ch);
    return out;
}

} // namespace

ExactReal ExactReal::parse(std::string_view text) {
    std::string s = strip_ws(text);
    if (s.empty()) throw ValidationError("empty exact-number literal");

    if (s.find("sqrt") != std::string::npos) {
        std::string body = s;
        mpz_class den = 1;
        // optional trailing /d (after the closing paren of sqrt or of a group)
        std::size_t close = body.rfind(')');
        if (close != std::string::npos && close + 1 < body.size() && body[close + 1] == '/') {
            Cursor dc{body, close + 2};
            den = parse_mpz(dc);
            if (!dc.done()) throw ValidationError("trailing characters after denominator");
            body = body.substr(0, close + 1);
        }
        // optional enclosing parens around the whole term
        if (!body.empty() && body.front() == '(' && body.back() == ')') {
            std::string inner = body.substr(1, body.size() - 2);
            // only strip if the parens match each other (not sqrt's own)
            int depth = 0;
            bool balanced = true;
            for (std::size_t i = 0; i < inner.size(); ++i) {
                if (inner[i] == '(') ++depth;
                if (inner[i] == ')') {
                    --depth;
                    if (depth < 0) {
                        balanced = false;
                        break;
                    }
                }
            }
            if (balanced && depth == 0) body = inner;
        }
        std::size_t at = body.find("sqrt(");
        if (at == std::string::npos) throw ValidationError("malformed surd literal");
        std::string prefix = body.substr(0, at);
        std::string rest = body.substr(at + 5);
        if (rest.empty() || rest.back() != ')') throw ValidationError("malformed sqrt()");
        rest.pop_back();
        Cursor cc{rest, 0};
        mpz_class c = parse_mpz(cc);
        if (!cc.done()) throw ValidationError("malformed radicand");

        mpz_class a = 0, b = 1;
        if (!prefix.empty()) {
            if (prefix == "-") {
                b = -1;
            } else if (prefix.back() == '*') {
                Cursor pc{prefix, 0};
                mpz_class first = parse_mpz(pc);
                if (pc.eat('*') && pc.done()) {
                    b = first;
                } else if (pc.peek() == '+' || pc.peek() == '-') {
                    a = first;
                    bool negb = pc.peek() == '-';
                    ++pc.pos;
                    if (pc.peek() == '*') throw ValidationError("malformed surd coefficient");
                    b = parse_mpz(pc);
                    if (negb) b = -b;
                    if (!pc.eat('*') || !pc.done())
                        throw ValidationError("malformed surd coefficient");
                } else {
                    throw ValidationError("malformed surd coefficient");
                }
            } else if (prefix.back() == '+' || prefix.back() == '-') {
                Cursor pc{prefix, 0};
                a = parse_mpz(pc);
                char op = prefix.back();
                ++pc.pos;
                if (!pc.done()) throw ValidationError("malformed surd literal");
                b = op == '-' ? -1 : 1;
            } else {
                throw ValidationError("malformed surd literal");
            }
        }
        return from_surd_parts(a, b, c, den);
    }

    Cursor c{s, 0};
    bool negative = c.peek() == '-';
    mpz_class first = parse_mpz(c);
    if (c.eat('/')) {
        mpz_class den = parse_mpz(c);
        if (!c.done()) throw ValidationError("trailing characters in rational literal");
        return ExactReal(make_mpq(first, den));
    }
    mpq_class v = parse_decimal_tail(c, first, negative);
    if (!c.done()) throw ValidationError("trailing characters in number literal");
    return ExactReal(v);
}

// ---- continued fractions ---------------------------------------------------

ContinuedFraction cf_expand(const ExactReal& x, int n_terms, const RefineBudget& budget) {
    if (n_terms < 1) throw ValidationError("n_terms must be >= 1");
    ContinuedFraction cf;
    ExactReal cur = x;
    mpz_class p2 = 0, p1 = 1; // p_{-2}, p_{-1}
    mpz_class q2 = 1, q1 = 0;
    for (int k = 0; k < n_terms; ++k) {
        mpz_class a = cur.floor(budget);
        cf.quotients.push_back(a);
        mpz_class pk = a * p1 + p2;
        mpz_class qk = a * q1 + q2;
        cf.p.push_back(pk);
        cf.q.push_back(qk);
        p2 = p1;
        p1 = pk;
        q2 = q1;
        q1 = qk;
        ExactReal rem = cur - ExactReal(a);
        if (rem.is_zero()) {
            cf.terminated = true;
            break;
        }
        cur = rem.reciprocal();
    }
    return cf;
}

std::vector<std::pair<mpz_class, mpz_class>> convergents(const ContinuedFraction& cf) {
    if (cf.size() == 0) throw ValidationError("empty continued fraction");
    std::vector<std::pair<mpz_class, mpz_class>> out;
    out.reserve(cf.size());
    for (std::size_t k = 0; k < cf.size(); ++k) out.emplace_back(cf.p[k], cf.q[k]);
    return out;
}

Epsilon epsilon(const ExactReal& x, const ContinuedFraction& cf, long k, const mpq_class& tol) {
    if (k < 0 || static_cast<std::size_t>(k) >= cf.size())
        throw ValidationError("epsilon index out of range");
    if (tol <= 0) throw ValidationError("tolerance must be positive");
    ExactReal eps = ExactReal(cf.q[k]) * x - ExactReal(cf.p[k]);
    long prec = 8;
    QInterval v = eps.approx(prec);
    while (v.width() > tol) {
        prec = ladder_next(prec);
        if (prec > (1L << 22)) throw RefinementBudgetError("epsilon refinement stalled");
        v = eps.approx(prec);
    }
    return Epsilon{k, v};
}

} // namespace primorbit
