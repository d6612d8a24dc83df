#pragma once

#include <gmpxx.h>

#include <array>
#include <compare>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "primorbit/interval.hpp"

namespace primorbit {

// Refinement policy for certified decisions (comparisons, floors, widths).
// Working precision starts at `start_bits` and doubles per step, up to
// `max_steps` doublings; a hard bit cap guards memory.  Undecidable requests
// (for example comparing two equal non-exact values) end in
// RefinementBudgetError instead of a guess.
struct RefineBudget {
    long start_bits = 32;
    int max_steps = 256;
    long max_bits = 1L << 22;
};

const RefineBudget& default_budget();

// A real number usable in certified comparisons.  Three representations:
//
//   rational        num/den, canonical, den > 0
//   quadratic surd  (a + b*sqrt(c))/d with c > 1 squarefree, b != 0, d > 0
//   stream          caller-supplied refiner: prec -> interval of width
//                   <= 2^-prec containing the value
//
// Rational and surd values are exact: comparisons between them are decided
// by integer arithmetic.  Streams are refined on demand; refinement state is
// cached and internally synchronized, everything else is immutable.
class ExactReal {
public:
    struct Surd {
        mpz_class a, b, c, d;
    };
    using Refiner = std::function<QInterval(long prec_bits)>;

    ExactReal() : ExactReal(mpq_class(0)) {}
    ExactReal(long v) : ExactReal(mpq_class(v)) {}
    ExactReal(const mpz_class& v) : ExactReal(mpq_class(v)) {}
    ExactReal(mpq_class v);

    // (a + b*sqrt(c))/d, normalized (square part of c extracted, gcd reduced,
    // degenerates to a rational when the sqrt vanishes).
    static ExactReal surd(const mpz_class& a, const mpz_class& b, const mpz_class& c,
                          const mpz_class& d);
    static ExactReal sqrt_of(const mpz_class& n);
    static ExactReal stream(Refiner refine);

    // Grammar: "num/den", decimal "digits[.digits]", or a surd
    // "(a+b*sqrt(c))/d" with optional parts ("sqrt(2)", "-sqrt(5)/2",
    // "1+2*sqrt(3)", "(1+sqrt(5))/2", ...).
    static ExactReal parse(std::string_view text);

    bool is_rational() const;
    bool is_surd() const;
    bool is_exact() const { return !is_stream(); }
    bool is_stream() const;
    const mpq_class& rational() const; // requires is_rational()
    const Surd& surd_parts() const;    // requires is_surd()

    ExactReal operator-() const;
    ExactReal abs() const;
    friend ExactReal operator+(const ExactReal&, const ExactReal&);
    friend ExactReal operator-(const ExactReal&, const ExactReal&);
    friend ExactReal operator*(const ExactReal&, const ExactReal&);
    friend ExactReal operator/(const ExactReal&, const ExactReal&);
    ExactReal reciprocal() const;

    // Certified; throws RefinementBudgetError when undecidable in budget.
    std::strong_ordering compare(const ExactReal& other,
                                 const RefineBudget& budget = default_budget()) const;
    int sign(const RefineBudget& budget = default_budget()) const;
    mpz_class floor(const RefineBudget& budget = default_budget()) const;
    mpz_class ceil(const RefineBudget& budget = default_budget()) const;
    bool is_zero() const; // exact forms only; streams report false

    // Interval of width <= 2^-prec_bits containing the value.
    QInterval approx(long prec_bits) const;
    double to_double() const;

    std::string str() const;

private:
    struct StreamRep;
    // 0 = rational, 1 = surd, 2 = stream
    int kind_ = 0;
    mpq_class rat_;
    std::shared_ptr<const Surd> surd_;
    std::shared_ptr<StreamRep> stream_;

    static ExactReal from_surd_parts(mpz_class a, mpz_class b, mpz_class c, mpz_class d);
    friend ExactReal surd_add(const ExactReal&, const ExactReal&);
    friend ExactReal surd_mul(const ExactReal&, const ExactReal&);
};

using Point2 = std::array<ExactReal, 2>;

bool certified_less(const ExactReal& a, const ExactReal& b,
                    const RefineBudget& budget = default_budget());
bool certified_le(const ExactReal& a, const ExactReal& b,
                  const RefineBudget& budget = default_budget());
ExactReal max_exact(const ExactReal& a, const ExactReal& b);
// Sup norm of a plane point.
ExactReal sup_norm(const Point2& p);

// ---- Continued fractions -----------------------------------------------

// Partial quotients a_0, a_1, ... with the convergent tables p_k, q_k
// maintained by p_k = a_k p_{k-1} + p_{k-2}, q_k = a_k q_{k-1} + q_{k-2}.
// Convention a_0 = floor(x), so a_k >= 1 for k >= 1 and
// p_k q_{k-1} - p_{k-1} q_k = (-1)^{k-1}.
struct ContinuedFraction {
    std::vector<mpz_class> quotients;
    std::vector<mpz_class> p, q;
    bool terminated = false; // rational input: expansion ended early

    std::size_t size() const { return quotients.size(); }
    std::pair<mpz_class, mpz_class> convergent(std::size_t k) const { return {p.at(k), q.at(k)}; }
};

// First n_terms quotients of x (fewer if x is rational and the Euclidean
// expansion terminates).
ContinuedFraction cf_expand(const ExactReal& x, int n_terms,
                            const RefineBudget& budget = default_budget());

std::vector<std::pair<mpz_class, mpz_class>> convergents(const ContinuedFraction& cf);

// Certified interval around eps_k = q_k x - p_k.
struct Epsilon {
    long index = 0;
    QInterval value;
};

Epsilon epsilon(const ExactReal& x, const ContinuedFraction& cf, long k,
                const mpq_class& tol = pow2_inv(64));

} // namespace primorbit
