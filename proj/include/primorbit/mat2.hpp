#pragma once

#include <gmpxx.h>

#include <string>

#include "primorbit/exactnum.hpp"

namespace primorbit {

// Row-major 2x2 integer matrix [[a, b], [c, d]].
struct Mat2Z {
    mpz_class a, b, c, d;

    static Mat2Z identity() { return {1, 0, 0, 1}; }

    mpz_class det() const { return a * d - b * c; }
    mpz_class norm() const {
        mpz_class n = abs(a);
        mpz_class t = abs(b);
        if (t > n) n = t;
        t = abs(c);
        if (t > n) n = t;
        t = abs(d);
        if (t > n) n = t;
        return n;
    }
    bool unimodular() const { return det() == 1; }

    Mat2Z operator*(const Mat2Z& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2Z transpose() const { return {a, c, b, d}; }
    // Inverse of a determinant-1 matrix.
    Mat2Z inverse_unimodular() const { return {d, -b, -c, a}; }

    bool operator==(const Mat2Z& o) const = default;

    std::string str() const {
        return "[[" + a.get_str() + "," + b.get_str() + "],[" + c.get_str() + "," + d.get_str() +
               "]]";
    }
};

// Row-vector action X * gamma.
inline Point2 apply_row(const Point2& x, const Mat2Z& g) {
    return {x[0] * ExactReal(g.a) + x[1] * ExactReal(g.c),
            x[0] * ExactReal(g.b) + x[1] * ExactReal(g.d)};
}

inline std::pair<mpz_class, mpz_class> apply_row(const mpz_class& x1, const mpz_class& x2,
                                                 const Mat2Z& g) {
    return {x1 * g.a + x2 * g.c, x1 * g.b + x2 * g.d};
}

} // namespace primorbit
