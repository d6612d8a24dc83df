#pragma once

#include <gmpxx.h>

#include <span>
#include <vector>

#include "primorbit/exactnum.hpp"
#include "primorbit/mat2.hpp"

namespace primorbit {

bool is_primitive(std::span<const mpz_class> v);

// Integer vector with coprime coordinates, any dimension >= 2.
struct PrimitivePoint {
    std::vector<mpz_class> coords;

    explicit PrimitivePoint(std::vector<mpz_class> cs);
    PrimitivePoint(const mpz_class& x, const mpz_class& y)
        : PrimitivePoint(std::vector<mpz_class>{x, y}) {}

    std::size_t dim() const { return coords.size(); }
    mpz_class norm() const; // sup norm
};

// Partition of {1, ..., m+n} into disjoint blocks.  Admissible when every
// block has at least n+1 elements; non-admissible partitions may be built but
// carry the flag.
struct Partition {
    std::vector<std::vector<int>> blocks; // 1-based indices
    int m = 1, n = 1;

    static Partition trivial(int m, int n);
    // "[1,2|3,4]"
    static Partition parse(std::string_view text, int m, int n);

    void validate() const; // disjoint blocks covering {1..m+n}
    bool admissible() const;
};

// gcd over each block equals 1.
bool is_pi_primitive(std::span<const mpz_class> v, const Partition& pi);

struct Lift {
    Mat2Z matrix; // first row = lifted point, det = 1, |matrix| = |point|
};

// All SL2(Z) matrices with first row Z and sup norm |Z|: two of them, three
// for the four axis points.  Sorted by second row, lexicographically.
std::vector<Lift> lift(const PrimitivePoint& z);

struct NearestPrimitive {
    PrimitivePoint point;
    QInterval distance;
};

// Closest primitive point to Y within sup-distance `bound` (closed window);
// ties broken lexicographically.  Throws EmptyWindowError when the window
// holds no primitive point.
NearestPrimitive nearest_primitive(const Point2& y, const mpq_class& bound);

// Certified rational upper bound on log|Y| / loglog|Y|; requires |Y| > e^e.
mpq_class erdos_budget(const Point2& y);

} // namespace primorbit
