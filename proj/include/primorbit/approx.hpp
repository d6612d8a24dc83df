#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "primorbit/exactnum.hpp"
#include "primorbit/mat2.hpp"
#include "primorbit/orbit2.hpp"
#include "primorbit/primlat.hpp"

namespace primorbit {

struct RecordEntry {
    Mat2Z gamma;
    mpz_class norm;
    QInterval dist;
};

// Best-so-far staircase of (norm, distance) pairs for |X gamma - Y| over the
// searched ball: norms strictly increase, distances strictly decrease, and
// each entry is the true minimum among all |gamma| <= norm.
struct RecordSeries {
    std::vector<RecordEntry> records;
    Point2 base;   // X
    Point2 target; // Y
};

struct SearchOptions {
    int threads = 0;
    std::int64_t max_radius = 100'000;            // record-search radius budget
    std::uint64_t max_cardinality = 100'000'000;  // g-search ball-size budget
};

RecordSeries record_search(const Point2& x, const Point2& y, std::int64_t r_max,
                           const SearchOptions& opts = {});

// Same scan shared across several targets.
std::vector<RecordSeries> record_search_multi(const Point2& x, const std::vector<Point2>& ys,
                                              std::int64_t r_max, const SearchOptions& opts = {});

enum class FitMode { ordinary, uniform };

struct FitWindow {
    std::int64_t r_min = 1, r_max = 1;
};

struct ExponentEstimate {
    mpq_class mu_hat;
    FitWindow window;
    mpq_class fit_residual; // mean squared residual of the log-log fit
    int record_count = 0;
};

// Ordinary mode fits log(dist) against -log(norm) over the records in the
// window; uniform mode fits the staircase value best{|gamma| <= R} on a
// doubling R-grid.  Logs are taken base 2 with exact powers of two kept
// exact, so synthetic power data fits with zero residual.
ExponentEstimate exponent_fit(const RecordSeries& series, const FitWindow& window, FitMode mode);

struct GSearchResult {
    Mat2Z gamma;
    ExactReal delta;      // exact minimum of |S gamma - W| when data permits
    QInterval delta_cover;
};

// Exhaustive minimizer of |S gamma - W| over |gamma| <= R, ties broken by
// enumeration order.
GSearchResult g_search(const PrimitivePoint& s, const Point2& w, std::int64_t R,
                       const SearchOptions& opts = {});

struct CheckOutcome {
    std::string name;
    bool passed = false;
};

struct ConstructionTrace {
    long k = 0, j = 0;
    mpq_class radius;     // rational upper cover of the norm bound for G
    mpz_class q_k, s_j;
    Mat2Z G, gamma;
    QInterval delta, z1, z2;
    std::vector<CheckOutcome> checks;
    double ratio = 0;     // -log|X gamma - Y| / log |gamma|, from the dist upper bound

    bool all_passed() const;
};

// One step of the M_k G N_j pipeline at odd k: selects odd j with
// q_k^{1/3} <= s_j <= q_k^{1/3+eps}, frames the norm bound, finds G by
// exhaustive search, assembles gamma and certifies the inequality chain.
ConstructionTrace laurent_construct(const Point2& x, const Point2& y, long k,
                                    const mpq_class& eps, const SearchOptions& opts = {});

struct SweepResult {
    std::vector<ConstructionTrace> traces;
    bool stopped_on_budget = false;
    long last_k_tried = 0;
};

// Runs laurent_construct over odd k <= k_max, skipping k without a valid j
// and stopping at the first budget refusal.
SweepResult construct_sweep(const Point2& x, const Point2& y, const mpq_class& eps, long k_max,
                            const SearchOptions& opts = {});

enum class VwaVerdict { not_vwa_up_to_depth, flagged };

struct VwaReport {
    VwaVerdict verdict = VwaVerdict::not_vwa_up_to_depth;
    double max_ratio = 0;
    long flagged_index = -1;
    std::vector<std::pair<long, double>> ratios; // (j, log s_{j+1} / log s_j)
    mpq_class omega;
    int depth = 0;
};

// Finite-depth growth diagnostic: flags the first j where
// log s_{j+1} / log s_j exceeds omega - 1 (the very-well-approximated
// threshold for exponent omega).  Heuristic, not a proof.
VwaReport vwa_test(const ExactReal& y, const mpq_class& omega, int depth);

} // namespace primorbit
