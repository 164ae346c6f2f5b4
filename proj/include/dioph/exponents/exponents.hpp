#pragma once

#include "dioph/bestapprox/bestapprox.hpp"
#include "dioph/numerics/types.hpp"
#include "dioph/numerics/weights.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dioph {

// Conventions: A is m x n, q ranges over Z^n \ {0}, p over Z^m, theta lies in R^m,
// |q|_r < T and |A q - p - theta|_s < T^-w.

enum class Flavor { ordinary, uniform };
enum class Regime { weighted, multiplicative };
enum class ShiftKind { homogeneous, inhomogeneous };

struct ExponentKind {
    Flavor flavor = Flavor::ordinary;
    Regime regime = Regime::weighted;
    ShiftKind shift = ShiftKind::homogeneous;
    std::string str() const;
};

// base^exponent
struct Scale {
    Rational base;
    Rational exponent;
    CertReal value() const;
    double log() const;
    std::string str() const;
};

// Rates are dyadic with this denominator.
constexpr long kRateDenominator = 1024;

struct Witness {
    Scale T;
    IntVector q;
    IntVector p;
    // Closed form of (q, p) when they are too large to store; q and p are empty then.
    std::string symbolic;
    // error <= T^-rate, hence error < T^-w for every w < rate
    Rational rate;
    double log_error = 0;  // -inf for an exact zero
};

struct ExponentEstimate {
    ExponentKind kind;
    Rational lower_bound;  // certified at every scale of the tail
    double point_estimate = 0;
    Scale T_min, T_max;
    std::vector<Witness> witnesses;
    bool capped = false;
    double witnessed_max = 0;  // largest witnessed rate anywhere in the range
    std::size_t tail_begin = 0;  // witnesses[tail_begin..] form the tail
    std::string method;          // "sequence", "grid" or "liouville"
};

// Geometric grid T_k = 2^(k / steps_per_octave), log2_min <= k / steps_per_octave <= log2_max.
struct TGrid {
    Rational log2_min = 1;
    Rational log2_max = 16;
    int steps_per_octave = 4;
    std::vector<Rational> log2_points() const;
    double log_step() const;
};

struct EstimateOptions {
    TGrid grid;
    double cap = 50;
    // The tail is log T >= tail_fraction log T_max, and at least the last min_tail scales.
    Rational tail_fraction = Rational(1, 2);
    std::size_t min_tail = 3;
    std::uint64_t budget = kDefaultEnumerationBudget;
    int liouville_terms = 12;
};

// Best-approximation sequence for the homogeneous weighted problem: X = q, N = |q|_r,
// L = |A q - p|_s (computed on the transpose).
BestApproxSequence exponent_sequence(const TargetMatrix& A, const WeightVector& s, const WeightVector& r,
                                     const Rational& N_bound, const BestApproxOptions& opts = {});

// Sequence-driven homogeneous estimates.
ExponentEstimate estimate_ordinary(const BestApproxSequence& seq, const EstimateOptions& opts = {});
ExponentEstimate estimate_uniform(const BestApproxSequence& seq, const EstimateOptions& opts = {});

// Direct search on the grid; a 1 x 1 Liouville series with theta = 0 uses its
// truncation witnesses instead.
ExponentEstimate estimate_ordinary(const TargetMatrix& A, const CertVector& theta, const WeightVector& s,
                                   const WeightVector& r, const EstimateOptions& opts = {});
ExponentEstimate estimate_uniform(const TargetMatrix& A, const CertVector& theta, const WeightVector& s,
                                  const WeightVector& r, const EstimateOptions& opts = {});

struct EstimatePair {
    ExponentEstimate ordinary, uniform;
};

// Both flavours from one search.
EstimatePair estimate_weighted(const TargetMatrix& A, const CertVector& theta, const WeightVector& s,
                               const WeightVector& r, const EstimateOptions& opts = {});
EstimatePair estimate_weighted(const BestApproxSequence& seq, const EstimateOptions& opts = {});

// Best error found at one grid scale by some other search.
struct ScaleMinimum {
    Scale T;
    CertReal D;  // the normalized error, compared against T^-w
    IntVector q, p;
};

// Estimates from per-scale minima, ordered by T.
EstimatePair estimate_from_minima(const std::vector<ScaleMinimum>& minima, ShiftKind shift,
                                  const EstimateOptions& opts, std::string method);

// Pi_+(q) < T, Pi(A q - p - theta) < T^-w, by enumeration of the hyperbolic cross.
ExponentEstimate estimate_multiplicative(const TargetMatrix& A, const CertVector& theta, Flavor flavor,
                                         const EstimateOptions& opts = {});

// Re-evaluates one witness exactly. Symbolic witnesses are not checked here.
bool witness_holds(const Witness& w, const TargetMatrix& A, const CertVector& theta, const WeightVector& s,
                   const WeightVector& r, Regime regime = Regime::weighted);

}  // namespace dioph
