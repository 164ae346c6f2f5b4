#pragma once

#include "dioph/bestapprox/bestapprox.hpp"
#include "dioph/numerics/types.hpp"
#include "dioph/numerics/weights.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dioph {

// R(alpha): the smallest power of two with c = 1 - 2 alpha - 3 n R^-delta_r >= 1/10.
Integer cantor_ratio(const Rational& alpha, std::size_t n, const Rational& delta_r);
CertReal cantor_constant(const Rational& alpha, const Integer& R, std::size_t n, const Rational& delta_r);

enum class Selector { first, random };

struct CantorOptions {
    Selector selector = Selector::first;
    std::uint64_t seed = 0;
    // Ratio the sequence must satisfy; R(alpha) when unset.
    std::optional<Integer> R;
    std::uint64_t budget = 10'000'000;  // children examined over the whole descent
};

struct CantorLevel {
    int k = 0;                  // the children are translates of Pi(Y_k)
    CertReal Y;                 // |y_k|_r
    std::vector<Rational> side; // box side lengths, <= Y_k^-r_i
    RatVector corner;           // lower corner of the chosen box
    Integer children;           // Delta_k
    Integer survivors;          // children missing Z_{k-1, alpha}; all children at k = 1
    CertReal survivor_bound;    // c Y_{k-1}^-1 Y_k
    CertReal children_bound;    // (1 - n R^-delta_r) Y_{k-1}^-1 Y_k
    bool survivors_ok = true;   // survivors >= floor(survivor_bound)
    bool children_ok = true;    // children >= floor(children_bound)
};

struct CantorState {
    Rational alpha;
    Integer R;
    CertReal c;
    std::size_t depth = 0;
    std::vector<CantorLevel> levels;  // k = 1 .. depth + 1
    RatVector theta;                  // lower corner of the last box
    // dist(<y_j, theta>, Z) for j = 1 .. depth, all >= alpha
    std::vector<Rational> distances;
    bool constraints_ok = false;
};

// Nested boxes for y_1, ..., y_{depth+1}; theta avoids the alpha-neighbourhoods of
// <y_j, .> in Z for j <= depth. Throws InvalidArgument on a violated precondition and
// Error if a level has no survivor.
CantorState cantor_descend(const std::vector<RatVector>& ys, const Rational& alpha, const WeightVector& r,
                           std::size_t depth, const CantorOptions& opts = {});

// (1/R) (alpha^2 / (4 m n))^(1/delta)
CertReal epsilon_from_alpha(const Rational& alpha, const Integer& R, std::size_t m, std::size_t n,
                            const Rational& delta);

// Indices i_1 < i_2 < ... into the sequence with Y_{i_(k+1)} >= R Y_{i_k} and
// Y_{i_k + 1} >= Y_{i_(k+1)} / R, starting at the first entry; stops when no index fits.
std::vector<std::size_t> growth_subsequence(const BestApproxSequence& seq, const Integer& R);

struct WindowReport {
    Rational check_bound;
    std::uint64_t checked = 0;     // pairs (p, q) with 0 < |p|_s <= check_bound, q closest
    std::uint64_t violations = 0;  // |p|_s |tA p - q - theta|_r < epsilon
    std::optional<IntVector> first_violation;
    double min_product = 0;
    IntVector argmin;
    bool pass() const { return violations == 0; }
};

// Exhaustive check of |p|_s |tA p - q - theta|_r >= epsilon over 0 < |p|_s <= check_bound.
WindowReport window_check(const TargetMatrix& A, const WeightVector& s, const WeightVector& r,
                          const CertVector& theta, const CertReal& epsilon, const Rational& check_bound);

struct BadOptions {
    CantorOptions cantor;
    std::int64_t rank_height = 100;
    std::uint64_t budget = kDefaultEnumerationBudget;
};

struct BadCertificate {
    RatVector theta;
    std::size_t depth = 0;
    Rational alpha;
    Integer R;
    CertReal epsilon;
    std::vector<std::size_t> subsequence;  // indices into the best-approximation sequence
    std::vector<IntVector> ys;             // q at those indices
    CantorState cantor;
    WindowReport window;
    std::string caveat;
};

// Best approximations of A, a subsequence growing by R(alpha), a Cantor point for it,
// and the finite window check with epsilon from alpha. Throws DegenerateRank when
// tA Z^m + Z^n visibly has rank below m + n.
BadCertificate bad_certificate(const TargetMatrix& A, const WeightVector& s, const WeightVector& r,
                               const Rational& alpha, std::size_t depth, const Rational& check_bound,
                               const BadOptions& opts = {});

struct BorelCantelliLevel {
    std::size_t k = 0;
    double Y = 0;
    double measure_bound = 0;  // 2 n Y_k^-eta
    std::size_t hits = 0;      // samples in S_k
    double frequency = 0;
};

struct BorelCantelliReport {
    Rational eta;
    std::vector<BorelCantelliLevel> levels;
    double bound_sum = 0;
    std::vector<std::size_t> memberships;  // per sample, number of k with theta in S_k
    // Samples in no S_k over the second half of the computed levels.
    double tail_free_fraction = 0;
    // Levels whose frequency exceeds measure_bound by more than 3 binomial standard deviations.
    std::size_t levels_over_bound = 0;
};

// S_k = {theta in [0,1]^n : dist(<theta, q_k>, Z) < Y_k^-eta}, eta = delta epsilon / 2, over
// the best approximations q_k of A with |q_k|_r <= N_bound.
BorelCantelliReport borel_cantelli_experiment(const TargetMatrix& A, const WeightVector& s, const WeightVector& r,
                                              const Rational& epsilon, std::size_t sample_count, std::uint64_t seed,
                                              const Rational& N_bound);
BorelCantelliReport borel_cantelli_experiment(const BestApproxSequence& seq, const WeightVector& s,
                                              const WeightVector& r, const Rational& epsilon,
                                              const std::vector<RatVector>& thetas);

}  // namespace dioph
