#pragma once

#include "dioph/lattice/lattice.hpp"
#include "dioph/numerics/types.hpp"
#include "dioph/numerics/weights.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace dioph {

// Setting: X ranges over Z^m, N(X) = |X|_s and L(X) = min_p |tA X - p|_r for an m x n matrix A.

struct BestApproxEntry {
    IntVector X;
    WeightedValue Y;  // N(X)
    WeightedValue M;  // L(X)
    IntVector p_witness;
};

struct BestApproxSequence {
    std::vector<BestApproxEntry> entries;
    // Every X with N(X) <= exhausted_up_to was examined.
    Rational exhausted_up_to;
    // min L over 0 < N(X) <= 1; the sequence itself starts at the first entry.
    std::optional<WeightedValue> unit_shell_min;
    // The last entry has M = 0 (only with BestApproxOptions::zero_as_sentinel).
    bool ends_in_zero = false;
    std::uint64_t enumerated = 0;

    std::size_t size() const { return entries.size(); }
};

enum class TieBreak { lex_smallest, lex_largest };

struct BestApproxOptions {
    std::uint64_t budget = kDefaultEnumerationBudget;
    // Stop after the shell in which this many entries exist (0: run to the N bound).
    std::size_t max_entries = 0;
    // Record an exact zero of L as a final entry instead of throwing DegenerateRank.
    bool zero_as_sentinel = false;
    TieBreak tie_break = TieBreak::lex_smallest;
    // Inhomogeneous variant: L(X) = min_p |tA X - p - shift|_r over all X != 0 (no sign
    // identification). Unlike the homogeneous case, X and -X are different candidates.
    std::optional<CertVector> shift;
};

BestApproxSequence compute_best_approx(const TargetMatrix& A, const WeightVector& s, const WeightVector& r,
                                       const Rational& N_bound, const BestApproxOptions& opts = {});

// min over p in Z^n of max_j |y_j - p_j|^{1/w_j}, with the minimizing p (smaller p on half-integer ties).
struct Residual {
    CertReal value;
    IntVector p;
    std::vector<CertReal> components;  // y_j - p_j
    bool is_zero() const;
};
Residual closest_integer_residual(const CertVector& y, const WeightVector& w);

// L(X) for the transpose convention above.
Residual approximation_error(const TargetMatrix& A, const IntVector& X, const WeightVector& r);
Residual approximation_error(const TargetMatrix& A, const IntVector& X, const WeightVector& r,
                             const CertVector& shift);

enum class RankStatus { maximal, degenerate, undecided };

struct RankReport {
    RankStatus status = RankStatus::undecided;
    IntVector witness;  // x != 0 with tA x in Z^n
    IntVector p;        // tA x
    bool certified = false;
};

// Searches for x != 0, |x|_inf <= height_bound, with tA x integral.
RankReport check_rank(const TargetMatrix& A, std::int64_t height_bound,
                      std::uint64_t budget = kDefaultEnumerationBudget);

struct MinimalityReport {
    bool monotone = true;
    bool minimal = true;
    std::optional<IntVector> counterexample;
    std::uint64_t checked = 0;
    bool ok() const { return monotone && minimal; }
};

// Exhaustive re-check of the defining property below seq.exhausted_up_to.
MinimalityReport verify_minimality(const BestApproxSequence& seq, const TargetMatrix& A, const WeightVector& s,
                                   const WeightVector& r, std::uint64_t budget = kDefaultEnumerationBudget);

struct GrowthReport {
    Rational delta;
    std::int64_t U = 0;
    std::int64_t V = 0;
    std::vector<std::size_t> violations;  // i with Y_{i+V} < 2 Y_i
    std::size_t checked = 0;
    double c = 0;      // Y_i >= c gamma^i for every i
    double gamma = 0;  // least-squares growth rate of log Y_i
};

GrowthReport verify_geometric_growth(const BestApproxSequence& seq, const WeightVector& s, const WeightVector& r);

struct SubsequenceMap {
    std::vector<std::size_t> indices;  // 0-based
    bool growth_ok = true;             // Y_{phi(k+1)} >= R Y_{phi(k)}
    bool back_ok = true;               // Y_{phi(k)+1} >= Y_{phi(k+1)} / R
    bool truncated = false;            // entries remain after the last index but none qualifies
};

SubsequenceMap subsequence_extract(const std::vector<CertReal>& Y, const CertReal& R);
SubsequenceMap subsequence_extract(const BestApproxSequence& seq, const CertReal& R);

}  // namespace dioph
