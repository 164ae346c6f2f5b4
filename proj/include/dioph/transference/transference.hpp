#pragma once

#include "dioph/exponents/exponents.hpp"
#include "dioph/numerics/types.hpp"
#include "dioph/numerics/weights.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dioph {

// Rationals extended by +inf.
struct ExtRational {
    bool infinite = false;
    Rational value;  // meaningful only when finite

    ExtRational() = default;
    ExtRational(const Rational& v) : value(v) {}  // NOLINT(google-explicit-constructor)
    ExtRational(long v) : value(v) {}             // NOLINT(google-explicit-constructor)
    static ExtRational infinity() {
        ExtRational x;
        x.infinite = true;
        return x;
    }
    // +inf for a capped estimate, the exact binary value of the point estimate otherwise.
    static ExtRational from_estimate(const ExponentEstimate& e);

    double approx() const;
    std::string str() const;  // "inf" or the rational

    friend bool operator==(const ExtRational& a, const ExtRational& b) {
        return a.infinite == b.infinite && (a.infinite || a.value == b.value);
    }
    friend bool operator<(const ExtRational& a, const ExtRational& b) {
        if (a.infinite) return false;
        return b.infinite || a.value < b.value;
    }
    friend bool operator<=(const ExtRational& a, const ExtRational& b) { return !(b < a); }
};

// 1/x with 1/inf = 0; x must be positive.
ExtRational reciprocal(const ExtRational& x);

// omega is the exponent of A (m x n, weights s on the error, r on q).
struct DysonBoundInput {
    std::size_t m = 1, n = 1;
    WeightVector s, r;
    ExtRational omega = 1;
    // The formula is still evaluated below 1.
    bool below_dirichlet() const { return !omega.infinite && omega.value < 1; }
};

enum class Direction {
    forward,   // lower bound for the transposed exponent given omega of A
    backward,  // lower bound for the exponent of A given omega of the transpose
};

// Weighted Dyson bound. Backward is the same rational function with the roles of
// (m, s) and (n, r) exchanged. Throws Error on a nonpositive denominator.
ExtRational dyson_weighted_bound(const DysonBoundInput& input, Direction direction);

// (n w + m - 1) / ((n - 1) w + m)
ExtRational dyson_classical_bound(std::size_t m, std::size_t n, const ExtRational& omega);

enum class Verdict { consistent, violated, inconclusive };
std::string to_string(Verdict v);

struct LabelledEstimate {
    std::string label;
    ExponentEstimate estimate;
};

// One inequality "measured >= bound - slack".
struct BoundCheck {
    std::string name;
    ExtRational bound;
    double measured = 0;  // +inf when the estimate is capped
    double slack = 0;
    bool holds = false;
};

struct SampleResult {
    std::size_t index = 0;
    RatVector theta;
    double lower_bound = 0;
    double point_estimate = 0;
    bool capped = false;
    bool lower_ok = false;  // lower_bound >= bound - slack
    bool within = false;    // |point_estimate - bound| <= tolerance
    std::string note;       // set when the sample could not be estimated
};

struct TransferReport {
    std::string instance;
    ExtRational bound;
    std::vector<LabelledEstimate> estimates;
    std::vector<BoundCheck> checks;
    double slack = 0;
    double tolerance = 0;
    Verdict verdict = Verdict::inconclusive;
    std::vector<SampleResult> samples;
    double fraction_within = 0;
    std::string note;
};

struct TransferOptions {
    EstimateOptions estimate;
    // Added to the one-grid-step slack; replaces the whole slack when fixed_slack is set.
    double truncation_slack = 0.05;
    std::optional<double> fixed_slack;
    double tolerance = 0.1;
    // Search range for the sequence-driven uniform exponent in bl_validate (0: grid T_max).
    Rational sequence_bound = 0;
};

// Slack for comparisons involving e: one grid step in log T at the start of the tail,
// scaled by (1 + estimate), plus the truncation allowance.
double comparison_slack(const ExponentEstimate& e, const TransferOptions& opts);

// Estimates both exponents (ordinary and uniform) of A and of its transpose and
// compares them with both Dyson bounds.
TransferReport validate_dyson(const TargetMatrix& A, const WeightVector& s, const WeightVector& r,
                              const TransferOptions& opts = {}, std::string instance = "");

ExtRational bl_bound(const ExtRational& omega_hat);

// Fills rep.samples, fraction_within and the verdict by estimating each theta and
// comparing with rep.bound: lower_ok is lower_bound >= bound - slack, within is
// |point_estimate - bound| <= tolerance.
void evaluate_samples(TransferReport& rep, const std::vector<RatVector>& thetas,
                      const std::function<ExponentEstimate(const RatVector&)>& estimate, const TransferOptions& opts);

// Uniform exponent of A from its best-approximation sequence, then the ordinary
// exponent of (tA, theta) with weights (r, s) on the grid for every theta.
TransferReport bl_validate(const TargetMatrix& A, const WeightVector& s, const WeightVector& r,
                           const std::vector<RatVector>& thetas, const TransferOptions& opts = {},
                           std::string instance = "");

// coeff * T^-exponent
struct PowerLaw {
    Rational coeff = 1;
    Rational exponent = 1;
    CertReal operator()(const CertReal& T) const;
    std::string str() const;
};

enum class ScaleStatus { holds, fails, undecided };

struct PsiPhiScale {
    Scale T;
    ScaleStatus condition = ScaleStatus::undecided;  // phi(C psi(T)^-1) > C / T
    ScaleStatus not_approximable = ScaleStatus::undecided;  // D_A(T) >= psi(T)
    double log_D = 0;
    // Per theta: the promised (p, q) at this scale, p != 0 unless p = 0 itself qualifies.
    std::vector<std::optional<IntVector>> witnesses;
    std::vector<bool> witness_beats_phi;  // error < phi(C psi(T)^-1) as well
};

struct PsiPhiReport {
    TransferReport summary;
    PowerLaw psi, phi;
    CertReal C;   // lattice constant in dimension m + n
    CertReal C1;  // C^(1 / min(delta_s, delta_r))
    std::vector<PsiPhiScale> scales;
    // The condition holds at every tail scale of the grid.
    bool condition_on_tail = false;
    std::size_t certified_scales = 0;
    std::size_t witnesses_found = 0;
    std::size_t witnesses_missing = 0;
};

// At each grid T where D_A(T) >= psi(T) is certified, every theta gets a (p, q) with
// |p|_s <= C1 / psi(T) and |tA p - q - theta|_r <= C1 / T.
PsiPhiReport psi_phi_transfer_check(const TargetMatrix& A, const WeightVector& s, const WeightVector& r,
                                    const PowerLaw& psi, const PowerLaw& phi, const std::vector<RatVector>& thetas,
                                    const TransferOptions& opts = {}, std::string instance = "");

// Direct evaluation of phi(C psi(T)^-1) > C T^-1.
ScaleStatus psi_phi_condition(const PowerLaw& psi, const PowerLaw& phi, const CertReal& C, const CertReal& T);

}  // namespace dioph
