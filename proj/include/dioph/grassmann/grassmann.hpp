#pragma once

#include "dioph/exponents/exponents.hpp"
#include "dioph/numerics/types.hpp"
#include "dioph/transference/transference.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dioph {

// k-subsets of {0, ..., n-1} as bit masks, in lexicographic order.
const std::vector<std::uint32_t>& subsets(int n, int k);
// Position of a k-subset mask in that order.
std::size_t subset_index(int n, std::uint32_t mask);
std::size_t binomial(int n, int k);

// Element of the k-th exterior power of R^n in the basis e_I, I lexicographic.
template <class S>
struct Multivector {
    int n = 0;
    int k = 0;
    std::vector<S> coeffs;

    static Multivector zero(int n, int k);
    static Multivector scalar(int n, const S& v);
    static Multivector vector(const std::vector<S>& v);
    static Multivector basis(int n, std::uint32_t mask);

    bool is_zero() const;
    Multivector operator+(const Multivector& o) const;
    Multivector operator-(const Multivector& o) const;
    Multivector operator-() const;
    Multivector scaled(const S& c) const;
    friend bool operator==(const Multivector& a, const Multivector& b) {
        return a.n == b.n && a.k == b.k && a.coeffs == b.coeffs;
    }
};

using RatMultivector = Multivector<Rational>;
using CertMultivector = Multivector<CertReal>;

template <class S>
Multivector<S> wedge(const Multivector<S>& u, const Multivector<S>& v);

// Euclidean inner product of coefficient vectors; equals det(<u_i, v_j>) on decomposables.
template <class S>
S mv_inner(const Multivector<S>& u, const Multivector<S>& v);
template <class S>
S mv_norm_squared(const Multivector<S>& u);
CertReal mv_norm(const RatMultivector& u);
CertReal mv_norm(const CertMultivector& u);

// det(<u_i, v_j>) for the decomposables u_1 ^ ... ^ u_t and v_1 ^ ... ^ v_t.
Rational gram_inner(const std::vector<RatVector>& u, const std::vector<RatVector>& v);

CertMultivector to_cert(const RatMultivector& u);

// R^n -> R^{n+1}: e_i -> e_{i+1}, leaving e_0 free.
template <class S>
Multivector<S> embed_shifted(const Multivector<S>& u);

// |x ^ y|^2 / (|x|^2 |y|^2) and its square root.
Rational projective_distance_squared(const RatVector& x, const RatVector& y);
CertReal projective_distance(const RatVector& x, const RatVector& y);
CertReal projective_distance(const CertVector& x, const CertVector& y);

// alpha' = (1, alpha)
struct LiftedPoint {
    CertVector alpha;
    CertVector alpha_prime;
    explicit LiftedPoint(CertVector a);
    CertMultivector as_multivector() const;
};

// A projective d-dimensional rational subspace of P^n, i.e. a (d+1)-dimensional
// subspace of Q^{n+1}, with primitive Pluecker coordinates.
struct RationalSubspace {
    int d = 0;
    std::vector<RatVector> basis;  // homogeneous coordinates, may be empty
    RatMultivector pluecker;       // coprime integers, first nonzero positive
    Integer height;                // max |pluecker coefficient|

    static RationalSubspace from_basis(const std::vector<RatVector>& basis);
    static RationalSubspace from_pluecker(const RatMultivector& X);
};

// |alpha' ^ X'| / (|alpha'| |X'|)
CertReal point_subspace_distance(const LiftedPoint& alpha, const RationalSubspace& L);

// Matrix of Z -> alpha ^ Z from grade d to grade d + 1 (C(n, d+1) x C(n, d)).
CertMatrix wedge_matrix(const CertVector& alpha, int d);

// Norm on Z and on the error in the intermediate exponents. The exponent does not
// depend on it; finite-grid estimates do, by log(constant) / log T.
enum class MultivectorNorm { euclidean, sup };

struct GrassmannOptions {
    EstimateOptions estimate;
    MultivectorNorm norm = MultivectorNorm::euclidean;
    // Desk-scale limits n <= 5, d <= 3 unless set.
    bool allow_large = false;
};

// Best |alpha ^ Z + Y + theta|^C(n,d+1) over integer Z != 0 of grade d with
// |Z|^C(n,d) <= T, per grid T; theta has C(n, d+1) coordinates (empty: zero).
EstimatePair intermediate_exponents(const CertVector& alpha, int d, const CertVector& theta,
                                    const GrassmannOptions& opts = {});
ExponentEstimate intermediate_exponent(const CertVector& alpha, int d, const CertVector& theta, Flavor flavor,
                                       const GrassmannOptions& opts = {});

struct EquivalenceReport {
    int n = 0, d = 0;
    RatMultivector Z, Y;          // X = e_0 ^ Z - Y
    RatMultivector alpha_wedge;   // alpha ^ Z + Y
    Rational lifted_sq;           // |alpha' ^ X|^2
    Rational inner_sq;            // |alpha ^ Z + Y|^2
    Rational alpha_prime_sq;      // |alpha'|^2
    Rational X_sq, Z_sq, Y_sq;
    bool decomposition_ok = false;  // e_0 ^ Z - Y reproduces X
    bool identity_ok = false;       // alpha' ^ X = -(e_0 + alpha) ^ (alpha ^ Z + Y)
    bool lower_ok = false;          // |alpha ^ Z + Y| <= |alpha' ^ X|
    bool upper_ok = false;          // |alpha' ^ X| <= |alpha'| |alpha ^ Z + Y|
    bool max_lower_ok = false;      // max(|Z|, |Y|) <= |X|
    bool max_upper_ok = false;      // |X| <= 2 max(|Z|, |Y|)
    bool ok() const {
        return decomposition_ok && identity_ok && lower_ok && upper_ok && max_lower_ok && max_upper_ok;
    }
};

// X of grade d + 1 over R^{n+1}, alpha in Q^n; all comparisons are exact.
EquivalenceReport def_equivalence_check(const RatVector& alpha, const RatMultivector& X);

struct TransposeCheck {
    Rational left;   // top coefficient of beta ^ (alpha ^ gamma)
    Rational right;  // top coefficient of (alpha ^ beta) ^ gamma
    int sign = 1;    // (-1)^deg(beta): beta ^ alpha = sign * alpha ^ beta
    bool ok = false; // left == sign * right
};

TransposeCheck transpose_identity(const RatVector& alpha, const RatMultivector& beta, const RatMultivector& gamma);

// Uniform homogeneous exponent of degree n-1-d, then the ordinary exponent of degree d
// at each theta in [0,1)^C(n,d+1); plus the transpose identity on random rational data.
TransferReport bv_transfer_check(const CertVector& alpha, int d, const std::vector<RatVector>& thetas,
                                 const TransferOptions& opts = {}, std::uint64_t identity_seed = 1,
                                 std::size_t identity_trials = 100, std::string instance = "");

}  // namespace dioph
