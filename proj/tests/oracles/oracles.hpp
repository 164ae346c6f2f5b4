#pragma once

// Independent reference implementations used only by the tests.

#include "dioph/numerics/types.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using dioph::Rational;
using dioph::RatMatrix;
using dioph::RatVector;

// Convergent denominators of (P + sqrt(D)) / Q via the periodic continued fraction
// recurrence, with repeated values removed. D must not be a perfect square.
std::vector<std::int64_t> cf_denominators(std::int64_t P, std::int64_t D, std::int64_t Q, std::size_t count);

// Partial quotients of the same number.
std::vector<std::int64_t> cf_partial_quotients(std::int64_t P, std::int64_t D, std::int64_t Q, std::size_t count);

// Random nonsingular d x d matrix with entries num/den, |num| <= max_num, 1 <= den <= max_den.
RatMatrix random_rational_matrix(std::mt19937_64& rng, int d, int max_num, int max_den);

// Successive minima of a lattice for a box (sup of |x_i|/h_i) by brute force over all
// integer coordinate vectors in a provably sufficient cube and all independent tuples
// (d <= 3). Returns an empty vector when that cube has radius above max_radius.
std::vector<Rational> brute_force_box_minima(const RatMatrix& basis, const RatVector& h, int max_radius);

// (N, L)-best approximations straight from the definition, in long double: A is m x n
// (row-major), X runs over Z^m with N(X) <= B, records by increasing N then decreasing L.
// min_gap receives the smallest difference between two L values that decided a record.
std::vector<std::vector<std::int64_t>> brute_best_approx(const std::vector<std::vector<long double>>& A,
                                                         const std::vector<Rational>& s,
                                                         const std::vector<Rational>& r, std::int64_t B,
                                                         long double* min_gap);

// min over 1 <= |q| <= Q of the distance from q alpha - theta to the nearest integer, in long double.
long double brute_inhomogeneous_min(long double alpha, long double theta, std::int64_t Q);

// Determinant by Laplace expansion.
Rational laplace_det(const RatMatrix& m);

}  // namespace oracle
