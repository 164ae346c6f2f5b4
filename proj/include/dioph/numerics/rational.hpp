#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dioph {

namespace mp = boost::multiprecision;

using Integer = mp::number<mp::gmp_int, mp::et_off>;
using Rational = mp::number<mp::gmp_rational, mp::et_off>;

// Accepts "p/q", "p", decimals ("0.2", "-1.5e3") and scientific integers ("1e6").
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& x);
std::string to_string(const Integer& x);
double to_double(const Rational& x);

Integer numer(const Rational& x);
Integer denom(const Rational& x);
Integer floor_int(const Rational& x);
Integer ceil_int(const Rational& x);

Integer ipow(const Integer& base, unsigned long exp);
Rational rpow(const Rational& base, long exp);
// Largest k >= 0 with k^n <= x, for x >= 0.
Integer iroot_floor(const Integer& x, unsigned long n);
bool is_perfect_power(const Integer& x, unsigned long n, Integer* root = nullptr);

// floor(x * 2^bits) / 2^bits and its ceiling counterpart.
Rational round_down_dyadic(const Rational& x, long bits);
Rational round_up_dyadic(const Rational& x, long bits);

// floor(log2 |x|) for x != 0 (approximate to within one).
long ilog2_abs(const Rational& x);

Integer lcm(const Integer& a, const Integer& b);
Integer gcd(const Integer& a, const Integer& b);

std::int64_t to_int64(const Integer& x);
bool fits_int64(const Integer& x);

}  // namespace dioph
