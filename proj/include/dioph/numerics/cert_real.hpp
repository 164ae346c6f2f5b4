#pragma once

#include "dioph/numerics/rational.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace dioph {

struct Interval {
    Rational lo, hi;
    Rational width() const { return hi - lo; }
    bool contains(const Rational& x) const { return lo <= x && x <= hi; }
};

namespace detail {
struct Node;
}

// Value of a Liouville-type series  coeff * sum_{k>=1} base^{-k!}.
struct LiouvilleData {
    Integer base;
    Rational coeff;
};

// value = base^exponent with base >= 0.
struct PowerForm {
    Rational base;
    Rational exponent;
};

// Exact Q-linear combination of 1, square roots of squarefree integers and
// Liouville series. A form with no terms is exactly zero.
struct LinearForm {
    std::map<Integer, Rational> radicals;  // D -> c for c*sqrt(D); D = 1 is the rational part
    std::map<Integer, Rational> series;    // base -> c for c*sum_k base^{-k!}
    bool is_zero() const { return radicals.empty() && series.empty(); }
    std::optional<Rational> as_rational() const;
};

// Immutable real number: an exact rational or an expression over named constants
// that can be enclosed in rational intervals of any requested width.
class CertReal {
public:
    CertReal();
    CertReal(const Rational& v);
    CertReal(const Integer& v);
    CertReal(long long v);
    CertReal(int v) : CertReal(static_cast<long long>(v)) {}
    CertReal(long v) : CertReal(static_cast<long long>(v)) {}

    static CertReal sqrt(const Rational& r);
    static CertReal phi();
    static CertReal liouville(const Integer& base, const Rational& coeff = Rational(1));
    // Grammar: + - * / ^ (rational exponent), parentheses, rationals, decimals,
    // sqrt(x), phi, liouville(base), liouville(coeff, base), pow(x, e).
    static CertReal parse(std::string_view text);

    bool is_exact() const;
    const Rational& exact_value() const;
    bool is_zero() const { return is_exact() && exact_value() == 0; }

    // Interval of width <= 2^-bits containing the value; nested across calls.
    Interval enclose(long bits) const;
    double approx() const;
    std::string repr() const;

    std::optional<LiouvilleData> liouville_data() const;
    std::optional<PowerForm> power_form() const;
    // Present when the value is built from rationals, square roots, Liouville series,
    // ring operations and simple inverses.
    std::optional<LinearForm> linear_form() const;

    CertReal with_label(std::string name) const;

    friend CertReal operator+(const CertReal& a, const CertReal& b);
    friend CertReal operator-(const CertReal& a, const CertReal& b);
    friend CertReal operator*(const CertReal& a, const CertReal& b);
    friend CertReal operator/(const CertReal& a, const CertReal& b);
    friend CertReal operator-(const CertReal& a);
    CertReal& operator+=(const CertReal& b) { return *this = *this + b; }
    CertReal& operator-=(const CertReal& b) { return *this = *this - b; }
    CertReal& operator*=(const CertReal& b) { return *this = *this * b; }
    CertReal& operator/=(const CertReal& b) { return *this = *this / b; }

    friend CertReal abs(const CertReal& a);
    // base must be nonnegative.
    friend CertReal pow(const CertReal& base, const Rational& exponent);
    friend CertReal max(const CertReal& a, const CertReal& b);
    friend CertReal min(const CertReal& a, const CertReal& b);

private:
    explicit CertReal(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const detail::Node> node_;
};

CertReal abs(const CertReal& a);
CertReal pow(const CertReal& base, const Rational& exponent);
CertReal max(const CertReal& a, const CertReal& b);
CertReal min(const CertReal& a, const CertReal& b);

// Process-wide comparison cap: enclosures are refined down to width 2^-cap.
void set_precision_cap(long bits);
long precision_cap();

// -1, 0, 1. Exact when both sides are rational or rational powers; otherwise by
// refinement, throwing PrecisionExhausted when the cap is reached.
int compare(const CertReal& a, const CertReal& b);
int compare(const CertReal& a, const CertReal& b, long cap_bits);
int sign(const CertReal& a);

// Comparisons that report an undecided result instead of throwing.
enum class Ordering { less, equal, greater, undecided };
Ordering try_compare(const CertReal& a, const CertReal& b);

// floor(x), certified.
Integer floor_int(const CertReal& x);

// Rigorous bounds on ln(x) for x > 0; lo = hi = -inf for an exact zero.
struct LogInterval {
    double lo, hi;
    bool neg_inf() const;
    double mid() const { return 0.5 * (lo + hi); }
};
LogInterval log_enclosure(const CertReal& x);
LogInterval log_enclosure(const Rational& x);

}  // namespace dioph
