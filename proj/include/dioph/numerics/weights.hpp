#pragma once

#include "dioph/numerics/types.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace dioph {

// Positive rationals summing to one.
class WeightVector {
public:
    WeightVector() = default;
    explicit WeightVector(std::vector<Rational> w);
    static WeightVector uniform(std::size_t k);
    // "uniform", "w(a;b;...)", "a,b,...", or "a;b;..." ; dim is required for "uniform".
    static WeightVector parse(std::string_view text, std::size_t dim);

    std::size_t size() const { return w_.size(); }
    const Rational& operator[](std::size_t i) const { return w_[i]; }
    const std::vector<Rational>& weights() const { return w_; }
    const Rational& rho() const { return rho_; }
    const Rational& delta() const { return delta_; }
    bool is_uniform() const { return rho_ == delta_; }
    std::string str() const;

    friend bool operator==(const WeightVector& a, const WeightVector& b) { return a.w_ == b.w_; }

private:
    std::vector<Rational> w_;
    Rational rho_, delta_;
};

// A nonnegative certified value together with rigorous bounds on its logarithm.
class WeightedValue {
public:
    WeightedValue() = default;
    explicit WeightedValue(CertReal v) : v_(std::move(v)) {}
    explicit WeightedValue(const Rational& v) : v_(v) {}

    const CertReal& value() const { return v_; }
    LogInterval log_value() const { return log_enclosure(v_); }
    double approx() const { return v_.approx(); }
    bool is_zero() const { return v_.is_zero(); }

private:
    CertReal v_;
};

// max_i |x_i|^{1/w_i}
WeightedValue weighted_norm(const CertVector& x, const WeightVector& w);
WeightedValue weighted_norm(const IntVector& x, const WeightVector& w);

struct MultNorms {
    WeightedValue pi_plus;  // prod max(1, |q_j|)
    WeightedValue pi;       // prod |y_i|
};
MultNorms mult_norms(const IntVector& q, const CertVector& y);

int compare(const WeightedValue& a, const WeightedValue& b);

}  // namespace dioph
