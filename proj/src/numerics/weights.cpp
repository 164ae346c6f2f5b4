#include "dioph/numerics/weights.hpp"

#include "dioph/numerics/errors.hpp"

#include <algorithm>
#include <cctype>

namespace dioph {

WeightVector::WeightVector(std::vector<Rational> w) : w_(std::move(w)) {
    if (w_.empty()) throw InvalidArgument("empty weight vector");
    Rational sum = 0;
    for (const auto& x : w_) {
        if (x <= 0) throw InvalidArgument("weights must be positive, got " + to_string(x));
        sum += x;
    }
    if (sum != 1) throw InvalidArgument("weights must sum to 1, got " + to_string(sum));
    rho_ = *std::max_element(w_.begin(), w_.end());
    delta_ = *std::min_element(w_.begin(), w_.end());
}

WeightVector WeightVector::uniform(std::size_t k) {
    if (k == 0) throw InvalidArgument("uniform weights need a positive dimension");
    return WeightVector(std::vector<Rational>(k, Rational(1, static_cast<long>(k))));
}

WeightVector WeightVector::parse(std::string_view text, std::size_t dim) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t == "uniform") return uniform(dim);
    if (t.size() > 3 && t.rfind("w(", 0) == 0 && t.back() == ')') t = t.substr(2, t.size() - 3);
    std::vector<Rational> w;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= t.size(); ++i) {
        if (i == t.size() || t[i] == ',' || t[i] == ';') {
            w.push_back(parse_rational(std::string_view(t).substr(start, i - start)));
            start = i + 1;
        }
    }
    WeightVector out(std::move(w));
    if (dim != 0 && out.size() != dim)
        throw InvalidArgument("weight vector '" + std::string(text) + "' has dimension " +
                              std::to_string(out.size()) + ", expected " + std::to_string(dim));
    return out;
}

std::string WeightVector::str() const {
    std::string s = "w(";
    for (std::size_t i = 0; i < w_.size(); ++i) s += (i ? ";" : "") + to_string(w_[i]);
    return s + ")";
}

WeightedValue weighted_norm(const CertVector& x, const WeightVector& w) {
    if (static_cast<std::size_t>(x.size()) != w.size())
        throw InvalidArgument("weighted_norm: dimension mismatch");
    CertReal best;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        CertReal term = pow(abs(x[i]), Rational(1) / w[static_cast<std::size_t>(i)]);
        best = (i == 0) ? term : max(best, term);
    }
    return WeightedValue(best);
}

WeightedValue weighted_norm(const IntVector& x, const WeightVector& w) { return weighted_norm(to_cert(x), w); }

MultNorms mult_norms(const IntVector& q, const CertVector& y) {
    Integer pp = 1;
    for (Eigen::Index i = 0; i < q.size(); ++i) {
        Integer a = abs(Integer(q[i]));
        if (a > 1) pp *= a;
    }
    CertReal prod(1);
    for (Eigen::Index i = 0; i < y.size(); ++i) prod = prod * abs(y[i]);
    return {WeightedValue(Rational(pp)), WeightedValue(prod)};
}

int compare(const WeightedValue& a, const WeightedValue& b) { return compare(a.value(), b.value()); }

CertMatrix to_cert(const RatMatrix& a) { return a.unaryExpr([](const Rational& x) { return CertReal(x); }); }

CertVector to_cert(const RatVector& a) { return a.unaryExpr([](const Rational& x) { return CertReal(x); }); }

CertVector to_cert(const IntVector& a) {
    CertVector out(a.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out[i] = CertReal(static_cast<long long>(a[i]));
    return out;
}

bool is_rational(const CertMatrix& a) {
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (!a(i, j).is_exact()) return false;
    return true;
}

RatMatrix exact_matrix(const CertMatrix& a) {
    RatMatrix out(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out(i, j) = a(i, j).exact_value();
    return out;
}

}  // namespace dioph
