#pragma once

#include "dioph/numerics/errors.hpp"
#include "dioph/numerics/types.hpp"
#include "dioph/numerics/weights.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dioph {

// Scalar-dependent primitives: exact for Rational, certified for CertReal.
template <class S>
struct ScalarOps;

template <>
struct ScalarOps<Rational> {
    static int cmp(const Rational& a, const Rational& b) { return a < b ? -1 : (a > b ? 1 : 0); }
    static bool nonzero(const Rational& a) { return a != 0; }
    static Rational upper(const Rational& a) { return a; }
    static Rational lower(const Rational& a) { return a; }
    static Rational abs(const Rational& a) { return a < 0 ? Rational(-a) : a; }
    static Rational from(const Rational& a) { return a; }
    static Rational power(const Rational& base, const Rational& e) {
        CertReal v = pow(CertReal(base), e);
        if (!v.is_exact()) throw InvalidArgument(to_string(base) + "^(" + to_string(e) + ") is not rational");
        return v.exact_value();
    }
    static CertReal cert(const Rational& a) { return CertReal(a); }
};

template <>
struct ScalarOps<CertReal> {
    static int cmp(const CertReal& a, const CertReal& b) { return compare(a, b); }
    static bool nonzero(const CertReal& a) {
        if (a.is_exact()) return a.exact_value() != 0;
        Ordering o = try_compare(a, CertReal());
        return o == Ordering::less || o == Ordering::greater;
    }
    static Rational upper(const CertReal& a) { return a.enclose(64).hi; }
    static Rational lower(const CertReal& a) { return a.enclose(64).lo; }
    static CertReal abs(const CertReal& a) { return dioph::abs(a); }
    static CertReal from(const Rational& a) { return CertReal(a); }
    static CertReal power(const CertReal& base, const Rational& e) { return pow(base, e); }
    static CertReal cert(const CertReal& a) { return a; }
};

template <class S>
struct LatticeBasis {
    Mat<S> basis;  // columns are basis vectors
    S det;
    int dim() const { return static_cast<int>(basis.cols()); }
    Vec<S> point(const IntVector& z) const {
        Vec<S> x = Vec<S>::Constant(basis.rows(), S(0));
        for (Eigen::Index j = 0; j < z.size(); ++j)
            if (z[j] != 0) x += basis.col(j) * S(static_cast<long long>(z[j]));
        return x;
    }
};

template <class S>
struct WeightedBox {
    Vec<S> center;
    Vec<S> half_widths;
    static WeightedBox symmetric(Vec<S> h) {
        WeightedBox b;
        b.center = Vec<S>::Constant(h.size(), S(0));
        b.half_widths = std::move(h);
        return b;
    }
    bool is_symmetric() const {
        for (Eigen::Index i = 0; i < center.size(); ++i)
            if (ScalarOps<S>::nonzero(center[i])) return false;
        return true;
    }
};

template <class S>
struct LatticePoint {
    IntVector coords;  // integer coordinates in the lattice basis
    Vec<S> x;
};

template <class S>
struct SuccessiveMinima {
    std::vector<S> values;
    std::vector<LatticePoint<S>> witnesses;
};

// Symmetric convex bodies handled by the enumerator: boxes with half-widths h and
// their polars, the cross-polytopes {y : sum h_i |y_i| <= 1}.
enum class BodyKind { box, cross_polytope };

template <class S>
struct Body {
    BodyKind kind = BodyKind::box;
    Vec<S> h;
    // Smallest lambda >= 0 with x in lambda * body.
    S gauge(const Vec<S>& x) const {
        S g(0);
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (kind == BodyKind::box) {
                S t = ScalarOps<S>::abs(x[i]) / h[i];
                if (i == 0 || ScalarOps<S>::cmp(t, g) > 0) g = t;
            } else {
                g = g + h[i] * ScalarOps<S>::abs(x[i]);
            }
        }
        return g;
    }
    // Axis-aligned half-widths of the bounding box of lambda * body.
    Vec<S> bounding(const S& lambda) const {
        Vec<S> b(h.size());
        for (Eigen::Index i = 0; i < h.size(); ++i) b[i] = kind == BodyKind::box ? lambda * h[i] : lambda / h[i];
        return b;
    }
    Body polar() const { return Body{kind == BodyKind::box ? BodyKind::cross_polytope : BodyKind::box, h}; }
    // 2^d prod h for boxes, 2^d / (d! prod h) for cross-polytopes.
    S volume() const {
        S v(1);
        for (Eigen::Index i = 0; i < h.size(); ++i) v = v * S(2) * (kind == BodyKind::box ? h[i] : S(1) / h[i]);
        if (kind == BodyKind::cross_polytope)
            for (Eigen::Index i = 2; i <= h.size(); ++i) v = v / S(static_cast<long long>(i));
        return v;
    }
};

constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

// ---------------------------------------------------------------------------
// Linear algebra over exact or certified scalars.

namespace detail {

template <class S>
std::optional<std::pair<Mat<S>, S>> gauss_jordan_inverse(const Mat<S>& m) {
    const Eigen::Index d = m.rows();
    Mat<S> a = m, inv = Mat<S>::Identity(d, d);
    S det(1);
    for (Eigen::Index c = 0; c < d; ++c) {
        Eigen::Index p = -1;
        for (Eigen::Index r = c; r < d; ++r)
            if (ScalarOps<S>::nonzero(a(r, c))) {
                p = r;
                break;
            }
        if (p < 0) return std::nullopt;
        if (p != c) {
            a.row(p).swap(a.row(c));
            inv.row(p).swap(inv.row(c));
            det = -det;
        }
        S piv = a(c, c);
        det = det * piv;
        a.row(c) = (a.row(c) / piv).eval();
        inv.row(c) = (inv.row(c) / piv).eval();
        for (Eigen::Index r = 0; r < d; ++r) {
            if (r == c || !ScalarOps<S>::nonzero(a(r, c))) continue;
            S f = a(r, c);
            a.row(r) = (a.row(r) - f * a.row(c)).eval();
            inv.row(r) = (inv.row(r) - f * inv.row(c)).eval();
        }
    }
    return std::make_pair(inv, det);
}

// Rank of integer vectors over Q.
int rational_rank(const std::vector<IntVector>& vs);

}  // namespace detail

template <class S>
LatticeBasis<S> make_lattice(Mat<S> basis) {
    if (basis.rows() != basis.cols() || basis.rows() == 0) throw InvalidArgument("lattice basis must be square");
    auto inv = detail::gauss_jordan_inverse(basis);
    if (!inv) throw InvalidArgument("lattice basis is singular");
    return LatticeBasis<S>{std::move(basis), inv->second};
}

template <class S>
Mat<S> inverse(const LatticeBasis<S>& L) {
    auto inv = detail::gauss_jordan_inverse(L.basis);
    if (!inv) throw InvalidArgument("lattice basis is singular");
    return inv->first;
}

// diag(g_s(Q^{-1}), g_r(T^{-1})) [[I_m, A], [0, I_n]]
template <class S>
LatticeBasis<S> build_parametrized_lattice(const Mat<S>& A, const S& Q, const S& T, const WeightVector& s,
                                           const WeightVector& r) {
    const Eigen::Index m = A.rows(), n = A.cols();
    if (static_cast<std::size_t>(m) != s.size() || static_cast<std::size_t>(n) != r.size())
        throw InvalidArgument("build_parametrized_lattice: weight dimensions do not match A");
    if (ScalarOps<S>::cmp(Q, S(0)) <= 0 || ScalarOps<S>::cmp(T, S(0)) <= 0)
        throw InvalidArgument("build_parametrized_lattice: Q and T must be positive");
    Mat<S> b = Mat<S>::Zero(m + n, m + n);
    for (Eigen::Index i = 0; i < m; ++i) {
        S g = ScalarOps<S>::power(Q, -s[static_cast<std::size_t>(i)]);
        b(i, i) = g;
        for (Eigen::Index j = 0; j < n; ++j) b(i, m + j) = g * A(i, j);
    }
    for (Eigen::Index j = 0; j < n; ++j) b(m + j, m + j) = ScalarOps<S>::power(T, -r[static_cast<std::size_t>(j)]);
    return make_lattice(std::move(b));
}

// Inverse-transpose basis.
template <class S>
LatticeBasis<S> dual_lattice(const LatticeBasis<S>& L) {
    auto inv = detail::gauss_jordan_inverse(L.basis);
    if (!inv) throw InvalidArgument("dual of a singular lattice");
    return LatticeBasis<S>{inv->first.transpose(), S(1) / inv->second};
}

// ---------------------------------------------------------------------------
// Enumeration.

namespace detail {

// Integer coordinate ranges covering the box center +- half (preimage under the basis).
template <class S>
std::vector<std::pair<std::int64_t, std::int64_t>> preimage_ranges(const Mat<S>& inv, const Vec<S>& center,
                                                                   const Vec<S>& half) {
    const Eigen::Index d = inv.rows();
    std::vector<std::pair<std::int64_t, std::int64_t>> out(static_cast<std::size_t>(d));
    for (Eigen::Index j = 0; j < d; ++j) {
        Rational lo = 0, hi = 0;
        for (Eigen::Index i = 0; i < d; ++i) {
            Rational c_lo = ScalarOps<S>::lower(center[i]), c_hi = ScalarOps<S>::upper(center[i]);
            Rational h = ScalarOps<S>::upper(half[i]);
            Rational a_lo = ScalarOps<S>::lower(inv(j, i)), a_hi = ScalarOps<S>::upper(inv(j, i));
            Rational amax = std::max(abs(a_lo), abs(a_hi));
            Rational p1 = a_lo * c_lo, p2 = a_lo * c_hi, p3 = a_hi * c_lo, p4 = a_hi * c_hi;
            lo += std::min({p1, p2, p3, p4}) - amax * h;
            hi += std::max({p1, p2, p3, p4}) + amax * h;
        }
        out[static_cast<std::size_t>(j)] = {to_int64(floor_int(lo)), to_int64(ceil_int(hi))};
    }
    return out;
}

// Visit every integer vector in the product of ranges, lexicographically.
template <class F>
void for_each_in_ranges(const std::vector<std::pair<std::int64_t, std::int64_t>>& ranges, F&& f) {
    const std::size_t d = ranges.size();
    for (const auto& r : ranges)
        if (r.first > r.second) return;
    IntVector z(static_cast<Eigen::Index>(d));
    for (std::size_t j = 0; j < d; ++j) z[static_cast<Eigen::Index>(j)] = ranges[j].first;
    for (;;) {
        if (!f(static_cast<const IntVector&>(z))) return;
        std::size_t j = d;
        while (j > 0) {
            --j;
            auto& zj = z[static_cast<Eigen::Index>(j)];
            if (zj < ranges[j].second) {
                ++zj;
                break;
            }
            zj = ranges[j].first;
            if (j == 0) return;
        }
        if (d == 0) return;
    }
}

}  // namespace detail

// Lattice points in the box (open if strict), ordered lexicographically by integer coordinates.
template <class S>
std::vector<LatticePoint<S>> enumerate_in_box(const LatticeBasis<S>& L, const WeightedBox<S>& box, bool strict,
                                              std::uint64_t budget = kDefaultEnumerationBudget) {
    const Mat<S> inv = inverse(L);
    auto ranges = detail::preimage_ranges(inv, box.center, box.half_widths);
    std::vector<LatticePoint<S>> out;
    std::uint64_t visited = 0;
    detail::for_each_in_ranges(ranges, [&](const IntVector& z) {
        if (++visited > budget) throw BudgetExceeded("enumerate_in_box", out.size());
        Vec<S> x = L.point(z);
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            int c = ScalarOps<S>::cmp(ScalarOps<S>::abs(x[i] - box.center[i]), box.half_widths[i]);
            if (c > 0 || (strict && c == 0)) return true;
        }
        out.push_back({z, std::move(x)});
        return true;
    });
    return out;
}

// Nonzero lattice points with gauge <= lambda, with their gauges.
template <class S>
std::vector<std::pair<S, LatticePoint<S>>> points_within_gauge(const LatticeBasis<S>& L, const Mat<S>& inv,
                                                               const Body<S>& body, const S& lambda,
                                                               std::uint64_t budget) {
    Vec<S> center = Vec<S>::Constant(L.basis.rows(), S(0));
    auto ranges = detail::preimage_ranges(inv, center, body.bounding(lambda));
    std::vector<std::pair<S, LatticePoint<S>>> out;
    std::uint64_t visited = 0;
    detail::for_each_in_ranges(ranges, [&](const IntVector& z) {
        if (++visited > budget) throw BudgetExceeded("successive_minima", out.size());
        if (z.isZero()) return true;
        Vec<S> x = L.point(z);
        S g = body.gauge(x);
        if (ScalarOps<S>::cmp(g, lambda) <= 0) out.push_back({g, LatticePoint<S>{z, std::move(x)}});
        return true;
    });
    return out;
}

// Exact successive minima of a symmetric box or cross-polytope: every lattice point
// up to a dilation that provably contains k independent ones is sorted by gauge and
// independent vectors are selected greedily.
template <class S>
SuccessiveMinima<S> successive_minima(const LatticeBasis<S>& L, const Body<S>& body, int k,
                                      std::uint64_t budget = kDefaultEnumerationBudget) {
    const int d = L.dim();
    if (k < 1 || k > d) throw InvalidArgument("successive_minima: k out of range");
    const Mat<S> inv = inverse(L);
    S lambda_max(0);
    for (int j = 0; j < d; ++j) {
        S g = body.gauge(Vec<S>(L.basis.col(j)));
        if (j == 0 || ScalarOps<S>::cmp(g, lambda_max) > 0) lambda_max = g;
    }
    S lambda = lambda_max / S(1024);
    for (;;) {
        auto pts = points_within_gauge(L, inv, body, lambda, budget);
        std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
            Ordering o = try_compare(ScalarOps<S>::cert(a.first), ScalarOps<S>::cert(b.first));
            if (o == Ordering::less) return true;
            if (o == Ordering::greater) return false;
            const IntVector &za = a.second.coords, &zb = b.second.coords;
            return std::lexicographical_compare(za.data(), za.data() + za.size(), zb.data(), zb.data() + zb.size());
        });
        SuccessiveMinima<S> out;
        std::vector<IntVector> chosen;
        for (auto& [g, p] : pts) {
            chosen.push_back(p.coords);
            if (detail::rational_rank(chosen) < static_cast<int>(chosen.size())) {
                chosen.pop_back();
                continue;
            }
            out.values.push_back(g);
            out.witnesses.push_back(p);
            if (static_cast<int>(out.values.size()) == k) return out;
        }
        if (ScalarOps<S>::cmp(lambda, lambda_max) >= 0)
            throw Error("successive_minima: basis vectors did not yield independent points");
        lambda = lambda * S(2);
        if (ScalarOps<S>::cmp(lambda, lambda_max) > 0) lambda = lambda_max;
    }
}

// ---------------------------------------------------------------------------
// Transference checks on rational lattices.

// C_d^2 = (d! d)^2 (3/2)^{d-1}; C_d = d! (3/2)^{(d-1)/2} d.
Rational mahler_constant_squared(int d);
CertReal mahler_constant(int d);

struct DualWitness {
    IntVector coords;
    RatVector point;
    Rational l1_distance;  // sum h_i |y_i - gamma_i|
};

enum class MahlerStatus { ok, precondition_violated, failed };

struct MahlerReport {
    MahlerStatus status = MahlerStatus::ok;
    int dim = 0;
    CertReal constant;
    std::optional<LatticePoint<Rational>> precondition_witness;  // nonzero point of L in R
    std::optional<DualWitness> nonzero_witness;                  // nonzero dual point in C R*
    std::vector<std::optional<DualWitness>> shift_witnesses;     // one per gamma
};

// R is the closed symmetric box with half-widths h; R* the polar cross-polytope.
MahlerReport check_mahler_transfer(const LatticeBasis<Rational>& L, const RatVector& h,
                                   const std::vector<RatVector>& gammas,
                                   std::uint64_t budget = kDefaultEnumerationBudget);

struct DualBoundReport {
    Rational mu1;            // mu_1(L, B)
    Rational mud_dual;       // mu_d(L*, B*)
    Rational product;        // mu1 * mud_dual
    Rational d_factorial;
    bool mu1_exceeds_one = false;
    bool polar_bound_holds = false;  // mu1 > 1 implies mud_dual < d!
    bool product_in_range = false;  // 1 <= product <= d!
};

DualBoundReport second_theorem_dual_bound(const LatticeBasis<Rational>& L, const RatVector& h,
                                          std::uint64_t budget = kDefaultEnumerationBudget);

struct MinkowskiReport {
    std::vector<Rational> minima;
    Rational normalized_product;  // mu_1 ... mu_d vol(body) / det(L)
    bool within_bounds = false;   // 2^d/d! <= . <= 2^d
};

MinkowskiReport minkowski_second_check(const LatticeBasis<Rational>& L, const Body<Rational>& body,
                                       std::uint64_t budget = kDefaultEnumerationBudget);

// Basis change U with dual(dual(L)).basis = L.basis * U; unimodular iff integral with det +-1.
bool same_lattice(const LatticeBasis<Rational>& a, const LatticeBasis<Rational>& b);

}  // namespace dioph
