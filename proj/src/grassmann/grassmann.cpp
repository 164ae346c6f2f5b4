#include "dioph/grassmann/grassmann.hpp"

#include "dioph/bestapprox/bestapprox.hpp"
#include "dioph/numerics/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <random>

namespace dioph {

namespace {

bool is_zero_coeff(const Rational& x) { return x == 0; }
bool is_zero_coeff(const Integer& x) { return x == 0; }
bool is_zero_coeff(const CertReal& x) { return x.is_zero(); }

void lex_subsets(int n, int k, int start, std::uint32_t mask, std::vector<std::uint32_t>& out) {
    if (k == 0) {
        out.push_back(mask);
        return;
    }
    for (int i = start; i <= n - k; ++i) lex_subsets(n, k - 1, i + 1, mask | (1u << i), out);
}

// (-1)^#{(a, b) : a in I, b in J, a > b}: the sign of e_I ^ e_J against e_{I u J}.
int merge_sign(std::uint32_t I, std::uint32_t J) {
    int inv = 0;
    for (std::uint32_t rest = J; rest; rest &= rest - 1) {
        int b = std::countr_zero(rest);
        inv += std::popcount(I >> (b + 1));
    }
    return inv % 2 ? -1 : 1;
}

void check_same_space(int n1, int k1, int n2, int k2) {
    if (n1 != n2 || k1 != k2) throw InvalidArgument("multivectors of different grade or ambient dimension");
}

Rational det(Mat<Rational> a) {
    const Eigen::Index t = a.rows();
    Rational d = 1;
    for (Eigen::Index c = 0; c < t; ++c) {
        Eigen::Index p = c;
        while (p < t && a(p, c) == 0) ++p;
        if (p == t) return 0;
        if (p != c) {
            a.row(p).swap(a.row(c));
            d = -d;
        }
        d *= a(c, c);
        for (Eigen::Index r = c + 1; r < t; ++r) {
            if (a(r, c) == 0) continue;
            Rational f = a(r, c) / a(c, c);
            for (Eigen::Index j = c; j < t; ++j) a(r, j) -= f * a(c, j);
        }
    }
    return d;
}

RatMultivector primitive(RatMultivector X) {
    Integer l = 1;
    for (const auto& c : X.coeffs) l = lcm(l, denom(c));
    Integer g = 0;
    for (auto& c : X.coeffs) {
        c *= Rational(l);
        g = gcd(g, numer(c));
    }
    if (g == 0) throw InvalidArgument("zero Pluecker vector");
    int sign = 1;
    for (const auto& c : X.coeffs)
        if (c != 0) {
            sign = c < 0 ? -1 : 1;
            break;
        }
    for (auto& c : X.coeffs) c = c / Rational(g) * sign;
    return X;
}

void check_limits(int n, int d, const GrassmannOptions& o) {
    if (n < 1) throw InvalidArgument("alpha must be nonempty");
    if (d < 0 || d > n - 1) throw InvalidArgument("d must lie in 0 .. n-1");
    if (!o.allow_large && (n > 5 || d > 3)) throw InvalidArgument("n <= 5 and d <= 3 unless large instances are allowed");
}

// Two-term long double value of frac(x).
// Zero when the value is a vanishing combination of radicals, which enclosures alone
// cannot certify.
CertReal settle_zero(const CertReal& x) {
    if (x.is_zero()) return x;
    auto f = x.linear_form();
    return f && f->is_zero() ? CertReal(0) : x;
}

long double frac_ld(const CertReal& x) {
    Interval I = x.enclose(96);
    Rational f = I.lo - Rational(floor_int(I.lo));
    double h = to_double(f);
    return static_cast<long double>(h) + static_cast<long double>(to_double(Rational(f - Rational(h))));
}

struct Candidate {
    IntVector z;
    long double lo, hi;  // bounds for the squared error
};

// Largest size s of Z allowed at T = 2^e: s = |Z|^2 <= 2^(2e/N) for the Euclidean
// norm, s = max |z_j| <= 2^(e/N) for the sup norm.
std::vector<std::int64_t> size_bounds(const std::vector<Rational>& log2s, std::size_t N, MultivectorNorm norm) {
    const long p = norm == MultivectorNorm::euclidean ? 2 : 1;
    std::vector<std::int64_t> out;
    for (const Rational& e : log2s) {
        Rational x = p * e / Rational(static_cast<long>(N));
        Integer a = numer(x), b = denom(x);
        out.push_back(to_int64(iroot_floor(ipow(Integer(2), a.convert_to<unsigned long>()), b.convert_to<unsigned long>())));
    }
    return out;
}

}  // namespace

const std::vector<std::uint32_t>& subsets(int n, int k) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::vector<std::uint32_t>> cache;
    if (n < 0 || n > 31 || k < 0 || k > n) throw InvalidArgument("subsets: grade out of range");
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({n, k});
    if (it != cache.end()) return it->second;
    std::vector<std::uint32_t> out;
    lex_subsets(n, k, 0, 0, out);
    return cache.emplace(std::make_pair(n, k), std::move(out)).first->second;
}

std::size_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::size_t b = 1;
    for (int i = 1; i <= k; ++i) b = b * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
    return b;
}

std::size_t subset_index(int n, std::uint32_t mask) {
    int k = std::popcount(mask);
    std::size_t rank = 0;
    int prev = -1, i = 0;
    for (std::uint32_t rest = mask; rest; rest &= rest - 1, ++i) {
        int c = std::countr_zero(rest);
        for (int j = prev + 1; j < c; ++j) rank += binomial(n - 1 - j, k - i - 1);
        prev = c;
    }
    return rank;
}

template <class S>
Multivector<S> Multivector<S>::zero(int n, int k) {
    if (k < 0 || k > n) throw InvalidArgument("grade out of range");
    return {n, k, std::vector<S>(binomial(n, k), S(0))};
}

template <class S>
Multivector<S> Multivector<S>::scalar(int n, const S& v) {
    return {n, 0, std::vector<S>{v}};
}

template <class S>
Multivector<S> Multivector<S>::vector(const std::vector<S>& v) {
    return {static_cast<int>(v.size()), 1, v};
}

template <class S>
Multivector<S> Multivector<S>::basis(int n, std::uint32_t mask) {
    Multivector u = zero(n, std::popcount(mask));
    u.coeffs[subset_index(n, mask)] = S(1);
    return u;
}

template <class S>
bool Multivector<S>::is_zero() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](const S& c) { return is_zero_coeff(c); });
}

template <class S>
Multivector<S> Multivector<S>::operator+(const Multivector& o) const {
    check_same_space(n, k, o.n, o.k);
    Multivector r = *this;
    for (std::size_t i = 0; i < coeffs.size(); ++i) r.coeffs[i] = coeffs[i] + o.coeffs[i];
    return r;
}

template <class S>
Multivector<S> Multivector<S>::operator-(const Multivector& o) const {
    check_same_space(n, k, o.n, o.k);
    Multivector r = *this;
    for (std::size_t i = 0; i < coeffs.size(); ++i) r.coeffs[i] = coeffs[i] - o.coeffs[i];
    return r;
}

template <class S>
Multivector<S> Multivector<S>::operator-() const {
    Multivector r = *this;
    for (auto& c : r.coeffs) c = -c;
    return r;
}

template <class S>
Multivector<S> Multivector<S>::scaled(const S& c) const {
    Multivector r = *this;
    for (auto& x : r.coeffs) x = x * c;
    return r;
}

template <class S>
Multivector<S> wedge(const Multivector<S>& u, const Multivector<S>& v) {
    if (u.n != v.n) throw InvalidArgument("wedge: different ambient dimensions");
    if (u.k + v.k > u.n) throw InvalidArgument("wedge: grade overflow");
    Multivector<S> out = Multivector<S>::zero(u.n, u.k + v.k);
    const auto& I = subsets(u.n, u.k);
    const auto& J = subsets(v.n, v.k);
    for (std::size_t a = 0; a < I.size(); ++a) {
        if (is_zero_coeff(u.coeffs[a])) continue;
        for (std::size_t b = 0; b < J.size(); ++b) {
            if ((I[a] & J[b]) || is_zero_coeff(v.coeffs[b])) continue;
            S term = u.coeffs[a] * v.coeffs[b];
            auto& slot = out.coeffs[subset_index(u.n, I[a] | J[b])];
            slot = merge_sign(I[a], J[b]) > 0 ? S(slot + term) : S(slot - term);
        }
    }
    return out;
}

template <class S>
S mv_inner(const Multivector<S>& u, const Multivector<S>& v) {
    check_same_space(u.n, u.k, v.n, v.k);
    S acc(0);
    for (std::size_t i = 0; i < u.coeffs.size(); ++i)
        if (!is_zero_coeff(u.coeffs[i]) && !is_zero_coeff(v.coeffs[i])) acc = acc + u.coeffs[i] * v.coeffs[i];
    return acc;
}

template <class S>
S mv_norm_squared(const Multivector<S>& u) {
    return mv_inner(u, u);
}

CertReal mv_norm(const RatMultivector& u) { return pow(CertReal(mv_norm_squared(u)), Rational(1, 2)); }

CertReal mv_norm(const CertMultivector& u) { return pow(mv_norm_squared(u), Rational(1, 2)); }

template <class S>
Multivector<S> embed_shifted(const Multivector<S>& u) {
    Multivector<S> out = Multivector<S>::zero(u.n + 1, u.k);
    const auto& I = subsets(u.n, u.k);
    for (std::size_t a = 0; a < I.size(); ++a) out.coeffs[subset_index(u.n + 1, I[a] << 1)] = u.coeffs[a];
    return out;
}

template struct Multivector<Integer>;
template struct Multivector<Rational>;
template struct Multivector<CertReal>;
template Multivector<Integer> wedge(const Multivector<Integer>&, const Multivector<Integer>&);
template Multivector<Rational> wedge(const Multivector<Rational>&, const Multivector<Rational>&);
template Multivector<CertReal> wedge(const Multivector<CertReal>&, const Multivector<CertReal>&);
template Integer mv_inner(const Multivector<Integer>&, const Multivector<Integer>&);
template Rational mv_inner(const Multivector<Rational>&, const Multivector<Rational>&);
template CertReal mv_inner(const Multivector<CertReal>&, const Multivector<CertReal>&);
template Integer mv_norm_squared(const Multivector<Integer>&);
template Rational mv_norm_squared(const Multivector<Rational>&);
template CertReal mv_norm_squared(const Multivector<CertReal>&);
template Multivector<Integer> embed_shifted(const Multivector<Integer>&);
template Multivector<Rational> embed_shifted(const Multivector<Rational>&);
template Multivector<CertReal> embed_shifted(const Multivector<CertReal>&);

Rational gram_inner(const std::vector<RatVector>& u, const std::vector<RatVector>& v) {
    if (u.size() != v.size()) throw InvalidArgument("gram_inner: different grades");
    const Eigen::Index t = static_cast<Eigen::Index>(u.size());
    Mat<Rational> g(t, t);
    for (Eigen::Index i = 0; i < t; ++i)
        for (Eigen::Index j = 0; j < t; ++j) {
            if (u[i].size() != v[j].size()) throw InvalidArgument("gram_inner: different ambient dimensions");
            Rational s = 0;
            for (Eigen::Index c = 0; c < u[i].size(); ++c) s += u[i][c] * v[j][c];
            g(i, j) = s;
        }
    return det(g);
}

CertMultivector to_cert(const RatMultivector& u) {
    CertMultivector out{u.n, u.k, {}};
    for (const auto& c : u.coeffs) out.coeffs.emplace_back(c);
    return out;
}

namespace {

RatMultivector as_mv(const RatVector& x) { return RatMultivector::vector(std::vector<Rational>(x.data(), x.data() + x.size())); }
CertMultivector as_mv(const CertVector& x) { return CertMultivector::vector(std::vector<CertReal>(x.data(), x.data() + x.size())); }

}  // namespace

Rational projective_distance_squared(const RatVector& x, const RatVector& y) {
    RatMultivector X = as_mv(x), Y = as_mv(y);
    Rational nx = mv_norm_squared(X), ny = mv_norm_squared(Y);
    if (nx == 0 || ny == 0) throw InvalidArgument("projective distance of a zero vector");
    return mv_norm_squared(wedge(X, Y)) / (nx * ny);
}

CertReal projective_distance(const RatVector& x, const RatVector& y) {
    return pow(CertReal(projective_distance_squared(x, y)), Rational(1, 2));
}

CertReal projective_distance(const CertVector& x, const CertVector& y) {
    CertMultivector X = as_mv(x), Y = as_mv(y);
    CertReal nx = mv_norm_squared(X), ny = mv_norm_squared(Y);
    if (sign(nx) == 0 || sign(ny) == 0) throw InvalidArgument("projective distance of a zero vector");
    return pow(mv_norm_squared(wedge(X, Y)) / (nx * ny), Rational(1, 2));
}

LiftedPoint::LiftedPoint(CertVector a) : alpha(std::move(a)) {
    alpha_prime = CertVector(alpha.size() + 1);
    alpha_prime[0] = CertReal(1);
    for (Eigen::Index i = 0; i < alpha.size(); ++i) alpha_prime[i + 1] = alpha[i];
}

CertMultivector LiftedPoint::as_multivector() const { return as_mv(alpha_prime); }

RationalSubspace RationalSubspace::from_basis(const std::vector<RatVector>& basis) {
    if (basis.empty()) throw InvalidArgument("empty basis");
    RatMultivector X = as_mv(basis[0]);
    for (std::size_t i = 1; i < basis.size(); ++i) X = wedge(X, as_mv(basis[i]));
    if (X.is_zero()) throw InvalidArgument("basis vectors are linearly dependent");
    RationalSubspace L = from_pluecker(X);
    L.basis = basis;
    return L;
}

RationalSubspace RationalSubspace::from_pluecker(const RatMultivector& X) {
    if (X.k < 1) throw InvalidArgument("Pluecker vector must have grade >= 1");
    RationalSubspace L;
    L.d = X.k - 1;
    L.pluecker = primitive(X);
    L.height = 0;
    for (const auto& c : L.pluecker.coeffs) L.height = std::max(L.height, Integer(abs(numer(c))));
    return L;
}

CertReal point_subspace_distance(const LiftedPoint& alpha, const RationalSubspace& L) {
    CertMultivector a = alpha.as_multivector(), X = to_cert(L.pluecker);
    if (a.n != X.n) throw InvalidArgument("point and subspace live in different dimensions");
    if (L.pluecker.is_zero()) throw InvalidArgument("zero Pluecker vector");
    return pow(mv_norm_squared(wedge(a, X)) / (mv_norm_squared(a) * mv_norm_squared(X)), Rational(1, 2));
}

CertMatrix wedge_matrix(const CertVector& alpha, int d) {
    const int n = static_cast<int>(alpha.size());
    if (d < 0 || d >= n) throw InvalidArgument("d must lie in 0 .. n-1");
    const auto& cols = subsets(n, d);
    CertMatrix B = CertMatrix::Constant(static_cast<Eigen::Index>(binomial(n, d + 1)),
                                        static_cast<Eigen::Index>(cols.size()), CertReal(0));
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (int i = 0; i < n; ++i) {
            if (cols[c] & (1u << i)) continue;
            const auto row = static_cast<Eigen::Index>(subset_index(n, cols[c] | (1u << i)));
            B(row, static_cast<Eigen::Index>(c)) = merge_sign(1u << i, cols[c]) > 0 ? alpha[i] : CertReal(-alpha[i]);
        }
    return B;
}

EstimatePair intermediate_exponents(const CertVector& alpha, int d, const CertVector& theta,
                                    const GrassmannOptions& opts) {
    const int n = static_cast<int>(alpha.size());
    check_limits(n, d, opts);
    const std::size_t N = binomial(n, d), M = binomial(n, d + 1);
    if (theta.size() != 0 && static_cast<std::size_t>(theta.size()) != M)
        throw InvalidArgument("theta must have C(n, d+1) coordinates");
    CertVector th = theta.size() ? theta : CertVector::Constant(static_cast<Eigen::Index>(M), CertReal(0));
    bool homogeneous = true;
    for (Eigen::Index i = 0; i < th.size(); ++i) homogeneous = homogeneous && th[i].is_zero();

    const CertMatrix B = wedge_matrix(alpha, d);
    const auto log2s = opts.estimate.grid.log2_points();
    if (log2s.empty()) throw InvalidArgument("empty search range");
    for (const auto& e : log2s)
        if (e < 0) throw InvalidArgument("grid scales must be >= 1");
    const bool euclid = opts.norm == MultivectorNorm::euclidean;
    const auto radii = size_bounds(log2s, N, opts.norm);
    const std::int64_t R = radii.back();

    std::vector<long double> b, t;
    for (Eigen::Index i = 0; i < B.rows(); ++i)
        for (Eigen::Index j = 0; j < B.cols(); ++j) b.push_back(frac_ld(B(i, j)));
    for (Eigen::Index i = 0; i < th.size(); ++i) t.push_back(frac_ld(th[i]));

    std::vector<std::vector<Candidate>> buckets(radii.size());
    std::vector<long double> bucket_hi(radii.size(), std::numeric_limits<long double>::infinity());
    const long double eps = std::ldexp(1.0L, -58);
    std::uint64_t visited = 0;
    IntVector z = IntVector::Zero(static_cast<Eigen::Index>(N));

    auto visit = [&](std::int64_t size) {
        if (++visited > opts.estimate.budget) throw BudgetExceeded("intermediate_exponent", visited);
        long double l1 = 0;
        for (Eigen::Index j = 0; j < z.size(); ++j) l1 += std::fabs(static_cast<long double>(z[j]));
        const long double E = (l1 + 4) * eps;
        long double lo = 0, hi = 0;
        for (std::size_t i = 0; i < M; ++i) {
            long double y = t[i];
            for (std::size_t j = 0; j < N; ++j)
                if (z[static_cast<Eigen::Index>(j)] != 0)
                    y += static_cast<long double>(z[static_cast<Eigen::Index>(j)]) * b[i * N + j];
            y -= std::floor(y);
            long double dist = std::min(y, 1 - y);
            long double dl = std::max(0.0L, dist - E), dh = dist + E;
            if (euclid) {
                lo += dl * dl;
                hi += dh * dh;
            } else {
                lo = std::max(lo, dl * dl);
                hi = std::max(hi, dh * dh);
            }
        }
        std::size_t k = static_cast<std::size_t>(std::lower_bound(radii.begin(), radii.end(), size) - radii.begin());
        if (k >= buckets.size() || lo > bucket_hi[k]) return;
        bucket_hi[k] = std::min(bucket_hi[k], hi);
        buckets[k].push_back({z, lo, hi});
    };

    // integer Z of size <= R; first nonzero coordinate positive when homogeneous
    auto rec = [&](auto&& self, std::size_t j, std::int64_t used, bool zero_prefix) -> void {
        if (j == N) {
            if (!zero_prefix) visit(used);
            return;
        }
        std::int64_t r = R;
        if (euclid) {
            const std::int64_t rem = R - used;
            r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(rem)));
            while (r * r > rem) --r;
            while ((r + 1) * (r + 1) <= rem) ++r;
        }
        const std::int64_t lo = zero_prefix && homogeneous ? 0 : -r;
        for (std::int64_t v = lo; v <= r; ++v) {
            z[static_cast<Eigen::Index>(j)] = v;
            self(self, j + 1, euclid ? used + v * v : std::max(used, v < 0 ? -v : v), zero_prefix && v == 0);
        }
        z[static_cast<Eigen::Index>(j)] = 0;
    };
    rec(rec, 0, 0, true);

    const WeightVector uni = WeightVector::uniform(M);
    std::map<std::vector<std::int64_t>, std::pair<CertReal, IntVector>> exact;
    auto exact_of = [&](const IntVector& x) -> const std::pair<CertReal, IntVector>& {
        std::vector<std::int64_t> key(x.data(), x.data() + x.size());
        auto it = exact.find(key);
        if (it != exact.end()) return it->second;
        CertVector y(static_cast<Eigen::Index>(M));
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            CertReal acc = th[i];
            for (Eigen::Index j = 0; j < x.size(); ++j)
                if (x[j] != 0) acc += CertReal(static_cast<long long>(x[j])) * B(i, j);
            y[i] = acc;
        }
        Residual res = closest_integer_residual(y, uni);
        CertReal e2(0);
        for (const auto& c : res.components) {
            CertReal c2 = settle_zero(c);
            if (c2.is_zero()) continue;
            e2 = euclid ? e2 + c2 * c2 : max(e2, c2 * c2);
        }
        // alpha ^ Z + Y + theta is small for Y = -p
        return exact.emplace(key, std::make_pair(e2, IntVector(-res.p))).first->second;
    };

    std::vector<ScaleMinimum> minima;
    std::vector<Candidate> live;
    long double live_hi = std::numeric_limits<long double>::infinity();
    for (std::size_t k = 0; k < radii.size(); ++k) {
        for (auto& c : buckets[k]) live.push_back(std::move(c));
        live_hi = std::min(live_hi, bucket_hi[k]);
        std::erase_if(live, [&](const Candidate& c) { return c.lo > live_hi; });
        if (live.empty()) continue;
        const Candidate* best = nullptr;
        for (const auto& c : live) {
            if (!best) {
                best = &c;
                continue;
            }
            int cmpv = compare(exact_of(c.z).first, exact_of(best->z).first);
            if (cmpv < 0 || (cmpv == 0 && std::lexicographical_compare(c.z.data(), c.z.data() + c.z.size(),
                                                                       best->z.data(), best->z.data() + best->z.size())))
                best = &c;
        }
        const auto& ex = exact_of(best->z);
        CertReal D = ex.first.is_zero() ? CertReal(0) : pow(ex.first, Rational(static_cast<long>(M), 2));
        minima.push_back({Scale{Rational(2), log2s[k]}, D, best->z, ex.second});
    }
    if (minima.empty()) throw InvalidArgument("no nonzero Z within the search range");
    return estimate_from_minima(minima, homogeneous ? ShiftKind::homogeneous : ShiftKind::inhomogeneous,
                                opts.estimate, "grid");
}

ExponentEstimate intermediate_exponent(const CertVector& alpha, int d, const CertVector& theta, Flavor flavor,
                                       const GrassmannOptions& opts) {
    EstimatePair p = intermediate_exponents(alpha, d, theta, opts);
    return flavor == Flavor::ordinary ? p.ordinary : p.uniform;
}

EquivalenceReport def_equivalence_check(const RatVector& alpha, const RatMultivector& X) {
    const int n = static_cast<int>(alpha.size());
    if (X.n != n + 1 || X.k < 1 || X.k > n) throw InvalidArgument("X must have grade 1 .. n over R^{n+1}");
    EquivalenceReport r;
    r.n = n;
    r.d = X.k - 1;
    r.Z = RatMultivector::zero(n, r.d);
    r.Y = RatMultivector::zero(n, r.d + 1);
    const auto& I = subsets(n + 1, X.k);
    for (std::size_t a = 0; a < I.size(); ++a) {
        // e_0 is the smallest index, so e_I = e_0 ^ e_{I \ 0}
        if (I[a] & 1u)
            r.Z.coeffs[subset_index(n, I[a] >> 1)] = X.coeffs[a];
        else
            r.Y.coeffs[subset_index(n, I[a] >> 1)] = -X.coeffs[a];
    }
    const RatMultivector e0 = RatMultivector::basis(n + 1, 1u);
    r.decomposition_ok = wedge(e0, embed_shifted(r.Z)) - embed_shifted(r.Y) == X;

    const RatMultivector a = as_mv(alpha);
    RatVector lifted(n + 1);
    lifted[0] = 1;
    for (int i = 0; i < n; ++i) lifted[i + 1] = alpha[i];
    const RatMultivector ap = as_mv(lifted);
    r.alpha_wedge = wedge(a, r.Z) + r.Y;
    const RatMultivector lhs = wedge(ap, X);
    r.identity_ok = lhs == -wedge(ap, embed_shifted(r.alpha_wedge));

    r.lifted_sq = mv_norm_squared(lhs);
    r.inner_sq = mv_norm_squared(r.alpha_wedge);
    r.alpha_prime_sq = mv_norm_squared(ap);
    r.X_sq = mv_norm_squared(X);
    r.Z_sq = mv_norm_squared(r.Z);
    r.Y_sq = mv_norm_squared(r.Y);
    const Rational mx = std::max(r.Z_sq, r.Y_sq);
    r.lower_ok = r.inner_sq <= r.lifted_sq;
    r.upper_ok = r.lifted_sq <= r.alpha_prime_sq * r.inner_sq;
    r.max_lower_ok = mx <= r.X_sq;
    r.max_upper_ok = r.X_sq <= 4 * mx;
    return r;
}

TransposeCheck transpose_identity(const RatVector& alpha, const RatMultivector& beta, const RatMultivector& gamma) {
    const RatMultivector a = as_mv(alpha);
    if (beta.k + 1 + gamma.k != a.n) throw InvalidArgument("grades of beta and gamma must add up to n - 1");
    TransposeCheck c;
    c.left = wedge(beta, wedge(a, gamma)).coeffs[0];
    c.right = wedge(wedge(a, beta), gamma).coeffs[0];
    c.sign = beta.k % 2 ? -1 : 1;
    c.ok = c.left == c.right * c.sign && abs(c.left) == abs(c.right);
    return c;
}

TransferReport bv_transfer_check(const CertVector& alpha, int d, const std::vector<RatVector>& thetas,
                                 const TransferOptions& opts, std::uint64_t identity_seed,
                                 std::size_t identity_trials, std::string instance) {
    const int n = static_cast<int>(alpha.size());
    GrassmannOptions go;
    go.estimate = opts.estimate;
    check_limits(n, d, go);
    const std::size_t M = binomial(n, d + 1);
    for (const auto& th : thetas)
        if (static_cast<std::size_t>(th.size()) != M) throw InvalidArgument("theta must have C(n, d+1) coordinates");

    TransferReport rep;
    rep.instance = std::move(instance);
    rep.tolerance = opts.tolerance;

    // pairing of alpha ^ . on complementary grades, with a rational stand-in for alpha
    RatVector aq(n);
    for (int i = 0; i < n; ++i) aq[i] = alpha[i].enclose(64).lo;
    std::mt19937_64 rng(identity_seed);
    std::uniform_int_distribution<int> coef(-9, 9);
    std::size_t identity_ok = 0;
    for (std::size_t it = 0; it < identity_trials; ++it) {
        RatMultivector beta = RatMultivector::zero(n, n - d - 1), gamma = RatMultivector::zero(n, d);
        for (auto& c : beta.coeffs) c = Rational(coef(rng), 1 + (coef(rng) + 9) % 4);
        for (auto& c : gamma.coeffs) c = Rational(coef(rng), 1 + (coef(rng) + 9) % 4);
        identity_ok += transpose_identity(aq, beta, gamma).ok;
    }

    ExponentEstimate omega_hat;
    try {
        omega_hat = intermediate_exponents(alpha, n - 1 - d, CertVector(), go).uniform;
    } catch (const PrecisionExhausted& e) {
        rep.note = e.what();
        return rep;
    } catch (const BudgetExceeded& e) {
        rep.note = e.what();
        return rep;
    }
    rep.estimates.push_back({"omega_hat_" + std::to_string(n - 1 - d) + "(alpha)", omega_hat});
    rep.bound = bl_bound(ExtRational::from_estimate(omega_hat));
    evaluate_samples(
        rep, thetas, [&](const RatVector& th) { return intermediate_exponent(alpha, d, to_cert(th), Flavor::ordinary, go); },
        opts);

    const std::string ident = "transpose identity " + std::to_string(identity_ok) + "/" + std::to_string(identity_trials);
    if (identity_ok != identity_trials) {
        rep.verdict = Verdict::violated;
        rep.note = ident + (rep.note.empty() ? "" : "; " + rep.note);
    } else {
        rep.note = rep.note.empty() ? ident : ident + "; " + rep.note;
    }
    return rep;
}

}  // namespace dioph
