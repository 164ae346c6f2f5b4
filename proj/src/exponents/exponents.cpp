#include "dioph/exponents/exponents.hpp"

#include "dioph/numerics/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace dioph {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ScalePoint {
    Witness w;
    double logT;
    double nlD;  // -ln(error), +inf for an exact zero
};

Rational dyadic_rate(double x) {
    return Rational(static_cast<long long>(std::floor(x * kRateDenominator)), kRateDenominator);
}

// Largest j / kRateDenominator with D <= T^-rate, started from the rigorous log bounds.
Rational certified_rate(const CertReal& D, const Scale& T, double logT, const LogInterval& lD) {
    // slightly pessimistic start; every candidate is then checked exactly
    long j = static_cast<long>(std::floor(-lD.hi / (logT * (1 + 1e-12)) * kRateDenominator));
    const CertReal Tv = T.value();
    for (;; --j) {
        Rational rho(j, kRateDenominator);
        Ordering o = try_compare(D, pow(Tv, Rational(-rho)));
        if (o == Ordering::less || o == Ordering::equal) return rho;
    }
}

Scale scale_of(const CertReal& v) {
    if (v.is_exact()) return {v.exact_value(), 1};
    if (auto pf = v.power_form()) return {pf->base, pf->exponent};
    throw InvalidArgument("scale is not a rational power");
}

ScalePoint make_point(const Scale& T, const CertReal& D, IntVector q, IntVector p, double cap) {
    ScalePoint sp;
    sp.w.T = T;
    sp.w.q = std::move(q);
    sp.w.p = std::move(p);
    sp.logT = T.log();
    if (D.is_zero()) {
        sp.nlD = kInf;
        sp.w.log_error = -kInf;
        sp.w.rate = dyadic_rate(cap);
        return sp;
    }
    LogInterval lD = log_enclosure(D);
    sp.nlD = -lD.mid();
    sp.w.log_error = lD.mid();
    sp.w.rate = certified_rate(D, T, sp.logT, lD);
    return sp;
}

double ls_slope(const std::vector<std::pair<double, double>>& pts, bool& ok) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = static_cast<double>(pts.size());
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double den = k * sxx - sx * sx;
    ok = pts.size() >= 2 && den > 1e-12 * k * sxx;
    return ok ? (k * sxy - sx * sy) / den : 0;
}

// Per-scale data shared by the ordinary and uniform estimates.
struct Collected {
    std::vector<ScalePoint> pts;
    std::vector<std::pair<double, double>> slope_pts;
    Scale Tmin, Tmax;
    Regime regime = Regime::weighted;
    ShiftKind shift = ShiftKind::homogeneous;
    std::string method;
};

ExponentEstimate finish(const Collected& c, Flavor flavor, const EstimateOptions& o) {
    std::vector<ScalePoint> pts = c.pts;
    std::stable_sort(pts.begin(), pts.end(), [](const ScalePoint& a, const ScalePoint& b) { return a.logT < b.logT; });
    if (pts.empty()) throw InvalidArgument("empty search range");
    const auto& slope_pts = c.slope_pts;
    const Scale& Tmax = c.Tmax;
    ExponentEstimate est;
    est.kind = {flavor, c.regime, c.shift};
    est.T_min = c.Tmin;
    est.T_max = Tmax;
    est.method = c.method;

    const double cut = to_double(o.tail_fraction) * Tmax.log();
    std::size_t tb = 0;
    while (tb < pts.size() && pts[tb].logT < cut) ++tb;
    if (pts.size() - tb < o.min_tail) tb = pts.size() > o.min_tail ? pts.size() - o.min_tail : 0;
    est.tail_begin = tb;

    const Rational cap_rate = dyadic_rate(o.cap);
    double env = kInf;
    std::optional<Rational> lb;
    est.witnessed_max = -kInf;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        est.witnessed_max = std::max(est.witnessed_max, to_double(pts[i].w.rate));
        if (i < tb) continue;
        env = std::min(env, pts[i].nlD / pts[i].logT);
        if (!lb || pts[i].w.rate < *lb) lb = pts[i].w.rate;
    }
    double point = env;
    if (flavor == Flavor::ordinary) {
        bool ok = false;
        double slope = ls_slope(slope_pts, ok);
        if (ok) point = std::max(point, slope);
    }
    est.lower_bound = *lb;
    if (!(point <= o.cap)) {
        point = o.cap;
        est.capped = true;
    }
    if (est.lower_bound > cap_rate) est.lower_bound = cap_rate;
    est.point_estimate = std::max(point, to_double(est.lower_bound));
    for (auto& p : pts) est.witnesses.push_back(std::move(p.w));
    return est;
}

bool is_homogeneous(const CertVector& theta) {
    for (Eigen::Index i = 0; i < theta.size(); ++i)
        if (!theta[i].is_zero()) return false;
    return true;
}

void check_problem(const TargetMatrix& A, const CertVector& theta, const WeightVector* s, const WeightVector* r) {
    if (A.rows() == 0 || A.cols() == 0) throw InvalidArgument("empty target matrix");
    if (theta.size() != A.rows()) throw InvalidArgument("theta must have one entry per row of A");
    if (s && s->size() != static_cast<std::size_t>(A.rows())) throw InvalidArgument("s must have one weight per row");
    if (r && r->size() != static_cast<std::size_t>(A.cols()))
        throw InvalidArgument("r must have one weight per column");
}

Rational factorial(int k) {
    Integer f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return Rational(f);
}

bool liouville_instance(const TargetMatrix& A, const CertVector& theta) {
    if (A.rows() != 1 || A.cols() != 1 || !is_homogeneous(theta)) return false;
    auto l = A(0, 0).liouville_data();
    return l && l->coeff == 1 && l->base >= 2;
}

// For x = sum_j b^-j!, q = b^k! and p = sum_{j<=k} b^(k!-j!):
//   0 < q x - p = sum_{j>k} b^(k!-j!) <= 2 b^(k!-(k+1)!) <= b^(k!-(k+1)!+1).
// So the error is <= T^-rate whenever rate * log_b T <= (k+1)! - k! - 1, for any T > q.
Collected liouville_points(const Integer& b, const EstimateOptions& o) {
    const int K = o.liouville_terms;
    if (K < 2) throw InvalidArgument("liouville_terms must be at least 2");
    const double lb_ = std::log(b.convert_to<double>());
    std::vector<ScalePoint> pts;
    std::vector<std::pair<double, double>> slope_pts;
    for (int k = 1; k <= K; ++k) {
        const Rational fk = factorial(k), fk1 = factorial(k + 1);
        const Rational gain = fk1 - fk - 1;
        IntVector q, p;
        std::string symbolic;
        Integer fki = numer(fk);
        if (fki * static_cast<long>(std::ceil(std::log2(b.convert_to<double>()))) <= 62) {
            unsigned long e = fki.convert_to<unsigned long>();
            Integer qi = ipow(b, e), pi = 0;
            for (int j = 1; j <= k; ++j) pi += ipow(b, e - numer(factorial(j)).convert_to<unsigned long>());
            q = IntVector::Constant(1, to_int64(qi));
            p = IntVector::Constant(1, to_int64(pi));
        } else {
            symbolic = "q = " + to_string(b) + "^" + to_string(fk) + ", p = sum_{j=1.." + std::to_string(k) + "} " +
                       to_string(b) + "^(" + to_string(fk) + " - j!)";
        }
        const double log_err = (to_double(fk) - to_double(fk1)) * lb_;
        std::vector<Rational> scales_k{fk1};
        if (fk + 1 < fk1) scales_k.insert(scales_k.begin(), fk + 1);
        for (const Rational& e : scales_k) {
            ScalePoint sp;
            sp.w.T = {Rational(b), e};
            sp.w.q = q;
            sp.w.p = p;
            sp.w.symbolic = symbolic;
            sp.w.rate = Rational(floor_int(gain * kRateDenominator / e)) / kRateDenominator;
            sp.w.log_error = log_err;
            sp.logT = to_double(e) * lb_;
            sp.nlD = -log_err;
            pts.push_back(std::move(sp));
        }
        slope_pts.emplace_back(to_double(fk) * lb_, -log_err);
    }
    return {std::move(pts), std::move(slope_pts), {Rational(b), 2}, {Rational(b), factorial(K + 1)},
            Regime::weighted, ShiftKind::homogeneous, "liouville"};
}

std::vector<Scale> grid_scales(const TGrid& g) {
    std::vector<Scale> out;
    for (const Rational& e : g.log2_points()) out.push_back({Rational(2), e});
    if (out.empty()) throw InvalidArgument("empty search range");
    return out;
}

Collected grid_weighted(const TargetMatrix& A, const CertVector& theta, const WeightVector& s, const WeightVector& r,
                        const EstimateOptions& o) {
    check_problem(A, theta, &s, &r);
    const bool homogeneous = is_homogeneous(theta);
    if (homogeneous && liouville_instance(A, theta) && s.size() == 1 && r.size() == 1)
        return liouville_points(A(0, 0).liouville_data()->base, o);

    const auto scales = grid_scales(o.grid);
    const Rational N_bound(ceil_int(scales.back().value().enclose(64).hi));
    BestApproxOptions bo;
    bo.budget = o.budget;
    if (!homogeneous) {
        bo.shift = theta;
        bo.zero_as_sentinel = true;
    }
    TargetMatrix At = A.transpose();
    BestApproxSequence seq = compute_best_approx(At, r, s, N_bound, bo);

    std::vector<ScalePoint> pts;
    std::vector<std::pair<double, double>> slope_pts;
    std::size_t idx = 0;
    bool any = false;
    for (const Scale& T : scales) {
        const CertReal Tv = T.value();
        while (idx < seq.entries.size() && compare(seq.entries[idx].Y.value(), Tv) < 0) {
            ++idx;
            any = true;
        }
        if (!any) continue;  // nothing with |q|_r < T
        const auto& e = seq.entries[idx - 1];
        pts.push_back(make_point(T, e.M.value(), e.X, e.p_witness, o.cap));
        slope_pts.emplace_back(pts.back().logT, pts.back().nlD);
    }
    // an exact hit makes every later scale infinite; the slope is meaningless then
    if (!pts.empty() && std::isinf(pts.back().nlD)) slope_pts.clear();
    return {std::move(pts), std::move(slope_pts), scales.front(), scales.back(), Regime::weighted,
            homogeneous ? ShiftKind::homogeneous : ShiftKind::inhomogeneous, "grid"};
}

Collected from_sequence(const BestApproxSequence& seq, const EstimateOptions& o) {
    const auto& E = seq.entries;
    if (E.empty()) throw InvalidArgument("empty search range");
    const Scale Tmin{Rational(2), o.grid.log2_min};
    const CertReal Tmin_v = Tmin.value();
    std::vector<ScalePoint> pts;
    std::vector<std::pair<double, double>> slope_pts;
    // X_k is the best choice for every T in (Y_k, Y_{k+1}]; the weakest scale is Y_{k+1}.
    for (std::size_t k = 0; k < E.size(); ++k) {
        std::optional<Scale> T;
        if (k + 1 < E.size()) {
            T = scale_of(E[k + 1].Y.value());
        } else if (seq.exhausted_up_to > 0 && compare(CertReal(seq.exhausted_up_to), E[k].Y.value()) > 0) {
            T = Scale{seq.exhausted_up_to, 1};
        }
        const bool zero = E[k].M.is_zero();
        if (!zero && compare(E[k].Y.value(), Tmin_v) >= 0)
            slope_pts.emplace_back(E[k].Y.log_value().mid(), -E[k].M.log_value().mid());
        if (!T || compare(T->value(), Tmin_v) < 0) continue;
        pts.push_back(make_point(*T, E[k].M.value(), E[k].X, E[k].p_witness, o.cap));
    }
    if (seq.ends_in_zero) slope_pts.clear();
    const Scale Tmax = pts.empty() ? Tmin : pts.back().w.T;
    return {std::move(pts), std::move(slope_pts), Tmin, Tmax, Regime::weighted, ShiftKind::homogeneous, "sequence"};
}

// Fractional parts of a matrix in long double for the multiplicative prefilter.
struct ApproxRows {
    Eigen::Index m, n;
    std::vector<long double> a, t;
    ApproxRows(const TargetMatrix& A, const CertVector& theta) : m(A.rows()), n(A.cols()) {
        auto frac = [](const CertReal& x) {
            Interval I = x.enclose(96);
            Rational f = I.lo - Rational(floor_int(I.lo));
            return static_cast<long double>(to_double(f)) +
                   static_cast<long double>(to_double(Rational(f - Rational(to_double(f)))));
        };
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < n; ++j) a.push_back(frac(A(i, j)));
        for (Eigen::Index i = 0; i < m; ++i) t.push_back(frac(theta[i]));
    }
};

struct MultCand {
    IntVector q;
    long double lo, hi;  // bounds for Pi(Aq - p - theta)
};

// Largest integer strictly below each grid scale 2^(k/steps): P^steps < 2^k.
std::vector<std::int64_t> integer_floors(const std::vector<Rational>& log2s, int steps) {
    std::vector<std::int64_t> out;
    for (const Rational& e : log2s) {
        unsigned long k = numer(e * steps).convert_to<unsigned long>();
        out.push_back(to_int64(iroot_floor(ipow(Integer(2), k) - 1, static_cast<unsigned long>(steps))));
    }
    return out;
}

Collected grid_multiplicative(const TargetMatrix& A, const CertVector& theta, const EstimateOptions& o) {
    check_problem(A, theta, nullptr, nullptr);
    const bool homogeneous = is_homogeneous(theta);
    const auto scales = grid_scales(o.grid);
    const auto log2s = o.grid.log2_points();
    const Eigen::Index m = A.rows(), n = A.cols();
    const Integer Pmax = floor_int(scales.back().value().enclose(64).hi);
    if (!fits_int64(Pmax)) throw BudgetExceeded("estimate_multiplicative", 0);
    const std::int64_t P = to_int64(Pmax);
    const ApproxRows R(A, theta);
    const auto floors = integer_floors(log2s, o.grid.steps_per_octave);

    std::vector<std::vector<MultCand>> buckets(scales.size());
    std::vector<long double> bucket_hi(scales.size(), std::numeric_limits<long double>::infinity());
    std::uint64_t visited = 0;
    IntVector q = IntVector::Zero(n);
    const long double eps = std::ldexp(1.0L, -58);

    auto visit = [&](std::int64_t pi_plus) {
        if (++visited > o.budget) throw BudgetExceeded("estimate_multiplicative", visited);
        long double l1 = 0;
        for (Eigen::Index j = 0; j < n; ++j) l1 += std::fabs(static_cast<long double>(q[j]));
        const long double E = (l1 + 4) * eps;
        long double lo = 1, hi = 1;
        for (Eigen::Index i = 0; i < m; ++i) {
            long double y = -R.t[static_cast<std::size_t>(i)];
            for (Eigen::Index j = 0; j < n; ++j)
                if (q[j] != 0) y += static_cast<long double>(q[j]) * R.a[static_cast<std::size_t>(i * n + j)];
            y -= std::floor(y);
            long double d = std::min(y, 1 - y);
            lo *= std::max(0.0L, d - E);
            hi *= d + E;
        }
        std::size_t b = static_cast<std::size_t>(std::lower_bound(floors.begin(), floors.end(), pi_plus) - floors.begin());
        if (b >= buckets.size() || lo > bucket_hi[b]) return;
        bucket_hi[b] = std::min(bucket_hi[b], hi);
        buckets[b].push_back({q, lo, hi});
    };

    // q with prod max(1, |q_j|) <= P; canonical (first nonzero coordinate positive) when homogeneous
    auto rec = [&](auto&& self, Eigen::Index j, std::int64_t rem, std::int64_t prod, bool zero_prefix) -> void {
        if (j == n) {
            if (!zero_prefix) visit(prod);
            return;
        }
        const std::int64_t lo = zero_prefix && homogeneous ? 0 : -rem;
        for (std::int64_t v = lo; v <= rem; ++v) {
            std::int64_t a = v < 0 ? -v : v;
            q[j] = v;
            self(self, j + 1, a > 1 ? rem / a : rem, prod * std::max<std::int64_t>(1, a), zero_prefix && v == 0);
        }
        q[j] = 0;
    };
    rec(rec, 0, P, 1, true);

    // exact values on demand
    std::map<std::vector<std::int64_t>, std::pair<CertReal, IntVector>> exact;
    auto exact_of = [&](const IntVector& x) -> const std::pair<CertReal, IntVector>& {
        std::vector<std::int64_t> key(x.data(), x.data() + x.size());
        auto it = exact.find(key);
        if (it != exact.end()) return it->second;
        CertVector y(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            CertReal acc = -theta[i];
            for (Eigen::Index j = 0; j < n; ++j)
                if (x[j] != 0) acc += CertReal(static_cast<long long>(x[j])) * A(i, j);
            y[i] = acc;
        }
        Residual res = closest_integer_residual(y, WeightVector::uniform(static_cast<std::size_t>(m)));
        CertReal pi = 1;
        for (const auto& c : res.components) pi *= abs(c);
        return exact.emplace(key, std::make_pair(pi, res.p)).first->second;
    };

    std::vector<ScalePoint> pts;
    std::vector<std::pair<double, double>> slope_pts;
    std::vector<MultCand> live;
    long double live_hi = std::numeric_limits<long double>::infinity();
    for (std::size_t k = 0; k < scales.size(); ++k) {
        for (auto& c : buckets[k]) live.push_back(std::move(c));
        live_hi = std::min(live_hi, bucket_hi[k]);
        std::erase_if(live, [&](const MultCand& c) { return c.lo > live_hi; });
        if (live.empty()) continue;
        const MultCand* best = nullptr;
        for (const auto& c : live) {
            if (!best) {
                best = &c;
                continue;
            }
            int cmpv = compare(exact_of(c.q).first, exact_of(best->q).first);
            if (cmpv < 0 || (cmpv == 0 && std::lexicographical_compare(c.q.data(), c.q.data() + n, best->q.data(),
                                                                       best->q.data() + n)))
                best = &c;
        }
        const auto& ex = exact_of(best->q);
        pts.push_back(make_point(scales[k], ex.first, best->q, ex.second, o.cap));
        slope_pts.emplace_back(pts.back().logT, pts.back().nlD);
    }
    if (!pts.empty() && std::isinf(pts.back().nlD)) slope_pts.clear();
    return {std::move(pts), std::move(slope_pts), scales.front(), scales.back(), Regime::multiplicative,
            homogeneous ? ShiftKind::homogeneous : ShiftKind::inhomogeneous, "grid"};
}

}  // namespace

std::string ExponentKind::str() const {
    std::string out = flavor == Flavor::ordinary ? "ordinary" : "uniform";
    out += regime == Regime::weighted ? "/weighted" : "/multiplicative";
    out += shift == ShiftKind::homogeneous ? "/homogeneous" : "/inhomogeneous";
    return out;
}

CertReal Scale::value() const { return pow(CertReal(base), exponent); }

double Scale::log() const { return to_double(exponent) * std::log(to_double(base)); }

std::string Scale::str() const {
    if (exponent == 1) return to_string(base);
    return to_string(base) + "^(" + to_string(exponent) + ")";
}

std::vector<Rational> TGrid::log2_points() const {
    if (steps_per_octave < 1) throw InvalidArgument("steps_per_octave must be positive");
    std::vector<Rational> out;
    Integer k = ceil_int(log2_min * steps_per_octave), k1 = floor_int(log2_max * steps_per_octave);
    for (; k <= k1; ++k) out.push_back(Rational(k) / steps_per_octave);
    return out;
}

double TGrid::log_step() const { return std::log(2.0) / steps_per_octave; }

BestApproxSequence exponent_sequence(const TargetMatrix& A, const WeightVector& s, const WeightVector& r,
                                     const Rational& N_bound, const BestApproxOptions& opts) {
    TargetMatrix At = A.transpose();
    return compute_best_approx(At, r, s, N_bound, opts);
}

ExponentEstimate estimate_ordinary(const BestApproxSequence& seq, const EstimateOptions& opts) {
    return finish(from_sequence(seq, opts), Flavor::ordinary, opts);
}

ExponentEstimate estimate_uniform(const BestApproxSequence& seq, const EstimateOptions& opts) {
    return finish(from_sequence(seq, opts), Flavor::uniform, opts);
}

ExponentEstimate estimate_ordinary(const TargetMatrix& A, const CertVector& theta, const WeightVector& s,
                                   const WeightVector& r, const EstimateOptions& opts) {
    return finish(grid_weighted(A, theta, s, r, opts), Flavor::ordinary, opts);
}

ExponentEstimate estimate_uniform(const TargetMatrix& A, const CertVector& theta, const WeightVector& s,
                                  const WeightVector& r, const EstimateOptions& opts) {
    return finish(grid_weighted(A, theta, s, r, opts), Flavor::uniform, opts);
}

EstimatePair estimate_weighted(const TargetMatrix& A, const CertVector& theta, const WeightVector& s,
                               const WeightVector& r, const EstimateOptions& opts) {
    Collected c = grid_weighted(A, theta, s, r, opts);
    return {finish(c, Flavor::ordinary, opts), finish(c, Flavor::uniform, opts)};
}

EstimatePair estimate_weighted(const BestApproxSequence& seq, const EstimateOptions& opts) {
    Collected c = from_sequence(seq, opts);
    return {finish(c, Flavor::ordinary, opts), finish(c, Flavor::uniform, opts)};
}

EstimatePair estimate_from_minima(const std::vector<ScaleMinimum>& minima, ShiftKind shift,
                                  const EstimateOptions& opts, std::string method) {
    if (minima.empty()) throw InvalidArgument("empty search range");
    Collected c;
    for (const auto& sm : minima) {
        c.pts.push_back(make_point(sm.T, sm.D, sm.q, sm.p, opts.cap));
        c.slope_pts.emplace_back(c.pts.back().logT, c.pts.back().nlD);
    }
    if (std::isinf(c.pts.back().nlD)) c.slope_pts.clear();
    c.Tmin = minima.front().T;
    c.Tmax = minima.back().T;
    c.shift = shift;
    c.method = std::move(method);
    return {finish(c, Flavor::ordinary, opts), finish(c, Flavor::uniform, opts)};
}

ExponentEstimate estimate_multiplicative(const TargetMatrix& A, const CertVector& theta, Flavor flavor,
                                         const EstimateOptions& opts) {
    return finish(grid_multiplicative(A, theta, opts), flavor, opts);
}

bool witness_holds(const Witness& w, const TargetMatrix& A, const CertVector& theta, const WeightVector& s,
                   const WeightVector& r, Regime regime) {
    if (!w.symbolic.empty() || w.q.size() != A.cols() || w.p.size() != A.rows()) return false;
    bool nonzero = false;
    for (Eigen::Index j = 0; j < w.q.size(); ++j) nonzero |= w.q[j] != 0;
    if (!nonzero) return false;
    CertVector y(A.rows());
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        CertReal acc = -theta[i] - CertReal(static_cast<long long>(w.p[i]));
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            if (w.q[j] != 0) acc += CertReal(static_cast<long long>(w.q[j])) * A(i, j);
        y[i] = acc;
    }
    const CertReal T = w.T.value();
    CertReal size, err;
    if (regime == Regime::weighted) {
        size = weighted_norm(w.q, r).value();
        err = weighted_norm(y, s).value();
    } else {
        MultNorms mn = mult_norms(w.q, y);
        size = mn.pi_plus.value();
        err = mn.pi.value();
    }
    return compare(size, T) < 0 && compare(err, pow(T, Rational(-w.rate))) <= 0;
}

}  // namespace dioph
