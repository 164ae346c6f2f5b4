#include "dioph/bestapprox/bestapprox.hpp"

#include "dioph/numerics/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dioph {

namespace {

using u128 = unsigned __int128;
constexpr u128 kHalf = u128(1) << 127;
constexpr u128 kMax = ~u128(0);

const Integer& two64() {
    static const Integer v = ipow(Integer(2), 64);
    return v;
}

const Integer& two128() {
    static const Integer v = ipow(Integer(2), 128);
    return v;
}

u128 to_u128(const Integer& v) {
    Integer hi = v / two64(), lo = v % two64();
    return (u128(hi.convert_to<unsigned long long>()) << 64) | u128(lo.convert_to<unsigned long long>());
}

// floor(frac(a) 2^128); the error is below 2^-127 modulo 1.
u128 frac_fixed(const CertReal& a) {
    Integer v = floor_int(a.enclose(200).lo * Rational(two128())) % two128();
    if (v < 0) v += two128();
    return to_u128(v);
}

// Upper bound for x 2^128, saturating at 2^127 and above.
u128 fixed_upper(const CertReal& x) {
    Rational hi = x.enclose(140).hi;
    hi += hi / Rational(ipow(Integer(2), 40));
    if (hi >= Rational(1, 2)) return kMax;
    return to_u128(ceil_int(hi * Rational(two128())));
}

u128 dist_fixed(u128 y) { return y <= kHalf ? y : u128(0) - y; }

u128 sat_add(u128 a, u128 b) { return a > kMax - b ? kMax : a + b; }

std::uint64_t uabs(std::int64_t v) { return v < 0 ? 0 - static_cast<std::uint64_t>(v) : static_cast<std::uint64_t>(v); }

// Fractional parts of the entries of A, row-major m x n, and of an optional shift.
struct FixedMatrix {
    Eigen::Index m = 0, n = 0;
    std::vector<u128> a;
    std::vector<u128> t;  // zero without a shift
    bool shifted = false;

    explicit FixedMatrix(const TargetMatrix& A, const std::optional<CertVector>& shift = std::nullopt)
        : m(A.rows()), n(A.cols()), a(static_cast<std::size_t>(m * n)), t(static_cast<std::size_t>(n), 0) {
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < n; ++j) a[static_cast<std::size_t>(i * n + j)] = frac_fixed(A(i, j));
        if (shift) {
            shifted = true;
            for (Eigen::Index j = 0; j < n; ++j) t[static_cast<std::size_t>(j)] = frac_fixed((*shift)[j]);
        }
    }
    const u128* row(Eigen::Index i) const { return a.data() + i * n; }

    // tA X - shift modulo 1 in units of 2^-128, plus the accumulated error bound in the same units.
    void apply(const IntVector& X, std::vector<u128>& y, u128& err) const {
        for (std::size_t j = 0; j < y.size(); ++j) y[j] = u128(0) - t[j];
        std::uint64_t l1 = shifted ? 1 : 0;
        for (Eigen::Index i = 0; i < m; ++i) {
            if (X[i] == 0) continue;
            l1 += uabs(X[i]);
            u128 xi = static_cast<u128>(static_cast<__int128>(X[i]));
            const u128* r = row(i);
            for (Eigen::Index j = 0; j < n; ++j) y[static_cast<std::size_t>(j)] += xi * r[j];
        }
        err = 2 * u128(l1) + 2;
    }
};

bool passes(const std::vector<u128>& y, u128 err, const std::vector<u128>& thr) {
    for (std::size_t j = 0; j < y.size(); ++j)
        if (dist_fixed(y[j]) > sat_add(thr[j], err)) return false;
    return true;
}

// base^e with base >= 0.
struct NVal {
    Integer base;
    Rational e;
};

int cmp_int(const Integer& a, const Integer& b) { return a < b ? -1 : (a > b ? 1 : 0); }

int cmp_nval(const NVal& a, const NVal& b) {
    if (a.base == 0 || b.base == 0) return cmp_int(a.base, b.base);
    if (a.base == 1 && b.base == 1) return 0;
    if (a.e == b.e) return cmp_int(a.base, b.base);
    if (a.base == b.base) return a.e < b.e ? -1 : (a.e > b.e ? 1 : 0);
    // raise both to the power denom(a.e) denom(b.e)
    unsigned long pa = numer(a.e).convert_to<unsigned long>() * denom(b.e).convert_to<unsigned long>();
    unsigned long pb = numer(b.e).convert_to<unsigned long>() * denom(a.e).convert_to<unsigned long>();
    return cmp_int(ipow(a.base, pa), ipow(b.base, pb));
}

NVal size_of(const IntVector& X, const WeightVector& s) {
    NVal best{Integer(0), Rational(1)};
    for (Eigen::Index i = 0; i < X.size(); ++i) {
        if (X[i] == 0) continue;
        NVal v{Integer(static_cast<long long>(uabs(X[i]))), Rational(1) / s[static_cast<std::size_t>(i)]};
        if (cmp_nval(v, best) > 0) best = v;
    }
    return best;
}

CertReal nval_value(const NVal& v) { return pow(CertReal(v.base), v.e); }

std::int64_t bound_coord(const Rational& B, const Rational& w, std::uint64_t visited) {
    // floor(B^w) = floor(floor(B^num)^(1/den))
    Integer v = iroot_floor(floor_int(rpow(B, numer(w).convert_to<long>())), denom(w).convert_to<unsigned long>());
    if (v > Integer(std::int64_t(1) << 62)) throw BudgetExceeded("compute_best_approx", visited);
    return to_int64(v);
}

bool lex_less(const IntVector& a, const IntVector& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

// X with |X_i| <= c_i, minus those with |X_i| <= inner_i for every i, minus X = 0, and
// unless all_signs only canonical X (first nonzero coordinate positive). Calls
// run(X, lo, hi) once per range of the last coordinate.
template <class F>
void for_each_shell_run(const std::vector<std::int64_t>& c, const std::vector<std::int64_t>& inner, F&& run,
                        bool all_signs = false) {
    const std::size_t m = c.size();
    const std::size_t last = m - 1;
    IntVector X = IntVector::Zero(static_cast<Eigen::Index>(m));
    std::vector<std::int64_t> lo(m), hi(m);
    for (std::size_t i = 0; i < last; ++i) {
        lo[i] = i == 0 && !all_signs ? 0 : -c[i];
        hi[i] = c[i];
        X[static_cast<Eigen::Index>(i)] = lo[i];
    }
    for (;;) {
        bool zero_prefix = true, canonical = true, inside = true;
        for (std::size_t i = 0; i < last; ++i) {
            std::int64_t x = X[static_cast<Eigen::Index>(i)];
            if (zero_prefix && x != 0) {
                zero_prefix = false;
                canonical = all_signs || x > 0;
            }
            if (static_cast<std::int64_t>(uabs(x)) > inner[i]) inside = false;
        }
        if (canonical) {
            std::int64_t a = zero_prefix && !all_signs ? 1 : -c[last], b = c[last];
            // excluded middle range of the last coordinate
            std::int64_t e = inside && inner[last] >= 0 ? inner[last] : (zero_prefix ? 0 : -1);
            if (e >= 0) {
                if (a <= -e - 1) run(X, a, std::min(b, -e - 1));
                std::int64_t from = std::max(a, e + 1);
                if (from <= b) run(X, from, b);
            } else if (a <= b) {
                run(X, a, b);
            }
        }
        std::size_t k = 0;
        while (k < last) {
            auto& x = X[static_cast<Eigen::Index>(k)];
            if (x < hi[k]) {
                ++x;
                break;
            }
            x = lo[k];
            ++k;
        }
        if (k == last) return;
    }
}

void check_shapes(const TargetMatrix& A, const WeightVector& s, const WeightVector& r) {
    if (A.rows() == 0 || A.cols() == 0) throw InvalidArgument("empty target matrix");
    if (s.size() != static_cast<std::size_t>(A.rows()) || r.size() != static_cast<std::size_t>(A.cols()))
        throw InvalidArgument("weight dimensions do not match the target matrix");
}

std::vector<std::string> to_strings(const IntVector& X) {
    std::vector<std::string> out;
    for (Eigen::Index i = 0; i < X.size(); ++i) out.push_back(std::to_string(X[i]));
    return out;
}

}  // namespace

bool Residual::is_zero() const {
    for (const auto& c : components)
        if (sign(c) != 0) return false;
    return true;
}

Residual closest_integer_residual(const CertVector& y, const WeightVector& w) {
    if (static_cast<std::size_t>(y.size()) != w.size()) throw InvalidArgument("residual: weight dimension mismatch");
    const CertReal half(Rational(1, 2)), neg_half(Rational(-1, 2));
    Residual res;
    res.p.resize(y.size());
    for (Eigen::Index j = 0; j < y.size(); ++j) {
        Interval I = y[j].enclose(64);
        Integer p = floor_int((I.lo + I.hi) / 2 + Rational(1, 2));
        CertReal e;
        for (;;) {
            e = y[j] - CertReal(p);
            if (compare(e, half) > 0) {
                ++p;
                continue;
            }
            int c = compare(e, neg_half);
            if (c < 0) {
                --p;
                continue;
            }
            if (c == 0) {
                --p;
                e = half;
            }
            break;
        }
        res.p[j] = to_int64(p);
        res.components.push_back(e);
        CertReal term = pow(abs(e), Rational(1) / w[static_cast<std::size_t>(j)]);
        res.value = j == 0 ? term : max(res.value, term);
    }
    return res;
}

Residual approximation_error(const TargetMatrix& A, const IntVector& X, const WeightVector& r) {
    return approximation_error(A, X, r, CertVector::Constant(A.cols(), CertReal()));
}

Residual approximation_error(const TargetMatrix& A, const IntVector& X, const WeightVector& r,
                             const CertVector& shift) {
    CertVector y(A.cols());
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
        CertReal acc = shift[j].is_zero() ? CertReal() : -shift[j];
        for (Eigen::Index i = 0; i < A.rows(); ++i)
            if (X[i] != 0) acc += CertReal(static_cast<long long>(X[i])) * A(i, j);
        y[j] = acc;
    }
    return closest_integer_residual(y, r);
}

BestApproxSequence compute_best_approx(const TargetMatrix& A, const WeightVector& s, const WeightVector& r,
                                       const Rational& N_bound, const BestApproxOptions& opts) {
    check_shapes(A, s, r);
    const Eigen::Index m = A.rows();
    const std::size_t n = static_cast<std::size_t>(A.cols());
    BestApproxSequence seq;
    seq.exhausted_up_to = N_bound;
    if (N_bound < 1) return seq;  // every nonzero X has N(X) >= 1
    seq.exhausted_up_to = 0;

    if (opts.shift && static_cast<std::size_t>(opts.shift->size()) != n)
        throw InvalidArgument("shift dimension does not match the target matrix");
    const FixedMatrix F(A, opts.shift);
    std::optional<CertReal> record;
    std::vector<u128> thr(n, kMax);
    auto update_thresholds = [&] {
        for (std::size_t j = 0; j < n; ++j) thr[j] = fixed_upper(pow(*record, r[j]));
    };

    std::vector<std::int64_t> inner(static_cast<std::size_t>(m), -1), c(static_cast<std::size_t>(m));
    std::vector<u128> y(n), prefix(n);
    Rational B = 1;
    for (;;) {
        const Rational Bs = std::min(B, N_bound);
        for (Eigen::Index i = 0; i < m; ++i)
            c[static_cast<std::size_t>(i)] = bound_coord(Bs, s[static_cast<std::size_t>(i)], seq.enumerated);

        struct Cand {
            IntVector X;
            NVal N;
        };
        std::vector<Cand> cands;
        const u128* last_row = F.row(m - 1);
        for_each_shell_run(c, inner, [&](IntVector& X, std::int64_t lo, std::int64_t hi) {
            std::uint64_t len = static_cast<std::uint64_t>(hi - lo) + 1;
            if (seq.enumerated + len > opts.budget) throw BudgetExceeded("compute_best_approx", seq.enumerated);
            seq.enumerated += len;
            X[m - 1] = 0;
            u128 err0;
            F.apply(X, prefix, err0);
            for (std::int64_t x = lo; x <= hi; ++x) {
                u128 xv = static_cast<u128>(static_cast<__int128>(x));
                u128 err = err0 + 2 * u128(uabs(x));
                bool ok = true;
                for (std::size_t j = 0; j < n && ok; ++j)
                    ok = dist_fixed(prefix[j] + xv * last_row[j]) <= sat_add(thr[j], err);
                if (!ok) continue;
                X[m - 1] = x;
                cands.push_back({X, size_of(X, s)});
            }
        }, F.shifted);
        std::stable_sort(cands.begin(), cands.end(),
                         [](const Cand& a, const Cand& b) { return cmp_nval(a.N, b.N) < 0; });

        bool stop = false;
        for (std::size_t g0 = 0; g0 < cands.size() && !stop;) {
            std::size_t g1 = g0 + 1;
            while (g1 < cands.size() && cmp_nval(cands[g1].N, cands[g0].N) == 0) ++g1;
            std::optional<Residual> best;
            const IntVector* bestX = nullptr;
            for (std::size_t k = g0; k < g1; ++k) {
                const IntVector& X = cands[k].X;
                if (record) {
                    u128 err;
                    F.apply(X, y, err);
                    if (!passes(y, err, thr)) continue;
                }
                Residual res = opts.shift ? approximation_error(A, X, r, *opts.shift) : approximation_error(A, X, r);
                if (record && compare(res.value, *record) >= 0) continue;
                bool take = !best;
                if (!take) {
                    int cmpv = compare(res.value, best->value);
                    take = cmpv < 0 || (cmpv == 0 && (opts.tie_break == TieBreak::lex_smallest ? lex_less(X, *bestX)
                                                                                              : lex_less(*bestX, X)));
                }
                if (take) {
                    best = std::move(res);
                    bestX = &X;
                }
            }
            if (best) {
                const NVal& N = cands[g0].N;
                bool zero = best->is_zero();
                BestApproxEntry e{*bestX, WeightedValue(nval_value(N)),
                                  WeightedValue(zero ? CertReal() : best->value), best->p};
                if (seq.entries.empty()) seq.unit_shell_min = e.M;
                if (zero) {
                    if (!opts.zero_as_sentinel) throw DegenerateRank(to_strings(*bestX), true);
                    seq.entries.push_back(std::move(e));
                    seq.ends_in_zero = true;
                    stop = true;
                } else {
                    record = best->value;
                    seq.entries.push_back(std::move(e));
                    update_thresholds();
                }
            }
            g0 = g1;
        }
        inner = c;
        seq.exhausted_up_to = Bs;
        if (seq.ends_in_zero) {
            // nothing can improve on an exact zero
            seq.exhausted_up_to = N_bound;
            break;
        }
        if (Bs >= N_bound) break;
        if (opts.max_entries && seq.entries.size() >= opts.max_entries) break;
        B *= 2;
    }
    return seq;
}

RankReport check_rank(const TargetMatrix& A, std::int64_t height_bound, std::uint64_t budget) {
    if (A.rows() == 0 || A.cols() == 0) throw InvalidArgument("empty target matrix");
    const Eigen::Index m = A.rows(), n = A.cols();
    RankReport rep;
    const FixedMatrix F(A);
    std::vector<u128> y(static_cast<std::size_t>(n));
    const std::vector<u128> zero_thr(static_cast<std::size_t>(n), 0);
    std::vector<std::int64_t> inner(static_cast<std::size_t>(m)), c(static_cast<std::size_t>(m));
    std::uint64_t visited = 0;
    bool found = false;
    for (std::int64_t h = 1; h <= height_bound && !found; ++h) {
        std::fill(inner.begin(), inner.end(), h - 1);
        std::fill(c.begin(), c.end(), h);
        for_each_shell_run(c, inner, [&](IntVector& X, std::int64_t lo, std::int64_t hi) {
            for (std::int64_t x = lo; x <= hi && !found; ++x) {
                if (++visited > budget) throw BudgetExceeded("check_rank", visited);
                X[m - 1] = x;
                u128 err;
                F.apply(X, y, err);
                if (!passes(y, err, zero_thr)) continue;
                bool certified = true, relation = true;
                IntVector p(n);
                for (Eigen::Index j = 0; j < n && relation; ++j) {
                    CertReal v;
                    for (Eigen::Index i = 0; i < m; ++i)
                        if (X[i] != 0) v += CertReal(static_cast<long long>(X[i])) * A(i, j);
                    Interval I = v.enclose(64);
                    Integer q = floor_int((I.lo + I.hi) / 2 + Rational(1, 2));
                    p[j] = to_int64(q);
                    Ordering o = try_compare(v, CertReal(q));
                    if (o == Ordering::undecided) certified = false;
                    else if (o != Ordering::equal) relation = false;
                }
                if (!relation) continue;
                found = true;
                rep.status = RankStatus::degenerate;
                rep.witness = X;
                rep.p = p;
                rep.certified = certified;
            }
        });
    }
    if (!found && is_rational(A)) {
        // a common denominator of the first row clears it
        RatMatrix R = exact_matrix(A);
        Integer D = 1;
        for (Eigen::Index j = 0; j < n; ++j) D = lcm(D, denom(R(0, j)));
        rep.status = RankStatus::degenerate;
        rep.certified = true;
        rep.witness = IntVector::Zero(m);
        rep.witness[0] = to_int64(D);
        rep.p.resize(n);
        for (Eigen::Index j = 0; j < n; ++j) rep.p[j] = to_int64(numer(R(0, j) * Rational(D)));
    }
    return rep;
}

MinimalityReport verify_minimality(const BestApproxSequence& seq, const TargetMatrix& A, const WeightVector& s,
                                   const WeightVector& r, std::uint64_t budget) {
    check_shapes(A, s, r);
    MinimalityReport rep;
    const auto& E = seq.entries;
    for (std::size_t k = 0; k + 1 < E.size(); ++k) {
        if (compare(E[k].Y, E[k + 1].Y) >= 0 || compare(E[k].M, E[k + 1].M) <= 0) rep.monotone = false;
    }
    if (seq.exhausted_up_to < 1) return rep;

    const Eigen::Index m = A.rows(), n = A.cols();
    std::vector<NVal> Ns;
    for (const auto& e : E) Ns.push_back(size_of(e.X, s));
    // interval enclosures of A and upper bounds for M_k^{r_j}
    std::vector<Interval> Ai(static_cast<std::size_t>(m * n));
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < n; ++j) Ai[static_cast<std::size_t>(i * n + j)] = A(i, j).enclose(96);
    std::vector<std::vector<Rational>> Mu(E.size());
    for (std::size_t k = 0; k < E.size(); ++k)
        for (Eigen::Index j = 0; j < n; ++j)
            Mu[k].push_back(pow(E[k].M.value(), r[static_cast<std::size_t>(j)]).enclose(96).hi);

    std::vector<std::int64_t> c(static_cast<std::size_t>(m)), inner(static_cast<std::size_t>(m), -1);
    for (Eigen::Index i = 0; i < m; ++i)
        c[static_cast<std::size_t>(i)] = bound_coord(seq.exhausted_up_to, s[static_cast<std::size_t>(i)], 0);

    bool done = false;
    for_each_shell_run(c, inner, [&](IntVector& X, std::int64_t lo, std::int64_t hi) {
        for (std::int64_t x = lo; x <= hi && !done; ++x) {
            if (++rep.checked > budget) throw BudgetExceeded("verify_minimality", rep.checked);
            X[m - 1] = x;
            NVal N = size_of(X, s);
            // last k with N_k <= N(X)
            auto it = std::upper_bound(Ns.begin(), Ns.end(), N,
                                       [](const NVal& a, const NVal& b) { return cmp_nval(a, b) < 0; });
            if (it == Ns.begin()) {
                rep.minimal = false;
                rep.counterexample = X;
                done = true;
                return;
            }
            std::size_t k = static_cast<std::size_t>(it - Ns.begin()) - 1;
            if (E[k].M.is_zero() || X == E[k].X) continue;
            bool cleared = false;
            for (Eigen::Index j = 0; j < n && !cleared; ++j) {
                Rational ylo = 0, yhi = 0;
                for (Eigen::Index i = 0; i < m; ++i) {
                    if (X[i] == 0) continue;
                    const Interval& a = Ai[static_cast<std::size_t>(i * n + j)];
                    Rational xi(X[i]);
                    if (X[i] > 0) {
                        ylo += xi * a.lo;
                        yhi += xi * a.hi;
                    } else {
                        ylo += xi * a.hi;
                        yhi += xi * a.lo;
                    }
                }
                Integer f = floor_int(ylo);
                if (yhi >= Rational(f + 1)) continue;
                Rational dlo = std::min(Rational(ylo - Rational(f)), Rational(Rational(f + 1) - yhi));
                cleared = dlo >= Mu[k][static_cast<std::size_t>(j)];
            }
            if (cleared) continue;
            if (compare(approximation_error(A, X, r).value, E[k].M.value()) < 0) {
                rep.minimal = false;
                rep.counterexample = X;
                done = true;
                return;
            }
        }
    });
    return rep;
}

GrowthReport verify_geometric_growth(const BestApproxSequence& seq, const WeightVector& s, const WeightVector& r) {
    GrowthReport rep;
    if (seq.entries.empty()) throw InvalidArgument("verify_geometric_growth: empty sequence");
    const long dim = static_cast<long>(seq.entries.front().X.size());
    rep.delta = std::min(s.delta(), r.delta());
    const unsigned long p = numer(rep.delta).convert_to<unsigned long>();
    const unsigned long q = denom(rep.delta).convert_to<unsigned long>();
    const Integer three_q = ipow(Integer(3), q);
    Integer U = 1;
    while (ipow(U, p) <= three_q) ++U;
    Integer V = 2 * ipow(U, static_cast<unsigned long>(dim));
    if (!fits_int64(V)) throw InvalidArgument("verify_geometric_growth: V does not fit");
    rep.U = to_int64(U);
    rep.V = to_int64(V);
    const std::size_t Vs = static_cast<std::size_t>(rep.V);
    const auto& E = seq.entries;
    std::size_t usable = seq.ends_in_zero ? E.size() - 1 : E.size();
    if (usable < Vs + 1) {
        throw InvalidArgument("verify_geometric_growth: need at least " + std::to_string(Vs + 1) + " entries, have " +
                              std::to_string(usable));
    }
    for (std::size_t i = 0; i + Vs < usable; ++i) {
        ++rep.checked;
        if (compare(E[i + Vs].Y.value(), CertReal(2) * E[i].Y.value()) < 0) rep.violations.push_back(i);
    }
    // least squares of log Y_i against i (1-based), then the largest c below every point
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> ly(usable);
    for (std::size_t i = 0; i < usable; ++i) {
        double x = static_cast<double>(i + 1);
        ly[i] = E[i].Y.log_value().mid();
        sx += x;
        sy += ly[i];
        sxx += x * x;
        sxy += x * ly[i];
    }
    const double k = static_cast<double>(usable);
    double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    rep.gamma = std::exp(slope);
    double lc = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < usable; ++i) lc = std::min(lc, ly[i] - slope * static_cast<double>(i + 1));
    rep.c = std::exp(lc);
    return rep;
}

SubsequenceMap subsequence_extract(const std::vector<CertReal>& Y, const CertReal& R) {
    if (compare(R, CertReal(1)) <= 0) throw InvalidArgument("subsequence_extract: R must exceed 1");
    SubsequenceMap out;
    if (Y.empty()) return out;
    std::size_t cur = 0;
    out.indices.push_back(0);
    for (;;) {
        CertReal target = R * Y[cur];
        std::size_t j = cur + 1;
        while (j < Y.size() && compare(Y[j], target) < 0) ++j;
        if (j == Y.size()) {
            out.truncated = cur + 1 < Y.size();
            break;
        }
        out.indices.push_back(j);
        cur = j;
    }
    for (std::size_t k = 0; k + 1 < out.indices.size(); ++k) {
        std::size_t a = out.indices[k], b = out.indices[k + 1];
        if (compare(Y[b], R * Y[a]) < 0) out.growth_ok = false;
        if (compare(R * Y[a + 1], Y[b]) < 0) out.back_ok = false;
    }
    return out;
}

SubsequenceMap subsequence_extract(const BestApproxSequence& seq, const CertReal& R) {
    std::vector<CertReal> Y;
    for (const auto& e : seq.entries) Y.push_back(e.Y.value());
    return subsequence_extract(Y, R);
}

}  // namespace dioph
