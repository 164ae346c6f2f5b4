#include "dioph/badset/badset.hpp"

#include "dioph/exponents/exponents.hpp"
#include "dioph/numerics/errors.hpp"
#include "dioph/numerics/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace dioph {

namespace {

CertReal cert_pow(const Integer& base, const Rational& e) { return pow(CertReal(base), e); }

Rational min_weight(const WeightVector& w) { return *std::min_element(w.weights().begin(), w.weights().end()); }

// Largest rational <= x; exact when x is rational.
Rational lower_rational(const CertReal& x) {
    if (x.is_exact()) return x.exact_value();
    return x.enclose(80).lo;
}

Rational dist_to_Z(const Rational& x) {
    Rational f = x - Rational(floor_int(x));
    return std::min(f, Rational(1) - f);
}

// The closed box corner + prod [0, side_i] misses {dist(<y, .>, Z) < alpha}.
bool box_avoids(const RatVector& y, const RatVector& corner, const std::vector<Rational>& side, const Rational& alpha) {
    Rational lo = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) lo += y[i] * corner[i];
    Rational hi = lo;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        Rational t = y[i] * side[static_cast<std::size_t>(i)];
        (t < 0 ? lo : hi) += t;
    }
    Integer N = floor_int(lo);
    return lo - Rational(N) >= alpha && hi <= Rational(N) + 1 - alpha;
}

long double ld_of(const CertReal& x) {
    Interval I = x.enclose(100);
    double h = to_double(I.lo);
    return static_cast<long double>(h) + static_cast<long double>(to_double(Rational(I.lo - Rational(h))));
}

}  // namespace

CertReal cantor_constant(const Rational& alpha, const Integer& R, std::size_t n, const Rational& delta_r) {
    return CertReal(Rational(1) - 2 * alpha) - CertReal(static_cast<long long>(3 * n)) * cert_pow(R, -delta_r);
}

Integer cantor_ratio(const Rational& alpha, std::size_t n, const Rational& delta_r) {
    if (alpha <= 0 || alpha >= Rational(1, 2)) throw InvalidArgument("alpha must lie in (0, 1/2)");
    if (delta_r <= 0) throw InvalidArgument("delta_r must be positive");
    if (Rational(1) - 2 * alpha - Rational(1, 10) <= 0) throw InvalidArgument("c >= 1/10 needs alpha < 9/20");
    Integer R = 2;
    while (compare(cantor_constant(alpha, R, n, delta_r), CertReal(Rational(1, 10))) < 0) R *= 2;
    return R;
}

CertReal epsilon_from_alpha(const Rational& alpha, const Integer& R, std::size_t m, std::size_t n,
                            const Rational& delta) {
    if (alpha <= 0 || alpha >= Rational(1, 2)) throw InvalidArgument("alpha must lie in (0, 1/2)");
    if (R <= 1) throw InvalidArgument("R must exceed 1");
    if (delta <= 0 || delta > 1) throw InvalidArgument("delta must lie in (0, 1]");
    if (m == 0 || n == 0) throw InvalidArgument("m and n must be positive");
    Rational base = alpha * alpha / Rational(static_cast<long>(4 * m * n));
    return pow(CertReal(base), Rational(1) / delta) / CertReal(R);
}

CantorState cantor_descend(const std::vector<RatVector>& ys, const Rational& alpha, const WeightVector& r,
                           std::size_t depth, const CantorOptions& opts) {
    const std::size_t n = r.size();
    if (alpha <= 0 || alpha >= Rational(1, 2)) throw InvalidArgument("alpha must lie in (0, 1/2)");
    if (ys.size() < depth + 1) throw InvalidArgument("cantor_descend needs depth + 1 vectors");
    for (const auto& y : ys) {
        if (static_cast<std::size_t>(y.size()) != n) throw InvalidArgument("vector size differs from the weights");
        if (y.isZero()) throw InvalidArgument("zero vector in the sequence");
    }
    const Rational dr = r.delta();
    CantorState st;
    st.alpha = alpha;
    st.R = opts.R ? *opts.R : cantor_ratio(alpha, n, dr);
    st.c = cantor_constant(alpha, st.R, n, dr);
    st.depth = depth;
    if (sign(st.c) <= 0) throw InvalidArgument("c = 1 - 2 alpha - 3 n R^-delta_r must be positive");

    std::vector<CertReal> Y;
    for (std::size_t k = 0; k <= depth; ++k) Y.push_back(weighted_norm(to_cert(ys[k]), r).value());
    for (std::size_t k = 0; k < depth; ++k)
        if (compare(Y[k + 1], CertReal(st.R) * Y[k]) < 0)
            throw InvalidArgument("ratio |y_(k+1)|_r / |y_k|_r < R at k = " + std::to_string(k + 1));

    std::vector<std::vector<Rational>> side(depth + 1);
    for (std::size_t k = 0; k <= depth; ++k)
        for (std::size_t i = 0; i < n; ++i) side[k].push_back(lower_rational(pow(Y[k], -r[i])));

    std::mt19937_64 rng(opts.seed);
    const CertReal loss = CertReal(1) - CertReal(static_cast<long long>(n)) * cert_pow(st.R, -dr);
    RatVector corner = RatVector::Zero(static_cast<Eigen::Index>(n));
    std::vector<Rational> parent_side(n, Rational(1));
    std::uint64_t examined = 0;

    for (std::size_t k = 0; k <= depth; ++k) {
        CantorLevel lv;
        lv.k = static_cast<int>(k + 1);
        lv.Y = Y[k];
        lv.side = side[k];
        std::vector<Integer> per_axis(n);
        lv.children = 1;
        for (std::size_t i = 0; i < n; ++i) {
            per_axis[i] = floor_int(parent_side[i] / side[k][i]);
            lv.children *= per_axis[i];
        }
        if (k > 0) {
            const CertReal ratio = Y[k] / Y[k - 1];
            lv.survivor_bound = st.c * ratio;
            lv.children_bound = loss * ratio;
        }
        if (lv.children == 0) throw Error("no child box fits at level " + std::to_string(k + 1));
        if (lv.children > Integer(opts.budget)) throw BudgetExceeded("cantor_descend", examined);

        // children in lexicographic order of their offsets; pruned against y_{k} (1-based) for k >= 1
        std::vector<RatVector> survivors;
        std::vector<std::int64_t> idx(n, 0);
        const std::int64_t total = to_int64(lv.children);
        for (std::int64_t c = 0; c < total; ++c) {
            if (++examined > opts.budget) throw BudgetExceeded("cantor_descend", examined);
            RatVector child = corner;
            for (std::size_t i = 0; i < n; ++i) child[static_cast<Eigen::Index>(i)] += Rational(idx[i]) * side[k][i];
            if (k == 0 || box_avoids(ys[k - 1], child, side[k], alpha)) survivors.push_back(child);
            for (std::size_t i = n; i-- > 0;) {
                if (++idx[i] < to_int64(per_axis[i])) break;
                idx[i] = 0;
            }
        }
        lv.survivors = static_cast<long long>(survivors.size());
        if (k > 0) {
            lv.survivors_ok = lv.survivors >= floor_int(lv.survivor_bound);
            lv.children_ok = lv.children >= floor_int(lv.children_bound);
        }
        if (survivors.empty()) throw Error("no surviving box at level " + std::to_string(k + 1));
        std::size_t pick = opts.selector == Selector::first ? 0 : static_cast<std::size_t>(rng() % survivors.size());
        corner = survivors[pick];
        lv.corner = corner;
        parent_side = side[k];
        st.levels.push_back(std::move(lv));
    }

    st.theta = corner;
    st.constraints_ok = true;
    for (std::size_t j = 0; j < depth; ++j) {
        Rational v = 0;
        for (Eigen::Index i = 0; i < ys[j].size(); ++i) v += ys[j][i] * corner[i];
        st.distances.push_back(dist_to_Z(v));
        st.constraints_ok = st.constraints_ok && st.distances.back() >= alpha;
    }
    return st;
}

std::vector<std::size_t> growth_subsequence(const BestApproxSequence& seq, const Integer& R) {
    std::vector<std::size_t> out;
    if (seq.entries.empty()) return out;
    out.push_back(0);
    const CertReal Rc(R);
    while (true) {
        const std::size_t i = out.back();
        if (i + 1 >= seq.entries.size()) break;
        const CertReal lo = Rc * seq.entries[i].Y.value(), hi = Rc * seq.entries[i + 1].Y.value();
        std::optional<std::size_t> next;
        for (std::size_t j = i + 1; j < seq.entries.size(); ++j) {
            const CertReal& Yj = seq.entries[j].Y.value();
            if (compare(Yj, hi) > 0) break;
            if (compare(Yj, lo) >= 0) {
                next = j;
                break;
            }
        }
        if (!next) break;
        out.push_back(*next);
    }
    return out;
}

WindowReport window_check(const TargetMatrix& A, const WeightVector& s, const WeightVector& r,
                          const CertVector& theta, const CertReal& epsilon, const Rational& check_bound) {
    const Eigen::Index m = A.rows(), n = A.cols();
    if (static_cast<Eigen::Index>(s.size()) != m || static_cast<Eigen::Index>(r.size()) != n)
        throw InvalidArgument("weights do not match the matrix");
    if (theta.size() != n) throw InvalidArgument("theta must have n coordinates");
    if (check_bound < 1) throw InvalidArgument("check_bound must be >= 1");

    WindowReport rep;
    rep.check_bound = check_bound;
    rep.min_product = std::numeric_limits<double>::infinity();
    std::vector<std::int64_t> box(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
        // |p_i|^(1/s_i) <= B  iff  |p_i| <= B^(s_i)
        Integer lim = floor_int(lower_rational(pow(CertReal(check_bound), s[static_cast<std::size_t>(i)])));
        while (compare(pow(CertReal(lim + 1), Rational(1) / s[static_cast<std::size_t>(i)]), CertReal(check_bound)) <= 0)
            ++lim;
        box[static_cast<std::size_t>(i)] = to_int64(lim);
    }
    std::vector<long double> a(static_cast<std::size_t>(m * n)), t(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a[static_cast<std::size_t>(i * n + j)] = ld_of(A(i, j));
    for (Eigen::Index j = 0; j < n; ++j) t[static_cast<std::size_t>(j)] = ld_of(theta[j]);
    const long double eps_ld = ld_of(epsilon);

    IntVector p = IntVector::Zero(m);
    for (Eigen::Index i = 0; i < m; ++i) p[i] = -box[static_cast<std::size_t>(i)];
    while (true) {
        if (!p.isZero()) {
            long double np = 0, err = 0, l1 = 0;
            for (Eigen::Index i = 0; i < m; ++i) {
                l1 += std::fabs(static_cast<long double>(p[i]));
                if (p[i] != 0)
                    np = std::max(np, std::pow(std::fabs(static_cast<long double>(p[i])),
                                               1.0L / static_cast<long double>(to_double(s[static_cast<std::size_t>(i)]))));
            }
            for (Eigen::Index j = 0; j < n; ++j) {
                long double y = -t[static_cast<std::size_t>(j)];
                for (Eigen::Index i = 0; i < m; ++i) y += static_cast<long double>(p[i]) * a[static_cast<std::size_t>(i * n + j)];
                y -= std::nearbyint(y);
                err = std::max(err, std::pow(std::fabs(y), 1.0L / static_cast<long double>(to_double(r[static_cast<std::size_t>(j)]))));
            }
            const long double B = check_bound.convert_to<long double>();
            const long double prod = np * err;
            // a relative margin well above the rounding in l1 * 2^-64
            const long double margin = 1e-9L * (1 + l1) * std::max(prod, eps_ld);
            bool in_window = np <= B * (1 - 1e-12L), below = prod < eps_ld;
            if (np <= B * (1 + 1e-12L) && (!in_window || std::fabs(prod - eps_ld) <= margin)) {
                WeightedValue npc = weighted_norm(p, s);
                in_window = compare(npc.value(), CertReal(check_bound)) <= 0;
                if (in_window) below = compare(npc.value() * approximation_error(A, p, r, theta).value, epsilon) < 0;
            }
            if (in_window) {
                ++rep.checked;
                if (static_cast<double>(prod) < rep.min_product) {
                    rep.min_product = static_cast<double>(prod);
                    rep.argmin = p;
                }
                if (below) {
                    ++rep.violations;
                    if (!rep.first_violation) rep.first_violation = p;
                }
            }
        }
        Eigen::Index i = m;
        while (i-- > 0) {
            if (++p[i] <= box[static_cast<std::size_t>(i)]) break;
            p[i] = -box[static_cast<std::size_t>(i)];
        }
        if (i < 0) break;
    }
    return rep;
}

BadCertificate bad_certificate(const TargetMatrix& A, const WeightVector& s, const WeightVector& r,
                               const Rational& alpha, std::size_t depth, const Rational& check_bound,
                               const BadOptions& opts) {
    const std::size_t m = static_cast<std::size_t>(A.rows()), n = static_cast<std::size_t>(A.cols());
    if (s.size() != m || r.size() != n) throw InvalidArgument("weights do not match the matrix");
    RankReport rank = check_rank(A, opts.rank_height, opts.budget);
    if (rank.status == RankStatus::degenerate) {
        std::vector<std::string> w;
        for (Eigen::Index i = 0; i < rank.witness.size(); ++i) w.push_back(std::to_string(rank.witness[i]));
        throw DegenerateRank(w, rank.certified);
    }

    BadCertificate cert;
    cert.depth = depth;
    cert.alpha = alpha;
    cert.R = opts.cantor.R ? *opts.cantor.R : cantor_ratio(alpha, n, r.delta());
    cert.epsilon = epsilon_from_alpha(alpha, cert.R, m, n, std::min(min_weight(s), min_weight(r)));

    // grow the search until depth + 1 subsequence terms exist, each with a successor
    BestApproxOptions bo;
    bo.budget = opts.budget;
    Rational N = Rational(cert.R * cert.R);
    BestApproxSequence seq;
    std::vector<std::size_t> sub;
    while (true) {
        seq = exponent_sequence(A, s, r, N, bo);
        sub = growth_subsequence(seq, cert.R);
        if (sub.size() > depth + 1 || (sub.size() == depth + 1 && sub.back() + 1 < seq.entries.size())) break;
        N *= 2;
    }
    sub.resize(depth + 1);
    cert.subsequence = sub;
    std::vector<RatVector> ys;
    for (std::size_t i : sub) {
        cert.ys.push_back(seq.entries[i].X);
        RatVector y(static_cast<Eigen::Index>(n));
        for (std::size_t j = 0; j < n; ++j) y[static_cast<Eigen::Index>(j)] = Rational(seq.entries[i].X[static_cast<Eigen::Index>(j)]);
        ys.push_back(y);
    }
    CantorOptions co = opts.cantor;
    co.R = cert.R;
    cert.cantor = cantor_descend(ys, alpha, r, depth, co);
    cert.theta = cert.cantor.theta;
    cert.window = window_check(A, s, r, to_cert(cert.theta), cert.epsilon, check_bound);
    cert.caveat = "ratio >= R verified on the first " + std::to_string(depth + 1) +
                  " subsequence terms only; lim |q_k|^(1/k) = inf is not certifiable from finite data";
    return cert;
}

BorelCantelliReport borel_cantelli_experiment(const BestApproxSequence& seq, const WeightVector& s,
                                              const WeightVector& r, const Rational& epsilon,
                                              const std::vector<RatVector>& thetas) {
    if (epsilon <= 0) throw InvalidArgument("epsilon must be positive");
    const std::size_t n = r.size();
    BorelCantelliReport rep;
    rep.eta = std::min(min_weight(s), min_weight(r)) * epsilon / 2;
    rep.memberships.assign(thetas.size(), 0);
    std::vector<std::size_t> last(thetas.size(), 0);
    std::vector<bool> any(thetas.size(), false);
    for (std::size_t k = 0; k < seq.entries.size(); ++k) {
        const auto& e = seq.entries[k];
        if (static_cast<std::size_t>(e.X.size()) != n) throw InvalidArgument("sequence dimension differs from r");
        BorelCantelliLevel lv;
        lv.k = k + 1;
        lv.Y = e.Y.approx();
        const CertReal radius = pow(e.Y.value(), -rep.eta);
        lv.measure_bound = 2.0 * static_cast<double>(n) * radius.approx();
        for (std::size_t t = 0; t < thetas.size(); ++t) {
            if (static_cast<std::size_t>(thetas[t].size()) != n) throw InvalidArgument("theta size differs from r");
            Rational v = 0;
            for (std::size_t j = 0; j < n; ++j)
                v += thetas[t][static_cast<Eigen::Index>(j)] * Rational(e.X[static_cast<Eigen::Index>(j)]);
            if (compare(CertReal(dist_to_Z(v)), radius) < 0) {
                ++lv.hits;
                ++rep.memberships[t];
                last[t] = k;
                any[t] = true;
            }
        }
        lv.frequency = thetas.empty() ? 0 : static_cast<double>(lv.hits) / static_cast<double>(thetas.size());
        const double pbound = std::min(1.0, lv.measure_bound);
        const double sd = std::sqrt(pbound * (1 - pbound) / std::max<double>(1, static_cast<double>(thetas.size())));
        if (lv.frequency > pbound + 3 * sd + 1e-12) ++rep.levels_over_bound;
        rep.bound_sum += lv.measure_bound;
        rep.levels.push_back(lv);
    }
    const std::size_t half = seq.entries.size() / 2;
    std::size_t free = 0;
    for (std::size_t t = 0; t < thetas.size(); ++t) free += !any[t] || last[t] < half;
    rep.tail_free_fraction = thetas.empty() ? 0 : static_cast<double>(free) / static_cast<double>(thetas.size());
    return rep;
}

BorelCantelliReport borel_cantelli_experiment(const TargetMatrix& A, const WeightVector& s, const WeightVector& r,
                                              const Rational& epsilon, std::size_t sample_count, std::uint64_t seed,
                                              const Rational& N_bound) {
    BestApproxSequence seq = exponent_sequence(A, s, r, N_bound);
    return borel_cantelli_experiment(seq, s, r, epsilon, low_discrepancy_points(sample_count, r.size(), seed));
}

}  // namespace dioph
