#include "dioph/transference/transference.hpp"

#include "dioph/bestapprox/bestapprox.hpp"
#include "dioph/lattice/lattice.hpp"
#include "dioph/numerics/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dioph {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct WeightData {
    Rational rho, delta;
};

// (K (d1 + d0 w) + rho0 d1 d0 (w - 1)) / (K (d1 + d0 w) - rho1 d1 d0 (w - 1)), K = (m+n-1) rho0 rho1,
// where (rho0, d0) describe the error weights of the source exponent.
ExtRational weighted_formula(std::size_t m, std::size_t n, const WeightData& src, const WeightData& dst,
                             const ExtRational& w) {
    const Rational K = Rational(static_cast<long>(m + n - 1)) * src.rho * dst.rho;
    const Rational dd = src.delta * dst.delta;
    if (w.infinite) {
        Rational num = K * src.delta + src.rho * dd;
        Rational den = K * src.delta - dst.rho * dd;
        if (den < 0) throw Error("weighted Dyson bound: negative leading coefficient in the denominator");
        if (den == 0) return ExtRational::infinity();
        return ExtRational(Rational(num / den));
    }
    const Rational base = K * (dst.delta + src.delta * w.value);
    Rational num = base + src.rho * dd * (w.value - 1);
    Rational den = base - dst.rho * dd * (w.value - 1);
    if (den <= 0) throw Error("weighted Dyson bound: nonpositive denominator at omega = " + to_string(w.value));
    return ExtRational(Rational(num / den));
}

void check_dims(const TargetMatrix& A, const WeightVector& s, const WeightVector& r) {
    if (A.rows() == 0 || A.cols() == 0) throw InvalidArgument("empty matrix");
    if (s.size() != static_cast<std::size_t>(A.rows()) || r.size() != static_cast<std::size_t>(A.cols()))
        throw InvalidArgument("weight dimensions do not match the matrix");
}

double measured_value(const ExponentEstimate& e) { return e.capped ? kInf : e.point_estimate; }

BoundCheck make_check(std::string name, ExtRational bound, const ExponentEstimate& measured, double slack) {
    BoundCheck c;
    c.name = std::move(name);
    c.bound = std::move(bound);
    c.measured = measured_value(measured);
    c.slack = slack;
    if (std::isinf(c.measured))
        c.holds = true;
    else if (c.bound.infinite)
        c.holds = false;
    else
        c.holds = c.measured + slack >= to_double(c.bound.value);
    return c;
}

std::vector<Scale> scales_of(const TGrid& g) {
    std::vector<Scale> out;
    for (const Rational& e : g.log2_points()) out.push_back({Rational(2), e});
    if (out.empty()) throw InvalidArgument("empty search range");
    return out;
}

bool at_most(const CertReal& a, const CertReal& b) {
    Ordering o = try_compare(a, b);
    return o == Ordering::less || o == Ordering::equal;
}

ScaleStatus status_of(Ordering o, bool strict_greater) {
    switch (o) {
        case Ordering::greater: return ScaleStatus::holds;
        case Ordering::equal: return strict_greater ? ScaleStatus::fails : ScaleStatus::holds;
        case Ordering::less: return ScaleStatus::fails;
        default: return ScaleStatus::undecided;
    }
}

}  // namespace

ExtRational ExtRational::from_estimate(const ExponentEstimate& e) {
    if (e.capped) return infinity();
    return ExtRational(Rational(e.point_estimate));
}

double ExtRational::approx() const { return infinite ? kInf : to_double(value); }

std::string ExtRational::str() const { return infinite ? "inf" : to_string(value); }

ExtRational reciprocal(const ExtRational& x) {
    if (x.infinite) return ExtRational(0L);
    if (x.value <= 0) throw InvalidArgument("reciprocal of a nonpositive value");
    return ExtRational(Rational(1 / x.value));
}

ExtRational dyson_weighted_bound(const DysonBoundInput& in, Direction direction) {
    if (in.s.size() != in.m || in.r.size() != in.n) throw InvalidArgument("weight dimensions do not match (m, n)");
    WeightData ws{in.s.rho(), in.s.delta()}, wr{in.r.rho(), in.r.delta()};
    if (direction == Direction::forward) return weighted_formula(in.m, in.n, ws, wr, in.omega);
    return weighted_formula(in.n, in.m, wr, ws, in.omega);
}

ExtRational dyson_classical_bound(std::size_t m, std::size_t n, const ExtRational& omega) {
    if (m == 0 || n == 0) throw InvalidArgument("dimensions must be positive");
    const long M = static_cast<long>(m), N = static_cast<long>(n);
    if (omega.infinite) {
        if (N == 1) return ExtRational::infinity();
        return ExtRational(Rational(N, N - 1));
    }
    Rational den = Rational(N - 1) * omega.value + M;
    if (den <= 0) throw Error("classical Dyson bound: nonpositive denominator");
    return ExtRational(Rational((Rational(N) * omega.value + M - 1) / den));
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::consistent: return "consistent";
        case Verdict::violated: return "violated";
        default: return "inconclusive";
    }
}

double comparison_slack(const ExponentEstimate& e, const TransferOptions& opts) {
    if (opts.fixed_slack) return *opts.fixed_slack;
    double logT = e.tail_begin < e.witnesses.size() ? e.witnesses[e.tail_begin].T.log() : e.T_max.log();
    if (!(logT > 0)) logT = std::log(2.0);
    double w = e.capped ? opts.estimate.cap : std::max(e.point_estimate, 0.0);
    return (1 + w) * opts.estimate.grid.log_step() / logT + opts.truncation_slack;
}

TransferReport validate_dyson(const TargetMatrix& A, const WeightVector& s, const WeightVector& r,
                              const TransferOptions& opts, std::string instance) {
    check_dims(A, s, r);
    const std::size_t m = static_cast<std::size_t>(A.rows()), n = static_cast<std::size_t>(A.cols());
    TransferReport rep;
    rep.instance = std::move(instance);
    rep.tolerance = opts.tolerance;

    EstimatePair a, t;
    try {
        a = estimate_weighted(A, CertVector::Zero(A.rows()), s, r, opts.estimate);
        t = estimate_weighted(TargetMatrix(A.transpose()), CertVector::Zero(A.cols()), r, s, opts.estimate);
    } catch (const PrecisionExhausted& e) {
        rep.note = e.what();
        return rep;
    } catch (const BudgetExceeded& e) {
        rep.note = e.what();
        return rep;
    } catch (const DegenerateRank& e) {
        rep.note = e.what();
        return rep;
    }
    rep.estimates = {{"omega(A)", a.ordinary},
                     {"omega_hat(A)", a.uniform},
                     {"omega(tA)", t.ordinary},
                     {"omega_hat(tA)", t.uniform}};

    struct Pair {
        const char* tag;
        const ExponentEstimate& src;
        const ExponentEstimate& dst;
    };
    for (const Pair& p : {Pair{"omega", a.ordinary, t.ordinary}, Pair{"omega_hat", a.uniform, t.uniform}}) {
        const double slack = comparison_slack(p.src, opts) + comparison_slack(p.dst, opts);
        rep.slack = std::max(rep.slack, slack);
        DysonBoundInput fwd{m, n, s, r, ExtRational::from_estimate(p.src)};
        DysonBoundInput bwd{m, n, s, r, ExtRational::from_estimate(p.dst)};
        rep.checks.push_back(make_check(std::string(p.tag) + "(tA) >= forward bound",
                                        dyson_weighted_bound(fwd, Direction::forward), p.dst, slack));
        rep.checks.push_back(make_check(std::string(p.tag) + "(A) >= backward bound",
                                        dyson_weighted_bound(bwd, Direction::backward), p.src, slack));
    }
    rep.bound = rep.checks.front().bound;

    // Finite data never certifies an upper bound on an exponent, so a failed check
    // cannot contradict the inequalities.
    bool all = std::all_of(rep.checks.begin(), rep.checks.end(), [](const BoundCheck& c) { return c.holds; });
    rep.verdict = all ? Verdict::consistent : Verdict::inconclusive;
    if (!all) {
        rep.note = "outside slack:";
        for (const auto& c : rep.checks)
            if (!c.holds) rep.note += " [" + c.name + "]";
    }
    return rep;
}

ExtRational bl_bound(const ExtRational& omega_hat) { return reciprocal(omega_hat); }

TransferReport bl_validate(const TargetMatrix& A, const WeightVector& s, const WeightVector& r,
                           const std::vector<RatVector>& thetas, const TransferOptions& opts, std::string instance) {
    check_dims(A, s, r);
    for (const auto& th : thetas)
        if (th.size() != A.cols()) throw InvalidArgument("theta must have one entry per column of A");
    TransferReport rep;
    rep.instance = std::move(instance);
    rep.tolerance = opts.tolerance;

    Rational N_bound = opts.sequence_bound;
    if (N_bound <= 0) {
        const auto scales = scales_of(opts.estimate.grid);
        N_bound = Rational(ceil_int(scales.back().value().enclose(64).hi));
    }
    ExponentEstimate omega_hat;
    try {
        BestApproxOptions bo;
        bo.budget = opts.estimate.budget;
        omega_hat = estimate_weighted(exponent_sequence(A, s, r, N_bound, bo), opts.estimate).uniform;
    } catch (const PrecisionExhausted& e) {
        rep.note = e.what();
        return rep;
    } catch (const BudgetExceeded& e) {
        rep.note = e.what();
        return rep;
    } catch (const DegenerateRank& e) {
        rep.note = e.what();
        return rep;
    }
    rep.estimates.push_back({"omega_hat(A)", omega_hat});
    rep.bound = bl_bound(ExtRational::from_estimate(omega_hat));

    const TargetMatrix At = A.transpose();
    evaluate_samples(
        rep, thetas,
        [&](const RatVector& th) { return estimate_ordinary(At, to_cert(th), r, s, opts.estimate); }, opts);
    return rep;
}

void evaluate_samples(TransferReport& rep, const std::vector<RatVector>& thetas,
                      const std::function<ExponentEstimate(const RatVector&)>& estimate, const TransferOptions& opts) {
    const double bound = rep.bound.approx();
    std::size_t within = 0, lower_ok = 0;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        SampleResult sr;
        sr.index = i;
        sr.theta = thetas[i];
        try {
            ExponentEstimate e = estimate(thetas[i]);
            const double slack = comparison_slack(e, opts);
            rep.slack = std::max(rep.slack, slack);
            sr.lower_bound = to_double(e.lower_bound);
            sr.point_estimate = e.point_estimate;
            sr.capped = e.capped;
            sr.lower_ok = e.capped || sr.lower_bound + slack >= bound;
            sr.within = !e.capped && std::abs(sr.point_estimate - bound) <= opts.tolerance;
        } catch (const PrecisionExhausted& e) {
            sr.note = e.what();
        } catch (const BudgetExceeded& e) {
            sr.note = e.what();
        }
        within += sr.within;
        lower_ok += sr.lower_ok;
        rep.samples.push_back(std::move(sr));
    }
    rep.fraction_within = thetas.empty() ? 0 : static_cast<double>(within) / static_cast<double>(thetas.size());
    // lower_bound is certified only on the searched range; the inequality concerns T -> inf
    if (lower_ok == thetas.size()) {
        rep.verdict = Verdict::consistent;
    } else {
        rep.verdict = Verdict::inconclusive;
        rep.note = std::to_string(thetas.size() - lower_ok) + " sample(s) below the bound by more than the slack";
    }
}

CertReal PowerLaw::operator()(const CertReal& T) const { return CertReal(coeff) * pow(T, Rational(-exponent)); }

std::string PowerLaw::str() const {
    std::string e = "T^(-" + to_string(exponent) + ")";
    return coeff == 1 ? e : to_string(coeff) + "*" + e;
}

ScaleStatus psi_phi_condition(const PowerLaw& psi, const PowerLaw& phi, const CertReal& C, const CertReal& T) {
    CertReal lhs = phi(C / psi(T));
    CertReal rhs = C / T;
    return status_of(try_compare(lhs, rhs), true);
}

PsiPhiReport psi_phi_transfer_check(const TargetMatrix& A, const WeightVector& s, const WeightVector& r,
                                    const PowerLaw& psi, const PowerLaw& phi, const std::vector<RatVector>& thetas,
                                    const TransferOptions& opts, std::string instance) {
    check_dims(A, s, r);
    for (const auto& th : thetas)
        if (th.size() != A.cols()) throw InvalidArgument("theta must have one entry per column of A");
    if (psi.coeff <= 0 || phi.coeff <= 0 || psi.exponent <= 0 || phi.exponent <= 0)
        throw InvalidArgument("psi and phi must be positive and strictly decreasing to 0");

    PsiPhiReport rep;
    rep.summary.instance = std::move(instance);
    rep.psi = psi;
    rep.phi = phi;
    const int d = static_cast<int>(A.rows() + A.cols());
    rep.C = mahler_constant(d);
    rep.C1 = pow(rep.C, Rational(1 / std::min(s.delta(), r.delta())));

    const auto scales = scales_of(opts.estimate.grid);
    const double tail_log = to_double(opts.estimate.tail_fraction) * scales.back().log();
    const Rational N_bound(ceil_int(scales.back().value().enclose(64).hi));

    BestApproxOptions bo;
    bo.budget = opts.estimate.budget;
    bo.zero_as_sentinel = true;
    BestApproxSequence seq;
    try {
        seq = exponent_sequence(A, s, r, N_bound, bo);
    } catch (const Error& e) {
        rep.summary.note = e.what();
        return rep;
    }

    // Scale set-up: the condition and the closed non-approximability certificate
    // D(T) = min { |A q - p|_s : 0 < |q|_r <= T } > psi(T).
    rep.condition_on_tail = true;
    Rational T1_max = 0;
    std::size_t idx = 0;
    for (const Scale& T : scales) {
        PsiPhiScale ps;
        ps.T = T;
        const CertReal Tv = T.value();
        ps.condition = psi_phi_condition(psi, phi, rep.C1, Tv);
        if (T.log() >= tail_log && ps.condition != ScaleStatus::holds) rep.condition_on_tail = false;
        while (idx < seq.entries.size() && compare(seq.entries[idx].Y.value(), Tv) <= 0) ++idx;
        if (idx == 0) {
            ps.not_approximable = ScaleStatus::holds;
            ps.log_D = kInf;
        } else {
            const auto& e = seq.entries[idx - 1];
            ps.log_D = e.M.is_zero() ? -kInf : e.M.log_value().mid();
            ps.not_approximable =
                e.M.is_zero() ? ScaleStatus::fails : status_of(try_compare(e.M.value(), psi(Tv)), true);
        }
        if (ps.not_approximable == ScaleStatus::holds) {
            ++rep.certified_scales;
            T1_max = std::max(T1_max, Rational(ceil_int((rep.C1 / psi(Tv)).enclose(64).hi)));
        }
        rep.scales.push_back(std::move(ps));
    }

    std::size_t good_thetas = 0;
    bool errors = false;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        SampleResult sr;
        sr.index = i;
        sr.theta = thetas[i];
        const CertVector theta = to_cert(thetas[i]);
        const Residual at_zero = closest_integer_residual(CertVector(-theta), r);
        BestApproxSequence inh;
        if (rep.certified_scales > 0) {
            BestApproxOptions io = bo;
            io.shift = theta;
            try {
                inh = compute_best_approx(A, s, r, T1_max, io);
            } catch (const Error& e) {
                sr.note = e.what();
                errors = true;
            }
        }
        bool all_found = sr.note.empty();
        for (auto& ps : rep.scales) {
            ps.witnesses.emplace_back();
            ps.witness_beats_phi.push_back(false);
            if (ps.not_approximable != ScaleStatus::holds || !sr.note.empty()) continue;
            const CertReal Tv = ps.T.value();
            const CertReal T1 = rep.C1 / psi(Tv);
            const CertReal err_bound = rep.C1 / Tv;
            const BestApproxEntry* best = nullptr;
            for (const auto& e : inh.entries) {
                if (!at_most(e.Y.value(), T1)) break;
                best = &e;
            }
            CertReal err;
            if (best && at_most(best->M.value(), err_bound)) {
                ps.witnesses.back() = best->X;
                err = best->M.value();
            } else if (at_most(at_zero.value, err_bound)) {
                ps.witnesses.back() = IntVector::Zero(A.rows());
                err = at_zero.value;
            } else {
                all_found = false;
                ++rep.witnesses_missing;
                continue;
            }
            ++rep.witnesses_found;
            ps.witness_beats_phi.back() = try_compare(err, phi(T1)) == Ordering::less;
        }
        sr.within = all_found;
        sr.lower_ok = all_found;
        good_thetas += all_found;
        rep.summary.samples.push_back(std::move(sr));
    }
    rep.summary.fraction_within =
        thetas.empty() ? 0 : static_cast<double>(good_thetas) / static_cast<double>(thetas.size());

    auto& v = rep.summary.verdict;
    if (rep.witnesses_missing > 0) {
        // a certified gap contradicts the lattice transfer itself
        v = Verdict::violated;
        rep.summary.note = std::to_string(rep.witnesses_missing) + " promised witness(es) not found";
    } else if (errors) {
        v = Verdict::inconclusive;
        rep.summary.note = "search failed for some theta";
    } else if (rep.certified_scales == 0) {
        v = Verdict::inconclusive;
        rep.summary.note = "non-approximability not certified at any grid scale";
    } else if (!rep.condition_on_tail) {
        v = Verdict::inconclusive;
        rep.summary.note = "condition phi(C/psi(T)) > C/T fails on the tail of the grid";
    } else {
        v = Verdict::consistent;
    }
    return rep;
}

}  // namespace dioph
