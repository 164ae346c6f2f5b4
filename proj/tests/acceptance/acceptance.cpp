// Acceptance checks AC1..AC12; prints one PASS/FAIL line per criterion.
// Usage: dioph_acceptance [AC1 ... AC12]   (no argument: all)

#include "dioph/badset/badset.hpp"
#include "dioph/bestapprox/bestapprox.hpp"
#include "dioph/cli/cli.hpp"
#include "dioph/exponents/exponents.hpp"
#include "dioph/grassmann/grassmann.hpp"
#include "dioph/lattice/lattice.hpp"
#include "dioph/numerics/errors.hpp"
#include "dioph/numerics/sampling.hpp"
#include "dioph/transference/transference.hpp"
#include "oracles/oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <unistd.h>

using namespace dioph;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

TargetMatrix scalar(const CertReal& a) {
    TargetMatrix A(1, 1);
    A(0, 0) = a;
    return A;
}

const WeightVector one = WeightVector::uniform(1);

std::string fmt(double x, int digits = 3) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(digits);
    s << x;
    return s.str();
}

RatVector rvec(std::initializer_list<Rational> xs) {
    RatVector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (const auto& x : xs) v[i++] = x;
    return v;
}

Rational rand_rat(std::mt19937_64& rng, int max_num, int max_den) {
    return Rational(std::uniform_int_distribution<int>(-max_num, max_num)(rng),
                    std::uniform_int_distribution<int>(1, max_den)(rng));
}

WeightVector rand_weights(std::mt19937_64& rng, std::size_t k) {
    std::uniform_int_distribution<int> d(1, 9);
    std::vector<Rational> w(k);
    Rational total = 0;
    for (auto& x : w) total += (x = d(rng));
    for (auto& x : w) x /= total;
    return WeightVector(w);
}

// ---------------------------------------------------------------------------

Outcome ac1() {
    struct Case {
        const char* name;
        CertReal value;
        std::int64_t P, D, Q;
    };
    const std::vector<Case> cases = {{"phi", CertReal::phi(), 1, 5, 2},
                                     {"sqrt2", CertReal::sqrt(2), 0, 2, 1},
                                     {"sqrt3", CertReal::sqrt(3), 0, 3, 1}};
    std::string detail;
    bool ok = true;
    for (const auto& c : cases) {
        BestApproxOptions o;
        o.max_entries = 20;
        o.budget = 1 << 24;
        // The 20th Pell denominator is 15994428 < 2^25.
        auto seq = compute_best_approx(scalar(c.value), one, one, Rational(1LL << 25), o);
        std::vector<std::int64_t> got;
        for (std::size_t i = 0; i < std::min<std::size_t>(20, seq.size()); ++i)
            got.push_back(std::abs(seq.entries[i].X[0]));
        auto expected = oracle::cf_denominators(c.P, c.D, c.Q, 20);
        const bool same = got.size() == 20 && got == expected;
        ok &= same;
        detail += std::string(c.name) + (same ? " 20/20 " : " mismatch ");
    }
    return {ok, detail};
}

Outcome ac2() {
    EstimateOptions o;
    o.grid.log2_max = Rational(79, 4);  // 2^19.75 <= 10^6
    auto seq = exponent_sequence(scalar(CertReal::sqrt(2)), one, one, Rational(1'000'000));
    auto pair = estimate_weighted(seq, o);
    const double w = pair.ordinary.point_estimate, wh = pair.uniform.point_estimate;
    const bool s2 = std::abs(w - 1) <= 0.05 && std::abs(wh - 1) <= 0.05;

    auto liou = estimate_ordinary(scalar(CertReal::liouville(2)), CertVector::Constant(1, CertReal(0)), one, one);
    const bool l2 = liou.capped || liou.point_estimate > 10;
    return {s2 && l2, "sqrt2 omega " + fmt(w) + " omega_hat " + fmt(wh) + "; liouville2 omega " +
                          (liou.capped ? std::string("capped") : fmt(liou.point_estimate))};
}

Outcome ac3() {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> dim(1, 5);
    std::size_t mismatches = 0;
    for (int it = 0; it < 1000; ++it) {
        const std::size_t m = dim(rng), n = dim(rng);
        // omega = 1 + a/b uniformly spread over [1, 100]
        const int b = std::uniform_int_distribution<int>(1, 97)(rng);
        const int a = std::uniform_int_distribution<int>(0, 99 * b)(rng);
        ExtRational omega(Rational(1) + Rational(a, b));
        DysonBoundInput in{m, n, WeightVector::uniform(m), WeightVector::uniform(n), omega};
        if (!(dyson_weighted_bound(in, Direction::forward) == dyson_classical_bound(m, n, omega))) ++mismatches;
        if (!(dyson_weighted_bound(in, Direction::backward) == dyson_classical_bound(n, m, omega))) ++mismatches;
    }
    return {mismatches == 0, "1000 instances, both directions, " + std::to_string(mismatches) + " mismatches"};
}

Outcome ac4() {
    std::mt19937_64 rng(4);
    std::size_t tested = 0, failures = 0;
    for (std::size_t m = 1; m <= 5; ++m)
        for (std::size_t n = 1; n <= 5; ++n)
            for (int rep = 0; rep < 6; ++rep) {
                WeightVector s = rep == 0 ? WeightVector::uniform(m) : rand_weights(rng, m);
                WeightVector r = rep == 0 ? WeightVector::uniform(n) : rand_weights(rng, n);
                DysonBoundInput in{m, n, s, r, ExtRational(1L)};
                for (Direction d : {Direction::forward, Direction::backward}) {
                    ++tested;
                    if (!(dyson_weighted_bound(in, d) == ExtRational(1L))) ++failures;
                }
                ++tested;
                if (!(dyson_classical_bound(m, n, ExtRational(1L)) == ExtRational(1L))) ++failures;
            }
    return {failures == 0, std::to_string(tested) + " evaluations, " + std::to_string(failures) + " not equal to 1"};
}

// Half-widths with mu_1 of the closed box exactly 10/9, so R meets L only in 0.
RatVector empty_box(const LatticeBasis<Rational>& L, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(1, 6);
    const int d = L.dim();
    RatVector h(d);
    for (int i = 0; i < d; ++i) h[i] = Rational(num(rng), num(rng));
    Rational mu1 = successive_minima(L, Body<Rational>{BodyKind::box, h}, 1).values.front();
    return h * (Rational(9, 10) * mu1);
}

Outcome ac5() {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> g(0, 10'000);
    std::size_t lattices = 0, shifts = 0, failures = 0;
    for (int d : {2, 3}) {
        const int count = d == 2 ? 50 : 20;
        for (int t = 0; t < count; ++t) {
            auto L = make_lattice(oracle::random_rational_matrix(rng, d, 5, 4));
            RatVector h = empty_box(L, rng);
            std::vector<RatVector> gammas;
            for (int k = 0; k < 20; ++k) {
                RatVector gamma(d);
                for (int i = 0; i < d; ++i) gamma[i] = Rational(g(rng), 997);
                gammas.push_back(gamma);
            }
            auto rep = check_mahler_transfer(L, h, gammas);
            ++lattices;
            if (rep.status != MahlerStatus::ok) {
                ++failures;
                continue;
            }
            const auto Ld = dual_lattice(L);
            for (std::size_t k = 0; k < rep.shift_witnesses.size(); ++k) {
                ++shifts;
                const auto& w = rep.shift_witnesses[k];
                if (!w) {
                    ++failures;
                    continue;
                }
                // Re-derive the point from its dual coordinates and its distance from gamma.
                RatVector y = Ld.point(w->coords);
                Rational l1 = 0;
                for (int i = 0; i < d; ++i) l1 += h[i] * abs(Rational(y[i] - gammas[k][i]));
                if (y != w->point || l1 != w->l1_distance || l1 * l1 > mahler_constant_squared(d)) ++failures;
            }
        }
    }
    return {failures == 0 && lattices == 70 && shifts == 1400,
            std::to_string(lattices) + " lattices, " + std::to_string(shifts) + " shifts, " +
                std::to_string(failures) + " failures"};
}

Outcome ac6() {
    std::mt19937_64 rng(6);
    std::size_t failures = 0;
    for (int t = 0; t < 200; ++t) {
        const int d = 1 + t % 4;
        auto L = make_lattice(oracle::random_rational_matrix(rng, d, 9, 6));
        auto Ld = dual_lattice(L);
        if (!same_lattice(dual_lattice(Ld), L)) ++failures;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                if (denom(Rational(L.basis.col(i).dot(Ld.basis.col(j)))) != 1) ++failures;
    }
    return {failures == 0, "200 lattices, " + std::to_string(failures) + " failures"};
}

int rank_of(const std::vector<IntVector>& vs) {
    if (vs.empty()) return 0;
    const auto d = vs.front().size();
    RatMatrix m(static_cast<Eigen::Index>(vs.size()), d);
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (Eigen::Index j = 0; j < d; ++j) m(static_cast<Eigen::Index>(i), j) = vs[i][j];
    int rank = 0;
    for (Eigen::Index col = 0; col < d && rank < m.rows(); ++col) {
        Eigen::Index piv = rank;
        while (piv < m.rows() && m(piv, col) == 0) ++piv;
        if (piv == m.rows()) continue;
        m.row(piv).swap(m.row(rank));
        for (Eigen::Index r = rank + 1; r < m.rows(); ++r) {
            Rational f = m(r, col) / m(rank, col);
            for (Eigen::Index c = col; c < d; ++c) m(r, c) -= f * m(rank, c);
        }
        ++rank;
    }
    return rank;
}

// Greedy successive minima over a coefficient cube: an upper bound on the true minima.
Rational brute_mud_polar(const LatticeBasis<Rational>& Ld, const RatVector& h, int radius) {
    const int d = Ld.dim();
    Body<Rational> polar{BodyKind::cross_polytope, h};
    std::vector<std::pair<Rational, IntVector>> pts;
    IntVector z = IntVector::Constant(d, -radius);
    while (true) {
        if (!z.isZero()) pts.emplace_back(polar.gauge(Ld.point(z)), z);
        int i = 0;
        while (i < d && z[i] == radius) z[i++] = -radius;
        if (i == d) break;
        ++z[i];
    }
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<IntVector> chosen;
    for (const auto& [g, v] : pts) {
        chosen.push_back(v);
        if (rank_of(chosen) < static_cast<int>(chosen.size())) {
            chosen.pop_back();
            continue;
        }
        if (static_cast<int>(chosen.size()) == d) return g;
    }
    return Rational(-1);
}

Outcome ac7() {
    std::mt19937_64 rng(7);
    std::size_t failures = 0, instances = 0, cross_checked = 0;
    for (int t = 0; t < 120; ++t) {
        const int d = 1 + t % 3;
        auto L = make_lattice(oracle::random_rational_matrix(rng, d, 5, 4));
        RatVector h = empty_box(L, rng);
        auto rep = second_theorem_dual_bound(L, h);
        if (!rep.mu1_exceeds_one) continue;
        ++instances;
        Rational fact = 1;
        for (int i = 2; i <= d; ++i) fact *= i;
        Rational brute = brute_mud_polar(dual_lattice(L), h, d == 3 ? 6 : 10);
        if (brute > 0) {
            ++cross_checked;
            if (!(brute < fact) || rep.mud_dual > brute) ++failures;
        }
        if (!rep.polar_bound_holds || !(rep.mud_dual < fact)) ++failures;
    }
    return {failures == 0 && instances >= 100,
            std::to_string(instances) + " instances with mu_1 > 1, " + std::to_string(cross_checked) +
                " brute-forced, " + std::to_string(failures) + " failures"};
}

Outcome ac8() {
    std::string detail;
    bool ok = true;
    for (const auto& [name, value] : {std::pair<std::string, CertReal>{"phi", CertReal::phi()},
                                      std::pair<std::string, CertReal>{"sqrt2", CertReal::sqrt(2)}}) {
        TransferOptions o;
        o.estimate.grid.log2_max = 22;
        o.fixed_slack = 0.1;
        o.tolerance = 0.15;
        auto thetas = low_discrepancy_points(100, 1, 8);
        auto rep = bl_validate(scalar(value), one, one, thetas, o, name);
        std::size_t lower_ok = 0;
        for (const auto& s : rep.samples) lower_ok += s.lower_ok;
        const bool pass = rep.samples.size() == 100 && lower_ok == 100 && rep.fraction_within >= 0.9;
        ok &= pass;
        detail += name + ": bound " + fmt(rep.bound.approx()) + ", lower ok " + std::to_string(lower_ok) +
                  "/100, within " + fmt(rep.fraction_within, 2) + (rep.note.empty() ? "" : " (" + rep.note + ")") +
                  "; ";
    }
    return {ok, detail};
}

RatMultivector rand_mv(std::mt19937_64& rng, int n, int k, bool integral) {
    RatMultivector u = RatMultivector::zero(n, k);
    for (auto& c : u.coeffs)
        c = integral ? Rational(std::uniform_int_distribution<int>(-9, 9)(rng)) : rand_rat(rng, 9, 5);
    return u;
}

RatVector rand_vec(std::mt19937_64& rng, int n) {
    RatVector v(n);
    for (int i = 0; i < n; ++i) v[i] = rand_rat(rng, 9, 7);
    return v;
}

Outcome ac9() {
    std::mt19937_64 rng(9);
    std::size_t eq_fail = 0, tr_fail = 0;
    for (int it = 0; it < 1000; ++it) {
        const int n = std::uniform_int_distribution<int>(1, 4)(rng);
        const int d = std::uniform_int_distribution<int>(0, n - 1)(rng);
        RatMultivector X = rand_mv(rng, n + 1, d + 1, true);
        if (X.is_zero()) X.coeffs[0] = 1;
        auto r = def_equivalence_check(rand_vec(rng, n), X);
        if (!r.ok() || r.X_sq != r.Z_sq + r.Y_sq) ++eq_fail;
    }
    for (int it = 0; it < 1000; ++it) {
        const int n = std::uniform_int_distribution<int>(1, 4)(rng);
        const int d = std::uniform_int_distribution<int>(0, n - 1)(rng);
        auto c = transpose_identity(rand_vec(rng, n), rand_mv(rng, n, n - d - 1, false), rand_mv(rng, n, d, false));
        if (!c.ok || abs(c.left) != abs(c.right)) ++tr_fail;
    }
    return {eq_fail == 0 && tr_fail == 0, "1000 equivalences, " + std::to_string(eq_fail) + " violations; 1000 " +
                                              "transpose identities, " + std::to_string(tr_fail) + " violations"};
}

double one_step(const ExponentEstimate& e) {
    TGrid g;
    g.log2_max = e.T_max.log() / std::log(2.0);
    const double logT = e.witnesses[e.tail_begin].T.log();
    return (1 + std::max(e.point_estimate, 0.0)) * g.log_step() / logT;
}

bool same_within_step(const ExponentEstimate& a, const ExponentEstimate& b) {
    if (a.capped || b.capped) return a.capped == b.capped;
    return std::abs(a.point_estimate - b.point_estimate) <= one_step(b);
}

Outcome ac10() {
    std::mt19937_64 rng(10);
    const std::vector<int> squarefree = {2, 3, 5, 6, 7, 10, 11, 13, 14, 15};
    std::size_t comparisons = 0, failures = 0;
    double worst = 0;
    for (int n : {2, 2, 2, 3, 3}) {
        auto pool = squarefree;
        std::shuffle(pool.begin(), pool.end(), rng);
        CertVector alpha(n);
        for (int i = 0; i < n; ++i) {
            Rational c = rand_rat(rng, 3, 3);
            if (c == 0) c = 1;
            alpha[i] = CertReal(rand_rat(rng, 5, 7)) + CertReal(c) * CertReal::sqrt(pool[i]);
        }
        GrassmannOptions go;
        go.estimate.grid.log2_max = n == 2 ? 14 : 10;
        go.norm = MultivectorNorm::sup;
        TargetMatrix col(n, 1), row(1, n);
        for (int i = 0; i < n; ++i) col(i, 0) = row(0, i) = alpha[i];
        auto i0 = intermediate_exponents(alpha, 0, CertVector(), go);
        auto i1 = intermediate_exponents(alpha, n - 1, CertVector(), go);
        auto s0 = estimate_weighted(col, CertVector::Constant(n, CertReal(0)), WeightVector::uniform(n),
                                    WeightVector::uniform(1), go.estimate);
        auto s1 = estimate_weighted(row, CertVector::Constant(1, CertReal(0)), WeightVector::uniform(1),
                                    WeightVector::uniform(n), go.estimate);
        for (auto [a, b] : {std::pair{&i0.ordinary, &s0.ordinary}, std::pair{&i0.uniform, &s0.uniform},
                            std::pair{&i1.ordinary, &s1.ordinary}, std::pair{&i1.uniform, &s1.uniform}}) {
            ++comparisons;
            if (!same_within_step(*a, *b)) ++failures;
            if (!a->capped && !b->capped) worst = std::max(worst, std::abs(a->point_estimate - b->point_estimate));
        }
    }
    return {failures == 0, std::to_string(comparisons) + " comparisons, " + std::to_string(failures) +
                               " beyond one grid step, largest gap " + fmt(worst, 4)};
}

Outcome ac11() {
    const Rational alpha(1, 5);
    auto A = scalar(CertReal::phi());
    auto cert = bad_certificate(A, one, one, alpha, 6, Rational(10'000));
    bool levels_ok = true;
    for (const auto& l : cert.cantor.levels) {
        // floor-adjusted: survivors >= floor(c Y_{k-1}^-1 Y_k)
        if (l.survivors < floor_int(l.survivor_bound)) levels_ok = false;
        levels_ok &= l.survivors_ok;
    }
    // Exact re-check of the level constraints on the emitted theta.
    bool theta_ok = cert.cantor.constraints_ok && cert.cantor.distances.size() == 6;
    for (std::size_t j = 0; j < cert.ys.size() && j < 6; ++j) {
        Rational x = Rational(cert.ys[j][0]) * cert.theta[0];
        Rational f = x - Rational(floor_int(x));
        Rational dist = std::min(f, Rational(1 - f));
        theta_ok &= dist >= alpha;
    }
    const Rational eps = Rational(1) / Rational(cert.R) * (alpha * alpha / 4);
    const bool eps_ok = cert.epsilon.is_exact() && cert.epsilon.exact_value() == eps;
    const bool window_ok = cert.window.pass();

    auto control = window_check(A, one, one, CertVector::Constant(1, CertReal(0)), CertReal(eps), Rational(10'000));
    const bool control_fails = !control.pass();

    std::string detail = "levels " + std::string(levels_ok ? "ok" : "short") + ", theta constraints " +
                         (theta_ok ? "ok" : "violated") + ", epsilon " + to_string(cert.epsilon.exact_value()) +
                         (eps_ok ? "" : " (unexpected)") + ", window " + (window_ok ? "pass" : "fail") + " (" +
                         std::to_string(cert.window.checked) + " pairs, min product " +
                         fmt(cert.window.min_product, 4) + "); theta = 0 control " +
                         (control_fails ? "fails as required" : "passes the window (min product " +
                                                                    fmt(control.min_product, 4) + " >= epsilon)") +
                         ", although theta = 0 lies in every excluded neighbourhood";
    return {levels_ok && theta_ok && eps_ok && window_ok && control_fails, detail};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

Outcome ac12() {
    const fs::path base = fs::temp_directory_path() / ("dioph_ac12_" + std::to_string(::getpid()));
    fs::remove_all(base);
    const std::vector<std::vector<std::string>> commands = {
        {"bestapprox", "--instance", "phi", "--bound", "1e6"},
        {"exponents", "--instance", "sqrt2", "--tmax", "2^16"},
        {"exponents", "--instance", "liouville2"},
        {"dyson", "--m", "2", "--n", "2", "--weights-uniform", "--omega", "3"},
        {"bl", "--instance", "phi", "--theta-samples", "20", "--seed", "7"},
        {"intermediate", "--instance", "sqrt2_sqrt3", "--d", "1", "--norm", "sup", "--tmax", "2^10"},
        {"badgen", "--instance", "phi", "--alpha", "0.2", "--depth", "6", "--check-bound", "1e4"},
        {"badgen", "--instance", "phi", "--alpha", "0.2", "--depth", "5", "--selector", "random", "--seed", "9"},
    };
    std::size_t files = 0, differing = 0, errors = 0;
    for (std::size_t i = 0; i < commands.size(); ++i) {
        for (const char* run : {"a", "b"}) {
            auto args = commands[i];
            args.insert(args.end(), {"--format", "json", "--out", (base / run / std::to_string(i)).string()});
            std::ostringstream out, err;
            if (cli::run(args, out, err) != 0) ++errors;
        }
    }
    for (const auto& e : fs::recursive_directory_iterator(base / "a")) {
        if (!e.is_regular_file()) continue;
        ++files;
        auto other = base / "b" / fs::relative(e.path(), base / "a");
        if (!fs::exists(other) || slurp(e.path()) != slurp(other)) ++differing;
    }
    fs::remove_all(base);
    return {errors == 0 && differing == 0 && files == commands.size(),
            std::to_string(files) + " JSON reports compared, " + std::to_string(differing) + " differ, " +
                std::to_string(errors) + " errors"};
}

struct Criterion {
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all = {
        {"AC1", 10, ac1},  {"AC2", 30, ac2},  {"AC3", 5, ac3},    {"AC4", 1, ac4},
        {"AC5", 60, ac5},  {"AC6", 10, ac6},  {"AC7", 60, ac7},   {"AC8", 300, ac8},
        {"AC9", 30, ac9},  {"AC10", 120, ac10}, {"AC11", 120, ac11}, {"AC12", 60, ac12},
    };
    std::vector<std::string> wanted(argv + 1, argv + argc);
    bool all_pass = true;
    for (const auto& c : all) {
        if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.name) == wanted.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.limit_seconds;
        const bool pass = o.pass && in_time;
        all_pass &= pass;
        std::cout << c.name << ' ' << (pass ? "PASS" : "FAIL") << "  " << o.detail << "  [" << fmt(secs, 2) << " s"
                  << (in_time ? "" : ", over the " + fmt(c.limit_seconds, 0) + " s limit") << "]" << std::endl;
    }
    return all_pass ? 0 : 1;
}
