#include "dioph/badset/badset.hpp"
#include "dioph/exponents/exponents.hpp"
#include "dioph/numerics/errors.hpp"
#include "dioph/numerics/sampling.hpp"
#include "oracles/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace dioph;

namespace {

TargetMatrix scalar(const CertReal& a) {
    TargetMatrix A(1, 1);
    A(0, 0) = a;
    return A;
}

const WeightVector one = WeightVector::uniform(1);

RatVector rv(std::initializer_list<Rational> xs) {
    RatVector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (const auto& x : xs) v[i++] = x;
    return v;
}

Rational frac_dist(const Rational& x) {
    Rational f = x - Rational(floor_int(x));
    return f < Rational(1, 2) ? f : Rational(1) - f;
}

std::vector<RatVector> powers(long base, std::size_t count) {
    std::vector<RatVector> ys;
    Integer Y = base;
    for (std::size_t k = 0; k < count; ++k, Y *= base) ys.push_back(rv({Rational(Y)}));
    return ys;
}

}  // namespace

TEST_SUITE("badset") {

TEST_CASE("R(alpha) and c") {
    CHECK(cantor_ratio(Rational(1, 5), 1, 1) == 8);
    CHECK(cantor_constant(Rational(1, 5), 8, 1, 1).exact_value() == Rational(9, 40));
    // c(R/2) < 1/10 <= c(R)
    for (Rational a : {Rational(1, 100), Rational(1, 10), Rational(1, 4), Rational(2, 5)})
        for (std::size_t n = 1; n <= 3; ++n)
            for (Rational d : {Rational(1, 3), Rational(1, 2), Rational(1)}) {
                if (d * n > 1) continue;
                Integer R = cantor_ratio(a, n, d);
                CHECK(cantor_constant(a, R, n, d).approx() >= 0.1 - 1e-12);
                if (R > 2) CHECK(cantor_constant(a, R / 2, n, d).approx() < 0.1);
            }
    CHECK_THROWS_AS(cantor_ratio(Rational(1, 2), 1, 1), InvalidArgument);
    CHECK_THROWS_AS(cantor_ratio(Rational(0), 1, 1), InvalidArgument);
}

TEST_CASE("epsilon from alpha") {
    CHECK(epsilon_from_alpha(Rational(2, 5), 4, 1, 1, 1).exact_value() == Rational(1, 100));
    CHECK(epsilon_from_alpha(Rational(1, 5), 8, 1, 1, 1).exact_value() == Rational(1, 800));
    for (Rational a : {Rational(1, 7), Rational(1, 3)})
        for (long R : {2L, 5L, 16L}) CHECK(epsilon_from_alpha(a, R, 1, 1, 1).exact_value() == a * a / (4 * R));
    // (1/R) (alpha^2 / (4 m n))^(1/delta) at delta = 1/2
    CHECK(epsilon_from_alpha(Rational(1, 4), 2, 2, 1, Rational(1, 2)).approx() ==
          doctest::Approx(std::pow(1.0 / 16 / 8, 2) / 2));
    double prev = 0;
    for (int i = 1; i < 10; ++i) {
        double e = epsilon_from_alpha(Rational(i, 20), 8, 2, 3, Rational(1, 3)).approx();
        CHECK(e > prev);
        prev = e;
    }
    CHECK(epsilon_from_alpha(Rational(1, 5), 16, 1, 1, 1).approx() < epsilon_from_alpha(Rational(1, 5), 8, 1, 1, 1).approx());
    CHECK_THROWS_AS(epsilon_from_alpha(Rational(3, 5), 8, 1, 1, 1), InvalidArgument);
    CHECK_THROWS_AS(epsilon_from_alpha(Rational(1, 5), 1, 1, 1, 1), InvalidArgument);
}

TEST_CASE("cantor descent with Y_k = R^k") {
    const Rational alpha(1, 20);
    const Integer R = cantor_ratio(alpha, 1, 1);
    auto ys = powers(to_int64(R), 7);
    CantorState st = cantor_descend(ys, alpha, one, 6);
    REQUIRE(st.levels.size() == 7);
    CHECK(st.constraints_ok);
    const Rational c = Rational(1) - 2 * alpha - Rational(3) / Rational(R);
    for (std::size_t k = 1; k < st.levels.size(); ++k) {
        const auto& lv = st.levels[k];
        CHECK(lv.survivors_ok);
        CHECK(lv.children_ok);
        CHECK(lv.children == R);
        CHECK(Rational(lv.survivors) >= Rational(floor_int(c * Rational(R))));
    }
}

TEST_CASE("cantor descent with Y_k = 100^k") {
    const Rational alpha(1, 10);
    auto ys = powers(100, 6);
    CantorOptions o;
    o.R = 100;
    CantorState st = cantor_descend(ys, alpha, one, 5, o);
    CHECK(st.constraints_ok);
    REQUIRE(st.distances.size() == 5);
    for (std::size_t j = 0; j < 5; ++j) {
        // recomputed here from the emitted point
        Rational d = frac_dist(ys[j][0] * st.theta[0]);
        CHECK(d == st.distances[j]);
        CHECK(d >= alpha);
    }
    for (const auto& lv : st.levels) {
        CHECK(lv.survivors_ok);
        CHECK(lv.children_ok);
    }
}

TEST_CASE("cantor descent in two dimensions with weights") {
    const WeightVector r({Rational(1, 3), Rational(2, 3)});
    const Rational alpha(1, 8);
    std::mt19937_64 rng(3);
    for (Selector sel : {Selector::first, Selector::random}) {
        CantorOptions o;
        o.selector = sel;
        o.seed = 9;
        o.R = cantor_ratio(alpha, 2, r.delta());
        // |y|_r = max(|y1|^3, |y2|^(3/2)) grows by at least min(11^3, 110^(3/2)) > R = 1024
        REQUIRE(*o.R == 1024);
        std::vector<RatVector> ys;
        Integer a = 1, b = 1;
        for (int k = 0; k < 4; ++k) {
            a *= 11 + static_cast<long>(rng() % 2);
            b *= 110 + static_cast<long>(rng() % 3);
            ys.push_back(rv({Rational(a), Rational(-b)}));
        }
        CantorState st = cantor_descend(ys, alpha, r, 3, o);
        CHECK(st.constraints_ok);
        for (std::size_t j = 0; j < 3; ++j) {
            Rational v = ys[j][0] * st.theta[0] + ys[j][1] * st.theta[1];
            CHECK(frac_dist(v) >= alpha);
        }
        for (const auto& lv : st.levels) CHECK(lv.survivors_ok);
        CantorState again = cantor_descend(ys, alpha, r, 3, o);
        CHECK(again.theta == st.theta);
    }
}

TEST_CASE("cantor preconditions") {
    auto ys = powers(2, 4);
    CHECK_THROWS_AS(cantor_descend(ys, Rational(1, 5), one, 3), InvalidArgument);  // ratio 2 < 8
    CHECK_THROWS_AS(cantor_descend(powers(8, 2), Rational(1, 5), one, 3), InvalidArgument);
    CHECK_THROWS_AS(cantor_descend(powers(8, 4), Rational(1, 2), one, 3), InvalidArgument);
    CantorOptions o;
    o.R = 2;  // c = 1 - 0.4 - 1.5 < 0
    CHECK_THROWS_AS(cantor_descend(ys, Rational(1, 5), one, 3, o), InvalidArgument);
}

TEST_CASE("growth subsequence of the golden ratio") {
    auto seq = exponent_sequence(scalar(CertReal::phi()), one, one, Rational(10'000'000));
    for (long R : {2L, 8L, 64L}) {
        auto sub = growth_subsequence(seq, R);
        REQUIRE(sub.size() >= 3);
        CHECK(sub[0] == 0);
        for (std::size_t k = 0; k + 1 < sub.size(); ++k) {
            double Yk = seq.entries[sub[k]].Y.approx(), Yn = seq.entries[sub[k + 1]].Y.approx();
            double Ysucc = seq.entries[sub[k] + 1].Y.approx();
            CHECK(Yn >= R * Yk);
            CHECK(Ysucc >= Yn / R);
        }
    }
}

TEST_CASE("window check against a direct scan") {
    const double phi = (1 + std::sqrt(5.0)) / 2;
    std::mt19937_64 rng(5);
    for (int it = 0; it < 6; ++it) {
        Rational th(static_cast<long>(rng() % 997), 997);
        Rational eps(1 + static_cast<long>(rng() % 40), 400);
        WindowReport w = window_check(scalar(CertReal::phi()), one, one, CertVector::Constant(1, CertReal(th)),
                                      CertReal(eps), Rational(2000));
        std::uint64_t count = 0, viol = 0;
        for (long p = -2000; p <= 2000; ++p) {
            if (p == 0) continue;
            long double y = static_cast<long double>(p) * phi - to_double(th);
            long double d = std::fabs(y - std::nearbyint(y));
            ++count;
            viol += std::fabs(static_cast<long double>(p)) * d < to_double(eps);
        }
        CHECK(w.checked == count);
        CHECK(w.violations == viol);
    }
}

TEST_CASE("the homogeneous problem and the window") {
    const CertReal eps = epsilon_from_alpha(Rational(1, 5), 8, 1, 1, 1);
    // phi is badly approximable: |p| |p phi - q| stays near 1/sqrt5 and above eps
    WindowReport w = window_check(scalar(CertReal::phi()), one, one, CertVector::Constant(1, CertReal()), eps,
                                  Rational(10'000));
    CHECK(w.pass());
    CHECK(w.min_product == doctest::Approx(2 - (1 + std::sqrt(5.0)) / 2));
    // a Liouville number is not: p = 2^(k!) gives |p| |p x - q| ~ 2^(k! - (k+1)!)
    WindowReport l = window_check(scalar(CertReal::liouville(2)), one, one, CertVector::Constant(1, CertReal()),
                                  eps, Rational(10'000));
    CHECK_FALSE(l.pass());
}

TEST_CASE("Bad certificate for the golden ratio") {
    BadCertificate cert =
        bad_certificate(scalar(CertReal::phi()), one, one, Rational(1, 5), 6, Rational(10'000));
    CHECK(cert.R == 8);
    CHECK(cert.epsilon.exact_value() == Rational(1, 800));
    CHECK(cert.cantor.constraints_ok);
    CHECK(cert.window.pass());
    CHECK(cert.window.checked == 20'000);
    REQUIRE(cert.ys.size() == 7);
    for (std::size_t j = 0; j < 6; ++j) CHECK(frac_dist(Rational(cert.ys[j][0]) * cert.theta[0]) >= Rational(1, 5));
    for (std::size_t k = 1; k < cert.cantor.levels.size(); ++k) CHECK(cert.cantor.levels[k].survivors_ok);
    CHECK_FALSE(cert.caveat.empty());
}

TEST_CASE("Bad certificate preconditions") {
    CHECK_THROWS_AS(bad_certificate(scalar(Rational(1, 2)), one, one, Rational(1, 5), 3, Rational(100)),
                    DegenerateRank);
}

TEST_CASE("the congruence behind the certificate") {
    // <q_k, theta> = <A q_k - p_k, p> - <q_k, tA p - q - theta> mod 1
    std::mt19937_64 rng(8);
    auto ri = [&](int lim) { return static_cast<long>(rng() % (2 * lim + 1)) - lim; };
    for (int it = 0; it < 300; ++it) {
        int m = 1 + static_cast<int>(rng() % 3), n = 1 + static_cast<int>(rng() % 3);
        RatMatrix A = RatMatrix::Zero(m, n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) A(i, j) = Rational(ri(20), 1 + static_cast<long>(rng() % 13));
        RatVector qk(n), pk(m), p(m), q(n), th(n);
        for (int j = 0; j < n; ++j) {
            qk[j] = ri(50);
            q[j] = ri(50);
            th[j] = Rational(ri(30), 31);
        }
        for (int i = 0; i < m; ++i) {
            pk[i] = ri(50);
            p[i] = ri(50);
        }
        Rational lhs = qk.dot(th);
        Rational rhs = RatVector(A * qk - pk).dot(p) - qk.dot(RatVector(A.transpose() * p - q - th));
        CHECK(denom(lhs - rhs) == 1);
    }
}

TEST_CASE("Borel-Cantelli sets for sqrt2") {
    auto seq = exponent_sequence(scalar(CertReal::sqrt(2)), one, one, Rational(1'000'000));
    auto thetas = low_discrepancy_points(4000, 1, 1);
    BorelCantelliReport rep = borel_cantelli_experiment(seq, one, one, Rational(1, 2), thetas);
    CHECK(rep.eta == Rational(1, 4));
    REQUIRE(rep.levels.size() == seq.entries.size());
    CHECK(rep.levels_over_bound == 0);
    for (const auto& lv : rep.levels) {
        // for n = 1 and integer q the measure of S_k is exactly 2 Y^-eta
        const double p = std::min(1.0, 2 * std::pow(lv.Y, -0.25));
        CHECK(lv.measure_bound == doctest::Approx(2 * std::pow(lv.Y, -0.25)));
        CHECK(std::abs(lv.frequency - p) <= 4 * std::sqrt(p * (1 - p) / 4000) + 0.01);
    }
    // the bounds decay geometrically, so the sum stays small
    CHECK(rep.bound_sum < 2 * static_cast<double>(rep.levels.size()));
    CHECK(rep.levels.back().measure_bound < rep.levels.front().measure_bound / 4);
}

TEST_CASE("a Cantor point misses the small neighbourhoods") {
    const Rational alpha(1, 5);
    BadCertificate cert = bad_certificate(scalar(CertReal::phi()), one, one, alpha, 6, Rational(10));
    BestApproxSequence sub;
    auto seq = exponent_sequence(scalar(CertReal::phi()), one, one, Rational(10'000'000));
    for (std::size_t i : cert.subsequence) sub.entries.push_back(seq.entries[i]);
    sub.entries.pop_back();  // the last term only sets the box size
    // eta = epsilon / 2 with epsilon = 2: radii Y^-1 <= alpha once Y >= 5
    BorelCantelliReport rep = borel_cantelli_experiment(sub, one, one, Rational(2), {cert.theta});
    for (const auto& lv : rep.levels)
        if (lv.Y >= 5) CHECK(lv.hits == 0);
}

}  // TEST_SUITE
