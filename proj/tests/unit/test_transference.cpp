#include "dioph/numerics/errors.hpp"
#include "dioph/numerics/sampling.hpp"
#include "dioph/transference/transference.hpp"
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

WeightVector random_weights(std::mt19937_64& rng, std::size_t k) {
    std::uniform_int_distribution<int> d(1, 9);
    std::vector<Rational> w(k);
    Rational total = 0;
    for (auto& x : w) total += (x = d(rng));
    for (auto& x : w) x /= total;
    return WeightVector(w);
}

Rational random_omega(std::mt19937_64& rng) {
    int q = std::uniform_int_distribution<int>(1, 7)(rng);
    return Rational(std::uniform_int_distribution<int>(q, 100 * q)(rng), q);
}

// The bound read off the last line of the Minkowski argument: with
// x = d_s d_r (w - 1) / ((d_s w + d_r)(m + n - 1)), tw >= (1 + x / rho_r) / (1 - x / rho_s).
Rational minkowski_form(std::size_t m, std::size_t n, const WeightVector& s, const WeightVector& r,
                        const Rational& w) {
    Rational x = s.delta() * r.delta() * (w - 1) / ((s.delta() * w + r.delta()) * Rational(long(m + n - 1)));
    return (1 + x / r.rho()) / (1 - x / s.rho());
}

// Coefficients (a, b, c, d) of the Moebius form (a w + b) / (c w + d).
struct Moebius {
    Rational a, b, c, d;
};
Moebius forward_coeffs(std::size_t m, std::size_t n, const WeightVector& s, const WeightVector& r) {
    Rational K = Rational(long(m + n - 1)) * s.rho() * r.rho();
    Rational dd = s.delta() * r.delta();
    return {K * s.delta() + s.rho() * dd, K * r.delta() - s.rho() * dd, K * s.delta() - r.rho() * dd,
            K * r.delta() + r.rho() * dd};
}

TransferOptions grid_to(long log2_max) {
    TransferOptions o;
    o.estimate.grid.log2_max = log2_max;
    return o;
}

}  // namespace

TEST_SUITE("transference") {

TEST_CASE("weighted bound with uniform weights is the classical bound") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> dim(1, 5);
    for (int it = 0; it < 300; ++it) {
        std::size_t m = dim(rng), n = dim(rng);
        Rational w = random_omega(rng);
        DysonBoundInput in{m, n, WeightVector::uniform(m), WeightVector::uniform(n), w};
        CHECK(dyson_weighted_bound(in, Direction::forward) == dyson_classical_bound(m, n, w));
        CHECK(dyson_weighted_bound(in, Direction::backward) == dyson_classical_bound(n, m, w));
    }
    for (std::size_t m = 1; m <= 5; ++m)
        for (std::size_t n = 1; n <= 5; ++n) {
            DysonBoundInput in{m, n, WeightVector::uniform(m), WeightVector::uniform(n), ExtRational::infinity()};
            CHECK(dyson_weighted_bound(in, Direction::forward) == dyson_classical_bound(m, n, in.omega));
        }
}

TEST_CASE("classical bound values") {
    CHECK(dyson_classical_bound(2, 2, Rational(3)) == ExtRational(Rational(7, 5)));
    CHECK(dyson_classical_bound(1, 2, ExtRational::infinity()) == ExtRational(2L));
    CHECK(dyson_classical_bound(1, 1, ExtRational::infinity()).infinite);
    // n = 1: (w + m - 1) / m
    CHECK(dyson_classical_bound(3, 1, Rational(5, 2)) == ExtRational(Rational(3, 2)));
}

TEST_CASE("weighted bound against the Minkowski form") {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> dim(1, 4);
    for (int it = 0; it < 300; ++it) {
        std::size_t m = dim(rng), n = dim(rng);
        WeightVector s = random_weights(rng, m), r = random_weights(rng, n);
        Rational w = random_omega(rng);
        DysonBoundInput in{m, n, s, r, w};
        auto b = dyson_weighted_bound(in, Direction::forward);
        REQUIRE_FALSE(b.infinite);
        CHECK(b.value == minkowski_form(m, n, s, r, w));
        // backward: the same argument with the roles of (A, s) and (tA, r) exchanged
        auto bb = dyson_weighted_bound(in, Direction::backward);
        CHECK(bb.value == minkowski_form(n, m, r, s, w));
    }
}

TEST_CASE("fixed point at one and composition") {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> dim(1, 5);
    for (int it = 0; it < 200; ++it) {
        std::size_t m = dim(rng), n = dim(rng);
        WeightVector s = random_weights(rng, m), r = random_weights(rng, n);
        DysonBoundInput in{m, n, s, r, 1L};
        auto f = dyson_weighted_bound(in, Direction::forward);
        CHECK(f == ExtRational(1L));
        CHECK(dyson_weighted_bound(in, Direction::backward) == ExtRational(1L));
        DysonBoundInput back{m, n, s, r, f};
        CHECK(dyson_weighted_bound(back, Direction::backward) == ExtRational(1L));
        CHECK(dyson_classical_bound(m, n, 1L) == ExtRational(1L));
    }
}

TEST_CASE("monotone in omega") {
    std::mt19937_64 rng(14);
    std::uniform_int_distribution<int> dim(1, 5);
    for (int it = 0; it < 300; ++it) {
        std::size_t m = dim(rng), n = dim(rng);
        WeightVector s = random_weights(rng, m), r = random_weights(rng, n);
        Moebius c = forward_coeffs(m, n, s, r);
        // derivative numerator of (a w + b) / (c w + d)
        CHECK(c.a * c.d - c.b * c.c >= 0);
        Rational w1 = random_omega(rng), w2 = random_omega(rng);
        if (w2 < w1) std::swap(w1, w2);
        DysonBoundInput a{m, n, s, r, w1}, b{m, n, s, r, w2}, inf{m, n, s, r, ExtRational::infinity()};
        for (Direction d : {Direction::forward, Direction::backward}) {
            CHECK(dyson_weighted_bound(a, d) <= dyson_weighted_bound(b, d));
            CHECK(dyson_weighted_bound(b, d) <= dyson_weighted_bound(inf, d));
        }
        CHECK(dyson_classical_bound(m, n, w1) <= dyson_classical_bound(m, n, w2));
    }
}

TEST_CASE("limit at infinity") {
    std::mt19937_64 rng(15);
    std::uniform_int_distribution<int> dim(1, 4);
    for (int it = 0; it < 100; ++it) {
        std::size_t m = dim(rng), n = dim(rng);
        WeightVector s = random_weights(rng, m), r = random_weights(rng, n);
        Moebius c = forward_coeffs(m, n, s, r);
        auto lim = dyson_weighted_bound({m, n, s, r, ExtRational::infinity()}, Direction::forward);
        if (c.c == 0) {
            CHECK(lim.infinite);
        } else {
            REQUIRE_FALSE(lim.infinite);
            CHECK(lim.value == c.a / c.c);
            auto big = dyson_weighted_bound({m, n, s, r, Rational(1'000'000'000)}, Direction::forward);
            CHECK(std::fabs(big.approx() - lim.approx()) < 1e-6 * lim.approx());
        }
    }
}

TEST_CASE("one by one: the bound is omega") {
    WeightVector one = WeightVector::uniform(1);
    for (Rational w : {Rational(1), Rational(3, 2), Rational(7), Rational(100)})
        for (Direction d : {Direction::forward, Direction::backward})
            CHECK(dyson_weighted_bound({1, 1, one, one, w}, d) == ExtRational(w));
    CHECK(dyson_weighted_bound({1, 1, one, one, ExtRational::infinity()}, Direction::forward).infinite);
}

TEST_CASE("below dirichlet is flagged but evaluated") {
    DysonBoundInput in{2, 3, WeightVector::uniform(2), WeightVector::uniform(3), Rational(1, 2)};
    CHECK(in.below_dirichlet());
    auto b = dyson_weighted_bound(in, Direction::forward);
    CHECK(b == dyson_classical_bound(2, 3, Rational(1, 2)));
    CHECK(b < ExtRational(1L));
}

TEST_CASE("bad weight dimensions") {
    DysonBoundInput in{2, 2, WeightVector::uniform(1), WeightVector::uniform(2), 2L};
    CHECK_THROWS_AS(dyson_weighted_bound(in, Direction::forward), InvalidArgument);
}

TEST_CASE("reciprocal and bl bound") {
    CHECK(bl_bound(1L) == ExtRational(1L));
    CHECK(bl_bound(ExtRational::infinity()) == ExtRational(0L));
    CHECK(bl_bound(Rational(5, 4)) == ExtRational(Rational(4, 5)));
    CHECK_THROWS_AS(reciprocal(0L), InvalidArgument);
}

TEST_CASE("dyson validation on sqrt2") {
    WeightVector one = WeightVector::uniform(1);
    auto rep = validate_dyson(scalar(CertReal::sqrt(2)), one, one, grid_to(16), "sqrt2");
    CHECK(rep.verdict == Verdict::consistent);
    REQUIRE(rep.estimates.size() == 4);
    for (const auto& e : rep.estimates) CHECK(std::fabs(e.estimate.point_estimate - 1) < 0.1);
    CHECK(rep.checks.size() == 4);
    CHECK(std::fabs(rep.bound.approx() - 1) < 0.1);
}

TEST_CASE("dyson validation on a liouville number") {
    WeightVector one = WeightVector::uniform(1);
    auto rep = validate_dyson(scalar(CertReal::liouville(2)), one, one, grid_to(16), "liouville2");
    CHECK(rep.verdict == Verdict::consistent);
    // the truncation witnesses give the same large rate on both sides
    CHECK(rep.estimates[0].estimate.point_estimate > 10);
    CHECK(rep.estimates[2].estimate.point_estimate > 10);
    CHECK(rep.estimates[0].estimate.method == "liouville");
    CHECK(rep.bound.approx() > 10);
    // with a cap below the witnessed rate both sides are capped and the bound is infinite
    TransferOptions o = grid_to(16);
    o.estimate.cap = 8;
    auto capped = validate_dyson(scalar(CertReal::liouville(2)), one, one, o);
    CHECK(capped.verdict == Verdict::consistent);
    CHECK(capped.estimates[0].estimate.capped);
    CHECK(capped.estimates[2].estimate.capped);
    CHECK(capped.bound.infinite);
}

TEST_CASE("dyson validation for a linear form in two variables") {
    TargetMatrix A(1, 2);
    A(0, 0) = CertReal::sqrt(2);
    A(0, 1) = CertReal::sqrt(3);
    auto rep = validate_dyson(A, WeightVector::uniform(1), WeightVector::uniform(2), grid_to(14), "sqrt2,sqrt3");
    CHECK(rep.verdict == Verdict::consistent);
    for (const auto& c : rep.checks) CHECK_MESSAGE(c.holds, c.name);
    // the estimates themselves sit near the critical value 1
    for (const auto& e : rep.estimates) CHECK(std::fabs(e.estimate.point_estimate - 1) < 0.2);
}

TEST_CASE("dyson validation on a rational matrix is inconclusive") {
    WeightVector one = WeightVector::uniform(1);
    auto rep = validate_dyson(scalar(CertReal(Rational(1, 2))), one, one, grid_to(8));
    CHECK(rep.verdict == Verdict::inconclusive);
    CHECK_FALSE(rep.note.empty());
}

TEST_CASE("inhomogeneous golden ratio") {
    WeightVector one = WeightVector::uniform(1);
    auto thetas = low_discrepancy_points(16, 1, 7);
    TransferOptions o = grid_to(16);
    o.tolerance = 0.15;
    auto rep = bl_validate(scalar(CertReal::phi()), one, one, thetas, o, "phi");
    CHECK(rep.verdict != Verdict::violated);
    CHECK(rep.verdict == Verdict::consistent);
    REQUIRE(rep.samples.size() == 16);
    CHECK(std::fabs(rep.bound.approx() - 1) < 0.05);
    for (const auto& s : rep.samples) {
        CHECK(s.note.empty());
        CHECK(s.lower_ok);
    }
    CHECK(rep.fraction_within > 0.5);
}

TEST_CASE("inhomogeneous estimates against a brute-force minimum") {
    // the per-theta lower bound is a rate certified at every tail scale: D(T) <= T^-lb
    WeightVector one = WeightVector::uniform(1);
    const long double phi = (1 + std::sqrt(5.0L)) / 2;
    auto thetas = low_discrepancy_points(4, 1, 3);
    TransferOptions o = grid_to(12);
    auto rep = bl_validate(scalar(CertReal::phi()), one, one, thetas, o);
    for (const auto& s : rep.samples) {
        long double th = static_cast<long double>(to_double(s.theta[0]));
        long double T = std::pow(2.0L, 12);
        long double D = oracle::brute_inhomogeneous_min(phi, th, static_cast<std::int64_t>(std::ceil(T)) - 1);
        CHECK(D <= std::pow(T, -static_cast<long double>(s.lower_bound)) * (1 + 1e-9L));
    }
}

TEST_CASE("bl validation never reports violated") {
    WeightVector one = WeightVector::uniform(1);
    auto thetas = low_discrepancy_points(6, 1, 5);
    for (const CertReal& a : {CertReal::sqrt(3), CertReal::liouville(3), CertReal::parse("(sqrt(7)-1)/3")}) {
        auto rep = bl_validate(scalar(a), one, one, thetas, grid_to(10));
        CHECK(rep.verdict != Verdict::violated);
        CHECK(rep.samples.size() == thetas.size());
    }
}

TEST_CASE("bl validation rejects a theta of the wrong size") {
    WeightVector one = WeightVector::uniform(1);
    std::vector<RatVector> bad{RatVector::Zero(2)};
    CHECK_THROWS_AS(bl_validate(scalar(CertReal::phi()), one, one, bad), InvalidArgument);
}

TEST_CASE("psi-phi condition by direct evaluation") {
    const CertReal C = mahler_constant(2);
    auto at = [&](const PowerLaw& psi, const PowerLaw& phi, long log2T) {
        return psi_phi_condition(psi, phi, C, CertReal(Rational(Integer(1) << log2T)));
    };
    // psi = T^-wh, phi = T^-w: C^-w T^-(w wh) > C / T holds for large T exactly when w wh < 1
    PowerLaw psi{1, 1};
    CHECK(at(psi, {1, Rational(1, 2)}, 40) == ScaleStatus::holds);
    CHECK(at(psi, {1, Rational(1, 2)}, 2) == ScaleStatus::fails);
    CHECK(at(psi, {1, 2}, 40) == ScaleStatus::fails);
    CHECK(at(psi, {1, 2}, 2) == ScaleStatus::fails);
    CHECK(at({1, Rational(1, 2)}, {1, Rational(3, 2)}, 60) == ScaleStatus::holds);
    CHECK(at({1, 2}, {1, 1}, 60) == ScaleStatus::fails);
    // threshold: T^(1/2) > C^(3/2) exactly when T > C^3
    const double C3 = std::pow(C.approx(), 3);
    long k = static_cast<long>(std::floor(std::log2(C3)));
    CHECK(at(psi, {1, Rational(1, 2)}, k) == ScaleStatus::fails);
    CHECK(at(psi, {1, Rational(1, 2)}, k + 1) == ScaleStatus::holds);
}

TEST_CASE("psi-phi transfer for sqrt2") {
    WeightVector one = WeightVector::uniform(1);
    const TargetMatrix A = scalar(CertReal::sqrt(2));
    auto thetas = low_discrepancy_points(8, 1, 21);
    TransferOptions o = grid_to(12);
    PowerLaw psi{Rational(1, 8), 1}, phi{1, Rational(1, 4)};
    auto rep = psi_phi_transfer_check(A, one, one, psi, phi, thetas, o, "sqrt2");
    CHECK(rep.summary.verdict == Verdict::consistent);
    CHECK(rep.condition_on_tail);
    // q |q sqrt2 - p| > 1/(2 sqrt2 + 1) > 1/8: every scale is certified
    CHECK(rep.certified_scales == rep.scales.size());
    CHECK(rep.witnesses_missing == 0);
    CHECK(rep.witnesses_found == rep.scales.size() * thetas.size());

    const long double s2 = std::sqrt(2.0L);
    const long double C1 = rep.C1.approx();
    for (const auto& ps : rep.scales) {
        long double T = std::pow(2.0L, static_cast<long double>(to_double(ps.T.exponent)));
        // certificate against brute force over 1 <= q <= T
        long double D = oracle::brute_inhomogeneous_min(s2, 0, static_cast<std::int64_t>(std::floor(T)));
        CHECK(D > 1 / (8 * T));
        for (std::size_t i = 0; i < thetas.size(); ++i) {
            REQUIRE(ps.witnesses[i].has_value());
            long double th = static_cast<long double>(to_double(thetas[i][0]));
            long double p = static_cast<long double>((*ps.witnesses[i])[0]);
            long double y = p * s2 - th;
            long double err = std::fabs(y - std::round(y));
            CHECK(std::fabs(p) <= C1 * 8 * T * (1 + 1e-12L));
            CHECK(err <= C1 / T * (1 + 1e-12L));
            if (ps.condition == ScaleStatus::holds) CHECK(ps.witness_beats_phi[i]);
        }
    }
}

TEST_CASE("psi-phi transfer with a failing condition is inconclusive") {
    WeightVector one = WeightVector::uniform(1);
    auto thetas = low_discrepancy_points(3, 1, 2);
    PowerLaw psi{Rational(1, 8), 1}, phi{1, 2};
    auto rep = psi_phi_transfer_check(scalar(CertReal::sqrt(2)), one, one, psi, phi, thetas, grid_to(10));
    CHECK_FALSE(rep.condition_on_tail);
    CHECK(rep.summary.verdict == Verdict::inconclusive);
    CHECK(rep.witnesses_missing == 0);
}

TEST_CASE("psi-phi transfer for rationals") {
    // q = 7 solves the homogeneous problem exactly
    WeightVector one = WeightVector::uniform(1);
    auto thetas = low_discrepancy_points(2, 1, 4);
    PowerLaw psi{Rational(1, 8), 1}, phi{1, Rational(1, 2)};
    auto rep = psi_phi_transfer_check(scalar(CertReal(Rational(3, 7))), one, one, psi, phi, thetas, grid_to(8));
    // below T = 7 the distance is at least 1/7 > psi(T)
    std::size_t below7 = 0;
    for (const auto& ps : rep.scales) {
        bool small = ps.T.value().approx() < 7;
        below7 += small;
        CHECK((ps.not_approximable == ScaleStatus::holds) == small);
    }
    CHECK(rep.certified_scales == below7);
    CHECK(rep.witnesses_missing == 0);
    CHECK(rep.summary.verdict == Verdict::inconclusive);
    auto none = psi_phi_transfer_check(scalar(CertReal(Rational(1, 2))), one, one, psi, phi, thetas, grid_to(8));
    CHECK(none.certified_scales == 0);
    CHECK(none.summary.verdict == Verdict::inconclusive);
}

TEST_CASE("psi-phi transfer in two dimensions") {
    TargetMatrix A(1, 2);
    A(0, 0) = CertReal::sqrt(2);
    A(0, 1) = CertReal::sqrt(3);
    WeightVector s = WeightVector::uniform(1), r = WeightVector::uniform(2);
    auto thetas = low_discrepancy_points(3, 2, 9);
    PowerLaw psi{Rational(1, 16), 1}, phi{1, Rational(1, 2)};
    TransferOptions o = grid_to(6);
    o.estimate.grid.log2_min = 2;
    auto rep = psi_phi_transfer_check(A, s, r, psi, phi, thetas, o);
    CHECK(rep.summary.verdict != Verdict::violated);
    CHECK(rep.witnesses_missing == 0);
    CHECK(rep.certified_scales > 0);
}

}  // TEST_SUITE
