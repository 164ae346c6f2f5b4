#include "dioph/lattice/lattice.hpp"
#include "oracles/oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace dioph;

namespace {

RatMatrix diag2(Rational a, Rational b) {
    RatMatrix m = RatMatrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

RatVector vec(std::initializer_list<Rational> xs) {
    RatVector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (const auto& x : xs) v[i++] = x;
    return v;
}

// Random half-widths scaled so that mu_1 of the closed box is exactly 10/9.
RatVector box_with_empty_interior(const LatticeBasis<Rational>& L, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(1, 6);
    const int d = L.dim();
    RatVector h(d);
    for (int i = 0; i < d; ++i) h[i] = Rational(num(rng), num(rng));
    Rational mu1 = successive_minima(L, Body<Rational>{BodyKind::box, h}, 1).values.front();
    return h * (Rational(9, 10) * mu1);
}

}  // namespace

TEST_SUITE("lattice") {

TEST_CASE("parametrized lattice examples") {
    WeightVector one = WeightVector::uniform(1);
    RatMatrix zero = RatMatrix::Zero(1, 1);
    auto L0 = build_parametrized_lattice<Rational>(zero, Rational(1), Rational(1), one, one);
    CHECK(L0.basis == RatMatrix::Identity(2, 2));

    RatMatrix A(1, 1);
    A(0, 0) = Rational(1, 2);
    auto L = build_parametrized_lattice<Rational>(A, Rational(1), Rational(1), one, one);
    CHECK(L.basis(0, 0) == 1);
    CHECK(L.basis(0, 1) == Rational(1, 2));
    CHECK(L.basis(1, 0) == 0);
    CHECK(L.basis(1, 1) == 1);

    CHECK_THROWS_AS(build_parametrized_lattice<Rational>(A, Rational(0), Rational(1), one, one), InvalidArgument);
}

TEST_CASE("determinant is 1/(QT) and the dual matches the closed form") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
    WeightVector s = WeightVector::parse("1/3,2/3", 2), r = WeightVector::parse("1/2,1/4,1/4", 3);
    for (int trial = 0; trial < 20; ++trial) {
        RatMatrix A(2, 3);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 3; ++j) A(i, j) = Rational(num(rng), den(rng));
        // Q, T perfect powers so every scaling is rational.
        Rational Q = rpow(Rational(den(rng) + 1), 12), T = rpow(Rational(den(rng) + 1, den(rng)), 4);
        auto L = build_parametrized_lattice<Rational>(A, Q, T, s, r);
        CHECK(L.det == Rational(1) / (Q * T));
        CHECK(oracle::laplace_det(L.basis) == L.det);

        // diag(g_s(Q), g_r(T)) [[I, 0], [-A^t, I]]
        RatMatrix expected = RatMatrix::Zero(5, 5);
        for (int i = 0; i < 2; ++i) expected(i, i) = ScalarOps<Rational>::power(Q, s[static_cast<std::size_t>(i)]);
        for (int j = 0; j < 3; ++j) {
            Rational g = ScalarOps<Rational>::power(T, r[static_cast<std::size_t>(j)]);
            expected(2 + j, 2 + j) = g;
            for (int i = 0; i < 2; ++i) expected(2 + j, i) = -g * A(i, j);
        }
        CHECK(dual_lattice(L).basis == expected);
    }
}

TEST_CASE("certified lattice with an irrational entry") {
    CertMatrix A(1, 1);
    A(0, 0) = CertReal::sqrt(Rational(2));
    WeightVector one = WeightVector::uniform(1);
    auto L = build_parametrized_lattice<CertReal>(A, CertReal(Rational(1, 10)), CertReal(100), one, one);
    // points (10 (p + q sqrt2), q / 100) in [-1,1]^2: |q| <= 100 and |p + q sqrt2| <= 1/10
    auto pts = enumerate_in_box(L, WeightedBox<CertReal>::symmetric(CertVector::Constant(2, CertReal(1))), true);
    std::vector<std::pair<std::int64_t, std::int64_t>> got, want;
    for (auto& p : pts) got.push_back({p.coords[0], p.coords[1]});
    const double s2 = std::sqrt(2.0);
    for (std::int64_t q = -100; q <= 100; ++q)
        for (std::int64_t p = -200; p <= 200; ++p)
            if (std::abs(p + q * s2) < 0.1 && std::abs(q) < 100) want.push_back({p, q});
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    CHECK(got == want);
}

TEST_CASE("dual lattice examples") {
    auto Z2 = make_lattice<Rational>(RatMatrix::Identity(2, 2));
    CHECK(dual_lattice(Z2).basis == RatMatrix::Identity(2, 2));
    auto D = make_lattice(diag2(Rational(2), Rational(1, 2)));
    CHECK(dual_lattice(D).basis == diag2(Rational(1, 2), Rational(2)));
    CHECK_THROWS_AS(make_lattice<Rational>(RatMatrix::Zero(2, 2)), InvalidArgument);
}

TEST_CASE("enumeration examples") {
    auto Z2 = make_lattice<Rational>(RatMatrix::Identity(2, 2));
    auto unit = WeightedBox<Rational>::symmetric(vec({Rational(1), Rational(1)}));
    auto strict = enumerate_in_box(Z2, unit, true);
    REQUIRE(strict.size() == 1);
    CHECK(strict[0].coords.isZero());
    auto wide = enumerate_in_box(Z2, WeightedBox<Rational>::symmetric(vec({Rational(3, 2), Rational(3, 2)})), false);
    CHECK(wide.size() == 9);
    CHECK(enumerate_in_box(Z2, unit, false).size() == 9);

    // Lambda(1, 2, [1/2]) in [-1,1]^2 against direct integer enumeration.
    RatMatrix A(1, 1);
    A(0, 0) = Rational(1, 2);
    WeightVector one = WeightVector::uniform(1);
    auto L = build_parametrized_lattice<Rational>(A, Rational(1), Rational(2), one, one);
    auto pts = enumerate_in_box(L, unit, false);
    std::vector<std::pair<std::int64_t, std::int64_t>> got, want;
    for (auto& p : pts) got.push_back({p.coords[0], p.coords[1]});
    for (std::int64_t p = -10; p <= 10; ++p)
        for (std::int64_t q = -10; q <= 10; ++q)
            if (abs(Rational(p) + Rational(q, 2)) <= 1 && abs(Rational(q, 2)) <= 1) want.push_back({p, q});
    CHECK(got == want);

    CHECK_THROWS_AS(enumerate_in_box(Z2, WeightedBox<Rational>::symmetric(vec({Rational(100), Rational(100)})), false, 50),
                    BudgetExceeded);
}

TEST_CASE("successive minima examples") {
    for (int d = 1; d <= 4; ++d) {
        auto Zd = make_lattice<Rational>(RatMatrix::Identity(d, d));
        auto sm = successive_minima(Zd, Body<Rational>{BodyKind::box, RatVector::Constant(d, Rational(1))}, d);
        for (int i = 0; i < d; ++i) CHECK(sm.values[static_cast<std::size_t>(i)] == 1);
        std::vector<IntVector> ws;
        for (auto& w : sm.witnesses) ws.push_back(w.coords);
        CHECK(detail::rational_rank(ws) == d);
    }
    auto D = make_lattice(diag2(Rational(1, 2), Rational(3)));
    auto sm = successive_minima(D, Body<Rational>{BodyKind::box, vec({Rational(1), Rational(1)})}, 2);
    CHECK(sm.values[0] == Rational(1, 2));
    CHECK(sm.values[1] == 3);
}

TEST_CASE("property: minima agree with brute force and satisfy Minkowski's second theorem") {
    std::mt19937_64 rng(17);
    int compared = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 3;
        RatMatrix B = oracle::random_rational_matrix(rng, d, 4, 3);
        auto L = make_lattice(B);
        std::uniform_int_distribution<int> hn(1, 4);
        RatVector h(d);
        for (int i = 0; i < d; ++i) h[i] = Rational(hn(rng), hn(rng));
        Body<Rational> body{BodyKind::box, h};
        auto rep = minkowski_second_check(L, body);
        CHECK(rep.within_bounds);
        CHECK(std::is_sorted(rep.minima.begin(), rep.minima.end()));
        if (trial < 40) {
            auto bf = oracle::brute_force_box_minima(B, h, 10);
            if (!bf.empty()) ++compared;
            if (!bf.empty()) CHECK(bf == rep.minima);
        }
    }
    CHECK(compared >= 10);
}

TEST_CASE("property: duality round trip and integrality") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 60; ++trial) {
        int d = 1 + trial % 5;
        auto L = make_lattice(oracle::random_rational_matrix(rng, d, 7, 5));
        auto Ld = dual_lattice(L);
        CHECK(same_lattice(dual_lattice(Ld), L));
        RatMatrix G = L.basis.transpose() * Ld.basis;
        CHECK(G == RatMatrix::Identity(d, d));
        if (d <= 3) {
            auto pts = enumerate_in_box(L, WeightedBox<Rational>::symmetric(RatVector::Constant(d, Rational(2))), false);
            for (auto& p : pts)
                for (int j = 0; j < d; ++j) CHECK(denom(Rational(p.x.dot(Ld.basis.col(j)))) == 1);
        }
    }
}

TEST_CASE("Mahler transfer constant") {
    CHECK(mahler_constant_squared(2) == Rational(24));  // (4 sqrt(3/2))^2
    CHECK(compare(mahler_constant(2), CertReal(4) * CertReal::sqrt(Rational(3, 2))) == 0);
    CHECK(mahler_constant(3).exact_value() == 27);
}

TEST_CASE("Mahler transfer on Z^2 with the open unit square") {
    auto Z2 = make_lattice<Rational>(RatMatrix::Identity(2, 2));
    // R contains no nonzero point once shrunk slightly inside the unit square.
    RatVector h = vec({Rational(99, 100), Rational(99, 100)});
    auto rep = check_mahler_transfer(Z2, h, {vec({Rational(0), Rational(0)}), vec({Rational(1, 2), Rational(1, 3)})});
    CHECK(rep.status == MahlerStatus::ok);
    REQUIRE(rep.nonzero_witness);
    CHECK_FALSE(rep.nonzero_witness->coords.isZero());

    auto bad = check_mahler_transfer(Z2, vec({Rational(1), Rational(1)}), {});
    CHECK(bad.status == MahlerStatus::precondition_violated);
}

TEST_CASE("property: Mahler transfer on random planar lattices") {
    std::mt19937_64 rng(29);
    std::uniform_int_distribution<int> g(0, 1000);
    for (int trial = 0; trial < 10; ++trial) {
        auto L = make_lattice(oracle::random_rational_matrix(rng, 2, 5, 4));
        RatVector h = box_with_empty_interior(L, rng);
        std::vector<RatVector> gammas;
        for (int k = 0; k < 5; ++k) gammas.push_back(vec({Rational(g(rng), 97), Rational(g(rng), 89)}));
        auto rep = check_mahler_transfer(L, h, gammas);
        CHECK(rep.status == MahlerStatus::ok);
        for (auto& w : rep.shift_witnesses) {
            REQUIRE(w);
            CHECK(w->l1_distance * w->l1_distance <= mahler_constant_squared(2));
        }
    }
}

TEST_CASE("second theorem dual bound examples") {
    auto Z3 = make_lattice<Rational>(RatMatrix::Identity(3, 3));
    auto r1 = second_theorem_dual_bound(Z3, RatVector::Constant(3, Rational(1)));
    CHECK(r1.mu1 == 1);
    CHECK(r1.mud_dual == 1);
    CHECK(r1.product == 1);
    auto D = make_lattice(diag2(Rational(2), Rational(2)));
    auto r2 = second_theorem_dual_bound(D, vec({Rational(1), Rational(1)}));
    CHECK(r2.mu1 == 2);
    CHECK(r2.mud_dual == Rational(1, 2));
    CHECK(r2.polar_bound_holds);
    CHECK(r2.product_in_range);
}

}
