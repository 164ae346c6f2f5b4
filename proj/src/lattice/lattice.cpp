#include "dioph/lattice/lattice.hpp"

#include <cstdlib>

namespace dioph {

namespace detail {

int rational_rank(const std::vector<IntVector>& vs) {
    if (vs.empty()) return 0;
    const Eigen::Index d = vs.front().size();
    std::vector<std::vector<Rational>> rows;
    for (const auto& v : vs) {
        std::vector<Rational> r(static_cast<std::size_t>(d));
        for (Eigen::Index i = 0; i < d; ++i) r[static_cast<std::size_t>(i)] = Rational(v[i]);
        rows.push_back(std::move(r));
    }
    int rank = 0;
    for (Eigen::Index c = 0; c < d && rank < static_cast<int>(rows.size()); ++c) {
        std::size_t p = static_cast<std::size_t>(rank);
        while (p < rows.size() && rows[p][static_cast<std::size_t>(c)] == 0) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[p], rows[static_cast<std::size_t>(rank)]);
        const auto& pr = rows[static_cast<std::size_t>(rank)];
        for (std::size_t r = static_cast<std::size_t>(rank) + 1; r < rows.size(); ++r) {
            Rational f = rows[r][static_cast<std::size_t>(c)] / pr[static_cast<std::size_t>(c)];
            if (f == 0) continue;
            for (Eigen::Index i = c; i < d; ++i) rows[r][static_cast<std::size_t>(i)] -= f * pr[static_cast<std::size_t>(i)];
        }
        ++rank;
    }
    return rank;
}

}  // namespace detail

namespace {

Rational factorial(int d) {
    Rational f = 1;
    for (int i = 2; i <= d; ++i) f *= i;
    return f;
}

}  // namespace

Rational mahler_constant_squared(int d) {
    Rational a = factorial(d) * d;
    return a * a * rpow(Rational(3, 2), d - 1);
}

CertReal mahler_constant(int d) {
    return CertReal(factorial(d) * d) * pow(CertReal(Rational(3, 2)), Rational(d - 1, 2));
}

namespace {

std::optional<DualWitness> find_dual_point(const LatticeBasis<Rational>& Ld, const RatMatrix& inv, const RatVector& h,
                                           const RatVector& gamma, const Rational& C2, const Rational& C_upper,
                                           bool exclude_zero, std::uint64_t budget) {
    const Eigen::Index d = h.size();
    RatVector half(d);
    for (Eigen::Index i = 0; i < d; ++i) half[i] = C_upper / h[i];
    auto ranges = detail::preimage_ranges(inv, gamma, half);
    RatVector zc = inv * gamma;
    IntVector z0(d);
    std::int64_t rmax = 0;
    for (Eigen::Index j = 0; j < d; ++j) {
        auto [lo, hi] = ranges[static_cast<std::size_t>(j)];
        std::int64_t c = to_int64(floor_int(zc[j] + Rational(1, 2)));
        c = std::clamp(c, lo, hi);
        z0[j] = c;
        rmax = std::max({rmax, c - lo, hi - c});
    }
    std::uint64_t visited = 0;
    for (std::int64_t r = 0; r <= rmax; ++r) {
        std::vector<std::pair<std::int64_t, std::int64_t>> shell(static_cast<std::size_t>(d));
        for (Eigen::Index j = 0; j < d; ++j) {
            auto [lo, hi] = ranges[static_cast<std::size_t>(j)];
            shell[static_cast<std::size_t>(j)] = {std::max(lo, z0[j] - r), std::min(hi, z0[j] + r)};
        }
        std::optional<DualWitness> found;
        detail::for_each_in_ranges(shell, [&](const IntVector& z) {
            std::int64_t dist = 0;
            for (Eigen::Index j = 0; j < d; ++j) dist = std::max(dist, std::abs(z[j] - z0[j]));
            if (dist != r) return true;
            if (++visited > budget) throw BudgetExceeded("check_mahler_transfer", 0);
            if (exclude_zero && z.isZero()) return true;
            RatVector y = Ld.point(z);
            Rational S = 0;
            for (Eigen::Index i = 0; i < d; ++i) S += h[i] * abs(Rational(y[i] - gamma[i]));
            if (S * S <= C2) {
                found = DualWitness{z, y, S};
                return false;
            }
            return true;
        });
        if (found) return found;
    }
    return std::nullopt;
}

}  // namespace

MahlerReport check_mahler_transfer(const LatticeBasis<Rational>& L, const RatVector& h,
                                   const std::vector<RatVector>& gammas, std::uint64_t budget) {
    MahlerReport rep;
    const int d = L.dim();
    rep.dim = d;
    rep.constant = mahler_constant(d);
    for (auto& p : enumerate_in_box(L, WeightedBox<Rational>::symmetric(h), false, budget)) {
        if (!p.coords.isZero()) {
            rep.status = MahlerStatus::precondition_violated;
            rep.precondition_witness = p;
            return rep;
        }
    }
    LatticeBasis<Rational> Ld = dual_lattice(L);
    RatMatrix inv = inverse(Ld);
    Rational C2 = mahler_constant_squared(d);
    Rational Cu = rep.constant.enclose(64).hi;
    RatVector zero = RatVector::Constant(d, Rational(0));
    rep.nonzero_witness = find_dual_point(Ld, inv, h, zero, C2, Cu, true, budget);
    bool ok = rep.nonzero_witness.has_value();
    for (const auto& g : gammas) {
        rep.shift_witnesses.push_back(find_dual_point(Ld, inv, h, g, C2, Cu, false, budget));
        ok = ok && rep.shift_witnesses.back().has_value();
    }
    rep.status = ok ? MahlerStatus::ok : MahlerStatus::failed;
    return rep;
}

DualBoundReport second_theorem_dual_bound(const LatticeBasis<Rational>& L, const RatVector& h, std::uint64_t budget) {
    DualBoundReport rep;
    const int d = L.dim();
    Body<Rational> B{BodyKind::box, h};
    rep.mu1 = successive_minima(L, B, 1, budget).values.front();
    rep.mud_dual = successive_minima(dual_lattice(L), B.polar(), d, budget).values.back();
    rep.product = rep.mu1 * rep.mud_dual;
    rep.d_factorial = factorial(d);
    rep.mu1_exceeds_one = rep.mu1 > 1;
    rep.polar_bound_holds = !rep.mu1_exceeds_one || rep.mud_dual < rep.d_factorial;
    rep.product_in_range = rep.product >= 1 && rep.product <= rep.d_factorial;
    return rep;
}

MinkowskiReport minkowski_second_check(const LatticeBasis<Rational>& L, const Body<Rational>& body,
                                       std::uint64_t budget) {
    MinkowskiReport rep;
    const int d = L.dim();
    auto sm = successive_minima(L, body, d, budget);
    rep.minima = sm.values;
    Rational prod = 1;
    for (const auto& m : sm.values) prod *= m;
    rep.normalized_product = prod * body.volume() / abs(L.det);
    Rational two_d = rpow(Rational(2), d);
    rep.within_bounds = rep.normalized_product >= two_d / factorial(d) && rep.normalized_product <= two_d;
    return rep;
}

bool same_lattice(const LatticeBasis<Rational>& a, const LatticeBasis<Rational>& b) {
    if (a.dim() != b.dim()) return false;
    RatMatrix U = inverse(a) * b.basis;
    for (Eigen::Index i = 0; i < U.rows(); ++i)
        for (Eigen::Index j = 0; j < U.cols(); ++j)
            if (denom(U(i, j)) != 1) return false;
    Rational det = make_lattice(U).det;
    return det == 1 || det == -1;
}

}  // namespace dioph
