#include "dioph/numerics/sampling.hpp"

#include "dioph/numerics/errors.hpp"

#include <random>

namespace dioph {

namespace {

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

Rational halton(std::uint64_t k, unsigned base) {
    Rational x = 0, f = Rational(1, base);
    while (k > 0) {
        x += f * static_cast<unsigned>(k % base);
        f /= base;
        k /= base;
    }
    return x;
}

}  // namespace

std::vector<RatVector> low_discrepancy_points(std::size_t count, std::size_t dim, std::uint64_t seed) {
    if (dim > std::size(kPrimes)) throw InvalidArgument("low-discrepancy sampler supports up to 16 dimensions");
    std::mt19937_64 rng(seed);
    RatVector shift(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) shift[static_cast<Eigen::Index>(i)] = Rational(Integer(rng() >> 32), Integer(1) << 32);
    std::vector<RatVector> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        RatVector p(static_cast<Eigen::Index>(dim));
        for (std::size_t i = 0; i < dim; ++i) {
            Rational x = halton(k + 1, kPrimes[i]) + shift[static_cast<Eigen::Index>(i)];
            if (x >= 1) x -= 1;
            p[static_cast<Eigen::Index>(i)] = x;
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace dioph
