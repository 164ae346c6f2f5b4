#pragma once

#include "dioph/numerics/cert_real.hpp"
#include "dioph/numerics/rational.hpp"

#include <Eigen/Core>
#include <boost/multiprecision/eigen.hpp>

#include <cstdint>

namespace Eigen {

template <>
struct NumTraits<dioph::CertReal> : GenericNumTraits<dioph::CertReal> {
    using Real = dioph::CertReal;
    using NonInteger = dioph::CertReal;
    using Nested = dioph::CertReal;
    using Literal = dioph::CertReal;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 10,
        AddCost = 50,
        MulCost = 50
    };
};

}  // namespace Eigen

namespace dioph {

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using RatMatrix = Mat<Rational>;
using RatVector = Vec<Rational>;
using CertMatrix = Mat<CertReal>;
using CertVector = Vec<CertReal>;
using IntVector = Vec<std::int64_t>;
using IntMatrix = Mat<std::int64_t>;

// The A of the approximation problems: an m x n matrix of certified reals.
using TargetMatrix = CertMatrix;

CertMatrix to_cert(const RatMatrix& a);
CertVector to_cert(const RatVector& a);
CertVector to_cert(const IntVector& a);
bool is_rational(const CertMatrix& a);
RatMatrix exact_matrix(const CertMatrix& a);

}  // namespace dioph
