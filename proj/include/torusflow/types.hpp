#pragma once

#include <Eigen/Dense>
#include <complex>

namespace torusflow {

using Real = double;
using Complex = std::complex<Real>;

using Vec3 = Eigen::Matrix<Real, 3, 1>;
using Vec3c = Eigen::Matrix<Complex, 3, 1>;

// Dense column-major blocks; vector fields keep one column per component.
using CoeffArray = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using ValueArray = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using ComplexVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

inline constexpr Real pi = 3.14159265358979323846264338327950288;

}  // namespace torusflow
