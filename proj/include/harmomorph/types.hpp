#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace harmomorph {

using Cx = std::complex<double>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Real coordinates of a point in C^m, flattened as (x1, y1, x2, y2, ...)
/// with z_k = x_k + i y_k. Matrix spaces C^{2xn} flatten row-major, so
/// z_{rk} (r = 0, 1; k = 0..n-1) is complex coordinate r*n + k.
using RealPoint = Eigen::VectorXd;

/// Root of every error the library raises.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define HARMOMORPH_ERROR(Name)                                                 \
  class Name : public Error {                                                  \
  public:                                                                      \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {}       \
  }

HARMOMORPH_ERROR(DivisionByZero);
HARMOMORPH_ERROR(DimensionMismatch);
HARMOMORPH_ERROR(OffManifold);
HARMOMORPH_ERROR(RetractUndefined);
HARMOMORPH_ERROR(ActionMismatch);
HARMOMORPH_ERROR(FrameDegenerate);
HARMOMORPH_ERROR(SingularNormalFrame);
HARMOMORPH_ERROR(EmptyPolynomial);
HARMOMORPH_ERROR(DependentCoefficients);
HARMOMORPH_ERROR(SingularB);
HARMOMORPH_ERROR(InadmissibleAlpha);
HARMOMORPH_ERROR(NoDualDefined);
HARMOMORPH_ERROR(IoError);

#undef HARMOMORPH_ERROR

} // namespace harmomorph
