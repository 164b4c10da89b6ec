#pragma once

#include "harmomorph/types.hpp"

#include <memory>
#include <string>
#include <vector>

namespace harmomorph {

/// Value, gradient and Hessian of a complex-valued function with respect to
/// the 2m real coordinates. `hess` is left empty for first-order jets.
template <typename Scalar>
struct Jet2 {
  std::complex<Scalar> value;
  VectorX<std::complex<Scalar>> grad;
  MatrixX<std::complex<Scalar>> hess;
};

using Jet2d = Jet2<double>;

/// Wirtinger derivatives d/dz_k, d/dzbar_k and d^2/(dz_j dzbar_k).
struct WirtingerView {
  Eigen::VectorXcd dz;
  Eigen::VectorXcd dzbar;
  Eigen::MatrixXcd dzdzbar;
};

WirtingerView wirtinger_view(const Jet2d& jet, int m);

/// Immutable closed-form expression over complex coordinates z_k and their
/// conjugates. Nodes are shared, so fields built from common members reuse
/// the members' subtrees and evaluation memoizes them.
class ScalarField {
public:
  struct Node;

  /// z_k, 0-based.
  static ScalarField coord(int k);
  /// conj(z_k), 0-based.
  static ScalarField conj_coord(int k);
  static ScalarField constant(Cx c);
  /// sum_k signature[k] * |z_k|^2, i.e. <z,z> or the indefinite <<z,z>>.
  static ScalarField quadratic(std::vector<int> signature);

  ScalarField();  // the constant 0

  /// Evaluates the field. Throws DivisionByZero when a quotient's
  /// denominator vanishes.
  template <typename Scalar>
  std::complex<Scalar> value(const VectorX<Scalar>& x) const;

  /// Exact first- (order = 1) or second-order (order = 2) jet.
  template <typename Scalar>
  Jet2<Scalar> jet(const VectorX<Scalar>& x, int order = 2) const;

  Jet2d jet(const RealPoint& x) const { return jet<double>(x, 2); }

  /// Largest complex coordinate index referenced, or -1 for constants.
  int max_coordinate() const;

  std::string to_string() const;

  const std::shared_ptr<const Node>& node() const { return node_; }

  friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a);
  friend ScalarField operator*(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator*(Cx c, const ScalarField& a);
  friend ScalarField operator/(const ScalarField& a, const ScalarField& b);

private:
  explicit ScalarField(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  friend ScalarField pow(const ScalarField& base, double exponent);
  friend ScalarField conj(const ScalarField& f);
  friend ScalarField linear_combination(const std::vector<Cx>& coefficients,
                                        const std::vector<ScalarField>& terms);
  friend ScalarField product(const std::vector<ScalarField>& factors);

  std::shared_ptr<const Node> node_;
};

/// base^exponent. Integer exponents are exact; other exponents use the
/// principal branch and are intended for positive real bases such as <z,z>.
ScalarField pow(const ScalarField& base, double exponent);

/// Structural conjugate: swaps z and conj(z), conjugates constants.
ScalarField conj(const ScalarField& f);

ScalarField linear_combination(const std::vector<Cx>& coefficients,
                               const std::vector<ScalarField>& terms);

ScalarField product(const std::vector<ScalarField>& factors);

/// z_j * conj(z_k).
inline ScalarField monomial(int j, int k) {
  return ScalarField::coord(j) * ScalarField::conj_coord(k);
}

extern template std::complex<double> ScalarField::value<double>(const VectorX<double>&) const;
extern template std::complex<long double> ScalarField::value<long double>(
    const VectorX<long double>&) const;
extern template Jet2<double> ScalarField::jet<double>(const VectorX<double>&, int) const;
extern template Jet2<long double> ScalarField::jet<long double>(const VectorX<long double>&,
                                                                int) const;

} // namespace harmomorph
