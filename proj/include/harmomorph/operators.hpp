#pragma once

#include "harmomorph/ambient_space.hpp"
#include "harmomorph/scalar_field.hpp"

namespace harmomorph {

/// Columns e_i with <<e_i, e_j>> = signs_i * delta_ij under the space metric.
/// Timelike directions (sign -1) come first.
struct SignedFrame {
  Eigen::MatrixXd vectors;
  Eigen::VectorXd signs;
  /// vectors = spanning * coefficients, when built from a spanning set.
  Eigen::MatrixXd coefficients;

  Eigen::Index size() const { return vectors.cols(); }
  /// sum_i signs_i e_i e_i^T, the inverse metric restricted to the frame's span.
  Eigen::MatrixXd inverse_metric() const;
};

/// Metric-orthonormal basis of the span of `spanning`'s columns. Throws
/// FrameDegenerate when the induced Gram matrix is numerically singular.
SignedFrame signed_orthonormalize(const AmbientSpace& space, const Eigen::MatrixXd& spanning,
                                  double rel_tol = 1e-10);

/// Metric-orthonormal basis of { v : <<v, c>> = 0 for every column c of `normals` }.
SignedFrame signed_orthogonal_complement(const AmbientSpace& space, const Eigen::MatrixXd& normals);

/// Frame of T_p(space): the standard basis for flat kinds, the metric
/// complement of p for the constraint surfaces.
SignedFrame tangent_frame(const AmbientSpace& space, const RealPoint& p);

/// Second fundamental form of the constraint surface: -<X,Y> p on spheres,
/// +<<X,Y>> p on pseudo-spheres, 0 on flat kinds.
Eigen::VectorXd second_fundamental_form(const AmbientSpace& space, const RealPoint& p,
                                        const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Riemannian Hessian Hess^M f(X, Y) from a flat jet of any extension of f.
Cx hessian_on(const AmbientSpace& space, const RealPoint& p, const Jet2d& jet, const Eigen::VectorXd& x,
              const Eigen::VectorXd& y);

/// Frame and metric data at one point, shared by every field evaluated there.
class LocalGeometry {
public:
  LocalGeometry(const AmbientSpace& space, const RealPoint& p);

  const AmbientSpace& space() const { return space_; }
  const RealPoint& point() const { return p_; }
  const SignedFrame& frame() const { return frame_; }

  /// sum_i eps_i Hess^M f(e_i, e_i).
  Cx laplacian(const Jet2d& f) const;
  /// sum_i eps_i df(e_i) dg(e_i).
  Cx conformality(const Jet2d& f, const Jet2d& g) const;
  /// sum_i |Hess^M f(e_i, e_i)|, the scale of the terms that cancel in laplacian().
  double laplacian_scale(const Jet2d& f) const;
  /// sum_i |df(e_i)|^2.
  double conformality_scale(const Jet2d& f) const;
  /// 2 x dim matrix [d Re f(e_i); d Im f(e_i)].
  Eigen::Matrix2Xd differential(const Jet2d& f) const;

private:
  AmbientSpace space_;
  RealPoint p_;
  SignedFrame frame_;
  Eigen::MatrixXd inverse_metric_;
  double ii_trace_ = 0.0;  // sum_i eps_i <<II(e_i,e_i), p>>-coefficient
};

struct GradientPair {
  TangentVector re;
  TangentVector im;
};

/// Metric gradients of Re f and Im f, tangent to the space.
GradientPair grad_on(const AmbientSpace& space, const ScalarField& f, const RealPoint& p);

struct OperatorValue {
  Cx tau;
  Cx kappa;
  RealPoint at;
};

/// tau(f) and kappa(f, g) on a flat kind through the Wirtinger formulas
///   tau = 4 sum_k s_k d^2f/dz_k dzbar_k,
///   kappa = 2 sum_k s_k (df/dz_k dg/dzbar_k + df/dzbar_k dg/dz_k).
OperatorValue tau_kappa_flat(const AmbientSpace& space, const ScalarField& f, const ScalarField& g,
                             const RealPoint& p);

/// tau(f) and kappa(f, g) on a sphere or pseudo-sphere via a signed tangent
/// frame and the closed-form second fundamental form.
OperatorValue tau_kappa_on(const AmbientSpace& space, const ScalarField& f, const ScalarField& g,
                           const RealPoint& p);

/// Dispatches on the space kind.
OperatorValue tau_kappa(const AmbientSpace& space, const ScalarField& f, const ScalarField& g,
                        const RealPoint& p);

/// Metric gradients of Re F, Im F (not normalized) and their Gram matrix.
struct NormalFrame {
  Eigen::VectorXd n1;
  Eigen::VectorXd n2;
  Eigen::Matrix2d gram;
};

struct FiberCurvature {
  double h1 = 0.0;
  double h2 = 0.0;
  NormalFrame frame;
  Eigen::Index fiber_dim = 0;

  double norm() const { return std::hypot(h1, h2); }
};

/// Mean curvature of the level set of F through p, as components along a
/// signed-orthonormal basis of the normal plane. Throws SingularNormalFrame
/// at critical points.
FiberCurvature fiber_mean_curvature(const AmbientSpace& space, const ScalarField& F, const RealPoint& p);

/// Relative determinant threshold below which the normal Gram is singular.
inline constexpr double kSingularGramTol = 1e-12;

} // namespace harmomorph
