#include "harmomorph/operators.hpp"

#include <cmath>

namespace harmomorph {

namespace {

/// sign of the coefficient c in II(X, Y) = c <<X, Y>> p.
double ii_sign(const AmbientSpace& space) {
  if (space.is_flat()) return 0.0;
  return space.is_indefinite() ? 1.0 : -1.0;
}

Eigen::MatrixXd metric(const AmbientSpace& space) { return space.signature().asDiagonal(); }

// Wirtinger forms of the flat operators with the space's signs.
Cx flat_tau(const AmbientSpace& space, const Jet2d& f) {
  const WirtingerView w = wirtinger_view(f, space.complex_dim());
  const auto& s = space.complex_signature();
  Cx tau = 0.0;
  for (int k = 0; k < space.complex_dim(); ++k) tau += static_cast<double>(s[k]) * w.dzdzbar(k, k);
  return 4.0 * tau;
}

Cx flat_kappa(const AmbientSpace& space, const Jet2d& f, const Jet2d& g) {
  const WirtingerView wf = wirtinger_view(f, space.complex_dim());
  const WirtingerView wg = wirtinger_view(g, space.complex_dim());
  const auto& s = space.complex_signature();
  Cx kappa = 0.0;
  for (int k = 0; k < space.complex_dim(); ++k) {
    kappa += static_cast<double>(s[k]) * (wf.dz[k] * wg.dzbar[k] + wf.dzbar[k] * wg.dz[k]);
  }
  return 2.0 * kappa;
}

} // namespace

Eigen::MatrixXd SignedFrame::inverse_metric() const {
  return vectors * signs.asDiagonal() * vectors.transpose();
}

SignedFrame signed_orthonormalize(const AmbientSpace& space, const Eigen::MatrixXd& spanning, double rel_tol) {
  const Eigen::MatrixXd gram = spanning.transpose() * space.signature().asDiagonal() * spanning;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const Eigen::VectorXd& lambda = es.eigenvalues();
  const double scale = lambda.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) throw FrameDegenerate("spanning set has zero Gram matrix");
  SignedFrame frame;
  frame.signs.resize(lambda.size());
  Eigen::VectorXd inv_sqrt(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (std::abs(lambda[i]) <= rel_tol * scale) {
      throw FrameDegenerate("induced metric is degenerate (eigenvalue " + std::to_string(lambda[i]) + ")");
    }
    frame.signs[i] = lambda[i] < 0.0 ? -1.0 : 1.0;
    inv_sqrt[i] = 1.0 / std::sqrt(std::abs(lambda[i]));
  }
  // Eigenvalues ascend, so timelike directions lead.
  frame.coefficients = es.eigenvectors() * inv_sqrt.asDiagonal();
  frame.vectors = spanning * frame.coefficients;
  return frame;
}

SignedFrame signed_orthogonal_complement(const AmbientSpace& space, const Eigen::MatrixXd& normals) {
  const Eigen::Index dim = space.real_dim();
  if (normals.cols() == 0) {
    return signed_orthonormalize(space, Eigen::MatrixXd::Identity(dim, dim));
  }
  const Eigen::MatrixXd lowered = metric(space) * normals;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(lowered);
  const Eigen::Index rank = qr.rank();
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(dim, dim);
  return signed_orthonormalize(space, q.rightCols(dim - rank));
}

SignedFrame tangent_frame(const AmbientSpace& space, const RealPoint& p) {
  if (space.is_flat()) return signed_orthogonal_complement(space, Eigen::MatrixXd(space.real_dim(), 0));
  return signed_orthogonal_complement(space, p);
}

Eigen::VectorXd second_fundamental_form(const AmbientSpace& space, const RealPoint& p,
                                        const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (space.is_flat()) return Eigen::VectorXd::Zero(p.size());
  return ii_sign(space) * inner(space, x, y) * p;
}

Cx hessian_on(const AmbientSpace& space, const RealPoint& p, const Jet2d& jet, const Eigen::VectorXd& x,
              const Eigen::VectorXd& y) {
  const Eigen::VectorXcd xc = x.cast<Cx>();
  const Eigen::VectorXcd yc = y.cast<Cx>();
  const Cx flat = xc.dot(jet.hess * yc);
  const Cx normal = second_fundamental_form(space, p, x, y).cast<Cx>().dot(jet.grad);
  return flat + normal;
}

LocalGeometry::LocalGeometry(const AmbientSpace& space, const RealPoint& p)
    : space_(space), p_(p), frame_(tangent_frame(space, p)), inverse_metric_(frame_.inverse_metric()) {
  // II(e_i, e_i) = c eps_i p, so sum_i eps_i II(e_i, e_i) = c * dim * p.
  ii_trace_ = ii_sign(space) * static_cast<double>(frame_.size());
}

Cx LocalGeometry::laplacian(const Jet2d& f) const {
  if (space_.is_flat()) return flat_tau(space_, f);
  Cx trace = (inverse_metric_.cast<Cx>().cwiseProduct(f.hess)).sum();
  if (ii_trace_ != 0.0) trace += ii_trace_ * p_.cast<Cx>().dot(f.grad);
  return trace;
}

Cx LocalGeometry::conformality(const Jet2d& f, const Jet2d& g) const {
  if (space_.is_flat()) return flat_kappa(space_, f, g);
  return (f.grad.transpose() * inverse_metric_.cast<Cx>() * g.grad)(0, 0);
}

double LocalGeometry::laplacian_scale(const Jet2d& f) const {
  double s = 0.0;
  const double ii = ii_sign(space_);
  const Cx radial = ii == 0.0 ? Cx(0.0) : p_.cast<Cx>().dot(f.grad);
  for (Eigen::Index i = 0; i < frame_.size(); ++i) {
    const Eigen::VectorXcd e = frame_.vectors.col(i).cast<Cx>();
    const Cx term = e.dot(f.hess * e) + ii * frame_.signs[i] * radial;
    s += std::abs(term);
  }
  return s;
}

double LocalGeometry::conformality_scale(const Jet2d& f) const {
  const Eigen::VectorXcd d = frame_.vectors.transpose().cast<Cx>() * f.grad;
  return d.squaredNorm();
}

Eigen::Matrix2Xd LocalGeometry::differential(const Jet2d& f) const {
  Eigen::Matrix2Xd d(2, frame_.size());
  d.row(0) = f.grad.real().transpose() * frame_.vectors;
  d.row(1) = f.grad.imag().transpose() * frame_.vectors;
  return d;
}

GradientPair grad_on(const AmbientSpace& space, const ScalarField& f, const RealPoint& p) {
  const Jet2d jet = f.jet<double>(p, 1);
  const Eigen::VectorXd& sig = space.signature();
  const Eigen::VectorXd re = sig.cwiseProduct(jet.grad.real());
  const Eigen::VectorXd im = sig.cwiseProduct(jet.grad.imag());
  return {tangent_project(space, p, re), tangent_project(space, p, im)};
}

OperatorValue tau_kappa_flat(const AmbientSpace& space, const ScalarField& f, const ScalarField& g,
                             const RealPoint& p) {
  if (!space.is_flat()) throw ActionMismatch("tau_kappa_flat needs a flat kind, got " + space.label());
  if (p.size() != space.real_dim()) throw DimensionMismatch("tau_kappa_flat: wrong point dimension");
  const Jet2d jf = f.jet(p);
  return {flat_tau(space, jf), flat_kappa(space, jf, g.jet<double>(p, 1)), p};
}

OperatorValue tau_kappa_on(const AmbientSpace& space, const ScalarField& f, const ScalarField& g,
                           const RealPoint& p) {
  if (space.is_flat()) throw ActionMismatch("tau_kappa_on needs a sphere or pseudo-sphere kind");
  const double residual = space.constraint_residual(p);
  if (std::abs(residual) > kOnManifoldTol) {
    throw OffManifold(space.label() + " constraint residual " + std::to_string(residual));
  }
  const LocalGeometry geo(space, p);
  const Jet2d jf = f.jet(p);
  const Jet2d jg = g.jet<double>(p, 1);
  return {geo.laplacian(jf), geo.conformality(jf, jg), p};
}

OperatorValue tau_kappa(const AmbientSpace& space, const ScalarField& f, const ScalarField& g,
                        const RealPoint& p) {
  return space.is_flat() ? tau_kappa_flat(space, f, g, p) : tau_kappa_on(space, f, g, p);
}

FiberCurvature fiber_mean_curvature(const AmbientSpace& space, const ScalarField& F, const RealPoint& p) {
  const Jet2d jet = F.jet(p);
  const LocalGeometry geo(space, p);
  const Eigen::MatrixXd inv = geo.frame().inverse_metric();

  FiberCurvature out;
  out.frame.n1 = inv * jet.grad.real();
  out.frame.n2 = inv * jet.grad.imag();
  Eigen::MatrixXd normals(p.size(), 2);
  normals << out.frame.n1, out.frame.n2;
  out.frame.gram = normals.transpose() * space.signature().asDiagonal() * normals;

  const double e1 = out.frame.n1.squaredNorm();
  const double e2 = out.frame.n2.squaredNorm();
  if (!(e1 > 0.0 && e2 > 0.0) || std::abs(out.frame.gram.determinant()) <= kSingularGramTol * e1 * e2) {
    throw SingularNormalFrame("normal Gram determinant " + std::to_string(out.frame.gram.determinant()));
  }
  const SignedFrame normal = signed_orthonormalize(space, normals, kSingularGramTol);

  Eigen::MatrixXd constraints = normals;
  if (space.is_curved()) {
    constraints.resize(p.size(), 3);
    constraints << p, out.frame.n1, out.frame.n2;
  }
  const SignedFrame fiber = signed_orthogonal_complement(space, constraints);
  out.fiber_dim = fiber.size();

  // t_b = sum_i eps_i Hess^M w_b(e_i, e_i) for w_1 = Re F, w_2 = Im F.
  Eigen::Vector2d t = Eigen::Vector2d::Zero();
  for (Eigen::Index i = 0; i < fiber.size(); ++i) {
    const Eigen::VectorXd e = fiber.vectors.col(i);
    const Cx h = hessian_on(space, p, jet, e, e);
    t[0] += fiber.signs[i] * h.real();
    t[1] += fiber.signs[i] * h.imag();
  }
  // <H, grad w_b> = -t_b and N_a = sum_b C_ba grad w_b.
  const Eigen::Vector2d h = -normal.coefficients.transpose() * t;
  out.h1 = h[0];
  out.h2 = h[1];
  return out;
}

} // namespace harmomorph
