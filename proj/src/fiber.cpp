#include "harmomorph/fiber.hpp"

#include "harmomorph/parallel.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

namespace harmomorph {

namespace {

bool accepted(const RationalMorphism& m, const RealPoint& x) {
  return std::abs(m.space.constraint_residual(x)) <= kFiberResidual && m.in_domain(x);
}

bool near_any(const std::vector<FiberPoint>& points, const RealPoint& x) {
  for (const auto& fp : points) {
    if ((fp.point - x).norm() < kDedupRadius) return true;
  }
  return false;
}

} // namespace

std::optional<FiberPoint> newton_to_fiber(const RationalMorphism& morphism, Cx alpha, const RealPoint& x0,
                                          int max_iters) {
  const AmbientSpace& space = morphism.space;
  RealPoint x = x0;
  double residual = std::abs(morphism.value(x) - alpha);
  for (int iter = 0; iter <= max_iters; ++iter) {
    if (residual <= kFiberResidual) {
      if (!accepted(morphism, x)) return std::nullopt;
      return FiberPoint{x, residual, iter};
    }
    if (iter == max_iters) break;

    const Jet2d jet = morphism.F.jet<double>(x, 1);
    const Cx r = jet.value - alpha;
    Eigen::MatrixXd J(2, x.size());
    J.row(0) = jet.grad.real().transpose();
    J.row(1) = jet.grad.imag().transpose();
    if (space.is_curved()) {
      const Eigen::VectorXd normal = space.signature().cwiseProduct(x).normalized();
      J -= (J * normal) * normal.transpose();
    }
    const Eigen::Matrix2d jjt = J * J.transpose();
    const Eigen::FullPivLU<Eigen::Matrix2d> lu(jjt);
    if (!lu.isInvertible()) return std::nullopt;
    const Eigen::VectorXd step = -J.transpose() * lu.solve(Eigen::Vector2d(r.real(), r.imag()));

    bool moved = false;
    for (double t = 1.0; t > 1e-6; t *= 0.5) {
      RealPoint y;
      try {
        y = retract(space, x + t * step);
      } catch (const RetractUndefined&) {
        continue;
      }
      if (!morphism.in_domain(y)) continue;
      const double ry = std::abs(morphism.value(y) - alpha);
      if (ry < residual) {
        x = std::move(y);
        residual = ry;
        moved = true;
        break;
      }
    }
    if (!moved) return std::nullopt;
  }
  return std::nullopt;
}

FiberSample sample_fiber(const RationalMorphism& morphism, Cx alpha, int count, std::uint64_t seed, int max_iters) {
  if (count < 0) throw Error("sample_fiber: negative count");
  if (!is_admissible(morphism, alpha)) {
    throw InadmissibleAlpha("R(alpha) vanishes to margin at alpha = (" + std::to_string(alpha.real()) + ", " +
                            std::to_string(alpha.imag()) + ")");
  }
  FiberSample sample{morphism, alpha, {}, count, 0};
  const int budget = 10 * count;
  while (static_cast<int>(sample.points.size()) < count && sample.starts < budget) {
    const int missing = count - static_cast<int>(sample.points.size());
    const int batch = std::min(budget - sample.starts, std::max(2 * missing, 4));
    const auto first = static_cast<std::uint64_t>(sample.starts);
    std::vector<std::optional<FiberPoint>> found(static_cast<std::size_t>(batch));
    parallel_for(found.size(), [&](std::size_t i) {
      const RealPoint x0 = random_domain_point(morphism, seed, first + i);
      found[i] = newton_to_fiber(morphism, alpha, x0, max_iters);
    });
    for (auto& fp : found) {
      if (static_cast<int>(sample.points.size()) == count) break;
      if (fp && !near_any(sample.points, fp->point)) sample.points.push_back(std::move(*fp));
    }
    sample.starts += batch;
  }
  if (static_cast<int>(sample.points.size()) < count) throw PartialSample(std::move(sample));
  return sample;
}

MinimalityReport certify(const FiberSample& sample, double tol_h, double margin, CertifyOptions options) {
  if (sample.points.empty()) throw Error("certify: empty sample");
  const RationalMorphism& m = sample.morphism;
  const bool with_defect = options.holomorphy && m.space.is_curved() && !m.space.is_quaternionic();

  MinimalityReport report;
  report.tol_h = tol_h;
  report.margin = margin;
  report.points.resize(sample.points.size());
  parallel_for(sample.points.size(), [&](std::size_t i) {
    const RealPoint& p = sample.points[i].point;
    PointCertificate& c = report.points[i];
    const LocalGeometry geo(m.space, p);
    const Eigen::Matrix2Xd d = geo.differential(m.F.jet<double>(p, 1));
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(d);
    const Eigen::VectorXd& s = svd.singularValues();
    c.gradient_margin = s[s.size() - 1];
    c.rank = static_cast<int>((s.array() > 1e-12 * std::max(s[0], 1e-300)).count());
    try {
      c.h_norm = fiber_mean_curvature(m, p).norm();
      if (with_defect) c.j_defect = holomorphy_defect(m, p);
    } catch (const SingularNormalFrame&) {
      c.critical = true;
      c.h_norm = std::numeric_limits<double>::infinity();
    }
  });

  report.min_margin = std::numeric_limits<double>::infinity();
  bool any_regular = false;
  for (const auto& c : report.points) {
    report.min_margin = std::min(report.min_margin, c.gradient_margin);
    if (c.critical) {
      ++report.critical;
      continue;
    }
    any_regular = true;
    report.worst_h = std::max(report.worst_h, c.h_norm);
    if (c.j_defect) report.max_j_defect = std::max(report.max_j_defect.value_or(0.0), *c.j_defect);
  }
  report.minimal = any_regular && report.worst_h <= tol_h;
  report.regular = report.critical == 0 && report.min_margin >= margin;
  for (const auto& c : report.points) report.regular = report.regular && c.rank == 2;
  return report;
}

double holomorphy_defect(const RationalMorphism& morphism, const RealPoint& p) {
  const AmbientSpace& space = morphism.space;
  if (!space.is_curved() || space.is_quaternionic()) {
    throw ActionMismatch("holomorphy_defect needs a complex sphere or pseudo-sphere, got " + space.label());
  }
  const GradientPair g = grad_on(space, morphism.F, p);
  Eigen::MatrixXd constraints(p.size(), 4);
  constraints << p, complex_structure(p), g.re.dir, g.im.dir;
  const SignedFrame frame = signed_orthogonal_complement(space, constraints);
  if (frame.size() == 0) return 0.0;

  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(frame.vectors);
  const Eigen::MatrixXd basis = qr.householderQ() * Eigen::MatrixXd::Identity(p.size(), frame.size());
  Eigen::MatrixXd rotated(p.size(), basis.cols());
  for (Eigen::Index i = 0; i < basis.cols(); ++i) rotated.col(i) = complex_structure(basis.col(i));
  const Eigen::MatrixXd outside = rotated - basis * (basis.transpose() * rotated);
  return Eigen::JacobiSVD<Eigen::MatrixXd>(outside).singularValues()[0];
}

void export_points(const FiberSample& sample, const MinimalityReport& report, const std::filesystem::path& path) {
  if (sample.points.empty()) throw IoError("refusing to export an empty sample");
  if (report.points.size() != sample.points.size()) {
    throw DimensionMismatch("certificate count does not match the sample");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string());
  const Eigen::Index m = sample.points.front().point.size() / 2;
  for (Eigen::Index k = 1; k <= m; ++k) out << 'x' << k << ",y" << k << ',';
  out << "residual,H_norm,grad_margin\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < sample.points.size(); ++i) {
    const FiberPoint& fp = sample.points[i];
    for (Eigen::Index r = 0; r < fp.point.size(); ++r) out << fp.point[r] << ',';
    out << fp.residual << ',' << report.points[i].h_norm << ',' << report.points[i].gradient_margin << '\n';
  }
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

} // namespace harmomorph
