#pragma once

#include "harmomorph/morphism.hpp"

#include <filesystem>
#include <optional>

namespace harmomorph {

struct FiberPoint {
  RealPoint point;
  double residual = 0.0;  // |F(p) - alpha|
  int newton_iters = 0;
};

struct FiberSample {
  RationalMorphism morphism;
  Cx alpha;
  std::vector<FiberPoint> points;
  int requested = 0;
  int starts = 0;  // Newton starts consumed
};

/// Thrown when the start budget runs out before `count` points were accepted.
/// Carries what was found.
class PartialSample : public Error {
public:
  explicit PartialSample(FiberSample sample)
      : Error("PartialSample: accepted " + std::to_string(sample.points.size()) + " of " +
              std::to_string(sample.requested) + " points"),
        sample_(std::move(sample)) {}

  const FiberSample& sample() const { return sample_; }

private:
  FiberSample sample_;
};

inline constexpr double kFiberResidual = 1e-10;
inline constexpr double kDedupRadius = 1e-6;

/// Newton's method on Re(F - alpha) = Im(F - alpha) = 0 with least-norm
/// tangent steps, retracted onto the space after each step. Starts are drawn
/// per index from `seed`, so the result does not depend on the worker count.
/// Throws InadmissibleAlpha and PartialSample.
FiberSample sample_fiber(const RationalMorphism& morphism, Cx alpha, int count, std::uint64_t seed,
                         int max_iters = 50);

/// One Newton run from x0; empty when it fails to reach the fiber.
std::optional<FiberPoint> newton_to_fiber(const RationalMorphism& morphism, Cx alpha, const RealPoint& x0,
                                          int max_iters = 50);

struct PointCertificate {
  double h_norm = 0.0;
  double gradient_margin = 0.0;
  int rank = 0;
  bool critical = false;
  std::optional<double> j_defect;
};

struct MinimalityReport {
  std::vector<PointCertificate> points;
  double worst_h = 0.0;
  double min_margin = 0.0;
  std::optional<double> max_j_defect;
  int critical = 0;
  double tol_h = 0.0;
  double margin = 0.0;
  bool minimal = false;
  bool regular = false;
};

struct CertifyOptions {
  /// Also measure holomorphy_defect (complex sphere kinds only).
  bool holomorphy = false;
};

/// Per point: mean curvature norm of the fiber, smallest singular value of
/// the tangent differential and its rank. Critical points fail "regular" and
/// are left out of "minimal".
MinimalityReport certify(const FiberSample& sample, double tol_h = 1e-6, double margin = 1e-6,
                         CertifyOptions options = {});

/// Spectral norm of the part of J(T cap H) outside T cap H, where T is the
/// fiber tangent space at p and H the metric complement of the S1 orbit.
/// Zero exactly when T cap H is a complex subspace.
double holomorphy_defect(const RationalMorphism& morphism, const RealPoint& p);

/// CSV with header x1,y1,...,xm,ym,residual,H_norm,grad_margin. Throws
/// IoError for an empty sample (no file is created) or a write failure.
void export_points(const FiberSample& sample, const MinimalityReport& report, const std::filesystem::path& path);

} // namespace harmomorph
