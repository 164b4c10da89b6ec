#pragma once

#include "harmomorph/eigenfamily.hpp"
#include "harmomorph/operators.hpp"

#include <optional>

namespace harmomorph {

/// Coefficient matrices of P = sum a_jk phi_jk^d and Q = sum b_jk phi_jk^d.
/// Row j, column k indexes the member phi_{j, half + k}.
struct CoefficientPair {
  Eigen::MatrixXcd A;
  Eigen::MatrixXcd B;
  int d = 1;
};

/// R(s) = det(s B - A), coefficients in ascending powers of s.
class ResolventPolynomial {
public:
  explicit ResolventPolynomial(std::vector<Cx> coeffs) : coeffs_(std::move(coeffs)) {}

  const std::vector<Cx>& coeffs() const { return coeffs_; }
  int degree() const;
  Cx operator()(Cx s) const;
  /// Largest coefficient magnitude.
  double norm() const;

private:
  std::vector<Cx> coeffs_;
};

/// Division-free expansion of det(s B - A) over column subsets.
ResolventPolynomial resolvent(const CoefficientPair& pair);

enum class Duality { Flat, Compact, Noncompact };

/// F = P / Q on the open set Omega(Q) = { Q != 0 }.
struct RationalMorphism {
  AmbientSpace space;
  ScalarField P;
  ScalarField Q;
  ScalarField F;
  std::optional<CoefficientPair> pair;
  std::optional<ResolventPolynomial> resolvent;
  Duality duality = Duality::Flat;
  /// Members phi_jk^d entering Q with weights |b_jk|; empty for custom morphisms.
  std::vector<ScalarField> q_terms;
  std::vector<double> q_weights;

  /// Size of |Q| would have without cancellation; 1 for custom morphisms.
  double q_scale(const RealPoint& p) const;
  /// On the open domain of the space and |Q(p)| > margin * q_scale(p).
  bool in_domain(const RealPoint& p, double margin = 1e-6) const;
  Cx value(const RealPoint& p) const { return F.value<double>(p); }
};

struct BuildOptions {
  /// Quaternionic constructions carry no power by default.
  bool allow_quaternionic_power = false;
};

/// Assembles F = P/Q over catalog(space). Throws DimensionMismatch for
/// coefficient matrices of the wrong shape, DependentCoefficients and SingularB.
RationalMorphism build_morphism(const AmbientSpace& space, const CoefficientPair& pair,
                                BuildOptions options = {});

/// A morphism from arbitrary P and Q, used for controls. It has no
/// coefficient pair, so admissibility and dualization do not apply.
RationalMorphism custom_morphism(const AmbientSpace& space, const ScalarField& P, const ScalarField& Q);

/// alpha != 0 with |alpha| > margin and |R(alpha)| > margin (1 + |alpha|)^n ||R||.
/// Custom morphisms only require |alpha| > margin.
bool is_admissible(const RationalMorphism& morphism, Cx alpha, double margin = 1e-6);

/// Random complex Gaussian pair of size h x h with an invertible B.
CoefficientPair random_pair(int h, int d, Rng& rng);

/// Random alpha with |R(alpha)| >= min_resolvent and |alpha| in a unit-scale annulus.
Cx random_admissible_alpha(const RationalMorphism& morphism, Rng& rng, double min_resolvent = 1e-3);

struct MorphismReport {
  bool pass = false;
  int points = 0;
  int rejected = 0;  // samples discarded by the Omega(Q) margin
  double worst_tau = 0.0;
  double worst_kappa = 0.0;
  double tol = 0.0;

  double worst() const { return std::max(worst_tau, worst_kappa); }
};

/// Worst |tau(F)| and |kappa(F, F)| over random points of Omega(Q), each
/// normalized by the magnitude of the frame terms whose signed sum it is.
MorphismReport verify_morphism(const RationalMorphism& morphism, int points, double tol, std::uint64_t seed);

struct InvarianceReport {
  bool pass = false;
  int samples = 0;
  double worst = 0.0;
  double tol = 0.0;
};

/// max |F(g z) - F(z)| / max(1, |F(z)|) over random group elements and points.
InvarianceReport verify_invariance(const RationalMorphism& morphism, int samples, double tol, std::uint64_t seed);

/// Same pair mounted on the dual space with its catalog family. Involutive.
RationalMorphism dualize(const RationalMorphism& morphism);

/// A point of Omega(Q) drawn from random_point with retries; stream-indexed.
RealPoint random_domain_point(const RationalMorphism& morphism, std::uint64_t seed, std::uint64_t stream,
                              double margin = 1e-6);

FiberCurvature fiber_mean_curvature(const RationalMorphism& morphism, const RealPoint& p);

std::string_view duality_label(Duality d);

} // namespace harmomorph
