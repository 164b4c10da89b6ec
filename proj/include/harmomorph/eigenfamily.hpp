#pragma once

#include "harmomorph/ambient_space.hpp"
#include "harmomorph/scalar_field.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace harmomorph {

/// A (lambda, mu)-eigenfamily: tau(phi) = lambda phi and kappa(phi, psi) = mu phi psi
/// for all members phi, psi.
struct EigenFamily {
  AmbientSpace space;
  std::vector<ScalarField> members;
  Cx lambda;
  Cx mu;
  std::string name;
  /// (j, k) column/coordinate pair of each member, 0-based; empty for the basic family.
  std::vector<std::pair<int, int>> indices;
  /// Number of j indices; the k indices follow. Coefficient matrices are
  /// half x (count of k indices).
  int half = 0;
};

/// The family living on `space`:
///   flat kinds       z_j conj(z_k) (or the column products), (0, 0)
///   spheres          phi / <z,z>,                            (-8n, -4)
///   pseudo-spheres   -phi / <<z,z>>,                         (+8n, +4)
/// with j in [0, n), k in [n, 2n) for complex kinds and column sets
/// [0, floor(n/2)), [floor(n/2), n) for quaternionic kinds.
EigenFamily catalog(const AmbientSpace& space);

/// z_j / sqrt(<z,z>) on S^{2m-1} in C^m, a (-(2m-1), -1)-eigenfamily.
EigenFamily basic_sphere_family(int m);

/// Parses "sphere-complex:n=3", "sphere-basic:n=2", or a bare label with n
/// supplied separately.
EigenFamily catalog_by_label(const std::string& label, int n = 0);

/// Every catalog label, including "sphere-basic".
std::vector<std::string> catalog_labels();

/// Space labels are "<kind-label>:n=<n>"; returns (kind label, n) with n = 0 when absent.
std::pair<std::string, int> split_label(const std::string& label);

struct EigenReport {
  bool pass = false;
  int points = 0;
  double worst_tau = 0.0;
  double worst_kappa = 0.0;
  double tol = 0.0;
  std::size_t evaluations = 0;

  double worst() const { return std::max(worst_tau, worst_kappa); }
};

/// Samples `points` random points and measures |tau(phi) - lambda phi| and
/// |kappa(phi, psi) - mu phi psi| for every ordered pair. Residuals are relative
/// to |phi| (resp. |phi||psi|) when |phi| (and |psi|) exceed 1e-3.
EigenReport verify_eigenfamily(const EigenFamily& family, int points, double tol, std::uint64_t seed);

struct MeasuredEigenvalues {
  Cx lambda;
  Cx mu;
  /// Largest deviation of a single ratio from the mean.
  double spread = 0.0;
  int samples = 0;
};

/// Mean of tau(phi)/phi and kappa(phi, psi)/(phi psi) over random points,
/// skipping members below the relative floor.
MeasuredEigenvalues measure_eigenvalues(const EigenFamily& family, int points, std::uint64_t seed);

/// Members are independent when the random-evaluation matrix has condition
/// number at most max_condition.
bool linearly_independent(const EigenFamily& family, std::uint64_t seed, double max_condition = 1e8);

/// Exponent vector over the family members -> coefficient.
using MultiIndex = std::vector<int>;

/// A homogeneous polynomial of degree d in the members of `base`.
struct PolyLift {
  EigenFamily base;
  int d = 1;
  std::map<MultiIndex, Cx> coefficients;

  ScalarField field() const;
};

struct LiftPrediction {
  PolyLift lift;
  Cx lambda;  // d lambda + d(d-1) mu
  Cx mu;      // d^2 mu
};

/// Throws EmptyPolynomial when every coefficient is zero and
/// DimensionMismatch for multi-indices of the wrong length or degree.
LiftPrediction lift_Pd(const EigenFamily& family, int d, const std::map<MultiIndex, Cx>& coefficients);

/// Random coefficients on `terms` distinct degree-d multi-indices.
std::map<MultiIndex, Cx> random_lift_coefficients(const EigenFamily& family, int d, int terms, Rng& rng);

/// A family whose members are the given lifts, carrying the predicted eigenvalues.
EigenFamily lifted_family(const EigenFamily& family, int d, const std::vector<std::map<MultiIndex, Cx>>& polys);

/// Relative/absolute switch used by every residual in the sweeps.
inline constexpr double kRelativeFloor = 1e-3;

} // namespace harmomorph
