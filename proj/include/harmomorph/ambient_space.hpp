#pragma once

#include "harmomorph/types.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace harmomorph {

enum class SpaceKind {
  FlatC,         // C^{2n}, Euclidean
  FlatC1,        // C^{2n}_1, z_1 block timelike, domain <<z,z>> < 0
  FlatQ,         // C^{2xn}, Euclidean
  FlatQ1,        // C^{2xn}_1, first column timelike, domain <<z,z>> < 0
  Sphere,        // S^{4n-1} in C^{2n}
  PseudoSphere,  // <<z,z>> = -1 in C^{2n}_1
  SphereQ,       // S^{4n-1} in C^{2xn}
  PseudoSphereQ  // <<z,z>> = -1 in C^{2xn}_1
};

/// One of the model spaces. `n` is the label parameter: every kind lives in
/// 2n complex coordinates. The only other shape is the odd sphere
/// S^{2m-1} in C^m carrying the basic eigenfamily, built by basic_sphere().
class AmbientSpace {
public:
  AmbientSpace(SpaceKind kind, int n);

  static AmbientSpace basic_sphere(int m);

  SpaceKind kind() const { return kind_; }
  int n() const { return n_; }
  int complex_dim() const { return static_cast<int>(complex_signature_.size()); }
  int real_dim() const { return 2 * complex_dim(); }

  /// +1/-1 per complex coordinate.
  const std::vector<int>& complex_signature() const { return complex_signature_; }
  /// +1/-1 per real coordinate.
  const Eigen::VectorXd& signature() const { return signature_; }

  bool is_flat() const;
  bool is_curved() const { return !is_flat(); }
  bool is_quaternionic() const;
  bool is_indefinite() const;
  bool is_basic_sphere() const { return basic_; }

  /// Sphere: <p,p> - 1. Pseudo-sphere: <<p,p>> + 1. Flat kinds: 0.
  double constraint_residual(const RealPoint& p) const;
  /// Flat indefinite kinds only admit <<z,z>> < 0; everything else is unrestricted.
  bool in_open_domain(const RealPoint& p) const;

  /// Label such as "sphere-complex" (without the n parameter).
  std::string label() const;

  friend bool operator==(const AmbientSpace& a, const AmbientSpace& b) {
    return a.kind_ == b.kind_ && a.n_ == b.n_ && a.basic_ == b.basic_;
  }

private:
  AmbientSpace(SpaceKind kind, int n, int complex_dim, bool basic);

  SpaceKind kind_;
  int n_;
  bool basic_ = false;
  std::vector<int> complex_signature_;
  Eigen::VectorXd signature_;
};

std::string_view kind_label(SpaceKind kind);
SpaceKind parse_kind(std::string_view label);

/// Complex coordinate index of z_{row,col} (0-based) in C^{2xn}.
inline int quaternionic_index(int n, int row, int col) { return row * n + col; }

/// Sphere <-> PseudoSphere, SphereQ <-> PseudoSphereQ, FlatC <-> FlatC1, FlatQ <-> FlatQ1.
SpaceKind dual_kind(SpaceKind kind);

/// The flat kind whose coordinates and signature a constraint surface inherits.
SpaceKind ambient_flat_kind(SpaceKind kind);

/// Metric pairing sum_k sign_k Re(z_k conj(w_k)) on real coordinate vectors.
double inner(const AmbientSpace& space, const Eigen::VectorXd& v, const Eigen::VectorXd& w);

using Rng = std::mt19937_64;

/// Deterministic engine derived from (seed, stream).
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

RealPoint random_point(const AmbientSpace& space, Rng& rng);
RealPoint random_point(const AmbientSpace& space, std::uint64_t seed);

struct TangentVector {
  RealPoint base;
  Eigen::VectorXd dir;
};

/// Throws OffManifold when p is off the constraint by more than 1e-8.
TangentVector tangent_project(const AmbientSpace& space, const RealPoint& p, const Eigen::VectorXd& v);

RealPoint retract(const AmbientSpace& space, const Eigen::VectorXd& x);

/// Multiplication by i on every complex coordinate.
Eigen::VectorXd complex_structure(const Eigen::VectorXd& v);

struct S1Element {
  double theta = 0.0;
};

/// Unit quaternion w + x i + y j + z k.
struct S3Element {
  Eigen::Vector4d q = Eigen::Vector4d(1, 0, 0, 0);
};

using GroupElement = std::variant<S1Element, S3Element>;

GroupElement random_group_element(const AmbientSpace& space, Rng& rng);

/// Linear action on a real coordinate vector; no kind check.
Eigen::VectorXd act_on_vector(const AmbientSpace& space, const GroupElement& g, const Eigen::VectorXd& v);

/// S1 on Sphere/PseudoSphere by z -> e^{i theta} z; S3 on SphereQ/PseudoSphereQ by
/// right quaternion multiplication on every column (z_{1k} + z_{2k} j).
RealPoint group_act(const AmbientSpace& space, const GroupElement& g, const RealPoint& p);

inline constexpr double kOnManifoldTol = 1e-8;

} // namespace harmomorph
