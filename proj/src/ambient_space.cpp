#include "harmomorph/ambient_space.hpp"

#include <array>
#include <cmath>

namespace harmomorph {

namespace {

constexpr std::array<std::pair<SpaceKind, std::string_view>, 8> kLabels{{
    {SpaceKind::FlatC, "flat-complex"},
    {SpaceKind::FlatC1, "flat-complex-1"},
    {SpaceKind::FlatQ, "flat-quaternionic"},
    {SpaceKind::FlatQ1, "flat-quaternionic-1"},
    {SpaceKind::Sphere, "sphere-complex"},
    {SpaceKind::PseudoSphere, "pseudosphere-complex"},
    {SpaceKind::SphereQ, "sphere-quaternionic"},
    {SpaceKind::PseudoSphereQ, "pseudosphere-quaternionic"},
}};

double pseudo_sphere_floor() { return -0.1; }

Eigen::VectorXd gaussian(Eigen::Index dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = normal(rng);
  return v;
}

} // namespace

AmbientSpace::AmbientSpace(SpaceKind kind, int n) : AmbientSpace(kind, n, 2 * n, false) {}

AmbientSpace AmbientSpace::basic_sphere(int m) { return AmbientSpace(SpaceKind::Sphere, m, m, true); }

AmbientSpace::AmbientSpace(SpaceKind kind, int n, int complex_dim, bool basic)
    : kind_(kind), n_(n), basic_(basic) {
  if (n < 1) throw DimensionMismatch("space parameter n must be positive");
  complex_signature_.assign(static_cast<std::size_t>(complex_dim), 1);
  switch (kind) {
  case SpaceKind::FlatC1:
  case SpaceKind::PseudoSphere:
    complex_signature_[0] = -1;
    break;
  case SpaceKind::FlatQ1:
  case SpaceKind::PseudoSphereQ:
    complex_signature_[quaternionic_index(n, 0, 0)] = -1;
    complex_signature_[quaternionic_index(n, 1, 0)] = -1;
    break;
  default:
    break;
  }
  signature_.resize(2 * complex_dim);
  for (int k = 0; k < complex_dim; ++k) {
    signature_[2 * k] = signature_[2 * k + 1] = complex_signature_[k];
  }
}

bool AmbientSpace::is_flat() const {
  switch (kind_) {
  case SpaceKind::FlatC:
  case SpaceKind::FlatC1:
  case SpaceKind::FlatQ:
  case SpaceKind::FlatQ1:
    return true;
  default:
    return false;
  }
}

bool AmbientSpace::is_quaternionic() const {
  switch (kind_) {
  case SpaceKind::FlatQ:
  case SpaceKind::FlatQ1:
  case SpaceKind::SphereQ:
  case SpaceKind::PseudoSphereQ:
    return true;
  default:
    return false;
  }
}

bool AmbientSpace::is_indefinite() const {
  switch (kind_) {
  case SpaceKind::FlatC1:
  case SpaceKind::FlatQ1:
  case SpaceKind::PseudoSphere:
  case SpaceKind::PseudoSphereQ:
    return true;
  default:
    return false;
  }
}

double AmbientSpace::constraint_residual(const RealPoint& p) const {
  if (p.size() != real_dim()) throw DimensionMismatch("point has wrong dimension for " + label());
  if (is_flat()) return 0.0;
  const double q = inner(*this, p, p);
  return is_indefinite() ? q + 1.0 : q - 1.0;
}

bool AmbientSpace::in_open_domain(const RealPoint& p) const {
  if (kind_ == SpaceKind::FlatC1 || kind_ == SpaceKind::FlatQ1) return inner(*this, p, p) < 0.0;
  return true;
}

std::string AmbientSpace::label() const {
  if (basic_) return "sphere-basic";
  return std::string(kind_label(kind_));
}

std::string_view kind_label(SpaceKind kind) {
  for (const auto& [k, label] : kLabels) {
    if (k == kind) return label;
  }
  return "unknown";
}

SpaceKind parse_kind(std::string_view label) {
  for (const auto& [k, l] : kLabels) {
    if (l == label) return k;
  }
  throw Error("unknown space label '" + std::string(label) + "'");
}

SpaceKind ambient_flat_kind(SpaceKind kind) {
  switch (kind) {
  case SpaceKind::Sphere:
    return SpaceKind::FlatC;
  case SpaceKind::PseudoSphere:
    return SpaceKind::FlatC1;
  case SpaceKind::SphereQ:
    return SpaceKind::FlatQ;
  case SpaceKind::PseudoSphereQ:
    return SpaceKind::FlatQ1;
  default:
    return kind;
  }
}

SpaceKind dual_kind(SpaceKind kind) {
  switch (kind) {
  case SpaceKind::FlatC:
    return SpaceKind::FlatC1;
  case SpaceKind::FlatC1:
    return SpaceKind::FlatC;
  case SpaceKind::FlatQ:
    return SpaceKind::FlatQ1;
  case SpaceKind::FlatQ1:
    return SpaceKind::FlatQ;
  case SpaceKind::Sphere:
    return SpaceKind::PseudoSphere;
  case SpaceKind::PseudoSphere:
    return SpaceKind::Sphere;
  case SpaceKind::SphereQ:
    return SpaceKind::PseudoSphereQ;
  case SpaceKind::PseudoSphereQ:
    return SpaceKind::SphereQ;
  }
  return kind;
}

double inner(const AmbientSpace& space, const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
  if (v.size() != space.real_dim() || w.size() != space.real_dim()) {
    throw DimensionMismatch("inner: vectors must have " + std::to_string(space.real_dim()) +
                            " real components");
  }
  return (v.array() * space.signature().array() * w.array()).sum();
}

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x9e3779b9u};
  return Rng(seq);
}

RealPoint random_point(const AmbientSpace& space, Rng& rng) {
  const Eigen::Index dim = space.real_dim();
  constexpr int kMaxTries = 10'000'000;
  switch (space.kind()) {
  case SpaceKind::FlatC:
  case SpaceKind::FlatQ:
    return gaussian(dim, rng);
  case SpaceKind::FlatC1:
  case SpaceKind::FlatQ1:
    for (int t = 0; t < kMaxTries; ++t) {
      RealPoint x = gaussian(dim, rng);
      if (inner(space, x, x) < 0.0) return x;
    }
    break;
  case SpaceKind::Sphere:
  case SpaceKind::SphereQ:
    for (int t = 0; t < kMaxTries; ++t) {
      RealPoint x = gaussian(dim, rng);
      const double norm = x.norm();
      if (norm > 1e-8) return x / norm;
    }
    break;
  case SpaceKind::PseudoSphere:
  case SpaceKind::PseudoSphereQ:
    for (int t = 0; t < kMaxTries; ++t) {
      RealPoint x = gaussian(dim, rng);
      const double q = inner(space, x, x);
      if (q < pseudo_sphere_floor()) return x / std::sqrt(-q);
    }
    break;
  }
  throw Error("random_point: rejection sampling exhausted for " + space.label());
}

RealPoint random_point(const AmbientSpace& space, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return random_point(space, rng);
}

TangentVector tangent_project(const AmbientSpace& space, const RealPoint& p, const Eigen::VectorXd& v) {
  const double residual = space.constraint_residual(p);
  if (std::abs(residual) > kOnManifoldTol) {
    throw OffManifold(space.label() + " constraint residual " + std::to_string(residual));
  }
  if (v.size() != p.size()) throw DimensionMismatch("tangent_project: vector/point size differ");
  TangentVector t{p, v};
  if (space.is_flat()) return t;
  if (space.is_indefinite()) {
    t.dir = v + inner(space, v, p) * p;
  } else {
    t.dir = v - v.dot(p) * p;
  }
  return t;
}

RealPoint retract(const AmbientSpace& space, const Eigen::VectorXd& x) {
  if (x.size() != space.real_dim()) throw DimensionMismatch("retract: wrong dimension");
  if (space.is_flat()) return x;
  const double q = inner(space, x, x);
  if (!std::isfinite(q)) throw RetractUndefined("non-finite point");
  if (space.is_indefinite()) {
    if (!(q < 0.0)) throw RetractUndefined("<<x,x>> = " + std::to_string(q) + " is not negative");
    return x / std::sqrt(-q);
  }
  if (!(q > 0.0)) throw RetractUndefined("cannot normalize the zero vector");
  return x / std::sqrt(q);
}

Eigen::VectorXd complex_structure(const Eigen::VectorXd& v) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index k = 0; k + 1 < v.size(); k += 2) {
    out[k] = -v[k + 1];
    out[k + 1] = v[k];
  }
  return out;
}

GroupElement random_group_element(const AmbientSpace& space, Rng& rng) {
  if (space.is_quaternionic()) {
    Eigen::Vector4d q;
    do {
      q = gaussian(4, rng);
    } while (q.norm() < 1e-8);
    return S3Element{q.normalized()};
  }
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  return S1Element{angle(rng)};
}

Eigen::VectorXd act_on_vector(const AmbientSpace& space, const GroupElement& g, const Eigen::VectorXd& v) {
  Eigen::VectorXd out(v.size());
  if (const auto* s1 = std::get_if<S1Element>(&g)) {
    const Cx rot = std::polar(1.0, s1->theta);
    for (Eigen::Index k = 0; k + 1 < v.size(); k += 2) {
      const Cx z = rot * Cx(v[k], v[k + 1]);
      out[k] = z.real();
      out[k + 1] = z.imag();
    }
    return out;
  }
  const Eigen::Vector4d& q = std::get<S3Element>(g).q;
  const Cx a(q[0], q[1]);
  const Cx b(q[2], q[3]);
  const int n = space.complex_dim() / 2;
  for (int col = 0; col < n; ++col) {
    const int i1 = quaternionic_index(n, 0, col);
    const int i2 = quaternionic_index(n, 1, col);
    const Cx z1(v[2 * i1], v[2 * i1 + 1]);
    const Cx z2(v[2 * i2], v[2 * i2 + 1]);
    // (z1 + z2 j)(a + b j) = (z1 a - z2 conj(b)) + (z1 b + z2 conj(a)) j
    const Cx w1 = z1 * a - z2 * std::conj(b);
    const Cx w2 = z1 * b + z2 * std::conj(a);
    out[2 * i1] = w1.real();
    out[2 * i1 + 1] = w1.imag();
    out[2 * i2] = w2.real();
    out[2 * i2 + 1] = w2.imag();
  }
  return out;
}

RealPoint group_act(const AmbientSpace& space, const GroupElement& g, const RealPoint& p) {
  const bool s1 = std::holds_alternative<S1Element>(g);
  const SpaceKind k = space.kind();
  if (s1 && k != SpaceKind::Sphere && k != SpaceKind::PseudoSphere) {
    throw ActionMismatch("S1 acts on sphere-complex/pseudosphere-complex, not " + space.label());
  }
  if (!s1) {
    if (k != SpaceKind::SphereQ && k != SpaceKind::PseudoSphereQ) {
      throw ActionMismatch("S3 acts on sphere-quaternionic/pseudosphere-quaternionic, not " + space.label());
    }
    if (std::abs(std::get<S3Element>(g).q.norm() - 1.0) > 1e-12) {
      throw ActionMismatch("S3 element is not a unit quaternion");
    }
  }
  if (p.size() != space.real_dim()) throw DimensionMismatch("group_act: wrong dimension");
  return act_on_vector(space, g, p);
}

} // namespace harmomorph
