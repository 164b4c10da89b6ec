#include "harmomorph/morphism.hpp"

#include "harmomorph/parallel.hpp"

#include <bit>
#include <cmath>

namespace harmomorph {

namespace {

using Poly = std::vector<Cx>;

Poly multiply(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, Cx(0.0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

void accumulate(Poly& into, const Poly& p, double sign) {
  if (into.size() < p.size()) into.resize(p.size(), Cx(0.0));
  for (std::size_t i = 0; i < p.size(); ++i) into[i] += sign * p[i];
}

Duality duality_of(SpaceKind kind) {
  switch (kind) {
  case SpaceKind::Sphere:
  case SpaceKind::SphereQ:
    return Duality::Compact;
  case SpaceKind::PseudoSphere:
  case SpaceKind::PseudoSphereQ:
    return Duality::Noncompact;
  default:
    return Duality::Flat;
  }
}

} // namespace

int ResolventPolynomial::degree() const {
  for (int k = static_cast<int>(coeffs_.size()) - 1; k >= 0; --k) {
    if (coeffs_[static_cast<std::size_t>(k)] != Cx(0.0)) return k;
  }
  return -1;
}

Cx ResolventPolynomial::operator()(Cx s) const {
  Cx acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

double ResolventPolynomial::norm() const {
  double best = 0.0;
  for (const Cx& c : coeffs_) best = std::max(best, std::abs(c));
  return best;
}

ResolventPolynomial resolvent(const CoefficientPair& pair) {
  const Eigen::Index n = pair.A.rows();
  if (pair.A.cols() != n || pair.B.rows() != n || pair.B.cols() != n) {
    throw DimensionMismatch("resolvent needs square matrices of equal size");
  }
  if (n > 20) throw DimensionMismatch("resolvent: matrix too large for subset expansion");
  // partial[mask] = signed sum over assignments of rows 0..|mask|-1 to the columns in mask
  // of prod (s b_rc - a_rc).
  const std::size_t subsets = std::size_t{1} << n;
  std::vector<Poly> partial(subsets);
  partial[0] = {Cx(1.0)};
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    if (partial[mask].empty()) continue;
    const auto row = static_cast<Eigen::Index>(std::popcount(mask));
    if (row == n) continue;
    for (Eigen::Index col = 0; col < n; ++col) {
      const std::size_t bit = std::size_t{1} << col;
      if (mask & bit) continue;
      // Inversions added by placing this column after the ones already used.
      const int larger = std::popcount(mask >> (col + 1));
      const Poly entry{-pair.A(row, col), pair.B(row, col)};
      accumulate(partial[mask | bit], multiply(partial[mask], entry), (larger % 2) ? -1.0 : 1.0);
    }
  }
  Poly coeffs = partial[subsets - 1];
  coeffs.resize(static_cast<std::size_t>(n) + 1, Cx(0.0));
  return ResolventPolynomial(std::move(coeffs));
}

double RationalMorphism::q_scale(const RealPoint& p) const {
  if (q_terms.empty()) return 1.0;
  double s = 0.0;
  for (std::size_t i = 0; i < q_terms.size(); ++i) s += q_weights[i] * std::abs(q_terms[i].value<double>(p));
  return s;
}

bool RationalMorphism::in_domain(const RealPoint& p, double margin) const {
  if (!space.in_open_domain(p)) return false;
  try {
    const double q = std::abs(Q.value<double>(p));
    return q > margin * q_scale(p);
  } catch (const DivisionByZero&) {
    return false;
  }
}

RationalMorphism build_morphism(const AmbientSpace& space, const CoefficientPair& pair, BuildOptions options) {
  if (space.is_basic_sphere()) throw DimensionMismatch("no morphism construction on the basic sphere family");
  if (pair.d < 1) throw DimensionMismatch("degree d must be positive");
  if (space.is_quaternionic() && pair.d > 1 && !options.allow_quaternionic_power) {
    throw DimensionMismatch("quaternionic constructions use d = 1 unless powers are explicitly allowed");
  }
  const EigenFamily family = catalog(space);
  const int rows = family.half;
  const int cols = static_cast<int>(family.members.size()) / rows;
  if (rows != cols) {
    throw DimensionMismatch(family.name + " has a " + std::to_string(rows) + "x" + std::to_string(cols) +
                            " coefficient layout; square pairs need an even column count");
  }
  if (pair.A.rows() != rows || pair.A.cols() != cols || pair.B.rows() != rows || pair.B.cols() != cols) {
    throw DimensionMismatch(family.name + " needs " + std::to_string(rows) + "x" + std::to_string(cols) +
                            " coefficient matrices");
  }

  const Eigen::Map<const Eigen::VectorXcd> a(pair.A.data(), pair.A.size());
  const Eigen::Map<const Eigen::VectorXcd> b(pair.B.data(), pair.B.size());
  const double aa = a.squaredNorm();
  const double bb = b.squaredNorm();
  const double gram_det = aa * bb - std::norm(a.dot(b));
  if (!(aa > 0.0 && bb > 0.0) || gram_det <= 1e-12 * aa * bb) {
    throw DependentCoefficients("A and B are linearly dependent");
  }
  const double b_norm = pair.B.norm();
  if (std::abs(pair.B.determinant()) <= 1e-12 * std::pow(b_norm, static_cast<double>(rows))) {
    throw SingularB("det B vanishes");
  }

  RationalMorphism m{space, {}, {}, {}, pair, resolvent(pair), duality_of(space.kind()), {}, {}};
  // The curved members share the factor +-1/<<z,z>>, which cancels from P/Q
  // identically; F is assembled from the flat members to keep its jets well
  // conditioned far out on the pseudo-spheres.
  const EigenFamily flat = catalog(AmbientSpace(ambient_flat_kind(space.kind()), space.n()));
  std::vector<Cx> ca;
  std::vector<Cx> cb;
  std::vector<ScalarField> powers;
  std::vector<ScalarField> flat_powers;
  for (std::size_t i = 0; i < family.members.size(); ++i) {
    const auto [j, k] = family.indices[i];
    const int c = k - family.half;
    powers.push_back(pow(family.members[i], pair.d));
    flat_powers.push_back(pow(flat.members[i], pair.d));
    ca.push_back(pair.A(j, c));
    cb.push_back(pair.B(j, c));
    if (pair.B(j, c) != Cx(0.0)) {
      m.q_terms.push_back(powers.back());
      m.q_weights.push_back(std::abs(pair.B(j, c)));
    }
  }
  m.P = linear_combination(ca, powers);
  m.Q = linear_combination(cb, powers);
  m.F = space.is_flat() ? m.P / m.Q : linear_combination(ca, flat_powers) / linear_combination(cb, flat_powers);
  return m;
}

RationalMorphism custom_morphism(const AmbientSpace& space, const ScalarField& P, const ScalarField& Q) {
  return RationalMorphism{space, P, Q, P / Q, std::nullopt, std::nullopt, duality_of(space.kind()), {}, {}};
}

bool is_admissible(const RationalMorphism& morphism, Cx alpha, double margin) {
  if (!(std::abs(alpha) > margin)) return false;
  if (!morphism.resolvent) return true;
  const ResolventPolynomial& r = *morphism.resolvent;
  const double bound = margin * std::pow(1.0 + std::abs(alpha), r.coeffs().size() - 1) * r.norm();
  return std::abs(r(alpha)) > bound;
}

CoefficientPair random_pair(int h, int d, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw = [&] {
    Eigen::MatrixXcd m(h, h);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m.data()[i] = Cx(re, im);
    }
    return m;
  };
  CoefficientPair pair{draw(), draw(), d};
  while (std::abs(pair.B.determinant()) < 1e-3) pair.B = draw();
  return pair;
}

Cx random_admissible_alpha(const RationalMorphism& morphism, Rng& rng, double min_resolvent) {
  std::uniform_real_distribution<double> radius(0.5, 2.0);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  for (int attempt = 0; attempt < 10'000; ++attempt) {
    const Cx alpha = std::polar(radius(rng), angle(rng));
    const bool far = !morphism.resolvent || std::abs((*morphism.resolvent)(alpha)) >= min_resolvent;
    if (far && is_admissible(morphism, alpha)) return alpha;
  }
  throw InadmissibleAlpha("could not draw an admissible alpha");
}

RealPoint random_domain_point(const RationalMorphism& morphism, std::uint64_t seed, std::uint64_t stream,
                              double margin) {
  Rng rng = make_rng(seed, stream);
  for (int attempt = 0; attempt < 100'000; ++attempt) {
    RealPoint p = random_point(morphism.space, rng);
    if (morphism.in_domain(p, margin)) return p;
  }
  throw Error("no point of Omega(Q) found for " + morphism.space.label());
}

MorphismReport verify_morphism(const RationalMorphism& morphism, int points, double tol, std::uint64_t seed) {
  struct PointResult {
    double tau = 0.0;
    double kappa = 0.0;
  };
  std::vector<PointResult> results(static_cast<std::size_t>(points));
  parallel_for(results.size(), [&](std::size_t i) {
    const RealPoint p = random_domain_point(morphism, seed, i);
    const LocalGeometry geo(morphism.space, p);
    const Jet2d jet = morphism.F.jet(p);
    const double ts = geo.laplacian_scale(jet);
    const double ks = geo.conformality_scale(jet);
    const double tau = std::abs(geo.laplacian(jet));
    const double kappa = std::abs(geo.conformality(jet, jet));
    results[i] = {ts > 0.0 ? tau / ts : tau, ks > 0.0 ? kappa / ks : kappa};
  });
  MorphismReport report;
  report.points = points;
  report.tol = tol;
  for (const auto& r : results) {
    report.worst_tau = std::max(report.worst_tau, r.tau);
    report.worst_kappa = std::max(report.worst_kappa, r.kappa);
  }
  report.pass = std::isfinite(report.worst()) && report.worst() <= tol;
  return report;
}

InvarianceReport verify_invariance(const RationalMorphism& morphism, int samples, double tol, std::uint64_t seed) {
  if (morphism.space.is_flat()) {
    throw ActionMismatch("invariance is defined on sphere and pseudo-sphere kinds, not " + morphism.space.label());
  }
  InvarianceReport report;
  report.samples = samples;
  report.tol = tol;
  for (int i = 0; i < samples; ++i) {
    const RealPoint z = random_domain_point(morphism, seed, static_cast<std::uint64_t>(i));
    Rng rng = make_rng(seed ^ 0x5eedULL, static_cast<std::uint64_t>(i));
    const GroupElement g = random_group_element(morphism.space, rng);
    const RealPoint gz = group_act(morphism.space, g, z);
    const Cx fz = morphism.value(z);
    const double diff = std::abs(morphism.value(gz) - fz) / std::max(1.0, std::abs(fz));
    report.worst = std::max(report.worst, diff);
  }
  report.pass = std::isfinite(report.worst) && report.worst <= tol;
  return report;
}

RationalMorphism dualize(const RationalMorphism& morphism) {
  if (!morphism.pair) throw NoDualDefined("custom morphisms carry no coefficient pair");
  if (morphism.space.is_basic_sphere()) throw NoDualDefined("the basic sphere family has no dual construction");
  const AmbientSpace dual(dual_kind(morphism.space.kind()), morphism.space.n());
  return build_morphism(dual, *morphism.pair, BuildOptions{true});
}

FiberCurvature fiber_mean_curvature(const RationalMorphism& morphism, const RealPoint& p) {
  return fiber_mean_curvature(morphism.space, morphism.F, p);
}

std::string_view duality_label(Duality d) {
  switch (d) {
  case Duality::Flat:
    return "flat";
  case Duality::Compact:
    return "compact";
  case Duality::Noncompact:
    return "noncompact";
  }
  return "unknown";
}

} // namespace harmomorph
