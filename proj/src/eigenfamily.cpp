#include "harmomorph/eigenfamily.hpp"

#include "harmomorph/operators.hpp"
#include "harmomorph/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace harmomorph {

namespace {

double relative(Cx residual, double scale) {
  const double r = std::abs(residual);
  return scale > kRelativeFloor ? r / scale : r;
}

ScalarField column_product(int n, int j, int k) {
  // z_{1j} conj(z_{1k}) + z_{2j} conj(z_{2k})
  return monomial(quaternionic_index(n, 0, j), quaternionic_index(n, 0, k)) +
         monomial(quaternionic_index(n, 1, j), quaternionic_index(n, 1, k));
}

} // namespace

EigenFamily catalog(const AmbientSpace& space) {
  if (space.is_basic_sphere()) return basic_sphere_family(space.n());
  const int n = space.n();
  EigenFamily fam{space, {}, 0.0, 0.0, space.label() + ":n=" + std::to_string(n), {}, 0};

  std::vector<ScalarField> flat;
  if (space.is_quaternionic()) {
    fam.half = n / 2;
    for (int j = 0; j < fam.half; ++j) {
      for (int k = fam.half; k < n; ++k) {
        flat.push_back(column_product(n, j, k));
        fam.indices.emplace_back(j, k);
      }
    }
  } else {
    fam.half = n;
    for (int j = 0; j < n; ++j) {
      for (int k = n; k < 2 * n; ++k) {
        flat.push_back(monomial(j, k));
        fam.indices.emplace_back(j, k);
      }
    }
  }
  if (flat.empty()) throw DimensionMismatch("no eigenfamily members for " + fam.name);

  const ScalarField norm2 = ScalarField::quadratic(space.complex_signature());
  const double eight_n = 8.0 * n;
  switch (space.kind()) {
  case SpaceKind::FlatC:
  case SpaceKind::FlatC1:
  case SpaceKind::FlatQ:
  case SpaceKind::FlatQ1:
    fam.members = std::move(flat);
    break;
  case SpaceKind::Sphere:
  case SpaceKind::SphereQ:
    for (const auto& f : flat) fam.members.push_back(f / norm2);
    fam.lambda = -eight_n;
    fam.mu = -4.0;
    break;
  case SpaceKind::PseudoSphere:
  case SpaceKind::PseudoSphereQ:
    for (const auto& f : flat) fam.members.push_back(-(f / norm2));
    fam.lambda = eight_n;
    fam.mu = 4.0;
    break;
  }
  return fam;
}

EigenFamily basic_sphere_family(int m) {
  const AmbientSpace space = AmbientSpace::basic_sphere(m);
  EigenFamily fam{space, {}, -(2.0 * m - 1.0), -1.0, "sphere-basic:n=" + std::to_string(m), {}, 0};
  const ScalarField inv_norm = pow(ScalarField::quadratic(space.complex_signature()), -0.5);
  for (int j = 0; j < m; ++j) fam.members.push_back(ScalarField::coord(j) * inv_norm);
  return fam;
}

std::pair<std::string, int> split_label(const std::string& label) {
  const auto colon = label.find(':');
  if (colon == std::string::npos) return {label, 0};
  const std::string kind = label.substr(0, colon);
  const std::string rest = label.substr(colon + 1);
  if (rest.rfind("n=", 0) != 0) throw Error("malformed label '" + label + "' (expected <space>:n=<int>)");
  try {
    std::size_t used = 0;
    const int n = std::stoi(rest.substr(2), &used);
    if (used != rest.size() - 2) throw std::invalid_argument("trailing");
    return {kind, n};
  } catch (const std::exception&) {
    throw Error("malformed n in label '" + label + "'");
  }
}

EigenFamily catalog_by_label(const std::string& label, int n) {
  auto [kind, parsed] = split_label(label);
  if (parsed != 0) n = parsed;
  if (n < 1) throw Error("label '" + label + "' needs a positive n");
  if (kind == "sphere-basic") return basic_sphere_family(n);
  return catalog(AmbientSpace(parse_kind(kind), n));
}

std::vector<std::string> catalog_labels() {
  std::vector<std::string> out;
  for (SpaceKind k : {SpaceKind::FlatC, SpaceKind::FlatC1, SpaceKind::FlatQ, SpaceKind::FlatQ1, SpaceKind::Sphere,
                      SpaceKind::PseudoSphere, SpaceKind::SphereQ, SpaceKind::PseudoSphereQ}) {
    out.emplace_back(kind_label(k));
  }
  out.emplace_back("sphere-basic");
  return out;
}

EigenReport verify_eigenfamily(const EigenFamily& family, int points, double tol, std::uint64_t seed) {
  if (points < 1) throw Error("verify_eigenfamily needs at least one point");
  struct PointResult {
    double tau = 0.0;
    double kappa = 0.0;
  };
  std::vector<PointResult> results(static_cast<std::size_t>(points));
  const std::size_t count = family.members.size();

  parallel_for(results.size(), [&](std::size_t i) {
    Rng rng = make_rng(seed, i);
    const RealPoint p = random_point(family.space, rng);
    const LocalGeometry geo(family.space, p);
    std::vector<Jet2d> jets;
    jets.reserve(count);
    for (const auto& m : family.members) jets.push_back(m.jet(p));
    PointResult r;
    for (std::size_t a = 0; a < count; ++a) {
      const Cx phi = jets[a].value;
      r.tau = std::max(r.tau, relative(geo.laplacian(jets[a]) - family.lambda * phi, std::abs(phi)));
      for (std::size_t b = 0; b < count; ++b) {
        const Cx psi = jets[b].value;
        const double scale = std::min(std::abs(phi), std::abs(psi)) > kRelativeFloor ? std::abs(phi * psi) : 0.0;
        r.kappa = std::max(r.kappa, relative(geo.conformality(jets[a], jets[b]) - family.mu * phi * psi, scale));
      }
    }
    results[i] = r;
  });

  EigenReport report;
  report.points = points;
  report.tol = tol;
  report.evaluations = static_cast<std::size_t>(points) * count * (count + 1);
  for (const auto& r : results) {
    report.worst_tau = std::max(report.worst_tau, r.tau);
    report.worst_kappa = std::max(report.worst_kappa, r.kappa);
  }
  report.pass = std::isfinite(report.worst()) && report.worst() <= tol;
  return report;
}

MeasuredEigenvalues measure_eigenvalues(const EigenFamily& family, int points, std::uint64_t seed) {
  std::vector<Cx> lambdas;
  std::vector<Cx> mus;
  for (int i = 0; i < points; ++i) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(i));
    const RealPoint p = random_point(family.space, rng);
    const LocalGeometry geo(family.space, p);
    std::vector<Jet2d> jets;
    for (const auto& m : family.members) jets.push_back(m.jet(p));
    for (std::size_t a = 0; a < jets.size(); ++a) {
      const Cx phi = jets[a].value;
      if (std::abs(phi) <= kRelativeFloor) continue;
      lambdas.push_back(geo.laplacian(jets[a]) / phi);
      for (std::size_t b = 0; b < jets.size(); ++b) {
        const Cx psi = jets[b].value;
        if (std::abs(psi) > kRelativeFloor) mus.push_back(geo.conformality(jets[a], jets[b]) / (phi * psi));
      }
    }
  }
  if (lambdas.empty() || mus.empty()) throw Error("measure_eigenvalues: every member vanished at the samples");
  auto mean = [](const std::vector<Cx>& v) {
    Cx s = 0.0;
    for (const Cx& x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  MeasuredEigenvalues out{mean(lambdas), mean(mus), 0.0, static_cast<int>(lambdas.size())};
  for (const Cx& x : lambdas) out.spread = std::max(out.spread, std::abs(x - out.lambda));
  for (const Cx& x : mus) out.spread = std::max(out.spread, std::abs(x - out.mu));
  return out;
}

bool linearly_independent(const EigenFamily& family, std::uint64_t seed, double max_condition) {
  const auto count = static_cast<Eigen::Index>(family.members.size());
  const Eigen::Index rows = 2 * count + 4;
  Eigen::MatrixXcd values(rows, count);
  Rng rng = make_rng(seed, 0x1d);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const RealPoint p = random_point(family.space, rng);
    for (Eigen::Index a = 0; a < count; ++a) values(i, a) = family.members[a].value<double>(p);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(values);
  const Eigen::VectorXd& s = svd.singularValues();
  return s[count - 1] > 0.0 && s[0] / s[count - 1] <= max_condition;
}

ScalarField PolyLift::field() const {
  std::vector<Cx> coeffs;
  std::vector<ScalarField> terms;
  for (const auto& [index, c] : coefficients) {
    if (c == Cx(0.0)) continue;
    std::vector<ScalarField> factors;
    for (std::size_t a = 0; a < index.size(); ++a) {
      if (index[a] > 0) factors.push_back(pow(base.members[a], index[a]));
    }
    coeffs.push_back(c);
    terms.push_back(product(factors));
  }
  return linear_combination(coeffs, terms);
}

LiftPrediction lift_Pd(const EigenFamily& family, int d, const std::map<MultiIndex, Cx>& coefficients) {
  if (d < 1) throw DimensionMismatch("lift degree must be positive");
  bool any = false;
  for (const auto& [index, c] : coefficients) {
    if (index.size() != family.members.size()) {
      throw DimensionMismatch("multi-index length " + std::to_string(index.size()) + " != family size " +
                              std::to_string(family.members.size()));
    }
    int degree = 0;
    for (int e : index) {
      if (e < 0) throw DimensionMismatch("negative exponent in multi-index");
      degree += e;
    }
    if (degree != d) throw DimensionMismatch("multi-index of degree " + std::to_string(degree) + " in a degree-" +
                                             std::to_string(d) + " lift");
    any |= c != Cx(0.0);
  }
  if (!any) throw EmptyPolynomial("every coefficient is zero");
  const double dd = d;
  return {PolyLift{family, d, coefficients}, dd * family.lambda + dd * (dd - 1.0) * family.mu, dd * dd * family.mu};
}

std::map<MultiIndex, Cx> random_lift_coefficients(const EigenFamily& family, int d, int terms, Rng& rng) {
  const int count = static_cast<int>(family.members.size());
  std::uniform_int_distribution<int> pick(0, count - 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::map<MultiIndex, Cx> out;
  for (int attempt = 0; attempt < 20 * terms && static_cast<int>(out.size()) < terms; ++attempt) {
    MultiIndex index(static_cast<std::size_t>(count), 0);
    for (int e = 0; e < d; ++e) ++index[static_cast<std::size_t>(pick(rng))];
    const double re = normal(rng);
    const double im = normal(rng);
    out.emplace(std::move(index), Cx(re, im));
  }
  return out;
}

EigenFamily lifted_family(const EigenFamily& family, int d, const std::vector<std::map<MultiIndex, Cx>>& polys) {
  EigenFamily out = family;
  out.members.clear();
  out.indices.clear();
  out.name = family.name + ":d=" + std::to_string(d);
  for (const auto& coeffs : polys) {
    const LiftPrediction pred = lift_Pd(family, d, coeffs);
    out.members.push_back(pred.lift.field());
    out.lambda = pred.lambda;
    out.mu = pred.mu;
  }
  if (polys.empty()) {
    const double dd = d;
    out.lambda = dd * family.lambda + dd * (dd - 1.0) * family.mu;
    out.mu = dd * dd * family.mu;
  }
  return out;
}

} // namespace harmomorph
