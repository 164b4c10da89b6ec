#include "harmomorph/eigenfamily.hpp"
#include "harmomorph/operators.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace harmomorph;

namespace {

RealPoint draw(const AmbientSpace& space, std::uint64_t seed, int i) {
  Rng rng = make_rng(seed, static_cast<std::uint64_t>(i));
  return random_point(space, rng);
}

} // namespace

TEST_CASE("flat family on C^6 is the nine products z_j conj(z_k)") {
  const EigenFamily fam = catalog(AmbientSpace(SpaceKind::FlatC, 3));
  REQUIRE(fam.members.size() == 9);
  CHECK(fam.lambda == Cx(0));
  CHECK(fam.mu == Cx(0));
  CHECK(fam.half == 3);
  const RealPoint p = draw(fam.space, 1, 0);
  for (std::size_t i = 0; i < 9; ++i) {
    const auto [j, k] = fam.indices[i];
    CHECK(j < 3);
    CHECK(k >= 3);
    CHECK(std::abs(fam.members[i].value<double>(p) - monomial(j, k).value<double>(p)) == 0.0);
  }
}

TEST_CASE("catalog eigenvalues per kind") {
  const EigenFamily s = catalog(AmbientSpace(SpaceKind::Sphere, 2));
  CHECK(s.members.size() == 4);
  CHECK(s.lambda == Cx(-16));
  CHECK(s.mu == Cx(-4));
  const EigenFamily h = catalog(AmbientSpace(SpaceKind::PseudoSphere, 3));
  CHECK(h.lambda == Cx(24));
  CHECK(h.mu == Cx(4));
  const EigenFamily b = basic_sphere_family(3);
  CHECK(b.lambda == Cx(-5));
  CHECK(b.mu == Cx(-1));
  CHECK(b.members.size() == 3);
}

TEST_CASE("quaternionic pseudo-sphere members are negated column products over <<z,z>>") {
  const AmbientSpace space(SpaceKind::PseudoSphereQ, 2);
  const EigenFamily fam = catalog(space);
  CHECK(fam.lambda == Cx(16));
  CHECK(fam.mu == Cx(4));
  const ScalarField q = ScalarField::quadratic(space.complex_signature());
  for (std::size_t i = 0; i < fam.members.size(); ++i) {
    const auto [j, k] = fam.indices[i];
    const ScalarField want = -(monomial(quaternionic_index(2, 0, j), quaternionic_index(2, 0, k)) +
                               monomial(quaternionic_index(2, 1, j), quaternionic_index(2, 1, k))) /
                             q;
    for (int t = 0; t < 10; ++t) {
      const RealPoint p = draw(space, 2, t);
      CHECK(std::abs(fam.members[i].value<double>(p) - want.value<double>(p)) <= 1e-14);
    }
  }
}

TEST_CASE("labels resolve to catalog families") {
  CHECK(catalog_labels().size() == 9);
  const EigenFamily f = catalog_by_label("sphere-complex:n=3");
  CHECK(f.space == AmbientSpace(SpaceKind::Sphere, 3));
  CHECK(catalog_by_label("sphere-basic", 4).space.is_basic_sphere());
  CHECK(split_label("flat-complex-1:n=2") == std::pair<std::string, int>{"flat-complex-1", 2});
  CHECK(split_label("flat-complex").second == 0);
  CHECK_THROWS_AS((void)catalog_by_label("torus:n=2"), Error);
}

TEST_CASE("flat family passes at a tight tolerance") {
  const EigenReport r = verify_eigenfamily(catalog(AmbientSpace(SpaceKind::FlatC, 3)), 100, 1e-10, 1);
  CHECK(r.pass);
  CHECK(r.points == 100);
}

TEST_CASE("every catalog family verifies at its claimed eigenvalues") {
  for (const auto& label : catalog_labels()) {
    for (int n : {2, 3}) {
      const EigenFamily fam = catalog_by_label(label, n);
      const EigenReport r = verify_eigenfamily(fam, 100, 1e-8, 7);
      INFO(fam.name, " worst=", r.worst());
      CHECK(r.pass);
      CHECK(linearly_independent(fam, 7));
    }
  }
}

TEST_CASE("a wrong lambda fails with a residual of order one") {
  EigenFamily fam = catalog(AmbientSpace(SpaceKind::Sphere, 2));
  fam.lambda += 1.0;
  const EigenReport r = verify_eigenfamily(fam, 50, 1e-8, 3);
  CHECK_FALSE(r.pass);
  CHECK(r.worst_tau > 0.5);
  CHECK(r.worst_tau < 2.0);
  CHECK(r.worst_kappa <= 1e-8);
}

TEST_CASE("repeated members are dependent") {
  EigenFamily fam = catalog(AmbientSpace(SpaceKind::FlatC, 2));
  fam.members.push_back(2.0 * fam.members[0]);
  CHECK_FALSE(linearly_independent(fam, 1));
}

TEST_CASE("lift predictions") {
  const EigenFamily s = catalog(AmbientSpace(SpaceKind::Sphere, 2));
  std::map<MultiIndex, Cx> coeffs{{{2, 0, 0, 0}, 1.0}, {{0, 1, 1, 0}, Cx(0, 3)}};
  const LiftPrediction two = lift_Pd(s, 2, coeffs);
  CHECK(two.lambda == Cx(-40));
  CHECK(two.mu == Cx(-16));
  const ScalarField P = two.lift.field();
  for (int i = 0; i < 20; ++i) {
    const RealPoint p = draw(s.space, 4, i);
    const Cx v = P.value<double>(p);
    const OperatorValue op = tau_kappa(s.space, P, P, p);
    CHECK(std::abs(op.tau - two.lambda * v) <= 1e-8 * std::abs(two.lambda * v));
    CHECK(std::abs(op.kappa - two.mu * v * v) <= 1e-8 * std::abs(two.mu * v * v));
  }
  const LiftPrediction one = lift_Pd(s, 1, {{{0, 0, 1, 0}, 1.0}});
  CHECK(one.lambda == s.lambda);
  CHECK(one.mu == s.mu);
  const EigenFamily flat = catalog(AmbientSpace(SpaceKind::FlatQ1, 4));
  const LiftPrediction three = lift_Pd(flat, 3, {{{3, 0, 0, 0}, 1.0}});
  CHECK(three.lambda == Cx(0));
  CHECK(three.mu == Cx(0));
}

TEST_CASE("lift rejects empty and malformed polynomials") {
  const EigenFamily s = catalog(AmbientSpace(SpaceKind::Sphere, 2));
  CHECK_THROWS_AS((void)lift_Pd(s, 2, {}), EmptyPolynomial);
  CHECK_THROWS_AS((void)lift_Pd(s, 2, {{{2, 0, 0, 0}, 0.0}}), EmptyPolynomial);
  CHECK_THROWS_AS((void)lift_Pd(s, 2, {{{1, 0, 0, 0}, 1.0}}), DimensionMismatch);
  CHECK_THROWS_AS((void)lift_Pd(s, 2, {{{2, 0, 0}, 1.0}}), DimensionMismatch);
}

TEST_CASE("lifted polynomials are homogeneous of degree d") {
  const EigenFamily s = catalog(AmbientSpace(SpaceKind::FlatC, 2));
  Rng rng = make_rng(5);
  const LiftPrediction lp = lift_Pd(s, 3, random_lift_coefficients(s, 3, 4, rng));
  CHECK(lp.lift.coefficients.size() == 4);
  const RealPoint p = draw(s.space, 5, 1);
  // Scaling z by t scales every member by t^2, so P by t^6.
  CHECK(std::abs(lp.lift.field().value<double>(2.0 * p) - 64.0 * lp.lift.field().value<double>(p)) <=
        1e-12 * std::abs(64.0 * lp.lift.field().value<double>(p)));
}

TEST_CASE("lifted families verify for degrees one to three") {
  for (const auto& label : catalog_labels()) {
    const EigenFamily fam = catalog_by_label(label, 2);
    for (int d : {1, 2, 3}) {
      Rng rng = make_rng(9, static_cast<std::uint64_t>(d));
      std::vector<std::map<MultiIndex, Cx>> polys;
      for (int t = 0; t < 3; ++t) polys.push_back(random_lift_coefficients(fam, d, 3, rng));
      const EigenFamily lifted = lifted_family(fam, d, polys);
      CHECK(lifted.lambda == Cx(d) * fam.lambda + Cx(d * (d - 1)) * fam.mu);
      CHECK(lifted.mu == Cx(d * d) * fam.mu);
      const EigenReport r = verify_eigenfamily(lifted, 30, 1e-8, 11);
      INFO(fam.name, " d=", d, " worst=", r.worst());
      CHECK(r.pass);
    }
  }
}

TEST_CASE("measured eigenvalues match the claims") {
  const EigenFamily fam = catalog(AmbientSpace(SpaceKind::PseudoSphereQ, 4));
  const MeasuredEigenvalues m = measure_eigenvalues(fam, 20, 3);
  CHECK(std::abs(m.lambda - fam.lambda) <= 1e-8 * std::abs(fam.lambda));
  CHECK(std::abs(m.mu - fam.mu) <= 1e-8 * std::abs(fam.mu));
  CHECK(m.spread <= 1e-8 * std::abs(fam.lambda));
  CHECK(m.samples > 0);
}

TEST_CASE("complex curved members are circle invariant") {
  for (SpaceKind k : {SpaceKind::Sphere, SpaceKind::PseudoSphere}) {
    const EigenFamily fam = catalog(AmbientSpace(k, 3));
    for (int i = 0; i < 20; ++i) {
      Rng rng = make_rng(13, static_cast<std::uint64_t>(i));
      const GroupElement g = random_group_element(fam.space, rng);
      const RealPoint z = draw(fam.space, 14, i);
      const RealPoint gz = group_act(fam.space, g, z);
      for (const auto& m : fam.members) CHECK(std::abs(m.value<double>(gz) - m.value<double>(z)) <= 1e-12);
    }
  }
}

TEST_CASE("quaternionic curved members are S3 invariant") {
  for (SpaceKind k : {SpaceKind::SphereQ, SpaceKind::PseudoSphereQ}) {
    const EigenFamily fam = catalog(AmbientSpace(k, 4));
    for (int i = 0; i < 20; ++i) {
      Rng rng = make_rng(15, static_cast<std::uint64_t>(i));
      const GroupElement g = random_group_element(fam.space, rng);
      const RealPoint z = draw(fam.space, 16, i);
      const RealPoint gz = group_act(fam.space, g, z);
      for (const auto& m : fam.members) CHECK(std::abs(m.value<double>(gz) - m.value<double>(z)) <= 1e-12);
    }
  }
}
