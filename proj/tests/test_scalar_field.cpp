#include "harmomorph/eigenfamily.hpp"
#include "harmomorph/parallel.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace harmomorph;

namespace {

RealPoint point_from(const std::vector<Cx>& z) {
  RealPoint p(2 * static_cast<Eigen::Index>(z.size()));
  for (std::size_t k = 0; k < z.size(); ++k) {
    p[2 * static_cast<Eigen::Index>(k)] = z[k].real();
    p[2 * static_cast<Eigen::Index>(k) + 1] = z[k].imag();
  }
  return p;
}

RealPoint draw(const AmbientSpace& space, std::uint64_t seed, int i) {
  Rng rng = make_rng(seed, static_cast<std::uint64_t>(i));
  return random_point(space, rng);
}

double group_error(const Eigen::MatrixXcd& got, const Eigen::MatrixXcd& want) {
  const double scale = std::max(1e-300, want.cwiseAbs().maxCoeff());
  return (got - want).cwiseAbs().maxCoeff() / scale;
}

} // namespace

TEST_CASE("monomial value and Wirtinger derivatives") {
  const ScalarField f = monomial(0, 3);
  const RealPoint p = point_from({1, 0, 0, Cx(0, 1), 0, 0});
  const Jet2d j = f.jet(p);
  CHECK(std::abs(j.value - Cx(0, -1)) < 1e-15);
  const WirtingerView w = wirtinger_view(j, 6);
  CHECK(std::abs(w.dz[0] - Cx(0, -1)) < 1e-15);
  CHECK(std::abs(w.dzbar[3] - Cx(1, 0)) < 1e-15);
  CHECK(std::abs(w.dz[3]) < 1e-15);
}

TEST_CASE("quadratic form value and gradient") {
  const ScalarField q = ScalarField::quadratic({1, 1});
  const RealPoint p{{1.0, 0.0, 0.0, 1.0}};
  const Jet2d j = q.jet(p);
  CHECK(j.value == Cx(2.0));
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(j.grad[i] == Cx(2.0 * p[i]));
  CHECK(j.hess.isApprox(Eigen::MatrixXcd(2.0 * Eigen::MatrixXcd::Identity(4, 4))));
}

TEST_CASE("normalized monomial on the 3-sphere matches finite differences") {
  const ScalarField f = monomial(0, 1) / ScalarField::quadratic({1, 1});
  const double r = 1.0 / std::sqrt(2.0);
  const RealPoint p = point_from({r, r});
  const Jet2d j = f.jet(p);
  CHECK(std::abs(j.value - 0.5) < 1e-15);
  const oracle::FdJet fd = oracle::fd_jet(f, p);
  CHECK((j.grad - fd.grad).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((j.hess - fd.hess).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("Wirtinger view of coordinates") {
  const RealPoint p = point_from({Cx(0.3, -0.2), Cx(1.1, 0.4)});
  const WirtingerView z = wirtinger_view(ScalarField::coord(0).jet(p), 2);
  CHECK(std::abs(z.dz[0] - 1.0) < 1e-15);
  CHECK(z.dzbar.norm() < 1e-15);
  CHECK(std::abs(z.dz[1]) < 1e-15);
  const WirtingerView zb = wirtinger_view(ScalarField::conj_coord(0).jet(p), 2);
  CHECK(zb.dz.norm() < 1e-15);
  CHECK(std::abs(zb.dzbar[0] - 1.0) < 1e-15);
  const WirtingerView sq = wirtinger_view(monomial(0, 0).jet(p), 2);
  CHECK(std::abs(sq.dzdzbar(0, 0) - 1.0) < 1e-15);
  CHECK_THROWS_AS(wirtinger_view(monomial(0, 0).jet(p), 3), DimensionMismatch);
}

TEST_CASE("quotient by a vanishing denominator throws") {
  const ScalarField f = ScalarField::coord(0) / ScalarField::coord(1);
  const RealPoint p = point_from({1, 0});
  CHECK_THROWS_AS((void)f.value<double>(p), DivisionByZero);
  CHECK_THROWS_AS((void)f.jet(p), DivisionByZero);
  CHECK_THROWS_AS((void)pow(ScalarField::coord(1), -1).value<double>(p), DivisionByZero);
}

TEST_CASE("first-order jets leave the Hessian empty") {
  const RealPoint p = point_from({Cx(0.5, 0.1), Cx(-0.2, 0.7)});
  const Jet2d j1 = monomial(0, 1).jet<double>(p, 1);
  CHECK(j1.hess.size() == 0);
  CHECK(j1.grad.isApprox(monomial(0, 1).jet(p).grad));
  const Jet2d j0 = monomial(0, 1).jet<double>(p, 0);
  CHECK(j0.grad.size() == 0);
}

TEST_CASE("catalog jets agree with central differences") {
  for (const auto& label : catalog_labels()) {
    for (int n : {2, 3}) {
      const EigenFamily fam = catalog_by_label(label, n);
      double worst = 0.0;
      for (int i = 0; i < 3; ++i) {
        const RealPoint p = draw(fam.space, 11, i);
        for (const auto& m : fam.members) {
          const Jet2d j = m.jet(p);
          const oracle::FdJet fd = oracle::fd_jet(m, p);
          worst = std::max({worst, group_error(j.grad, fd.grad), group_error(j.hess, fd.hess)});
        }
      }
      INFO(fam.name);
      CHECK(worst <= 1e-7);
    }
  }
}

TEST_CASE("product rule holds structurally") {
  const ScalarField f = monomial(0, 2) / ScalarField::quadratic({1, 1, 1});
  const ScalarField g = pow(ScalarField::coord(1), 3) - Cx(0.5, 2.0) * ScalarField::conj_coord(2);
  const ScalarField fg = f * g;
  for (int i = 0; i < 50; ++i) {
    const RealPoint p = draw(AmbientSpace(SpaceKind::FlatC, 2), 3, i).head(6);
    const Jet2d a = f.jet(p), b = g.jet(p), ab = fg.jet(p);
    const Eigen::MatrixXcd leibniz =
        a.hess * b.value + b.hess * a.value + a.grad * b.grad.transpose() + b.grad * a.grad.transpose();
    CHECK(std::abs(ab.value - a.value * b.value) <= 1e-12 * std::max(1.0, std::abs(ab.value)));
    CHECK((ab.grad - (a.grad * b.value + b.grad * a.value)).cwiseAbs().maxCoeff() <=
          1e-12 * std::max(1.0, ab.grad.cwiseAbs().maxCoeff()));
    CHECK((ab.hess - leibniz).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, ab.hess.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("conjugate field has the conjugate jet") {
  const ScalarField f = (monomial(0, 1) + Cx(0.0, 2.0) * pow(ScalarField::coord(1), 2)) /
                        (ScalarField::constant(Cx(1.0, 1.0)) + ScalarField::quadratic({1, -1}));
  const ScalarField g = conj(f);
  for (int i = 0; i < 20; ++i) {
    const RealPoint p = draw(AmbientSpace::basic_sphere(2), 5, i);
    const Jet2d a = f.jet(p), b = g.jet(p);
    CHECK(std::abs(b.value - std::conj(a.value)) <= 1e-14);
    CHECK((b.grad - a.grad.conjugate()).norm() <= 1e-13);
    CHECK((b.hess - a.hess.conjugate()).norm() <= 1e-12);
  }
}

TEST_CASE("real exponents follow the principal branch") {
  const ScalarField q = ScalarField::quadratic({1, 1});
  const RealPoint p = point_from({Cx(3, 0), Cx(0, 4)});
  CHECK(std::abs(pow(q, -0.5).value<double>(p) - 0.2) < 1e-15);
  CHECK(std::abs(pow(q, 0.5).value<double>(p) - 5.0) < 1e-14);
  const oracle::FdJet fd = oracle::fd_jet(pow(q, -0.5), p);
  CHECK((pow(q, -0.5).jet(p).hess - fd.hess).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("double and long double evaluations agree") {
  const EigenFamily fam = catalog(AmbientSpace(SpaceKind::PseudoSphere, 2));
  const RealPoint p = random_point(fam.space, 9);
  for (const auto& m : fam.members) {
    const auto wide = m.value<long double>(p.cast<long double>());
    const Cx narrow = m.value<double>(p);
    CHECK(std::abs(Cx(static_cast<double>(wide.real()), static_cast<double>(wide.imag())) - narrow) <= 1e-13);
  }
}

TEST_CASE("concurrent evaluation is reentrant and deterministic") {
  const EigenFamily fam = catalog(AmbientSpace(SpaceKind::Sphere, 3));
  const ScalarField f = linear_combination({1.0, Cx(0, 2), -3.0}, {fam.members[0], fam.members[4], fam.members[8]});
  std::vector<RealPoint> points;
  for (int i = 0; i < 64; ++i) points.push_back(draw(fam.space, 21, i));
  std::vector<Jet2d> serial;
  for (const auto& p : points) serial.push_back(f.jet(p));
  std::vector<Jet2d> parallel(points.size());
  parallel_for(points.size(), [&](std::size_t i) { parallel[i] = f.jet(points[i]); });
  for (std::size_t i = 0; i < points.size(); ++i) {
    CHECK(parallel[i].value == serial[i].value);
    CHECK(parallel[i].hess == serial[i].hess);
  }
}

TEST_CASE("fields print in closed form") {
  CHECK(monomial(0, 3).to_string() == "z1*conj(z4)");
  CHECK(monomial(0, 3).max_coordinate() == 3);
  CHECK(ScalarField::constant(2.0).max_coordinate() == -1);
}
