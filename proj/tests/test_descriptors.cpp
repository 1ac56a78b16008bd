#include <doctest.h>

#include <cmath>
#include <random>

#include "cgpt3d/descriptors.hpp"
#include "cgpt3d/errors.hpp"
#include "support.hpp"

using namespace cgpt3d;
using namespace testing_support;

namespace {

/// Exact CGPTs of a ball: diagonal with the sphere spectrum.
CgptBlockMatrix ball_cgpt(int order, double lambda, double radius) {
  CgptBlockMatrix m(order, lambda, Provenance::Computed);
  for (int n = 1; n <= order; ++n)
    m.set_block(n, n, CMatrix::Identity(2 * n + 1, 2 * n + 1) *
                          (std::pow(radius, 2 * n + 1) * n / (lambda - 1.0 / (2.0 * (2 * n + 1)))));
  return m;
}

const CgptBlockMatrix& ellipsoid_cgpt() {
  static const CgptBlockMatrix m = compute_cgpt(make_ellipsoid(1.0, 0.6, 0.4, 2), 3.0, 3);
  return m;
}

const CgptBlockMatrix& box_cgpt() {
  static const CgptBlockMatrix m = compute_cgpt(make_box(1.0, 0.7, 0.4, 2), 3.0, 3);
  return m;
}

}  // namespace

TEST_SUITE("descriptors") {
  TEST_CASE("U matrix") {
    const CgptBlockMatrix ball = ball_cgpt(3, 3.0, 1.0);
    CHECK(compute_u_matrix(ball).norm() == 0.0);
    std::mt19937_64 rng(51);
    const Vec3 z = random_in_ball(rng, 2.0);
    CHECK(rel_diff(compute_u_matrix(transform_shift(ball, z)), g_matrix(2, 1, z).conjugate()) < 1e-14);

    const CgptBlockMatrix& m = box_cgpt();
    const CMatrix u = compute_u_matrix(m);
    for (int i = 0; i < 5; ++i) {
      const RigidScaleTransform t = random_transform(rng);
      const CMatrix expected = g_matrix(2, 1, t.shift).conjugate() +
                               t.scale * wigner_q_matrix(2, t.angles).conjugate() * u *
                                   wigner_q_matrix(1, t.angles).transpose();
      CHECK(rel_diff(compute_u_matrix(transform_full(m, t)), expected) < 1e-12);
    }
    CHECK_THROWS_AS(compute_u_matrix(ball_cgpt(1, 3.0, 1.0)), ValidationError);
    CHECK_THROWS_AS(compute_u_matrix(CgptBlockMatrix(2, 3.0, Provenance::Computed)), NumericalError);
  }

  TEST_CASE("u map") {
    // z = (1, 0, 0) by hand.
    const double r5 = std::sqrt(5.0);
    CMatrix u = CMatrix::Zero(5, 3);
    u(0, 0) = -r5;
    u(1, 1) = -std::sqrt(2.5);
    u(2, 0) = std::sqrt(5.0 / 6.0);
    u(2, 2) = -std::sqrt(5.0 / 6.0);
    u(3, 1) = std::sqrt(2.5);
    u(4, 2) = r5;
    CHECK((g_matrix(2, 1, Vec3(1, 0, 0)).conjugate() - u).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((u_map(u) - Eigen::Vector3cd(1.0, 0.0, 0.0)).norm() < 1e-15);

    std::mt19937_64 rng(52);
    for (int i = 0; i < 100; ++i) {
      const Vec3 z = random_vec(rng, 2.0);
      CHECK((u_map(g_matrix(2, 1, z).conjugate()) - z.cast<Complex>()).norm() < 1e-13 * std::max(1.0, z.norm()));
      const CMatrix a = random_cmatrix(rng, 5, 3);
      const CMatrix b = random_cmatrix(rng, 5, 3);
      const EulerAngles e = random_angles(rng);
      const CMatrix rotated = wigner_q_matrix(2, e).conjugate() * a * wigner_q_matrix(1, e).transpose();
      const Eigen::Vector3cd lhs = u_map(rotated);
      const Eigen::Vector3cd rhs = euler_rotation_matrix(e).cast<Complex>() * u_map(a);
      CHECK((lhs - rhs).norm() < 1e-12 * a.norm());
      const Complex ca(0.3, 1.1), cb(-2.0, 0.4);
      CHECK((u_map(ca * a + cb * b) - (ca * u_map(a) + cb * u_map(b))).norm() < 1e-14 * a.norm() * 3.0);
    }
    CHECK_THROWS_AS(u_map(CMatrix::Zero(3, 5)), ValidationError);
  }

  TEST_CASE("registration point") {
    const CgptBlockMatrix ball = ball_cgpt(3, 3.0, 0.8);
    CHECK(registration_point(ball).u.norm() == 0.0);
    std::mt19937_64 rng(53);
    const Vec3 z = random_in_ball(rng, 2.0);
    const RegistrationPoint p = registration_point(transform_shift(ball, z));
    CHECK((p.u - z).norm() < 1e-10);
    CHECK(p.reliable);

    const CgptBlockMatrix& m = ellipsoid_cgpt();
    const RegistrationPoint base = registration_point(m);
    CHECK(base.reliable);
    for (int i = 0; i < 10; ++i) {
      const RigidScaleTransform t = random_transform(rng);
      const Vec3 expected = t.shift + t.scale * euler_rotation_matrix(t.angles) * base.u;
      CHECK((registration_point(transform_full(m, t)).u - expected).norm() < 1e-10);
    }
    // Registration fixed point.
    CHECK(registration_point(compute_j(transform_full(m, random_transform(rng)))).u.norm() < 1e-10);
  }

  TEST_CASE("J blocks") {
    const CgptBlockMatrix ball = ball_cgpt(3, 3.0, 1.0);
    const CgptBlockMatrix jb = compute_j(ball);
    CHECK(jb.provenance() == Provenance::Registered);
    CHECK(rel_diff(jb.matrix(), ball.matrix()) < 1e-15);

    std::mt19937_64 rng(54);
    const CgptBlockMatrix& m = box_cgpt();
    const CgptBlockMatrix j = compute_j(m);
    for (int i = 0; i < 5; ++i) {
      const Vec3 z = random_in_ball(rng, 2.0);
      CHECK(rel_diff(compute_j(transform_shift(m, z)).matrix(), j.matrix()) < 1e-10);
      const double s = uniform(rng, 0.5, 2.0);
      const CgptBlockMatrix js = compute_j(transform_scale(m, s));
      for (int l = 1; l <= 3; ++l)
        for (int n = 1; n <= 3; ++n)
          CHECK((js.block(l, n) - std::pow(s, l + n + 1) * j.block(l, n)).norm() <
                1e-10 * std::pow(s, l + n + 1) * j.matrix().norm());
    }
  }

  TEST_CASE("S blocks") {
    std::mt19937_64 rng(55);
    CMatrix h = random_cmatrix(rng, 15, 15);
    const SBlocks any = compute_s(CgptBlockMatrix(3, 3.0, Provenance::Computed, h));
    for (int n = 1; n <= 3; ++n)
      CHECK((any[n - 1][n - 1] - CMatrix::Identity(2 * n + 1, 2 * n + 1)).norm() < 1e-12);

    const CgptBlockMatrix& m = ellipsoid_cgpt();
    const SBlocks s = compute_s(compute_j(m));
    for (int i = 0; i < 5; ++i) {
      RigidScaleTransform t;
      t.scale = uniform(rng, 0.5, 2.0);
      t.shift = random_in_ball(rng, 2.0);
      const SBlocks st = compute_s(compute_j(transform_full(m, t)));
      const EulerAngles e = random_angles(rng);
      const SBlocks sr = compute_s(compute_j(transform_rotate(m, e)));
      for (int l = 1; l <= 3; ++l)
        for (int n = 1; n <= 3; ++n) {
          CHECK((st[l - 1][n - 1] - s[l - 1][n - 1]).norm() < 1e-10);
          const CMatrix q = wigner_q_matrix(n, e);
          CHECK((sr[l - 1][n - 1] - q.conjugate() * s[l - 1][n - 1] * q.transpose()).norm() < 1e-10);
        }
    }
    CgptBlockMatrix singular = m;
    singular.set_block(2, 2, CMatrix::Zero(5, 5));
    CHECK_THROWS_WITH_AS(compute_s(singular), doctest::Contains("J_(2,2)"), NumericalError);
  }

  TEST_CASE("descriptor") {
    const ShapeDescriptor ball = compute_descriptor(ball_cgpt(3, 3.0, 1.0));
    for (int n = 1; n <= 3; ++n) CHECK(std::abs(ball.I(n - 1, n - 1) - std::sqrt(2.0 * n + 1.0)) < 1e-12);
    for (int l = 0; l < 3; ++l)
      for (int n = 0; n < 3; ++n)
        if (l != n) CHECK(ball.I(l, n) == 0.0);

    const ShapeDescriptor sphere = compute_descriptor(compute_cgpt(make_sphere(1.0, 2), 3.0, 3));
    for (int l = 0; l < 3; ++l)
      for (int n = 0; n < 3; ++n)
        if (l != n) CHECK(sphere.I(l, n) < 1e-2);

    std::mt19937_64 rng(56);
    const CgptBlockMatrix& m = box_cgpt();
    const ShapeDescriptor d = compute_descriptor(m);
    CHECK(d.order == 3);
    CHECK(d.lambda == 3.0);
    for (int i = 0; i < 10; ++i) {
      const ShapeDescriptor dt = compute_descriptor(transform_full(m, random_transform(rng)));
      CHECK((dt.I - d.I).cwiseAbs().maxCoeff() < 1e-8);
      const ShapeDescriptor dr = compute_descriptor(transform_rotate(m, random_angles(rng)));
      CHECK((dr.I - d.I).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  TEST_CASE("dictionary") {
    const ShapeDescriptor e = compute_descriptor(ellipsoid_cgpt());
    const ShapeDescriptor b = compute_descriptor(box_cgpt());
    const Dictionary dict = dict_build({{"ellipsoid", e, "e.off"}, {"box", b, "b.off"}});
    CHECK(dict.order == 3);
    const auto ranking = dict_match(b, dict);
    REQUIRE(ranking.size() == 2);
    CHECK(ranking[0].name == "box");
    CHECK(ranking[0].distance == 0.0);
    CHECK(ranking[1].distance > 0.0);

    const Dictionary twins = dict_build({{"b2", b, ""}, {"b1", b, ""}});
    CHECK(dict_match(b, twins)[0].name == "b1");

    CHECK_THROWS_AS(dict_build({}), ValidationError);
    CHECK_THROWS_AS(dict_build({{"x", e, ""}, {"x", b, ""}}), ValidationError);
    ShapeDescriptor other = b;
    other.lambda = 5.0;
    CHECK_THROWS_AS(dict_build({{"x", e, ""}, {"y", other, ""}}), ValidationError);
    CHECK_THROWS_AS(dict_match(other, dict), ValidationError);
    CHECK_THROWS_AS(dict_match(b, Dictionary{}), ValidationError);
  }
}
