#include <doctest.h>

#include "helpers.hpp"
#include "mwarp/qsphere.hpp"
#include "mwarp/se2.hpp"
#include "mwarp/sphere.hpp"

using namespace testing;

namespace {

Point p3(double x, double y, double z) { return Point{Eigen::Vector3d(x, y, z)}; }
TangentVector t3(const Point& base, double x, double y, double z) {
  return TangentVector{base, Eigen::Vector3d(x, y, z)};
}

PlanarCurve circle(int n, double radius, Eigen::Vector2d center = Eigen::Vector2d::Zero()) {
  PlanarCurve c{Eigen::Matrix2Xd(2, n)};
  for (int i = 0; i < n; ++i) {
    const double s = 2.0 * kPi * i / n;
    c.samples.col(i) = center + radius * Eigen::Vector2d(std::cos(s), std::sin(s));
  }
  return c;
}

PlanarCurve blob(int n) {
  PlanarCurve c{Eigen::Matrix2Xd(2, n)};
  for (int i = 0; i < n; ++i) {
    const double s = 2.0 * kPi * i / n;
    const double r = 1.0 + 0.3 * std::cos(2 * s) + 0.1 * std::sin(3 * s);
    c.samples.col(i) << r * std::cos(s), r * std::sin(s);
  }
  return c;
}

}  // namespace

TEST_SUITE("manifold core") {
  TEST_CASE("exp of the zero vector is the identity") {
    std::mt19937_64 rng(1);
    for (const auto& m : all_geometries()) {
      const Point p = random_point(*m, rng);
      CHECK(max_abs(m->exp(p, m->zero(p)).coords - p.coords) == 0.0);
    }
  }

  TEST_CASE("log of a point at itself is zero and dist is zero") {
    std::mt19937_64 rng(2);
    for (const auto& m : all_geometries()) {
      const Point p = random_point(*m, rng);
      CHECK(m->norm(p, m->log(p, p)) < 1e-12);
      CHECK(m->dist(p, p) < 1e-12);
    }
  }

  TEST_CASE("round trip exp(p, log(p, q)) = q away from the cut locus") {
    std::mt19937_64 rng(3);
    for (const auto& m : all_geometries()) {
      int tested = 0;
      while (tested < 300) {
        const Point p = random_point(*m, rng);
        const Point q = random_point(*m, rng);
        if (m->kind() == ManifoldKind::se2) {
          const double dtheta = std::abs(std::remainder(SE2::heading(p.coords) - SE2::heading(q.coords), 2 * kPi));
          if (dtheta > kPi - 0.1) continue;
        } else if (m->dist(p, q) > kPi - 0.1) {
          continue;
        }
        const TangentVector v = m->log(p, q);
        CHECK(m->dist(m->exp(p, v), q) <= 1e-8);
        CHECK(m->norm(p, v) == doctest::Approx(m->dist(p, q)).epsilon(1e-10));
        CHECK(m->is_tangent(v));
        ++tested;
      }
    }
  }

  TEST_CASE("transport is an isometry and preserves inner products") {
    std::mt19937_64 rng(4);
    for (const auto& m : all_geometries()) {
      int tested = 0;
      while (tested < 1000) {
        const Point p = random_point(*m, rng);
        const Point q = random_point(*m, rng);
        if (m->kind() != ManifoldKind::se2 && m->dist(p, q) > kPi - 0.1) continue;
        const TangentVector v{p, random_tangent(*m, p.coords, rng, 3.0)};
        const TangentVector w{p, random_tangent(*m, p.coords, rng, 3.0)};
        const TangentVector tv = m->transport(v, p, q);
        const TangentVector tw = m->transport(w, p, q);
        CHECK(std::abs(m->norm(q, tv) - m->norm(p, v)) <= 1e-8);
        CHECK(std::abs(m->inner(q, tv, tw) - m->inner(p, v, w)) <= 1e-8);
        CHECK(m->is_tangent(tv));
        ++tested;
      }
    }
  }

  TEST_CASE("transport to the same point is the identity") {
    std::mt19937_64 rng(5);
    for (const auto& m : all_geometries()) {
      const Point p = random_point(*m, rng);
      const TangentVector v{p, random_tangent(*m, p.coords, rng, 2.0)};
      CHECK(max_abs(m->transport(v, p, p).components - v.components) <= 1e-14);
    }
  }

  TEST_CASE("inner is symmetric, bilinear and positive definite") {
    std::mt19937_64 rng(6);
    for (const auto& m : all_geometries()) {
      const Point p = random_point(*m, rng);
      const TangentVector v{p, random_tangent(*m, p.coords, rng, 2.0)};
      const TangentVector w{p, random_tangent(*m, p.coords, rng, 2.0)};
      const TangentVector v2{p, 2.0 * v.components};
      CHECK(m->inner(p, v, w) == doctest::Approx(m->inner(p, w, v)));
      CHECK(m->inner(p, v2, w) == doctest::Approx(2.0 * m->inner(p, v, w)));
      CHECK(m->inner(p, v, v) >= 0.0);
      CHECK(m->inner(p, m->zero(p), m->zero(p)) == 0.0);
      CHECK(m->norm(p, v) == doctest::Approx(std::sqrt(m->inner(p, v, v))));
    }
  }

  TEST_CASE("tangent bases are metric-orthonormal and tangent") {
    std::mt19937_64 rng(7);
    for (const auto& m : all_geometries()) {
      const Point p = random_point(*m, rng);
      const Eigen::MatrixXd b = m->tangent_basis(p.coords);
      REQUIRE(b.cols() == m->dim());
      const Eigen::MatrixXd gram = b.transpose() * m->metric_weights().asDiagonal() * b;
      CHECK(max_abs(gram - Eigen::MatrixXd::Identity(b.cols(), b.cols())) < 1e-10);
      for (Eigen::Index k = 0; k < b.cols(); ++k) CHECK(m->is_tangent(TangentVector{p, b.col(k)}));
    }
  }

  TEST_CASE("operations reject tangent vectors based elsewhere") {
    auto m = s2();
    const Point p = p3(1, 0, 0);
    const Point q = p3(0, 1, 0);
    const TangentVector v = t3(q, 1, 0, 0);
    CHECK_THROWS_AS(m->exp(p, v), BaseMismatchError);
    CHECK_THROWS_AS(m->transport(v, p, q), BaseMismatchError);
    CHECK_THROWS_AS(m->inner(p, v, v), BaseMismatchError);
  }

  TEST_CASE("manifold names parse") {
    CHECK(parse_manifold_kind("s2") == ManifoldKind::sphere);
    CHECK(parse_manifold_kind("se2") == ManifoldKind::se2);
    CHECK(parse_manifold_kind("qsphere") == ManifoldKind::qsphere);
    CHECK_THROWS_AS(parse_manifold_kind("torus"), std::invalid_argument);
  }
}

TEST_SUITE("sphere") {
  TEST_CASE("quarter great circle") {
    auto m = s2();
    const Point p = p3(1, 0, 0);
    const Point q = m->exp(p, t3(p, 0, kPi / 2, 0));
    CHECK(max_abs(q.coords - Eigen::Vector3d(0, 1, 0)) < 1e-15);
    const Point q2 = m->exp(p, t3(p, 0, 0.5 * kPi, 0));
    CHECK(max_abs(q2.coords - Eigen::Vector3d(0, 1, 0)) < 1e-15);
    const TangentVector v = m->log(p, p3(0, 1, 0));
    CHECK(max_abs(v.components - Eigen::Vector3d(0, kPi / 2, 0)) < 1e-15);
  }

  TEST_CASE("distances") {
    auto m = s2();
    CHECK(m->dist(p3(0, 0, 1), p3(0, 0, 1)) == 0.0);
    CHECK(m->dist(p3(1, 0, 0), p3(0, 1, 0)) == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK(m->dist(p3(1, 0, 0), p3(-1, 0, 0)) == doctest::Approx(kPi).epsilon(1e-15));
  }

  TEST_CASE("antipodal log and transport raise CutLocusError") {
    auto m = s2();
    const Point p = p3(0, 0, 1);
    CHECK_THROWS_AS(m->log(p, p3(0, 0, -1)), CutLocusError);
    CHECK_THROWS_AS(m->transport(t3(p, 1, 0, 0), p, p3(0, 0, -1)), CutLocusError);
    // 1e-5 rad short of the antipode is still accepted
    const Point near = m->exp(p, t3(p, kPi - 1e-5, 0, 0));
    CHECK_NOTHROW(m->log(p, near));
  }

  TEST_CASE("closed-form transport examples") {
    auto m = s2();
    const Point p = p3(1, 0, 0);
    const Point q = p3(0, 1, 0);
    CHECK(max_abs(m->transport(t3(p, 0, 1, 0), p, q).components - Eigen::Vector3d(-1, 0, 0)) < 1e-15);
    CHECK(max_abs(m->transport(t3(p, 0, 0, 1), p, q).components - Eigen::Vector3d(0, 0, 1)) < 1e-15);
  }

  TEST_CASE("geodesic consistency: dist(p, exp(p, t u)) = t") {
    std::mt19937_64 rng(8);
    auto m = s2();
    for (int k = 0; k < 200; ++k) {
      const Point p = random_point(*m, rng);
      Eigen::VectorXd u = random_tangent(*m, p.coords, rng, 1.0);
      u.normalize();
      const double t = uniform(rng, 0.01, kPi - 0.01);
      CHECK(m->dist(p, Point{m->exp_coords(p.coords, t * u)}) == doctest::Approx(t).epsilon(1e-10));
    }
  }

  TEST_CASE("transport preserves the angle to the geodesic direction") {
    std::mt19937_64 rng(9);
    auto m = s2();
    for (int k = 0; k < 200; ++k) {
      const Point p = random_point(*m, rng);
      const Point q = random_point(*m, rng);
      if (m->dist(p, q) > kPi - 0.1 || m->dist(p, q) < 1e-3) continue;
      const TangentVector v{p, random_tangent(*m, p.coords, rng, 2.0)};
      const Eigen::VectorXd dir_p = m->log_coords(p.coords, q.coords).normalized();
      const Eigen::VectorXd dir_q = -m->log_coords(q.coords, p.coords).normalized();
      const Eigen::VectorXd tv = m->transport(v, p, q).components;
      CHECK(std::abs(v.components.dot(dir_p) - tv.dot(dir_q)) <= 1e-8);
    }
  }

  TEST_CASE("geographic convention") {
    CHECK(max_abs(from_geographic(90, 17).coords - Eigen::Vector3d(0, 0, 1)) < 1e-15);
    CHECK(max_abs(from_geographic(0, 0).coords - Eigen::Vector3d(1, 0, 0)) < 1e-15);
    CHECK(max_abs(from_geographic(0, 90).coords - Eigen::Vector3d(0, 1, 0)) < 1e-15);
    const Eigen::Vector2d ll = to_geographic(from_geographic(28.5, -94.8));
    CHECK(ll(0) == doctest::Approx(28.5).epsilon(1e-12));
    CHECK(ll(1) == doctest::Approx(-94.8).epsilon(1e-12));
  }

  TEST_CASE("points off the sphere are not contained") {
    auto m = s2();
    CHECK(m->contains(p3(0, 0, 1)));
    CHECK_FALSE(m->contains(p3(0, 0, 1.001)));
    CHECK_FALSE(m->is_tangent(t3(p3(0, 0, 1), 0, 0.1, 0.1)));
  }
}

TEST_SUITE("se2") {
  TEST_CASE("translation part is Euclidean") {
    auto m = se2();
    const Point p = SE2::make_point(0, 0, 0);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(6);
    v(4) = 3;
    v(5) = 4;
    const Point q = m->exp(p, TangentVector{p, v});
    CHECK(max_abs(q.coords - SE2::make_point(0, 3, 4).coords) < 1e-15);
    CHECK(m->dist(p, SE2::make_point(0, 3, 4)) == doctest::Approx(5.0));
    CHECK(m->dist(p, p) == 0.0);
  }

  TEST_CASE("rotation distance uses the trace metric") {
    auto m = se2();
    CHECK(m->dist(SE2::make_point(0, 0, 0), SE2::make_point(kPi / 2, 0, 0)) ==
          doctest::Approx(std::sqrt(2.0) * kPi / 2));
  }

  TEST_CASE("inner product of a skew generator") {
    auto m = se2();
    std::mt19937_64 rng(10);
    const Point p = random_point(*m, rng);
    Eigen::Matrix2d a;
    a << 0, -1, 1, 0;
    const Eigen::Matrix2d x = SE2::rotation(p.coords) * a;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(6);
    v << x(0, 0), x(0, 1), x(1, 0), x(1, 1), 0, 0;
    const TangentVector tv{p, v};
    CHECK(m->inner(p, tv, tv) == doctest::Approx(2.0));
  }

  TEST_CASE("transport to the identity rotation is O^T W; translation is unchanged") {
    auto m = se2();
    const double theta = 0.7;
    const Point p = SE2::make_point(theta, 1, 2);
    const Point q = SE2::make_point(0, -3, 5);
    Eigen::Matrix2d a;
    a << 0, -0.4, 0.4, 0;
    const Eigen::Matrix2d w = rotation2d(theta) * a;
    Eigen::VectorXd v(6);
    v << w(0, 0), w(0, 1), w(1, 0), w(1, 1), 3, 4;
    const Eigen::VectorXd out = m->transport(TangentVector{p, v}, p, q).components;
    const Eigen::Matrix2d expected = rotation2d(theta).transpose() * w;
    CHECK(std::abs(out(0) - expected(0, 0)) < 1e-15);
    CHECK(std::abs(out(1) - expected(0, 1)) < 1e-15);
    CHECK(std::abs(out(2) - expected(1, 0)) < 1e-15);
    CHECK(std::abs(out(3) - expected(1, 1)) < 1e-15);
    CHECK(out(4) == 3.0);
    CHECK(out(5) == 4.0);
  }

  TEST_CASE("distance splits into rotation and translation factors") {
    std::mt19937_64 rng(11);
    for (const double w : {1.0, 2.5}) {
      auto m = se2(w);
      for (int k = 0; k < 200; ++k) {
        const Point p = random_point(*m, rng);
        const Point q = random_point(*m, rng);
        const double dtheta = std::remainder(SE2::heading(q.coords) - SE2::heading(p.coords), 2 * kPi);
        const double dx2 = (q.coords.tail<2>() - p.coords.tail<2>()).squaredNorm();
        const double d = m->dist(p, q);
        CHECK(d * d == doctest::Approx(2 * dtheta * dtheta + w * dx2).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("log near a half turn raises CutLocusError") {
    auto m = se2();
    CHECK_THROWS_AS(m->log(SE2::make_point(0, 0, 0), SE2::make_point(kPi, 1, 0)), CutLocusError);
    CHECK_NOTHROW(m->log(SE2::make_point(0, 0, 0), SE2::make_point(kPi - 1e-4, 1, 0)));
  }

  TEST_CASE("drifted rotations are re-orthonormalized") {
    auto m = se2();
    Eigen::VectorXd x = SE2::make_point(0.3, 1, 1).coords;
    x(0) += 1e-7;
    const Eigen::VectorXd y = m->project_point(x);
    CHECK(m->contains(Point{y}));
    CHECK(SE2::heading(y) == doctest::Approx(0.3).epsilon(1e-6));
  }
}

TEST_SUITE("qsphere") {
  TEST_CASE("q-function of a circle") {
    const int n = 100;
    const PlanarCurve c = circle(n, 1.0 / (2 * kPi));
    const Point q = q_function(c, n);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const double s = 2 * kPi * i / n;
      worst = std::max(worst, std::abs(q.coords(2 * i) + std::sin(s)));
      worst = std::max(worst, std::abs(q.coords(2 * i + 1) - std::cos(s)));
    }
    // central differences shrink |beta'| by sin(h)/h before normalization
    CHECK(worst < 1e-12);
    QSphere m(n);
    CHECK(m.inner_coords(q.coords, q.coords) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(max_abs(q.coords - m.default_reference().coords) < 1e-12);
  }

  TEST_CASE("translation and scale do not change the q-function") {
    const Point q = q_function(blob(160), 50);
    PlanarCurve moved = blob(160);
    moved.samples = (3.5 * moved.samples).colwise() + Eigen::Vector2d(5, 7);
    CHECK(max_abs(q_function(moved, 50).coords - q.coords) < 1e-8);
  }

  TEST_CASE("q-functions have unit norm") {
    QSphere m(60);
    for (int n : {20, 57, 200}) {
      const Point q = q_function(blob(n), 60);
      CHECK(std::abs(m.inner_coords(q.coords, q.coords) - 1.0) < 1e-8);
      CHECK(m.contains(q));
    }
  }

  TEST_CASE("discretization convergence in the number of samples") {
    // Compare q-functions of the same analytic curve at n and 2n points by
    // evaluating both at the shared nodes; the gap shrinks like 1/n or faster.
    auto gap = [](int n) {
      const Point a = q_function(blob(4000), n);
      const Point b = q_function(blob(4000), 2 * n);
      double worst = 0.0;
      for (int i = 0; i < n; ++i) {
        worst = std::max(worst, (a.coords.segment<2>(2 * i) - b.coords.segment<2>(4 * i)).norm());
      }
      return worst;
    };
    const double g1 = gap(25);
    const double g2 = gap(50);
    CHECK(g2 < 0.6 * g1);
  }

  TEST_CASE("antipodal q-functions are at distance pi") {
    QSphere m(40);
    const Point q = q_function(blob(80), 40);
    const Point neg{-q.coords};
    CHECK(m.dist(q, q) == 0.0);
    CHECK(m.dist(q, neg) == doctest::Approx(kPi));
    CHECK_THROWS_AS(m.log(q, neg), CutLocusError);
    std::mt19937_64 rng(3);
    const TangentVector v{q, random_tangent(m, q.coords, rng, 1.0)};
    CHECK(max_abs(m.transport(v, q, q).components - v.components) < 1e-14);
  }

  TEST_CASE("degenerate curves are rejected") {
    PlanarCurve c{Eigen::Matrix2Xd::Zero(2, 10)};
    CHECK_THROWS_AS(q_function(c, 20), DegenerateCurveError);
    PlanarCurve two{Eigen::Matrix2Xd(2, 4)};
    two.samples << 0, 1, 0, 1, 0, 0, 0, 0;
    CHECK_THROWS_AS(q_function(two, 20), DegenerateCurveError);
    CHECK_THROWS_AS(QSphere(4), std::invalid_argument);
  }

  TEST_CASE("rotation alignment") {
    const int n = 50;
    QSphere m(n);
    const Point q1 = q_function(blob(200), n);
    const auto [r_same, same] = rotation_align(q1, q1);
    CHECK(max_abs(r_same - Eigen::Matrix2d::Identity()) < 1e-12);

    const double theta = 0.9;
    Point q2 = q1;
    for (int i = 0; i < n; ++i) q2.coords.segment<2>(2 * i) = rotation2d(theta) * q1.coords.segment<2>(2 * i);
    const auto [r, aligned] = rotation_align(q1, q2);
    CHECK(max_abs(r - rotation2d(-theta)) < 1e-10);
    CHECK(m.dist(q1, aligned) <= 1e-8);
    CHECK(r.determinant() == doctest::Approx(1.0));

    std::mt19937_64 rng(12);
    for (int k = 0; k < 50; ++k) {
      const Point a = random_point(m, rng);
      const Point b = random_point(m, rng);
      CHECK(m.dist(a, rotation_align(a, b).second) <= m.dist(a, b) + 1e-12);
    }
  }

  TEST_CASE("resampling drops duplicate points") {
    PlanarCurve c = circle(30, 2.0);
    PlanarCurve dup{Eigen::Matrix2Xd(2, 32)};
    dup.samples << c.samples.leftCols(10), c.samples.col(9), c.samples.rightCols(20), c.samples.col(0);
    CHECK(max_abs(q_function(dup, 40).coords - q_function(c, 40).coords) < 1e-12);
  }
}
