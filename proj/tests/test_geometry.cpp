#include <catch2/catch_amalgamated.hpp>

#include "schmidt/geometry.hpp"

using namespace schmidt;

using P1 = TorusPoint<double>;

TEST_CASE("torus distance basics") {
  CHECK(torus_distance(P1(0.1), P1(0.9)) == Catch::Approx(0.2).margin(1e-15));
  CHECK(torus_distance(P1(0.37), P1(0.37)) == 0.0);
  CHECK(torus_distance(TorusPoint<double>(0.0, 0.0), TorusPoint<double>(0.5, 0.5)) ==
        Catch::Approx(std::sqrt(0.5)).margin(1e-15));
  CHECK_THROWS_AS(torus_distance(P1(0.1), TorusPoint<double>(0.1, 0.2)), std::invalid_argument);
}

TEST_CASE("normalization is idempotent and lands in [0,1)") {
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    P1 p(rng.uniform(-40, 40));
    P1 q = normalize(p);
    CHECK(q[0] >= 0.0);
    CHECK(q[0] < 1.0);
    P1 r = normalize(q);
    CHECK(r[0] == q[0]);
  }
}

TEST_CASE("ball containment examples") {
  MetricBall<double> outer(P1(0.5), 0.3 / 8), inner(P1(0.5 + 0.1 / 8), 0.1 / 8);
  // scaled to stay inside the 1/8 radius regime the engines run in
  CHECK(ball_contains_ball(outer, inner));
  CHECK(ball_contains_ball(outer, outer));
  MetricBall<double> a(P1(0.5), 0.2 / 8), b(P1(0.5 + 0.1 / 8), 0.15 / 8);
  CHECK_FALSE(ball_contains_ball(a, b));
}

TEST_CASE("ball intersection examples") {
  CHECK_FALSE(ball_intersects_ball(MetricBall<double>(P1(0.0), 0.02),
                                   MetricBall<double>(P1(0.5), 0.02)));
  CHECK(ball_intersects_ball(MetricBall<double>(P1(0.3), 0.05),
                             MetricBall<double>(P1(0.3), 0.01)));
  // boundary touch counts as intersecting
  CHECK(ball_intersects_ball(MetricBall<double>(P1(0.1), 0.01),
                             MetricBall<double>(P1(0.13), 0.02)));
}

TEST_CASE("quotient metric diameter bound") {
  Rng rng(7);
  for (int i = 0; i < 5000; ++i) {
    P1 x(rng.u01()), y(rng.u01());
    CHECK(torus_distance(x, y) <= 0.5 + 1e-15);
    TorusPoint<double> u(rng.u01(), rng.u01()), v(rng.u01(), rng.u01());
    CHECK(torus_distance(u, v) <= 0.5 * std::sqrt(2.0) + 1e-15);
  }
}

TEST_CASE("containment is transitive and implies intersection") {
  Rng rng(23);
  int checked = 0;
  while (checked < 2000) {
    MetricBall<double> A(P1(rng.u01()), rng.uniform(0.01, 0.12));
    MetricBall<double> B(P1(rng.u01()), rng.uniform(0.001, A.radius));
    MetricBall<double> C(P1(rng.u01()), rng.uniform(0.0005, B.radius));
    if (!ball_contains_ball(A, B) || !ball_contains_ball(B, C)) continue;
    ++checked;
    CHECK(ball_contains_ball(A, C));
    CHECK(ball_intersects_ball(A, B));
  }
}

// randomized oracle: containment agrees with sampling the inner ball boundary
TEST_CASE("containment matches boundary sampling") {
  Rng rng(99);
  const int kPairs = 10000, kBoundary = 1000;
  int disagreements = 0;
  for (int i = 0; i < kPairs; ++i) {
    int dim = (i % 2) + 1;
    double ro = rng.uniform(0.01, 0.12), ri = rng.uniform(0.001, 0.12);
    TorusPoint<double> co, ci;
    if (dim == 1) {
      co = P1(rng.u01());
      ci = P1(wrap_unit(co[0] + rng.uniform(-0.2, 0.2)));
    } else {
      co = TorusPoint<double>(rng.u01(), rng.u01());
      ci = TorusPoint<double>(wrap_unit(co[0] + rng.uniform(-0.15, 0.15)),
                              wrap_unit(co[1] + rng.uniform(-0.15, 0.15)));
    }
    MetricBall<double> outer(co, ro), inner(ci, ri);
    bool predicate = ball_contains_ball(outer, inner);
    // sample the inner boundary; all samples inside <=> containment
    bool sampled = true;
    int nb = i < 200 ? kBoundary : 64;  // full density on a prefix, light elsewhere
    for (int s = 0; s < nb && sampled; ++s) {
      TorusPoint<double> p;
      if (dim == 1) {
        p = P1(wrap_unit(ci[0] + (s % 2 ? ri : -ri)));
      } else {
        double t = 2 * 3.14159265358979323846 * s / nb;
        p = TorusPoint<double>(wrap_unit(ci[0] + ri * std::cos(t)), wrap_unit(ci[1] + ri * std::sin(t)));
      }
      if (torus_distance(outer.center, p) > ro * (1 + 1e-9)) sampled = false;
    }
    if (predicate != sampled) {
      // tolerate exact-boundary ties only
      double slack = std::fabs(to_double(torus_distance(co, ci)) - (ro - ri));
      if (slack > 1e-9) ++disagreements;
    }
  }
  CHECK(disagreements == 0);
}

TEST_CASE("predicates also instantiate with mpreal") {
  MetricBall<mpreal> outer(TorusPoint<mpreal>(mpreal(1) / 2), mpreal(1) / 16);
  MetricBall<mpreal> inner(TorusPoint<mpreal>(mpreal(1) / 2 + mpreal(1) / 1024), mpreal(1) / 64);
  CHECK(ball_contains_ball(outer, inner));
  CHECK(ball_intersects_ball(outer, inner));
  // far below double resolution: radii 2^-1100 apart still compare correctly
  mpreal tiny = pow(mpreal(2), -1100);
  MetricBall<mpreal> a(TorusPoint<mpreal>(mpreal(1) / 3), tiny * 4);
  MetricBall<mpreal> b(TorusPoint<mpreal>(mpreal(1) / 3 + tiny), tiny);
  CHECK(ball_contains_ball(a, b));
  MetricBall<mpreal> c(TorusPoint<mpreal>(mpreal(1) / 3 + 4 * tiny), tiny);
  CHECK_FALSE(ball_contains_ball(a, c));
}
