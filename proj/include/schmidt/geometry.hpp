// Flat-torus metric geometry on T^d, d in {1,2}: points, closed balls, and the
// containment / intersection predicates every game engine is built on.
//
// The quotient metric is d(x,y) = sqrt(sum_i min(|xi-yi|, 1-|xi-yi|)^2).
// Ball predicates are exact center-distance inequalities; they are valid below
// the injectivity radius, which is why the engines cap all game radii at 1/8.

#pragma once

#include <array>
#include <stdexcept>

#include "schmidt/scalars.hpp"

namespace schmidt {

inline constexpr double kMaxGameRadius = 0.125;

template <class R>
struct TorusPoint {
  int dim = 1;
  std::array<R, 2> c{R(0), R(0)};

  TorusPoint() = default;
  explicit TorusPoint(R x) : dim(1), c{std::move(x), R(0)} {}
  TorusPoint(R x, R y) : dim(2), c{std::move(x), std::move(y)} {}

  R& operator[](int i) { return c[static_cast<size_t>(i)]; }
  const R& operator[](int i) const { return c[static_cast<size_t>(i)]; }
};

// Reduce a coordinate to [0,1). Idempotent on reduced input.
template <class R>
inline R wrap_unit(R x) {
  using std::floor;
  R f = floor(x);
  R out = x - f;
  if (out >= R(1)) out -= R(1);  // guards x = -eps rounding to 1
  if (out < R(0)) out += R(1);
  return out;
}

template <class R>
inline TorusPoint<R> normalize(TorusPoint<R> p) {
  for (int i = 0; i < p.dim; ++i) p[i] = wrap_unit(p[i]);
  return p;
}

// Signed representative of (a - b) mod 1 in [-1/2, 1/2).
template <class R>
inline R wrap_diff(const R& a, const R& b) {
  R d = a - b;
  using std::floor;
  d -= floor(d);
  if (d >= R(1)) d -= R(1);
  if (d >= R(0.5)) d -= R(1);
  return d;
}

template <class R>
inline R torus_distance_sq(const TorusPoint<R>& x, const TorusPoint<R>& y) {
  if (x.dim != y.dim) throw std::invalid_argument("torus_distance: dimension mismatch");
  R acc(0);
  for (int i = 0; i < x.dim; ++i) {
    R d = wrap_diff(x[i], y[i]);
    acc += d * d;
  }
  return acc;
}

template <class R>
inline R torus_distance(const TorusPoint<R>& x, const TorusPoint<R>& y) {
  using std::sqrt;
  return sqrt(torus_distance_sq(x, y));
}

template <class R>
struct MetricBall {
  TorusPoint<R> center;
  R radius{0};

  MetricBall() = default;
  MetricBall(TorusPoint<R> c, R r) : center(std::move(c)), radius(std::move(r)) {}
};

// Closed-ball containment: d(centers) <= r_out - r_in, ties contained.
// Exact for outer.radius < 1/4.
template <class R>
inline bool ball_contains_ball(const MetricBall<R>& outer, const MetricBall<R>& inner) {
  if (inner.radius > outer.radius) return false;
  R slack = outer.radius - inner.radius;
  R tol = outer.radius * R(kRelTol);
  return torus_distance(outer.center, inner.center) <= slack + tol;
}

// Closed balls touch or overlap: d(centers) <= r_a + r_b, ties intersecting.
template <class R>
inline bool ball_intersects_ball(const MetricBall<R>& a, const MetricBall<R>& b) {
  R reach = a.radius + b.radius;
  R tol = reach * R(kRelTol);
  return torus_distance(a.center, b.center) <= reach + tol;
}

template <class R>
inline bool ball_contains_point(const MetricBall<R>& b, const TorusPoint<R>& p) {
  R tol = b.radius * R(kRelTol);
  return torus_distance(b.center, p) <= b.radius + tol;
}

template <class R>
inline TorusPoint<R> to_point1(R x) { return TorusPoint<R>(wrap_unit(std::move(x))); }

template <class R>
inline TorusPoint<R> to_point2(R x, R y) {
  return TorusPoint<R>(wrap_unit(std::move(x)), wrap_unit(std::move(y)));
}

template <class R>
inline TorusPoint<R> convert_point(const TorusPoint<double>& p) {
  TorusPoint<R> q;
  q.dim = p.dim;
  for (int i = 0; i < p.dim; ++i) q[i] = R(p[i]);
  return q;
}

template <class R>
inline TorusPoint<double> point_to_double(const TorusPoint<R>& p) {
  TorusPoint<double> q;
  q.dim = p.dim;
  for (int i = 0; i < p.dim; ++i) q[i] = to_double(p[i]);
  return q;
}

}  // namespace schmidt
