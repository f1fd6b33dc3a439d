// Exact circle arcs over the rationals.
//
// The tiling lane works at levels where atom lengths drop far below any
// floating-point resolution (the derived modified-game constants start around
// level 340 and finish past level 1000), so atoms, holes, and their preimage
// components are kept as exact rational arcs and every nesting / disjointness
// decision is integer arithmetic.

#pragma once

#include "schmidt/scalars.hpp"

namespace schmidt {

inline rational wrap_unit_rat(rational x) {
  bigint n = numerator(x), d = denominator(x);
  bigint fl;
  if (n >= 0) {
    fl = n / d;
  } else {
    fl = (-n + d - 1) / d;
    fl = -fl;
  }
  x -= rational(fl);
  if (x >= 1) x -= 1;
  if (x < 0) x += 1;
  return x;
}

// signed representative of (a - b) mod 1 in [-1/2, 1/2)
inline rational wrap_diff_rat(const rational& a, const rational& b) {
  rational d = wrap_unit_rat(a - b);
  if (d >= rational(1, 2)) d -= 1;
  return d;
}

inline rational circle_dist_rat(const rational& a, const rational& b) {
  rational d = wrap_diff_rat(a, b);
  return d < 0 ? rational(-d) : d;
}

// Closed arc [start, start + len] mod 1, start in [0,1), 0 < len < 1.
struct RatArc {
  rational start{0};
  rational len{0};

  rational mid() const { return wrap_unit_rat(start + len / 2); }
  rational end() const { return wrap_unit_rat(start + len); }

  bool contains_point(const rational& x, bool closed = true) const {
    rational d = wrap_diff_rat(x, mid());
    rational h = len / 2;
    if (d < 0) d = -d;
    return closed ? d <= h : d < h;
  }
  // closure of `inner` inside closure of this arc
  bool contains_arc(const RatArc& inner) const {
    if (inner.len > len) return false;
    rational d = wrap_diff_rat(inner.mid(), mid());
    if (d < 0) d = -d;
    return d <= (len - inner.len) / 2;
  }
  // closed arcs touch or overlap
  bool intersects_arc(const RatArc& other) const {
    rational d = wrap_diff_rat(other.mid(), mid());
    if (d < 0) d = -d;
    return d <= (len + other.len) / 2;
  }
};

// Exact rational from a double (doubles are dyadic rationals).
inline rational rational_from_double(double x) {
  return rational(x);
}

// Smallest-denominator rational within tol of x (for human-entered values like
// 0.1); falls back to the exact dyadic value.
inline rational rational_snap(double x, double tol = 1e-12, long max_den = 100000) {
  for (long q = 1; q <= max_den; ++q) {
    double pn = std::nearbyint(x * static_cast<double>(q));
    if (std::fabs(pn / static_cast<double>(q) - x) <= tol)
      return rational(static_cast<long long>(pn), q);
  }
  return rational_from_double(x);
}

}  // namespace schmidt
