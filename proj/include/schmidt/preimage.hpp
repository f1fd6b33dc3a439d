// Preimage components, Bowen balls, and distortion ratios.
//
// For expanding maps a connected component of f^{-k}(hole) is identified by a
// branch word; enumeration prunes by a window set so only components near the
// current game ball are materialized. For the Anosov maps f^{-k} is
// single-valued and rectangle preimages are enclosed via a boundary
// discretization pulled back through the exact inverse.

#pragma once

#include <algorithm>
#include <vector>

#include "schmidt/systems.hpp"

namespace schmidt {

inline constexpr int kDepthCap = 64;

struct PreimageComponent {
  int k = 0;
  std::vector<int> branch_word;  // branch applied at each pullback level
  MetricBall<double> enclosure;
  double diameter = 0;
  TorusPoint<double> base_point;  // some z with f^k(z) in the hole
};

// Arc on the circle: [start, start+len] with start in [0,1), len < 1.
template <class R>
struct Arc {
  R start{0}, len{0};

  R mid() const { return wrap_unit(start + len / R(2)); }
  bool contains(const R& x, const R& tol = R(0)) const {
    R d = wrap_diff(x, start + len / R(2));
    return abs(d) <= len / R(2) + tol;
  }
  bool intersects(const Arc& o) const {
    // midpoint distance vs half-length sum; valid while len + o.len < 1
    R dm = wrap_diff(o.start + o.len / R(2), start + len / R(2));
    return abs(dm) <= (len + o.len) / R(2);
  }
};

template <class R>
inline Arc<R> ball_to_arc(const MetricBall<R>& b) {
  return Arc<R>{wrap_unit(b.center[0] - b.radius), R(2) * b.radius};
}

// One branch pullback of an arc under a circle map (monotone lift solves).
template <class R>
inline Arc<R> pull_back_arc(const System& sys, const Arc<R>& a, int branch) {
  R lo = circle_branch_inverse(sys, a.start, branch);
  // endpoint via the lift: solve lift(x) = start + len + branch
  R target = a.start + a.len + R(branch);
  R hi = target / R(sys.m);
  if (sys.delta != 0) {
    R tol = std::numeric_limits<R>::epsilon() * R(64) * R(sys.m);
    int steps = 0;
    for (;;) {
      R resid = circle_lift(sys, hi) - target;
      if (abs(resid) <= tol) break;
      hi -= resid / circle_derivative(sys, hi);
      if (++steps > 60) throw std::runtime_error("pull_back_arc: no convergence");
    }
  }
  R len = hi - lo;
  if (len < R(0)) len += R(1);  // lift crossed an integer
  return Arc<R>{wrap_unit(std::move(lo)), std::move(len)};
}

namespace detail {

// A component at pullback depth t maps onto the current arc A under f^{k-t},
// so it can meet the window only if A meets f^{k-t}(window). Forward images of
// the window are precomputed; once an image wraps too far it stops pruning.
struct WindowImages {
  std::vector<Arc<double>> arcs;
  std::vector<bool> valid;
};

inline WindowImages window_forward_arcs(const System& sys, const MetricBall<double>& w, int k) {
  WindowImages wi;
  Arc<double> a = ball_to_arc(w);
  wi.arcs.push_back(a);
  wi.valid.push_back(true);
  for (int t = 1; t <= k; ++t) {
    if (!wi.valid.back() || a.len > 0.45) {
      wi.arcs.push_back(a);
      wi.valid.push_back(false);
      continue;
    }
    double lo = to_double(circle_lift(sys, a.start));
    double hi = to_double(circle_lift(sys, a.start + a.len));
    a = Arc<double>{wrap_unit(lo), hi - lo};
    wi.arcs.push_back(a);
    wi.valid.push_back(a.len <= 0.45);
  }
  return wi;
}

inline void circle_components(const System& sys, int remaining, const WindowImages* wi,
                              const MetricBall<double>* window, std::vector<int>& word,
                              const Arc<double>& arc, std::vector<PreimageComponent>& out) {
  if (wi && wi->valid[static_cast<size_t>(remaining)]) {
    const Arc<double>& wa = wi->arcs[static_cast<size_t>(remaining)];
    double gap = std::fabs(wrap_diff(arc.mid(), wa.mid()));
    if (gap > (arc.len + wa.len) / 2 + 1e-12 * (arc.len + wa.len + 1)) return;
  }
  if (remaining == 0) {
    PreimageComponent c;
    c.k = static_cast<int>(word.size());
    c.branch_word = word;
    c.diameter = arc.len;
    c.enclosure = MetricBall<double>(TorusPoint<double>(arc.mid()), arc.len / 2);
    c.base_point = c.enclosure.center;
    if (!window || ball_intersects_ball(c.enclosure, *window)) out.push_back(std::move(c));
    return;
  }
  for (int b = 0; b < sys.m; ++b) {
    Arc<double> sub = pull_back_arc(sys, arc, b);
    word.push_back(b);
    circle_components(sys, remaining - 1, wi, window, word, sub, out);
    word.pop_back();
  }
}

inline void conformal_components(const System& sys,
                                 const std::vector<std::array<int, 2>>& offsets, int remaining,
                                 const std::vector<MetricBall<double>>* wimgs,
                                 const MetricBall<double>* window, std::vector<int>& word,
                                 const MetricBall<double>& ball,
                                 std::vector<PreimageComponent>& out) {
  if (wimgs) {
    const MetricBall<double>& w = (*wimgs)[static_cast<size_t>(remaining)];
    if (w.radius < 0.2 && !ball_intersects_ball(ball, w)) return;
  }
  if (remaining == 0) {
    PreimageComponent c;
    c.k = static_cast<int>(word.size());
    c.branch_word = word;
    c.diameter = 2 * ball.radius;
    c.enclosure = ball;
    c.base_point = ball.center;
    if (!window || ball_intersects_ball(c.enclosure, *window)) out.push_back(std::move(c));
    return;
  }
  double mod = expansion_bounds(sys).sigma1;
  for (int b = 0; b < static_cast<int>(offsets.size()); ++b) {
    TorusPoint<double> c = conformal_branch_inverse(sys, ball.center, offsets[static_cast<size_t>(b)]);
    MetricBall<double> sub(c, ball.radius / mod);
    word.push_back(b);
    conformal_components(sys, offsets, remaining - 1, wimgs, window, word, sub, out);
    word.pop_back();
  }
}

}  // namespace detail

// All components of f^{-k}(hole) that meet `window` (whole space when null).
// Deterministic lexicographic branch-word order.
inline std::vector<PreimageComponent> preimage_components(
    const System& sys, const MetricBall<double>& hole, int k,
    const MetricBall<double>* window = nullptr) {
  if (k > kDepthCap) throw std::invalid_argument("preimage_components: depth cap exceeded");
  if (!sys.is_expanding())
    throw std::invalid_argument("preimage_components: ball holes need an expanding system");
  std::vector<PreimageComponent> out;
  std::vector<int> word;
  if (sys.dim() == 1) {
    if (2 * hole.radius > 0.45)
      throw std::invalid_argument("preimage_components: hole too large");
    std::optional<detail::WindowImages> wi;
    if (window) wi = detail::window_forward_arcs(sys, *window, k);
    detail::circle_components(sys, k, wi ? &*wi : nullptr, window, word, ball_to_arc(hole), out);
  } else {
    if (hole.radius > 0.2) throw std::invalid_argument("preimage_components: hole too large");
    auto offsets = conformal_branch_offsets(sys);
    std::optional<std::vector<MetricBall<double>>> wimgs;
    if (window) {
      wimgs.emplace();
      MetricBall<double> w = *window;
      double mod = expansion_bounds(sys).sigma1;
      for (int t = 0; t <= k; ++t) {
        wimgs->push_back(w);
        w = MetricBall<double>(apply(sys, w.center), std::min(0.25, w.radius * mod));
      }
    }
    detail::conformal_components(sys, offsets, k, wimgs ? &*wimgs : nullptr, window, word, hole, out);
  }
  if (out.size() > size_t(4) << 20)
    throw std::runtime_error("preimage_components: enumeration too large");
  return out;
}

// Open c-rectangle centered at y: union of unstable c/2-balls over the stable
// c/2-ball. For straight leaves this is the parallelogram spanned by the
// frame directions.
struct RectangleSpec {
  TorusPoint<double> center;
  double size = 0;  // c
  Frame2 frame;
};

inline RectangleSpec make_rectangle(const System& sys, const TorusPoint<double>& y, double c) {
  return RectangleSpec{y, c, local_frame(sys, y)};
}

inline bool rectangle_contains(const RectangleSpec& r, const TorusPoint<double>& p,
                               double pad = 0) {
  auto uv = r.frame.coords({wrap_diff(p[0], r.center[0]), wrap_diff(p[1], r.center[1])});
  return std::fabs(uv[0]) <= r.size / 2 + pad && std::fabs(uv[1]) <= r.size / 2 + pad;
}

// Enclosure of f^{-k}(rectangle) for invertible systems: pull a boundary
// discretization back through the exact inverse and enclose by a ball,
// refining until the radius is stable to 1%.
inline PreimageComponent rectangle_preimage(const System& sys, const RectangleSpec& rect,
                                            int k) {
  if (!sys.is_anosov())
    throw std::invalid_argument("rectangle_preimage: invertible systems only");
  if (k > kDepthCap) throw std::invalid_argument("rectangle_preimage: depth cap exceeded");
  auto pull = [&](int npts) {
    // walk the square boundary edge by edge so the corners are always sampled
    std::vector<TorusPoint<double>> pts;
    int per_edge = std::max(2, npts / 4);
    double h = rect.size / 2;
    for (int e = 0; e < 4; ++e) {
      for (int i = 0; i < per_edge; ++i) {
        double t = -h + 2 * h * i / (per_edge - 1);
        double u = e == 0 ? t : e == 1 ? h : e == 2 ? -t : -h;
        double s = e == 0 ? -h : e == 1 ? t : e == 2 ? h : -t;
        TorusPoint<double> p = to_point2(rect.center[0] + u * rect.frame.e_u[0] + s * rect.frame.e_s[0],
                                         rect.center[1] + u * rect.frame.e_u[1] + s * rect.frame.e_s[1]);
        for (int t2 = 0; t2 < k; ++t2) p = anosov_inverse(sys, p);
        pts.push_back(p);
      }
    }
    return pts;
  };
  int npts = 33;
  double prev_rad = -1;
  PreimageComponent out;
  for (int round = 0; round < 6; ++round) {
    auto pts = pull(npts);
    // enclose: center = pullback of rect center, radius = max distance
    TorusPoint<double> c = rect.center;
    for (int t = 0; t < k; ++t) c = anosov_inverse(sys, c);
    double rad = 0;
    for (auto& p : pts) rad = std::max(rad, to_double(torus_distance(p, c)));
    out.k = k;
    out.enclosure = MetricBall<double>(c, rad);
    out.diameter = 2 * rad;
    out.base_point = c;
    if (prev_rad >= 0 && std::fabs(rad - prev_rad) <= 0.01 * rad) break;
    prev_rad = rad;
    npts = npts * 2 - 1;
  }
  return out;
}

// Bowen ball membership: d(f^i(w), f^i(z)) <= c for all 0 <= i <= k-1.
template <class R>
inline bool bowen_ball_contains(const System& sys, TorusPoint<R> z, int k, const R& c,
                                TorusPoint<R> w) {
  for (int i = 0; i < k; ++i) {
    if (torus_distance(z, w) > c) return false;
    z = apply(sys, z);
    w = apply(sys, w);
  }
  return true;
}

// Unstable one-step derivative norm at a double point.
inline double unstable_norm(const System& sys, const TorusPoint<double>& x,
                            const std::array<double, 2>& e_u) {
  if (sys.dim() == 1) return std::fabs(circle_derivative(sys, x[0]));
  auto v = jacobian(sys, x).mul(e_u);
  return std::hypot(v[0], v[1]);
}

// Chain-rule ratio of unstable derivative norms along two length-k orbit
// segments. Equals 1 exactly for constant-derivative systems.
inline double distortion_ratio(const System& sys, TorusPoint<double> z1, TorusPoint<double> z2,
                               int k) {
  double log_ratio = 0;
  std::array<double, 2> e1{1, 0}, e2{1, 0};
  if (sys.is_anosov()) {
    e1 = unstable_direction(sys, z1, 60).e_u;
    e2 = unstable_direction(sys, z2, 60).e_u;
  }
  for (int i = 0; i < k; ++i) {
    double n1 = unstable_norm(sys, z1, e1), n2 = unstable_norm(sys, z2, e2);
    log_ratio += std::log(n1) - std::log(n2);
    if (sys.is_anosov()) {
      e1 = normalized(jacobian(sys, z1).mul(e1));
      e2 = normalized(jacobian(sys, z2).mul(e2));
    }
    z1 = apply(sys, z1);
    z2 = apply(sys, z2);
  }
  return std::exp(log_ratio);
}

// Forward orbit x, f(x), ..., f^n(x).
template <class R>
inline std::vector<TorusPoint<R>> orbit_points(const System& sys, TorusPoint<R> x, int n) {
  std::vector<TorusPoint<R>> out;
  out.reserve(static_cast<size_t>(n) + 1);
  out.push_back(x);
  for (int i = 0; i < n; ++i) {
    x = apply(sys, x);
    out.push_back(x);
  }
  return out;
}

}  // namespace schmidt
