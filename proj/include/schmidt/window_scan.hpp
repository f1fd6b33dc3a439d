// Orbit-guided enumeration of hole-preimage components near a ball.
//
// For expanding maps the component of f^{-k}(B(y,c)) meeting a ball B exists
// iff f^k(B) meets the hole. The scan follows the lifted endpoint orbits of B,
// tests each depth against the hole, and on a hit pulls the hole endpoints
// back along the branch path of the ball's own orbit. Works for any scalar;
// the deep game lane instantiates it with mpreal.
//
// The scan stops once the image arc is long enough that every remaining
// component is strictly below the diameter floor (image length L gives nearby
// components diameter <= 4 K c rho / L, and the floors in play keep that below
// rho beta^{2r} well before L reaches the wrap guard).

#pragma once

#include "schmidt/preimage.hpp"

namespace schmidt {

template <class R>
struct ScanComponent {
  int k = 0;
  Arc<R> arc;        // exact component interval (d=1)
  TorusPoint<R> center;
  R diameter{0};
  MetricBall<R> cover;  // ball of radius = diameter containing the component
};

// Pull a point back k levels along the branch path of a reference orbit:
// at each level pick the branch inverse closest to the reference point.
template <class R>
inline R pull_back_along_orbit_1d(const System& sys, const std::vector<TorusPoint<R>>& orbit,
                                  int k, R w, double guard_gap) {
  for (int t = k; t >= 1; --t) {
    R best;
    R best_gap(2);
    for (int b = 0; b < sys.m; ++b) {
      R cand = circle_branch_inverse(sys, wrap_unit(w), b);
      R gap = abs(wrap_diff(cand, orbit[static_cast<size_t>(t) - 1][0]));
      if (gap < best_gap) {
        best_gap = gap;
        best = cand;
      }
    }
    if (to_double(best_gap) > guard_gap)
      throw std::runtime_error("pull_back_along_orbit: drifted out of the branch corridor");
    w = best;
  }
  return w;
}

// Minimal spacing between distinct one-step preimages (branch corridor width).
inline double min_branch_gap(const System& sys) {
  if (sys.dim() != 1) throw std::logic_error("min_branch_gap: d=1 only");
  double mn = 1;
  for (int i = 0; i < 512; ++i) {
    double y = (i + 0.5) / 512;
    std::vector<double> pre;
    for (int b = 0; b < sys.m; ++b) pre.push_back(to_double(circle_branch_inverse(sys, y, b)));
    std::sort(pre.begin(), pre.end());
    for (size_t j = 0; j < pre.size(); ++j) {
      double nxt = j + 1 < pre.size() ? pre[j + 1] : pre[0] + 1;
      mn = std::min(mn, nxt - pre[j]);
    }
  }
  return mn;
}

template <class R>
struct WindowScanParams {
  R hole_center{0};
  R hole_radius{0};   // c
  R diam_floor{0};    // keep components with diameter >= floor
  R diam_ceil{2};     // ... and < ceil (half-open window; diameters are < 1)
  int k_max = 1 << 20;  // hard scan cap
  double pad_rel = 1e-9;  // ball padding (relative)
};

// All components of f^{-k}(B(y,c)) meeting `ball` whose exact diameter lies in
// [2^floor_log2, 2^ceil_log2), for k up to the stop rule. d = 1 systems.
template <class R>
inline std::vector<ScanComponent<R>> scan_window_components(const System& sys,
                                                            const MetricBall<R>& ball,
                                                            const WindowScanParams<R>& p) {
  if (sys.dim() != 1) throw std::logic_error("scan_window_components: d=1 only");
  std::vector<ScanComponent<R>> out;
  const R two_c = p.hole_radius * 2;
  double guard = min_branch_gap(sys) * 0.45;

  // lifted arc of the padded ball
  R pad = ball.radius * R(p.pad_rel);
  Arc<R> arc{wrap_unit(ball.center[0] - ball.radius - pad), (ball.radius + pad) * 2};
  std::vector<TorusPoint<R>> orbit{TorusPoint<R>(ball.center[0])};

  for (int k = 0; k <= p.k_max; ++k) {
    if (to_double(arc.len) > 0.3) break;  // all deeper components fall below any floor in play
    // hit test: image arc meets the closed hole
    R gap = abs(wrap_diff(arc.mid(), p.hole_center));
    if (gap <= (arc.len + two_c) / 2) {
      // component via endpoint pullback along the center orbit
      R lo = pull_back_along_orbit_1d(sys, orbit, k, wrap_unit(p.hole_center - p.hole_radius), guard);
      R hi_lift = p.hole_center + p.hole_radius;
      R hi = pull_back_along_orbit_1d(sys, orbit, k, wrap_unit(hi_lift), guard);
      R len = hi - lo;
      using std::floor;
      len -= floor(len);  // branch inverses may straddle the wrap point
      ScanComponent<R> c;
      c.k = k;
      c.arc = Arc<R>{lo, len};
      c.diameter = len;
      c.center = TorusPoint<R>(c.arc.mid());
      c.cover = MetricBall<R>(c.center, len);
      if (len >= p.diam_floor && len < p.diam_ceil) out.push_back(std::move(c));
    }
    // advance the arc and the orbit one step
    R lo_img = circle_lift(sys, arc.start);
    R hi_img = circle_lift(sys, arc.start + arc.len);
    arc = Arc<R>{wrap_unit(lo_img), hi_img - lo_img};
    orbit.push_back(apply(sys, orbit.back()));
  }
  return out;
}

// d = 2 analogue for the linear conformal family: image balls scale exactly,
// components are balls.
template <class R>
inline std::vector<ScanComponent<R>> scan_window_components_conformal(
    const System& sys, const MetricBall<R>& ball, const WindowScanParams<R>& p,
    const TorusPoint<R>& hole_center2) {
  if (sys.kind != SystemKind::torus_conformal)
    throw std::logic_error("scan_window_components_conformal: torus_conformal only");
  std::vector<ScanComponent<R>> out;
  auto offsets = conformal_branch_offsets(sys);
  R mod = sqrt(R(sys.mul_a * sys.mul_a + sys.mul_b * sys.mul_b));
  R img_radius = ball.radius * (R(1) + R(p.pad_rel));
  std::vector<TorusPoint<R>> orbit{ball.center};

  for (int k = 0; k <= p.k_max; ++k) {
    if (to_double(img_radius) > 0.2) break;
    R gap = torus_distance(orbit.back(), hole_center2);
    if (gap <= img_radius + p.hole_radius) {
      // pull the hole center back along the orbit's branch path
      TorusPoint<R> w = hole_center2;
      for (int t = k; t >= 1; --t) {
        TorusPoint<R> best;
        R best_gap(2);
        for (auto& l : offsets) {
          TorusPoint<R> cand = conformal_branch_inverse(sys, w, l);
          R g = torus_distance(cand, orbit[static_cast<size_t>(t) - 1]);
          if (g < best_gap) {
            best_gap = g;
            best = cand;
          }
        }
        w = best;
      }
      R diam = p.hole_radius * 2;
      for (int t = 0; t < k; ++t) diam /= mod;
      ScanComponent<R> c;
      c.k = k;
      c.center = w;
      c.diameter = diam;
      c.cover = MetricBall<R>(w, diam);
      if (diam >= p.diam_floor && diam < p.diam_ceil) out.push_back(std::move(c));
    }
    img_radius *= mod;
    orbit.push_back(apply(sys, orbit.back()));
  }
  return out;
}

}  // namespace schmidt
