// Empirical measurements and box-dimension machinery: distortion constants
// sampled over Bowen-ball pairs, orbit-to-target distances, and survivor-set
// box counting with an exact transfer-matrix oracle for cylinder holes.

#pragma once

#include "schmidt/arcs.hpp"
#include "schmidt/preimage.hpp"

namespace schmidt {

// Max distortion ratio over sampled Bowen-ball pairs at scale c.
inline double empirical_distortion(const System& sys, double c, int k_max, int samples,
                                   std::uint64_t seed) {
  Rng rng(seed);
  double sigma1 = expansion_bounds(sys).sigma1;
  double khat = 1;
  for (int s = 0; s < samples; ++s) {
    int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(k_max)));
    TorusPoint<double> z1, z2;
    if (sys.dim() == 1) {
      z1 = TorusPoint<double>(rng.u01());
      double off = rng.uniform(-1, 1) * c / std::pow(sigma1, k - 1) * 0.95;
      z2 = TorusPoint<double>(wrap_unit(z1[0] + off));
    } else {
      z1 = TorusPoint<double>(rng.u01(), rng.u01());
      double off = rng.uniform(0, 2 * kPi);
      double r = rng.u01() * c / std::pow(sigma1, k - 1) * 0.95;
      z2 = to_point2(z1[0] + r * std::cos(off), z1[1] + r * std::sin(off));
    }
    if (!bowen_ball_contains(sys, z1, k, c, z2)) continue;
    double ratio = distortion_ratio(sys, z1, z2, k);
    khat = std::max(khat, std::max(ratio, 1 / ratio));
  }
  return khat;
}

// Measured Lipschitz constant of log f' (d = 1).
inline double log_derivative_lipschitz(const System& sys, int grid = 20000) {
  if (sys.dim() != 1) throw std::logic_error("log_derivative_lipschitz: d=1 only");
  double l = 0, h = 1e-6;
  for (int i = 0; i < grid; ++i) {
    double x = static_cast<double>(i) / grid;
    double g = std::fabs(std::log(to_double(circle_derivative(sys, x + h))) -
                         std::log(to_double(circle_derivative(sys, x)))) /
               h;
    l = std::max(l, g);
  }
  return l;
}

template <class R>
inline R orbit_min_distance(const System& sys, TorusPoint<R> x, const TorusPoint<R>& y,
                            long horizon) {
  if (horizon > 1000000) throw std::invalid_argument("orbit_min_distance: horizon above 1e6");
  R best = torus_distance(x, y);
  for (long k = 1; k <= horizon; ++k) {
    x = apply(sys, x);
    R d = torus_distance(x, y);
    if (d < best) best = d;
  }
  return best;
}

// ---- survivor-set box dimension ------------------------------------------------

struct DimensionEstimate {
  std::vector<int> levels;      // cylinder depths used for the fit
  std::vector<double> counts;   // surviving cylinder counts
  double fitted_slope = 0;      // box-dimension estimate
  std::optional<double> oracle; // transfer-matrix value when the hole is cylinder-aligned
  double discrepancy = 0;       // |fit - oracle| when oracle present
};

namespace detail {

// survivor DFS bookkeeping: the hole as a closed rational arc
struct SurvivorHole {
  rational lo, len;  // closed arc [lo, lo+len], lo in [0,1)
  bool interval_inside(const rational& a, const rational& b) const {
    // [a,b] subset of closed hole (arcs short, compare via wrap midpoints)
    rational mid_h = lo + len / 2;
    rational d1 = wrap_diff_rat(a, mid_h), d2 = wrap_diff_rat(b, mid_h);
    rational h = len / 2;
    auto absr = [](rational x) { return x < 0 ? rational(-x) : x; };
    return absr(d1) <= h && absr(d2) <= h && absr(wrap_diff_rat(b, a)) < rational(1, 2);
  }
  bool interval_meets(const rational& a, const rational& b) const {
    rational mid_i = a + wrap_diff_rat(b, a) / 2;
    rational li = wrap_diff_rat(b, a);
    if (li < 0) li = -li;
    rational d = wrap_diff_rat(mid_i, lo + len / 2);
    if (d < 0) d = -d;
    return d <= (li + len) / 2;
  }
};

struct SurvivorCtx {
  int m;
  int depth;
  SurvivorHole hole;
  std::vector<long>* counts;
};

// cylinder (k, j): [j/m^k, (j+1)/m^k); image under f^t has index j mod m^{k-t}
// at level k - t. active = the t's where the image still straddles the hole.
inline void survivor_dfs(const SurvivorCtx& ctx, int k, std::uint64_t j,
                         const std::vector<int>& active) {
  (*ctx.counts)[static_cast<size_t>(k)] += 1;
  if (k == ctx.depth) return;
  std::uint64_t mk = 1;  // m^k fits: depth <= 20, m <= 3
  for (int t = 0; t < k; ++t) mk *= static_cast<std::uint64_t>(ctx.m);
  for (int b = 0; b < ctx.m; ++b) {
    std::uint64_t jc = j * static_cast<std::uint64_t>(ctx.m) + static_cast<std::uint64_t>(b);
    int kc = k + 1;
    std::uint64_t den = mk * static_cast<std::uint64_t>(ctx.m);
    bool dead = false;
    std::vector<int> child_active;
    // constraints to re-check: previously straddling t's plus the new t = k
    auto check = [&](int t) {
      std::uint64_t dent = den;
      std::uint64_t jt = jc;
      for (int s = 0; s < t; ++s) {
        dent /= static_cast<std::uint64_t>(ctx.m);
        jt %= dent;
      }
      rational a(jt, dent), bb(jt + 1, dent);
      if (ctx.hole.interval_inside(a, bb)) {
        dead = true;
        return;
      }
      if (ctx.hole.interval_meets(a, bb)) child_active.push_back(t);
    };
    // re-check straddling constraints plus the new deepest proper image
    // (t = kc gives the whole circle and never dies, so it is skipped)
    for (int t : active) {
      check(t);
      if (dead) break;
    }
    if (!dead) check(kc - 1);
    if (dead) continue;
    survivor_dfs(ctx, kc, jc, child_active);
  }
}

}  // namespace detail

// Transfer-matrix survivor dimension for a hole that is a union of full
// level-p cylinders: states are allowed (p-1)-words, the spectral radius of
// the allowed-transition matrix gives dim = log lambda / log m.
inline std::optional<double> cylinder_oracle(int m, const rational& lo, const rational& hi) {
  for (int p = 1; p <= 10; ++p) {
    bigint den = 1;
    for (int i = 0; i < p; ++i) den *= m;
    rational rl = lo * rational(den), rh = hi * rational(den);
    if (denominator(rl) != 1 || denominator(rh) != 1) continue;
    long a = numerator(rl).convert_to<long>(), b = numerator(rh).convert_to<long>();
    // forbidden p-cylinders are [a, b)
    long total = 1;
    for (int i = 0; i < p; ++i) total *= m;
    std::vector<bool> forbidden(static_cast<size_t>(total), false);
    for (long w = a; w < b; ++w) forbidden[static_cast<size_t>((w % total + total) % total)] = true;
    long states = total / m;  // (p-1)-words
    std::vector<double> v(static_cast<size_t>(states), 1.0), nv(static_cast<size_t>(states));
    double lambda = 0;
    for (int it = 0; it < 400; ++it) {
      double norm = 0;
      for (long s = 0; s < states; ++s) {
        double acc = 0;
        for (int c = 0; c < m; ++c) {
          long word = s * m + c;  // p-word extending state s
          if (forbidden[static_cast<size_t>(word)]) continue;
          long next = word % states;
          acc += v[static_cast<size_t>(next)];
        }
        nv[static_cast<size_t>(s)] = acc;
        norm = std::max(norm, acc);
      }
      if (norm == 0) return 0.0;  // everything dies
      for (auto& x : nv) x /= norm;
      v.swap(nv);
      lambda = norm;
    }
    return std::log(lambda) / std::log(double(m));
  }
  return std::nullopt;
}

// Box-counting estimate of the survivor set {x : f^k(x) not in hole, k <= depth}
// for piecewise-linear circle maps, fitted over the deepest five cylinder scales.
inline DimensionEstimate survivor_box_dimension(const System& sys, const MetricBall<double>& hole,
                                                int depth) {
  if (sys.dim() != 1 || !sys.is_linear() || !sys.is_expanding())
    throw std::invalid_argument("survivor_box_dimension: piecewise-linear circle maps only");
  if (depth > 20) throw std::invalid_argument("survivor_box_dimension: depth above 20 branches");
  detail::SurvivorCtx ctx;
  ctx.m = sys.m;
  ctx.depth = depth;
  rational c = rational_snap(hole.radius, 1e-14, 1000000);
  rational y = rational_snap(to_double(hole.center[0]), 1e-14, 1000000);
  ctx.hole.lo = wrap_unit_rat(y - c);
  ctx.hole.len = 2 * c;
  std::vector<long> counts(static_cast<size_t>(depth) + 1, 0);
  ctx.counts = &counts;
  detail::survivor_dfs(ctx, 0, 0, {});

  DimensionEstimate est;
  int k0 = std::max(1, depth - 4);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int k = k0; k <= depth; ++k) {
    if (counts[static_cast<size_t>(k)] == 0) continue;
    est.levels.push_back(k);
    est.counts.push_back(static_cast<double>(counts[static_cast<size_t>(k)]));
    double x = k * std::log(double(sys.m));
    double yy = std::log(static_cast<double>(counts[static_cast<size_t>(k)]));
    sx += x;
    sy += yy;
    sxx += x * x;
    sxy += x * yy;
    ++n;
  }
  est.fitted_slope = n > 1 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0;
  est.oracle = cylinder_oracle(sys.m, ctx.hole.lo, ctx.hole.lo + ctx.hole.len);
  if (est.oracle) est.discrepancy = std::fabs(est.fitted_slope - *est.oracle);
  return est;
}

}  // namespace schmidt
