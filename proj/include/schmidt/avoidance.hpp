// Avoidance search: given targets inside a ball, place a concentric-ratio
// sub-ball that dodges a guaranteed fraction of them.
//
// The certified fractions are eps_impl = 1/4 in dimension 1 and 1/8 in
// dimension 2, for any alpha below the measure-theoretic bound
// alpha < (1/2)(1/(C D))^{1/n}; with the flat metric C = 1 and D = 2^n this
// bound is 1/4 in both dimensions. A blocked-measure count shows a grid
// candidate avoiding the required fraction always exists, so a failed search
// is a bug, not an input condition.

#pragma once

#include "schmidt/geometry.hpp"

namespace schmidt {

inline double avoidance_alpha_bound(int n) {
  // (1/2) (1/(C D))^{1/n}, flat-torus constants C = 1, D = 2^n
  return 0.5 * std::pow(1.0 / (1 << n), 1.0 / n);
}

inline double avoidance_certified_fraction(int n) { return n == 1 ? 0.25 : 0.125; }

struct AvoidanceChoice {
  TorusPoint<double> center;
  std::vector<size_t> avoided;
};

inline AvoidanceChoice avoidance_choose(const TorusPoint<double>& x1, double rho,
                                        const std::vector<TorusPoint<double>>& targets,
                                        double alpha, int n) {
  if (rho <= 0 || rho >= kMaxGameRadius)
    throw std::invalid_argument("avoidance_choose: need 0 < rho < 1/8");
  if (alpha <= 0 || alpha > avoidance_alpha_bound(n) * (1 + 1e-12))
    throw std::invalid_argument("avoidance_choose: alpha above the admissible bound");
  if (x1.dim != n) throw std::invalid_argument("avoidance_choose: dimension mismatch");

  auto avoided_set = [&](const TorusPoint<double>& c) {
    std::vector<size_t> out;
    for (size_t i = 0; i < targets.size(); ++i)
      if (to_double(torus_distance(c, targets[i])) > 2 * alpha * rho * (1 + 1e-9))
        out.push_back(i);
    return out;
  };

  if (targets.empty()) return {x1, {}};

  double reach = (1 - alpha) * rho;  // keeps B(x2, alpha rho) inside B(x1, rho)
  AvoidanceChoice best{x1, avoided_set(x1)};
  size_t need = static_cast<size_t>(
      std::ceil(avoidance_certified_fraction(n) * static_cast<double>(targets.size()) - 1e-9));

  const int kGrid = 128;
  if (n == 1) {
    for (int g = 0; g <= kGrid; ++g) {
      TorusPoint<double> c(wrap_unit(x1[0] - reach + 2 * reach * g / kGrid));
      auto av = avoided_set(c);
      if (av.size() > best.avoided.size()) best = {c, std::move(av)};
    }
  } else {
    const int kSide = 48;
    for (int gx = 0; gx <= kSide; ++gx) {
      for (int gy = 0; gy <= kSide; ++gy) {
        double ox = -reach + 2 * reach * gx / kSide;
        double oy = -reach + 2 * reach * gy / kSide;
        if (std::hypot(ox, oy) > reach) continue;
        TorusPoint<double> c(wrap_unit(x1[0] + ox), wrap_unit(x1[1] + oy));
        auto av = avoided_set(c);
        if (av.size() > best.avoided.size()) best = {c, std::move(av)};
      }
    }
  }
  if (best.avoided.size() < need)
    throw std::logic_error("avoidance_choose: search fell short of the certified fraction");
  return best;
}

// Line variant used inside the unstable-coordinate bookkeeping: choose a
// center in [lo, hi] whose (avoid_radius)-interval dodges as many targets as
// possible. Coordinates are already rescaled to O(1).
struct LineChoice {
  double center = 0;
  std::vector<size_t> avoided;
};

inline LineChoice avoidance_choose_line(double lo, double hi, double avoid_radius,
                                        const std::vector<double>& targets,
                                        size_t need) {
  if (!(hi >= lo)) throw std::invalid_argument("avoidance_choose_line: empty interval");
  auto avoided_set = [&](double c) {
    std::vector<size_t> out;
    for (size_t i = 0; i < targets.size(); ++i)
      if (std::fabs(c - targets[i]) > avoid_radius * (1 + 1e-9)) out.push_back(i);
    return out;
  };
  LineChoice best{(lo + hi) / 2, avoided_set((lo + hi) / 2)};
  const int kGrid = 256;
  for (int g = 0; g <= kGrid; ++g) {
    double c = lo + (hi - lo) * g / kGrid;
    auto av = avoided_set(c);
    if (av.size() > best.avoided.size()) best = {c, std::move(av)};
  }
  if (best.avoided.size() < need)
    throw std::logic_error("avoidance_choose_line: search fell short");
  return best;
}

}  // namespace schmidt
