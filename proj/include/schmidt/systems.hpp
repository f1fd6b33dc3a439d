// Concrete smooth systems on S^1 and T^2 with derivative data.
//
//   circle_expanding(m, delta):  x -> m x + delta sin(2 pi x)   (mod 1)
//   torus_conformal(a, b):       z -> (a + b i) z               (mod Z^2)
//   cat_map:                     x -> [[2,1],[1,1]] x           (mod 1)
//   perturbed_cat(delta):        x -> cat(x) + delta (sin(2 pi x1), 0)
//
// All maps are C-infinity. circle_expanding requires 2 pi delta < m - 1 so the
// derivative stays above 1; perturbed_cat requires delta <= 1e-3 to stay in a
// regime where the cone-field check certifies hyperbolicity.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "schmidt/geometry.hpp"

namespace schmidt {

inline constexpr double kPi = 3.14159265358979323846;

enum class SystemKind { circle_expanding, torus_conformal, cat_map, perturbed_cat };

struct ExpansionBounds {
  double sigma1 = 0;  // min expansion on E^u
  double sigma2 = 0;  // max expansion
  std::optional<double> lambda;  // max stable contraction (Anosov only)
};

struct System {
  SystemKind kind = SystemKind::circle_expanding;
  int m = 2;          // circle degree
  double delta = 0;   // circle / perturbed-cat perturbation size
  int mul_a = 0, mul_b = 0;  // torus_conformal multiplier a + b i

  static System circle(int m, double delta = 0) {
    System s;
    s.kind = SystemKind::circle_expanding;
    s.m = m;
    s.delta = delta;
    s.validate();
    return s;
  }
  static System doubling() { return circle(2, 0); }
  static System tripling() { return circle(3, 0); }
  static System conformal(int a, int b) {
    System s;
    s.kind = SystemKind::torus_conformal;
    s.mul_a = a;
    s.mul_b = b;
    s.validate();
    return s;
  }
  static System cat() {
    System s;
    s.kind = SystemKind::cat_map;
    return s;
  }
  static System perturbed_cat(double delta) {
    System s;
    s.kind = SystemKind::perturbed_cat;
    s.delta = delta;
    s.validate();
    return s;
  }

  void validate() const {
    switch (kind) {
      case SystemKind::circle_expanding:
        if (m < 2) throw std::invalid_argument("circle_expanding: degree must be >= 2");
        if (delta < 0 || 2 * kPi * delta >= m - 1)
          throw std::invalid_argument("circle_expanding: need 2*pi*delta < m-1");
        break;
      case SystemKind::torus_conformal:
        if (mul_a * mul_a + mul_b * mul_b < 2)
          throw std::invalid_argument("torus_conformal: need a^2+b^2 >= 2");
        break;
      case SystemKind::cat_map:
        break;
      case SystemKind::perturbed_cat:
        if (delta < 0 || delta > 1e-3)
          throw std::invalid_argument("perturbed_cat: need 0 <= delta <= 1e-3");
        break;
    }
  }

  int dim() const { return kind == SystemKind::circle_expanding ? 1 : 2; }
  bool is_expanding() const {
    return kind == SystemKind::circle_expanding || kind == SystemKind::torus_conformal;
  }
  bool is_anosov() const {
    return kind == SystemKind::cat_map || kind == SystemKind::perturbed_cat;
  }
  bool is_linear() const {
    return kind != SystemKind::perturbed_cat &&
           !(kind == SystemKind::circle_expanding && delta != 0);
  }
  int branch_count() const {
    switch (kind) {
      case SystemKind::circle_expanding: return m;
      case SystemKind::torus_conformal: return mul_a * mul_a + mul_b * mul_b;
      default: return 1;  // diffeomorphisms
    }
  }

  std::string name() const {
    switch (kind) {
      case SystemKind::circle_expanding:
        if (delta == 0 && m == 2) return "doubling";
        if (delta == 0 && m == 3) return "tripling";
        return "circle(" + std::to_string(m) + "," + std::to_string(delta) + ")";
      case SystemKind::torus_conformal:
        return "conformal(" + std::to_string(mul_a) + "+" + std::to_string(mul_b) + "i)";
      case SystemKind::cat_map: return "cat";
      case SystemKind::perturbed_cat: return "perturbed_cat(" + std::to_string(delta) + ")";
    }
    return "?";
  }
};

// ---- forward map -------------------------------------------------------------

// Monotone lift of a circle map to the real line.
template <class R>
inline R circle_lift(const System& sys, const R& x) {
  R out = R(sys.m) * x;
  if (sys.delta != 0) out += R(sys.delta) * sin(R(2 * kPi) * x);
  return out;
}

template <class R>
inline R circle_derivative(const System& sys, const R& x) {
  R out = R(sys.m);
  if (sys.delta != 0) out += R(2 * kPi * sys.delta) * cos(R(2 * kPi) * x);
  return out;
}

template <class R>
inline TorusPoint<R> apply(const System& sys, const TorusPoint<R>& p) {
  switch (sys.kind) {
    case SystemKind::circle_expanding:
      return to_point1(circle_lift(sys, p[0]));
    case SystemKind::torus_conformal: {
      // (a+bi)(x+iy) = (a x - b y) + i (b x + a y)
      R a(sys.mul_a), b(sys.mul_b);
      return to_point2(a * p[0] - b * p[1], b * p[0] + a * p[1]);
    }
    case SystemKind::cat_map:
      return to_point2(R(2) * p[0] + p[1], p[0] + p[1]);
    case SystemKind::perturbed_cat: {
      R x1 = R(2) * p[0] + p[1] + R(sys.delta) * sin(R(2 * kPi) * p[0]);
      return to_point2(std::move(x1), p[0] + p[1]);
    }
  }
  throw std::logic_error("apply: bad kind");
}

template <class R>
inline TorusPoint<R> apply_iter(const System& sys, TorusPoint<R> p, int k) {
  for (int i = 0; i < k; ++i) p = apply(sys, p);
  return p;
}

// 2x2 Jacobian (double precision; positions can be any scalar reduced to double).
struct Mat2 {
  double a = 1, b = 0, c = 0, d = 1;  // [[a,b],[c,d]]
  double det() const { return a * d - b * c; }
  Mat2 inverse() const {
    double dt = det();
    return {d / dt, -b / dt, -c / dt, a / dt};
  }
  std::array<double, 2> mul(const std::array<double, 2>& v) const {
    return {a * v[0] + b * v[1], c * v[0] + d * v[1]};
  }
};

inline Mat2 jacobian(const System& sys, const TorusPoint<double>& p) {
  switch (sys.kind) {
    case SystemKind::circle_expanding:
      throw std::logic_error("jacobian: use circle_derivative for d=1");
    case SystemKind::torus_conformal:
      return {double(sys.mul_a), double(-sys.mul_b), double(sys.mul_b), double(sys.mul_a)};
    case SystemKind::cat_map:
      return {2, 1, 1, 1};
    case SystemKind::perturbed_cat: {
      double g = 2 * kPi * sys.delta * std::cos(2 * kPi * p[0]);
      return {2 + g, 1, 1, 1};
    }
  }
  throw std::logic_error("jacobian: bad kind");
}

inline ExpansionBounds expansion_bounds(const System& sys) {
  sys.validate();
  ExpansionBounds eb;
  switch (sys.kind) {
    case SystemKind::circle_expanding:
      eb.sigma1 = sys.m - 2 * kPi * sys.delta;
      eb.sigma2 = sys.m + 2 * kPi * sys.delta;
      break;
    case SystemKind::torus_conformal:
      eb.sigma1 = eb.sigma2 = std::sqrt(double(sys.mul_a * sys.mul_a + sys.mul_b * sys.mul_b));
      break;
    case SystemKind::cat_map:
      eb.sigma1 = eb.sigma2 = (3 + std::sqrt(5.0)) / 2;
      eb.lambda = (3 - std::sqrt(5.0)) / 2;
      break;
    case SystemKind::perturbed_cat: {
      // Derivative extrema of the cat matrix plus the rank-one sin term; for
      // delta <= 1e-3 first-order interval bounds around the eigenvalues are
      // certified by the cone check in unstable_direction tests.
      double s = (3 + std::sqrt(5.0)) / 2;
      double l = (3 - std::sqrt(5.0)) / 2;
      double g = 2 * kPi * sys.delta;
      eb.sigma1 = s - g;
      eb.sigma2 = s + g;
      eb.lambda = l + g;
      break;
    }
  }
  return eb;
}

// ---- inverse branches --------------------------------------------------------

// Circle maps: branch b of f^{-1} sends y to the unique x with lift(x) = y + b,
// x in [0,1). For the linear case x = (y+b)/m; otherwise Newton from that seed.
template <class R>
inline R circle_branch_inverse(const System& sys, const R& y, int branch) {
  R target = y + R(branch);
  R x = target / R(sys.m);
  if (sys.delta == 0) return x;
  int steps = 0;
  R tol = std::numeric_limits<R>::epsilon() * R(64) * R(sys.m);
  for (;;) {
    R resid = circle_lift(sys, x) - target;
    if (abs(resid) <= tol) break;
    x -= resid / circle_derivative(sys, x);
    if (++steps > 60) throw std::runtime_error("circle_branch_inverse: no convergence");
  }
  return x;
}

// Lattice representatives for torus_conformal branches: the det = a^2+b^2
// integer points lambda with M^{-1} lambda in [0,1)^2; preimages of w are
// M^{-1}(w + lambda).
inline std::vector<std::array<int, 2>> conformal_branch_offsets(const System& sys) {
  int a = sys.mul_a, b = sys.mul_b;
  int det = a * a + b * b;
  std::vector<std::array<int, 2>> out;
  int bound = std::abs(a) + std::abs(b) + 1;
  for (int u = -bound; u <= bound; ++u) {
    for (int v = -bound; v <= bound; ++v) {
      // M^{-1} = 1/det [[a, b], [-b, a]]
      double x = (a * u + b * v) / double(det);
      double y = (-b * u + a * v) / double(det);
      if (x >= 0 && x < 1 && y >= 0 && y < 1) out.push_back({u, v});
    }
  }
  if (static_cast<int>(out.size()) != det)
    throw std::logic_error("conformal_branch_offsets: wrong representative count");
  return out;
}

template <class R>
inline TorusPoint<R> conformal_branch_inverse(const System& sys, const TorusPoint<R>& w,
                                              const std::array<int, 2>& lambda) {
  R det(sys.mul_a * sys.mul_a + sys.mul_b * sys.mul_b);
  R u = w[0] + R(lambda[0]), v = w[1] + R(lambda[1]);
  R x = (R(sys.mul_a) * u + R(sys.mul_b) * v) / det;
  R y = (R(-sys.mul_b) * u + R(sys.mul_a) * v) / det;
  return to_point2(std::move(x), std::move(y));
}

// Anosov inverse. cat^{-1} = [[1,-1],[-1,2]]; the perturbed inverse solves the
// scalar equation x1 + delta sin(2 pi x1) = u1 by Newton (contraction rate
// 2 pi delta << 1 guarantees the unique root).
template <class R>
inline TorusPoint<R> anosov_inverse(const System& sys, const TorusPoint<R>& w) {
  if (sys.kind == SystemKind::cat_map)
    return to_point2(w[0] - w[1], R(2) * w[1] - w[0]);
  // lift-free: u = C^{-1} w has u1 = w1 - w2 (mod 1), and the true x1 solves
  // x1 + delta sin(2 pi x1) = u1 (mod 1)
  R u1 = wrap_unit(w[0] - w[1]);
  R x1 = u1;
  R tol = std::numeric_limits<R>::epsilon() * R(64);
  int steps = 0;
  for (;;) {
    R resid = x1 + R(sys.delta) * sin(R(2 * kPi) * x1) - u1;
    if (abs(resid) <= tol) break;
    x1 -= resid / (R(1) + R(2 * kPi * sys.delta) * cos(R(2 * kPi) * x1));
    if (++steps > 80) throw std::runtime_error("anosov_inverse: no convergence");
  }
  // second coordinate from x2 = w2 - x1
  return to_point2(std::move(x1), w[1] - x1);
}

// ---- hyperbolic splitting ----------------------------------------------------

struct Splitting {
  TorusPoint<double> point;
  std::array<double, 2> e_u{1, 0};
  std::array<double, 2> e_s{0, 1};
  double residual = 0;  // invariance defect of e_u under Df
};

inline std::array<double, 2> normalized(std::array<double, 2> v) {
  double n = std::hypot(v[0], v[1]);
  return {v[0] / n, v[1] / n};
}

// Exact cat-map eigendata: eigenvalues (3 +- sqrt5)/2, orthogonal eigenvectors
// (1, (sqrt5-1)/2) and (1, -(sqrt5+1)/2).
inline Splitting cat_splitting(const TorusPoint<double>& p) {
  Splitting s;
  s.point = p;
  double r5 = std::sqrt(5.0);
  s.e_u = normalized({1.0, (r5 - 1) / 2});
  s.e_s = normalized({1.0, -(r5 + 1) / 2});
  s.residual = 0;
  return s;
}

// Power iteration of the derivative cocycle: e_u(x) from Df^n along the
// backward orbit of x applied to a seed vector; e_s from the inverse cocycle
// along the forward orbit. Residual measures one-step invariance.
inline Splitting unstable_direction(const System& sys, const TorusPoint<double>& x,
                                    int iterations, double tolerance = 1e-9) {
  if (!sys.is_anosov())
    throw std::invalid_argument("unstable_direction: system has no splitting");
  if (sys.kind == SystemKind::cat_map) return cat_splitting(x);

  Splitting ref = cat_splitting(x);
  // backward orbit x_{-n}, ..., x_0 = x
  std::vector<TorusPoint<double>> back(static_cast<size_t>(iterations) + 1);
  back[static_cast<size_t>(iterations)] = x;
  for (int i = iterations - 1; i >= 0; --i)
    back[static_cast<size_t>(i)] = anosov_inverse(sys, back[static_cast<size_t>(i) + 1]);
  std::array<double, 2> v = ref.e_u;
  for (int i = 0; i < iterations; ++i)
    v = normalized(jacobian(sys, back[static_cast<size_t>(i)]).mul(v));

  // stable direction: push the reference e_s through Df^{-n} along the forward orbit
  std::vector<TorusPoint<double>> fwd(static_cast<size_t>(iterations) + 1);
  fwd[0] = x;
  for (int i = 0; i < iterations; ++i)
    fwd[static_cast<size_t>(i) + 1] = apply(sys, fwd[static_cast<size_t>(i)]);
  std::array<double, 2> w = ref.e_s;
  for (int i = iterations; i > 0; --i)
    w = normalized(jacobian(sys, fwd[static_cast<size_t>(i) - 1]).inverse().mul(w));

  Splitting out;
  out.point = x;
  out.e_u = v;
  out.e_s = w;
  // residual: | Df(x) e_u - |Df(x) e_u| * e_u(f(x)) |
  Splitting at_image = [&] {
    if (iterations == 0) return ref;
    std::vector<TorusPoint<double>> b2(static_cast<size_t>(iterations) + 1);
    b2[static_cast<size_t>(iterations)] = apply(sys, x);
    for (int i = iterations - 1; i >= 0; --i)
      b2[static_cast<size_t>(i)] = anosov_inverse(sys, b2[static_cast<size_t>(i) + 1]);
    std::array<double, 2> u = ref.e_u;
    for (int i = 0; i < iterations; ++i)
      u = normalized(jacobian(sys, b2[static_cast<size_t>(i)]).mul(u));
    Splitting s2;
    s2.e_u = u;
    return s2;
  }();
  auto img = jacobian(sys, x).mul(v);
  double n = std::hypot(img[0], img[1]);
  double sign = (img[0] * at_image.e_u[0] + img[1] * at_image.e_u[1]) >= 0 ? 1.0 : -1.0;
  out.residual = std::hypot(img[0] - sign * n * at_image.e_u[0], img[1] - sign * n * at_image.e_u[1]);
  if (out.residual > tolerance)
    throw std::runtime_error("unstable_direction: residual " + std::to_string(out.residual) +
                             " above tolerance after " + std::to_string(iterations) + " iterations");
  return out;
}

// Local frame: coordinates of a displacement vector in the (e_u, e_s) basis.
struct Frame2 {
  std::array<double, 2> e_u, e_s;

  // solve d = u*e_u + s*e_s
  std::array<double, 2> coords(const std::array<double, 2>& d) const {
    double det = e_u[0] * e_s[1] - e_u[1] * e_s[0];
    double u = (d[0] * e_s[1] - d[1] * e_s[0]) / det;
    double s = (e_u[0] * d[1] - e_u[1] * d[0]) / det;
    return {u, s};
  }
};

inline Frame2 local_frame(const System& sys, const TorusPoint<double>& x, int iterations = 60) {
  Splitting sp = sys.kind == SystemKind::cat_map ? cat_splitting(x)
                                                 : unstable_direction(sys, x, iterations);
  return Frame2{sp.e_u, sp.e_s};
}

// Stable-holonomy projection: slide w along its local stable leaf onto the
// local unstable leaf of z. Exact linear decomposition for the cat map; for
// the perturbed map the leaves are taken to first order around the computed
// direction fields (error O(delta * locality), asserted in tests).
template <class R>
inline TorusPoint<R> holonomy_project(const System& sys, const TorusPoint<R>& w,
                                      const TorusPoint<R>& z, double locality = 0.05) {
  if (!sys.is_anosov()) throw std::invalid_argument("holonomy_project: Anosov systems only");
  if (locality > 0.05) throw std::invalid_argument("holonomy_project: locality above 0.05");
  R d = torus_distance(w, z);
  if (to_double(d) > locality) throw std::invalid_argument("holonomy_project: points too far apart");
  Frame2 fr = local_frame(sys, point_to_double(z));
  R du = wrap_diff(w[0], z[0]), dv = wrap_diff(w[1], z[1]);
  double det = fr.e_u[0] * fr.e_s[1] - fr.e_u[1] * fr.e_s[0];
  R u = (du * R(fr.e_s[1]) - dv * R(fr.e_s[0])) / R(det);
  return to_point2(z[0] + u * R(fr.e_u[0]), z[1] + u * R(fr.e_u[1]));
}

}  // namespace schmidt
