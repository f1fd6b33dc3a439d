// f-induced epsilon-tilings on the circle.
//
// Level 1 is the Voronoi partition of a maximal epsilon-separated set; level n
// consists of the connected components of f^{-(n-1)} applied to level-1 cells.
// For piecewise-linear maps (delta = 0) atoms exist implicitly at every level:
// the atom over cell i with branch index j at level n is the exact arc
// ((bound_i + j) / m^{n-1}, cell_len_i / m^{n-1}), so the certified properties
// extend to the very deep levels the modified game plays at. Nonlinear maps
// materialize endpoint lists per level (depth-capped) via Newton pullbacks.

#pragma once

#include <map>
#include <optional>

#include "schmidt/arcs.hpp"
#include "schmidt/preimage.hpp"

namespace schmidt {

struct SeparatedSet {
  int dim = 1;
  double epsilon = 0;
  std::vector<TorusPoint<double>> points;
  std::vector<rational> points_1d;  // sorted, d=1 only
};

// Greedy insertion over a seed-shuffled fine grid (mesh epsilon/10).
inline SeparatedSet build_separated_set(int dim, double epsilon, std::uint64_t seed) {
  if (epsilon <= 0 || epsilon >= 1) throw std::invalid_argument("build_separated_set: need 0 < epsilon < 1");
  if (dim != 1 && dim != 2) throw std::invalid_argument("build_separated_set: dim must be 1 or 2");
  SeparatedSet out;
  out.dim = dim;
  out.epsilon = epsilon;
  rational eps = rational_snap(epsilon);
  long grid = static_cast<long>(std::ceil(10.0 / epsilon));
  Rng rng(seed);
  if (dim == 1) {
    std::vector<long> idx(static_cast<size_t>(grid));
    for (long i = 0; i < grid; ++i) idx[static_cast<size_t>(i)] = i;
    for (size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.below(i)]);
    std::vector<rational> acc;
    for (long i : idx) {
      rational cand(i, grid);
      bool ok = true;
      for (const auto& p : acc)
        if (circle_dist_rat(cand, p) < eps) { ok = false; break; }
      if (ok) acc.push_back(cand);
    }
    std::sort(acc.begin(), acc.end());
    out.points_1d = acc;
    for (const auto& p : acc) out.points.push_back(TorusPoint<double>(to_double(p)));
  } else {
    std::vector<std::array<long, 2>> idx;
    for (long i = 0; i < grid; ++i)
      for (long j = 0; j < grid; ++j) idx.push_back({i, j});
    for (size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.below(i)]);
    std::vector<TorusPoint<double>> acc;
    for (auto& ij : idx) {
      TorusPoint<double> cand(double(ij[0]) / double(grid), double(ij[1]) / double(grid));
      bool ok = true;
      for (const auto& p : acc)
        if (to_double(torus_distance(cand, p)) < epsilon) { ok = false; break; }
      if (ok) acc.push_back(cand);
    }
    out.points = acc;
  }
  return out;
}

// check SeparatedSet invariants: pairwise >= eps, grid-maximality at mesh eps/10
inline bool separated_set_valid(const SeparatedSet& s) {
  size_t n = s.points.size();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (to_double(torus_distance(s.points[i], s.points[j])) < s.epsilon * (1 - 1e-12)) return false;
  long grid = static_cast<long>(std::ceil(10.0 / s.epsilon));
  auto covered = [&](const TorusPoint<double>& q) {
    for (const auto& p : s.points)
      if (to_double(torus_distance(q, p)) <= s.epsilon * (1 + 1e-12)) return true;
    return false;
  };
  if (s.dim == 1) {
    for (long i = 0; i < grid; ++i)
      if (!covered(TorusPoint<double>(double(i) / double(grid)))) return false;
  } else {
    for (long i = 0; i < grid; ++i)
      for (long j = 0; j < grid; ++j)
        if (!covered(TorusPoint<double>(double(i) / double(grid), double(j) / double(grid)))) return false;
  }
  return true;
}

// Atom handle: level n, the level-1 cell it maps onto under f^{n-1}, a branch
// index, and the exact arc. Branch indices at level n run over [0, m^{n-1}).
struct Atom {
  int level = 1;
  int cell = 0;
  bigint branch = 0;
  RatArc arc;

  double diameter() const { return to_double(arc.len); }
  TorusPoint<double> base_point() const { return TorusPoint<double>(to_double(arc.mid())); }
  MetricBall<double> enclosure() const {
    return MetricBall<double>(base_point(), to_double(arc.len) / 2);
  }
  bool same_as(const Atom& o) const {
    return level == o.level && cell == o.cell && branch == o.branch;
  }
};

struct LevelStats {
  int level = 0;
  long count = 0;
  double max_diameter = 0, min_diameter = 0;
  double total_measure = 0;
};

struct CertificationReport {
  bool ok = false;
  std::string failure;
  int max_level = 0;
  int a_star = 0;
  double sigma_fit = 0, c_fit = 0;       // MSG2: diam <= C exp(-sigma n)
  double min_atom_measure = 0;           // nu1 witness
  double nu2_witness = 0;                // empirical c(a) lower bound
  std::vector<LevelStats> levels;
};

class TilingFamily {
 public:
  TilingFamily(System sys, double epsilon, std::uint64_t seed)
      : sys_(std::move(sys)), seed_(seed) {
    if (sys_.dim() != 1 || !sys_.is_expanding())
      throw std::invalid_argument("TilingFamily: implemented for expanding circle maps");
    if (epsilon > 0.2) throw std::invalid_argument("TilingFamily: need epsilon <= 0.2");
    set_ = build_separated_set(1, epsilon, seed);
    epsilon_ = rational_snap(epsilon);
    const auto& p = set_.points_1d;
    size_t k = p.size();
    for (size_t i = 0; i < k; ++i) {
      const rational& a = p[i];
      const rational& b = p[(i + 1) % k];
      rational gap = wrap_unit_rat(b - a);
      if (gap == 0) gap = 1;  // single site: whole circle
      bounds_.push_back(wrap_unit_rat(a + gap / 2));
    }
    std::sort(bounds_.begin(), bounds_.end());
    endpoints_.push_back(bounds_);
  }

  // tiling over an explicit site list (tests, prescribed Voronoi cells)
  TilingFamily(System sys, std::vector<rational> sites, double epsilon)
      : sys_(std::move(sys)), seed_(0) {
    if (sys_.dim() != 1 || !sys_.is_expanding())
      throw std::invalid_argument("TilingFamily: implemented for expanding circle maps");
    if (sites.empty()) throw std::invalid_argument("TilingFamily: need at least one site");
    epsilon_ = rational_snap(epsilon);
    std::sort(sites.begin(), sites.end());
    set_.dim = 1;
    set_.epsilon = epsilon;
    set_.points_1d = sites;
    for (const auto& p : sites) set_.points.push_back(TorusPoint<double>(to_double(p)));
    size_t k = sites.size();
    for (size_t i = 0; i < k; ++i) {
      rational gap = wrap_unit_rat(sites[(i + 1) % k] - sites[i]);
      if (gap == 0) gap = 1;
      bounds_.push_back(wrap_unit_rat(sites[i] + gap / 2));
    }
    std::sort(bounds_.begin(), bounds_.end());
    endpoints_.push_back(bounds_);
  }

  const System& system() const { return sys_; }
  double epsilon() const { return to_double(epsilon_); }
  std::uint64_t seed() const { return seed_; }
  int cell_count() const { return static_cast<int>(bounds_.size()); }
  bool exact_levels() const { return sys_.is_linear(); }
  int levels_built() const { return static_cast<int>(endpoints_.size()); }

  rational cell_start(int i) const { return bounds_[static_cast<size_t>(i)]; }
  rational cell_len(int i) const {
    size_t k = bounds_.size();
    if (k == 1) return rational(1);
    rational g = wrap_unit_rat(bounds_[(static_cast<size_t>(i) + 1) % k] - bounds_[static_cast<size_t>(i)]);
    return g == 0 ? rational(1) : g;
  }

  // exact arc of the atom (cell i, branch j) at level n; valid for all n on
  // linear systems, for built levels otherwise
  Atom atom(int n, int cell, const bigint& branch) const {
    Atom a;
    a.level = n;
    a.cell = cell;
    a.branch = branch;
    if (exact_levels()) {
      bigint den = pow_m(n - 1);
      a.arc.start = wrap_unit_rat((cell_start(cell) + rational(branch)) / rational(den));
      a.arc.len = cell_len(cell) / rational(den);
    } else {
      a.arc = lookup_arc(n, cell, branch);
    }
    return a;
  }

  bigint branch_span(int n) const { return pow_m(n - 1); }

  // unique level-n atom whose interior contains z; boundary gap 1e-9 rejected
  Atom atom_containing(const rational& z, int n) const {
    ensure_level(n);
    rational zz = wrap_unit_rat(z);
    if (exact_levels()) {
      bigint den = pow_m(n - 1);
      rational scaled = zz * rational(den);  // locate f^{n-1}(z) = frac(scaled)
      bigint whole = numerator(scaled) / denominator(scaled);
      rational body = scaled - rational(whole);  // in [0,1): position within level-1
      int cell = locate_cell(body);
      Atom a = atom(n, cell, whole);
      if (!a.arc.contains_point(zz)) {
        // wrapped cell: the branch index shifts by one
        a = atom(n, cell, wrap_branch(whole - 1, den));
        if (!a.arc.contains_point(zz)) a = atom(n, cell, wrap_branch(whole + 1, den));
      }
      check_interior(a, zz, n);
      return a;
    }
    const auto& eps = endpoints_[static_cast<size_t>(n - 1)];
    auto it = std::upper_bound(eps.begin(), eps.end(), zz);
    size_t idx = (it == eps.begin() ? eps.size() : static_cast<size_t>(it - eps.begin())) - 1;
    Atom a = materialized_atom(n, idx);
    check_interior(a, zz, n);
    return a;
  }

  // all level-n atoms (materializes; count = m^{n-1} * cells)
  std::vector<Atom> atoms_level(int n) const {
    ensure_level(n);
    std::vector<Atom> out;
    if (exact_levels()) {
      bigint span = pow_m(n - 1);
      if (span * cell_count() > bigint(1) << 22)
        throw std::invalid_argument("atoms_level: level too deep to materialize");
      for (bigint j = 0; j < span; ++j)
        for (int i = 0; i < cell_count(); ++i) out.push_back(atom(n, i, j));
    } else {
      size_t cnt = endpoints_[static_cast<size_t>(n - 1)].size();
      for (size_t idx = 0; idx < cnt; ++idx) out.push_back(materialized_atom(n, idx));
    }
    return out;
  }

  // level-n2 atoms whose closure sits inside the closure of `parent`
  std::vector<Atom> descendants(const Atom& parent, int n2) const {
    if (n2 <= parent.level) throw std::invalid_argument("descendants: need n2 > parent level");
    ensure_level(n2);
    std::vector<Atom> out;
    if (exact_levels()) {
      bigint den = pow_m(n2 - 1);
      rational lo = parent.arc.start;
      rational hi = lo + parent.arc.len;  // lifted end, may exceed 1
      for (int i = 0; i < cell_count(); ++i) {
        // j range: lo <= (b_i + j)/den and (b_i + j + len_i)/den <= hi
        rational jmin = lo * rational(den) - cell_start(i);
        rational jmax = hi * rational(den) - cell_start(i) - cell_len(i);
        for (bigint j = ceil_rat(jmin); j <= floor_rat(jmax); ++j)
          out.push_back(atom(n2, i, wrap_branch(j, den)));
      }
    } else {
      for (size_t idx = 0; idx < endpoints_[static_cast<size_t>(n2 - 1)].size(); ++idx) {
        Atom a = materialized_atom(n2, idx);
        if (parent.arc.contains_arc(a.arc)) out.push_back(a);
      }
    }
    std::sort(out.begin(), out.end(), [](const Atom& a, const Atom& b) {
      return a.arc.start < b.arc.start;
    });
    return out;
  }

  bool nested(const Atom& inner, const Atom& outer) const {
    return outer.arc.contains_arc(inner.arc);
  }

  // image atom under f^t (linear lane): level drops by t, branch reduces mod span
  Atom image_atom(const Atom& a, int t) const {
    if (!exact_levels()) throw std::logic_error("image_atom: linear systems only");
    if (t >= a.level) throw std::invalid_argument("image_atom: t too large");
    bigint span = pow_m(a.level - t - 1);
    return atom(a.level - t, a.cell, a.branch % span);
  }

  // branch word of an atom: branch applied at each pullback level, recovered
  // from the forward orbit of the midpoint
  std::vector<int> branch_word(const Atom& a) const {
    std::vector<int> w;
    TorusPoint<double> p = a.base_point();
    for (int t = 1; t < a.level; ++t) {
      int b = static_cast<int>(std::floor(to_double(circle_lift(sys_, p[0]))));
      b = std::min(std::max(b, 0), sys_.m - 1);
      w.push_back(b);
      p = apply(sys_, p);
    }
    return w;
  }

  CertificationReport certify(int max_n) const;

 private:
  System sys_;
  std::uint64_t seed_;
  rational epsilon_;
  SeparatedSet set_;
  std::vector<rational> bounds_;  // sorted cell boundaries
  mutable std::vector<std::vector<rational>> endpoints_;  // per level, nonlinear lane

  static bigint floor_rat(const rational& q) {
    bigint n = numerator(q), d = denominator(q);
    if (n >= 0) return n / d;
    bigint up = (-n + d - 1) / d;
    return -up;
  }
  static bigint ceil_rat(const rational& q) { return -floor_rat(-q); }
  static bigint wrap_branch(bigint j, const bigint& span) {
    j %= span;
    if (j < 0) j += span;
    return j;
  }

  bigint pow_m(int e) const {
    bigint out = 1;
    for (int i = 0; i < e; ++i) out *= sys_.m;
    return out;
  }

  int locate_cell(const rational& body) const {
    auto it = std::upper_bound(bounds_.begin(), bounds_.end(), body);
    size_t idx = (it == bounds_.begin() ? bounds_.size() : static_cast<size_t>(it - bounds_.begin())) - 1;
    return static_cast<int>(idx);
  }

  void check_interior(const Atom& a, const rational& z, int n) const {
    rational gap1 = circle_dist_rat(z, a.arc.start);
    rational gap2 = circle_dist_rat(z, a.arc.end());
    rational tol = rational_snap(1e-9);
    if (gap1 < tol || gap2 < tol)
      throw std::runtime_error("atom_containing: point within 1e-9 of an atom boundary at level " +
                               std::to_string(n));
    if (!a.arc.contains_point(z))
      throw std::logic_error("atom_containing: lookup failed");
  }

  void ensure_level(int n) const {
    if (exact_levels()) return;
    if (n > 24) throw std::invalid_argument("tiling: depth cap exceeded for nonlinear maps");
    while (static_cast<int>(endpoints_.size()) < n) {
      const auto& prev = endpoints_.back();
      std::vector<rational> next;
      next.reserve(prev.size() * static_cast<size_t>(sys_.m));
      if (next.capacity() > (size_t(1) << 22))
        throw std::invalid_argument("tiling: level too large");
      for (const auto& e : prev) {
        double ed = to_double(e);
        for (int b = 0; b < sys_.m; ++b)
          next.push_back(rational_from_double(to_double(circle_branch_inverse(sys_, ed, b))));
      }
      std::sort(next.begin(), next.end());
      endpoints_.push_back(std::move(next));
    }
  }

  // Nonlinear lane: branch is the global index of the atom in start order.
  RatArc lookup_arc(int n, int cell, const bigint& branch) const {
    ensure_level(n);
    Atom a = materialized_atom(n, branch.convert_to<size_t>());
    if (a.cell != cell) throw std::invalid_argument("tiling: no such atom");
    return a.arc;
  }

  Atom materialized_atom(int n, size_t idx) const {
    const auto& eps = endpoints_[static_cast<size_t>(n - 1)];
    size_t k = eps.size();
    rational lo = eps[idx];
    rational len = idx + 1 < k ? eps[idx + 1] - lo : wrap_unit_rat(eps[0] - lo);
    if (len == 0) len = 1;
    Atom a;
    a.level = n;
    a.arc = RatArc{lo, len};
    // the cell is the image of the midpoint under f^{n-1}
    TorusPoint<double> p(to_double(a.arc.mid()));
    for (int t = 1; t < n; ++t) p = apply(sys_, p);
    a.cell = locate_cell(rational_from_double(p[0]));
    a.branch = static_cast<long>(idx);
    return a;
  }
};

// ---- certification -----------------------------------------------------------

inline CertificationReport TilingFamily::certify(int max_n) const {
  CertificationReport rep;
  rep.max_level = max_n;
  auto fail = [&](std::string why) {
    rep.ok = false;
    rep.failure = std::move(why);
    return rep;
  };

  std::vector<std::vector<Atom>> levels;
  for (int n = 1; n <= max_n; ++n) levels.push_back(atoms_level(n));

  // per-level stats + partition checks (disjoint, covering, measure total)
  for (int n = 1; n <= max_n; ++n) {
    auto& atoms = levels[static_cast<size_t>(n - 1)];
    LevelStats st;
    st.level = n;
    st.count = static_cast<long>(atoms.size());
    std::vector<RatArc> sorted;
    rational total = 0;
    for (auto& a : atoms) {
      sorted.push_back(a.arc);
      total += a.arc.len;
      double d = a.diameter();
      st.max_diameter = std::max(st.max_diameter, d);
      st.min_diameter = st.min_diameter == 0 ? d : std::min(st.min_diameter, d);
      if (a.arc.len <= 0) return fail("empty atom at level " + std::to_string(n));
    }
    st.total_measure = to_double(total);
    rep.levels.push_back(st);
    if (abs(total - 1) > rational_snap(1e-6))
      return fail("level " + std::to_string(n) + " measures sum to " + std::to_string(st.total_measure));
    std::sort(sorted.begin(), sorted.end(),
              [](const RatArc& a, const RatArc& b) { return a.start < b.start; });
    for (size_t i = 0; i + 1 < sorted.size(); ++i)
      if (sorted[i].start + sorted[i].len > sorted[i + 1].start)
        return fail("overlapping atoms at level " + std::to_string(n));
  }

  // size condition: every atom maps under f^{n-1} onto its level-1 cell, so
  // B(f^n(x), eps/2) subset f^n(atom) subset B(f^n(x), eps) reduces to the
  // cell widths sitting inside [eps/2, 2 eps] around the site.
  for (int i = 0; i < cell_count(); ++i) {
    double len = to_double(cell_len(i));
    if (len > 2 * to_double(epsilon_) + 1e-12)
      return fail("cell " + std::to_string(i) + " wider than 2 eps");
    if (len < to_double(epsilon_) * 0.5 - 1e-12)
      return fail("cell " + std::to_string(i) + " narrower than eps/2");
  }

  // MSG2 fit: least squares on log(max diameter) vs level
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (auto& st : rep.levels) {
      double x = st.level, y = std::log(st.max_diameter);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
    double slope = n > 1 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0;
    rep.sigma_fit = -slope;
    double want = std::log(expansion_bounds(sys_).sigma1);
    if (max_n > 1 && rep.sigma_fit < want - 0.05)
      return fail("MSG2 rate " + std::to_string(rep.sigma_fit) + " below log sigma1 - 0.05");
    rep.c_fit = 0;
    for (auto& st : rep.levels)
      rep.c_fit = std::max(rep.c_fit, st.max_diameter * std::exp(rep.sigma_fit * st.level));
    for (auto& st : rep.levels)
      if (st.max_diameter > rep.c_fit * std::exp(-rep.sigma_fit * st.level) * (1 + 1e-9))
        return fail("MSG2 bound violated at level " + std::to_string(st.level));
  }

  // MSG0: smallest a_* with descendants at every level gap m > a_*.
  // Linear lane: the test is branch-independent, so one cell-level check
  // certifies all levels at once.
  {
    int max_fail = 0;
    if (exact_levels()) {
      int probe = std::max(2, max_n);
      for (int gap = 1; gap <= probe; ++gap) {
        bool all_ok = true;
        for (int i = 0; i < cell_count() && all_ok; ++i) {
          Atom parent = atom(1, i, 0);
          if (descendants(parent, 1 + gap).empty()) all_ok = false;
        }
        if (!all_ok) max_fail = gap;
      }
    } else {
      for (int n = 1; n <= max_n; ++n)
        for (int gap = 1; n + gap <= max_n; ++gap)
          for (auto& parent : levels[static_cast<size_t>(n - 1)])
            if (descendants(parent, n + gap).empty()) max_fail = std::max(max_fail, gap);
    }
    rep.a_star = std::max(max_fail, 1);
  }

  // nu1: every atom has positive measure; record the smallest seen
  {
    double mn = 1;
    for (auto& st : rep.levels) mn = std::min(mn, st.min_diameter);
    rep.min_atom_measure = mn;
    if (mn <= 0) return fail("nu1: atom of zero measure");
  }

  // nu2 sample: 20 random atoms omega, b = a_*+1, a = a_*+1; the witness is
  // sum_i min_{child at +a inside theta_i} measure over descendants theta_i
  // at +b, as a fraction of omega's measure
  {
    Rng rng(seed_ ^ 0xabcdef12345ULL);
    double witness = 1;
    int got = 0;
    int bb = rep.a_star + 1, aa = rep.a_star + 1;
    for (int trial = 0; trial < 200 && got < 20; ++trial) {
      int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, max_n - bb - aa))));
      auto& lev = levels[static_cast<size_t>(n - 1)];
      if (lev.empty()) continue;
      const Atom& omega = lev[rng.below(lev.size())];
      auto thetas = descendants(omega, n + bb);
      if (thetas.empty()) return fail("nu2: no +b descendants");
      rational covered = 0;
      for (auto& th : thetas) {
        auto kids = descendants(th, n + bb + aa);
        if (kids.empty()) return fail("nu2: no +a grandchildren");
        rational mn = kids.front().arc.len;
        for (auto& kd : kids) mn = std::min(mn, kd.arc.len);
        covered += mn;
      }
      witness = std::min(witness, to_double(covered / omega.arc.len));
      ++got;
    }
    rep.nu2_witness = witness;
    if (witness <= 0) return fail("nu2: zero witness");
  }

  rep.ok = true;
  return rep;
}

}  // namespace schmidt
