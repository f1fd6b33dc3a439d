// Rule-enforcing engines for the four game types. Each step validates the
// incoming move against the game laws and either extends the state or throws a
// rule_violation carrying the exact error kind and the offending player.
//
// Radius laws are enforced to 1e-12 relative; ties resolve in the mover's
// favor (closed balls). Opening radii are capped at 1/8 so the flat-torus ball
// predicates stay exact.

#pragma once

#include "schmidt/geometry.hpp"
#include "schmidt/tilings.hpp"

namespace schmidt {

enum class Player { bob, alice };
inline const char* player_name(Player p) { return p == Player::bob ? "bob" : "alice"; }

enum class RuleError {
  not_your_turn,
  radius_cap,
  illegal_radius,
  not_contained,
  budget_exceeded,
  bob_shrank_too_fast,
  removal_too_large,
  bob_inside_removal,
  wrong_level,
  not_nested,
};

inline const char* rule_error_name(RuleError e) {
  switch (e) {
    case RuleError::not_your_turn: return "NotYourTurn";
    case RuleError::radius_cap: return "RadiusCap";
    case RuleError::illegal_radius: return "IllegalRadius";
    case RuleError::not_contained: return "NotContained";
    case RuleError::budget_exceeded: return "BudgetExceeded";
    case RuleError::bob_shrank_too_fast: return "BobShrankTooFast";
    case RuleError::removal_too_large: return "RemovalTooLarge";
    case RuleError::bob_inside_removal: return "BobInsideRemoval";
    case RuleError::wrong_level: return "WrongLevel";
    case RuleError::not_nested: return "NotNested";
  }
  return "?";
}

class rule_violation : public std::runtime_error {
 public:
  RuleError code;
  Player offender;
  rule_violation(RuleError c, Player p, const std::string& what)
      : std::runtime_error(std::string(rule_error_name(c)) + ": " + what), code(c), offender(p) {}
};

namespace detail {
template <class R>
inline void check_ratio(const R& got, const R& want, Player p, const char* what) {
  R tol = want * R(kRelTol);
  if (abs(got - want) > tol)
    throw rule_violation(RuleError::illegal_radius, p, what);
}
template <class R>
inline void check_opening(const MetricBall<R>& b, Player p) {
  if (b.radius <= R(0) || b.radius > R(kMaxGameRadius))
    throw rule_violation(RuleError::radius_cap, p, "opening radius must be in (0, 1/8]");
}
}  // namespace detail

// ---- Schmidt game -------------------------------------------------------------
// Bob opens with any ball; thereafter radii follow r_k = beta r'_{k-1} and
// r'_k = alpha r_k exactly, with each ball contained in the previous one.

template <class R>
struct SchmidtState {
  R alpha, beta;
  std::vector<MetricBall<R>> bob_balls, alice_balls;
  Player whose_turn = Player::bob;

  SchmidtState(R a, R b) : alpha(std::move(a)), beta(std::move(b)) {
    if (!(alpha > R(0) && alpha < R(1) && beta > R(0) && beta < R(1)))
      throw std::invalid_argument("schmidt: need alpha, beta in (0,1)");
  }
  const MetricBall<R>& last_ball() const {
    return whose_turn == Player::alice ? bob_balls.back() : alice_balls.back();
  }
};

template <class R>
inline void schmidt_step(SchmidtState<R>& st, const MetricBall<R>& move, Player mover) {
  if (mover != st.whose_turn)
    throw rule_violation(RuleError::not_your_turn, mover, "out of turn");
  if (mover == Player::bob) {
    if (st.bob_balls.empty()) {
      detail::check_opening(move, mover);
    } else {
      const auto& prev = st.alice_balls.back();
      detail::check_ratio(move.radius, R(st.beta * prev.radius), mover, "bob radius must be beta * r'");
      if (!ball_contains_ball(prev, move))
        throw rule_violation(RuleError::not_contained, mover, "bob ball escapes alice ball");
    }
    st.bob_balls.push_back(move);
    st.whose_turn = Player::alice;
  } else {
    const auto& prev = st.bob_balls.back();
    detail::check_ratio(move.radius, R(st.alpha * prev.radius), mover, "alice radius must be alpha * r");
    if (!ball_contains_ball(prev, move))
      throw rule_violation(RuleError::not_contained, mover, "alice ball escapes bob ball");
    st.alice_balls.push_back(move);
    st.whose_turn = Player::bob;
  }
}

// ---- potential game -----------------------------------------------------------
// Alice removes a countable family subject to sum rho_j^gamma <= (beta rho)^gamma;
// Bob only owes containment and rho_{i+1} >= beta rho_i.

template <class R>
struct PotentialState {
  R beta;
  double gamma;
  std::vector<MetricBall<R>> bob_balls;
  std::vector<std::vector<MetricBall<R>>> removals;
  Player whose_turn = Player::bob;

  PotentialState(R b, double g) : beta(std::move(b)), gamma(g) {
    if (!(beta > R(0) && beta < R(1)) || !(g > 0))
      throw std::invalid_argument("potential: need beta in (0,1), gamma > 0");
  }
};

template <class R>
inline R pow_gamma(const R& x, double gamma) {
  if (gamma == 1) return x;
  if (gamma == 2) return x * x;
  using std::exp;
  using std::log;
  return exp(R(gamma) * log(x));
}

template <class R>
inline void potential_step_bob(PotentialState<R>& st, const MetricBall<R>& move) {
  if (st.whose_turn != Player::bob)
    throw rule_violation(RuleError::not_your_turn, Player::bob, "out of turn");
  if (st.bob_balls.empty()) {
    detail::check_opening(move, Player::bob);
  } else {
    const auto& prev = st.bob_balls.back();
    if (move.radius < st.beta * prev.radius * (R(1) - R(kRelTol)))
      throw rule_violation(RuleError::bob_shrank_too_fast, Player::bob, "rho_{i+1} < beta rho_i");
    if (!ball_contains_ball(prev, move))
      throw rule_violation(RuleError::not_contained, Player::bob, "bob ball escapes previous ball");
  }
  st.bob_balls.push_back(move);
  st.whose_turn = Player::alice;
}

template <class R>
inline void potential_step_alice(PotentialState<R>& st, const std::vector<MetricBall<R>>& family) {
  if (st.whose_turn != Player::alice)
    throw rule_violation(RuleError::not_your_turn, Player::alice, "out of turn");
  R rho = st.bob_balls.back().radius;
  R budget = pow_gamma(R(st.beta * rho), st.gamma);
  R total(0);
  for (const auto& b : family) {
    if (b.radius <= R(0))
      throw rule_violation(RuleError::illegal_radius, Player::alice, "removal radius must be positive");
    total += pow_gamma(b.radius, st.gamma);
  }
  if (total > budget * (R(1) + R(kRelTol)))
    throw rule_violation(RuleError::budget_exceeded, Player::alice, "sum rho^gamma above (beta rho)^gamma");
  st.removals.push_back(family);
  st.whose_turn = Player::bob;
}

// ---- absolute game (0-dimensional) ---------------------------------------------
// Alice removes one ball of radius <= beta rho_i; Bob dodges it with a ball of
// radius >= beta rho_i inside B_i.

template <class R>
struct AbsoluteState {
  R beta;  // in (0, 1/3)
  std::vector<MetricBall<R>> bob_balls;
  std::vector<MetricBall<R>> removals;
  Player whose_turn = Player::bob;

  explicit AbsoluteState(R b) : beta(std::move(b)) {
    if (!(beta > R(0) && beta < R(1) / R(3)))
      throw std::invalid_argument("absolute: need beta in (0, 1/3)");
  }
};

template <class R>
inline void absolute_step_bob(AbsoluteState<R>& st, const MetricBall<R>& move) {
  if (st.whose_turn != Player::bob)
    throw rule_violation(RuleError::not_your_turn, Player::bob, "out of turn");
  if (st.bob_balls.empty()) {
    detail::check_opening(move, Player::bob);
  } else {
    const auto& prev = st.bob_balls.back();
    if (move.radius < st.beta * prev.radius * (R(1) - R(kRelTol)))
      throw rule_violation(RuleError::bob_shrank_too_fast, Player::bob, "rho_{i+1} < beta rho_i");
    if (!ball_contains_ball(prev, move))
      throw rule_violation(RuleError::not_contained, Player::bob, "bob ball escapes previous ball");
    const auto& rem = st.removals.back();
    if (ball_intersects_ball(move, rem))
      throw rule_violation(RuleError::bob_inside_removal, Player::bob, "bob ball meets the removal");
  }
  st.bob_balls.push_back(move);
  st.whose_turn = Player::alice;
}

template <class R>
inline void absolute_step_alice(AbsoluteState<R>& st, const MetricBall<R>& removal) {
  if (st.whose_turn != Player::alice)
    throw rule_violation(RuleError::not_your_turn, Player::alice, "out of turn");
  R rho = st.bob_balls.back().radius;
  if (removal.radius > st.beta * rho * (R(1) + R(kRelTol)))
    throw rule_violation(RuleError::removal_too_large, Player::alice, "removal radius above beta rho");
  if (removal.radius <= R(0))
    throw rule_violation(RuleError::removal_too_large, Player::alice, "removal radius must be positive");
  st.removals.push_back(removal);
  st.whose_turn = Player::bob;
}

// ---- modified game ------------------------------------------------------------
// Played on tiling atoms; levels advance by b (Bob) and a (Alice) and each atom
// closure must nest in the previous one.

struct ModifiedState {
  int a, b;
  const TilingFamily* tiling;
  std::vector<Atom> bob_atoms, alice_atoms;
  Player whose_turn = Player::bob;

  ModifiedState(int a_, int b_, const TilingFamily& t) : a(a_), b(b_), tiling(&t) {
    if (a < 1 || b < 1) throw std::invalid_argument("modified: need a, b >= 1");
  }
};

inline void modified_step(ModifiedState& st, const Atom& move, Player mover) {
  if (mover != st.whose_turn)
    throw rule_violation(RuleError::not_your_turn, mover, "out of turn");
  if (mover == Player::bob) {
    if (!st.bob_atoms.empty()) {
      const Atom& prev = st.alice_atoms.back();
      if (move.level != prev.level + st.b)
        throw rule_violation(RuleError::wrong_level, mover,
                             "bob atom must sit b levels below alice's");
      if (!st.tiling->nested(move, prev))
        throw rule_violation(RuleError::not_nested, mover, "bob atom not inside alice atom");
    } else if (move.level < 1) {
      throw rule_violation(RuleError::wrong_level, mover, "opening level must be >= 1");
    }
    st.bob_atoms.push_back(move);
    st.whose_turn = Player::alice;
  } else {
    const Atom& prev = st.bob_atoms.back();
    if (move.level != prev.level + st.a)
      throw rule_violation(RuleError::wrong_level, mover, "alice atom must sit a levels below bob's");
    if (!st.tiling->nested(move, prev))
      throw rule_violation(RuleError::not_nested, mover, "alice atom not inside bob atom");
    st.alice_atoms.push_back(move);
    st.whose_turn = Player::bob;
  }
}

}  // namespace schmidt
