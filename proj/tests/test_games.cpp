#include <catch2/catch_amalgamated.hpp>

#include "schmidt/games.hpp"

using namespace schmidt;

using Ball = MetricBall<double>;
using Pt = TorusPoint<double>;

TEST_CASE("schmidt engine accepts the lawful concentric line") {
  SchmidtState<double> st(0.5, 0.5);
  schmidt_step(st, Ball(Pt(0.5), 0.1), Player::bob);
  schmidt_step(st, Ball(Pt(0.5), 0.05), Player::alice);
  schmidt_step(st, Ball(Pt(0.5), 0.025), Player::bob);
  CHECK(st.bob_balls.size() == 2);
  // radius law: r at round k is rho1 (alpha beta)^{k-1} {1 or alpha}
  SchmidtState<double> big(0.5, 0.5);
  double rho1 = 0.1;
  schmidt_step(big, Ball(Pt(0.5), rho1), Player::bob);
  for (int k = 1; k <= 12; ++k) {
    double ra = rho1 * std::pow(0.25, k - 1) * 0.5;
    schmidt_step(big, Ball(Pt(0.5), ra), Player::alice);
    double rb = rho1 * std::pow(0.25, k);
    schmidt_step(big, Ball(Pt(0.5), rb), Player::bob);
  }
  CHECK(big.bob_balls.back().radius == Catch::Approx(rho1 * std::pow(0.25, 12)));
}

TEST_CASE("schmidt engine rejects bad radii and escapes") {
  SchmidtState<double> st(0.5, 0.5);
  schmidt_step(st, Ball(Pt(0.5), 0.1), Player::bob);
  try {
    schmidt_step(st, Ball(Pt(0.5), 0.06), Player::alice);
    FAIL("expected IllegalRadius");
  } catch (const rule_violation& e) {
    CHECK(e.code == RuleError::illegal_radius);
    CHECK(e.offender == Player::alice);
  }
  try {
    schmidt_step(st, Ball(Pt(0.56), 0.05), Player::alice);
    FAIL("expected NotContained");
  } catch (const rule_violation& e) {
    CHECK(e.code == RuleError::not_contained);
  }
  try {
    schmidt_step(st, Ball(Pt(0.5), 0.05), Player::bob);
    FAIL("expected NotYourTurn");
  } catch (const rule_violation& e) {
    CHECK(e.code == RuleError::not_your_turn);
  }
  CHECK_THROWS_AS(
      [] {
        SchmidtState<double> s2(0.5, 0.5);
        schmidt_step(s2, Ball(Pt(0.5), 0.3), Player::bob);  // above the 1/8 cap
      }(),
      rule_violation);
}

TEST_CASE("potential engine budget arithmetic") {
  // the published boundary example scaled into the 1/8 radius regime
  double s = 1.0 / 8;
  PotentialState<double> st(0.5, 1.0);
  potential_step_bob(st, Ball(Pt(0.5), s));
  CHECK_NOTHROW(potential_step_alice(st, {Ball(Pt(0.2), 0.3 * s), Ball(Pt(0.6), 0.2 * s)}));

  PotentialState<double> st2(0.5, 1.0);
  potential_step_bob(st2, Ball(Pt(0.5), s));
  try {
    potential_step_alice(st2, {Ball(Pt(0.2), 0.3 * s), Ball(Pt(0.6), 0.3 * s)});
    FAIL("expected BudgetExceeded");
  } catch (const rule_violation& e) {
    CHECK(e.code == RuleError::budget_exceeded);
  }

  // gamma = 2 boundary case: 0.09 + 0.16 = 0.25 = (0.5)^2
  PotentialState<double> st3(0.5, 2.0);
  potential_step_bob(st3, Ball(Pt(0.5), s));
  CHECK_NOTHROW(potential_step_alice(st3, {Ball(Pt(0.2), 0.3 * s), Ball(Pt(0.6), 0.4 * s)}));

  // Bob may ignore removals but not shrink below beta rho
  PotentialState<double> st4(0.5, 1.0);
  potential_step_bob(st4, Ball(Pt(0.5), s));
  potential_step_alice(st4, {});
  try {
    potential_step_bob(st4, Ball(Pt(0.5), 0.4 * s));
    FAIL("expected BobShrankTooFast");
  } catch (const rule_violation& e) {
    CHECK(e.code == RuleError::bob_shrank_too_fast);
  }
  CHECK_NOTHROW(potential_step_bob(st4, Ball(Pt(0.5), 0.5 * s)));
}

TEST_CASE("absolute engine") {
  double s = 1.0 / 8;
  AbsoluteState<double> st(0.3);
  absolute_step_bob(st, Ball(Pt(0.5), s));
  CHECK_NOTHROW(absolute_step_alice(st, Ball(Pt(0.5), 0.3 * s)));  // boundary radius
  // Bob must dodge the removal
  try {
    absolute_step_bob(st, Ball(Pt(0.5), 0.3 * s));
    FAIL("expected BobInsideRemoval");
  } catch (const rule_violation& e) {
    CHECK(e.code == RuleError::bob_inside_removal);
  }
  CHECK_NOTHROW(absolute_step_bob(st, Ball(Pt(0.5 + 0.65 * s), 0.3 * s)));

  AbsoluteState<double> st2(0.3);
  absolute_step_bob(st2, Ball(Pt(0.5), s));
  try {
    absolute_step_alice(st2, Ball(Pt(0.5), 0.31 * s));
    FAIL("expected RemovalTooLarge");
  } catch (const rule_violation& e) {
    CHECK(e.code == RuleError::removal_too_large);
  }
  CHECK_THROWS_AS(AbsoluteState<double>(0.34), std::invalid_argument);
}

TEST_CASE("modified engine level arithmetic and nesting") {
  TilingFamily t(System::doubling(), 0.1, 42);
  ModifiedState st(2, 2, t);
  Atom open = t.atom_containing(rational(1, 3), 3);
  modified_step(st, open, Player::bob);

  auto kids = t.descendants(open, 5);
  REQUIRE(!kids.empty());
  CHECK_NOTHROW(modified_step(st, kids.front(), Player::alice));

  // wrong level
  ModifiedState st2(2, 2, t);
  modified_step(st2, open, Player::bob);
  auto l4 = t.descendants(open, 4);
  REQUIRE(!l4.empty());
  try {
    modified_step(st2, l4.front(), Player::alice);
    FAIL("expected WrongLevel");
  } catch (const rule_violation& e) {
    CHECK(e.code == RuleError::wrong_level);
  }

  // not nested: a level-5 atom from elsewhere
  ModifiedState st3(2, 2, t);
  modified_step(st3, open, Player::bob);
  Atom elsewhere = t.atom_containing(rational(9, 10), 5);
  REQUIRE_FALSE(t.nested(elsewhere, open));
  try {
    modified_step(st3, elsewhere, Player::alice);
    FAIL("expected NotNested");
  } catch (const rule_violation& e) {
    CHECK(e.code == RuleError::not_nested);
  }
}

TEST_CASE("engines at mp precision validate ratios below double range") {
  SchmidtState<mpreal> st(mpreal(1) / 64, mpreal(1) / 2);
  mpreal rho = mpreal(1) / 10;
  schmidt_step(st, MetricBall<mpreal>(TorusPoint<mpreal>(mpreal(1) / 2, mpreal(1) / 2), rho),
               Player::bob);
  mpreal r = rho;
  for (int k = 0; k < 170; ++k) {
    r = r * st.alpha;
    schmidt_step(st, MetricBall<mpreal>(st.bob_balls.back().center, r), Player::alice);
    r = r * st.beta;
    schmidt_step(st, MetricBall<mpreal>(st.alice_balls.back().center, r), Player::bob);
  }
  CHECK(log2_abs(st.bob_balls.back().radius) < -1100);
  // a 2e-12 relative error at depth is rejected
  mpreal bad = r * st.alpha * (mpreal(1) + mpreal(2e-12));
  try {
    schmidt_step(st, MetricBall<mpreal>(st.bob_balls.back().center, bad), Player::alice);
    FAIL("expected IllegalRadius");
  } catch (const rule_violation& e) {
    CHECK(e.code == RuleError::illegal_radius);
  }
}
