#include <doctest.h>

#include <cmath>
#include <map>

#include "ipd/archetypes.hpp"
#include "ipd/engine.hpp"
#include "ipd/errors.hpp"
#include "support.hpp"

using namespace ipd;
using ipd::test::play;
using ipd::test::strategy;

namespace {

// Records what it saw each turn and plays a fixed script.
struct SpyLog {
  std::vector<std::size_t> own_sizes, opp_sizes;
};

StrategySpec spy(std::shared_ptr<SpyLog> log, std::string script) {
  class Spy final : public Player {
   public:
    Spy(std::shared_ptr<SpyLog> l, std::string s) : log_(std::move(l)), script_(std::move(s)) {}
    Action decide(const MatchView& v, Rng&) override {
      log_->own_sizes.push_back(v.own.size());
      log_->opp_sizes.push_back(v.opp.size());
      return script_[v.own.size() % script_.size()] == 'C' ? Action::C : Action::D;
    }

   private:
    std::shared_ptr<SpyLog> log_;
    std::string script_;
  };
  return StrategySpec("Spy", ArchetypeKind::builtin, {}, StrategyMetadata{},
                      [log, script] { return std::make_unique<Spy>(log, script); });
}

}  // namespace

TEST_CASE("payoff table") {
  const PayoffMatrix m;
  CHECK(payoff(Action::C, Action::C, m) == std::pair{3.0, 3.0});
  CHECK(payoff(Action::D, Action::C, m) == std::pair{5.0, 0.0});
  CHECK(payoff(Action::C, Action::D, m) == std::pair{0.0, 5.0});
  CHECK(payoff(Action::D, Action::D, m) == std::pair{1.0, 1.0});
  for (Action a : {Action::C, Action::D}) {
    for (Action b : {Action::C, Action::D}) {
      const auto [x, y] = payoff(a, b, m);
      const auto [y2, x2] = payoff(b, a, m);
      CHECK(x == x2);
      CHECK(y == y2);
    }
  }
}

TEST_CASE("payoff matrix validation") {
  CHECK(PayoffMatrix{}.valid());
  CHECK_NOTHROW(PayoffMatrix{}.validate());
  CHECK_THROWS_AS((PayoffMatrix{3, 0, 7, 1}.validate()), ConfigError);  // 2R <= T + S
  CHECK_THROWS_AS((PayoffMatrix{1, 0, 5, 3}.validate()), ConfigError);
}

TEST_CASE("action flip") {
  CHECK(flip(Action::C) == Action::D);
  CHECK(flip(Action::D) == Action::C);
  CHECK(flip(flip(Action::C)) == Action::C);
  CHECK(to_string(parse_actions("CDDC")) == "CDDC");
  CHECK_THROWS_AS(parse_actions("CXD"), ConfigError);
}

TEST_CASE("hand traced fixed matches") {
  auto m = play("Tit For Tat", "Defector", 10);
  CHECK(m.length() == 10);
  CHECK(m.total_a() == 9.0);
  CHECK(m.total_b() == 14.0);

  m = play("Tit For Tat", "Tit For Tat", 5);
  CHECK(m.total_a() == 15.0);
  CHECK(m.total_b() == 15.0);

  m = play("Tit For Tat", "Alternator", 4);
  CHECK(to_string(m.actions_a) == "CCDC");
  CHECK(to_string(m.actions_b) == "CDCD");
  CHECK(m.total_a() == 8.0);
  CHECK(m.total_b() == 13.0);

  m = play("Grudger", "Alternator", 6);
  CHECK(to_string(m.actions_a) == "CCDDDD");
  CHECK(to_string(m.actions_b) == "CDCDCD");
  CHECK(m.total_a() == 15.0);
  CHECK(m.total_b() == 10.0);
}

TEST_CASE("noise extremes") {
  auto m = play("Cooperator", "Cooperator", 20, 0.0);
  CHECK(to_string(m.actions_a) == std::string(20, 'C'));
  m = play("Cooperator", "Cooperator", 20, 1.0);
  CHECK(to_string(m.actions_a) == std::string(20, 'D'));
  CHECK(to_string(m.intended_a) == std::string(20, 'C'));
}

TEST_CASE("flip fraction at noise 0.5 matches the binomial") {
  const auto m = play("Cooperator", "Cooperator", 100000, 0.5, 99);
  std::size_t flips = 0;
  for (std::size_t t = 0; t < m.length(); ++t) flips += m.actions_a[t] != m.intended_a[t];
  CHECK(std::abs(flips / 1e5 - 0.5) < 0.01);
}

TEST_CASE("noise flips are independent per side") {
  const auto m = play("Cooperator", "Cooperator", 20000, 0.5, 5);
  std::size_t both = 0;
  for (std::size_t t = 0; t < m.length(); ++t) {
    both += m.actions_a[t] == Action::D && m.actions_b[t] == Action::D;
  }
  CHECK(std::abs(both / 20000.0 - 0.25) < 0.02);
}

TEST_CASE("record invariants") {
  const auto& reg = default_registry();
  Rng rng(3);
  for (std::size_t i = 0; i < reg.size(); i += 3) {
    const auto& a = *reg.strategies()[i];
    const auto& b = *reg.strategies()[(i * 7 + 1) % reg.size()];
    for (double noise : {0.0, 0.2}) {
      const auto m = play_match_fixed(a, b, 30, noise, rng);
      REQUIRE(m.actions_a.size() == 30);
      REQUIRE(m.actions_b.size() == 30);
      REQUIRE(m.intended_a.size() == 30);
      REQUIRE(m.payoffs_a.size() == 30);
      REQUIRE(m.payoffs_b.size() == 30);
      for (std::size_t t = 0; t < 30; ++t) {
        const auto [pa, pb] = payoff(m.actions_a[t], m.actions_b[t], PayoffMatrix{});
        CHECK(m.payoffs_a[t] == pa);
        CHECK(m.payoffs_b[t] == pb);
        const double sum = pa + pb;
        CHECK((sum == 6.0 || sum == 5.0 || sum == 2.0));
        if (noise == 0.0) {
          CHECK(m.actions_a[t] == m.intended_a[t]);
          CHECK(m.actions_b[t] == m.intended_b[t]);
        }
      }
    }
  }
}

TEST_CASE("determinism") {
  for (const char* name : {"Random: 0.5", "Meta Winner", "GTFT"}) {
    const auto x = play(name, "Stochastic WSLS", 200, 0.1, 42);
    const auto y = play(name, "Stochastic WSLS", 200, 0.1, 42);
    CHECK(x.actions_a == y.actions_a);
    CHECK(x.actions_b == y.actions_b);
    CHECK(x.intended_a == y.intended_a);
    CHECK(x.payoffs_a == y.payoffs_a);
  }
  Rng r1(8), r2(8);
  const auto p = play_match_probend(*strategy("Random: 0.5"), *strategy("Alternator"), 0.05, 0.1, r1);
  const auto q = play_match_probend(*strategy("Random: 0.5"), *strategy("Alternator"), 0.05, 0.1, r2);
  CHECK(p.actions_a == q.actions_a);
  CHECK(p.length() == q.length());
}

TEST_CASE("players only see previous turns") {
  auto log_a = std::make_shared<SpyLog>();
  auto log_b = std::make_shared<SpyLog>();
  Rng rng(1);
  const auto m = play_match_fixed(spy(log_a, "CDD"), spy(log_b, "DC"), 12, 0.3, rng);
  REQUIRE(log_a->own_sizes.size() == 12);
  for (std::size_t t = 0; t < 12; ++t) {
    CHECK(log_a->own_sizes[t] == t);
    CHECK(log_a->opp_sizes[t] == t);
    CHECK(log_b->opp_sizes[t] == t);
  }
  CHECK(m.length() == 12);
}

TEST_CASE("action at turn t ignores the opponent's action at turn t") {
  // Opponents share a prefix and differ at one turn; the focal action on
  // that turn must agree.
  const auto& reg = default_registry();
  for (const auto& s : reg.strategies()) {
    if (s->metadata().stochastic) continue;
    for (std::size_t t = 1; t <= 6; ++t) {
      std::string base = "CDDCCDCD";
      std::string alt = base;
      alt[t - 1] = alt[t - 1] == 'C' ? 'D' : 'C';
      Rng r1(1), r2(1);
      const auto p = play_match_fixed(*s, make_cycler("x", parse_actions(base)), 8, 0.0, r1);
      const auto q = play_match_fixed(*s, make_cycler("y", parse_actions(alt)), 8, 0.0, r2);
      CHECK_MESSAGE(p.actions_a[t - 1] == q.actions_a[t - 1], s->name());
    }
  }
}

TEST_CASE("probabilistic ending lengths") {
  Rng rng(11);
  const auto one = play_match_probend(*strategy("Cooperator"), *strategy("Defector"), 1.0, 0.0, rng);
  CHECK(one.length() == 1);
  CHECK_FALSE(one.hit_turn_cap);

  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    sum += play_match_probend(*strategy("Cooperator"), *strategy("Defector"), 0.25, 0.0, rng).length();
  }
  CHECK(std::abs(sum / 1e5 - 4.0) < 0.08);
}

TEST_CASE("length distribution at p_e 0.5 passes chi-square") {
  Rng rng(12);
  const int trials = 20000;
  std::map<std::size_t, int> counts;
  for (int i = 0; i < trials; ++i) {
    ++counts[play_match_probend(*strategy("Cooperator"), *strategy("Cooperator"), 0.5, 0.0, rng).length()];
  }
  // Bins 1..7 and a tail bin of 8+.
  double chi2 = 0;
  double tail_expected = trials;
  int tail_observed = trials;
  for (std::size_t len = 1; len <= 7; ++len) {
    const double expected = trials * std::pow(0.5, static_cast<double>(len));
    const int observed = counts[len];
    chi2 += (observed - expected) * (observed - expected) / expected;
    tail_expected -= expected;
    tail_observed -= observed;
  }
  chi2 += (tail_observed - tail_expected) * (tail_observed - tail_expected) / tail_expected;
  CHECK(chi2 < 18.475);  // 7 degrees of freedom, 1%
}

TEST_CASE("players are not told the length in probabilistic matches") {
  Rng rng(2);
  // BackStabber defects on the final two turns only when the length is known.
  const auto m = play_match_probend(*strategy("BackStabber"), *strategy("Cooperator"), 0.5, 0.0, rng);
  CHECK(to_string(m.actions_a) == std::string(m.length(), 'C'));
  const auto f = play("BackStabber", "Cooperator", 10);
  CHECK(to_string(f.actions_a) == "CCCCCCCCDD");
}

TEST_CASE("turn cap") {
  MatchParams p = MatchParams::probabilistic(1e-9, 0.0);
  p.turn_cap = 50;
  MatchRngs rngs = MatchRngs::from_seeds(1, 2, 3);
  const auto m = play_match(*strategy("Cooperator"), *strategy("Cooperator"), p, {}, rngs);
  CHECK(m.length() == 50);
  CHECK(m.hit_turn_cap);

  MatchRngs again = MatchRngs::from_seeds(1, 2, 3);
  const auto f = play_match(*strategy("Cooperator"), *strategy("Cooperator"), MatchParams::fixed(50, 0), {}, again);
  CHECK_FALSE(f.hit_turn_cap);
}

TEST_CASE("parameter validation") {
  Rng rng(0);
  const auto& a = *strategy("Cooperator");
  CHECK_THROWS_AS(play_match_fixed(a, a, 0, 0.0, rng), ConfigError);
  CHECK_THROWS_AS(play_match_fixed(a, a, 5, -0.1, rng), ConfigError);
  CHECK_THROWS_AS(play_match_fixed(a, a, 5, 1.5, rng), ConfigError);
  CHECK_THROWS_AS(play_match_probend(a, a, 0.0, 0.0, rng), ConfigError);
  CHECK_THROWS_AS(play_match_probend(a, a, 1.2, 0.0, rng), ConfigError);
  MatchParams none;
  CHECK_THROWS_AS(none.validate(), ConfigError);
  MatchParams both = MatchParams::fixed(10, 0.1);
  both.end_probability = 0.2;
  CHECK_NOTHROW(both.validate());
}

TEST_CASE("fresh state per match") {
  Rng rng(0);
  const auto& g = *strategy("Grudger");
  const auto first = play_match_fixed(g, *strategy("Defector"), 5, 0.0, rng);
  CHECK(to_string(first.actions_a) == "CDDDD");
  const auto second = play_match_fixed(g, *strategy("Cooperator"), 5, 0.0, rng);
  CHECK(to_string(second.actions_a) == "CCCCC");
}
