#include "ipd/strategies.hpp"

#include <algorithm>
#include <array>

#include "ipd/archetypes.hpp"
#include "ipd/errors.hpp"
#include "ipd/zd.hpp"
#include "player_util.hpp"

namespace ipd {

using nlohmann::json;
using detail::deterministic;
using detail::stateless;
using detail::stochastic;

namespace {

constexpr Action C = Action::C;
constexpr Action D = Action::D;

StrategySpec simple(std::string name, StrategyMetadata meta, PlayerFactory factory,
                    json params = json::object()) {
  return StrategySpec(std::move(name), ArchetypeKind::builtin, std::move(params), meta,
                      std::move(factory));
}

// True when the last `count` opponent plays are all D.
bool opp_last_all_defect(const MatchView& v, std::size_t count) {
  if (v.opp.size() < count) return false;
  for (std::size_t i = v.opp.size() - count; i < v.opp.size(); ++i) {
    if (v.opp[i] == C) return false;
  }
  return true;
}

// Defects on the final two turns when the match length is known.
bool in_final_two_turns(const MatchView& v) {
  return v.ctx.turns_total && v.ctx.current_turn + 2 > *v.ctx.turns_total;
}

Action backstabber_core(const MatchView& v) {
  if (v.opp.empty()) return C;
  return v.opp.defections() > 3 ? D : C;
}

class SpitefulTitForTat final : public Player {
 public:
  Action decide(const MatchView& v, Rng&) override {
    if (v.opp.empty()) return C;
    if (opp_last_all_defect(v, 2)) spiteful_ = true;
    return spiteful_ ? D : v.opp.back();
  }

 private:
  bool spiteful_ = false;
};

class ForgetfulGrudger final : public Player {
 public:
  static constexpr std::size_t kMemory = 10;

  Action decide(const MatchView& v, Rng&) override {
    if (grudge_memory_ == kMemory) {
      grudge_memory_ = 0;
      grudged_ = false;
    }
    if (!v.opp.empty() && v.opp.back() == D) grudged_ = true;
    if (grudged_) {
      ++grudge_memory_;
      return D;
    }
    return C;
  }

 private:
  bool grudged_ = false;
  std::size_t grudge_memory_ = 0;
};

class ForgetfulFoolMeOnce final : public Player {
 public:
  static constexpr double kForget = 0.05;

  Action decide(const MatchView& v, Rng& rng) override {
    const double r = rng.uniform();
    if (v.opp.empty()) return C;
    if (v.opp.back() == D) ++defections_;
    if (r < kForget) defections_ = 0;
    return defections_ > 1 ? D : C;
  }

 private:
  std::size_t defections_ = 0;
};

class RetaliatePlayer final : public Player {
 public:
  RetaliatePlayer(double threshold, std::optional<std::size_t> limit)
      : threshold_(threshold), limit_(limit) {}

  Action decide(const MatchView& v, Rng&) override {
    if (limit_ && count_ >= *limit_) {
      retaliating_ = false;
      count_ = 0;
    }
    if (!v.own.empty()) ++counts_[state_index(v.own.back(), v.opp.back())];
    const bool tricked_more = static_cast<double>(counts_[1]) >
                              static_cast<double>(counts_[2]) * threshold_;
    if (!limit_) return tricked_more ? D : C;
    if (!v.opp.empty() && v.opp.back() == D && tricked_more) retaliating_ = true;
    if (retaliating_) {
      ++count_;
      return D;
    }
    return C;
  }

 private:
  double threshold_;
  std::optional<std::size_t> limit_;
  std::array<std::size_t, 4> counts_{};
  bool retaliating_ = false;
  std::size_t count_ = 0;
};

// Defects for the rest of the match once the opponent's history is periodic
// with a non-constant cycle of length >= 3 repeated at least twice.
class CycleHunter final : public Player {
 public:
  static constexpr std::size_t kMinPeriod = 3;

  Action decide(const MatchView& v, Rng&) override {
    if (found_) return D;
    const std::size_t len = v.opp.size();
    if (len == 0) return C;
    const Action last = v.opp.back();
    if (constant_ && last != v.opp[0]) constant_ = false;
    if (constant_) return C;
    const std::size_t i = len - 1;
    std::erase_if(periods_, [&](std::size_t p) { return v.opp[i] != v.opp[i - p]; });
    if (len % 2 == 0 && len / 2 >= kMinPeriod) {
      const std::size_t p = len / 2;
      bool ok = true;
      for (std::size_t j = p; j < len && ok; ++j) ok = v.opp[j] == v.opp[j - p];
      if (ok) periods_.push_back(p);
    }
    for (std::size_t p : periods_) {
      for (std::size_t j = 1; j < p; ++j) {
        if (v.opp[j] != v.opp[0]) {
          found_ = true;
          return D;
        }
      }
    }
    return C;
  }

 private:
  bool found_ = false;
  bool constant_ = true;
  std::vector<std::size_t> periods_;
};

class RandomHunter final : public Player {
 public:
  Action decide(const MatchView& v, Rng&) override {
    const std::size_t n = v.own.size();
    if (n >= 2) {
      if (v.own[n - 2] == C && v.opp[n - 1] == C) ++count_cc_;
      if (v.own[n - 2] == D && v.opp[n - 1] == D) ++count_dd_;
    }
    if (n > 10) {
      bool any = false, random_like = true;
      if (v.own.cooperations() > 5) {
        any = true;
        const double p = static_cast<double>(count_cc_) / static_cast<double>(v.own.cooperations());
        random_like = random_like && std::abs(p - 0.5) < 0.25;
      }
      if (v.own.defections() > 5) {
        any = true;
        const double p = static_cast<double>(count_dd_) / static_cast<double>(v.own.defections());
        random_like = random_like && std::abs(p - 0.5) < 0.25;
      }
      if (any && random_like) return D;
    }
    return C;
  }

 private:
  std::size_t count_cc_ = 0;
  std::size_t count_dd_ = 0;
};

class Grumpy final : public Player {
 public:
  static constexpr long kGrumpyThreshold = 10;
  static constexpr long kNiceThreshold = -10;

  Action decide(const MatchView& v, Rng&) override {
    const long grumpiness =
        static_cast<long>(v.opp.defections()) - static_cast<long>(v.opp.cooperations());
    if (!grumpy_) {
      if (grumpiness > kGrumpyThreshold) {
        grumpy_ = true;
        return D;
      }
      return C;
    }
    if (grumpiness < kNiceThreshold) {
      grumpy_ = false;
      return C;
    }
    return D;
  }

 private:
  bool grumpy_ = false;
};

Action short_mem(const MatchView& v) {
  constexpr std::size_t kWindow = 10;
  if (v.opp.size() <= kWindow) return C;
  long balance = 0;
  for (std::size_t i = v.opp.size() - kWindow; i < v.opp.size(); ++i) balance += v.opp[i] == C ? 1 : -1;
  if (balance >= 3) return C;
  if (balance <= -3) return D;
  return v.opp.back();
}

class Gradual final : public Player {
 public:
  Action decide(const MatchView& v, Rng&) override {
    if (punish_ > 0) {
      --punish_;
      return D;
    }
    if (calm_ > 0) {
      --calm_;
      return C;
    }
    if (!v.opp.empty() && v.opp.back() == D) {
      punish_ = v.opp.defections() - 1;
      calm_ = 2;
      return D;
    }
    return C;
  }

 private:
  std::size_t punish_ = 0;
  std::size_t calm_ = 0;
};

class SoftGrudger final : public Player {
 public:
  Action decide(const MatchView& v, Rng&) override {
    static constexpr std::array<Action, 6> kSequence{D, D, D, D, C, C};
    if (grudged_) {
      const Action a = kSequence[step_++];
      if (step_ == kSequence.size()) {
        step_ = 0;
        grudged_ = false;
      }
      return a;
    }
    if (!v.opp.empty() && v.opp.back() == D) {
      grudged_ = true;
      return D;
    }
    return C;
  }

 private:
  bool grudged_ = false;
  std::size_t step_ = 0;
};

// Majority vote over the opponent's last `window` plays (all when 0); ties
// give C when soft.
Action go_by_majority(const MatchView& v, std::size_t window, bool soft) {
  const std::size_t n = v.opp.size();
  const std::size_t from = window && n > window ? n - window : 0;
  std::size_t defections = 0;
  for (std::size_t i = from; i < n; ++i) defections += v.opp[i] == D;
  const std::size_t cooperations = n - from - defections;
  if (defections > cooperations) return D;
  if (defections == cooperations) return soft ? C : D;
  return C;
}

StrategySpec majority_player(std::string name, std::size_t window, bool soft) {
  auto rule = [window, soft](const MatchView& v, Rng&) { return go_by_majority(v, window, soft); };
  return StrategySpec(std::move(name), ArchetypeKind::builtin,
                      {{"window", window ? json(window) : json("all")}, {"ties", soft ? "C" : "D"}},
                      deterministic(window ? window : kInfiniteMemory), stateless(rule));
}

class AdaptiveTitForTat final : public Player {
 public:
  static constexpr double kRate = 0.5;

  Action decide(const MatchView& v, Rng&) override {
    if (v.opp.empty()) return C;
    world_ += v.opp.back() == C ? kRate * (1.0 - world_) : -kRate * world_;
    return world_ >= 0.5 ? C : D;
  }

 private:
  double world_ = 0.5;
};

MemoryOneVector gtft_vector(const PayoffMatrix& m) {
  const double g = std::min(1.0 - (m.T - m.R) / (m.R - m.S), (m.R - m.P) / (m.T - m.P));
  return {1.0, g, 1.0, g};
}

StrategySpec zd_member(std::string name, double phi, double s, char baseline) {
  auto fn = [phi, s, baseline](const PayoffMatrix& m) {
    const double l = baseline == 'P' ? m.P : baseline == 'R' ? m.R : 2.0;
    return zd_vector(phi, s, l, m);
  };
  json params = {{"phi", phi}, {"s", s},
                 {"l", baseline == 'P' ? json("P") : baseline == 'R' ? json("R") : json(2.0)}};
  return make_game_memory_one(std::move(name), C, fn, true, std::move(params));
}

constexpr const char* kFortress3 = R"(initial_state 1
initial_action D
1 C 1 D
1 D 2 D
2 C 1 D
2 D 3 C
3 C 3 C
3 D 1 D
)";

constexpr const char* kFortress4 = R"(initial_state 1
initial_action D
1 C 1 D
1 D 2 D
2 C 1 D
2 D 3 D
3 C 1 D
3 D 4 C
4 C 4 C
4 D 1 D
)";

}  // namespace

Action retaliate_rule(double threshold, std::optional<std::size_t> limit,
                      std::span<const Action> own, std::span<const Action> opp) {
  if (own.size() != opp.size()) throw Error("retaliate_rule: histories differ in length");
  auto tricks = [&](std::size_t upto, Action victim) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < upto; ++i) {
      const bool victim_is_own = victim == Action::C;
      if (victim_is_own ? (own[i] == C && opp[i] == D) : (own[i] == D && opp[i] == C)) ++n;
    }
    return n;
  };
  auto tricked_more = [&](std::size_t upto) {
    return static_cast<double>(tricks(upto, C)) > static_cast<double>(tricks(upto, D)) * threshold;
  };
  if (!limit) return tricked_more(own.size()) ? D : C;

  // Replay the limited state machine over every prefix.
  bool retaliating = false;
  std::size_t count = 0;
  Action action = C;
  for (std::size_t t = 0; t <= own.size(); ++t) {
    if (count >= *limit) {
      retaliating = false;
      count = 0;
    }
    if (t > 0 && opp[t - 1] == D && tricked_more(t)) retaliating = true;
    if (retaliating) {
      ++count;
      action = D;
    } else {
      action = C;
    }
  }
  return action;
}

StrategySpec make_retaliate(std::string name, double threshold, std::optional<std::size_t> limit) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw ValidationError("threshold", "must lie in (0, 1)");
  json params = {{"threshold", threshold}};
  if (limit) params["limit"] = *limit;
  return simple(std::move(name), deterministic(kInfiniteMemory),
                detail::factory_of<RetaliatePlayer>(threshold, limit), std::move(params));
}

std::vector<StrategySpec> builtin_strategies() {
  std::vector<StrategySpec> out;
  auto add = [&](StrategySpec s) { out.push_back(std::move(s)); };

  // Unconditional and cyclic players.
  add(simple("Cooperator", deterministic(0), stateless([](const MatchView&, Rng&) { return C; })));
  add(simple("Defector", deterministic(0), stateless([](const MatchView&, Rng&) { return D; })));
  add(simple("Random: 0.5", stochastic(0),
             stateless([](const MatchView&, Rng& rng) { return rng.bernoulli(0.5) ? C : D; }),
             {{"p_cooperate", 0.5}}));
  add(simple("Alternator", deterministic(1), stateless([](const MatchView& v, Rng&) {
               return v.own.empty() ? C : flip(v.own.back());
             })));
  for (const char* cycle : {"CCD", "DC", "DDC", "CCCCCD"}) {
    add(make_cycler(std::string("Cycler ") + cycle, parse_actions(cycle)));
  }

  // Tit For Tat family.
  add(simple("Tit For Tat", deterministic(1), stateless([](const MatchView& v, Rng&) {
               return v.opp.empty() ? C : v.opp.back();
             })));
  add(simple("Tit For 2 Tats", deterministic(2), stateless([](const MatchView& v, Rng&) {
               return opp_last_all_defect(v, 2) ? D : C;
             })));
  add(simple("Two Tits For Tat", deterministic(2), stateless([](const MatchView& v, Rng&) {
               const std::size_t n = v.opp.size();
               for (std::size_t i = n >= 2 ? n - 2 : 0; i < n; ++i) {
                 if (v.opp[i] == D) return D;
               }
               return C;
             })));
  add(simple("Suspicious Tit For Tat", deterministic(1), stateless([](const MatchView& v, Rng&) {
               return v.opp.empty() ? D : v.opp.back();
             })));
  add(simple("Hard Tit For 2 Tats", deterministic(3), stateless([](const MatchView& v, Rng&) {
               const std::size_t n = v.opp.size();
               for (std::size_t i = n >= 3 ? n - 2 : 1; i < n; ++i) {
                 if (v.opp[i] == D && v.opp[i - 1] == D) return D;
               }
               return C;
             })));
  add(simple("Spiteful Tit For Tat", deterministic(kInfiniteMemory),
             detail::factory_of<SpitefulTitForTat>()));

  // Grudgers.
  add(simple("Grudger", deterministic(kInfiniteMemory), stateless([](const MatchView& v, Rng&) {
               return v.opp.defections() > 0 ? D : C;
             })));
  add(simple("Forgetful Grudger", deterministic(ForgetfulGrudger::kMemory),
             detail::factory_of<ForgetfulGrudger>(), {{"memory", ForgetfulGrudger::kMemory}}));
  add(simple("Fool Me Once", deterministic(kInfiniteMemory), stateless([](const MatchView& v, Rng&) {
               return v.opp.defections() > 1 ? D : C;
             })));
  add(simple("Forgetful Fool Me Once", stochastic(kInfiniteMemory),
             detail::factory_of<ForgetfulFoolMeOnce>(),
             {{"forget_probability", ForgetfulFoolMeOnce::kForget}}));
  const StrategySpec easy_go =
      simple("EasyGo", deterministic(kInfiniteMemory), stateless([](const MatchView& v, Rng&) {
               return v.opp.defections() > 0 ? C : D;
             }));
  add(easy_go);
  add(easy_go.alias("Fool Me Forever"));

  // End-game defectors.
  StrategyMetadata uses_length = deterministic(kInfiniteMemory);
  uses_length.makes_use_of_length = true;
  add(simple("BackStabber", uses_length, stateless([](const MatchView& v, Rng&) {
               return in_final_two_turns(v) ? D : backstabber_core(v);
             }),
             {{"tolerated_defections", 3}, {"final_defections", 2}}));
  add(simple("DoubleCrosser", uses_length, stateless([](const MatchView& v, Rng&) {
               if (in_final_two_turns(v)) return D;
               constexpr std::size_t kCutoff = 6;
               const std::size_t n = v.opp.size();
               if (n == 0) return C;
               if (n < 180 && n > kCutoff) {
                 bool early_defection = false;
                 for (std::size_t i = 0; i <= kCutoff; ++i) early_defection |= v.opp[i] == D;
                 if (!early_defection && !opp_last_all_defect(v, 2)) return C;
               }
               return backstabber_core(v);
             }),
             {{"cutoff", 6}, {"cooperate_until", 180}, {"final_defections", 2}}));

  // Memory-one family.
  add(make_memory_one("Win-Stay Lose-Shift", {C, {1.0, 0.0, 0.0, 1.0}}));
  add(make_game_memory_one("GTFT", C, gtft_vector, true,
                           {{"rule", "p = (1, g, 1, g), g = min(1 - (T-R)/(R-S), (R-P)/(T-P))"}}));
  add(make_memory_one("Stochastic WSLS", {C, {0.95, 0.05, 0.05, 0.95}}));
  add(make_memory_one("Stochastic Cooperator", {C, {0.935, 0.229, 0.266, 0.42}}));
  add(zd_member("ZD-Extort-2", 1.0 / 9.0, 0.5, 'P'));
  add(zd_member("ZD-Extort-4", 4.0 / 17.0, 0.25, 'P'));
  add(zd_member("ZD-GTFT-2", 0.25, 0.5, 'R'));
  add(zd_member("ZD-SET-2", 0.25, 0.0, '2'));

  // Retaliators.
  add(make_retaliate("Retaliate", 0.1));
  add(make_retaliate("Retaliate 2", 0.08));
  add(make_retaliate("Retaliate 3", 0.05));
  add(make_retaliate("Limited Retaliate", 0.1, 20));
  add(make_retaliate("Limited Retaliate 2", 0.08, 15));
  add(make_retaliate("Limited Retaliate 3", 0.05, 20));

  // Hunters.
  add(simple("Defector Hunter", deterministic(kInfiniteMemory), stateless([](const MatchView& v, Rng&) {
               return v.own.size() >= 4 && v.opp.defections() == v.opp.size() ? D : C;
             })));
  add(simple("Cooperator Hunter", deterministic(kInfiniteMemory), stateless([](const MatchView& v, Rng&) {
               return v.own.size() >= 4 && v.opp.cooperations() == v.opp.size() ? D : C;
             })));
  add(simple("Alternator Hunter", deterministic(kInfiniteMemory), stateless([](const MatchView& v, Rng&) {
               if (v.opp.size() < 6) return C;
               for (std::size_t i = 0; i < 5; ++i) {
                 if (v.opp[i] == v.opp[i + 1]) return C;
               }
               return D;
             })));
  add(simple("Cycle Hunter", deterministic(kInfiniteMemory), detail::factory_of<CycleHunter>(),
             {{"min_period", CycleHunter::kMinPeriod}}));
  add(simple("Random Hunter", deterministic(kInfiniteMemory), detail::factory_of<RandomHunter>()));

  // Cooperation-ratio players.
  add(simple("Grumpy", deterministic(kInfiniteMemory), detail::factory_of<Grumpy>(),
             {{"grumpy_threshold", Grumpy::kGrumpyThreshold}, {"nice_threshold", Grumpy::kNiceThreshold}}));
  add(simple("ShortMem", deterministic(10), stateless([](const MatchView& v, Rng&) { return short_mem(v); }),
             {{"window", 10}, {"margin", 3}}));
  add(load_archetype(ArchetypeKind::math_constant, {{"constant", "e"}, {"name", "e"}}));
  add(load_archetype(ArchetypeKind::math_constant, {{"constant", "pi"}, {"name", "Pi"}}));
  add(load_archetype(ArchetypeKind::math_constant, {{"constant", "phi"}, {"name", "Phi"}}));

  // Defector-leaning players.
  add(simple("Bully", deterministic(1), stateless([](const MatchView& v, Rng&) {
               return v.opp.empty() ? D : flip(v.opp.back());
             })));
  add(simple("Better and Better", stochastic(kInfiniteMemory), stateless([](const MatchView& v, Rng& rng) {
               const double p = static_cast<double>(v.ctx.current_turn) / 1000.0;
               return rng.bernoulli(p) ? C : D;
             }),
             {{"p_cooperate", "turn / 1000"}}));
  add(simple("Tricky Defector", deterministic(kInfiniteMemory), stateless([](const MatchView& v, Rng&) {
               return v.opp.cooperations() > 0 && opp_last_all_defect(v, 3) ? C : D;
             })));
  add(simple("Aggravater", deterministic(kInfiniteMemory), stateless([](const MatchView& v, Rng&) {
               if (v.opp.size() < 3) return D;
               return v.opp.defections() > 0 ? D : C;
             })));
  add(simple("Gradual Killer", deterministic(kInfiniteMemory), stateless([](const MatchView& v, Rng&) {
               const std::size_t n = v.own.size();
               if (n < 5) return D;
               if (n < 7) return C;
               return v.opp[5] == D && v.opp[6] == D ? D : C;
             })));
  add(simple("Hard Prober", deterministic(kInfiniteMemory), stateless([](const MatchView& v, Rng&) {
               constexpr std::array<Action, 4> kOpening{D, D, C, C};
               const std::size_t n = v.own.size();
               if (n < kOpening.size()) return kOpening[n];
               if (v.opp[1] == C && v.opp[2] == C) return D;
               return v.opp.back();
             })));

  // Majority and gradual punishers.
  add(majority_player("Soft Go By Majority", 0, true));
  add(majority_player("Hard Go By Majority", 0, false));
  add(majority_player("Soft Go By Majority: 10", 10, true));
  add(majority_player("Soft Go By Majority: 20", 20, true));
  add(majority_player("Hard Go By Majority: 10", 10, false));
  add(majority_player("Hard Go By Majority: 20", 20, false));
  add(simple("Gradual", deterministic(kInfiniteMemory), detail::factory_of<Gradual>(),
             {{"calm_turns", 2}, {"punishment", "D for as many turns as opponent defections so far"}}));
  add(simple("Soft Grudger", deterministic(kInfiniteMemory), detail::factory_of<SoftGrudger>(),
             {{"sequence", "DDDDCC"}}));
  add(simple("Grudger Alternator", deterministic(kInfiniteMemory), stateless([](const MatchView& v, Rng&) {
               if (v.opp.defections() == 0) return C;
               return v.own.back() == C ? D : C;
             })));
  add(simple("First by Davis: 10", deterministic(kInfiniteMemory), stateless([](const MatchView& v, Rng&) {
               if (v.own.size() < 10) return C;
               return v.opp.defections() > 0 ? D : C;
             }),
             {{"cooperative_turns", 10}}));

  // Tit For Tat relatives.
  add(simple("Hard Tit For Tat", deterministic(3), stateless([](const MatchView& v, Rng&) {
               const std::size_t n = v.opp.size();
               for (std::size_t i = n >= 3 ? n - 3 : 0; i < n; ++i) {
                 if (v.opp[i] == D) return D;
               }
               return C;
             })));
  add(simple("Forgiving Tit For Tat", deterministic(kInfiniteMemory), stateless([](const MatchView& v, Rng&) {
               if (v.opp.empty() || v.opp.back() == C) return C;
               const double rate = static_cast<double>(v.opp.defections()) / static_cast<double>(v.opp.size());
               return rate > 0.1 ? D : C;
             }),
             {{"tolerated_defection_rate", 0.1}}));
  add(simple("Anti Tit For Tat", deterministic(1), stateless([](const MatchView& v, Rng&) {
               return v.opp.empty() ? C : flip(v.opp.back());
             })));
  add(simple("Adaptive Tit For Tat: 0.5", deterministic(kInfiniteMemory),
             detail::factory_of<AdaptiveTitForTat>(), {{"rate", AdaptiveTitForTat::kRate}, {"world", 0.5}}));
  add(simple("First by Grofman", stochastic(1), stateless([](const MatchView& v, Rng& rng) {
               if (v.own.empty() || v.own.back() == v.opp.back()) return C;
               return rng.bernoulli(2.0 / 7.0) ? C : D;
             }),
             {{"p_cooperate_after_mismatch", 2.0 / 7.0}}));
  add(simple("First by Feld: 1.0, 0.5, 200", stochastic(kInfiniteMemory),
             stateless([](const MatchView& v, Rng& rng) {
               if (v.opp.empty()) return C;
               if (v.opp.back() == D) return D;
               const double p = std::max(1.0 - 0.5 * static_cast<double>(v.own.size()) / 200.0, 0.5);
               return rng.bernoulli(p) ? C : D;
             }),
             {{"start_coop_prob", 1.0}, {"end_coop_prob", 0.5}, {"rounds_of_decay", 200}}));
  add(make_memory_one("Firm But Fair", {C, {1.0, 0.0, 1.0, 2.0 / 3.0}}));
  add(make_memory_one("First by Joss: 0.9", {C, {0.9, 0.0, 0.9, 0.0}}));
  add(simple("Second by Champion", stochastic(kInfiniteMemory), stateless([](const MatchView& v, Rng& rng) {
               const std::size_t turn = v.own.size();
               if (turn < 10) return C;
               if (turn < 25) return v.opp.back();
               if (v.opp.back() == D) {
                 const double rate = static_cast<double>(v.opp.defections()) / static_cast<double>(turn);
                 if (rate >= std::max(0.4, rng.uniform())) return D;
               }
               return C;
             }),
             {{"cooperative_turns", 10}, {"tit_for_tat_until", 25}, {"defection_floor", 0.4}}));
  add(simple("Second by Eatherley", stochastic(kInfiniteMemory), stateless([](const MatchView& v, Rng& rng) {
               if (v.opp.empty() || v.opp.back() == C) return C;
               const double rate = static_cast<double>(v.opp.defections()) / static_cast<double>(v.opp.size());
               return rng.bernoulli(1.0 - rate) ? C : D;
             })));
  add(simple("Nice Average Copier", stochastic(kInfiniteMemory), stateless([](const MatchView& v, Rng& rng) {
               if (v.opp.empty()) return C;
               const double rate = static_cast<double>(v.opp.cooperations()) / static_cast<double>(v.opp.size());
               return rng.bernoulli(rate) ? C : D;
             })));
  add(simple("Prober", deterministic(kInfiniteMemory), stateless([](const MatchView& v, Rng&) {
               constexpr std::array<Action, 3> kOpening{D, C, C};
               const std::size_t n = v.own.size();
               if (n < kOpening.size()) return kOpening[n];
               if (v.opp[1] == C && v.opp[2] == C) return D;
               return v.opp.back();
             })));
  add(simple("Worse and Worse", stochastic(kInfiniteMemory), stateless([](const MatchView& v, Rng& rng) {
               const double p = static_cast<double>(v.ctx.current_turn) / 1000.0;
               return rng.bernoulli(p) ? D : C;
             }),
             {{"p_defect", "turn / 1000"}}));

  // Finite state machines.
  add(make_fsm("Fortress3", parse_fsm_table(kFortress3)));
  add(make_fsm("Fortress4", parse_fsm_table(kFortress4)));

  return out;
}

}  // namespace ipd
