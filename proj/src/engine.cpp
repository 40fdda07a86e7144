#include "ipd/engine.hpp"

#include <numeric>

#include "ipd/errors.hpp"

namespace ipd {

void MatchParams::validate() const {
  if (!turns && !end_probability) {
    throw ConfigError("match needs a turn count or an ending probability");
  }
  if (turns && *turns < 1) throw ConfigError("turn count must be at least 1");
  if (!(noise >= 0.0 && noise <= 1.0)) throw ConfigError("noise probability must lie in [0, 1]");
  if (end_probability && !(*end_probability > 0.0 && *end_probability <= 1.0)) {
    throw ConfigError("ending probability must lie in (0, 1]");
  }
  if (turn_cap < 1) throw ConfigError("turn cap must be at least 1");
}

MatchParams MatchParams::fixed(std::size_t n, double noise) {
  MatchParams p;
  p.turns = n;
  p.noise = noise;
  return p;
}

MatchParams MatchParams::probabilistic(double end_probability, double noise) {
  MatchParams p;
  p.end_probability = end_probability;
  p.noise = noise;
  return p;
}

double MatchRecord::total_a() const {
  return std::accumulate(payoffs_a.begin(), payoffs_a.end(), 0.0);
}

double MatchRecord::total_b() const {
  return std::accumulate(payoffs_b.begin(), payoffs_b.end(), 0.0);
}

MatchRngs MatchRngs::from_seeds(std::uint64_t a, std::uint64_t b, std::uint64_t ending) {
  return MatchRngs{Rng(a), Rng(b), Rng(ending)};
}

MatchRngs MatchRngs::split(Rng& parent) {
  const std::uint64_t a = parent.next();
  const std::uint64_t b = parent.next();
  const std::uint64_t e = parent.next();
  return from_seeds(mix_seed({a, 1}), mix_seed({b, 2}), mix_seed({e, 3}));
}

TurnOutcome play_turn(Player& a, Player& b, History& hist_a, History& hist_b,
                      const MatchContext& ctx, double noise, Rng& rng_a, Rng& rng_b) {
  TurnOutcome out{};
  out.intended_a = a.decide(MatchView{hist_a, hist_b, ctx}, rng_a);
  out.intended_b = b.decide(MatchView{hist_b, hist_a, ctx}, rng_b);
  out.realized_a = out.intended_a;
  out.realized_b = out.intended_b;
  if (noise > 0.0) {
    if (rng_a.bernoulli(noise)) out.realized_a = flip(out.realized_a);
    if (rng_b.bernoulli(noise)) out.realized_b = flip(out.realized_b);
  }
  hist_a.push(out.realized_a);
  hist_b.push(out.realized_b);
  return out;
}

MatchRecord play_match(const StrategySpec& a, const StrategySpec& b, const MatchParams& params,
                       const PayoffMatrix& payoffs, MatchRngs& rngs) {
  params.validate();
  auto player_a = a.instantiate();
  auto player_b = b.instantiate();
  History hist_a, hist_b;
  MatchContext ctx;
  ctx.payoffs = payoffs;
  if (params.turns && params.reveal_length) ctx.turns_total = params.turns;

  const std::size_t limit = params.turns ? *params.turns : params.turn_cap;
  MatchRecord rec;
  const std::size_t reserve = params.turns ? *params.turns : 16;
  for (auto* v : {&rec.actions_a, &rec.actions_b, &rec.intended_a, &rec.intended_b}) {
    v->reserve(reserve);
  }

  for (std::size_t t = 0; t < limit; ++t) {
    ctx.current_turn = t + 1;
    const TurnOutcome turn =
        play_turn(*player_a, *player_b, hist_a, hist_b, ctx, params.noise, rngs.side_a, rngs.side_b);
    rec.intended_a.push_back(turn.intended_a);
    rec.intended_b.push_back(turn.intended_b);
    rec.actions_a.push_back(turn.realized_a);
    rec.actions_b.push_back(turn.realized_b);
    const auto [pa, pb] = payoff(turn.realized_a, turn.realized_b, payoffs);
    rec.payoffs_a.push_back(pa);
    rec.payoffs_b.push_back(pb);
    if (params.end_probability && rngs.ending.bernoulli(*params.end_probability)) return rec;
  }
  rec.hit_turn_cap = !params.turns.has_value();
  return rec;
}

MatchRecord play_match_fixed(const StrategySpec& a, const StrategySpec& b, std::size_t turns,
                             double noise, Rng& rng, const PayoffMatrix& payoffs) {
  MatchParams params = MatchParams::fixed(turns, noise);
  params.validate();
  MatchRngs rngs = MatchRngs::split(rng);
  return play_match(a, b, params, payoffs, rngs);
}

MatchRecord play_match_probend(const StrategySpec& a, const StrategySpec& b,
                               double end_probability, double noise, Rng& rng,
                               const PayoffMatrix& payoffs, std::size_t turn_cap) {
  MatchParams params = MatchParams::probabilistic(end_probability, noise);
  params.turn_cap = turn_cap;
  params.validate();
  MatchRngs rngs = MatchRngs::split(rng);
  return play_match(a, b, params, payoffs, rngs);
}

}  // namespace ipd
