#include "ipd/tournament.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "ipd/errors.hpp"
#include "ipd/stats.hpp"

namespace ipd {

namespace {

constexpr std::uint64_t kEndingTag = 0x656e64696e67ULL;

}  // namespace

const char* to_string(Protocol protocol) {
  switch (protocol) {
    case Protocol::standard: return "standard";
    case Protocol::noisy: return "noisy";
    case Protocol::probend: return "probend";
    case Protocol::noisy_probend: return "noisy_probend";
  }
  return "unknown";
}

Protocol parse_protocol(std::string_view text) {
  for (Protocol p : kProtocols) {
    if (text == to_string(p)) return p;
  }
  throw ConfigError("unknown protocol: " + std::string(text));
}

bool is_noisy(Protocol protocol) {
  return protocol == Protocol::noisy || protocol == Protocol::noisy_probend;
}

bool is_probend(Protocol protocol) {
  return protocol == Protocol::probend || protocol == Protocol::noisy_probend;
}

void TournamentConfig::validate() const {
  if (roster.size() < 3) throw ConfigError("tournament needs at least 3 strategies");
  if (std::set<std::string>(roster.begin(), roster.end()).size() != roster.size()) {
    throw ConfigError("tournament roster repeats a strategy");
  }
  if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
  if (is_probend(protocol)) {
    if (!end_probability) throw ConfigError(std::string(to_string(protocol)) + " needs p_e");
  } else if (!turns) {
    throw ConfigError(std::string(to_string(protocol)) + " needs n");
  }
  payoffs.validate();
  match_params().validate();
}

MatchParams TournamentConfig::match_params() const {
  MatchParams p;
  p.noise = is_noisy(protocol) ? noise : 0.0;
  p.turn_cap = turn_cap;
  if (is_probend(protocol)) {
    p.end_probability = end_probability;
  } else {
    p.turns = turns;
  }
  return p;
}

StrategyTally::StrategyTally(std::size_t repetitions)
    : match_scores_(repetitions), wins_(repetitions, 0.0) {}

void StrategyTally::add_match(std::size_t repetition, std::span<const Action> own,
                              std::span<const Action> opp, double own_total, double opp_total) {
  const std::size_t len = own.size();
  if (len == 0 || opp.size() != len) throw Error("tally: empty or mismatched match");
  match_scores_[repetition].push_back(own_total / static_cast<double>(len));
  if (own_total > opp_total) wins_[repetition] += 1.0;
  ++matches_;
  if (own[0] == Action::C) ++initial_c_;
  turns_ += len;
  for (std::size_t t = 0; t < len; ++t) {
    if (own[t] == Action::C) ++cooperations_;
    const std::size_t s = state_index(own[t], opp[t]);
    ++states_[s];
    if (t + 1 < len) {
      ++transitions_[s];
      if (own[t + 1] == Action::C) ++transitions_to_c_[s];
    }
  }
}

ResultRow StrategyTally::summarize() const {
  ResultRow row;
  std::vector<double> scores(match_scores_.size(), 0.0);
  for (std::size_t r = 0; r < scores.size(); ++r) {
    auto m = match_scores_[r];
    if (m.empty()) continue;
    std::sort(m.begin(), m.end());
    scores[r] = std::accumulate(m.begin(), m.end(), 0.0) / static_cast<double>(m.size());
  }
  row.median_score = median(scores);
  row.win = median(wins_);
  if (turns_ > 0) {
    const double turns = static_cast<double>(turns_);
    row.cooperation_rating = static_cast<double>(cooperations_) / turns;
    for (std::size_t s = 0; s < 4; ++s) row.state_rates[s] = static_cast<double>(states_[s]) / turns;
  }
  if (matches_ > 0) row.initial_c = static_cast<double>(initial_c_) / static_cast<double>(matches_);
  for (std::size_t s = 0; s < 4; ++s) {
    if (transitions_[s] > 0) {
      row.cond_coop[s] =
          static_cast<double>(transitions_to_c_[s]) / static_cast<double>(transitions_[s]);
    }
  }
  return row;
}

double normalized_rank(std::size_t rank, std::size_t size) {
  if (size < 2) throw ConfigError("normalized rank needs at least 2 strategies");
  if (rank >= size) throw ConfigError("rank out of range");
  return static_cast<double>(rank) / static_cast<double>(size - 1);
}

void assign_ranks(std::vector<ResultRow>& rows) {
  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    if (a.median_score != b.median_score) return a.median_score > b.median_score;
    if (a.win != b.win) return a.win > b.win;
    return a.name < b.name;
  });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].rank = i;
    rows[i].normalized_rank = normalized_rank(i, rows.size());
  }
}

TournamentResult run_tournament(const TournamentConfig& cfg, const Registry& registry,
                                std::uint64_t seed) {
  cfg.validate();
  std::vector<StrategyPtr> players;
  players.reserve(cfg.roster.size());
  for (const auto& name : cfg.roster) players.push_back(registry.find(name));

  const MatchParams params = cfg.match_params();
  const std::size_t n = players.size();
  std::vector<StrategyTally> tallies(n, StrategyTally(cfg.repetitions));
  TournamentResult result;

  for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const std::uint64_t ki = players[i]->stream_key(), kj = players[j]->stream_key();
        const std::uint64_t base = mix_seed({seed, rep, std::min(ki, kj), std::max(ki, kj)});
        MatchRngs rngs = MatchRngs::from_seeds(mix_seed({base, ki, kj}), mix_seed({base, kj, ki}),
                                               mix_seed({base, kEndingTag}));
        const MatchRecord m = play_match(*players[i], *players[j], params, cfg.payoffs, rngs);
        if (m.hit_turn_cap) ++result.cap_hits;
        ++result.matches;
        const double ta = m.total_a(), tb = m.total_b();
        tallies[i].add_match(rep, m.actions_a, m.actions_b, ta, tb);
        tallies[j].add_match(rep, m.actions_b, m.actions_a, tb, ta);
      }
    }
  }

  result.rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ResultRow row = tallies[i].summarize();
    row.name = cfg.roster[i];
    result.rows.push_back(std::move(row));
  }
  assign_ranks(result.rows);
  return result;
}

std::optional<std::vector<RankingEntry>> median_rank_table(
    const std::vector<const std::vector<ResultRow>*>& tournaments) {
  if (tournaments.empty()) return std::nullopt;
  std::map<std::string, std::vector<double>> ranks;
  for (const auto* rows : tournaments) {
    for (const auto& row : *rows) ranks[row.name].push_back(row.normalized_rank);
  }
  std::vector<RankingEntry> out;
  out.reserve(ranks.size());
  for (const auto& [name, values] : ranks) out.push_back({name, median(values), values.size()});
  std::stable_sort(out.begin(), out.end(), [](const RankingEntry& a, const RankingEntry& b) {
    return a.median_normalized_rank < b.median_normalized_rank;
  });
  return out;
}

}  // namespace ipd
