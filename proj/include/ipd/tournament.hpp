#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ipd/engine.hpp"
#include "ipd/registry.hpp"

namespace ipd {

enum class Protocol { standard, noisy, probend, noisy_probend };

inline constexpr std::array<Protocol, 4> kProtocols = {Protocol::standard, Protocol::noisy,
                                                       Protocol::probend, Protocol::noisy_probend};

const char* to_string(Protocol protocol);
// Throws ConfigError.
Protocol parse_protocol(std::string_view text);
bool is_noisy(Protocol protocol);
bool is_probend(Protocol protocol);

struct TournamentConfig {
  std::vector<std::string> roster;
  Protocol protocol = Protocol::standard;
  std::optional<std::size_t> turns;
  double noise = 0.0;
  std::optional<double> end_probability;
  std::size_t repetitions = 1;
  std::size_t turn_cap = kDefaultTurnCap;
  PayoffMatrix payoffs;

  // Throws ConfigError when the roster has fewer than 3 names, repeats a
  // name, or the protocol's parameters are missing or out of range.
  void validate() const;
  MatchParams match_params() const;
};

// One strategy's summary of a tournament.
struct ResultRow {
  std::string name;
  std::size_t rank = 0;
  double normalized_rank = 0.0;
  // Median over repetitions of the mean per-turn score against opponents.
  double median_score = 0.0;
  double cooperation_rating = 0.0;
  // Median over repetitions of matches won by strictly greater total.
  double win = 0.0;
  double initial_c = 0.0;
  // Occupancy of (own, opp) realized states in CC, CD, DC, DD order.
  std::array<double, 4> state_rates{};
  // P(C next turn | state); absent when the state never preceded a turn.
  std::array<std::optional<double>, 4> cond_coop{};

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

inline constexpr std::array<const char*, 15> kResultColumns = {
    "name",    "rank",    "normalized_rank", "median_score", "cooperation_rating",
    "win",     "initial_C", "rate_CC",       "rate_CD",      "rate_DC",
    "rate_DD", "CC_to_C", "CD_to_C",         "DC_to_C",      "DD_to_C"};

struct TournamentResult {
  std::vector<ResultRow> rows;  // sorted by rank
  std::size_t cap_hits = 0;     // matches stopped by the turn cap
  std::size_t matches = 0;
};

// Per-strategy accumulator over the matches of a tournament.
class StrategyTally {
 public:
  explicit StrategyTally(std::size_t repetitions = 1);

  // Adds one match from the perspective of the player whose realized
  // actions are `own`.
  void add_match(std::size_t repetition, std::span<const Action> own,
                 std::span<const Action> opp, double own_total, double opp_total);

  // Fills every field except name and rank.
  ResultRow summarize() const;

 private:
  std::vector<std::vector<double>> match_scores_;  // per repetition, summed in sorted order
  std::vector<double> wins_;
  std::size_t turns_ = 0;
  std::size_t cooperations_ = 0;
  std::size_t matches_ = 0;
  std::size_t initial_c_ = 0;
  std::array<std::size_t, 4> states_{};
  std::array<std::size_t, 4> transitions_{};
  std::array<std::size_t, 4> transitions_to_c_{};
};

// Round robin without self-play; every pair plays once per repetition.
// Match streams depend only on (seed, repetition, the two players'
// behaviours), so aliases of one behaviour see identical streams.
TournamentResult run_tournament(const TournamentConfig& cfg, const Registry& registry,
                                std::uint64_t seed);

// Throws ConfigError unless 0 <= rank < size and size >= 2.
double normalized_rank(std::size_t rank, std::size_t size);

// Orders rows by median score (desc), win (desc), name and assigns ranks.
void assign_ranks(std::vector<ResultRow>& rows);

struct RankingEntry {
  std::string name;
  double median_normalized_rank = 0.0;
  std::size_t participation = 0;
};

// Median normalized rank per strategy over the given tournaments, sorted
// ascending (ties by name). nullopt when no tournament is given.
std::optional<std::vector<RankingEntry>> median_rank_table(
    const std::vector<const std::vector<ResultRow>*>& tournaments);

}  // namespace ipd
