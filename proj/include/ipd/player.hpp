#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ipd/action.hpp"
#include "ipd/payoff.hpp"
#include "ipd/rng.hpp"

namespace ipd {

// Realized actions of one side with running counts.
class History {
 public:
  void push(Action a) {
    plays_.push_back(a);
    if (a == Action::C) ++cooperations_;
  }
  void clear() {
    plays_.clear();
    cooperations_ = 0;
  }

  std::size_t size() const { return plays_.size(); }
  bool empty() const { return plays_.empty(); }
  Action operator[](std::size_t i) const { return plays_[i]; }
  Action back() const { return plays_.back(); }
  std::size_t cooperations() const { return cooperations_; }
  std::size_t defections() const { return plays_.size() - cooperations_; }
  std::span<const Action> plays() const { return plays_; }

 private:
  std::vector<Action> plays_;
  std::size_t cooperations_ = 0;
};

struct MatchContext {
  // Absent for probabilistic-ending matches.
  std::optional<std::size_t> turns_total;
  PayoffMatrix payoffs;
  // 1-based index of the turn being decided.
  std::size_t current_turn = 1;
};

// What a player sees when deciding: both realized histories up to the
// previous turn and the match context.
struct MatchView {
  const History& own;
  const History& opp;
  const MatchContext& ctx;
};

// Per-match decision state. The engine calls decide() once per turn, in
// order, with histories that grew by exactly one entry since the previous
// call; implementations may cache incremental state on that basis.
class Player {
 public:
  virtual ~Player() = default;
  virtual Action decide(const MatchView& view, Rng& rng) = 0;
};

constexpr std::size_t kInfiniteMemory = std::numeric_limits<std::size_t>::max();

struct StrategyMetadata {
  bool stochastic = false;
  bool makes_use_of_game = false;
  bool makes_use_of_length = false;
  std::size_t memory_depth = kInfiniteMemory;

  bool infinite_memory() const { return memory_depth == kInfiniteMemory; }
  friend bool operator==(const StrategyMetadata&, const StrategyMetadata&) = default;
};

enum class ArchetypeKind {
  builtin,
  memory_one,
  fsm,
  lookup_table,
  cycler,
  math_constant,
  threshold_ratio,
  meta,
};

const char* to_string(ArchetypeKind kind);

using PlayerFactory = std::function<std::unique_ptr<Player>()>;

// An immutable registered strategy: a name, a factory producing fresh
// per-match players, descriptive parameters and classifier metadata.
class StrategySpec {
 public:
  StrategySpec(std::string name, ArchetypeKind kind, nlohmann::json params,
               StrategyMetadata metadata, PlayerFactory factory);

  const std::string& name() const { return name_; }
  ArchetypeKind kind() const { return kind_; }
  const nlohmann::json& params() const { return params_; }
  const StrategyMetadata& metadata() const { return metadata_; }
  // Canonical behaviour identity; aliases share it. Defaults to name().
  const std::string& behavior() const { return behavior_; }
  // Key for deriving per-side random streams in tournaments.
  std::uint64_t stream_key() const { return stream_key_; }

  std::unique_ptr<Player> instantiate() const { return factory_(); }

  // Copy of this strategy under another name with the same behaviour id.
  StrategySpec alias(std::string name) const;
  StrategySpec renamed(std::string name) const;

 private:
  std::string name_;
  ArchetypeKind kind_;
  nlohmann::json params_;
  StrategyMetadata metadata_;
  PlayerFactory factory_;
  std::string behavior_;
  std::uint64_t stream_key_;
};

using StrategyPtr = std::shared_ptr<const StrategySpec>;

// Action a fresh player of `spec` takes after the given histories. The
// player is replayed over every prefix so stateful players see the same
// call sequence as in a match. Histories must have equal length.
Action next_action(const StrategySpec& spec, std::span<const Action> own,
                   std::span<const Action> opp, const MatchContext& ctx,
                   Rng& rng);

}  // namespace ipd
