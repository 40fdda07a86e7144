#include "ipd/archetypes.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "ipd/errors.hpp"
#include "player_util.hpp"

namespace ipd {

using nlohmann::json;

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

bool is_degenerate(const MemoryOneVector& p) {
  for (double x : p) {
    if (x != 0.0 && x != 1.0) return false;
  }
  return true;
}

Action draw(double p_cooperate, bool stochastic, Rng& rng) {
  if (!stochastic) return p_cooperate >= 0.5 ? Action::C : Action::D;
  return rng.bernoulli(p_cooperate) ? Action::C : Action::D;
}

class MemoryOnePlayer final : public Player {
 public:
  explicit MemoryOnePlayer(MemoryOneParams params)
      : params_(params), stochastic_(!is_degenerate(params.p)) {}

  Action decide(const MatchView& view, Rng& rng) override {
    if (view.own.empty()) return params_.initial;
    return draw(params_.p[state_index(view.own.back(), view.opp.back())], stochastic_, rng);
  }

 private:
  MemoryOneParams params_;
  bool stochastic_;
};

class GameMemoryOnePlayer final : public Player {
 public:
  GameMemoryOnePlayer(Action initial, GameVectorFn fn, bool stochastic)
      : initial_(initial), fn_(std::move(fn)), stochastic_(stochastic) {}

  Action decide(const MatchView& view, Rng& rng) override {
    if (view.own.empty()) {
      p_ = fn_(view.ctx.payoffs);
      return initial_;
    }
    return draw(p_[state_index(view.own.back(), view.opp.back())], stochastic_, rng);
  }

 private:
  Action initial_;
  GameVectorFn fn_;
  bool stochastic_;
  MemoryOneVector p_{};
};

class FsmPlayer final : public Player {
 public:
  explicit FsmPlayer(std::shared_ptr<const FsmTable> table) : table_(std::move(table)) {}

  Action decide(const MatchView& view, Rng&) override {
    if (view.own.empty()) {
      state_ = table_->initial_state;
      return table_->initial_action;
    }
    const Action input = view.opp.back();
    for (const auto& t : table_->transitions) {
      if (t.state == state_ && t.input == input) {
        state_ = t.next_state;
        return t.output;
      }
    }
    throw Error("FSM has no transition for the current state");
  }

 private:
  std::shared_ptr<const FsmTable> table_;
  int state_ = 0;
};

std::string lookup_key(const MatchView& view, std::size_t depth) {
  std::string key;
  key.reserve(2 * depth);
  for (std::size_t i = view.own.size() - depth; i < view.own.size(); ++i) key += to_char(view.own[i]);
  for (std::size_t i = view.opp.size() - depth; i < view.opp.size(); ++i) key += to_char(view.opp[i]);
  return key;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

Action single_action(const std::string& tok, const std::string& field) {
  if (tok == "C") return Action::C;
  if (tok == "D") return Action::D;
  throw ValidationError(field, "expected C or D, got '" + tok + "'");
}

std::string read_file(const std::string& path, const std::string& field) {
  std::ifstream in(path);
  if (!in) throw ValidationError(field, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class T>
T field(const json& params, const char* name) {
  if (!params.contains(name)) throw ValidationError(name, "missing");
  try {
    return params.at(name).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(name, "wrong type");
  }
}

Action action_field(const json& params, const char* name, Action fallback) {
  if (!params.contains(name)) return fallback;
  return single_action(field<std::string>(params, name), name);
}

}  // namespace

FsmTable parse_fsm_table(std::string_view text) {
  FsmTable table;
  bool have_state = false, have_action = false;
  std::istringstream in{std::string(text)};
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    auto toks = split_ws(line);
    if (toks.empty() || toks[0][0] == '#') continue;
    const std::string where = "line " + std::to_string(lineno);
    if (toks[0] == "initial_state" && toks.size() == 2) {
      table.initial_state = std::stoi(toks[1]);
      have_state = true;
    } else if (toks[0] == "initial_action" && toks.size() == 2) {
      table.initial_action = single_action(toks[1], "initial_action");
      have_action = true;
    } else if (toks.size() == 4) {
      try {
        table.transitions.push_back(FsmTransition{std::stoi(toks[0]), single_action(toks[1], "input"),
                                                  std::stoi(toks[2]), single_action(toks[3], "output")});
      } catch (const std::invalid_argument&) {
        throw ValidationError("transitions", where + ": malformed row");
      }
    } else {
      throw ValidationError("transitions", where + ": expected 4 columns");
    }
  }
  if (!have_state) throw ValidationError("initial_state", "missing");
  if (!have_action) throw ValidationError("initial_action", "missing");
  validate(table);
  return table;
}

std::string format_fsm_table(const FsmTable& table) {
  std::ostringstream out;
  out << "initial_state " << table.initial_state << "\n";
  out << "initial_action " << to_char(table.initial_action) << "\n";
  out << "# state input next_state output\n";
  for (const auto& t : table.transitions) {
    out << t.state << ' ' << to_char(t.input) << ' ' << t.next_state << ' ' << to_char(t.output) << "\n";
  }
  return out.str();
}

LookupTable parse_lookup_table(std::string_view text) {
  LookupTable table;
  bool have_depth = false;
  std::istringstream in{std::string(text)};
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    auto toks = split_ws(line);
    if (toks.empty() || toks[0][0] == '#') continue;
    if (toks[0] == "depth" && toks.size() == 2) {
      table.depth = static_cast<std::size_t>(std::stoul(toks[1]));
      have_depth = true;
    } else if (toks[0] == "initial" && toks.size() == 2) {
      table.initial = parse_actions(toks[1]);
    } else if (toks.size() == 3) {
      table.table[toks[0] + toks[1]] = single_action(toks[2], "table");
    } else {
      throw ValidationError("table", "line " + std::to_string(lineno) + ": expected 3 columns");
    }
  }
  if (!have_depth) throw ValidationError("depth", "missing");
  validate(table);
  return table;
}

void validate(const MemoryOneParams& params) {
  static constexpr const char* names[] = {"p_CC", "p_CD", "p_DC", "p_DD"};
  for (int i = 0; i < 4; ++i) {
    if (!is_probability(params.p[i])) throw ValidationError(names[i], "must lie in [0, 1]");
  }
}

void validate(const FsmTable& table) {
  if (table.transitions.empty()) throw ValidationError("transitions", "empty table");
  std::set<int> states;
  std::set<std::pair<int, Action>> keys;
  for (const auto& t : table.transitions) {
    states.insert(t.state);
    if (!keys.insert({t.state, t.input}).second) {
      throw ValidationError("transitions", "duplicate row for state " + std::to_string(t.state));
    }
  }
  if (!states.contains(table.initial_state)) {
    throw ValidationError("initial_state", "state " + std::to_string(table.initial_state) +
                                              " has no transitions");
  }
  for (const auto& t : table.transitions) {
    if (!states.contains(t.next_state)) {
      throw ValidationError("transitions", "state " + std::to_string(t.next_state) +
                                               " is reachable but has no transitions");
    }
  }
  for (int s : states) {
    for (Action in : {Action::C, Action::D}) {
      if (!keys.contains({s, in})) {
        throw ValidationError("transitions", "state " + std::to_string(s) + " lacks input " +
                                                 std::string(1, to_char(in)));
      }
    }
  }
}

void validate(const LookupTable& table) {
  if (table.depth == 0 || table.depth > 8) throw ValidationError("depth", "must lie in [1, 8]");
  if (table.initial.size() != table.depth) {
    throw ValidationError("initial", "needs exactly depth = " + std::to_string(table.depth) + " actions");
  }
  const std::size_t key_len = 2 * table.depth;
  const std::size_t expected = std::size_t{1} << key_len;
  for (const auto& [key, _] : table.table) {
    if (key.size() != key_len || key.find_first_not_of("CD") != std::string::npos) {
      throw ValidationError("table", "bad key '" + key + "'");
    }
  }
  if (table.table.size() != expected) {
    throw ValidationError("table", "expected " + std::to_string(expected) + " entries, got " +
                                       std::to_string(table.table.size()));
  }
}

StrategySpec make_memory_one(std::string name, const MemoryOneParams& params) {
  validate(params);
  StrategyMetadata meta = is_degenerate(params.p) ? detail::deterministic(1) : detail::stochastic(1);
  json j = {{"initial", std::string(1, to_char(params.initial))},
            {"p_CC", params.p[0]}, {"p_CD", params.p[1]}, {"p_DC", params.p[2]}, {"p_DD", params.p[3]}};
  return StrategySpec(std::move(name), ArchetypeKind::memory_one, std::move(j), meta,
                      detail::factory_of<MemoryOnePlayer>(params));
}

StrategySpec make_game_memory_one(std::string name, Action initial, GameVectorFn vector_fn,
                                  bool stochastic, json params) {
  StrategyMetadata meta = stochastic ? detail::stochastic(1) : detail::deterministic(1);
  meta.makes_use_of_game = true;
  const MemoryOneVector p = vector_fn(PayoffMatrix{});
  params["initial"] = std::string(1, to_char(initial));
  params["vector_default_game"] = {p[0], p[1], p[2], p[3]};
  return StrategySpec(std::move(name), ArchetypeKind::memory_one, std::move(params), meta,
                      detail::factory_of<GameMemoryOnePlayer>(initial, vector_fn, stochastic));
}

StrategySpec make_fsm(std::string name, const FsmTable& table) {
  validate(table);
  auto shared = std::make_shared<const FsmTable>(table);
  json rows = json::array();
  for (const auto& t : table.transitions) {
    rows.push_back({t.state, std::string(1, to_char(t.input)), t.next_state,
                    std::string(1, to_char(t.output))});
  }
  json j = {{"initial_state", table.initial_state},
            {"initial_action", std::string(1, to_char(table.initial_action))},
            {"transitions", rows}};
  return StrategySpec(std::move(name), ArchetypeKind::fsm, std::move(j),
                      detail::deterministic(kInfiniteMemory),
                      [shared] { return std::make_unique<FsmPlayer>(shared); });
}

StrategySpec make_lookup(std::string name, const LookupTable& table) {
  validate(table);
  auto shared = std::make_shared<const LookupTable>(table);
  auto rule = [shared](const MatchView& view, Rng&) {
    if (view.own.size() < shared->depth) return shared->initial[view.own.size()];
    return shared->table.at(lookup_key(view, shared->depth));
  };
  json entries = json::object();
  for (const auto& [k, a] : table.table) entries[k] = std::string(1, to_char(a));
  json j = {{"depth", table.depth}, {"initial", to_string(table.initial)}, {"table", entries}};
  return StrategySpec(std::move(name), ArchetypeKind::lookup_table, std::move(j),
                      detail::deterministic(table.depth), detail::stateless(rule));
}

StrategySpec make_cycler(std::string name, const std::vector<Action>& cycle) {
  if (cycle.empty()) throw ValidationError("cycle", "must be non-empty");
  auto rule = [cycle](const MatchView& view, Rng&) { return cycle[view.own.size() % cycle.size()]; };
  return StrategySpec(std::move(name), ArchetypeKind::cycler, json{{"cycle", to_string(cycle)}},
                      detail::deterministic(cycle.size() - 1), detail::stateless(rule));
}

namespace {

StrategySpec ratio_spec(std::string name, double ratio, ArchetypeKind kind, json params) {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) throw ValidationError("ratio", "must be positive");
  auto rule = [ratio](const MatchView& view, Rng&) {
    if (view.opp.empty()) return Action::C;
    if (view.opp.defections() == 0) return Action::D;
    const double coop = static_cast<double>(view.opp.cooperations() + view.own.cooperations());
    const double def = static_cast<double>(view.opp.defections() + view.own.defections());
    return coop / def > ratio ? Action::D : Action::C;
  };
  params["ratio"] = ratio;
  params["rule"] =
      "C on turn 1; D while the opponent has never defected; otherwise D when "
      "(cooperations of both) / (defections of both) > ratio";
  return StrategySpec(std::move(name), kind, std::move(params),
                      detail::deterministic(kInfiniteMemory), detail::stateless(rule));
}

}  // namespace

StrategySpec make_threshold_ratio(std::string name, double ratio) {
  return ratio_spec(std::move(name), ratio, ArchetypeKind::threshold_ratio, json::object());
}

double math_constant(std::string_view which) {
  if (which == "e") return std::numbers::e;
  if (which == "pi") return std::numbers::pi;
  if (which == "phi") return std::numbers::phi;
  throw ValidationError("constant", "unknown constant '" + std::string(which) + "'");
}

ArchetypeKind parse_archetype_kind(std::string_view text) {
  for (auto k : {ArchetypeKind::memory_one, ArchetypeKind::fsm, ArchetypeKind::lookup_table,
                 ArchetypeKind::cycler, ArchetypeKind::math_constant, ArchetypeKind::threshold_ratio}) {
    if (text == to_string(k)) return k;
  }
  throw ValidationError("kind", "unknown archetype '" + std::string(text) + "'");
}

StrategySpec load_archetype(ArchetypeKind kind, const json& params) {
  if (!params.is_object()) throw ValidationError("params", "must be an object");
  std::string name = params.contains("name") ? field<std::string>(params, "name") : "";
  auto named = [&](std::string fallback) { return name.empty() ? fallback : name; };

  switch (kind) {
    case ArchetypeKind::memory_one: {
      MemoryOneParams p;
      p.initial = action_field(params, "initial", Action::C);
      p.p = {field<double>(params, "p_CC"), field<double>(params, "p_CD"),
             field<double>(params, "p_DC"), field<double>(params, "p_DD")};
      std::ostringstream label;
      label << "Memory One (" << p.p[0] << ", " << p.p[1] << ", " << p.p[2] << ", " << p.p[3] << ")";
      return make_memory_one(named(label.str()), p);
    }
    case ArchetypeKind::fsm: {
      FsmTable table;
      if (params.contains("file")) {
        table = parse_fsm_table(read_file(field<std::string>(params, "file"), "file"));
      } else if (params.contains("table")) {
        table = parse_fsm_table(field<std::string>(params, "table"));
      } else {
        table.initial_state = field<int>(params, "initial_state");
        table.initial_action = action_field(params, "initial_action", Action::C);
        const json rows = field<json>(params, "transitions");
        if (!rows.is_array()) throw ValidationError("transitions", "must be an array");
        for (const auto& row : rows) {
          if (!row.is_array() || row.size() != 4) {
            throw ValidationError("transitions", "each row needs [state, input, next_state, output]");
          }
          try {
            table.transitions.push_back(
                FsmTransition{row[0].get<int>(), single_action(row[1].get<std::string>(), "transitions"),
                              row[2].get<int>(), single_action(row[3].get<std::string>(), "transitions")});
          } catch (const json::exception&) {
            throw ValidationError("transitions", "malformed row " + row.dump());
          }
        }
      }
      return make_fsm(named("FSM"), table);
    }
    case ArchetypeKind::lookup_table: {
      LookupTable table;
      if (params.contains("file")) {
        table = parse_lookup_table(read_file(field<std::string>(params, "file"), "file"));
      } else if (params.contains("text")) {
        table = parse_lookup_table(field<std::string>(params, "text"));
      } else {
        table.depth = field<std::size_t>(params, "depth");
        try {
          table.initial = parse_actions(field<std::string>(params, "initial"));
        } catch (const ConfigError& e) {
          throw ValidationError("initial", e.what());
        }
        const json entries = field<json>(params, "table");
        if (!entries.is_object()) throw ValidationError("table", "must be an object");
        for (const auto& [k, v] : entries.items()) {
          if (!v.is_string()) throw ValidationError("table", "entry '" + k + "' must be C or D");
          table.table[k] = single_action(v.get<std::string>(), "table");
        }
      }
      return make_lookup(named("LookerUp"), table);
    }
    case ArchetypeKind::cycler: {
      const auto text = field<std::string>(params, "cycle");
      std::vector<Action> cycle;
      try {
        cycle = parse_actions(text);
      } catch (const ConfigError& e) {
        throw ValidationError("cycle", e.what());
      }
      return make_cycler(named("Cycler " + text), cycle);
    }
    case ArchetypeKind::math_constant: {
      const auto which = field<std::string>(params, "constant");
      return ratio_spec(named(which), math_constant(which), ArchetypeKind::math_constant,
                        json{{"constant", which}});
    }
    case ArchetypeKind::threshold_ratio:
      return make_threshold_ratio(named("Ratio"), field<double>(params, "ratio"));
    case ArchetypeKind::builtin:
    case ArchetypeKind::meta:
      break;
  }
  throw ValidationError("kind", std::string("cannot load archetype ") + to_string(kind));
}

}  // namespace ipd
