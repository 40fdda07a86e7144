#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ipd {

enum class Action : std::uint8_t { C = 0, D = 1 };

constexpr Action flip(Action a) { return a == Action::C ? Action::D : Action::C; }

constexpr char to_char(Action a) { return a == Action::C ? 'C' : 'D'; }

// Parses a string over {C, D}; throws ConfigError on any other character.
std::vector<Action> parse_actions(std::string_view text);

std::string to_string(const std::vector<Action>& actions);

// Index of the (own, opponent) state: CC=0, CD=1, DC=2, DD=3.
constexpr int state_index(Action own, Action opp) {
  return 2 * static_cast<int>(own) + static_cast<int>(opp);
}

}  // namespace ipd
