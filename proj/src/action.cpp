#include "ipd/action.hpp"

#include "ipd/errors.hpp"

namespace ipd {

std::vector<Action> parse_actions(std::string_view text) {
  std::vector<Action> out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == 'C') {
      out.push_back(Action::C);
    } else if (c == 'D') {
      out.push_back(Action::D);
    } else {
      throw ConfigError(std::string("invalid action character '") + c + "' in \"" +
                        std::string(text) + "\"");
    }
  }
  return out;
}

std::string to_string(const std::vector<Action>& actions) {
  std::string s;
  s.reserve(actions.size());
  for (Action a : actions) s.push_back(to_char(a));
  return s;
}

}  // namespace ipd
