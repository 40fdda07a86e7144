#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ipd/trials.hpp"

namespace ipd {

// Conjunction of `<param> <op> <value>` clauses joined by "and", "&&" or
// ",". Params: seed, N, k, n, p_n, p_e. Ops: <, <=, >, >=, ==.
class TrialFilter {
 public:
  TrialFilter() = default;
  // Throws ConfigError on unknown params, ops or malformed values.
  static TrialFilter parse(std::string_view text);

  bool matches(const TrialParams& params) const;
  bool empty() const { return clauses_.empty(); }
  const std::string& text() const { return text_; }

 private:
  enum class Op { lt, le, gt, ge, eq };
  struct Clause {
    std::string param;
    Op op;
    double value;
  };

  std::vector<Clause> clauses_;
  std::string text_;
};

}  // namespace ipd
