#include "ipd/filter.hpp"

#include <charconv>
#include <regex>

#include "ipd/errors.hpp"

namespace ipd {

namespace {

double param_value(const TrialParams& p, const std::string& name) {
  if (name == "seed") return static_cast<double>(p.seed);
  if (name == "N") return static_cast<double>(p.N);
  if (name == "k") return static_cast<double>(p.k);
  if (name == "n") return static_cast<double>(p.n);
  if (name == "p_n") return p.p_n;
  return p.p_e;
}

}  // namespace

TrialFilter TrialFilter::parse(std::string_view text) {
  TrialFilter f;
  f.text_ = std::string(text);
  static const std::regex splitter(R"(\s*(?:&&|,|\band\b)\s*)");
  static const std::regex clause(R"(^\s*([A-Za-z_]+)\s*(<=|>=|==|<|>)\s*([-+0-9.eE]+)\s*$)");
  const std::string s(text);
  if (s.find_first_not_of(" \t") == std::string::npos) return f;
  for (std::sregex_token_iterator it(s.begin(), s.end(), splitter, -1), end; it != end; ++it) {
    const std::string part = *it;
    std::smatch m;
    if (!std::regex_match(part, m, clause)) throw ConfigError("malformed filter clause: '" + part + "'");
    const std::string param = m[1];
    if (param != "seed" && param != "N" && param != "k" && param != "n" && param != "p_n" &&
        param != "p_e") {
      throw ConfigError("unknown filter key: " + param);
    }
    const std::string op = m[2], num = m[3];
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
    if (ec != std::errc() || ptr != num.data() + num.size()) {
      throw ConfigError("bad filter value: " + num);
    }
    const Op o = op == "<" ? Op::lt : op == "<=" ? Op::le : op == ">" ? Op::gt : op == ">=" ? Op::ge : Op::eq;
    f.clauses_.push_back({param, o, value});
  }
  return f;
}

bool TrialFilter::matches(const TrialParams& params) const {
  for (const auto& c : clauses_) {
    const double v = param_value(params, c.param);
    bool ok = false;
    switch (c.op) {
      case Op::lt: ok = v < c.value; break;
      case Op::le: ok = v <= c.value; break;
      case Op::gt: ok = v > c.value; break;
      case Op::ge: ok = v >= c.value; break;
      case Op::eq: ok = v == c.value; break;
    }
    if (!ok) return false;
  }
  return true;
}

}  // namespace ipd
