#include "ipd/payoff.hpp"

#include "ipd/errors.hpp"

namespace ipd {

void PayoffMatrix::validate() const {
  if (!(T > R && R > P && P > S)) throw ConfigError("payoffs must satisfy T > R > P > S");
  if (!(2 * R > T + S)) throw ConfigError("payoffs must satisfy 2R > T + S");
}

}  // namespace ipd
