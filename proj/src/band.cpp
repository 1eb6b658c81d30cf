#include "gprtfa/band.hpp"

#include "gprtfa/errors.hpp"

#include <cmath>
#include <sstream>

namespace gprtfa {

void FrequencyBand::validate_within(double span_low, double span_high) const {
  const double tol = 1e-9 * std::max(std::abs(span_low), std::abs(span_high));
  std::ostringstream msg;
  if (!(std::isfinite(f_low) && std::isfinite(f_high))) {
    msg << "band edges must be finite";
    throw ConfigError(msg.str());
  }
  if (!(f_low < f_high)) {
    msg << "inverted or empty band [" << f_low << ", " << f_high << "] Hz";
    throw ConfigError(msg.str());
  }
  if (f_low < span_low - tol || f_high > span_high + tol) {
    msg << "band [" << f_low << ", " << f_high << "] Hz lies outside the sweep span ["
        << span_low << ", " << span_high << "] Hz";
    throw ConfigError(msg.str());
  }
}

} // namespace gprtfa
