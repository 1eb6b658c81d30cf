#pragma once

namespace gprtfa {

// Closed frequency interval [f_low, f_high] in Hz.
struct FrequencyBand {
  double f_low{0.0};
  double f_high{0.0};

  double width() const { return f_high - f_low; }
  bool contains(double f) const { return f >= f_low && f <= f_high; }

  // Throws ConfigError unless span_low <= f_low < f_high <= span_high.
  void validate_within(double span_low, double span_high) const;
};

} // namespace gprtfa
