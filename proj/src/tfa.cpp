#include "gprtfa/tfa.hpp"

#include "gprtfa/errors.hpp"
#include "gprtfa/fft.hpp"

#include <cmath>
#include <numbers>

namespace gprtfa {

std::size_t StftConfig::window_length(std::size_t n_time) const {
  return static_cast<std::size_t>(std::floor(window_fraction * static_cast<double>(n_time)));
}

std::size_t StftConfig::fft_size(std::size_t n_time) const {
  return fft_points == 0 ? n_time : fft_points;
}

void StftConfig::validate(std::size_t n_time) const {
  if (hop < 1) throw ConfigError("STFT hop must be >= 1");
  if (!(window_fraction > 0.0 && window_fraction <= 1.0))
    throw ConfigError("STFT window fraction must lie in (0, 1]");
  const std::size_t len = window_length(n_time);
  const std::size_t n = fft_size(n_time);
  if (len < 4)
    throw ConfigError("STFT window length " + std::to_string(len) + " is below 4 samples");
  if (len > n)
    throw ConfigError("STFT window length " + std::to_string(len) + " exceeds FFT size " +
                      std::to_string(n));
}

std::vector<double> hamming_window(std::size_t length) {
  if (length == 0) throw ConfigError("window length must be >= 1");
  if (length == 1) return {1.0};
  std::vector<double> w(length);
  const double denom = static_cast<double>(length - 1);
  for (std::size_t n = 0; n < length; ++n)
    w[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / denom);
  // Exact mirror so symmetry does not depend on cos rounding.
  for (std::size_t n = 0; n < length / 2; ++n) w[length - 1 - n] = w[n];
  return w;
}

Eigen::MatrixXcd stft_complex(const ComplexTrace& trace, const StftConfig& cfg) {
  const std::size_t n_time = trace.values.size();
  cfg.validate(n_time);
  const std::size_t len = cfg.window_length(n_time);
  const std::size_t n_fft = cfg.fft_size(n_time);
  const std::size_t rows = (n_time + cfg.hop - 1) / cfg.hop;
  const auto window = hamming_window(len);
  const auto half = static_cast<std::ptrdiff_t>(len / 2);

  Eigen::MatrixXcd out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(n_fft));
  Fft fft(n_fft);
  std::vector<cplx> seg(n_fft), spec(n_fft);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto center = static_cast<std::ptrdiff_t>(r * cfg.hop);
    std::fill(seg.begin(), seg.end(), cplx{});
    for (std::size_t j = 0; j < len; ++j) {
      const std::ptrdiff_t n = center - half + static_cast<std::ptrdiff_t>(j);
      if (n >= 0 && n < static_cast<std::ptrdiff_t>(n_time))
        seg[j] = trace.values[static_cast<std::size_t>(n)] * window[j];
    }
    fft.forward(seg, spec);
    for (std::size_t m = 0; m < n_fft; ++m)
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(m)) = spec[m];
  }
  return out;
}

std::vector<double> stft_frequencies(std::size_t fft_points, double dt, double f_start) {
  std::vector<double> freqs(fft_points);
  const double df = 1.0 / (static_cast<double>(fft_points) * dt);
  for (std::size_t m = 0; m < fft_points; ++m) freqs[m] = f_start + static_cast<double>(m) * df;
  return freqs;
}

Spectrogram stft(const ComplexTrace& trace, const StftConfig& cfg, double f_start,
                 std::size_t trace_index) {
  if (!(trace.dt > 0.0)) throw ConfigError("trace dt must be positive");
  Spectrogram out;
  out.magnitudes = stft_complex(trace, cfg).cwiseAbs();
  out.trace_index = trace_index;
  out.freqs = stft_frequencies(cfg.fft_size(trace.values.size()), trace.dt, f_start);
  out.times.resize(static_cast<std::size_t>(out.magnitudes.rows()));
  for (std::size_t r = 0; r < out.times.size(); ++r)
    out.times[r] = static_cast<double>(r * cfg.hop) * trace.dt;
  return out;
}

std::vector<Spectrogram> stack_stft(const ComplexStack& stack, const StftConfig& cfg,
                                    double f_start) {
  std::vector<Spectrogram> out;
  out.reserve(stack.n_traces());
  for (std::size_t i = 0; i < stack.n_traces(); ++i)
    out.push_back(stft(trace_of(stack, i), cfg, f_start, i));
  return out;
}

} // namespace gprtfa
