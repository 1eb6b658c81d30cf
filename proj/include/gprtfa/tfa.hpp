#pragma once

#include "gprtfa/preprocess.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace gprtfa {

enum class WindowKind { Hamming };

struct StftConfig {
  std::size_t fft_points{0};    // 0: use the trace length
  double window_fraction{0.1};  // window length as a fraction of the trace length
  std::size_t hop{1};           // time samples between rows
  WindowKind window{WindowKind::Hamming};

  std::size_t window_length(std::size_t n_time) const;
  std::size_t fft_size(std::size_t n_time) const;
  // Throws ConfigError unless hop >= 1 and 4 <= L <= N.
  void validate(std::size_t n_time) const;
};

// w[n] = 0.54 - 0.46 cos(2 pi n / (L - 1)); [1] for L == 1.
std::vector<double> hamming_window(std::size_t length);

// Magnitude spectrogram of one trace.
struct Spectrogram {
  Eigen::MatrixXd magnitudes; // rows: time, cols: frequency bins
  std::vector<double> times;  // seconds after corrected time zero, per row
  std::vector<double> freqs;  // Hz, per column, offset by f_start
  std::size_t trace_index{0};

  double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
  double df() const { return freqs.size() > 1 ? freqs[1] - freqs[0] : 0.0; }
};

// Complex STFT before taking magnitudes. Row r holds the DFT of the window
// centered on sample r * hop (zero outside the trace), zero-padded to N.
Eigen::MatrixXcd stft_complex(const ComplexTrace& trace, const StftConfig& cfg);

// Frequency of STFT column m: f_start + m / (N * dt).
std::vector<double> stft_frequencies(std::size_t fft_points, double dt, double f_start);

Spectrogram stft(const ComplexTrace& trace, const StftConfig& cfg, double f_start,
                 std::size_t trace_index = 0);

// One spectrogram per trace of the stack, in trace order. Holds n_traces
// dense matrices at once; frd_from_stack streams instead.
std::vector<Spectrogram> stack_stft(const ComplexStack& stack, const StftConfig& cfg,
                                    double f_start);

} // namespace gprtfa
