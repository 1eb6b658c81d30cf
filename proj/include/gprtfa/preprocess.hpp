#pragma once

#include "gprtfa/ingest.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

namespace gprtfa {

// A single time-domain A-scan in complex baseband form: bin k of the sweep
// sits at f_start + k * freq_step, so the trace carries a carrier offset of
// f_start that the STFT frequency axis adds back.
struct ComplexTrace {
  std::vector<cplx> values;
  double dt{0.0};
};

// Radargram, one row per trace, one column per time sample.
//
// t0_index is the sample of the original record that was moved to time zero
// by time_zero_correction (0 when no correction was applied). Sample i of the
// stored matrix lies at time i * dt after the corrected zero.
template <typename Scalar>
struct BScan {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> samples;
  double dt{0.0};
  std::size_t t0_index{0};
  std::vector<double> positions; // meters, one per trace

  std::size_t n_traces() const { return static_cast<std::size_t>(samples.rows()); }
  std::size_t n_time() const { return static_cast<std::size_t>(samples.cols()); }
};

using BScanTime = BScan<double>;
using ComplexStack = BScan<cplx>;

ComplexTrace trace_of(const ComplexStack& stack, std::size_t trace);
BScanTime magnitude(const ComplexStack& stack);

// --- Operations -----------------------------------------------------------------

// 1/N-normalized inverse DFT of the sweep. Output length n_freq_points,
// dt = config.time_step().
ComplexTrace ifft_to_time(const SweepRecord& sweep, const SurveyConfig& config);
ComplexStack to_time_domain(const SurveyFrequencyDomain& survey);

// Subtracts each trace's mean.
BScanTime zero_offset_removal(const BScanTime& bscan);
ComplexStack zero_offset_removal(const ComplexStack& stack);

// First index whose magnitude reaches threshold_frac * max magnitude.
// Throws DegenerateInputError if every magnitude is zero.
std::size_t first_break_index(const std::vector<double>& magnitudes, double threshold_frac);

// Picks the first break on the mean trace and circularly shifts every trace
// so that it lands on sample 0. One global shift keeps hyperbola geometry.
BScanTime time_zero_correction(const BScanTime& bscan, double threshold_frac = 0.05);
ComplexStack time_zero_correction(const ComplexStack& stack, double threshold_frac = 0.05);

// Circular left shift by `index` samples; t0_index advances by the same.
ComplexStack shift_time_zero(const ComplexStack& stack, std::size_t index);

// Subtracts the best rank-`rank` approximation of the matrix. For complex
// stacks the real and imaginary planes are cleaned independently.
BScanTime svd_background_removal(const BScanTime& bscan, std::size_t rank = 1);
ComplexStack svd_background_removal(const ComplexStack& stack, std::size_t rank = 1);

struct PipelineParams {
  bool zero_offset{true};
  bool time_zero{true};
  bool svd_background{true};
  double time_zero_threshold{0.05};
  std::size_t svd_rank{1};
  // When set, time-zero correction applies this shift instead of picking one.
  std::optional<std::size_t> time_zero_index{};

  static PipelineParams none() { return {false, false, false, 0.05, 1, std::nullopt}; }
};

struct ProcessedSurvey {
  ComplexStack stack;  // feeds the STFT
  BScanTime magnitude; // for display and target picking
};

// IFFT -> zero-offset removal -> time-zero correction -> SVD background
// removal. An all-zero stack skips time-zero correction, since it has no
// first break to align.
ProcessedSurvey basic_pipeline(const SurveyFrequencyDomain& survey,
                               const PipelineParams& params = {});

// The shift basic_pipeline would apply at its time-zero step (0 when the step
// is disabled or the stack is all zero).
std::size_t pipeline_time_zero(const SurveyFrequencyDomain& survey,
                               const PipelineParams& params = {});

} // namespace gprtfa
