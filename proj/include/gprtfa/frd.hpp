#pragma once

#include "gprtfa/band.hpp"
#include "gprtfa/preprocess.hpp"
#include "gprtfa/tfa.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace gprtfa {

// Strongest STFT response of every time row of one trace.
struct RowMaxProfile {
  std::vector<double> max_mag;
  std::vector<double> peak_freq; // Hz; ties go to the lowest bin
  std::size_t trace_index{0};
};

RowMaxProfile row_max_extract(const Spectrogram& spec);

// Frequency axis shared by every spectrogram of a B-scan.
struct FrdAxes {
  std::vector<double> times; // seconds, per row
  double f_min{0.0};         // first bin
  double df{0.0};            // bin spacing
  std::size_t n_bins{0};

  double f_max() const { return f_min + static_cast<double>(n_bins - 1) * df; }
  static FrdAxes of(const Spectrogram& spec);
};

// Frequency response distribution: for each (trace, time) the frequency of
// the row maximum, kept only where that maximum reaches the B-scan-wide
// threshold.
struct FrdMap {
  Eigen::MatrixXd peak_freq; // n_traces x n_time, Hz, 0 where suppressed
  Eigen::MatrixXd peak_mag;  // same shape, 0 where suppressed
  double threshold{0.0};
  bool degenerate{false};    // no STFT energy at all
  FrdAxes axes;

  std::size_t n_traces() const { return static_cast<std::size_t>(peak_freq.rows()); }
  std::size_t n_time() const { return static_cast<std::size_t>(peak_freq.cols()); }
  std::size_t nonzero_count() const;
};

// threshold = threshold_frac * max magnitude over every spectrogram.
FrdMap build_frd(std::span<const Spectrogram> specs, double threshold_frac = 0.25);
FrdMap build_frd(std::span<const RowMaxProfile> profiles, const FrdAxes& axes,
                 double threshold_frac = 0.25);

// STFT + row-max per trace without keeping every spectrogram in memory.
FrdMap frd_from_stack(const ComplexStack& stack, const StftConfig& cfg, double f_start,
                      double threshold_frac = 0.25);

// (trace, frequency-bin) count of surviving FRD entries, for views that
// plot occupancy against frequency.
Eigen::MatrixXd frd_occupancy(const FrdMap& frd);

// Alternative reading of the thresholding step: every STFT bin at or above
// the threshold counts, not just each row's maximum.
struct OccupancyMap {
  Eigen::MatrixXd counts; // n_traces x n_bins
  double threshold{0.0};
  FrdAxes axes;
};
OccupancyMap all_bins_occupancy(const ComplexStack& stack, const StftConfig& cfg,
                                double f_start, double threshold_frac = 0.25);

// Magnitude-weighted quantile band holding at least `coverage` of the FRD
// mass, edges pushed outward by half a bin.
FrequencyBand estimate_band(const FrdMap& frd, double coverage = 0.90);

// Sum of peak_mag over nonzero entries whose frequency lies inside the band.
double band_mass(const FrdMap& frd, const FrequencyBand& band);

// Per-bin weights: 1 inside the band, 0 outside, with a raised-cosine ramp
// over the first and last `taper_bins` in-band bins. An edge that coincides
// with the end of the sweep is left untapered, so the full span is a no-op.
std::vector<double> band_mask(const SurveyConfig& cfg, const FrequencyBand& band,
                              std::size_t taper_bins);

SurveyFrequencyDomain apply_band_filter(const SurveyFrequencyDomain& survey,
                                        const FrequencyBand& band, std::size_t taper_bins);

struct BandpassParams {
  std::size_t taper_bins{5};
  PipelineParams pipeline;
};

// Filters the sweeps to the band and reruns the basic pipeline. Time zero is
// taken from the unfiltered survey so both B-scans share their axes.
ProcessedSurvey bandpass_regenerate(const SurveyFrequencyDomain& survey,
                                    const FrequencyBand& band,
                                    const BandpassParams& params = {});

} // namespace gprtfa
