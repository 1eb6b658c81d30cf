#include "gprtfa/frd.hpp"

#include "gprtfa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gprtfa {

RowMaxProfile row_max_extract(const Spectrogram& spec) {
  const auto rows = spec.magnitudes.rows();
  const auto cols = spec.magnitudes.cols();
  if (rows == 0 || cols == 0) throw ConfigError("row_max_extract: empty spectrogram");
  if (static_cast<std::size_t>(cols) != spec.freqs.size())
    throw ConfigError("row_max_extract: frequency axis does not match the matrix");

  RowMaxProfile out;
  out.trace_index = spec.trace_index;
  out.max_mag.resize(static_cast<std::size_t>(rows));
  out.peak_freq.resize(static_cast<std::size_t>(rows));
  for (Eigen::Index r = 0; r < rows; ++r) {
    Eigen::Index best = 0;
    double best_mag = spec.magnitudes(r, 0);
    for (Eigen::Index m = 1; m < cols; ++m) {
      if (spec.magnitudes(r, m) > best_mag) {
        best_mag = spec.magnitudes(r, m);
        best = m;
      }
    }
    out.max_mag[static_cast<std::size_t>(r)] = best_mag;
    out.peak_freq[static_cast<std::size_t>(r)] = spec.freqs[static_cast<std::size_t>(best)];
  }
  return out;
}

FrdAxes FrdAxes::of(const Spectrogram& spec) {
  FrdAxes axes;
  axes.times = spec.times;
  axes.n_bins = spec.freqs.size();
  axes.f_min = spec.freqs.empty() ? 0.0 : spec.freqs.front();
  axes.df = spec.df();
  return axes;
}

std::size_t FrdMap::nonzero_count() const {
  return static_cast<std::size_t>((peak_freq.array() != 0.0).count());
}

namespace {

void check_threshold_frac(double threshold_frac) {
  if (!(threshold_frac > 0.0 && threshold_frac < 1.0))
    throw ConfigError("FRD threshold fraction must lie in (0, 1)");
}

} // namespace

FrdMap build_frd(std::span<const RowMaxProfile> profiles, const FrdAxes& axes,
                 double threshold_frac) {
  check_threshold_frac(threshold_frac);
  if (profiles.empty()) throw ConfigError("build_frd: no spectrograms");
  const std::size_t n_time = profiles.front().max_mag.size();
  for (const auto& p : profiles)
    if (p.max_mag.size() != n_time || p.peak_freq.size() != n_time)
      throw ConfigError("build_frd: spectrograms do not share their time axis");

  FrdMap frd;
  frd.axes = axes;
  const auto n_tr = static_cast<Eigen::Index>(profiles.size());
  const auto n_t = static_cast<Eigen::Index>(n_time);
  frd.peak_freq = Eigen::MatrixXd::Zero(n_tr, n_t);
  frd.peak_mag = Eigen::MatrixXd::Zero(n_tr, n_t);

  double global_max = 0.0;
  for (const auto& p : profiles)
    for (double m : p.max_mag) global_max = std::max(global_max, m);
  if (!(global_max > 0.0)) {
    frd.degenerate = true;
    return frd;
  }

  frd.threshold = threshold_frac * global_max;
  for (Eigen::Index i = 0; i < n_tr; ++i) {
    const auto& p = profiles[static_cast<std::size_t>(i)];
    for (Eigen::Index t = 0; t < n_t; ++t) {
      const double mag = p.max_mag[static_cast<std::size_t>(t)];
      if (mag >= frd.threshold) {
        frd.peak_freq(i, t) = p.peak_freq[static_cast<std::size_t>(t)];
        frd.peak_mag(i, t) = mag;
      }
    }
  }
  return frd;
}

FrdMap build_frd(std::span<const Spectrogram> specs, double threshold_frac) {
  if (specs.empty()) throw ConfigError("build_frd: no spectrograms");
  const FrdAxes axes = FrdAxes::of(specs.front());
  std::vector<RowMaxProfile> profiles;
  profiles.reserve(specs.size());
  for (const auto& s : specs) {
    if (s.freqs.size() != axes.n_bins || s.times.size() != axes.times.size())
      throw ConfigError("build_frd: spectrograms do not share axes");
    profiles.push_back(row_max_extract(s));
  }
  return build_frd(std::span<const RowMaxProfile>(profiles), axes, threshold_frac);
}

FrdMap frd_from_stack(const ComplexStack& stack, const StftConfig& cfg, double f_start,
                      double threshold_frac) {
  check_threshold_frac(threshold_frac);
  if (stack.n_traces() == 0) throw ConfigError("build_frd: no spectrograms");
  std::vector<RowMaxProfile> profiles;
  profiles.reserve(stack.n_traces());
  FrdAxes axes;
  for (std::size_t i = 0; i < stack.n_traces(); ++i) {
    const Spectrogram spec = stft(trace_of(stack, i), cfg, f_start, i);
    if (i == 0) axes = FrdAxes::of(spec);
    profiles.push_back(row_max_extract(spec));
  }
  return build_frd(std::span<const RowMaxProfile>(profiles), axes, threshold_frac);
}

namespace {

std::size_t bin_of(const FrdAxes& axes, double f) {
  if (axes.n_bins < 2 || !(axes.df > 0.0)) return 0;
  const double pos = std::round((f - axes.f_min) / axes.df);
  return static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(axes.n_bins - 1)));
}

} // namespace

Eigen::MatrixXd frd_occupancy(const FrdMap& frd) {
  Eigen::MatrixXd occ = Eigen::MatrixXd::Zero(frd.peak_freq.rows(),
                                              static_cast<Eigen::Index>(frd.axes.n_bins));
  for (Eigen::Index i = 0; i < frd.peak_freq.rows(); ++i)
    for (Eigen::Index t = 0; t < frd.peak_freq.cols(); ++t)
      if (frd.peak_freq(i, t) != 0.0)
        occ(i, static_cast<Eigen::Index>(bin_of(frd.axes, frd.peak_freq(i, t)))) += 1.0;
  return occ;
}

OccupancyMap all_bins_occupancy(const ComplexStack& stack, const StftConfig& cfg,
                                double f_start, double threshold_frac) {
  check_threshold_frac(threshold_frac);
  if (stack.n_traces() == 0) throw ConfigError("all_bins_occupancy: empty stack");

  // Two passes so only one spectrogram is alive at a time.
  double global_max = 0.0;
  OccupancyMap out;
  for (std::size_t i = 0; i < stack.n_traces(); ++i) {
    const Spectrogram spec = stft(trace_of(stack, i), cfg, f_start, i);
    if (i == 0) out.axes = FrdAxes::of(spec);
    global_max = std::max(global_max, spec.magnitudes.maxCoeff());
  }
  out.counts = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(stack.n_traces()),
                                     static_cast<Eigen::Index>(out.axes.n_bins));
  if (!(global_max > 0.0)) return out;
  out.threshold = threshold_frac * global_max;
  for (std::size_t i = 0; i < stack.n_traces(); ++i) {
    const Spectrogram spec = stft(trace_of(stack, i), cfg, f_start, i);
    out.counts.row(static_cast<Eigen::Index>(i)) =
        (spec.magnitudes.array() >= out.threshold).cast<double>().colwise().sum();
  }
  return out;
}

FrequencyBand estimate_band(const FrdMap& frd, double coverage) {
  if (!(coverage > 0.0 && coverage <= 1.0))
    throw ConfigError("band coverage must lie in (0, 1]");

  std::vector<std::pair<double, double>> entries; // (freq, weight)
  for (Eigen::Index i = 0; i < frd.peak_freq.rows(); ++i)
    for (Eigen::Index t = 0; t < frd.peak_freq.cols(); ++t)
      if (frd.peak_freq(i, t) != 0.0) entries.emplace_back(frd.peak_freq(i, t), frd.peak_mag(i, t));
  if (entries.empty())
    throw DegenerateInputError("frequency response distribution has no nonzero entries");
  std::sort(entries.begin(), entries.end());

  // Collapse equal frequencies so ties move together.
  std::vector<double> freqs, weights;
  for (const auto& [f, w] : entries) {
    if (!freqs.empty() && freqs.back() == f) {
      weights.back() += w;
    } else {
      freqs.push_back(f);
      weights.push_back(w);
    }
  }
  double total = 0.0;
  for (double w : weights) total += w;
  const double tail = 0.5 * (1.0 - coverage) * total;

  // Lowest edge: last group whose strictly-lower mass stays within the tail.
  std::size_t lo = 0;
  double below = 0.0;
  for (std::size_t g = 0; g + 1 < freqs.size(); ++g) {
    if (below + weights[g] > tail) break;
    below += weights[g];
    lo = g + 1;
  }
  std::size_t hi = freqs.size() - 1;
  double above = 0.0;
  for (std::size_t g = freqs.size() - 1; g > lo; --g) {
    if (above + weights[g] > tail) break;
    above += weights[g];
    hi = g - 1;
  }

  const double half_bin = 0.5 * frd.axes.df;
  FrequencyBand band{freqs[lo] - half_bin, freqs[hi] + half_bin};
  band.f_low = std::max(band.f_low, frd.axes.f_min);
  band.f_high = std::min(band.f_high, frd.axes.f_max());
  if (!(band.f_low < band.f_high)) {
    // Single-bin axis edge case: widen to the neighbouring bin.
    if (band.f_low > frd.axes.f_min) band.f_low = std::max(frd.axes.f_min, band.f_high - frd.axes.df);
    else band.f_high = std::min(frd.axes.f_max(), band.f_low + frd.axes.df);
  }
  return band;
}

double band_mass(const FrdMap& frd, const FrequencyBand& band) {
  double mass = 0.0;
  for (Eigen::Index i = 0; i < frd.peak_freq.rows(); ++i)
    for (Eigen::Index t = 0; t < frd.peak_freq.cols(); ++t) {
      const double f = frd.peak_freq(i, t);
      if (f != 0.0 && band.contains(f)) mass += frd.peak_mag(i, t);
    }
  return mass;
}

std::vector<double> band_mask(const SurveyConfig& cfg, const FrequencyBand& band,
                              std::size_t taper_bins) {
  cfg.validate();
  band.validate_within(cfg.f_start, cfg.f_stop);
  const auto grid = cfg.frequency_grid();
  const double tol = 1e-9 * cfg.f_stop;
  std::vector<double> mask(grid.size(), 0.0);
  std::size_t first = grid.size(), last = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (grid[k] >= band.f_low - tol && grid[k] <= band.f_high + tol) {
      mask[k] = 1.0;
      first = std::min(first, k);
      last = k;
    }
  }
  if (first == grid.size()) throw ConfigError("band contains no sweep frequency point");

  const std::size_t inside = last - first + 1;
  const std::size_t taper = std::min(taper_bins, inside / 2);
  for (std::size_t j = 0; j < taper; ++j) {
    const double w =
        0.5 * (1.0 - std::cos(std::numbers::pi * (static_cast<double>(j) + 0.5) /
                              static_cast<double>(taper)));
    if (first > 0) mask[first + j] = w;               // sweep edges need no ramp
    if (last + 1 < grid.size()) mask[last - j] = w;
  }
  return mask;
}

SurveyFrequencyDomain apply_band_filter(const SurveyFrequencyDomain& survey,
                                        const FrequencyBand& band, std::size_t taper_bins) {
  const auto mask = band_mask(survey.config, band, taper_bins);
  SurveyFrequencyDomain out = survey;
  for (auto& sweep : out.sweeps) {
    if (sweep.s21.size() != mask.size())
      throw ConfigError("trace " + std::to_string(sweep.trace_index) +
                        ": sweep length does not match the config");
    for (std::size_t k = 0; k < mask.size(); ++k) sweep.s21[k] *= mask[k];
  }
  return out;
}

ProcessedSurvey bandpass_regenerate(const SurveyFrequencyDomain& survey,
                                    const FrequencyBand& band, const BandpassParams& params) {
  PipelineParams pipeline = params.pipeline;
  if (pipeline.time_zero && !pipeline.time_zero_index)
    pipeline.time_zero_index = pipeline_time_zero(survey, pipeline);
  return basic_pipeline(apply_band_filter(survey, band, params.taper_bins), pipeline);
}

} // namespace gprtfa
