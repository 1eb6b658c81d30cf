#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gprtfa {

using cplx = std::complex<double>;

// Acquisition geometry and VNA sweep settings. Field names double as the
// survey.json keys; every value is SI (Hz, m, dBm).
struct SurveyConfig {
  double f_start{0.2e9};
  double f_stop{4.0e9};
  std::size_t n_freq_points{1001};
  double trace_step{0.03};
  std::size_t n_traces{71};
  double antenna_separation{0.1};
  double if_bandwidth{1000.0}; // metadata only
  double source_power{-10.0};  // metadata only

  void validate() const;

  double freq_step() const;
  double frequency(std::size_t k) const;
  std::vector<double> frequency_grid() const;
  // Sample interval of the inverse transform, 1 / (N * freq_step).
  double time_step() const;
};

std::string survey_config_to_json(const SurveyConfig& cfg);
// Missing keys keep their defaults; unknown keys are rejected.
SurveyConfig survey_config_from_json(std::string_view text);

// One parsed sweep file: ascending frequency grid plus S21.
struct SweepData {
  std::vector<double> freqs_hz;
  std::vector<cplx> s21;
};

struct SweepRecord {
  std::size_t trace_index{0};
  double position{0.0}; // meters along the scan line
  std::vector<cplx> s21;
};

struct SurveyFrequencyDomain {
  SurveyConfig config;
  std::vector<SweepRecord> sweeps;
};

// --- Touchstone v1, two-port ------------------------------------------------

enum class TouchstoneFormat { RI, MA, DB };
enum class FrequencyUnit { Hz, kHz, MHz, GHz };

struct TouchstoneData {
  std::vector<double> freqs_hz;
  // Column order of a v1 two-port row: S11 S21 S12 S22.
  std::vector<cplx> s11, s21, s12, s22;
};

TouchstoneData parse_touchstone_full(std::string_view text);
SweepData parse_touchstone(std::string_view text);

std::string emit_touchstone(const TouchstoneData& data,
                            TouchstoneFormat format = TouchstoneFormat::RI,
                            FrequencyUnit unit = FrequencyUnit::GHz);
// S21-only file; the other three parameters are written as zero.
std::string emit_touchstone(const SweepData& sweep,
                            TouchstoneFormat format = TouchstoneFormat::RI,
                            FrequencyUnit unit = FrequencyUnit::GHz);

// --- Sweep CSV ("freq_hz,re,im") ------------------------------------------

SweepData parse_sweep_csv(std::string_view text);
std::string emit_sweep_csv(const SweepData& sweep);

// --- Survey assembly --------------------------------------------------------

struct IndexedSweep {
  std::size_t trace_index{0};
  SweepData data;
};

// Inputs are taken in trace order.
SurveyFrequencyDomain assemble_survey(const SurveyConfig& config,
                                      std::span<const SweepData> per_trace);
// Inputs may arrive in any order; indices must cover 0..n_traces-1 exactly.
SurveyFrequencyDomain assemble_survey(const SurveyConfig& config,
                                      std::span<const IndexedSweep> per_trace);

// Rebuilds the per-trace SweepData (grid + s21) of a survey.
std::vector<SweepData> sweeps_of(const SurveyFrequencyDomain& survey);

// --- Survey directories -----------------------------------------------------
//
// A survey on disk is a directory holding survey.json plus one sweep file per
// trace named trace_0000.s2p (or trace_0000.csv).

enum class SweepFileFormat { Touchstone, Csv };

SurveyFrequencyDomain read_survey_dir(const std::filesystem::path& dir);
// Same as above but the SurveyConfig comes from the caller, not survey.json.
SurveyFrequencyDomain read_survey_dir(const std::filesystem::path& dir,
                                      const SurveyConfig& config);
void write_survey_dir(const std::filesystem::path& dir,
                      const SurveyFrequencyDomain& survey,
                      SweepFileFormat format = SweepFileFormat::Touchstone);

SurveyConfig read_survey_config(const std::filesystem::path& json_file);
void write_survey_config(const std::filesystem::path& json_file,
                         const SurveyConfig& cfg);

} // namespace gprtfa
