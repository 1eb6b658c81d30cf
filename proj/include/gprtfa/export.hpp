#pragma once

#include "gprtfa/frd.hpp"
#include "gprtfa/preprocess.hpp"
#include "gprtfa/tfa.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <string_view>

namespace gprtfa {

// Plain comma-separated matrix, one line per row. precision 0 writes the
// shortest round-trip form.
std::string matrix_to_csv(const Eigen::MatrixXd& m, int precision = 0);
Eigen::MatrixXd matrix_from_csv(std::string_view text);

// B-scan export: rows = time, cols = traces.
std::string bscan_to_csv(const BScanTime& bscan);
// {dt_s, t0_index, positions_m}
std::string bscan_sidecar_json(const BScanTime& bscan);

// Spectrogram export: rows = time, cols = frequency.
std::string spectrogram_to_csv(const Spectrogram& spec);
// {dt_s, df_hz, f_start_hz, trace_index}
std::string spectrogram_sidecar_json(const Spectrogram& spec, double dt);

// FRD export: rows = time, cols = traces, matching the B-scan layout.
std::string frd_peak_freq_csv(const FrdMap& frd);
std::string frd_peak_mag_csv(const FrdMap& frd);
// {threshold, band_estimate_hz, degenerate, nonzero_entries}
std::string frd_sidecar_json(const FrdMap& frd, const std::optional<FrequencyBand>& band);

} // namespace gprtfa
