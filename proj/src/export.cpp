#include "gprtfa/export.hpp"

#include "gprtfa/errors.hpp"
#include "text_util.hpp"

#include <json.hpp>

#include <sstream>

namespace gprtfa {

using nlohmann::json;

std::string matrix_to_csv(const Eigen::MatrixXd& m, int precision) {
  std::string out;
  out.reserve(static_cast<std::size_t>(m.size()) * 12);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out.push_back(',');
      out += precision > 0 ? detail::fmt_double(m(r, c), precision) : detail::fmt_double(m(r, c));
    }
    out.push_back('\n');
  }
  return out;
}

Eigen::MatrixXd matrix_from_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  for (std::string_view raw : detail::split_lines(text)) {
    ++line_no;
    const auto line = detail::trim(raw);
    if (line.empty()) continue;
    std::vector<double> row;
    for (auto field : detail::split(line, ',')) {
      const auto v = detail::parse_double(detail::trim(field));
      if (!v) throw DataError("non-numeric matrix entry '" + std::string(field) + "'", line_no);
      row.push_back(*v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw DataError("ragged matrix row", line_no);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return {};
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return m;
}

std::string bscan_to_csv(const BScanTime& bscan) { return matrix_to_csv(bscan.samples.transpose()); }

std::string bscan_sidecar_json(const BScanTime& bscan) {
  json j = {{"dt_s", bscan.dt}, {"t0_index", bscan.t0_index}, {"positions_m", bscan.positions}};
  return j.dump(2) + "\n";
}

std::string spectrogram_to_csv(const Spectrogram& spec) { return matrix_to_csv(spec.magnitudes, 12); }

std::string spectrogram_sidecar_json(const Spectrogram& spec, double dt) {
  json j = {{"dt_s", dt},
            {"df_hz", spec.df()},
            {"f_start_hz", spec.freqs.empty() ? 0.0 : spec.freqs.front()},
            {"trace_index", spec.trace_index}};
  return j.dump(2) + "\n";
}

std::string frd_peak_freq_csv(const FrdMap& frd) { return matrix_to_csv(frd.peak_freq.transpose()); }

std::string frd_peak_mag_csv(const FrdMap& frd) { return matrix_to_csv(frd.peak_mag.transpose(), 12); }

std::string frd_sidecar_json(const FrdMap& frd, const std::optional<FrequencyBand>& band) {
  json j = {{"threshold", frd.threshold},
            {"band_estimate_hz", band ? json::array({band->f_low, band->f_high}) : json(nullptr)},
            {"degenerate", frd.degenerate},
            {"nonzero_entries", frd.nonzero_count()}};
  return j.dump(2) + "\n";
}

} // namespace gprtfa
