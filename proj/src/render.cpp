#include "gprtfa/render.hpp"

#include "gprtfa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

namespace gprtfa {

void RenderSpec::validate(double record_length) const {
  if (!(db_floor < 0.0)) throw ConfigError("render: dB floor must be negative");
  if (crop_time) {
    if (!(*crop_time > 0.0)) throw ConfigError("render: crop time must be positive");
    if (*crop_time > record_length * (1.0 + 1e-12))
      throw ConfigError("render: crop time exceeds the record length");
  }
}

std::string render_pgm(const Eigen::MatrixXd& m, const RenderSpec& spec, double dt) {
  if (!m.allFinite()) throw ConfigError("render: matrix holds non-finite values");
  Eigen::Index rows = m.rows();
  if (spec.crop_time) {
    if (!(dt > 0.0)) throw ConfigError("render: cropping needs a positive dt");
    spec.validate(static_cast<double>(m.rows()) * dt);
    const auto keep = static_cast<Eigen::Index>(std::floor(*spec.crop_time / dt + 1e-9)) + 1;
    rows = std::min(rows, keep);
  } else {
    spec.validate(0.0);
  }
  const Eigen::MatrixXd mag = m.topRows(rows).cwiseAbs();
  const double peak = mag.size() > 0 ? mag.maxCoeff() : 0.0;

  std::string out = "P5\n" + std::to_string(m.cols()) + " " + std::to_string(rows) + "\n65535\n";
  out.reserve(out.size() + static_cast<std::size_t>(mag.size()) * 2);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      double level = 0.0;
      if (peak > 0.0 && mag(r, c) > 0.0) {
        const double ratio = mag(r, c) / peak;
        if (spec.normalization == Normalization::Linear) {
          level = ratio;
        } else {
          const double db = std::clamp(20.0 * std::log10(ratio), spec.db_floor, 0.0);
          level = (db - spec.db_floor) / -spec.db_floor;
        }
      }
      const auto px = static_cast<std::uint16_t>(std::lround(std::clamp(level, 0.0, 1.0) * 65535.0));
      out.push_back(static_cast<char>(px >> 8));
      out.push_back(static_cast<char>(px & 0xff));
    }
  }
  return out;
}

} // namespace gprtfa
