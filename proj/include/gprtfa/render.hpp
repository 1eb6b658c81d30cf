#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>

namespace gprtfa {

enum class Normalization { Linear, Db };

// Grayscale rendering of a magnitude matrix; rows of the matrix become image
// rows (time runs downward for B-scans and spectrograms).
struct RenderSpec {
  Normalization normalization{Normalization::Linear};
  double db_floor{-40.0};            // dB relative to the matrix maximum
  std::optional<double> crop_time{}; // keep rows with index * dt <= crop_time

  void validate(double record_length) const;
};

// 16-bit binary PGM (P5, maxval 65535, big-endian samples).
//
// Linear: pixel = round(65535 * |v| / max|v|).
// Db:     pixel = round(65535 * (clamp(20 log10(|v| / max|v|), floor, 0) - floor) / -floor).
// An all-zero matrix renders black in both modes; a constant nonzero matrix
// renders white.
std::string render_pgm(const Eigen::MatrixXd& m, const RenderSpec& spec = {}, double dt = 0.0);

} // namespace gprtfa
