#pragma once

#include "gprtfa/preprocess.hpp"
#include "gprtfa/synth.hpp"

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

namespace fixture {

using namespace gprtfa;

inline constexpr std::size_t kApex = 35;                    // middle of the default 71 traces
inline constexpr double kApexX = 0.03 * static_cast<double>(kApex);

inline ScattererScene single_target(double depth, double eps_r, double reflectivity = 0.5,
                                    double coupling = 1.0) {
  ScattererScene s;
  s.scatterers.push_back({kApexX, depth, reflectivity});
  s.soil.rel_permittivity = eps_r;
  s.direct_coupling_amp = coupling;
  return s;
}

// Sample index of the largest magnitude on one trace, optionally restricted
// to [lo, hi].
inline std::size_t peak_index(const BScanTime& b, std::size_t trace, std::size_t lo = 0,
                              std::size_t hi = static_cast<std::size_t>(-1)) {
  hi = std::min(hi, b.n_time() - 1);
  std::size_t best = lo;
  for (std::size_t t = lo; t <= hi; ++t)
    if (b.samples(static_cast<Eigen::Index>(trace), static_cast<Eigen::Index>(t)) >
        b.samples(static_cast<Eigen::Index>(trace), static_cast<Eigen::Index>(best)))
      best = t;
  return best;
}

// Largest magnitude on the apex trace within +-2 samples of the expected
// target time, over the RMS of every trace in a late, target-free window.
inline double apex_to_background_db(const BScanTime& b, std::size_t apex, double t_target,
                                    double bg_from = 50e-9, double bg_to = 200e-9) {
  const auto centre = static_cast<long long>(std::lround(t_target / b.dt));
  double peak = 0.0;
  for (long long t = centre - 2; t <= centre + 2; ++t)
    peak = std::max(peak, b.samples(static_cast<Eigen::Index>(apex), static_cast<Eigen::Index>(t)));
  const auto lo = static_cast<Eigen::Index>(std::ceil(bg_from / b.dt));
  const auto hi = std::min<Eigen::Index>(static_cast<Eigen::Index>(std::floor(bg_to / b.dt)),
                                         static_cast<Eigen::Index>(b.n_time()) - 1);
  const auto block = b.samples.middleCols(lo, hi - lo + 1);
  const double rms = std::sqrt(block.squaredNorm() / static_cast<double>(block.size()));
  return 20.0 * std::log10(peak / rms);
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() /
             ("gprtfa_test_" + name + "_" + std::to_string(std::random_device{}()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

} // namespace fixture
