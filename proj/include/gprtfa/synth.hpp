#pragma once

#include "gprtfa/band.hpp"
#include "gprtfa/ingest.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gprtfa {

inline constexpr double kSpeedOfLight = 2.998e8; // m/s

// Homogeneous soil. Attenuation grows linearly with frequency:
// alpha(f) = attenuation_slope * f, in nepers per meter.
struct SoilModel {
  double rel_permittivity{4.0};
  double attenuation_slope{0.0}; // Np / m / Hz

  double wave_speed() const;
  void validate() const;
};

struct Scatterer {
  double x0{0.0};           // lateral position along the scan line, m
  double depth{0.1};        // m below the surface
  double reflectivity{1.0}; // dimensionless
};

// Ground truth for the forward model.
struct ScattererScene {
  std::vector<Scatterer> scatterers;
  SoilModel soil;
  double direct_coupling_amp{1.0};
  FrequencyBand source_band{0.2e9, 4.0e9};
  // Width of each raised-cosine transition as a fraction of the band width;
  // the spectrum is 1/2 exactly at the band edges. 0 gives a hard band.
  double source_rolloff{0.05};
  double noise_rms{0.0}; // complex Gaussian, per frequency point
  // Noise is added only inside this band; unset means the whole sweep.
  std::optional<FrequencyBand> noise_band{};
  std::uint64_t rng_seed{1};

  void validate() const;
};

std::string scene_to_json(const ScattererScene& scene);
// Throws ConfigError on malformed JSON, unknown keys, or invalid values.
ScattererScene scene_from_json(std::string_view text);

// Two-way bistatic travel time from a transmitter at x - sep/2 and a receiver
// at x + sep/2 (both on the surface) via the scatterer.
double travel_time(double x, const Scatterer& scatterer, const SoilModel& soil,
                   double antenna_separation);

// Raised-cosine source amplitude at frequency f.
double source_spectrum(double f, const FrequencyBand& band, double rolloff);

// s21(f, trace) = S(f) * [D e^{-j2pi f sep/c}
//                         + sum_i A_i e^{-2 alpha0 f R_i} e^{-j2pi f t_i}]
//                 + noise,
// where R_i is the mean one-way path. Each trace draws its noise from its own
// seeded substream, so results depend only on (scene, config).
SurveyFrequencyDomain synth_survey(const ScattererScene& scene, const SurveyConfig& config);

} // namespace gprtfa
