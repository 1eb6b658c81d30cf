#include "gprtfa/synth.hpp"

#include "gprtfa/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <numbers>
#include <random>

namespace gprtfa {

using nlohmann::json;

double SoilModel::wave_speed() const { return kSpeedOfLight / std::sqrt(rel_permittivity); }

void SoilModel::validate() const {
  if (!(std::isfinite(rel_permittivity) && rel_permittivity >= 1.0))
    throw ConfigError("soil: relative permittivity must be >= 1");
  if (!(std::isfinite(attenuation_slope) && attenuation_slope >= 0.0))
    throw ConfigError("soil: attenuation slope must be >= 0");
}

void ScattererScene::validate() const {
  soil.validate();
  for (std::size_t i = 0; i < scatterers.size(); ++i) {
    const auto& s = scatterers[i];
    if (!(std::isfinite(s.depth) && s.depth > 0.0))
      throw ConfigError("scatterer " + std::to_string(i) + ": depth must be > 0");
    if (!std::isfinite(s.x0) || !std::isfinite(s.reflectivity))
      throw ConfigError("scatterer " + std::to_string(i) + ": non-finite value");
  }
  if (!std::isfinite(direct_coupling_amp)) throw ConfigError("scene: direct coupling must be finite");
  if (!(source_band.f_low >= 0.0 && source_band.f_low < source_band.f_high))
    throw ConfigError("scene: source band must satisfy 0 <= f_low < f_high");
  if (!(source_rolloff >= 0.0 && source_rolloff <= 1.0))
    throw ConfigError("scene: source roll-off must lie in [0, 1]");
  if (!(std::isfinite(noise_rms) && noise_rms >= 0.0))
    throw ConfigError("scene: noise_rms must be >= 0");
  if (noise_band && !(noise_band->f_low < noise_band->f_high))
    throw ConfigError("scene: noise band must satisfy f_low < f_high");
}

double travel_time(double x, const Scatterer& scatterer, const SoilModel& soil,
                   double antenna_separation) {
  const double tx = x - 0.5 * antenna_separation;
  const double rx = x + 0.5 * antenna_separation;
  const double r_tx = std::hypot(tx - scatterer.x0, scatterer.depth);
  const double r_rx = std::hypot(rx - scatterer.x0, scatterer.depth);
  return (r_tx + r_rx) / soil.wave_speed();
}

double source_spectrum(double f, const FrequencyBand& band, double rolloff) {
  const double ramp = rolloff * band.width();
  if (ramp <= 0.0) return band.contains(f) ? 1.0 : 0.0;
  const double lo0 = band.f_low - 0.5 * ramp, lo1 = band.f_low + 0.5 * ramp;
  const double hi0 = band.f_high - 0.5 * ramp, hi1 = band.f_high + 0.5 * ramp;
  if (f <= lo0 || f >= hi1) return 0.0;
  if (f < lo1) return 0.5 * (1.0 - std::cos(std::numbers::pi * (f - lo0) / ramp));
  if (f > hi0) return 0.5 * (1.0 + std::cos(std::numbers::pi * (f - hi0) / ramp));
  return 1.0;
}

SurveyFrequencyDomain synth_survey(const ScattererScene& scene, const SurveyConfig& config) {
  scene.validate();
  config.validate();
  const auto grid = config.frequency_grid();
  const double two_pi = 2.0 * std::numbers::pi;
  const double sep = config.antenna_separation;
  const double v = scene.soil.wave_speed();

  std::vector<double> src(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k)
    src[k] = source_spectrum(grid[k], scene.source_band, scene.source_rolloff);

  SurveyFrequencyDomain survey;
  survey.config = config;
  survey.sweeps.reserve(config.n_traces);
  for (std::size_t trace = 0; trace < config.n_traces; ++trace) {
    const double x = static_cast<double>(trace) * config.trace_step;
    std::vector<cplx> s21(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k)
      s21[k] = scene.direct_coupling_amp * std::polar(1.0, -two_pi * grid[k] * sep / kSpeedOfLight);
    for (const auto& sc : scene.scatterers) {
      const double t = travel_time(x, sc, scene.soil, sep);
      const double mean_path = 0.5 * t * v;
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const double amp =
            sc.reflectivity * std::exp(-2.0 * scene.soil.attenuation_slope * grid[k] * mean_path);
        s21[k] += std::polar(amp, -two_pi * grid[k] * t);
      }
    }
    for (std::size_t k = 0; k < grid.size(); ++k) s21[k] *= src[k];

    if (scene.noise_rms > 0.0) {
      const auto seed = scene.rng_seed;
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(trace), 0x5eedu};
      std::mt19937_64 rng(seq);
      std::normal_distribution<double> gauss(0.0, scene.noise_rms / std::sqrt(2.0));
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        if (!scene.noise_band || scene.noise_band->contains(grid[k])) s21[k] += cplx(re, im);
      }
    }
    survey.sweeps.push_back(SweepRecord{trace, x, std::move(s21)});
  }
  return survey;
}

// --- Scene JSON -----------------------------------------------------------------

namespace {

json band_json(const FrequencyBand& b) { return {{"f_low", b.f_low}, {"f_high", b.f_high}}; }

double number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError("scene: '" + key + "' must be a number");
  return j.get<double>();
}

FrequencyBand band_from(const json& j, const std::string& key) {
  if (!j.is_object()) throw ConfigError("scene: '" + key + "' must be an object");
  FrequencyBand b;
  for (const auto& [k, v] : j.items()) {
    if (k == "f_low") b.f_low = number(v, key + ".f_low");
    else if (k == "f_high") b.f_high = number(v, key + ".f_high");
    else throw ConfigError("scene: unknown key '" + key + "." + k + "'");
  }
  return b;
}

} // namespace

std::string scene_to_json(const ScattererScene& scene) {
  json scatterers = json::array();
  for (const auto& s : scene.scatterers)
    scatterers.push_back({{"x0", s.x0}, {"depth", s.depth}, {"reflectivity", s.reflectivity}});
  json j = {
      {"scatterers", scatterers},
      {"soil",
       {{"rel_permittivity", scene.soil.rel_permittivity},
        {"attenuation_slope", scene.soil.attenuation_slope}}},
      {"direct_coupling_amp", scene.direct_coupling_amp},
      {"source_band", band_json(scene.source_band)},
      {"source_rolloff", scene.source_rolloff},
      {"noise_rms", scene.noise_rms},
      {"noise_band", scene.noise_band ? band_json(*scene.noise_band) : json(nullptr)},
      {"rng_seed", scene.rng_seed},
  };
  return j.dump(2) + "\n";
}

ScattererScene scene_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scene: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("scene: top level must be an object");

  ScattererScene scene;
  for (const auto& [key, value] : j.items()) {
    if (key == "scatterers") {
      if (!value.is_array()) throw ConfigError("scene: 'scatterers' must be an array");
      for (const auto& item : value) {
        if (!item.is_object()) throw ConfigError("scene: scatterer entries must be objects");
        Scatterer s;
        for (const auto& [k, v] : item.items()) {
          if (k == "x0") s.x0 = number(v, k);
          else if (k == "depth") s.depth = number(v, k);
          else if (k == "reflectivity") s.reflectivity = number(v, k);
          else throw ConfigError("scene: unknown scatterer key '" + k + "'");
        }
        scene.scatterers.push_back(s);
      }
    } else if (key == "soil") {
      if (!value.is_object()) throw ConfigError("scene: 'soil' must be an object");
      for (const auto& [k, v] : value.items()) {
        if (k == "rel_permittivity") scene.soil.rel_permittivity = number(v, k);
        else if (k == "attenuation_slope") scene.soil.attenuation_slope = number(v, k);
        else throw ConfigError("scene: unknown soil key '" + k + "'");
      }
    } else if (key == "direct_coupling_amp") {
      scene.direct_coupling_amp = number(value, key);
    } else if (key == "source_band") {
      scene.source_band = band_from(value, key);
    } else if (key == "source_rolloff") {
      scene.source_rolloff = number(value, key);
    } else if (key == "noise_rms") {
      scene.noise_rms = number(value, key);
    } else if (key == "noise_band") {
      if (!value.is_null()) scene.noise_band = band_from(value, key);
    } else if (key == "rng_seed") {
      if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0))
        throw ConfigError("scene: 'rng_seed' must be a non-negative integer");
      scene.rng_seed = value.get<std::uint64_t>();
    } else {
      throw ConfigError("scene: unknown key '" + key + "'");
    }
  }
  scene.validate();
  return scene;
}

} // namespace gprtfa
