#include "gprtfa/errors.hpp"
#include "gprtfa/preprocess.hpp"
#include "gprtfa/synth.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace gprtfa;

namespace {

double max_rel(const SurveyFrequencyDomain& a, const SurveyFrequencyDomain& b) {
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.sweeps.size(); ++i)
    for (std::size_t k = 0; k < a.sweeps[i].s21.size(); ++k) {
      worst = std::max(worst, std::abs(a.sweeps[i].s21[k] - b.sweeps[i].s21[k]));
      scale = std::max(scale, std::abs(a.sweeps[i].s21[k]));
    }
  return worst / scale;
}

} // namespace

TEST_SUITE("synth") {

TEST_CASE("travel time examples") {
  SoilModel sand;
  CHECK(travel_time(1.0, {1.0, 0.1, 1.0}, sand, 0.0) == doctest::Approx(2 * 0.1 / (2.998e8 / 2)));
  CHECK(travel_time(1.0, {1.0, 0.1, 1.0}, sand, 0.0) == doctest::Approx(1.333e-9).epsilon(1e-3));
  CHECK(travel_time(1.0, {1.0, 0.1, 1.0}, sand, 0.1) == doctest::Approx(1.491e-9).epsilon(1e-3));
  CHECK(travel_time(1.0, {1.0, 0.3, 1.0}, sand, 0.1) == doctest::Approx(4.055e-9).epsilon(1e-3));
}

TEST_CASE("travel time matches the hand formula") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double x = 3 * u(rng), x0 = 3 * u(rng), d = 0.01 + u(rng), eps = 1 + 20 * u(rng), sep = 0.3 * u(rng);
    SoilModel soil{eps, 0.0};
    const double got = travel_time(x, {x0, d, 1.0}, soil, sep);
    REQUIRE(got == doctest::Approx(oracle::travel_time(x, x0, d, eps, sep)).epsilon(1e-13));
  }
}

TEST_CASE("raised-cosine source") {
  const FrequencyBand b{1e9, 2e9};
  CHECK(source_spectrum(1.5e9, b, 0.1) == 1.0);
  CHECK(source_spectrum(1e9, b, 0.1) == doctest::Approx(0.5));
  CHECK(source_spectrum(2e9, b, 0.1) == doctest::Approx(0.5));
  CHECK(source_spectrum(0.9e9, b, 0.1) == 0.0);
  CHECK(source_spectrum(2.06e9, b, 0.1) == 0.0);
  CHECK(source_spectrum(0.97e9, b, 0.1) < source_spectrum(0.99e9, b, 0.1));
  CHECK(source_spectrum(1e9, b, 0.0) == 1.0);
  CHECK(source_spectrum(0.999e9, b, 0.0) == 0.0);
}

TEST_CASE("direct coupling alone: identical traces, removed by rank-1 SVD") {
  ScattererScene scene;
  SurveyConfig cfg;
  const auto survey = synth_survey(scene, cfg);
  for (const auto& s : survey.sweeps) REQUIRE(s.s21 == survey.sweeps[0].s21);
  const auto stack = to_time_domain(survey);
  CHECK(svd_background_removal(stack, 1).samples.norm() <= 1e-9 * stack.samples.norm());
}

TEST_CASE("hyperbola: every trace peaks at its travel time") {
  auto scene = fixture::single_target(0.1, 4.0, 0.5, 0.0);
  SurveyConfig cfg;
  const auto raw = basic_pipeline(synth_survey(scene, cfg), PipelineParams::none()).magnitude;
  for (std::size_t i = 0; i < cfg.n_traces; ++i) {
    const double x = static_cast<double>(i) * cfg.trace_step;
    const double t = oracle::travel_time(x, fixture::kApexX, 0.1, 4.0, 0.1);
    const auto idx = fixture::peak_index(raw, i);
    REQUIRE(std::abs(static_cast<double>(idx) * raw.dt - t) <= raw.dt);
  }
}

TEST_CASE("same seed, same bits; different seed, different noise") {
  auto scene = fixture::single_target(0.2, 4.0);
  scene.noise_rms = 0.1;
  scene.rng_seed = 1234567890123ULL;
  SurveyConfig cfg;
  const auto a = synth_survey(scene, cfg), b = synth_survey(scene, cfg);
  for (std::size_t i = 0; i < a.sweeps.size(); ++i) REQUIRE(a.sweeps[i].s21 == b.sweeps[i].s21);
  scene.rng_seed += 1;
  CHECK(synth_survey(scene, cfg).sweeps[3].s21 != a.sweeps[3].s21);
}

TEST_CASE("attenuation makes the echo fall off with frequency") {
  auto scene = fixture::single_target(0.3, 9.0, 1.0, 0.0);
  scene.soil.attenuation_slope = 2e-9;
  scene.source_rolloff = 0.0;
  SurveyConfig cfg;
  cfg.n_traces = 5;
  for (const auto& s : synth_survey(scene, cfg).sweeps)
    for (std::size_t k = 1; k < s.s21.size(); ++k) REQUIRE(std::abs(s.s21[k]) <= std::abs(s.s21[k - 1]));
}

TEST_CASE("scatterers superpose") {
  ScattererScene both;
  both.direct_coupling_amp = 0.0;
  both.soil = {6.0, 1e-9};
  both.scatterers = {{0.5, 0.15, 0.7}, {1.4, 0.35, -0.4}};
  auto first = both, second = both;
  first.scatterers = {both.scatterers[0]};
  second.scatterers = {both.scatterers[1]};
  SurveyConfig cfg;
  const auto s = synth_survey(both, cfg), a = synth_survey(first, cfg), b = synth_survey(second, cfg);
  auto sum = a;
  for (std::size_t i = 0; i < sum.sweeps.size(); ++i)
    for (std::size_t k = 0; k < sum.sweeps[i].s21.size(); ++k) sum.sweeps[i].s21[k] += b.sweeps[i].s21[k];
  CHECK(max_rel(s, sum) <= 1e-12);
}

TEST_CASE("noise level and noise band") {
  ScattererScene scene;
  scene.direct_coupling_amp = 0.0;
  scene.noise_rms = 0.1;
  SurveyConfig cfg;
  const auto s = synth_survey(scene, cfg);
  double acc = 0.0;
  std::size_t n = 0;
  for (const auto& sw : s.sweeps)
    for (auto v : sw.s21) acc += std::norm(v), ++n;
  CHECK(std::sqrt(acc / static_cast<double>(n)) == doctest::Approx(0.1).epsilon(0.02));

  scene.noise_band = FrequencyBand{2e9, 4e9};
  const auto banded = synth_survey(scene, cfg);
  for (std::size_t k = 0; k < 1001; ++k) {
    const double f = cfg.frequency(k);
    if (f < 2e9) REQUIRE(banded.sweeps[0].s21[k] == cplx(0.0, 0.0));
    else REQUIRE(banded.sweeps[0].s21[k] == s.sweeps[0].s21[k]); // same draws, masked
  }
}

TEST_CASE("positions and trace indices follow the config") {
  SurveyConfig cfg;
  cfg.n_traces = 4;
  cfg.trace_step = 0.05;
  const auto s = synth_survey(ScattererScene{}, cfg);
  REQUIRE(s.sweeps.size() == 4);
  CHECK(s.sweeps[3].trace_index == 3);
  CHECK(s.sweeps[3].position == doctest::Approx(0.15));
}

TEST_CASE("scene validation and JSON") {
  ScattererScene scene = fixture::single_target(0.25, 7.0);
  scene.noise_rms = 0.02;
  scene.noise_band = FrequencyBand{1e9, 3e9};
  scene.rng_seed = 99;
  scene.source_rolloff = 0.2;
  const auto back = scene_from_json(scene_to_json(scene));
  REQUIRE(back.scatterers.size() == 1);
  CHECK(back.scatterers[0].depth == 0.25);
  CHECK(back.soil.rel_permittivity == 7.0);
  CHECK(back.noise_band.has_value());
  CHECK(back.noise_band->f_high == 3e9);
  CHECK(back.rng_seed == 99);
  CHECK(back.source_rolloff == 0.2);
  CHECK(scene_to_json(back) == scene_to_json(scene));

  CHECK_THROWS_AS(scene_from_json(R"({"soil": {"rel_permittivity": 0.5}})"), ConfigError);
  CHECK_THROWS_AS(scene_from_json(R"({"soil": {"attenuation_slope": -1}})"), ConfigError);
  CHECK_THROWS_AS(scene_from_json(R"({"scatterers": [{"x0": 1, "depth": 0}]})"), ConfigError);
  CHECK_THROWS_AS(scene_from_json(R"({"scatterer": []})"), ConfigError);
  CHECK_THROWS_AS(scene_from_json(R"({"rng_seed": -4})"), ConfigError);
  CHECK_THROWS_AS(scene_from_json("not json"), ConfigError);
  CHECK(scene_from_json("{}").scatterers.empty());
}

}
