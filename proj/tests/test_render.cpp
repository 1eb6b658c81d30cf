#include "gprtfa/errors.hpp"
#include "gprtfa/export.hpp"
#include "gprtfa/render.hpp"

#include "golden.hpp"
#include "oracles.hpp"

#include <doctest.h>
#include <json.hpp>

#include <fstream>
#include <sstream>

using namespace gprtfa;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Header length of the P5 files produced here.
std::size_t header_size(int w, int h) {
  return ("P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n65535\n").size();
}

unsigned pixel(const std::string& pgm, std::size_t header, std::size_t i) {
  return (static_cast<unsigned char>(pgm[header + 2 * i]) << 8) | static_cast<unsigned char>(pgm[header + 2 * i + 1]);
}

} // namespace

TEST_SUITE("render") {

TEST_CASE("zero matrix renders black") {
  for (auto norm : {Normalization::Linear, Normalization::Db}) {
    RenderSpec spec;
    spec.normalization = norm;
    const auto pgm = render_pgm(Eigen::MatrixXd::Zero(3, 4), spec);
    CHECK(pgm.substr(0, header_size(4, 3)) == "P5\n4 3\n65535\n");
    CHECK(pgm.size() == header_size(4, 3) + 24);
    for (std::size_t i = 0; i < 12; ++i) CHECK(pixel(pgm, header_size(4, 3), i) == 0);
  }
}

TEST_CASE("constant matrix renders white in both mappings") {
  for (auto norm : {Normalization::Linear, Normalization::Db}) {
    RenderSpec spec;
    spec.normalization = norm;
    const auto pgm = render_pgm(Eigen::MatrixXd::Constant(2, 5, -3.5), spec);
    for (std::size_t i = 0; i < 10; ++i) CHECK(pixel(pgm, header_size(5, 2), i) == 65535);
  }
}

TEST_CASE("linear and dB level mapping") {
  Eigen::MatrixXd m(1, 4);
  m << 1.0, 0.5, 0.1, 0.001;
  const auto lin = render_pgm(m);
  const auto h = header_size(4, 1);
  CHECK(pixel(lin, h, 0) == 65535);
  CHECK(pixel(lin, h, 1) == 32768); // round(32767.5)
  RenderSpec db;
  db.normalization = Normalization::Db;
  const auto d = render_pgm(m, db);
  CHECK(pixel(d, h, 0) == 65535);
  CHECK(std::abs(static_cast<int>(pixel(d, h, 2)) - 32768) <= 1); // -20 dB, halfway to the floor
  CHECK(pixel(d, h, 3) == 0);                                       // -60 dB, below the floor
}

TEST_CASE("crop keeps the leading rows") {
  const Eigen::MatrixXd m = oracle::seeded_matrix(10, 3, 1);
  RenderSpec spec;
  spec.crop_time = 4.0;
  const auto pgm = render_pgm(m, spec, 1.0);
  CHECK(pgm.substr(0, 12) == "P5\n3 5\n65535");
  spec.crop_time = 11.0;
  CHECK_THROWS_AS(render_pgm(m, spec, 1.0), ConfigError);
  spec.crop_time = 4.0;
  CHECK_THROWS_AS(render_pgm(m, spec, 0.0), ConfigError);
  RenderSpec bad;
  bad.db_floor = 0.0;
  CHECK_THROWS_AS(render_pgm(m, bad), ConfigError);
  Eigen::MatrixXd nan = m;
  nan(0, 0) = std::nan("");
  CHECK_THROWS_AS(render_pgm(nan), ConfigError);
}

TEST_CASE("frozen renders match their golden files byte for byte") {
  for (const auto& g : golden::cases()) {
    const auto expect = slurp(std::string(GOLDEN_DIR) + "/" + g.file);
    CHECK_MESSAGE(golden::render(g) == expect, g.file);
  }
}

TEST_CASE("rendering is deterministic") {
  const auto m = oracle::seeded_matrix(40, 30, 77);
  CHECK(render_pgm(m) == render_pgm(m));
}

}

TEST_SUITE("export") {

TEST_CASE("matrix CSV round trip") {
  const auto m = oracle::seeded_matrix(6, 4, 5);
  CHECK(matrix_from_csv(matrix_to_csv(m)) == m);
  CHECK((matrix_from_csv(matrix_to_csv(m, 12)) - m).cwiseAbs().maxCoeff() <= 1e-11);
  CHECK_THROWS_AS(matrix_from_csv("1,2\n3\n"), DataError);
  CHECK_THROWS_AS(matrix_from_csv("1,a\n"), DataError);
}

TEST_CASE("B-scan export is time by trace with its sidecar") {
  BScanTime b;
  b.samples = oracle::seeded_matrix(3, 5, 2); // 3 traces, 5 samples
  b.dt = 2.5e-10;
  b.t0_index = 4;
  b.positions = {0.0, 0.03, 0.06};
  const auto m = matrix_from_csv(bscan_to_csv(b));
  CHECK(m.rows() == 5);
  CHECK(m.cols() == 3);
  CHECK(m == b.samples.transpose());
  const auto j = nlohmann::json::parse(bscan_sidecar_json(b));
  CHECK(j["dt_s"].get<double>() == 2.5e-10);
  CHECK(j["t0_index"].get<int>() == 4);
  CHECK(j["positions_m"].size() == 3);
}

TEST_CASE("FRD sidecar carries threshold and band") {
  FrdMap frd;
  frd.peak_freq = Eigen::MatrixXd::Zero(2, 3);
  frd.peak_mag = frd.peak_freq;
  frd.threshold = 0.5;
  const auto j = nlohmann::json::parse(frd_sidecar_json(frd, FrequencyBand{1e9, 2e9}));
  CHECK(j["threshold"].get<double>() == 0.5);
  CHECK(j["band_estimate_hz"][1].get<double>() == 2e9);
  CHECK(nlohmann::json::parse(frd_sidecar_json(frd, std::nullopt))["band_estimate_hz"].is_null());
}

}
