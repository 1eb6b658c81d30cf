#include "gprtfa/ingest.hpp"

#include "gprtfa/errors.hpp"
#include "io_util.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <regex>

namespace gprtfa {

namespace fs = std::filesystem;
using nlohmann::json;

std::string survey_config_to_json(const SurveyConfig& cfg) {
  json j = {
      {"f_start", cfg.f_start},
      {"f_stop", cfg.f_stop},
      {"n_freq_points", cfg.n_freq_points},
      {"trace_step", cfg.trace_step},
      {"n_traces", cfg.n_traces},
      {"antenna_separation", cfg.antenna_separation},
      {"if_bandwidth", cfg.if_bandwidth},
      {"source_power", cfg.source_power},
  };
  return j.dump(2) + "\n";
}

SurveyConfig survey_config_from_json(std::string_view text) {
  SurveyConfig cfg;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("survey config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("survey config: top level must be an object");

  auto count = [](const json& v, const std::string& key) -> std::size_t {
    if (!v.is_number_integer() && !v.is_number_unsigned())
      throw ConfigError("survey config: '" + key + "' must be an integer");
    const auto n = v.get<long long>();
    if (n < 0) throw ConfigError("survey config: '" + key + "' must be non-negative");
    return static_cast<std::size_t>(n);
  };
  auto real = [](const json& v, const std::string& key) -> double {
    if (!v.is_number()) throw ConfigError("survey config: '" + key + "' must be a number");
    return v.get<double>();
  };

  for (const auto& [key, value] : j.items()) {
    if (key == "f_start") cfg.f_start = real(value, key);
    else if (key == "f_stop") cfg.f_stop = real(value, key);
    else if (key == "n_freq_points") cfg.n_freq_points = count(value, key);
    else if (key == "trace_step") cfg.trace_step = real(value, key);
    else if (key == "n_traces") cfg.n_traces = count(value, key);
    else if (key == "antenna_separation") cfg.antenna_separation = real(value, key);
    else if (key == "if_bandwidth") cfg.if_bandwidth = real(value, key);
    else if (key == "source_power") cfg.source_power = real(value, key);
    else throw ConfigError("survey config: unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

SurveyConfig read_survey_config(const fs::path& json_file) {
  return survey_config_from_json(detail::read_file(json_file));
}

void write_survey_config(const fs::path& json_file, const SurveyConfig& cfg) {
  detail::write_file(json_file, survey_config_to_json(cfg));
}

SurveyFrequencyDomain read_survey_dir(const fs::path& dir) {
  return read_survey_dir(dir, read_survey_config(dir / "survey.json"));
}

SurveyFrequencyDomain read_survey_dir(const fs::path& dir, const SurveyConfig& config) {
  if (!fs::is_directory(dir)) throw ConfigError("survey directory not found: " + dir.string());

  static const std::regex pattern(R"(trace_(\d{4,})\.(s2p|csv))", std::regex::icase);
  std::vector<std::pair<std::size_t, fs::path>> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    std::smatch m;
    if (!std::regex_match(name, m, pattern)) continue;
    files.emplace_back(static_cast<std::size_t>(std::stoull(m[1].str())), entry.path());
  }
  std::sort(files.begin(), files.end());
  for (std::size_t i = 1; i < files.size(); ++i)
    if (files[i].first == files[i - 1].first)
      throw ConfigError("survey directory holds two files for trace " +
                        std::to_string(files[i].first));

  std::vector<IndexedSweep> sweeps;
  sweeps.reserve(files.size());
  for (const auto& [index, path] : files) {
    const std::string text = detail::read_file(path);
    const std::string ext = path.extension().string();
    const bool is_csv = ext == ".csv" || ext == ".CSV";
    try {
      sweeps.push_back({index, is_csv ? parse_sweep_csv(text) : parse_touchstone(text)});
    } catch (const DataError& e) {
      throw DataError(path.filename().string() + ": " + e.what(), 0);
    } catch (const FormatError& e) {
      throw FormatError(path.filename().string() + ": " + e.what());
    }
  }
  return assemble_survey(config, std::span<const IndexedSweep>(sweeps));
}

void write_survey_dir(const fs::path& dir, const SurveyFrequencyDomain& survey,
                      SweepFileFormat format) {
  fs::create_directories(dir);
  write_survey_config(dir / "survey.json", survey.config);
  const auto grid = survey.config.frequency_grid();
  for (const auto& sweep : survey.sweeps) {
    char name[32];
    std::snprintf(name, sizeof name, "trace_%04zu.%s", sweep.trace_index,
                  format == SweepFileFormat::Csv ? "csv" : "s2p");
    const SweepData data{grid, sweep.s21};
    detail::write_file(dir / name, format == SweepFileFormat::Csv ? emit_sweep_csv(data)
                                                                  : emit_touchstone(data));
  }
}

} // namespace gprtfa
