#include "gprtfa/ingest.hpp"

#include "gprtfa/errors.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace gprtfa {

// --- SurveyConfig -----------------------------------------------------------

void SurveyConfig::validate() const {
  if (!(std::isfinite(f_start) && std::isfinite(f_stop) && f_start < f_stop))
    throw ConfigError("survey config: f_start must be below f_stop");
  if (f_start < 0.0) throw ConfigError("survey config: f_start must be non-negative");
  if (n_freq_points < 2) throw ConfigError("survey config: n_freq_points must be >= 2");
  if (!(trace_step > 0.0)) throw ConfigError("survey config: trace_step must be > 0");
  if (n_traces < 1) throw ConfigError("survey config: n_traces must be >= 1");
  if (!(antenna_separation >= 0.0))
    throw ConfigError("survey config: antenna_separation must be >= 0");
}

double SurveyConfig::freq_step() const {
  return (f_stop - f_start) / static_cast<double>(n_freq_points - 1);
}

double SurveyConfig::frequency(std::size_t k) const {
  return f_start + static_cast<double>(k) * freq_step();
}

std::vector<double> SurveyConfig::frequency_grid() const {
  std::vector<double> grid(n_freq_points);
  for (std::size_t k = 0; k < n_freq_points; ++k) grid[k] = frequency(k);
  grid.back() = f_stop;
  return grid;
}

double SurveyConfig::time_step() const {
  return 1.0 / (static_cast<double>(n_freq_points) * freq_step());
}

// --- Touchstone ---------------------------------------------------------------

namespace {

struct TouchstoneOptions {
  double unit_scale{1e9};
  TouchstoneFormat format{TouchstoneFormat::MA};
};

double unit_scale(FrequencyUnit u) {
  switch (u) {
  case FrequencyUnit::Hz: return 1.0;
  case FrequencyUnit::kHz: return 1e3;
  case FrequencyUnit::MHz: return 1e6;
  case FrequencyUnit::GHz: return 1e9;
  }
  return 1.0;
}

const char* unit_name(FrequencyUnit u) {
  switch (u) {
  case FrequencyUnit::Hz: return "Hz";
  case FrequencyUnit::kHz: return "kHz";
  case FrequencyUnit::MHz: return "MHz";
  case FrequencyUnit::GHz: return "GHz";
  }
  return "Hz";
}

const char* format_name(TouchstoneFormat f) {
  switch (f) {
  case TouchstoneFormat::RI: return "RI";
  case TouchstoneFormat::MA: return "MA";
  case TouchstoneFormat::DB: return "DB";
  }
  return "RI";
}

TouchstoneOptions parse_option_line(std::string_view body, std::size_t line_no) {
  TouchstoneOptions opt;
  const auto tokens = detail::split_ws(body);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string tok = detail::upper(tokens[i]);
    if (tok == "HZ") opt.unit_scale = 1.0;
    else if (tok == "KHZ") opt.unit_scale = 1e3;
    else if (tok == "MHZ") opt.unit_scale = 1e6;
    else if (tok == "GHZ") opt.unit_scale = 1e9;
    else if (tok == "RI") opt.format = TouchstoneFormat::RI;
    else if (tok == "MA") opt.format = TouchstoneFormat::MA;
    else if (tok == "DB") opt.format = TouchstoneFormat::DB;
    else if (tok == "S") continue;
    else if (tok == "Y" || tok == "Z" || tok == "H" || tok == "G")
      throw FormatError("line " + std::to_string(line_no) +
                        ": only S-parameter files are supported, got '" + tok + "'");
    else if (tok == "R") {
      if (i + 1 >= tokens.size())
        throw FormatError("line " + std::to_string(line_no) +
                          ": option line 'R' needs a reference impedance");
      const auto z0 = detail::parse_double(tokens[++i]);
      if (!z0) throw FormatError("line " + std::to_string(line_no) +
                                 ": bad reference impedance '" + std::string(tokens[i]) + "'");
      if (*z0 != 50.0)
        throw FormatError("line " + std::to_string(line_no) +
                          ": only 50 ohm reference impedance is supported");
    } else {
      throw FormatError("line " + std::to_string(line_no) + ": unknown option token '" +
                        std::string(tokens[i]) + "'");
    }
  }
  return opt;
}

cplx to_complex(double a, double b, TouchstoneFormat fmt) {
  constexpr double deg = std::numbers::pi / 180.0;
  switch (fmt) {
  case TouchstoneFormat::RI: return {a, b};
  case TouchstoneFormat::MA: return std::polar(a, b * deg);
  case TouchstoneFormat::DB: return std::polar(std::pow(10.0, a / 20.0), b * deg);
  }
  return {a, b};
}

// Zero magnitude has no finite dB value; it is written at this floor.
constexpr double kDbFloor = -1000.0;

std::pair<double, double> from_complex(cplx z, TouchstoneFormat fmt) {
  constexpr double rad = 180.0 / std::numbers::pi;
  switch (fmt) {
  case TouchstoneFormat::RI: return {z.real(), z.imag()};
  case TouchstoneFormat::MA: return {std::abs(z), std::arg(z) * rad};
  case TouchstoneFormat::DB: {
    const double mag = std::abs(z);
    const double db = mag > 0.0 ? 20.0 * std::log10(mag) : kDbFloor;
    return {std::max(db, kDbFloor), std::arg(z) * rad};
  }
  }
  return {z.real(), z.imag()};
}

void check_ascending(const std::vector<double>& freqs, std::size_t line_no) {
  if (freqs.size() >= 2 && !(freqs.back() > freqs[freqs.size() - 2]))
    throw DataError("frequencies must be strictly ascending", line_no);
}

} // namespace

TouchstoneData parse_touchstone_full(std::string_view text) {
  TouchstoneData out;
  TouchstoneOptions opt;
  bool have_options = false;
  std::size_t line_no = 0;

  for (std::string_view raw : detail::split_lines(text)) {
    ++line_no;
    std::string_view line = raw;
    if (auto bang = line.find('!'); bang != std::string_view::npos) line = line.substr(0, bang);
    line = detail::trim(line);
    if (line.empty()) continue;

    if (line.front() == '#') {
      if (!out.freqs_hz.empty())
        throw FormatError("line " + std::to_string(line_no) +
                          ": option line must precede the data");
      if (!have_options) opt = parse_option_line(line.substr(1), line_no);
      have_options = true; // later option lines are ignored, as in v1
      continue;
    }
    if (line.front() == '[')
      throw FormatError("line " + std::to_string(line_no) +
                        ": Touchstone v2 keywords are not supported");

    const auto tokens = detail::split_ws(line);
    if (tokens.size() != 9)
      throw DataError("expected 9 columns for a two-port row, got " +
                          std::to_string(tokens.size()),
                      line_no);
    double v[9];
    for (std::size_t i = 0; i < 9; ++i) {
      const auto d = detail::parse_double(tokens[i]);
      if (!d || !std::isfinite(*d))
        throw DataError("non-numeric value '" + std::string(tokens[i]) + "'", line_no);
      v[i] = *d;
    }
    out.freqs_hz.push_back(v[0] * opt.unit_scale);
    check_ascending(out.freqs_hz, line_no);
    out.s11.push_back(to_complex(v[1], v[2], opt.format));
    out.s21.push_back(to_complex(v[3], v[4], opt.format));
    out.s12.push_back(to_complex(v[5], v[6], opt.format));
    out.s22.push_back(to_complex(v[7], v[8], opt.format));
  }
  if (out.freqs_hz.empty()) throw DataError("Touchstone file holds no data rows");
  return out;
}

SweepData parse_touchstone(std::string_view text) {
  TouchstoneData full = parse_touchstone_full(text);
  return SweepData{std::move(full.freqs_hz), std::move(full.s21)};
}

std::string emit_touchstone(const TouchstoneData& data, TouchstoneFormat format,
                            FrequencyUnit unit) {
  const std::size_t n = data.freqs_hz.size();
  if (data.s11.size() != n || data.s21.size() != n || data.s12.size() != n ||
      data.s22.size() != n)
    throw ConfigError("Touchstone emit: parameter columns differ in length");

  std::ostringstream os;
  os << "! two-port sweep written by gprtfa\n";
  os << "# " << unit_name(unit) << " S " << format_name(format) << " R 50\n";
  const double scale = unit_scale(unit);
  for (std::size_t i = 0; i < n; ++i) {
    os << detail::fmt_double(data.freqs_hz[i] / scale);
    for (const auto* col : {&data.s11, &data.s21, &data.s12, &data.s22}) {
      const auto [a, b] = from_complex((*col)[i], format);
      os << ' ' << detail::fmt_double(a) << ' ' << detail::fmt_double(b);
    }
    os << '\n';
  }
  return os.str();
}

std::string emit_touchstone(const SweepData& sweep, TouchstoneFormat format,
                            FrequencyUnit unit) {
  TouchstoneData data;
  data.freqs_hz = sweep.freqs_hz;
  data.s21 = sweep.s21;
  data.s11.assign(sweep.s21.size(), cplx{});
  data.s12 = data.s11;
  data.s22 = data.s11;
  return emit_touchstone(data, format, unit);
}

// --- Sweep CSV ------------------------------------------------------------------

SweepData parse_sweep_csv(std::string_view text) {
  SweepData out;
  bool have_header = false;
  std::size_t line_no = 0;
  for (std::string_view raw : detail::split_lines(text)) {
    ++line_no;
    const std::string_view line = detail::trim(raw);
    if (line.empty()) continue;
    if (!have_header) {
      std::string compact;
      for (char ch : line)
        if (ch != ' ' && ch != '\t') compact.push_back(ch);
      if (compact != "freq_hz,re,im")
        throw FormatError("sweep CSV must start with header 'freq_hz,re,im'");
      have_header = true;
      continue;
    }
    const auto fields = detail::split(line, ',');
    if (fields.size() != 3)
      throw DataError("expected 3 fields, got " + std::to_string(fields.size()), line_no);
    double v[3];
    for (std::size_t i = 0; i < 3; ++i) {
      const auto d = detail::parse_double(detail::trim(fields[i]));
      if (!d) throw DataError("non-numeric field '" + std::string(fields[i]) + "'", line_no);
      if (!std::isfinite(*d)) throw DataError("NaN or infinite field", line_no);
      v[i] = *d;
    }
    out.freqs_hz.push_back(v[0]);
    check_ascending(out.freqs_hz, line_no);
    out.s21.emplace_back(v[1], v[2]);
  }
  if (!have_header) throw FormatError("sweep CSV must start with header 'freq_hz,re,im'");
  if (out.freqs_hz.empty()) throw DataError("sweep CSV holds no data rows");
  return out;
}

std::string emit_sweep_csv(const SweepData& sweep) {
  if (sweep.freqs_hz.size() != sweep.s21.size())
    throw ConfigError("sweep CSV emit: grid and s21 differ in length");
  std::ostringstream os;
  os << "freq_hz,re,im\n";
  for (std::size_t i = 0; i < sweep.freqs_hz.size(); ++i)
    os << detail::fmt_double(sweep.freqs_hz[i]) << ',' << detail::fmt_double(sweep.s21[i].real())
       << ',' << detail::fmt_double(sweep.s21[i].imag()) << '\n';
  return os.str();
}

// --- Assembly -------------------------------------------------------------------

namespace {

void check_grid(const SurveyConfig& cfg, const SweepData& sweep, std::size_t trace) {
  const std::string who = "trace " + std::to_string(trace);
  if (sweep.s21.size() != sweep.freqs_hz.size())
    throw ConfigError(who + ": frequency grid and s21 differ in length");
  if (sweep.freqs_hz.size() != cfg.n_freq_points)
    throw ConfigError(who + ": expected " + std::to_string(cfg.n_freq_points) +
                      " frequency points, got " + std::to_string(sweep.freqs_hz.size()));
  const auto grid = cfg.frequency_grid();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (std::abs(sweep.freqs_hz[k] - grid[k]) > 1e-6 * std::abs(grid[k])) {
      std::ostringstream msg;
      msg << who << ": frequency point " << k << " is " << sweep.freqs_hz[k]
          << " Hz, config grid expects " << grid[k] << " Hz";
      throw ConfigError(msg.str());
    }
  }
}

} // namespace

SurveyFrequencyDomain assemble_survey(const SurveyConfig& config,
                                      std::span<const SweepData> per_trace) {
  std::vector<IndexedSweep> indexed;
  indexed.reserve(per_trace.size());
  for (std::size_t i = 0; i < per_trace.size(); ++i) indexed.push_back({i, per_trace[i]});
  return assemble_survey(config, std::span<const IndexedSweep>(indexed));
}

SurveyFrequencyDomain assemble_survey(const SurveyConfig& config,
                                      std::span<const IndexedSweep> per_trace) {
  config.validate();
  if (per_trace.size() != config.n_traces)
    throw ConfigError("survey expects " + std::to_string(config.n_traces) + " traces, got " +
                      std::to_string(per_trace.size()));

  std::vector<const IndexedSweep*> order;
  order.reserve(per_trace.size());
  for (const auto& s : per_trace) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(),
                   [](auto* a, auto* b) { return a->trace_index < b->trace_index; });

  SurveyFrequencyDomain survey;
  survey.config = config;
  survey.sweeps.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i]->trace_index != i)
      throw ConfigError("trace indices must be contiguous from 0; missing or duplicate trace " +
                        std::to_string(i));
    check_grid(config, order[i]->data, i);
    survey.sweeps.push_back(SweepRecord{
        i, static_cast<double>(i) * config.trace_step, order[i]->data.s21});
  }
  return survey;
}

std::vector<SweepData> sweeps_of(const SurveyFrequencyDomain& survey) {
  const auto grid = survey.config.frequency_grid();
  std::vector<SweepData> out;
  out.reserve(survey.sweeps.size());
  for (const auto& s : survey.sweeps) out.push_back(SweepData{grid, s.s21});
  return out;
}

} // namespace gprtfa
