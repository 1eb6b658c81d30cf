#include "gprtfa/cli.hpp"

#include "gprtfa/errors.hpp"
#include "gprtfa/export.hpp"
#include "gprtfa/frd.hpp"
#include "gprtfa/ingest.hpp"
#include "gprtfa/render.hpp"
#include "gprtfa/synth.hpp"
#include "gprtfa/tfa.hpp"
#include "io_util.hpp"
#include "text_util.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

namespace gprtfa::cli {

namespace fs = std::filesystem;
using nlohmann::json;

PipelineParams apply_skip_steps(PipelineParams params, std::string_view spec) {
  const auto s = detail::trim(spec);
  if (s == "none" || s.empty()) return params;
  if (s == "all") {
    params.zero_offset = params.time_zero = params.svd_background = false;
    return params;
  }
  for (auto item : detail::split(s, ',')) {
    item = detail::trim(item);
    if (item == "zero-offset") params.zero_offset = false;
    else if (item == "time-zero") params.time_zero = false;
    else if (item == "svd") params.svd_background = false;
    else throw ConfigError("unknown pipeline step '" + std::string(item) +
                           "' (expected zero-offset, time-zero, svd, none or all)");
  }
  return params;
}

FrequencyBand parse_band(std::string_view text) {
  const auto parts = detail::split(text, ':');
  if (parts.size() != 2) throw ConfigError("band must look like f_lo:f_hi (Hz)");
  const auto lo = detail::parse_double(detail::trim(parts[0]));
  const auto hi = detail::parse_double(detail::trim(parts[1]));
  if (!lo || !hi) throw ConfigError("band edges must be numbers: '" + std::string(text) + "'");
  return {*lo, *hi};
}

namespace {

// Flags shared by every command that reads a survey directory.
struct SurveyOpts {
  std::string dir;
  std::string survey_json;
  std::size_t svd_rank{1};
  std::string skip_steps{"none"};
  double time_zero_frac{0.05};

  void add_to(CLI::App* app) {
    app->add_option("survey", dir, "Survey directory (survey.json + trace files)")->required();
    app->add_option("--survey-json", survey_json, "Survey config overriding <survey>/survey.json");
    app->add_option("--svd-rank", svd_rank, "Singular components removed as background");
    app->add_option("--skip-steps", skip_steps,
                    "Pipeline steps to skip: none, all, or zero-offset,time-zero,svd");
    app->add_option("--time-zero-frac", time_zero_frac, "First-break threshold fraction");
  }

  SurveyFrequencyDomain load() const {
    if (survey_json.empty()) return read_survey_dir(dir);
    return read_survey_dir(dir, read_survey_config(survey_json));
  }

  PipelineParams pipeline() const {
    PipelineParams p;
    p.svd_rank = svd_rank;
    p.time_zero_threshold = time_zero_frac;
    return apply_skip_steps(p, skip_steps);
  }
};

struct StftOpts {
  double window_frac{0.1};
  std::size_t hop{1};

  void add_to(CLI::App* app) {
    app->add_option("--window-frac", window_frac, "STFT window length as a fraction of the trace");
    app->add_option("--hop", hop, "STFT hop in samples");
  }
  StftConfig config() const {
    StftConfig c;
    c.window_fraction = window_frac;
    c.hop = hop;
    return c;
  }
};

struct FrdOpts {
  double threshold_frac{0.25};
  double coverage{0.9};
  std::string occupancy_mode{"row-max"};

  void add_to(CLI::App* app, bool with_occupancy) {
    app->add_option("--threshold-frac", threshold_frac, "FRD threshold as a fraction of the global maximum");
    app->add_option("--coverage", coverage, "Magnitude fraction the estimated band must hold");
    if (with_occupancy)
      app->add_option("--occupancy-mode", occupancy_mode, "row-max or all-bins")
          ->check(CLI::IsMember({"row-max", "all-bins"}));
  }
};

struct ImageOpts {
  std::string normalization{"linear"};
  double db_floor{-40.0};
  std::optional<double> crop_time;

  void add_to(CLI::App* app) {
    app->add_option("--normalization", normalization, "Image mapping: linear or db")
        ->check(CLI::IsMember({"linear", "db"}));
    app->add_option("--db-floor", db_floor, "Lowest level shown in db mode (negative dB)");
    app->add_option("--crop-time", crop_time, "Keep rows up to this time (s)");
  }
  RenderSpec spec() const {
    RenderSpec s;
    s.normalization = normalization == "db" ? Normalization::Db : Normalization::Linear;
    s.db_floor = db_floor;
    s.crop_time = crop_time;
    return s;
  }
};

struct Outputs {
  fs::path dir;
  std::ostream& log;

  void write(const std::string& name, std::string_view bytes) const {
    detail::write_file(dir / name, bytes);
    log << "wrote " << (dir / name).string() << "\n";
  }
};

// Time runs down the image, traces across.
void write_bscan(const Outputs& o, const std::string& stem, const BScanTime& b,
                 const ImageOpts& img, const json& extra = json::object()) {
  o.write(stem + ".csv", bscan_to_csv(b));
  json side = json::parse(bscan_sidecar_json(b));
  side.update(extra);
  o.write(stem + ".json", side.dump(2) + "\n");
  o.write(stem + ".pgm", render_pgm(b.samples.transpose(), img.spec(), b.dt));
}

ProcessedSurvey do_process(const SurveyOpts& s, const ImageOpts& img, const Outputs& o) {
  const auto survey = s.load();
  auto processed = basic_pipeline(survey, s.pipeline());
  write_bscan(o, "bscan", processed.magnitude, img);
  return processed;
}

void do_stft(const SurveyOpts& s, const StftOpts& st, std::optional<std::size_t> trace,
             const ImageOpts& img, const Outputs& o) {
  const auto survey = s.load();
  const auto processed = basic_pipeline(survey, s.pipeline());
  const std::size_t k = trace.value_or(processed.stack.n_traces() / 2);
  const auto spec = stft(trace_of(processed.stack, k), st.config(), survey.config.f_start, k);
  o.write("spectrogram.csv", spectrogram_to_csv(spec));
  o.write("spectrogram.json", spectrogram_sidecar_json(spec, processed.stack.dt));
  o.write("spectrogram.pgm", render_pgm(spec.magnitudes, img.spec(), spec.dt()));
}

struct FrdResult {
  FrdMap frd;
  FrequencyBand band;
};

FrdResult do_frd(const SurveyFrequencyDomain& survey, const ComplexStack& stack,
                 const StftOpts& st, const FrdOpts& f, const ImageOpts& img, const Outputs& o) {
  auto frd = frd_from_stack(stack, st.config(), survey.config.f_start, f.threshold_frac);
  if (frd.degenerate) throw DegenerateInputError("survey has no STFT energy; FRD is empty");
  const auto band = estimate_band(frd, f.coverage);
  o.write("frd_peak_freq_hz.csv", frd_peak_freq_csv(frd));
  o.write("frd_peak_mag.csv", frd_peak_mag_csv(frd));
  o.write("frd.json", frd_sidecar_json(frd, band));
  o.write("frd.pgm", render_pgm(frd.peak_freq.transpose(), img.spec(), stack.dt));
  const Eigen::MatrixXd occ =
      f.occupancy_mode == "all-bins"
          ? all_bins_occupancy(stack, st.config(), survey.config.f_start, f.threshold_frac).counts
          : frd_occupancy(frd);
  o.write("frd_occupancy.csv", matrix_to_csv(occ));
  o.log << "band estimate: " << band.f_low << " .. " << band.f_high << " Hz\n";
  return {std::move(frd), band};
}

void do_bandpass(const SurveyFrequencyDomain& survey, const FrequencyBand& band,
                 const PipelineParams& pipeline, std::size_t taper, const ImageOpts& img,
                 const Outputs& o) {
  BandpassParams bp;
  bp.taper_bins = taper;
  bp.pipeline = pipeline;
  const auto out = bandpass_regenerate(survey, band, bp);
  write_bscan(o, "bandpass", out.magnitude, img,
              {{"band_hz", {band.f_low, band.f_high}}, {"taper_bins", taper}});
}


} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"SFCW GPR B-scan enhancement by STFT frequency response analysis", "gprtfa"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic survey from a scene file");
  std::string scene_file, synth_out, synth_survey_json, synth_format{"s2p"};
  SurveyConfig flag_cfg;
  synth->add_option("scene", scene_file, "Scene JSON")->required();
  synth->add_option("--out", synth_out, "Output survey directory")->required();
  synth->add_option("--survey-json", synth_survey_json, "Base survey config");
  auto* o_fstart = synth->add_option("--f-start", flag_cfg.f_start, "Sweep start (Hz)");
  auto* o_fstop = synth->add_option("--f-stop", flag_cfg.f_stop, "Sweep stop (Hz)");
  auto* o_nfreq = synth->add_option("--n-freq", flag_cfg.n_freq_points, "Frequency points");
  auto* o_step = synth->add_option("--trace-step", flag_cfg.trace_step, "Trace spacing (m)");
  auto* o_ntr = synth->add_option("--n-traces", flag_cfg.n_traces, "Number of traces");
  auto* o_sep = synth->add_option("--antenna-separation", flag_cfg.antenna_separation,
                                  "Tx-Rx separation (m)");
  synth->add_option("--format", synth_format, "Trace file format: s2p or csv")
      ->check(CLI::IsMember({"s2p", "csv"}));

  // process
  auto* process = app.add_subcommand("process", "Basic pipeline to a B-scan");
  SurveyOpts proc_s;
  ImageOpts proc_img;
  std::string proc_out;
  proc_s.add_to(process);
  proc_img.add_to(process);
  process->add_option("--out", proc_out, "Output directory")->required();

  // stft
  auto* stft_cmd = app.add_subcommand("stft", "Spectrogram of one processed trace");
  SurveyOpts stft_s;
  StftOpts stft_o;
  ImageOpts stft_img;
  std::optional<std::size_t> stft_trace;
  std::string stft_out;
  stft_s.add_to(stft_cmd);
  stft_o.add_to(stft_cmd);
  stft_img.add_to(stft_cmd);
  stft_cmd->add_option("--trace", stft_trace, "Trace index (default: middle trace)");
  stft_cmd->add_option("--out", stft_out, "Output directory")->required();

  // frd
  auto* frd_cmd = app.add_subcommand("frd", "Frequency response distribution and band estimate");
  SurveyOpts frd_s;
  StftOpts frd_st;
  FrdOpts frd_o;
  ImageOpts frd_img;
  std::string frd_out;
  frd_s.add_to(frd_cmd);
  frd_st.add_to(frd_cmd);
  frd_o.add_to(frd_cmd, true);
  frd_img.add_to(frd_cmd);
  frd_cmd->add_option("--out", frd_out, "Output directory")->required();

  // bandpass
  auto* bp_cmd = app.add_subcommand("bandpass", "Band-filter the sweeps and regenerate the B-scan");
  SurveyOpts bp_s;
  StftOpts bp_st;
  FrdOpts bp_f;
  ImageOpts bp_img;
  std::string bp_band, bp_out;
  bool bp_auto = false;
  std::size_t bp_taper = 5;
  bp_s.add_to(bp_cmd);
  bp_st.add_to(bp_cmd);
  bp_f.add_to(bp_cmd, false);
  bp_img.add_to(bp_cmd);
  auto* o_band = bp_cmd->add_option("--band", bp_band, "Band f_lo:f_hi in Hz");
  auto* o_auto = bp_cmd->add_flag("--auto", bp_auto, "Use the band estimated from the FRD");
  o_band->excludes(o_auto);
  bp_cmd->add_option("--taper-bins", bp_taper, "Raised-cosine ramp width at each band edge");
  bp_cmd->add_option("--out", bp_out, "Output directory")->required();

  // run-all
  auto* all_cmd = app.add_subcommand("run-all", "process, stft, frd and auto bandpass in one go");
  SurveyOpts all_s;
  StftOpts all_st;
  FrdOpts all_f;
  ImageOpts all_img;
  std::optional<std::size_t> all_trace;
  std::size_t all_taper = 5;
  std::string all_out;
  all_s.add_to(all_cmd);
  all_st.add_to(all_cmd);
  all_f.add_to(all_cmd, true);
  all_img.add_to(all_cmd);
  all_cmd->add_option("--trace", all_trace, "Trace for the spectrogram (default: middle trace)");
  all_cmd->add_option("--taper-bins", all_taper, "Raised-cosine ramp width at each band edge");
  all_cmd->add_option("--out", all_out, "Output directory")->required();

  // render
  auto* render_cmd = app.add_subcommand("render", "Render a CSV matrix to a 16-bit PGM");
  std::string render_in, render_out;
  ImageOpts render_img;
  std::optional<double> render_dt;
  render_cmd->add_option("matrix", render_in, "CSV matrix")->required();
  render_cmd->add_option("--out", render_out, "Output PGM file")->required();
  render_cmd->add_option("--dt", render_dt, "Row spacing (s); default: dt_s from the sidecar JSON");
  render_img.add_to(render_cmd);

  std::vector<const char*> argv{"gprtfa"};
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (synth->parsed()) {
      const auto scene = scene_from_json(detail::read_file(scene_file));
      SurveyConfig cfg = synth_survey_json.empty() ? SurveyConfig{} : read_survey_config(synth_survey_json);
      if (o_fstart->count()) cfg.f_start = flag_cfg.f_start;
      if (o_fstop->count()) cfg.f_stop = flag_cfg.f_stop;
      if (o_nfreq->count()) cfg.n_freq_points = flag_cfg.n_freq_points;
      if (o_step->count()) cfg.trace_step = flag_cfg.trace_step;
      if (o_ntr->count()) cfg.n_traces = flag_cfg.n_traces;
      if (o_sep->count()) cfg.antenna_separation = flag_cfg.antenna_separation;
      cfg.validate();
      const auto survey = synth_survey(scene, cfg);
      write_survey_dir(synth_out, survey,
                       synth_format == "csv" ? SweepFileFormat::Csv : SweepFileFormat::Touchstone);
      out << "wrote " << survey.sweeps.size() << " traces to " << synth_out << "\n";
    } else if (process->parsed()) {
      do_process(proc_s, proc_img, Outputs{proc_out, out});
    } else if (stft_cmd->parsed()) {
      do_stft(stft_s, stft_o, stft_trace, stft_img, Outputs{stft_out, out});
    } else if (frd_cmd->parsed()) {
      const auto survey = frd_s.load();
      const auto processed = basic_pipeline(survey, frd_s.pipeline());
      do_frd(survey, processed.stack, frd_st, frd_o, frd_img, Outputs{frd_out, out});
    } else if (bp_cmd->parsed()) {
      if (bp_band.empty() && !bp_auto) throw ConfigError("bandpass needs --band f_lo:f_hi or --auto");
      const auto survey = bp_s.load();
      const auto pipeline = bp_s.pipeline();
      FrequencyBand band;
      if (bp_auto) {
        const auto processed = basic_pipeline(survey, pipeline);
        auto frd = frd_from_stack(processed.stack, bp_st.config(), survey.config.f_start,
                                  bp_f.threshold_frac);
        if (frd.degenerate) throw DegenerateInputError("survey has no STFT energy; cannot pick a band");
        band = estimate_band(frd, bp_f.coverage);
        out << "band estimate: " << band.f_low << " .. " << band.f_high << " Hz\n";
      } else {
        band = parse_band(bp_band);
      }
      do_bandpass(survey, band, pipeline, bp_taper, bp_img, Outputs{bp_out, out});
    } else if (all_cmd->parsed()) {
      const Outputs o{all_out, out};
      const auto survey = all_s.load();
      const auto pipeline = all_s.pipeline();
      const auto processed = basic_pipeline(survey, pipeline);
      write_bscan(o, "bscan", processed.magnitude, all_img);
      const std::size_t k = all_trace.value_or(processed.stack.n_traces() / 2);
      const auto spec = stft(trace_of(processed.stack, k), all_st.config(), survey.config.f_start, k);
      o.write("spectrogram.csv", spectrogram_to_csv(spec));
      o.write("spectrogram.json", spectrogram_sidecar_json(spec, processed.stack.dt));
      o.write("spectrogram.pgm", render_pgm(spec.magnitudes, all_img.spec(), spec.dt()));
      const auto fr = do_frd(survey, processed.stack, all_st, all_f, all_img, o);
      do_bandpass(survey, fr.band, pipeline, all_taper, all_img, o);
    } else if (render_cmd->parsed()) {
      const auto m = matrix_from_csv(detail::read_file(render_in));
      double dt = 0.0;
      if (render_dt) {
        dt = *render_dt;
      } else {
        const auto side = fs::path(render_in).replace_extension(".json");
        if (fs::exists(side)) {
          const auto j = json::parse(detail::read_file(side), nullptr, false);
          if (j.is_object() && j.contains("dt_s") && j["dt_s"].is_number()) dt = j["dt_s"].get<double>();
        }
      }
      detail::write_file(render_out, render_pgm(m, render_img.spec(), dt));
      out << "wrote " << render_out << "\n";
    }
  } catch (const DegenerateInputError& e) {
    err << "degenerate input: " << e.what() << "\n";
    return kDegenerate;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kOk;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

} // namespace gprtfa::cli
