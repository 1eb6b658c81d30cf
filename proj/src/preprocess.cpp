#include "gprtfa/preprocess.hpp"

#include "gprtfa/errors.hpp"
#include "gprtfa/fft.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace gprtfa {

ComplexTrace trace_of(const ComplexStack& stack, std::size_t trace) {
  if (trace >= stack.n_traces())
    throw ConfigError("trace " + std::to_string(trace) + " out of range (survey has " +
                      std::to_string(stack.n_traces()) + " traces)");
  ComplexTrace out;
  out.dt = stack.dt;
  out.values.resize(stack.n_time());
  for (std::size_t t = 0; t < stack.n_time(); ++t)
    out.values[t] = stack.samples(static_cast<Eigen::Index>(trace), static_cast<Eigen::Index>(t));
  return out;
}

BScanTime magnitude(const ComplexStack& stack) {
  BScanTime out;
  out.samples = stack.samples.cwiseAbs();
  out.dt = stack.dt;
  out.t0_index = stack.t0_index;
  out.positions = stack.positions;
  return out;
}

ComplexTrace ifft_to_time(const SweepRecord& sweep, const SurveyConfig& config) {
  if (sweep.s21.size() != config.n_freq_points)
    throw ConfigError("trace " + std::to_string(sweep.trace_index) + ": sweep has " +
                      std::to_string(sweep.s21.size()) + " points, config expects " +
                      std::to_string(config.n_freq_points));
  ComplexTrace out;
  out.dt = config.time_step();
  out.values.resize(sweep.s21.size());
  Fft fft(sweep.s21.size());
  fft.inverse(sweep.s21, out.values);
  return out;
}

ComplexStack to_time_domain(const SurveyFrequencyDomain& survey) {
  const auto& cfg = survey.config;
  cfg.validate();
  ComplexStack stack;
  stack.dt = cfg.time_step();
  stack.samples.resize(static_cast<Eigen::Index>(survey.sweeps.size()),
                       static_cast<Eigen::Index>(cfg.n_freq_points));
  Fft fft(cfg.n_freq_points);
  std::vector<cplx> buf(cfg.n_freq_points);
  for (std::size_t i = 0; i < survey.sweeps.size(); ++i) {
    const auto& sweep = survey.sweeps[i];
    if (sweep.s21.size() != cfg.n_freq_points)
      throw ConfigError("trace " + std::to_string(sweep.trace_index) + ": sweep has " +
                        std::to_string(sweep.s21.size()) + " points, config expects " +
                        std::to_string(cfg.n_freq_points));
    fft.inverse(sweep.s21, buf);
    for (std::size_t t = 0; t < buf.size(); ++t)
      stack.samples(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = buf[t];
    stack.positions.push_back(sweep.position);
  }
  return stack;
}

namespace {

template <typename Scalar>
BScan<Scalar> remove_row_means(const BScan<Scalar>& in) {
  BScan<Scalar> out = in;
  if (in.n_time() == 0) return out;
  out.samples = in.samples.colwise() - in.samples.rowwise().mean();
  return out;
}

template <typename Scalar>
std::vector<double> mean_trace_magnitude(const BScan<Scalar>& in) {
  std::vector<double> mag(in.n_time(), 0.0);
  if (in.n_traces() == 0) return mag;
  const auto mean = in.samples.colwise().mean();
  for (std::size_t t = 0; t < mag.size(); ++t) mag[t] = std::abs(mean(static_cast<Eigen::Index>(t)));
  return mag;
}

template <typename Scalar>
BScan<Scalar> circular_shift_left(const BScan<Scalar>& in, std::size_t shift) {
  BScan<Scalar> out = in;
  const auto n = static_cast<Eigen::Index>(in.n_time());
  if (shift == 0 || n == 0) return out;
  const auto s = static_cast<Eigen::Index>(shift);
  out.samples.leftCols(n - s) = in.samples.rightCols(n - s);
  out.samples.rightCols(s) = in.samples.leftCols(s);
  out.t0_index = (in.t0_index + shift) % in.n_time();
  return out;
}

template <typename Scalar>
BScan<Scalar> align_time_zero(const BScan<Scalar>& in, double threshold_frac) {
  if (!(threshold_frac > 0.0 && threshold_frac < 1.0))
    throw ConfigError("time-zero threshold must lie in (0, 1)");
  const auto mag = mean_trace_magnitude(in);
  return circular_shift_left(in, first_break_index(mag, threshold_frac));
}

void check_rank(std::size_t rank, std::size_t rows, std::size_t cols) {
  const std::size_t limit = std::min(rows, cols);
  if (rank < 1 || rank >= limit)
    throw ConfigError("SVD rank " + std::to_string(rank) + " out of range; need 1 <= rank < " +
                      std::to_string(limit));
}

Eigen::MatrixXd remove_low_rank(const Eigen::MatrixXd& m, std::size_t rank) {
  if (m.isZero(0.0)) return m;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto r = static_cast<Eigen::Index>(rank);
  const Eigen::MatrixXd low = svd.matrixU().leftCols(r) *
                              svd.singularValues().head(r).asDiagonal() *
                              svd.matrixV().leftCols(r).transpose();
  return m - low;
}

} // namespace

BScanTime zero_offset_removal(const BScanTime& bscan) { return remove_row_means(bscan); }
ComplexStack zero_offset_removal(const ComplexStack& stack) { return remove_row_means(stack); }

std::size_t first_break_index(const std::vector<double>& magnitudes, double threshold_frac) {
  double peak = 0.0;
  for (double m : magnitudes) peak = std::max(peak, m);
  if (!(peak > 0.0)) throw DegenerateInputError("all-zero B-scan: no first break to pick");
  const double level = threshold_frac * peak;
  for (std::size_t i = 0; i < magnitudes.size(); ++i)
    if (magnitudes[i] >= level) return i;
  return 0; // unreachable: the peak itself passes
}

BScanTime time_zero_correction(const BScanTime& bscan, double threshold_frac) {
  return align_time_zero(bscan, threshold_frac);
}

ComplexStack time_zero_correction(const ComplexStack& stack, double threshold_frac) {
  return align_time_zero(stack, threshold_frac);
}

BScanTime svd_background_removal(const BScanTime& bscan, std::size_t rank) {
  check_rank(rank, bscan.n_traces(), bscan.n_time());
  BScanTime out = bscan;
  out.samples = remove_low_rank(bscan.samples, rank);
  return out;
}

ComplexStack svd_background_removal(const ComplexStack& stack, std::size_t rank) {
  check_rank(rank, stack.n_traces(), stack.n_time());
  const Eigen::MatrixXd re = remove_low_rank(stack.samples.real(), rank);
  const Eigen::MatrixXd im = remove_low_rank(stack.samples.imag(), rank);
  ComplexStack out = stack;
  out.samples = re.cast<cplx>() + cplx(0.0, 1.0) * im.cast<cplx>();
  return out;
}

ComplexStack shift_time_zero(const ComplexStack& stack, std::size_t index) {
  if (stack.n_time() > 0 && index >= stack.n_time())
    throw ConfigError("time-zero index " + std::to_string(index) + " exceeds the record length");
  return circular_shift_left(stack, index);
}

namespace {

void check_pipeline_params(const PipelineParams& params) {
  if (params.time_zero && !(params.time_zero_threshold > 0.0 && params.time_zero_threshold < 1.0))
    throw ConfigError("time-zero threshold must lie in (0, 1)");
  if (params.svd_background && params.svd_rank < 1)
    throw ConfigError("SVD rank must be >= 1");
}

std::size_t pick_time_zero(const ComplexStack& stack, const PipelineParams& params) {
  if (!params.time_zero || stack.samples.isZero(0.0)) return 0;
  if (params.time_zero_index) return *params.time_zero_index;
  return first_break_index(mean_trace_magnitude(stack), params.time_zero_threshold);
}

ComplexStack front_end(const SurveyFrequencyDomain& survey, const PipelineParams& params) {
  check_pipeline_params(params);
  ComplexStack stack = to_time_domain(survey);
  if (params.zero_offset) stack = zero_offset_removal(stack);
  return stack;
}

} // namespace

std::size_t pipeline_time_zero(const SurveyFrequencyDomain& survey, const PipelineParams& params) {
  return pick_time_zero(front_end(survey, params), params);
}

ProcessedSurvey basic_pipeline(const SurveyFrequencyDomain& survey, const PipelineParams& params) {
  ComplexStack stack = front_end(survey, params);
  if (params.time_zero) stack = shift_time_zero(stack, pick_time_zero(stack, params));
  if (params.svd_background) stack = svd_background_removal(stack, params.svd_rank);
  ProcessedSurvey out;
  out.magnitude = magnitude(stack);
  out.stack = std::move(stack);
  return out;
}

} // namespace gprtfa
