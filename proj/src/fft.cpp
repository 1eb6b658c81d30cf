#include "gprtfa/fft.hpp"

#include "gprtfa/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

namespace gprtfa {

namespace {
// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
} // namespace

struct Fft::Impl {
  fftw_complex* in{nullptr};
  fftw_complex* out{nullptr};
  fftw_plan fwd{nullptr};
  fftw_plan inv{nullptr};

  explicit Impl(std::size_t n) {
    std::lock_guard lock(planner_mutex());
    in = fftw_alloc_complex(n);
    out = fftw_alloc_complex(n);
    const int len = static_cast<int>(n);
    fwd = fftw_plan_dft_1d(len, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    inv = fftw_plan_dft_1d(len, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
  }

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
    fftw_free(in);
    fftw_free(out);
  }
};

Fft::Fft(std::size_t n) : n_(n) {
  if (n == 0) throw ConfigError("FFT size must be positive");
  impl_ = std::make_unique<Impl>(n);
}

Fft::~Fft() = default;
Fft::Fft(Fft&&) noexcept = default;
Fft& Fft::operator=(Fft&&) noexcept = default;

void Fft::forward(std::span<const std::complex<double>> in,
                  std::span<std::complex<double>> out) {
  if (in.size() != n_ || out.size() != n_)
    throw ConfigError("FFT buffer size mismatch");
  std::copy(in.begin(), in.end(), reinterpret_cast<std::complex<double>*>(impl_->in));
  fftw_execute(impl_->fwd);
  auto* res = reinterpret_cast<const std::complex<double>*>(impl_->out);
  std::copy(res, res + n_, out.begin());
}

void Fft::inverse(std::span<const std::complex<double>> in,
                  std::span<std::complex<double>> out) {
  if (in.size() != n_ || out.size() != n_)
    throw ConfigError("FFT buffer size mismatch");
  std::copy(in.begin(), in.end(), reinterpret_cast<std::complex<double>*>(impl_->in));
  fftw_execute(impl_->inv);
  auto* res = reinterpret_cast<const std::complex<double>*>(impl_->out);
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = res[i] * scale;
}

} // namespace gprtfa
