#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace gprtfa {

// Fixed-size complex DFT backed by FFTW. Forward is unnormalized,
// inverse carries the 1/N factor, so inverse(forward(x)) == x.
//
// Planning is serialized internally; a single Fft object must not be
// used from two threads at once.
class Fft {
public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(Fft&&) noexcept;
  Fft& operator=(Fft&&) noexcept;
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  std::size_t size() const noexcept { return n_; }

  // X[k] = sum_n x[n] e^{-j 2 pi k n / N}
  void forward(std::span<const std::complex<double>> in,
               std::span<std::complex<double>> out);
  // x[n] = (1/N) sum_k X[k] e^{+j 2 pi k n / N}
  void inverse(std::span<const std::complex<double>> in,
               std::span<std::complex<double>> out);

private:
  struct Impl;
  std::size_t n_;
  std::unique_ptr<Impl> impl_;
};

} // namespace gprtfa
