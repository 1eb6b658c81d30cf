#pragma once

// Reference implementations the library is checked against. Deliberately
// naive: O(N^2) DFT, power iteration for singular pairs, travel time typed out
// from the geometry.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

inline std::vector<cplx> dft(const std::vector<cplx>& x) {
  const std::size_t n = x.size();
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>((k * t) % n) / static_cast<double>(n);
      acc += x[t] * cplx(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

inline std::vector<cplx> idft(const std::vector<cplx>& x) {
  const std::size_t n = x.size();
  std::vector<cplx> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    cplx acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double ang = 2.0 * std::numbers::pi * static_cast<double>((k * t) % n) / static_cast<double>(n);
      acc += x[k] * cplx(std::cos(ang), std::sin(ang));
    }
    out[t] = acc / static_cast<double>(n);
  }
  return out;
}

// Windowed-segment DFT for one STFT row, computed from scratch: segment
// centered on `center`, zero outside the trace, zero-padded to n_fft.
inline std::vector<cplx> stft_row(const std::vector<cplx>& x, std::size_t center, std::size_t L,
                                  std::size_t n_fft) {
  std::vector<cplx> seg(n_fft, 0.0);
  for (std::size_t j = 0; j < L; ++j) {
    const long long n = static_cast<long long>(center) - static_cast<long long>(L / 2) +
                        static_cast<long long>(j);
    if (n < 0 || n >= static_cast<long long>(x.size())) continue;
    const double w = L == 1 ? 1.0
                            : 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(j) /
                                                     static_cast<double>(L - 1));
    seg[j] = w * x[static_cast<std::size_t>(n)];
  }
  return dft(seg);
}

// Dominant `rank` singular triplets by power iteration with deflation, then
// the residual matrix with them removed.
inline Eigen::MatrixXd remove_top_singular(Eigen::MatrixXd m, int rank, int iters = 500) {
  for (int r = 0; r < rank; ++r) {
    Eigen::VectorXd v = Eigen::VectorXd::Ones(m.cols()).normalized();
    for (int i = 0; i < iters; ++i) {
      Eigen::VectorXd next = m.transpose() * (m * v);
      const double nn = next.norm();
      if (nn == 0.0) return m;
      v = next / nn;
    }
    const Eigen::VectorXd u_s = m * v; // sigma * u
    m -= u_s * v.transpose();
  }
  return m;
}

// Bistatic two-way time, antennas straddling x by half the separation.
inline double travel_time(double x, double x0, double depth, double eps_r, double sep) {
  const double v = 2.998e8 / std::sqrt(eps_r);
  const double a = x - sep / 2.0 - x0;
  const double b = x + sep / 2.0 - x0;
  return (std::sqrt(a * a + depth * depth) + std::sqrt(b * b + depth * depth)) / v;
}

// Portable seeded stream (splitmix64) for fixtures that must not depend on the
// standard library's distribution implementations.
struct SplitMix {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

inline Eigen::MatrixXd seeded_matrix(int rows, int cols, std::uint64_t seed) {
  SplitMix rng{seed};
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = rng.uniform();
  return m;
}

inline double rel_err(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

} // namespace oracle
