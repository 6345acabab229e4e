#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "tiltfuse/error.hpp"
#include "tiltfuse/numeric.hpp"

namespace tiltfuse {

/// Mean square error, compensated summation.
inline double mse(std::span<const double> ref, std::span<const double> est) {
  if (ref.size() != est.size())
    throw InvalidStateError("mse: length mismatch (" + std::to_string(ref.size()) + " vs " +
                            std::to_string(est.size()) + ")");
  if (ref.empty()) throw InvalidStateError("mse: empty sequences");
  KahanSum s;
  for (std::size_t k = 0; k < ref.size(); ++k) {
    const double d = ref[k] - est[k];
    s.add(d * d);
  }
  return s.value() / static_cast<double>(ref.size());
}

// In-place iterative radix-2 FFT; size must be a power of two.
inline void fft_radix2(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * kPi / static_cast<double>(len);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        // Twiddles from the exact angle rather than by repeated
        // multiplication keep the error flat for long transforms.
        const std::complex<double> w = std::polar(1.0, ang * static_cast<double>(k));
        const auto u = a[i + k];
        const auto v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

/// One-sided amplitude spectrum. The signal is zero-padded to the next power
/// of two (n_fft) with no window. Amplitudes are |X_k| * 2 / n_fft for
/// 0 < k < n_fft/2 and |X_k| / n_fft at DC and Nyquist, so a unit sine on an
/// exact bin shows amplitude 1.
struct Spectrum {
  std::vector<double> frequencies;  // Hz, 0 .. 1/(2 dt)
  std::vector<double> magnitudes;
  double dt = 0.0;
  std::size_t n_samples = 0;
  std::size_t n_fft = 0;
  // Two-sided bins k and n_fft-k had equal magnitude before one-siding.
  bool symmetric = true;
};

inline Spectrum noise_spectrum(std::span<const double> signal, double dt) {
  if (signal.size() < 2) throw InvalidStateError("noise_spectrum: need at least 2 samples");
  if (!(dt > 0.0)) throw ParameterError("noise_spectrum: dt must be > 0");
  const std::size_t n = next_pow2(signal.size());
  std::vector<std::complex<double>> buf(n);
  for (std::size_t i = 0; i < signal.size(); ++i) buf[i] = signal[i];
  fft_radix2(buf);

  Spectrum sp;
  sp.dt = dt;
  sp.n_samples = signal.size();
  sp.n_fft = n;
  double peak = 0.0;
  for (const auto& c : buf) peak = std::max(peak, std::abs(c));
  for (std::size_t k = 1; k < n / 2; ++k)
    if (std::fabs(std::abs(buf[k]) - std::abs(buf[n - k])) > 1e-9 * (peak + 1e-300)) sp.symmetric = false;

  const std::size_t half = n / 2;
  sp.frequencies.resize(half + 1);
  sp.magnitudes.resize(half + 1);
  for (std::size_t k = 0; k <= half; ++k) {
    sp.frequencies[k] = static_cast<double>(k) / (static_cast<double>(n) * dt);
    const double scale = (k == 0 || k == half) ? 1.0 : 2.0;
    sp.magnitudes[k] = scale * std::abs(buf[k]) / static_cast<double>(n);
  }
  return sp;
}

/// Signal energy reconstructed from a one-sided spectrum (Parseval):
/// n_fft * (a_0^2 + a_{n/2}^2) + n_fft / 2 * sum of the other a_k^2.
inline double spectrum_energy(const Spectrum& sp) {
  KahanSum s;
  const std::size_t half = sp.magnitudes.size() - 1;
  const double n = static_cast<double>(sp.n_fft);
  for (std::size_t k = 0; k <= half; ++k) {
    const double a2 = sp.magnitudes[k] * sp.magnitudes[k];
    s.add((k == 0 || k == half) ? n * a2 : 0.5 * n * a2);
  }
  return s.value();
}

/// Trapezoidal integral of magnitude over frequency.
inline double spectrum_area(const Spectrum& sp) {
  if (sp.frequencies.size() != sp.magnitudes.size()) throw InvalidStateError("spectrum_area: length mismatch");
  KahanSum s;
  for (std::size_t k = 1; k < sp.frequencies.size(); ++k)
    s.add(0.5 * (sp.magnitudes[k] + sp.magnitudes[k - 1]) * (sp.frequencies[k] - sp.frequencies[k - 1]));
  return s.value();
}

/// 10 log10(signal energy / noise energy); +inf when the noise has no energy.
inline double snr_db(std::span<const double> signal, std::span<const double> noise) {
  if (signal.size() != noise.size()) throw InvalidStateError("snr_db: length mismatch");
  KahanSum es, en;
  for (std::size_t k = 0; k < signal.size(); ++k) {
    es.add(signal[k] * signal[k]);
    en.add(noise[k] * noise[k]);
  }
  if (en.value() == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(es.value() / en.value());
}

}  // namespace tiltfuse
