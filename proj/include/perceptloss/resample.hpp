// perceptloss/resample.hpp

// Copyright 2026  Perceptloss Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "perceptloss/error.hpp"
#include "perceptloss/waveform.hpp"

namespace perceptloss {

namespace detail {

// Zeroth-order modified Bessel function, power series. Converges in well
// under 30 terms for the beta values used here.
inline double bessel_i0(double x) {
  double sum = 1.0, term = 1.0;
  const double half_x = x / 2.0;
  for (int k = 1; k < 64; ++k) {
    term *= (half_x / k) * (half_x / k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

inline double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = M_PI * x;
  return std::sin(px) / px;
}

}  // namespace detail

/// Band-limited rational resampler: windowed-sinc interpolation, Kaiser
/// window (beta 8.6), 64 taps per output sample. Zero group delay; the
/// kernel is evaluated at fractional input positions n * source/target.
/// Output length = round(input_length * target/source). Identical rates
/// return the input bit-exactly.
inline Waveform resample(const Waveform& w, int target_rate_hz) {
  if (target_rate_hz < 4000)
    throw Error(ErrorKind::RateTooLow, "target rate must be >= 4000 Hz");
  validate_waveform(w, "resample input");
  if (target_rate_hz == w.sample_rate_hz) return w;

  const std::int64_t g = std::gcd<std::int64_t>(target_rate_hz, w.sample_rate_hz);
  const std::int64_t up = target_rate_hz / g;     // output samples per block
  const std::int64_t down = w.sample_rate_hz / g; // input samples per block

  const std::int64_t in_len = static_cast<std::int64_t>(w.samples.size());
  const std::int64_t out_len = (in_len * up + down / 2) / down;

  constexpr int kTaps = 64;
  constexpr int kHalf = kTaps / 2;  // kernel support is (-kHalf, kHalf]
  constexpr double kBeta = 8.6;
  const double inv_i0_beta = 1.0 / detail::bessel_i0(kBeta);
  // Cutoff at the lower of the two Nyquist rates, in input-sample units.
  const double cutoff = up < down ? static_cast<double>(up) / down : 1.0;

  // One tap row per phase, normalized to unit DC gain. Common rate pairs
  // reduce to a handful of phases; arbitrary ratios stay bounded by the
  // table cap below.
  const std::int64_t phase_count = std::min<std::int64_t>(up, 65536);
  const bool tabulated = up == phase_count;
  std::vector<double> taps;
  auto make_row = [&](double frac, double* row) {
    double norm = 0.0;
    for (int k = -(kHalf - 1); k <= kHalf; ++k) {
      const double t = k - frac;
      const double u = t / kHalf;
      double h = 0.0;
      if (u > -1.0 && u < 1.0) {
        const double win =
            detail::bessel_i0(kBeta * std::sqrt(1.0 - u * u)) * inv_i0_beta;
        h = cutoff * detail::sinc(cutoff * t) * win;
      }
      row[k + kHalf - 1] = h;
      norm += h;
    }
    if (norm != 0.0)
      for (int k = 0; k < kTaps; ++k) row[k] /= norm;
  };
  if (tabulated) {
    taps.resize(static_cast<std::size_t>(phase_count) * kTaps);
    for (std::int64_t q = 0; q < phase_count; ++q)
      make_row(static_cast<double>(q) / up,
               taps.data() + static_cast<std::size_t>(q) * kTaps);
  }

  Waveform out;
  out.sample_rate_hz = target_rate_hz;
  out.samples.resize(static_cast<std::size_t>(out_len));

  std::vector<double> scratch(kTaps);
  for (std::int64_t n = 0; n < out_len; ++n) {
    const std::int64_t num = n * down;  // position = num / up
    const std::int64_t i0 = num / up;
    const std::int64_t q = num % up;
    const double* row;
    if (tabulated) {
      row = taps.data() + static_cast<std::size_t>(q) * kTaps;
    } else {
      make_row(static_cast<double>(q) / up, scratch.data());
      row = scratch.data();
    }
    double acc = 0.0;
    const std::int64_t lo = i0 - (kHalf - 1);
    if (lo >= 0 && i0 + kHalf < in_len) {
      const double* x = w.samples.data() + lo;
      for (int k = 0; k < kTaps; ++k) acc += row[k] * x[k];
    } else {
      for (int k = 0; k < kTaps; ++k) {
        const std::int64_t idx = lo + k;
        if (idx >= 0 && idx < in_len)
          acc += row[k] * w.samples[static_cast<std::size_t>(idx)];
      }
    }
    out.samples[static_cast<std::size_t>(n)] = acc;
  }
  return out;
}

}  // namespace perceptloss
