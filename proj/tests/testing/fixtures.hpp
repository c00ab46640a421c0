// tests/testing/fixtures.hpp

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

// Deterministic signal generators and a scratch-directory helper shared by
// the unit and acceptance suites. All randomness flows through the local
// splitmix64 generator so fixtures are identical across platforms.

#pragma once

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "perceptloss/waveform.hpp"

namespace testing {

struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next_u64() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  double uniform() {  // [0, 1)
    return static_cast<double>(next_u64() >> 11) / 9007199254740992.0;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian() {  // Box-Muller
    const double u1 = std::max(uniform(), 1e-300);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
};

inline perceptloss::Waveform tone(double freq_hz, double seconds, int rate,
                                  double amp = 0.5) {
  perceptloss::Waveform w;
  w.sample_rate_hz = rate;
  const auto n = static_cast<std::size_t>(seconds * rate);
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    w.samples[i] = amp * std::sin(2.0 * M_PI * freq_hz * static_cast<double>(i) / rate);
  return w;
}

/// Linear chirp from f0 to f1 over the duration.
inline perceptloss::Waveform chirp(double f0, double f1, double seconds, int rate,
                                   double amp = 0.5) {
  perceptloss::Waveform w;
  w.sample_rate_hz = rate;
  const auto n = static_cast<std::size_t>(seconds * rate);
  w.samples.resize(n);
  const double k = (f1 - f0) / seconds;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    w.samples[i] = amp * std::sin(2.0 * M_PI * (f0 * t + 0.5 * k * t * t));
  }
  return w;
}

inline perceptloss::Waveform white_noise(double seconds, int rate, Rng& rng,
                                         double amp = 0.1) {
  perceptloss::Waveform w;
  w.sample_rate_hz = rate;
  const auto n = static_cast<std::size_t>(seconds * rate);
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) w.samples[i] = amp * rng.gaussian();
  return w;
}

/// White noise through a one-pole lowpass plus a small flat component, RMS
/// normalized: a crude long-term speech spectrum that energizes every
/// third-octave band.
inline perceptloss::Waveform speech_shaped_noise(double seconds, int rate,
                                                 std::uint64_t seed,
                                                 double rms = 0.1) {
  Rng rng(seed);
  perceptloss::Waveform w;
  w.sample_rate_hz = rate;
  const auto n = static_cast<std::size_t>(seconds * rate);
  w.samples.resize(n);
  double lp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.gaussian();
    lp = 0.9 * lp + x;
    w.samples[i] = lp + 0.15 * x;
  }
  double acc = 0.0;
  for (double v : w.samples) acc += v * v;
  const double scale = rms / std::sqrt(acc / static_cast<double>(n));
  for (double& v : w.samples) v *= scale;
  return w;
}

/// Noise confined to the middle of the clip, low-level elsewhere.
inline perceptloss::Waveform noise_burst(double seconds, int rate, std::uint64_t seed) {
  perceptloss::Waveform w = speech_shaped_noise(seconds, rate, seed, 0.15);
  const std::size_t n = w.samples.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double pos = static_cast<double>(i) / static_cast<double>(n);
    if (pos < 0.2 || pos > 0.8) w.samples[i] *= 0.02;
  }
  return w;
}

/// y = x + noise scaled to the requested signal-to-noise ratio.
inline perceptloss::Waveform add_noise_at_snr(const perceptloss::Waveform& x,
                                              const perceptloss::Waveform& noise,
                                              double snr_db) {
  double ex = 0.0, en = 0.0;
  for (double v : x.samples) ex += v * v;
  for (double v : noise.samples) en += v * v;
  const double scale = std::sqrt(ex / (en * std::pow(10.0, snr_db / 10.0)));
  perceptloss::Waveform y = x;
  for (std::size_t i = 0; i < y.samples.size(); ++i)
    y.samples[i] += scale * noise.samples[i % noise.samples.size()];
  return y;
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("perceptloss_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
