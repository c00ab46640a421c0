// tests/test_resample.cpp

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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "perceptloss/resample.hpp"
#include "testing/fixtures.hpp"

using namespace perceptloss;

namespace {

// Direct DFT magnitude peak over the first window_len samples.
double dominant_frequency(const Waveform& w, int window_len) {
  const int bins = window_len / 2 + 1;
  double best_mag = -1.0;
  int best_k = 0;
  for (int k = 0; k < bins; ++k) {
    double re = 0.0, im = 0.0;
    for (int i = 0; i < window_len; ++i) {
      const double ang = -2.0 * M_PI * k * i / window_len;
      re += w.samples[static_cast<std::size_t>(i)] * std::cos(ang);
      im += w.samples[static_cast<std::size_t>(i)] * std::sin(ang);
    }
    const double mag = re * re + im * im;
    if (mag > best_mag) {
      best_mag = mag;
      best_k = k;
    }
  }
  return static_cast<double>(best_k) * w.sample_rate_hz / window_len;
}

double normalized_cross_correlation(const std::vector<double>& a,
                                    const std::vector<double>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  double dot = 0.0, ea = 0.0, eb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    dot += a[i] * b[i];
    ea += a[i] * a[i];
    eb += b[i] * b[i];
  }
  return dot / std::sqrt(ea * eb);
}

}  // namespace

TEST_CASE("same-rate resample returns the input bit-exactly") {
  testing::Rng rng(3);
  Waveform w = testing::white_noise(0.25, 24000, rng);
  const Waveform r = resample(w, 24000);
  REQUIRE(r.samples == w.samples);
  REQUIRE(r.sample_rate_hz == 24000);
}

TEST_CASE("output length follows round(len * target/source)") {
  const Waveform w = testing::tone(440.0, 1.0, 24000);
  REQUIRE(w.samples.size() == 24000);
  REQUIRE(resample(w, 10000).samples.size() == 10000);
  REQUIRE(resample(w, 48000).samples.size() == 48000);
  REQUIRE(resample(w, 44100).samples.size() == 44100);

  Waveform odd = w;
  odd.samples.resize(24001);
  // 24001 * 10000 / 24000 = 10000.41... -> 10000
  REQUIRE(resample(odd, 10000).samples.size() == 10000);
}

TEST_CASE("a 440 Hz tone survives 48 kHz -> 10 kHz") {
  const Waveform w = testing::tone(440.0, 1.0, 48000);
  const Waveform r = resample(w, 10000);
  const int window = 8192;
  const double peak = dominant_frequency(r, window);
  const double bin_width = 10000.0 / window;
  REQUIRE(std::abs(peak - 440.0) <= bin_width + 1e-9);
}

TEST_CASE("up-down round trip correlates above 0.999 for tones below r/4") {
  for (double freq : {500.0, 1500.0, 3000.0, 3900.0}) {
    const Waveform w = testing::tone(freq, 1.0, 16000);
    const Waveform up = resample(w, 32000);
    const Waveform back = resample(up, 16000);
    REQUIRE(back.samples.size() == w.samples.size());
    REQUIRE(normalized_cross_correlation(back.samples, w.samples) > 0.999);
  }
}

TEST_CASE("rates below 4 kHz are refused") {
  const Waveform w = testing::tone(440.0, 0.1, 24000);
  try {
    resample(w, 3999);
    FAIL("expected error");
  } catch (const Error& e) {
    REQUIRE(e.kind() == ErrorKind::RateTooLow);
  }
}

TEST_CASE("resampled DC stays at DC") {
  Waveform w;
  w.sample_rate_hz = 24000;
  w.samples.assign(24000, 0.25);
  const Waveform r = resample(w, 10000);
  // interior samples: edge taps see the zero padding
  for (std::size_t i = 100; i + 100 < r.samples.size(); ++i)
    REQUIRE(r.samples[i] == Catch::Approx(0.25).epsilon(1e-9));
}
