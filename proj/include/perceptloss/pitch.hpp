// perceptloss/pitch.hpp

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

// F0 contour extraction (normalized autocorrelation with parabolic lag
// refinement) and the pitch-correlation loss between two contours. Any
// tracker honoring the F0Contour contract can stand in for extract_f0.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "perceptloss/error.hpp"
#include "perceptloss/waveform.hpp"

namespace perceptloss {

struct F0Params {
  double f0_min_hz = 70.0;
  double f0_max_hz = 400.0;
  int frame_len = 1024;
  int hop = 256;
  double voicing_threshold = 0.3;  // minimum autocorrelation peak, in (0,1)
};

/// Per-frame fundamental frequency. f0_hz[i] == 0 exactly when frame i is
/// unvoiced (before gap interpolation).
struct F0Contour {
  std::vector<double> f0_hz;
  std::vector<std::uint8_t> voiced;
  int hop = 0;
  int sample_rate_hz = 0;

  std::size_t num_frames() const { return f0_hz.size(); }
  std::size_t voiced_count() const {
    std::size_t c = 0;
    for (auto v : voiced) c += v ? 1 : 0;
    return c;
  }
};

/// Autocorrelation pitch tracker. Per frame: subtract the frame mean,
/// normalized cross-correlation over lags [rate/f0_max, rate/f0_min],
/// voiced iff the peak reaches voicing_threshold. Among local maxima within
/// 90% of the global peak the smallest lag wins, which suppresses
/// octave-down errors on strongly periodic input. The winning lag is
/// refined by parabolic interpolation; f0 = rate / lag.
inline F0Contour extract_f0(const Waveform& w, const F0Params& p) {
  validate_waveform(w, "pitch input");
  if (!(p.f0_min_hz > 0.0) || !(p.f0_min_hz < p.f0_max_hz) ||
      p.f0_max_hz >= w.sample_rate_hz / 2.0)
    throw Error(ErrorKind::ConfigInvalid, "require 0 < f0_min < f0_max < rate/2");
  if (p.voicing_threshold <= 0.0 || p.voicing_threshold >= 1.0)
    throw Error(ErrorKind::ConfigInvalid, "voicing_threshold must be in (0,1)");

  const int rate = w.sample_rate_hz;
  const int lag_min = std::max(1, static_cast<int>(std::floor(rate / p.f0_max_hz)));
  const int lag_max = static_cast<int>(std::ceil(rate / p.f0_min_hz));
  if (p.frame_len <= lag_max + 2)
    throw Error(ErrorKind::ConfigInvalid,
                "frame_len too small for the requested f0_min");

  const std::size_t len = w.samples.size();
  if (len < static_cast<std::size_t>(p.frame_len) + static_cast<std::size_t>(p.hop))
    throw Error(ErrorKind::SignalTooShort, "need at least two analysis frames");
  const std::size_t frames =
      (len - static_cast<std::size_t>(p.frame_len)) / static_cast<std::size_t>(p.hop) + 1;

  const int window = p.frame_len - lag_max;  // correlation window per lag

  F0Contour c;
  c.hop = p.hop;
  c.sample_rate_hz = rate;
  c.f0_hz.assign(frames, 0.0);
  c.voiced.assign(frames, 0);

  std::vector<double> frame(static_cast<std::size_t>(p.frame_len));
  std::vector<double> r(static_cast<std::size_t>(lag_max) + 2, 0.0);
  for (std::size_t m = 0; m < frames; ++m) {
    const double* src = w.samples.data() + m * static_cast<std::size_t>(p.hop);
    double mean = 0.0;
    for (int i = 0; i < p.frame_len; ++i) mean += src[i];
    mean /= p.frame_len;
    for (int i = 0; i < p.frame_len; ++i)
      frame[static_cast<std::size_t>(i)] = src[i] - mean;

    double e0 = 0.0;
    for (int i = 0; i < window; ++i)
      e0 += frame[static_cast<std::size_t>(i)] * frame[static_cast<std::size_t>(i)];

    for (int lag = lag_min - 1; lag <= lag_max + 1; ++lag) {
      if (lag < 1) continue;
      double dot = 0.0, el = 0.0;
      for (int i = 0; i < window; ++i) {
        const double a = frame[static_cast<std::size_t>(i)];
        const double b = frame[static_cast<std::size_t>(i + lag)];
        dot += a * b;
        el += b * b;
      }
      const double den = std::sqrt(e0 * el);
      r[static_cast<std::size_t>(lag)] = den > 0.0 ? dot / den : 0.0;
    }

    // Local maxima in the admissible lag range.
    double r_max = 0.0;
    for (int lag = lag_min; lag <= lag_max; ++lag)
      r_max = std::max(r_max, r[static_cast<std::size_t>(lag)]);
    if (r_max < p.voicing_threshold) continue;

    int best = 0;
    const double accept = std::max(p.voicing_threshold, 0.9 * r_max);
    for (int lag = lag_min; lag <= lag_max; ++lag) {
      const double v = r[static_cast<std::size_t>(lag)];
      if (v >= accept && v >= r[static_cast<std::size_t>(lag) - 1] &&
          v >= r[static_cast<std::size_t>(lag) + 1]) {
        best = lag;
        break;  // smallest qualifying lag
      }
    }
    if (best == 0) continue;

    const double rm = r[static_cast<std::size_t>(best) - 1];
    const double r0 = r[static_cast<std::size_t>(best)];
    const double rp = r[static_cast<std::size_t>(best) + 1];
    const double denom = rm - 2.0 * r0 + rp;
    double delta = 0.0;
    if (denom < 0.0) delta = 0.5 * (rm - rp) / denom;
    delta = std::clamp(delta, -0.5, 0.5);
    const double f0 = rate / (best + delta);
    c.f0_hz[m] = std::clamp(f0, p.f0_min_hz, p.f0_max_hz);
    c.voiced[m] = 1;
  }

  if (c.voiced_count() == 0)
    throw Error(ErrorKind::NoVoicedFrames, "no frame reached the voicing threshold");
  return c;
}

/// Fills interior unvoiced gaps by linear interpolation between the
/// flanking voiced frames and trims unvoiced edges. Every output frame is
/// voiced.
inline F0Contour interpolate_unvoiced(const F0Contour& c) {
  std::size_t first = 0, last = 0;
  bool any = false;
  for (std::size_t i = 0; i < c.num_frames(); ++i)
    if (c.voiced[i]) {
      if (!any) first = i;
      last = i;
      any = true;
    }
  if (!any)
    throw Error(ErrorKind::NoVoicedFrames, "contour has no voiced frames");

  F0Contour out;
  out.hop = c.hop;
  out.sample_rate_hz = c.sample_rate_hz;
  out.f0_hz.reserve(last - first + 1);
  std::size_t i = first;
  while (i <= last) {
    if (c.voiced[i]) {
      out.f0_hz.push_back(c.f0_hz[i]);
      ++i;
      continue;
    }
    // interior gap: the previous frame and some later frame are voiced
    const std::size_t lo = i - 1;
    std::size_t hi = i;
    while (!c.voiced[hi]) ++hi;
    for (; i < hi; ++i) {
      const double t = static_cast<double>(i - lo) / static_cast<double>(hi - lo);
      out.f0_hz.push_back(c.f0_hz[lo] + t * (c.f0_hz[hi] - c.f0_hz[lo]));
    }
  }
  out.voiced.assign(out.f0_hz.size(), 1);
  return out;
}

/// Resamples b's values onto a's frame grid by linear interpolation; the
/// returned sequences both have a's length. Endpoints map to endpoints.
inline std::pair<std::vector<double>, std::vector<double>> align_contours(
    const F0Contour& a, const F0Contour& b) {
  const std::size_t na = a.num_frames();
  const std::size_t nb = b.num_frames();
  if (na < 2 || nb < 2)
    throw Error(ErrorKind::ContourTooShort, "need >= 2 frames on each side");
  std::vector<double> va = a.f0_hz;
  std::vector<double> vb(na);
  if (na == nb) {
    vb = b.f0_hz;
  } else {
    const double step = static_cast<double>(nb - 1) / static_cast<double>(na - 1);
    for (std::size_t i = 0; i < na; ++i) {
      const double pos = static_cast<double>(i) * step;
      const std::size_t lo = std::min(static_cast<std::size_t>(pos), nb - 2);
      const double t = pos - static_cast<double>(lo);
      vb[i] = b.f0_hz[lo] + t * (b.f0_hz[lo + 1] - b.f0_hz[lo]);
    }
  }
  return {std::move(va), std::move(vb)};
}

/// Two-pass Pearson correlation; undefined (and an error) when either
/// vector has zero variance.
inline double pearson_correlation(const std::vector<double>& a,
                                  const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw Error(ErrorKind::ContourTooShort, "need two equal-length vectors");
  const std::size_t n = a.size();
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double num = 0.0, sa = 0.0, sb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    num += da * db;
    sa += da * da;
    sb += db * db;
  }
  if (sa == 0.0 || sb == 0.0)
    throw Error(ErrorKind::DegenerateContour,
                "constant contour has no defined correlation");
  return num / (std::sqrt(sa) * std::sqrt(sb));
}

/// Core of the contour loss on plain value vectors: optional L1
/// normalization of each vector, then 1 - Pearson. The normalization never
/// changes the correlation (Pearson is scale invariant); it is kept
/// because the contour contract specifies normalized inputs.
inline double pcc_loss_from_values(const std::vector<double>& a,
                                   const std::vector<double>& b,
                                   bool l1_normalize = true) {
  std::vector<double> x = a, y = b;
  if (l1_normalize) {
    double sx = 0.0, sy = 0.0;
    for (double v : x) sx += std::abs(v);
    for (double v : y) sy += std::abs(v);
    if (sx == 0.0 || sy == 0.0)
      throw Error(ErrorKind::DegenerateContour, "contour has zero L1 norm");
    for (double& v : x) v /= sx;
    for (double& v : y) v /= sy;
  }
  const double r = std::clamp(pearson_correlation(x, y), -1.0, 1.0);
  return 1.0 - r;
}

/// Pitch correlation loss between two contours: interpolate unvoiced gaps,
/// align the second contour onto the first's grid, L1-normalize, Pearson.
/// Result lies in [0, 2].
inline double pcc_loss(const F0Contour& a, const F0Contour& b) {
  if (a.voiced_count() == 0 || b.voiced_count() == 0)
    throw Error(ErrorKind::NoVoicedFrames, "contour has no voiced frames");
  if (a.voiced_count() < 2 || b.voiced_count() < 2)
    throw Error(ErrorKind::ContourTooShort, "need >= 2 voiced frames per contour");
  const F0Contour ga = interpolate_unvoiced(a);
  const F0Contour gb = interpolate_unvoiced(b);
  auto [va, vb] = align_contours(ga, gb);
  return pcc_loss_from_values(va, vb, true);
}

/// Contour dump: one row per frame, `frame_index,time_s,f0_hz,voiced`.
inline void write_contour_csv(const std::string& path, const F0Contour& c) {
  std::ofstream out(path, std::ios::trunc);
  if (!out)
    throw Error(ErrorKind::FileNotFound, "cannot write " + path);
  out << "frame_index,time_s,f0_hz,voiced\n";
  char buf[64];
  for (std::size_t i = 0; i < c.num_frames(); ++i) {
    const double t = static_cast<double>(i) * c.hop / c.sample_rate_hz;
    std::snprintf(buf, sizeof(buf), "%zu,%.9f,%.17g,%d\n", i, t, c.f0_hz[i],
                  c.voiced[i] ? 1 : 0);
    out << buf;
  }
}

}  // namespace perceptloss
