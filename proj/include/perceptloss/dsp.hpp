// perceptloss/dsp.hpp

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

// Shared spectral front end. Conventions used throughout:
//   - Framing is left-aligned with no padding or centering:
//     frame m covers samples [m*hop, m*hop + frame_len).
//   - The Hann window is the symmetric endpoint-free variant
//     w[i] = 0.5*(1 - cos(2*pi*(i+1)/(N+1))), i = 0..N-1.
//   - Spectra are one-sided, bins 0..fft_size/2, unnormalized forward DFT.
//     For energy accounting, bins 1..fft_size/2-1 count twice (DC and
//     Nyquist once).

#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "perceptloss/error.hpp"
#include "perceptloss/waveform.hpp"

namespace perceptloss {

enum class Window { Hann, Rectangular };

inline std::vector<double> hann_window(int n) {
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    w[static_cast<std::size_t>(i)] =
        0.5 * (1.0 - std::cos(2.0 * M_PI * (i + 1) / (n + 1)));
  return w;
}

/// Frames of a signal, row per frame, plus the framing metadata the
/// downstream transforms need.
struct FrameSet {
  Eigen::MatrixXd frames;  // [num_frames x frame_len]
  int frame_len = 0;
  int hop = 0;
  int sample_rate_hz = 0;

  Eigen::Index num_frames() const { return frames.rows(); }
};

struct PowerSpectrogram {
  Eigen::MatrixXd frames;  // [num_frames x (fft_size/2 + 1)], |DFT bin|^2
  int frame_len = 0;
  int hop = 0;
  int fft_size = 0;
  int sample_rate_hz = 0;

  Eigen::Index num_frames() const { return frames.rows(); }
  Eigen::Index num_bins() const { return frames.cols(); }
  double bin_hz(Eigen::Index k) const {
    return static_cast<double>(sample_rate_hz) * static_cast<double>(k) / fft_size;
  }
};

struct MelParams {
  int num_mels = 80;
  int frame_len = 1200;
  int hop = 300;
  double fmin_hz = 0.0;
  double fmax_hz = 12000.0;
  double log_floor = 1e-5;
  int sample_rate_hz = 24000;  // rate the waveform must already be at
};

struct MelSpectrogram {
  Eigen::MatrixXd frames;  // [num_frames x num_mels], natural-log power
  MelParams mel_params;

  Eigen::Index num_frames() const { return frames.rows(); }
  Eigen::Index num_mels() const { return frames.cols(); }
};

/// One-third-octave short-term envelopes: env(m, j) is the band-j energy
/// (sqrt of summed spectral power) at frame m.
struct BandEnvelopes {
  Eigen::MatrixXd env;                  // [num_frames x J]
  std::vector<double> band_centers_hz;  // length J

  Eigen::Index num_frames() const { return env.rows(); }
  Eigen::Index num_bands() const { return env.cols(); }
};

/// Frame count = floor((len - frame_len)/hop) + 1; the tail that does not
/// fill a frame is dropped.
inline FrameSet frame_signal(const Waveform& w, int frame_len, int hop) {
  if (frame_len < 1 || hop < 1 || frame_len < hop)
    throw Error(ErrorKind::SignalTooShort, "require frame_len >= hop >= 1");
  const std::size_t len = w.samples.size();
  if (len < static_cast<std::size_t>(frame_len))
    throw Error(ErrorKind::SignalTooShort,
                "signal shorter than one analysis frame");
  const std::size_t count = (len - static_cast<std::size_t>(frame_len)) /
                                static_cast<std::size_t>(hop) + 1;

  FrameSet fs;
  fs.frame_len = frame_len;
  fs.hop = hop;
  fs.sample_rate_hz = w.sample_rate_hz;
  fs.frames.resize(static_cast<Eigen::Index>(count), frame_len);
  for (std::size_t m = 0; m < count; ++m)
    for (int i = 0; i < frame_len; ++i)
      fs.frames(static_cast<Eigen::Index>(m), i) =
          w.samples[m * static_cast<std::size_t>(hop) + static_cast<std::size_t>(i)];
  return fs;
}

/// Windowed one-sided power spectrum per frame. Frames are zero-padded to
/// fft_size on the right.
inline PowerSpectrogram stft_power(const FrameSet& fs, int fft_size,
                                   Window window = Window::Hann) {
  if (fft_size < fs.frame_len)
    throw Error(ErrorKind::SignalTooShort, "fft_size must be >= frame_len");

  const std::vector<double> win = window == Window::Hann
                                      ? hann_window(fs.frame_len)
                                      : std::vector<double>(
                                            static_cast<std::size_t>(fs.frame_len), 1.0);

  PowerSpectrogram ps;
  ps.frame_len = fs.frame_len;
  ps.hop = fs.hop;
  ps.fft_size = fft_size;
  ps.sample_rate_hz = fs.sample_rate_hz;
  const int bins = fft_size / 2 + 1;
  ps.frames.resize(fs.num_frames(), bins);

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<double> buf(static_cast<std::size_t>(fft_size), 0.0);
  std::vector<std::complex<double>> spec;
  for (Eigen::Index m = 0; m < fs.num_frames(); ++m) {
    for (int i = 0; i < fs.frame_len; ++i)
      buf[static_cast<std::size_t>(i)] =
          fs.frames(m, i) * win[static_cast<std::size_t>(i)];
    fft.fwd(spec, buf);
    for (int k = 0; k < bins; ++k)
      ps.frames(m, k) = std::norm(spec[static_cast<std::size_t>(k)]);
  }
  return ps;
}

namespace detail {

inline double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
inline double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

// Triangular filters with unit peak, num_mels rows over one-sided bins.
inline Eigen::MatrixXd mel_filterbank(const MelParams& p, int fft_size) {
  const int bins = fft_size / 2 + 1;
  Eigen::MatrixXd fb = Eigen::MatrixXd::Zero(p.num_mels, bins);
  const double mel_lo = hz_to_mel(p.fmin_hz);
  const double mel_hi = hz_to_mel(p.fmax_hz);
  std::vector<double> edges(static_cast<std::size_t>(p.num_mels) + 2);
  for (std::size_t i = 0; i < edges.size(); ++i)
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                      (p.num_mels + 1));
  for (int m = 0; m < p.num_mels; ++m) {
    const double f0 = edges[static_cast<std::size_t>(m)];
    const double f1 = edges[static_cast<std::size_t>(m) + 1];
    const double f2 = edges[static_cast<std::size_t>(m) + 2];
    for (int k = 0; k < bins; ++k) {
      const double f = static_cast<double>(p.sample_rate_hz) * k / fft_size;
      double wgt = 0.0;
      if (f > f0 && f < f1) wgt = (f - f0) / (f1 - f0);
      else if (f >= f1 && f < f2) wgt = (f2 - f) / (f2 - f1);
      fb(m, k) = wgt;
    }
  }
  return fb;
}

inline int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace detail

/// Log mel spectrogram: Hann-windowed power spectrum (fft_size = next power
/// of two >= frame_len), triangular mel filterbank, natural log clamped at
/// log_floor.
inline MelSpectrogram mel_spectrogram(const Waveform& w, const MelParams& p) {
  validate_waveform(w, "mel input");
  if (w.sample_rate_hz != p.sample_rate_hz)
    throw Error(ErrorKind::SampleRateMismatch,
                "waveform rate does not match MelParams; resample first");
  if (!(p.fmin_hz < p.fmax_hz) || p.fmax_hz > p.sample_rate_hz / 2.0)
    throw Error(ErrorKind::ConfigInvalid, "require fmin < fmax <= rate/2");
  if (p.log_floor <= 0.0)
    throw Error(ErrorKind::ConfigInvalid, "log_floor must be positive");

  const int fft_size = detail::next_pow2(p.frame_len);
  const FrameSet fs = frame_signal(w, p.frame_len, p.hop);
  const PowerSpectrogram ps = stft_power(fs, fft_size, Window::Hann);
  const Eigen::MatrixXd fb = detail::mel_filterbank(p, fft_size);

  MelSpectrogram mel;
  mel.mel_params = p;
  mel.frames.resize(ps.num_frames(), p.num_mels);
  for (Eigen::Index m = 0; m < ps.num_frames(); ++m)
    for (int j = 0; j < p.num_mels; ++j) {
      double acc = 0.0;
      for (Eigen::Index k = 0; k < ps.num_bins(); ++k)
        acc += fb(j, k) * ps.frames(m, k);
      mel.frames(m, j) = std::log(std::max(acc, p.log_floor));
    }
  return mel;
}

/// One-third-octave band energies. Band j is centered at
/// first_center_hz * 2^(j/3) and collects the FFT bins whose frequency lies
/// in [center * 2^(-1/6), center * 2^(1/6)). Band energy is the square root
/// of the summed power.
inline BandEnvelopes third_octave_envelopes(const PowerSpectrogram& ps,
                                            int num_bands,
                                            double first_center_hz) {
  if (num_bands < 1)
    throw Error(ErrorKind::ConfigInvalid, "need at least one band");
  const double nyquist = ps.sample_rate_hz / 2.0;
  const double top_edge =
      first_center_hz * std::pow(2.0, (num_bands - 1) / 3.0) * std::pow(2.0, 1.0 / 6.0);
  if (top_edge > nyquist)
    throw Error(ErrorKind::BandAboveNyquist,
                "highest band edge exceeds Nyquist frequency");

  BandEnvelopes be;
  be.band_centers_hz.resize(static_cast<std::size_t>(num_bands));
  be.env = Eigen::MatrixXd::Zero(ps.num_frames(), num_bands);
  for (int j = 0; j < num_bands; ++j) {
    const double center = first_center_hz * std::pow(2.0, j / 3.0);
    be.band_centers_hz[static_cast<std::size_t>(j)] = center;
    const double lo = center * std::pow(2.0, -1.0 / 6.0);
    const double hi = center * std::pow(2.0, 1.0 / 6.0);
    for (Eigen::Index k = 0; k < ps.num_bins(); ++k) {
      const double f = ps.bin_hz(k);
      if (f >= lo && f < hi)
        be.env.col(j) += ps.frames.col(k);
    }
  }
  be.env = be.env.cwiseSqrt();
  return be;
}

/// Drops the frames of x whose energy falls more than range_db below x's
/// loudest frame, removes the same frames from y, and overlap-adds the
/// surviving Hann-windowed frames at hop spacing.
inline std::pair<Waveform, Waveform> remove_silent_frames(const Waveform& x,
                                                          const Waveform& y,
                                                          int frame_len, int hop,
                                                          double range_db = 40.0) {
  if (x.samples.size() != y.samples.size() || x.sample_rate_hz != y.sample_rate_hz)
    throw Error(ErrorKind::LengthMismatch,
                "silent-frame removal needs equal-length signals at one rate");
  const FrameSet fx = frame_signal(x, frame_len, hop);
  const FrameSet fy = frame_signal(y, frame_len, hop);
  const std::vector<double> win = hann_window(frame_len);

  const Eigen::Index count = fx.num_frames();
  std::vector<double> energy(static_cast<std::size_t>(count), 0.0);
  double max_energy = 0.0;
  for (Eigen::Index m = 0; m < count; ++m) {
    double e = 0.0;
    for (int i = 0; i < frame_len; ++i) {
      const double v = fx.frames(m, i) * win[static_cast<std::size_t>(i)];
      e += v * v;
    }
    energy[static_cast<std::size_t>(m)] = e;
    max_energy = std::max(max_energy, e);
  }
  // keep iff frame energy > max - range_db  (in dB), strictly
  const double threshold = max_energy * std::pow(10.0, -range_db / 10.0);
  std::vector<Eigen::Index> kept;
  for (Eigen::Index m = 0; m < count; ++m)
    if (energy[static_cast<std::size_t>(m)] > threshold)
      kept.push_back(m);
  if (kept.empty())
    throw Error(ErrorKind::AllFramesSilent, "every frame is below the range");

  const std::size_t out_len =
      (kept.size() - 1) * static_cast<std::size_t>(hop) +
      static_cast<std::size_t>(frame_len);
  Waveform ox, oy;
  ox.sample_rate_hz = x.sample_rate_hz;
  oy.sample_rate_hz = y.sample_rate_hz;
  ox.samples.assign(out_len, 0.0);
  oy.samples.assign(out_len, 0.0);
  for (std::size_t j = 0; j < kept.size(); ++j) {
    const Eigen::Index m = kept[j];
    const std::size_t at = j * static_cast<std::size_t>(hop);
    for (int i = 0; i < frame_len; ++i) {
      ox.samples[at + static_cast<std::size_t>(i)] +=
          fx.frames(m, i) * win[static_cast<std::size_t>(i)];
      oy.samples[at + static_cast<std::size_t>(i)] +=
          fy.frames(m, i) * win[static_cast<std::size_t>(i)];
    }
  }
  return {std::move(ox), std::move(oy)};
}

}  // namespace perceptloss
