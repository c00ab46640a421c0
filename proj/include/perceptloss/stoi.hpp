// perceptloss/stoi.hpp

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

// Short-time objective intelligibility over one-third-octave band
// envelopes, and the composite intelligibility loss built on it.
//
// Two modes share one front end (resample to 10 kHz, drop silent frames,
// 256/128/512 STFT, 15 bands from 150 Hz, 30-frame segments):
//   - loss mode (default): plain per-band correlation between the raw
//     envelope segments;
//   - classic mode (apply_clipping): the degraded segment is first scaled
//     to the reference's per-band energy and clipped at the SDR bound,
//     which reproduces the standard intelligibility score.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "perceptloss/dsp.hpp"
#include "perceptloss/error.hpp"
#include "perceptloss/resample.hpp"
#include "perceptloss/waveform.hpp"

namespace perceptloss {

enum class BandTerm { L1, L2 };

struct StoiParams {
  int resample_rate_hz = 10000;
  int frame_len = 256;
  int hop = 128;
  int fft_size = 512;
  int num_bands = 15;           // J
  double first_center_hz = 150.0;
  int seg_len_frames = 30;      // N, frames per envelope segment
  double silent_range_db = 40.0;
  bool apply_clipping = false;  // classic-mode toggle
  double clip_sdr_db = -15.0;   // used only when clipping is enabled
  BandTerm band_term = BandTerm::L1;

  static StoiParams classic() {
    StoiParams p;
    p.apply_clipping = true;
    return p;
  }
};

struct StoiLossValue {
  double total = 0.0;
  double corr_term = 0.0;  // segment mean of 1 - f_stoi
  double mse_term = 0.0;   // segment mean of the band-envelope discrepancy
  std::vector<double> per_frame_scores;  // f_stoi per segment
};

namespace detail {

// Mean-centered normalized inner product of two envelope columns, pinned
// into [-1, 1] against last-ulp overshoot. Zero variance on either side
// leaves the correlation undefined.
inline double band_correlation(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const Eigen::VectorXd xc = x.array() - x.mean();
  const Eigen::VectorXd yc = y.array() - y.mean();
  const double nx = xc.norm();
  const double ny = yc.norm();
  if (nx == 0.0 || ny == 0.0)
    throw Error(ErrorKind::DegenerateBand,
                "band envelope is constant within the segment");
  return std::clamp(xc.dot(yc) / (nx * ny), -1.0, 1.0);
}

}  // namespace detail

/// Segment score: the per-band envelope correlations averaged over all J
/// bands. Segments are [N x J], one column per band.
inline double stoi_frame_score(const Eigen::MatrixXd& x_seg,
                               const Eigen::MatrixXd& y_seg) {
  if (x_seg.rows() != y_seg.rows() || x_seg.cols() != y_seg.cols())
    throw Error(ErrorKind::LengthMismatch, "segments differ in shape");
  if (x_seg.rows() < 2 || x_seg.cols() < 1)
    throw Error(ErrorKind::SignalTooShort, "segment needs >= 2 frames");
  const Eigen::Index bands = x_seg.cols();
  double acc = 0.0;
  for (Eigen::Index j = 0; j < bands; ++j)
    acc += detail::band_correlation(x_seg.col(j), y_seg.col(j));
  return acc / static_cast<double>(bands);
}

/// Shared front end: both signals resampled, silent frames removed by the
/// reference's energy mask, envelopes extracted.
inline std::pair<BandEnvelopes, BandEnvelopes> stoi_envelopes(
    const Waveform& x, const Waveform& y, const StoiParams& p) {
  validate_waveform(x, "reference");
  validate_waveform(y, "degraded");
  if (x.sample_rate_hz != y.sample_rate_hz || x.samples.size() != y.samples.size())
    throw Error(ErrorKind::LengthMismatch,
                "signals must share duration and sample rate");
  const Waveform xr = resample(x, p.resample_rate_hz);
  const Waveform yr = resample(y, p.resample_rate_hz);
  auto [xs, ys] = remove_silent_frames(xr, yr, p.frame_len, p.hop, p.silent_range_db);
  const PowerSpectrogram px = stft_power(frame_signal(xs, p.frame_len, p.hop), p.fft_size);
  const PowerSpectrogram py = stft_power(frame_signal(ys, p.frame_len, p.hop), p.fft_size);
  BandEnvelopes ex = third_octave_envelopes(px, p.num_bands, p.first_center_hz);
  BandEnvelopes ey = third_octave_envelopes(py, p.num_bands, p.first_center_hz);
  return {std::move(ex), std::move(ey)};
}

namespace detail {

// Per-segment band correlations with the classic normalization + clipping
// applied to the degraded side when requested.
inline double segment_score(const Eigen::MatrixXd& x_seg,
                            const Eigen::MatrixXd& y_seg, bool clip,
                            double clip_sdr_db) {
  if (!clip) return stoi_frame_score(x_seg, y_seg);
  const double c = std::pow(10.0, -clip_sdr_db / 20.0);
  double acc = 0.0;
  for (Eigen::Index j = 0; j < x_seg.cols(); ++j) {
    const Eigen::VectorXd x = x_seg.col(j);
    Eigen::VectorXd y = y_seg.col(j);
    const double ny = y.norm();
    if (ny == 0.0)
      throw Error(ErrorKind::DegenerateBand,
                  "degraded band envelope is all zero within the segment");
    y *= x.norm() / ny;
    y = y.cwiseMin((1.0 + c) * x.array().matrix());
    acc += band_correlation(x, y);
  }
  return acc / static_cast<double>(x_seg.cols());
}

inline void check_segment_count(Eigen::Index frames, int seg_len) {
  if (frames < seg_len)
    throw Error(ErrorKind::SignalTooShort,
                "fewer envelope frames than one segment after silence removal");
}

}  // namespace detail

/// Intelligibility score in [0, 1]-ish range (correlations can dip below 0
/// for adversarial inputs): the segment scores averaged over all sliding
/// N-frame segments.
inline double stoi_score(const Waveform& x, const Waveform& y, const StoiParams& p) {
  const auto [ex, ey] = stoi_envelopes(x, y, p);
  const Eigen::Index frames = ex.num_frames();
  detail::check_segment_count(frames, p.seg_len_frames);
  const int n = p.seg_len_frames;
  double acc = 0.0;
  Eigen::Index count = 0;
  for (Eigen::Index m = n - 1; m < frames; ++m, ++count)
    acc += detail::segment_score(ex.env.middleRows(m - n + 1, n),
                                 ey.env.middleRows(m - n + 1, n),
                                 p.apply_clipping, p.clip_sdr_db);
  return acc / static_cast<double>(count);
}

/// Composite loss over precomputed envelopes; exposed so envelope-level
/// perturbations can be tested without synthesizing a waveform for them.
inline StoiLossValue stoi_loss_from_envelopes(const BandEnvelopes& ex,
                                              const BandEnvelopes& ey,
                                              const StoiParams& p,
                                              double lambda_stoi,
                                              double lambda_mse) {
  if (ex.num_frames() != ey.num_frames() || ex.num_bands() != ey.num_bands())
    throw Error(ErrorKind::LengthMismatch, "envelope shapes differ");
  const Eigen::Index frames = ex.num_frames();
  detail::check_segment_count(frames, p.seg_len_frames);
  const int n = p.seg_len_frames;
  const Eigen::Index bands = ex.num_bands();

  StoiLossValue v;
  double corr_acc = 0.0, band_acc = 0.0;
  Eigen::Index count = 0;
  for (Eigen::Index m = n - 1; m < frames; ++m, ++count) {
    const Eigen::MatrixXd xs = ex.env.middleRows(m - n + 1, n);
    const Eigen::MatrixXd ys = ey.env.middleRows(m - n + 1, n);
    const double f = stoi_frame_score(xs, ys);
    v.per_frame_scores.push_back(f);
    corr_acc += 1.0 - f;
    // Segment-mean band envelopes, then the printed norm over the J-vector.
    const Eigen::VectorXd dx = xs.colwise().mean() - ys.colwise().mean();
    const double band = p.band_term == BandTerm::L1
                            ? dx.lpNorm<1>() / static_cast<double>(bands)
                            : dx.norm() / static_cast<double>(bands);
    band_acc += band;
  }
  v.corr_term = corr_acc / static_cast<double>(count);
  v.mse_term = band_acc / static_cast<double>(count);
  v.total = lambda_stoi * v.corr_term + lambda_mse * v.mse_term;
  return v;
}

/// The intelligibility loss between a reference and a converted utterance.
/// Correlations are taken on the raw envelopes (no classic clipping).
inline StoiLossValue stoi_loss(const Waveform& x, const Waveform& y,
                               const StoiParams& p, double lambda_stoi,
                               double lambda_mse) {
  const auto [ex, ey] = stoi_envelopes(x, y, p);
  return stoi_loss_from_envelopes(ex, ey, p, lambda_stoi, lambda_mse);
}

}  // namespace perceptloss
