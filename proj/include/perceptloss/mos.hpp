// perceptloss/mos.hpp

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

// Inference-only utterance-quality scorer: conv stack over the log-mel
// input, bidirectional LSTM over time, per-frame fully-connected head,
// clamp, global average. Weights come from a versioned, checksummed
// container; nothing here trains.
//
// Container layout (all integers and floats little-endian):
//   magic "PLWS" | u32 version (1)
//   u32 num_conv | per conv: u32 in_ch,out_ch,kh,kw,sh,sw
//   u32 blstm_input | u32 blstm_hidden
//   u32 num_fc | per fc: u32 in,out
//   f32 clamp_lo | f32 clamp_hi
//   tensors, row-major float32, in order:
//     conv i: weight[out][in][kh][kw], bias[out]
//     blstm forward:  w_ih[4H][input], w_hh[4H][H], bias[4H]
//     blstm backward: w_ih, w_hh, bias
//     fc i: weight[out][in], bias[out]
//   u32 crc32 of every preceding byte (poly 0xEDB88320)
// Gate rows in the 4H dimension are ordered input, forget, cell, output.
// LSTM states start at zero; the forget-gate bias lives in the stored
// bias vector. Convolutions use ceil(in/stride) "same" padding, split
// floor(pad/2) before / rest after. The conv output feeds the LSTM as
// frame vectors indexed channel-major: x[c * out_width + j].

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "perceptloss/dsp.hpp"
#include "perceptloss/error.hpp"

namespace perceptloss {

struct ConvSpec {
  int in_ch = 0, out_ch = 0;
  int kh = 0, kw = 0;
  int sh = 1, sw = 1;
};

struct BlstmSpec {
  int input_size = 0;
  int hidden_size = 0;
};

struct FcSpec {
  int in = 0, out = 0;
};

struct ScorerSpec {
  std::vector<ConvSpec> conv_layers;
  BlstmSpec blstm;
  std::vector<FcSpec> fc;
  double clamp_lo = 1.0;
  double clamp_hi = 5.0;

  /// Desk-scale default: two 3x3 convs with stride 1x3 over 80 mels,
  /// BLSTM(144 -> 64), head 128 -> 32 -> 1, scores clamped to [1, 5].
  static ScorerSpec reference() {
    ScorerSpec s;
    s.conv_layers = {{1, 16, 3, 3, 1, 3}, {16, 16, 3, 3, 1, 3}};
    s.blstm = {144, 64};
    s.fc = {{128, 32}, {32, 1}};
    return s;
  }
};

struct MosScore {
  double utterance_score = 0.0;
  std::vector<double> frame_scores;
};

namespace detail {

struct ConvWeights {
  std::vector<double> w;  // [out][in][kh][kw]
  std::vector<double> b;  // [out]
};

struct LstmWeights {
  Eigen::MatrixXd w_ih;  // [4H x input]
  Eigen::MatrixXd w_hh;  // [4H x H]
  Eigen::VectorXd bias;  // [4H]
};

struct FcWeights {
  Eigen::MatrixXd w;     // [out x in]
  Eigen::VectorXd b;     // [out]
};

inline std::uint32_t crc32(const unsigned char* data, std::size_t len) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k)
        c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  std::uint32_t crc = 0xFFFFFFFFu;
  for (std::size_t i = 0; i < len; ++i)
    crc = table[(crc ^ data[i]) & 0xFFu] ^ (crc >> 8);
  return crc ^ 0xFFFFFFFFu;
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline int same_pad_out(int in, int stride) { return (in + stride - 1) / stride; }

inline int same_pad_begin(int in, int k, int stride) {
  const int out = same_pad_out(in, stride);
  const int total = std::max(0, (out - 1) * stride + k - in);
  return total / 2;
}

}  // namespace detail

/// Immutable once constructed; share freely across threads.
class Scorer {
 public:
  ScorerSpec spec;
  std::vector<detail::ConvWeights> conv;
  detail::LstmWeights lstm_fwd, lstm_bwd;
  std::vector<detail::FcWeights> fc;

  /// Header/tensor consistency that does not depend on the input width.
  void validate() const {
    if (spec.conv_layers.empty() || spec.fc.empty())
      throw Error(ErrorKind::ShapeMismatch, "scorer needs conv and fc layers");
    if (!(spec.clamp_hi > spec.clamp_lo))
      throw Error(ErrorKind::ShapeMismatch, "score clamp is empty");
    if (spec.conv_layers.front().in_ch != 1)
      throw Error(ErrorKind::ShapeMismatch, "first conv must take 1 channel");
    for (std::size_t i = 1; i < spec.conv_layers.size(); ++i)
      if (spec.conv_layers[i].in_ch != spec.conv_layers[i - 1].out_ch)
        throw Error(ErrorKind::ShapeMismatch, "conv channel chain broken");
    const int h = spec.blstm.hidden_size;
    if (h < 1 || spec.blstm.input_size < 1)
      throw Error(ErrorKind::ShapeMismatch, "blstm sizes must be positive");
    if (spec.fc.front().in != 2 * h)
      throw Error(ErrorKind::ShapeMismatch, "fc input must match 2*hidden");
    for (std::size_t i = 1; i < spec.fc.size(); ++i)
      if (spec.fc[i].in != spec.fc[i - 1].out)
        throw Error(ErrorKind::ShapeMismatch, "fc chain broken");
    if (spec.fc.back().out != 1)
      throw Error(ErrorKind::ShapeMismatch, "final fc must emit one score");
  }
};

namespace detail {

// 2D convolution with "same" padding and ReLU; feat is [ch][time][width]
// flattened as ch*(T*W) + t*W + j.
inline void conv_forward(const ConvSpec& cs, const ConvWeights& cw,
                         const std::vector<double>& in, int in_t, int in_w,
                         std::vector<double>& out, int& out_t, int& out_w) {
  out_t = same_pad_out(in_t, cs.sh);
  out_w = same_pad_out(in_w, cs.sw);
  const int pad_t = same_pad_begin(in_t, cs.kh, cs.sh);
  const int pad_w = same_pad_begin(in_w, cs.kw, cs.sw);
  out.assign(static_cast<std::size_t>(cs.out_ch) * out_t * out_w, 0.0);
  for (int oc = 0; oc < cs.out_ch; ++oc)
    for (int ot = 0; ot < out_t; ++ot)
      for (int ow = 0; ow < out_w; ++ow) {
        double acc = cw.b[static_cast<std::size_t>(oc)];
        for (int ic = 0; ic < cs.in_ch; ++ic)
          for (int u = 0; u < cs.kh; ++u) {
            const int it = ot * cs.sh - pad_t + u;
            if (it < 0 || it >= in_t) continue;
            for (int v = 0; v < cs.kw; ++v) {
              const int iw = ow * cs.sw - pad_w + v;
              if (iw < 0 || iw >= in_w) continue;
              const std::size_t widx =
                  ((static_cast<std::size_t>(oc) * cs.in_ch + ic) * cs.kh + u) *
                      cs.kw + v;
              acc += cw.w[widx] *
                     in[(static_cast<std::size_t>(ic) * in_t + it) * in_w + iw];
            }
          }
        out[(static_cast<std::size_t>(oc) * out_t + ot) * out_w + ow] =
            acc > 0.0 ? acc : 0.0;  // ReLU
      }
}

// One LSTM direction over the frame sequence; rows of x are time steps.
inline Eigen::MatrixXd lstm_direction(const LstmWeights& lw,
                                      const Eigen::MatrixXd& x, bool reverse) {
  const Eigen::Index t_count = x.rows();
  const Eigen::Index hid = lw.w_hh.cols();
  Eigen::MatrixXd out(t_count, hid);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(hid);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(hid);
  for (Eigen::Index step = 0; step < t_count; ++step) {
    const Eigen::Index t = reverse ? t_count - 1 - step : step;
    const Eigen::VectorXd z = lw.w_ih * x.row(t).transpose() + lw.w_hh * h + lw.bias;
    for (Eigen::Index k = 0; k < hid; ++k) {
      const double ig = sigmoid(z(k));
      const double fg = sigmoid(z(hid + k));
      const double gg = std::tanh(z(2 * hid + k));
      const double og = sigmoid(z(3 * hid + k));
      c(k) = fg * c(k) + ig * gg;
      h(k) = og * std::tanh(c(k));
    }
    out.row(t) = h.transpose();
  }
  return out;
}

}  // namespace detail

/// Frame-level quality scores and their mean. The mel input must be wide
/// enough that the conv stack lands exactly on the stored LSTM input size.
inline MosScore score_utterance(const Scorer& s, const MelSpectrogram& m) {
  if (m.num_frames() < 1)
    throw Error(ErrorKind::ShapeMismatch, "empty mel spectrogram");

  int t_dim = static_cast<int>(m.num_frames());
  int w_dim = static_cast<int>(m.num_mels());
  std::vector<double> feat(static_cast<std::size_t>(t_dim) * w_dim);
  for (int t = 0; t < t_dim; ++t)
    for (int j = 0; j < w_dim; ++j)
      feat[static_cast<std::size_t>(t) * w_dim + j] = m.frames(t, j);

  std::vector<double> next;
  for (std::size_t i = 0; i < s.spec.conv_layers.size(); ++i) {
    int ot = 0, ow = 0;
    detail::conv_forward(s.spec.conv_layers[i], s.conv[i], feat, t_dim, w_dim,
                         next, ot, ow);
    feat.swap(next);
    t_dim = ot;
    w_dim = ow;
  }
  const int ch = s.spec.conv_layers.back().out_ch;
  if (ch * w_dim != s.spec.blstm.input_size)
    throw Error(ErrorKind::ShapeMismatch,
                "conv output does not match the LSTM input size");

  Eigen::MatrixXd seq(t_dim, s.spec.blstm.input_size);
  for (int t = 0; t < t_dim; ++t)
    for (int c = 0; c < ch; ++c)
      for (int j = 0; j < w_dim; ++j)
        seq(t, c * w_dim + j) =
            feat[(static_cast<std::size_t>(c) * t_dim + t) * w_dim + j];

  const Eigen::MatrixXd fwd = detail::lstm_direction(s.lstm_fwd, seq, false);
  const Eigen::MatrixXd bwd = detail::lstm_direction(s.lstm_bwd, seq, true);

  MosScore score;
  score.frame_scores.resize(static_cast<std::size_t>(t_dim));
  const Eigen::Index hid = s.spec.blstm.hidden_size;
  for (int t = 0; t < t_dim; ++t) {
    Eigen::VectorXd v(2 * hid);
    v << fwd.row(t).transpose(), bwd.row(t).transpose();
    for (std::size_t l = 0; l < s.fc.size(); ++l) {
      v = s.fc[l].w * v + s.fc[l].b;
      if (l + 1 < s.fc.size()) v = v.cwiseMax(0.0);
    }
    const double clamped =
        std::min(std::max(v(0), s.spec.clamp_lo), s.spec.clamp_hi);
    score.frame_scores[static_cast<std::size_t>(t)] = clamped;
  }
  double acc = 0.0;
  for (double f : score.frame_scores) acc += f;
  score.utterance_score = acc / static_cast<double>(score.frame_scores.size());
  return score;
}

/// Naturalness-deviation loss: weighted absolute difference of the two
/// utterance-level scores.
inline double mos_loss(const Scorer& s, const MelSpectrogram& x_mel,
                       const MelSpectrogram& y_mel, double lambda_mos) {
  const double sx = score_utterance(s, x_mel).utterance_score;
  const double sy = score_utterance(s, y_mel).utterance_score;
  return lambda_mos * std::abs(sx - sy);
}

namespace detail {

inline void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 16) & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 24) & 0xff));
}

inline void put_f32(std::vector<unsigned char>& out, float v) {
  std::uint32_t u;
  std::memcpy(&u, &v, 4);
  put_u32(out, u);
}

struct ByteReader {
  const unsigned char* p;
  std::size_t len;
  std::size_t pos = 0;

  std::uint32_t u32() {
    if (pos + 4 > len)
      throw Error(ErrorKind::ShapeMismatch, "scorer file shorter than header claims");
    std::uint32_t v = static_cast<std::uint32_t>(p[pos]) |
                      (static_cast<std::uint32_t>(p[pos + 1]) << 8) |
                      (static_cast<std::uint32_t>(p[pos + 2]) << 16) |
                      (static_cast<std::uint32_t>(p[pos + 3]) << 24);
    pos += 4;
    return v;
  }
  float f32() {
    const std::uint32_t u = u32();
    float f;
    std::memcpy(&f, &u, 4);
    return f;
  }
};

inline void put_tensor(std::vector<unsigned char>& out, const double* v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) put_f32(out, static_cast<float>(v[i]));
}

inline std::vector<double> take_tensor(ByteReader& r, std::size_t n) {
  if (n > (r.len - r.pos) / 4)
    throw Error(ErrorKind::ShapeMismatch, "scorer file shorter than header claims");
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(r.f32());
  return t;
}

inline LstmWeights take_lstm(ByteReader& r, int input, int hidden) {
  const std::size_t need = static_cast<std::size_t>(4) * hidden * (input + hidden + 1);
  if (need > (r.len - r.pos) / 4)
    throw Error(ErrorKind::ShapeMismatch, "scorer file shorter than header claims");
  LstmWeights lw;
  lw.w_ih.resize(4 * hidden, input);
  lw.w_hh.resize(4 * hidden, hidden);
  lw.bias.resize(4 * hidden);
  for (Eigen::Index i = 0; i < lw.w_ih.rows(); ++i)
    for (Eigen::Index j = 0; j < lw.w_ih.cols(); ++j) lw.w_ih(i, j) = r.f32();
  for (Eigen::Index i = 0; i < lw.w_hh.rows(); ++i)
    for (Eigen::Index j = 0; j < lw.w_hh.cols(); ++j) lw.w_hh(i, j) = r.f32();
  for (Eigen::Index i = 0; i < lw.bias.size(); ++i) lw.bias(i) = r.f32();
  return lw;
}

inline void put_lstm(std::vector<unsigned char>& out, const LstmWeights& lw) {
  for (Eigen::Index i = 0; i < lw.w_ih.rows(); ++i)
    for (Eigen::Index j = 0; j < lw.w_ih.cols(); ++j)
      put_f32(out, static_cast<float>(lw.w_ih(i, j)));
  for (Eigen::Index i = 0; i < lw.w_hh.rows(); ++i)
    for (Eigen::Index j = 0; j < lw.w_hh.cols(); ++j)
      put_f32(out, static_cast<float>(lw.w_hh(i, j)));
  for (Eigen::Index i = 0; i < lw.bias.size(); ++i)
    put_f32(out, static_cast<float>(lw.bias(i)));
}

}  // namespace detail

inline std::vector<unsigned char> serialize_scorer(const Scorer& s) {
  using namespace detail;
  std::vector<unsigned char> out;
  out.insert(out.end(), {'P', 'L', 'W', 'S'});
  put_u32(out, 1);
  put_u32(out, static_cast<std::uint32_t>(s.spec.conv_layers.size()));
  for (const ConvSpec& c : s.spec.conv_layers) {
    put_u32(out, static_cast<std::uint32_t>(c.in_ch));
    put_u32(out, static_cast<std::uint32_t>(c.out_ch));
    put_u32(out, static_cast<std::uint32_t>(c.kh));
    put_u32(out, static_cast<std::uint32_t>(c.kw));
    put_u32(out, static_cast<std::uint32_t>(c.sh));
    put_u32(out, static_cast<std::uint32_t>(c.sw));
  }
  put_u32(out, static_cast<std::uint32_t>(s.spec.blstm.input_size));
  put_u32(out, static_cast<std::uint32_t>(s.spec.blstm.hidden_size));
  put_u32(out, static_cast<std::uint32_t>(s.spec.fc.size()));
  for (const FcSpec& f : s.spec.fc) {
    put_u32(out, static_cast<std::uint32_t>(f.in));
    put_u32(out, static_cast<std::uint32_t>(f.out));
  }
  put_f32(out, static_cast<float>(s.spec.clamp_lo));
  put_f32(out, static_cast<float>(s.spec.clamp_hi));
  for (std::size_t i = 0; i < s.conv.size(); ++i) {
    put_tensor(out, s.conv[i].w.data(), s.conv[i].w.size());
    put_tensor(out, s.conv[i].b.data(), s.conv[i].b.size());
  }
  put_lstm(out, s.lstm_fwd);
  put_lstm(out, s.lstm_bwd);
  for (const FcWeights& f : s.fc) {
    for (Eigen::Index i = 0; i < f.w.rows(); ++i)
      for (Eigen::Index j = 0; j < f.w.cols(); ++j)
        put_f32(out, static_cast<float>(f.w(i, j)));
    for (Eigen::Index i = 0; i < f.b.size(); ++i)
      put_f32(out, static_cast<float>(f.b(i)));
  }
  put_u32(out, crc32(out.data(), out.size()));
  return out;
}

inline void save_scorer(const std::string& path, const Scorer& s) {
  const std::vector<unsigned char> bytes = serialize_scorer(s);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f)
    throw Error(ErrorKind::FileNotFound, "cannot write " + path);
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
}

inline Scorer parse_scorer(const std::vector<unsigned char>& bytes) {
  using namespace detail;
  if (bytes.size() < 12)
    throw Error(ErrorKind::ShapeMismatch, "scorer file too small");
  const std::uint32_t stored_crc =
      static_cast<std::uint32_t>(bytes[bytes.size() - 4]) |
      (static_cast<std::uint32_t>(bytes[bytes.size() - 3]) << 8) |
      (static_cast<std::uint32_t>(bytes[bytes.size() - 2]) << 16) |
      (static_cast<std::uint32_t>(bytes[bytes.size() - 1]) << 24);
  if (crc32(bytes.data(), bytes.size() - 4) != stored_crc)
    throw Error(ErrorKind::BadChecksum, "scorer file checksum mismatch");

  ByteReader r{bytes.data(), bytes.size() - 4};
  if (std::memcmp(bytes.data(), "PLWS", 4) != 0)
    throw Error(ErrorKind::UnsupportedVersion, "not a scorer weights container");
  r.pos = 4;
  const std::uint32_t version = r.u32();
  if (version != 1)
    throw Error(ErrorKind::UnsupportedVersion,
                "scorer container version " + std::to_string(version));

  Scorer s;
  const std::uint32_t num_conv = r.u32();
  if (num_conv > 64)
    throw Error(ErrorKind::ShapeMismatch, "implausible conv layer count");
  s.spec.conv_layers.resize(num_conv);
  for (ConvSpec& c : s.spec.conv_layers) {
    c.in_ch = static_cast<int>(r.u32());
    c.out_ch = static_cast<int>(r.u32());
    c.kh = static_cast<int>(r.u32());
    c.kw = static_cast<int>(r.u32());
    c.sh = static_cast<int>(r.u32());
    c.sw = static_cast<int>(r.u32());
    if (c.in_ch < 1 || c.out_ch < 1 || c.kh < 1 || c.kw < 1 || c.sh < 1 || c.sw < 1)
      throw Error(ErrorKind::ShapeMismatch, "conv spec fields must be positive");
  }
  s.spec.blstm.input_size = static_cast<int>(r.u32());
  s.spec.blstm.hidden_size = static_cast<int>(r.u32());
  if (s.spec.blstm.input_size < 1 || s.spec.blstm.input_size > (1 << 20) ||
      s.spec.blstm.hidden_size < 1 || s.spec.blstm.hidden_size > (1 << 20))
    throw Error(ErrorKind::ShapeMismatch, "implausible blstm dimensions");
  const std::uint32_t num_fc = r.u32();
  if (num_fc > 64)
    throw Error(ErrorKind::ShapeMismatch, "implausible fc layer count");
  s.spec.fc.resize(num_fc);
  for (FcSpec& f : s.spec.fc) {
    f.in = static_cast<int>(r.u32());
    f.out = static_cast<int>(r.u32());
    if (f.in < 1 || f.out < 1)
      throw Error(ErrorKind::ShapeMismatch, "fc spec fields must be positive");
  }
  s.spec.clamp_lo = r.f32();
  s.spec.clamp_hi = r.f32();

  for (const ConvSpec& c : s.spec.conv_layers) {
    ConvWeights cw;
    cw.w = take_tensor(r, static_cast<std::size_t>(c.out_ch) * c.in_ch * c.kh * c.kw);
    cw.b = take_tensor(r, static_cast<std::size_t>(c.out_ch));
    s.conv.push_back(std::move(cw));
  }
  s.lstm_fwd = take_lstm(r, s.spec.blstm.input_size, s.spec.blstm.hidden_size);
  s.lstm_bwd = take_lstm(r, s.spec.blstm.input_size, s.spec.blstm.hidden_size);
  for (const FcSpec& f : s.spec.fc) {
    const std::size_t need = static_cast<std::size_t>(f.out) * f.in + f.out;
    if (need > (r.len - r.pos) / 4)
      throw Error(ErrorKind::ShapeMismatch, "scorer file shorter than header claims");
    FcWeights fw;
    fw.w.resize(f.out, f.in);
    fw.b.resize(f.out);
    for (Eigen::Index i = 0; i < fw.w.rows(); ++i)
      for (Eigen::Index j = 0; j < fw.w.cols(); ++j) fw.w(i, j) = r.f32();
    for (Eigen::Index i = 0; i < fw.b.size(); ++i) fw.b(i) = r.f32();
    s.fc.push_back(std::move(fw));
  }
  if (r.pos != r.len)
    throw Error(ErrorKind::ShapeMismatch, "trailing bytes after tensors");
  s.validate();
  return s;
}

inline Scorer load_scorer(const std::string& weights_path) {
  std::ifstream in(weights_path, std::ios::binary);
  if (!in)
    throw Error(ErrorKind::FileNotFound, "cannot open " + weights_path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return parse_scorer(bytes);
}

/// Deterministic scorer with the reference spec and small random weights
/// in [-0.1, 0.1]; same seed, same scorer. The final bias sits at
/// mid-scale (3 +- 0.1) so stub scores land inside the clamp range instead
/// of saturating at the floor. Weight values are rounded through float32
/// so that saving and reloading is bit-exact.
inline Scorer stub_scorer(std::uint64_t seed) {
  Scorer s;
  s.spec = ScorerSpec::reference();

  // splitmix64: tiny, fully specified, and independent of libstdc++
  // distribution internals.
  std::uint64_t state = seed;
  auto draw = [&state](double offset) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z = z ^ (z >> 31);
    const double u = static_cast<double>(z >> 11) / 9007199254740992.0;  // [0,1)
    return static_cast<double>(static_cast<float>((u * 2.0 - 1.0) * 0.1 + offset));
  };
  auto next_weight = [&draw]() { return draw(0.0); };

  for (const ConvSpec& c : s.spec.conv_layers) {
    detail::ConvWeights cw;
    cw.w.resize(static_cast<std::size_t>(c.out_ch) * c.in_ch * c.kh * c.kw);
    cw.b.resize(static_cast<std::size_t>(c.out_ch));
    for (double& v : cw.w) v = next_weight();
    for (double& v : cw.b) v = next_weight();
    s.conv.push_back(std::move(cw));
  }
  auto make_lstm = [&](int input, int hidden) {
    detail::LstmWeights lw;
    lw.w_ih.resize(4 * hidden, input);
    lw.w_hh.resize(4 * hidden, hidden);
    lw.bias.resize(4 * hidden);
    for (Eigen::Index i = 0; i < lw.w_ih.rows(); ++i)
      for (Eigen::Index j = 0; j < lw.w_ih.cols(); ++j) lw.w_ih(i, j) = next_weight();
    for (Eigen::Index i = 0; i < lw.w_hh.rows(); ++i)
      for (Eigen::Index j = 0; j < lw.w_hh.cols(); ++j) lw.w_hh(i, j) = next_weight();
    for (Eigen::Index i = 0; i < lw.bias.size(); ++i) lw.bias(i) = next_weight();
    return lw;
  };
  s.lstm_fwd = make_lstm(s.spec.blstm.input_size, s.spec.blstm.hidden_size);
  s.lstm_bwd = make_lstm(s.spec.blstm.input_size, s.spec.blstm.hidden_size);
  for (std::size_t l = 0; l < s.spec.fc.size(); ++l) {
    const FcSpec& f = s.spec.fc[l];
    const bool last = l + 1 == s.spec.fc.size();
    detail::FcWeights fw;
    fw.w.resize(f.out, f.in);
    fw.b.resize(f.out);
    for (Eigen::Index i = 0; i < fw.w.rows(); ++i)
      for (Eigen::Index j = 0; j < fw.w.cols(); ++j) fw.w(i, j) = next_weight();
    for (Eigen::Index i = 0; i < fw.b.size(); ++i)
      fw.b(i) = draw(last ? (s.spec.clamp_lo + s.spec.clamp_hi) / 2.0 : 0.0);
    s.fc.push_back(std::move(fw));
  }
  s.validate();
  return s;
}

}  // namespace perceptloss
