// perceptloss/wav_io.hpp

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

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "perceptloss/error.hpp"
#include "perceptloss/waveform.hpp"

namespace perceptloss {

enum class SampleFormat { Pcm16, Float32 };

namespace detail {

inline std::uint32_t read_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline std::uint16_t read_u16le(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0]) |
         static_cast<std::uint16_t>(static_cast<std::uint16_t>(p[1]) << 8);
}

inline void put_u32le(std::vector<unsigned char>& out, std::uint32_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 16) & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 24) & 0xff));
}

inline void put_u16le(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
}

inline std::vector<unsigned char> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorKind::FileNotFound, "cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return bytes;
}

}  // namespace detail

/// Reads a RIFF/WAVE file holding 16-bit PCM or 32-bit IEEE float, 1 or 2
/// channels. Stereo is downmixed by channel averaging. 16-bit samples are
/// scaled by 1/32768 so the most negative code maps to -1.0 exactly.
inline Waveform load_wav(const std::string& path) {
  using detail::read_u16le;
  using detail::read_u32le;

  const std::vector<unsigned char> bytes = detail::read_file_bytes(path);
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw Error(ErrorKind::CorruptFile, path + " is not a RIFF/WAVE file");

  std::uint16_t format_tag = 0, channels = 0, bits = 0;
  std::uint32_t sample_rate = 0;
  bool have_fmt = false;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;

  // Walk the chunk list; chunks are word-aligned.
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
    const std::uint32_t chunk_len = read_u32le(bytes.data() + pos + 4);
    pos += 8;
    if (pos + chunk_len > bytes.size())
      throw Error(ErrorKind::CorruptFile, path + ": truncated chunk");
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (chunk_len < 16)
        throw Error(ErrorKind::CorruptFile, path + ": short fmt chunk");
      format_tag = read_u16le(bytes.data() + pos);
      channels = read_u16le(bytes.data() + pos + 2);
      sample_rate = read_u32le(bytes.data() + pos + 4);
      bits = read_u16le(bytes.data() + pos + 14);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data = bytes.data() + pos;
      data_len = chunk_len;
    }
    pos += chunk_len + (chunk_len & 1);
  }

  if (!have_fmt || data == nullptr)
    throw Error(ErrorKind::CorruptFile, path + ": missing fmt or data chunk");
  if (channels < 1 || channels > 2)
    throw Error(ErrorKind::UnsupportedEncoding,
                path + ": only mono and stereo are supported");
  if (sample_rate == 0)
    throw Error(ErrorKind::CorruptFile, path + ": zero sample rate");

  const bool pcm16 = (format_tag == 1 && bits == 16);
  const bool float32 = (format_tag == 3 && bits == 32);
  if (!pcm16 && !float32)
    throw Error(ErrorKind::UnsupportedEncoding,
                path + ": expected 16-bit PCM or 32-bit float");

  const std::size_t bytes_per_sample = pcm16 ? 2 : 4;
  const std::size_t frame_bytes = bytes_per_sample * channels;
  const std::size_t num_frames = data_len / frame_bytes;
  if (num_frames == 0)
    throw Error(ErrorKind::EmptyAudio, path + ": no audio samples");

  Waveform w;
  w.sample_rate_hz = static_cast<int>(sample_rate);
  w.samples.resize(num_frames);
  for (std::size_t i = 0; i < num_frames; ++i) {
    double acc = 0.0;
    for (std::uint16_t c = 0; c < channels; ++c) {
      const unsigned char* p = data + i * frame_bytes + c * bytes_per_sample;
      if (pcm16) {
        const std::int16_t v = static_cast<std::int16_t>(read_u16le(p));
        acc += static_cast<double>(v) / 32768.0;
      } else {
        std::uint32_t u = read_u32le(p);
        float f;
        std::memcpy(&f, &u, 4);
        acc += static_cast<double>(f);
      }
    }
    w.samples[i] = acc / channels;
  }
  for (double& s : w.samples) {
    if (!std::isfinite(s))
      throw Error(ErrorKind::CorruptFile, path + ": non-finite sample values");
    // float WAVs may legally exceed full scale; pin to the nominal range
    if (s > 1.0) s = 1.0;
    if (s < -1.0) s = -1.0;
  }
  return w;
}

namespace detail {

inline void append_sample(std::vector<unsigned char>& out, double v, SampleFormat fmt) {
  if (fmt == SampleFormat::Pcm16) {
    double scaled = v * 32768.0;
    if (scaled > 32767.0) scaled = 32767.0;
    if (scaled < -32768.0) scaled = -32768.0;
    const auto q = static_cast<std::int16_t>(std::lrint(scaled));
    put_u16le(out, static_cast<std::uint16_t>(q));
  } else {
    const float f = static_cast<float>(v);
    std::uint32_t u;
    std::memcpy(&u, &f, 4);
    put_u32le(out, u);
  }
}

inline void write_wav_bytes(const std::string& path,
                            const std::vector<const Waveform*>& chans,
                            SampleFormat fmt) {
  const int rate = chans[0]->sample_rate_hz;
  const std::size_t n = chans[0]->samples.size();
  for (const Waveform* c : chans)
    if (c->sample_rate_hz != rate || c->samples.size() != n)
      throw Error(ErrorKind::LengthMismatch, "channels disagree on rate or length");

  const std::uint16_t channels = static_cast<std::uint16_t>(chans.size());
  const std::uint16_t bits = (fmt == SampleFormat::Pcm16) ? 16 : 32;
  const std::uint16_t tag = (fmt == SampleFormat::Pcm16) ? 1 : 3;
  const std::uint16_t block_align = static_cast<std::uint16_t>(channels * bits / 8);
  const std::uint32_t data_len = static_cast<std::uint32_t>(n * block_align);

  std::vector<unsigned char> out;
  out.reserve(44 + data_len);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put_u32le(out, 36 + data_len);
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  put_u32le(out, 16);
  put_u16le(out, tag);
  put_u16le(out, channels);
  put_u32le(out, static_cast<std::uint32_t>(rate));
  put_u32le(out, static_cast<std::uint32_t>(rate) * block_align);
  put_u16le(out, block_align);
  put_u16le(out, bits);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put_u32le(out, data_len);
  for (std::size_t i = 0; i < n; ++i)
    for (const Waveform* c : chans) append_sample(out, c->samples[i], fmt);

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f)
    throw Error(ErrorKind::FileNotFound, "cannot write " + path);
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
}

}  // namespace detail

inline void save_wav(const std::string& path, const Waveform& w,
                     SampleFormat fmt = SampleFormat::Float32) {
  detail::write_wav_bytes(path, {&w}, fmt);
}

/// Stereo writer, mainly for exercising the downmix path.
inline void save_wav(const std::string& path, const Waveform& left,
                     const Waveform& right, SampleFormat fmt = SampleFormat::Float32) {
  detail::write_wav_bytes(path, {&left, &right}, fmt);
}

}  // namespace perceptloss
