// perceptloss/config.hpp

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

// Evaluation configuration, read from a JSON file. Every key is optional;
// unset fields keep the defaults below. Unknown keys are rejected so that
// typos do not silently fall back to defaults.
//
// {
//   "lambdas": {"spk":0.1,"aspk":0.5,"sty":1,"cyc":1,"stoi":1,"mse":0.1,
//               "mos":1,"p":1},
//   "stoi":    {"resample_rate_hz":10000,"frame_len":256,"hop":128,
//               "fft_size":512,"num_bands":15,"first_center_hz":150,
//               "seg_len_frames":30,"silent_range_db":40,
//               "apply_clipping":false,"clip_sdr_db":-15,"band_term":"l1"},
//   "f0":      {"min_hz":70,"max_hz":400,"frame_len":1024,"hop":256,
//               "voicing_threshold":0.3},
//   "mel":     {"num_mels":80,"frame_len":1200,"hop":300,"fmin_hz":0,
//               "fmax_hz":12000,"log_floor":1e-5,"sample_rate_hz":24000},
//   "scorer_weights": "weights.plws",
//   "perceptual": "stoi" | "pmos" | "pcc",
//   "workers": 1,
//   "dump_f0": false
// }

#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "perceptloss/dsp.hpp"
#include "perceptloss/error.hpp"
#include "perceptloss/objective.hpp"
#include "perceptloss/pitch.hpp"
#include "perceptloss/stoi.hpp"

namespace perceptloss {

struct EvalConfig {
  LambdaWeights lambdas;
  StoiParams stoi_params;
  F0Params f0_params;
  MelParams mel_params;
  std::optional<std::string> scorer_weights_path;
  PerceptualKind perceptual = PerceptualKind::Stoi;
  int worker_count = 1;
  bool dump_f0 = false;

  void validate() const {
    lambdas.validate();
    if (worker_count < 1)
      throw Error(ErrorKind::ConfigInvalid, "workers must be >= 1");
    if (stoi_params.num_bands < 1 || stoi_params.seg_len_frames < 2)
      throw Error(ErrorKind::ConfigInvalid, "bad stoi parameters");
  }
};

namespace detail {

using json = nlohmann::json;

inline void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                           const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok)
      throw Error(ErrorKind::ConfigInvalid,
                  "unknown key \"" + it.key() + "\" in " + where);
  }
}

template <typename T>
inline void maybe(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

}  // namespace detail

inline EvalConfig parse_config_json(const nlohmann::json& j) {
  using detail::maybe;
  using detail::reject_unknown;
  if (!j.is_object())
    throw Error(ErrorKind::ConfigInvalid, "config root must be an object");
  reject_unknown(j, {"lambdas", "stoi", "f0", "mel", "scorer_weights",
                     "perceptual", "workers", "dump_f0"}, "config");

  EvalConfig cfg;
  if (j.contains("lambdas")) {
    const auto& l = j.at("lambdas");
    reject_unknown(l, {"spk", "aspk", "sty", "cyc", "stoi", "mse", "mos", "p"},
                   "lambdas");
    maybe(l, "spk", cfg.lambdas.spk);
    maybe(l, "aspk", cfg.lambdas.aspk);
    maybe(l, "sty", cfg.lambdas.sty);
    maybe(l, "cyc", cfg.lambdas.cyc);
    maybe(l, "stoi", cfg.lambdas.stoi);
    maybe(l, "mse", cfg.lambdas.mse);
    maybe(l, "mos", cfg.lambdas.mos);
    maybe(l, "p", cfg.lambdas.p);
  }
  if (j.contains("stoi")) {
    const auto& s = j.at("stoi");
    reject_unknown(s, {"resample_rate_hz", "frame_len", "hop", "fft_size",
                       "num_bands", "first_center_hz", "seg_len_frames",
                       "silent_range_db", "apply_clipping", "clip_sdr_db",
                       "band_term"}, "stoi");
    maybe(s, "resample_rate_hz", cfg.stoi_params.resample_rate_hz);
    maybe(s, "frame_len", cfg.stoi_params.frame_len);
    maybe(s, "hop", cfg.stoi_params.hop);
    maybe(s, "fft_size", cfg.stoi_params.fft_size);
    maybe(s, "num_bands", cfg.stoi_params.num_bands);
    maybe(s, "first_center_hz", cfg.stoi_params.first_center_hz);
    maybe(s, "seg_len_frames", cfg.stoi_params.seg_len_frames);
    maybe(s, "silent_range_db", cfg.stoi_params.silent_range_db);
    maybe(s, "apply_clipping", cfg.stoi_params.apply_clipping);
    maybe(s, "clip_sdr_db", cfg.stoi_params.clip_sdr_db);
    if (s.contains("band_term")) {
      const std::string t = s.at("band_term").get<std::string>();
      if (t == "l1") cfg.stoi_params.band_term = BandTerm::L1;
      else if (t == "l2") cfg.stoi_params.band_term = BandTerm::L2;
      else throw Error(ErrorKind::ConfigInvalid, "band_term must be l1 or l2");
    }
  }
  if (j.contains("f0")) {
    const auto& f = j.at("f0");
    reject_unknown(f, {"min_hz", "max_hz", "frame_len", "hop", "voicing_threshold"},
                   "f0");
    maybe(f, "min_hz", cfg.f0_params.f0_min_hz);
    maybe(f, "max_hz", cfg.f0_params.f0_max_hz);
    maybe(f, "frame_len", cfg.f0_params.frame_len);
    maybe(f, "hop", cfg.f0_params.hop);
    maybe(f, "voicing_threshold", cfg.f0_params.voicing_threshold);
  }
  if (j.contains("mel")) {
    const auto& m = j.at("mel");
    reject_unknown(m, {"num_mels", "frame_len", "hop", "fmin_hz", "fmax_hz",
                       "log_floor", "sample_rate_hz"}, "mel");
    maybe(m, "num_mels", cfg.mel_params.num_mels);
    maybe(m, "frame_len", cfg.mel_params.frame_len);
    maybe(m, "hop", cfg.mel_params.hop);
    maybe(m, "fmin_hz", cfg.mel_params.fmin_hz);
    maybe(m, "fmax_hz", cfg.mel_params.fmax_hz);
    maybe(m, "log_floor", cfg.mel_params.log_floor);
    maybe(m, "sample_rate_hz", cfg.mel_params.sample_rate_hz);
  }
  if (j.contains("scorer_weights"))
    cfg.scorer_weights_path = j.at("scorer_weights").get<std::string>();
  if (j.contains("perceptual")) {
    const std::string p = j.at("perceptual").get<std::string>();
    if (p == "stoi") cfg.perceptual = PerceptualKind::Stoi;
    else if (p == "pmos") cfg.perceptual = PerceptualKind::Pmos;
    else if (p == "pcc") cfg.perceptual = PerceptualKind::Pcc;
    else throw Error(ErrorKind::ConfigInvalid, "perceptual must be stoi, pmos or pcc");
  }
  detail::maybe(j, "workers", cfg.worker_count);
  detail::maybe(j, "dump_f0", cfg.dump_f0);
  cfg.validate();
  return cfg;
}

/// Loads the JSON config; relative scorer_weights paths are resolved
/// against the config file's directory.
inline EvalConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::FileNotFound, "cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigInvalid, std::string("config parse: ") + e.what());
  }
  try {
    EvalConfig cfg = parse_config_json(j);
    if (cfg.scorer_weights_path) {
      std::filesystem::path wp(*cfg.scorer_weights_path);
      if (!wp.is_absolute())
        cfg.scorer_weights_path =
            (std::filesystem::path(path).parent_path() / wp).string();
    }
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigInvalid, std::string("config field: ") + e.what());
  }
}

}  // namespace perceptloss
