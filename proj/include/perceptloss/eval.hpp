// perceptloss/eval.hpp

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

// Batch evaluation over (source, converted) pairs. Pair computations are
// pure and independent; workers pull pairs off a shared index and results
// are collected in manifest order, so output bytes do not depend on the
// worker count. One bad pair never aborts the batch: its failure is
// recorded in the report.

#pragma once

#include <nlohmann/json.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "perceptloss/config.hpp"
#include "perceptloss/error.hpp"
#include "perceptloss/manifest.hpp"
#include "perceptloss/mos.hpp"
#include "perceptloss/pitch.hpp"
#include "perceptloss/resample.hpp"
#include "perceptloss/stoi.hpp"
#include "perceptloss/wav_io.hpp"

namespace perceptloss {

struct PairReport {
  std::string pair_id;
  std::optional<double> stoi_score_v;
  std::optional<double> stoi_loss_v;
  std::optional<double> pcc_loss_v;
  std::optional<double> pmos_src;
  std::optional<double> pmos_cnv;
  std::optional<double> mos_loss_v;
  std::string error;  // empty when the pair fully succeeded

  // contours kept only when an f0 dump was requested
  std::optional<F0Contour> f0_src;
  std::optional<F0Contour> f0_cnv;

  bool succeeded() const { return error.empty(); }
};

struct MetricSummary {
  double mean = 0.0;
  double std_dev = 0.0;  // population standard deviation
  std::size_t count = 0;
  std::size_t failures = 0;
};

struct SummaryReport {
  std::map<std::string, MetricSummary> metrics;
  std::size_t pairs_total = 0;
};

namespace detail {

inline std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string sanitize_csv(std::string s) {
  for (char& c : s) {
    if (c == ',') c = ';';
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

// Appends "<metric>: <KindName>" style notes without aborting the pair.
inline void note_failure(std::string& err, const char* metric, const std::exception& e) {
  if (!err.empty()) err += "; ";
  err += metric;
  err += ": ";
  err += e.what();
}

}  // namespace detail

/// Evaluates one manifest pair with an already-loaded scorer (pass null to
/// skip the pMOS metrics). Metric failures land in .error; only the
/// metrics that succeeded are populated.
inline PairReport evaluate_pair(const PairEntry& e, const EvalConfig& cfg,
                                const Scorer* scorer, bool want_contours = false) {
  PairReport r;
  r.pair_id = e.pair_id;

  Waveform src, cnv;
  try {
    src = resample(load_wav(e.source_path), cfg.mel_params.sample_rate_hz);
    cnv = resample(load_wav(e.converted_path), cfg.mel_params.sample_rate_hz);
  } catch (const std::exception& ex) {
    r.error = detail::sanitize_csv(ex.what());
    return r;
  }

  try {
    r.stoi_score_v = stoi_score(src, cnv, cfg.stoi_params);
    r.stoi_loss_v =
        stoi_loss(src, cnv, cfg.stoi_params, cfg.lambdas.stoi, cfg.lambdas.mse).total;
  } catch (const std::exception& ex) {
    detail::note_failure(r.error, "stoi", ex);
  }

  try {
    const F0Contour fa = extract_f0(src, cfg.f0_params);
    const F0Contour fb = extract_f0(cnv, cfg.f0_params);
    r.pcc_loss_v = pcc_loss(fa, fb);
    if (want_contours) {
      r.f0_src = fa;
      r.f0_cnv = fb;
    }
  } catch (const std::exception& ex) {
    detail::note_failure(r.error, "pcc", ex);
  }

  if (scorer != nullptr) {
    try {
      const MelSpectrogram ms = mel_spectrogram(src, cfg.mel_params);
      const MelSpectrogram mc = mel_spectrogram(cnv, cfg.mel_params);
      r.pmos_src = score_utterance(*scorer, ms).utterance_score;
      r.pmos_cnv = score_utterance(*scorer, mc).utterance_score;
      r.mos_loss_v = cfg.lambdas.mos * std::abs(*r.pmos_src - *r.pmos_cnv);
    } catch (const std::exception& ex) {
      detail::note_failure(r.error, "pmos", ex);
    }
  }

  r.error = detail::sanitize_csv(r.error);
  return r;
}

/// Spec-shaped convenience overload: loads the scorer named by the config
/// (if any) for this single pair.
inline PairReport evaluate_pair(const PairEntry& e, const EvalConfig& cfg) {
  if (cfg.scorer_weights_path) {
    const Scorer s = load_scorer(*cfg.scorer_weights_path);
    return evaluate_pair(e, cfg, &s, cfg.dump_f0);
  }
  return evaluate_pair(e, cfg, nullptr, cfg.dump_f0);
}

/// The value that feeds l_p in the composite objectives, per the
/// configured perceptual-loss selection; empty when that metric failed.
inline std::optional<double> perceptual_term(const PairReport& r,
                                             PerceptualKind kind) {
  switch (kind) {
    case PerceptualKind::Stoi: return r.stoi_loss_v;
    case PerceptualKind::Pmos: return r.mos_loss_v;
    case PerceptualKind::Pcc:  return r.pcc_loss_v;
  }
  return std::nullopt;
}

/// Per-metric mean and population standard deviation over the pairs where
/// the metric was computed; everything else counts as a failure for that
/// metric.
inline SummaryReport aggregate_reports(const std::vector<PairReport>& rs) {
  SummaryReport summary;
  summary.pairs_total = rs.size();
  const std::vector<std::pair<const char*, std::optional<double> PairReport::*>>
      metrics = {{"stoi_score", &PairReport::stoi_score_v},
                 {"stoi_loss", &PairReport::stoi_loss_v},
                 {"pcc_loss", &PairReport::pcc_loss_v},
                 {"pmos_src", &PairReport::pmos_src},
                 {"pmos_cnv", &PairReport::pmos_cnv},
                 {"mos_loss", &PairReport::mos_loss_v}};
  for (const auto& [name, member] : metrics) {
    bool attempted = false;
    std::vector<double> values;
    for (const PairReport& r : rs)
      if (r.*member) {
        values.push_back(*(r.*member));
        attempted = true;
      }
    // A metric nobody produced (e.g. no scorer configured) is omitted
    // entirely rather than reported as all-failed.
    if (!attempted) continue;
    MetricSummary ms;
    ms.count = values.size();
    ms.failures = rs.size() - values.size();
    double acc = 0.0;
    for (double v : values) acc += v;
    ms.mean = acc / static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) sq += (v - ms.mean) * (v - ms.mean);
    ms.std_dev = std::sqrt(sq / static_cast<double>(values.size()));
    summary.metrics[name] = ms;
  }
  return summary;
}

inline void write_pairs_csv(const std::string& path,
                            const std::vector<PairReport>& rs) {
  std::ofstream out(path, std::ios::trunc);
  if (!out)
    throw Error(ErrorKind::FileNotFound, "cannot write " + path);
  out << "pair_id,stoi_score,stoi_loss,pcc_loss,pmos_src,pmos_cnv,mos_loss,error\n";
  auto cell = [](const std::optional<double>& v) {
    return v ? detail::g17(*v) : std::string();
  };
  for (const PairReport& r : rs)
    out << detail::sanitize_csv(r.pair_id) << ',' << cell(r.stoi_score_v) << ','
        << cell(r.stoi_loss_v) << ',' << cell(r.pcc_loss_v) << ','
        << cell(r.pmos_src) << ',' << cell(r.pmos_cnv) << ','
        << cell(r.mos_loss_v) << ',' << r.error << '\n';
}

inline nlohmann::json summary_to_json(const SummaryReport& s) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, m] : s.metrics)
    j[name] = {{"mean", m.mean},
               {"std", m.std_dev},
               {"count", m.count},
               {"failures", m.failures}};
  return j;
}

inline void write_summary_json(const std::string& path, const SummaryReport& s) {
  std::ofstream out(path, std::ios::trunc);
  if (!out)
    throw Error(ErrorKind::FileNotFound, "cannot write " + path);
  out << summary_to_json(s).dump(2) << '\n';
}

/// Runs the whole batch: worker threads pull pairs off a shared counter,
/// reports land in manifest order, artifacts are written serially.
/// Returns the reports; callers decide the exit status from them.
inline std::vector<PairReport> run_batch(const std::vector<PairEntry>& entries,
                                         const EvalConfig& cfg,
                                         const Scorer* scorer) {
  std::vector<PairReport> reports(entries.size());
  const int workers =
      std::max(1, std::min<int>(cfg.worker_count,
                                static_cast<int>(entries.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= entries.size()) break;
      reports[i] = evaluate_pair(entries[i], cfg, scorer, cfg.dump_f0);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  return reports;
}

/// Writes pairs.csv, summary.json and the optional f0/ dumps under out_dir.
inline void write_batch_outputs(const std::string& out_dir,
                                const std::vector<PairReport>& reports) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  write_pairs_csv((fs::path(out_dir) / "pairs.csv").string(), reports);
  write_summary_json((fs::path(out_dir) / "summary.json").string(),
                     aggregate_reports(reports));
  bool any_contours = false;
  for (const PairReport& r : reports)
    if (r.f0_src || r.f0_cnv) any_contours = true;
  if (any_contours) {
    fs::create_directories(fs::path(out_dir) / "f0");
    for (const PairReport& r : reports) {
      if (r.f0_src)
        write_contour_csv((fs::path(out_dir) / "f0" / (r.pair_id + "_src.csv")).string(),
                          *r.f0_src);
      if (r.f0_cnv)
        write_contour_csv((fs::path(out_dir) / "f0" / (r.pair_id + "_cnv.csv")).string(),
                          *r.f0_cnv);
    }
  }
}

}  // namespace perceptloss
