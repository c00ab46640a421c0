// tests/test_eval.cpp

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

#include <fstream>
#include <sstream>

#include "perceptloss/eval.hpp"
#include "testing/fixtures.hpp"

using namespace perceptloss;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// fixture corpus: identity pair + degraded pair + missing-file pair
struct Corpus {
  testing::TempDir dir{"eval"};
  std::vector<PairEntry> entries;
  EvalConfig cfg;

  Corpus() {
    const Waveform a = testing::chirp(140.0, 260.0, 1.2, 24000);
    const Waveform b = testing::chirp(180.0, 320.0, 1.2, 24000);
    testing::Rng rng(5);
    const Waveform noise = testing::white_noise(1.2, 24000, rng, 1.0);
    const Waveform b_noisy = testing::add_noise_at_snr(b, noise, 10.0);

    save_wav(dir.file("a.wav"), a);
    save_wav(dir.file("b.wav"), b);
    save_wav(dir.file("b_noisy.wav"), b_noisy);

    const Scorer s = stub_scorer(7);
    save_scorer(dir.file("w.plws"), s);
    cfg.scorer_weights_path = dir.file("w.plws");

    entries = {
        {"identity", dir.file("a.wav"), dir.file("a.wav")},
        {"degraded", dir.file("b.wav"), dir.file("b_noisy.wav")},
        {"missing", dir.file("a.wav"), dir.file("gone.wav")},
    };
  }
};

}  // namespace

TEST_CASE("an identity pair is perfect on every metric") {
  Corpus c;
  const Scorer s = load_scorer(*c.cfg.scorer_weights_path);
  const PairReport r = evaluate_pair(c.entries[0], c.cfg, &s);
  REQUIRE(r.succeeded());
  REQUIRE(*r.stoi_score_v == Catch::Approx(1.0).margin(1e-9));
  REQUIRE(*r.stoi_loss_v == Catch::Approx(0.0).margin(1e-9));
  REQUIRE(*r.pcc_loss_v == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(*r.mos_loss_v == 0.0);
  REQUIRE(*r.pmos_src == *r.pmos_cnv);
}

TEST_CASE("a missing converted file is recorded, not fatal") {
  Corpus c;
  const PairReport r = evaluate_pair(c.entries[2], c.cfg, nullptr);
  REQUIRE(!r.succeeded());
  REQUIRE(!r.stoi_score_v);
  REQUIRE(!r.pcc_loss_v);
  REQUIRE(r.error.find("FileNotFound") != std::string::npos);
}

TEST_CASE("degraded pairs land between the extremes") {
  Corpus c;
  const Scorer s = load_scorer(*c.cfg.scorer_weights_path);
  const PairReport r = evaluate_pair(c.entries[1], c.cfg, &s);
  REQUIRE(r.succeeded());
  REQUIRE(*r.stoi_score_v < 1.0);
  REQUIRE(*r.stoi_score_v > 0.2);
  REQUIRE(*r.stoi_loss_v > 0.0);
  REQUIRE(*r.pcc_loss_v >= 0.0);
  REQUIRE(*r.pcc_loss_v < 0.5);  // same underlying pitch trajectory
}

TEST_CASE("the configured perceptual loss feeds the objective") {
  PairReport r;
  r.stoi_loss_v = 0.31;
  r.mos_loss_v = 0.07;
  r.pcc_loss_v = 0.54;
  REQUIRE(perceptual_term(r, PerceptualKind::Stoi) == 0.31);
  REQUIRE(perceptual_term(r, PerceptualKind::Pmos) == 0.07);
  REQUIRE(perceptual_term(r, PerceptualKind::Pcc) == 0.54);

  GeneratorComponents c;
  c.l_adv = 0.5;
  c.l_p = *perceptual_term(r, PerceptualKind::Pcc);
  const LossBreakdown b = generator_objective(c, LambdaWeights{});
  REQUIRE(b.total == Catch::Approx(0.5 + 0.54).margin(1e-15));

  PairReport failed;
  failed.error = "stoi: LengthMismatch";
  REQUIRE(!perceptual_term(failed, PerceptualKind::Stoi));
}

TEST_CASE("aggregation arithmetic") {
  SECTION("single value has zero deviation") {
    PairReport r;
    r.pair_id = "x";
    r.stoi_score_v = 0.9;
    const SummaryReport s = aggregate_reports({r});
    REQUIRE(s.metrics.at("stoi_score").mean == 0.9);
    REQUIRE(s.metrics.at("stoi_score").std_dev == 0.0);
    REQUIRE(s.metrics.at("stoi_score").count == 1);
    REQUIRE(s.metrics.at("stoi_score").failures == 0);
  }
  SECTION("mean 3, std 1 for {2, 4}") {
    PairReport a, b;
    a.pcc_loss_v = 2.0;
    b.pcc_loss_v = 4.0;
    const SummaryReport s = aggregate_reports({a, b});
    REQUIRE(s.metrics.at("pcc_loss").mean == 3.0);
    REQUIRE(s.metrics.at("pcc_loss").std_dev == 1.0);
  }
  SECTION("failures count against the metric") {
    PairReport ok, bad;
    ok.stoi_score_v = 0.8;
    bad.error = "FileNotFound: gone.wav";
    const SummaryReport s = aggregate_reports({ok, bad});
    REQUIRE(s.metrics.at("stoi_score").count == 1);
    REQUIRE(s.metrics.at("stoi_score").failures == 1);
    REQUIRE(s.metrics.at("stoi_score").mean == 0.8);
  }
  SECTION("metrics nobody attempted are omitted") {
    PairReport r;
    r.stoi_score_v = 0.5;
    const SummaryReport s = aggregate_reports({r});
    REQUIRE(s.metrics.count("pmos_src") == 0);
    REQUIRE(s.metrics.count("mos_loss") == 0);
  }
}

TEST_CASE("batch outputs are identical across worker counts") {
  Corpus c;
  const Scorer s = load_scorer(*c.cfg.scorer_weights_path);

  EvalConfig cfg1 = c.cfg;
  cfg1.worker_count = 1;
  EvalConfig cfg4 = c.cfg;
  cfg4.worker_count = 4;

  const auto r1 = run_batch(c.entries, cfg1, &s);
  const auto r4 = run_batch(c.entries, cfg4, &s);

  const std::string d1 = c.dir.file("out1");
  const std::string d4 = c.dir.file("out4");
  write_batch_outputs(d1, r1);
  write_batch_outputs(d4, r4);
  REQUIRE(slurp(d1 + "/pairs.csv") == slurp(d4 + "/pairs.csv"));
  REQUIRE(slurp(d1 + "/summary.json") == slurp(d4 + "/summary.json"));
  REQUIRE(slurp(d1 + "/pairs.csv").find("identity,") != std::string::npos);
}

TEST_CASE("batch reports equal direct per-pair evaluation") {
  Corpus c;
  const Scorer s = load_scorer(*c.cfg.scorer_weights_path);
  const auto batch = run_batch(c.entries, c.cfg, &s);
  REQUIRE(batch.size() == 3);
  for (std::size_t i = 0; i < c.entries.size(); ++i) {
    const PairReport direct = evaluate_pair(c.entries[i], c.cfg, &s);
    REQUIRE(batch[i].pair_id == direct.pair_id);
    REQUIRE(batch[i].stoi_score_v == direct.stoi_score_v);
    REQUIRE(batch[i].stoi_loss_v == direct.stoi_loss_v);
    REQUIRE(batch[i].pcc_loss_v == direct.pcc_loss_v);
    REQUIRE(batch[i].pmos_src == direct.pmos_src);
    REQUIRE(batch[i].pmos_cnv == direct.pmos_cnv);
    REQUIRE(batch[i].mos_loss_v == direct.mos_loss_v);
    REQUIRE(batch[i].error == direct.error);
  }
}

TEST_CASE("summary json round-trips against re-aggregated pairs") {
  Corpus c;
  const Scorer s = load_scorer(*c.cfg.scorer_weights_path);
  const auto reports = run_batch(c.entries, c.cfg, &s);
  const std::string out = c.dir.file("round");
  write_batch_outputs(out, reports);

  // parse pairs.csv back and re-aggregate
  std::ifstream in(out + "/pairs.csv");
  std::string line;
  std::getline(in, line);  // header
  std::vector<PairReport> parsed;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        cells.push_back(cur);
        cur.clear();
      } else cur.push_back(ch);
    }
    cells.push_back(cur);
    REQUIRE(cells.size() == 8);
    PairReport r;
    r.pair_id = cells[0];
    auto opt = [](const std::string& sv) {
      return sv.empty() ? std::optional<double>() : std::optional<double>(std::stod(sv));
    };
    r.stoi_score_v = opt(cells[1]);
    r.stoi_loss_v = opt(cells[2]);
    r.pcc_loss_v = opt(cells[3]);
    r.pmos_src = opt(cells[4]);
    r.pmos_cnv = opt(cells[5]);
    r.mos_loss_v = opt(cells[6]);
    r.error = cells[7];
    parsed.push_back(r);
  }
  const nlohmann::json reagg = summary_to_json(aggregate_reports(parsed));
  const nlohmann::json stored = nlohmann::json::parse(slurp(out + "/summary.json"));
  for (auto it = stored.begin(); it != stored.end(); ++it) {
    REQUIRE(reagg.contains(it.key()));
    REQUIRE(std::abs(reagg[it.key()]["mean"].get<double>() -
                     it.value()["mean"].get<double>()) <= 1e-12);
    REQUIRE(std::abs(reagg[it.key()]["std"].get<double>() -
                     it.value()["std"].get<double>()) <= 1e-12);
    REQUIRE(reagg[it.key()]["count"] == it.value()["count"]);
    REQUIRE(reagg[it.key()]["failures"] == it.value()["failures"]);
  }
}

TEST_CASE("contour dumps appear when requested") {
  Corpus c;
  c.cfg.dump_f0 = true;
  const Scorer s = load_scorer(*c.cfg.scorer_weights_path);
  const auto reports = run_batch(c.entries, c.cfg, &s);
  const std::string out = c.dir.file("dumps");
  write_batch_outputs(out, reports);
  REQUIRE(std::filesystem::exists(out + "/f0/identity_src.csv"));
  REQUIRE(std::filesystem::exists(out + "/f0/identity_cnv.csv"));
  REQUIRE(std::filesystem::exists(out + "/f0/degraded_src.csv"));
  REQUIRE(!std::filesystem::exists(out + "/f0/missing_src.csv"));
}
