// Copyright 2026 The diffcoref Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>
#include <limits>
#include <sstream>

#include "diffcoref/errors.h"
#include "diffcoref/optim.h"
#include "doctest.h"
#include "test_util.h"

namespace diffcoref {
namespace {

using doctest::Approx;

TEST_CASE("AdaGrad arithmetic") {
  std::vector<double> theta = {0.0, 2.0};
  std::vector<double> accum = {0.0, 0.0};
  std::vector<double> g = {1.0, 0.0};
  AdagradStep(theta, g, accum, 0.1, 0.0);
  CHECK(accum[0] == 1.0);
  CHECK(theta[0] == Approx(-0.1));
  CHECK(theta[1] == 2.0);
  CHECK(accum[1] == 0.0);
  double before = theta[0];
  AdagradStep(theta, g, accum, 0.1, 0.0);
  CHECK(before - theta[0] == Approx(0.1 / std::sqrt(2.0)));
}

TEST_CASE("AdaGrad rejects bad input") {
  std::vector<double> theta = {1.0, 1.0};
  std::vector<double> accum = {0.0, 0.0};
  std::vector<double> g = {1.0, std::numeric_limits<double>::quiet_NaN()};
  CHECK_THROWS_AS(AdagradStep(theta, g, accum, 0.1, 1e-8), NumericError);
  CHECK(theta[0] == 1.0);
  std::vector<double> short_g = {1.0};
  CHECK_THROWS(AdagradStep(theta, short_g, accum, 0.1, 1e-8));
}

TEST_CASE("Beta parsing") {
  CHECK(ParseBeta("1.1832") == Approx(1.1832));
  CHECK(ParseBeta("sqrt1.4") == Approx(std::sqrt(1.4)));
  CHECK(ParseBeta("sqrt(1.8)") == Approx(std::sqrt(1.8)));
  CHECK_THROWS_AS(ParseBeta("-1"), ConfigError);
  CHECK_THROWS_AS(ParseBeta("abc"), ConfigError);
  CHECK(kBetaGrid.front() == Approx(std::sqrt(0.8)));
  CHECK(kBetaGrid.back() == 2.0);
}

TEST_CASE("Training configuration checks") {
  TrainConfig c;
  CHECK_NOTHROW(c.Validate());
  c.learning_rate = 0;
  CHECK_THROWS_AS(c.Validate(), ConfigError);
  c = TrainConfig();
  c.temperature = 0;
  CHECK_THROWS_AS(c.Validate(), ConfigError);
  c = TrainConfig();
  c.epochs = 0;
  CHECK_THROWS_AS(c.Validate(), ConfigError);
  c = TrainConfig();
  c.beta = -1;
  CHECK_THROWS_AS(c.Validate(), ConfigError);
}

TEST_CASE("Annealing schedule") {
  TrainConfig c;
  c.temperature = 1.0;
  c.annealing = {{3, 0.5}, {5, 0.1}};
  CHECK(c.TemperatureAt(1) == 1.0);
  CHECK(c.TemperatureAt(3) == 0.5);
  CHECK(c.TemperatureAt(4) == 0.5);
  CHECK(c.TemperatureAt(9) == 0.1);
  CHECK(c.LossAt(5).temperature == 0.1);
}

Corpus TinyCorpus(int docs, std::uint64_t seed, double noise = 0.1) {
  SyntheticConfig c;
  c.num_docs = docs;
  c.min_mentions = 4;
  c.max_mentions = 8;
  c.min_entities = 1;
  c.max_entities = 3;
  c.mention_dim = 8;
  c.pair_dim = 10;
  c.prototype_dim = 4;
  c.noise = noise;
  c.seed = seed;
  return GenerateSynthetic(c);
}

TrainConfig SmallTraining(LossKind loss) {
  TrainConfig c;
  c.loss = loss;
  c.epochs = 3;
  c.hidden_mention = 6;
  c.hidden_pair = 6;
  c.learning_rate = 0.05;
  return c;
}

TEST_CASE("Training records every epoch and is deterministic") {
  Corpus train = TinyCorpus(8, 1);
  Corpus dev = TinyCorpus(3, 2);
  TrainConfig c = SmallTraining(LossKind::kMentionRanking);
  int calls = 0;
  TrainResult a = Train(train, dev, c, [&](const EpochRecord &) { ++calls; });
  TrainResult b = Train(train, dev, c);
  CHECK(calls == 3);
  CHECK(a.history.epochs.size() == 3);
  CHECK(a.params == b.params);
  CHECK(a.history.best_epoch >= 1);
  double best = a.history.epochs[a.history.best_epoch - 1].dev.conll;
  for (const auto &e : a.history.epochs) CHECK(e.dev.conll <= best);

  std::ostringstream csv;
  a.history.WriteCsv(csv);
  CHECK(csv.str().rfind("epoch,loss,muc,b3,ceaf_m,ceaf_e,blanc,lea,conll", 0) == 0);
}

TEST_CASE("Loss decreases over the first epoch for every loss kind") {
  Corpus train = TinyCorpus(20, 3);
  TrainConfig base = SmallTraining(LossKind::kMentionRanking);
  base.epochs = 2;
  TrainResult pre = Train(train, {}, base);
  for (LossKind kind : {LossKind::kMentionRanking, LossKind::kEntityCentric,
                        LossKind::kBCubed, LossKind::kLea}) {
    TrainConfig c = SmallTraining(kind);
    c.epochs = 2;
    if (kind == LossKind::kBCubed || kind == LossKind::kLea) c.init = pre.params;
    TrainResult r = Train(train, {}, c);
    CHECK(r.history.epochs[1].mean_loss < r.history.epochs[0].mean_loss);
  }
}

TEST_CASE("Training rejects an empty corpus") {
  CHECK_THROWS(Train({}, {}, SmallTraining(LossKind::kMentionRanking)));
}

TEST_CASE("Training with a mismatched initial model") {
  TrainConfig c = SmallTraining(LossKind::kBCubed);
  c.init = ModelParams(ModelDims{3, 3, 2, 2});
  CHECK_THROWS_AS(Train(TinyCorpus(2, 1), {}, c), InputError);
}

TEST_CASE("Gradient checker") {
  Document doc = testing::SmallDocument(6, 4, 5, 9);
  ModelParams params = ModelParams::Random(ModelDims{4, 5, 3, 3}, 0.5, 1);
  LossConfig cfg;
  cfg.kind = LossKind::kMentionRanking;
  CHECK(GradCheck(doc, params, cfg, 1e-5, 1) < 1e-5);
  CHECK_THROWS_AS(GradCheck(doc, params, cfg, 1e-2, 1), ConfigError);
}

}  // namespace
}  // namespace diffcoref
