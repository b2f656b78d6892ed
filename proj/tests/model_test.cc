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
#include <random>
#include <sstream>

#include "diffcoref/errors.h"
#include "diffcoref/model.h"
#include "diffcoref/optim.h"
#include "diffcoref/soft_entity.h"
#include "doctest.h"
#include "test_util.h"

namespace diffcoref {
namespace {

using doctest::Approx;

// Document with the given gold entity per mention (0-based first mention)
// and constant features.
Document MakeDocument(const std::vector<int> &entities, int d_a = 1,
                      int d_p = 1) {
  std::vector<Mention> mentions;
  for (int e : entities) {
    mentions.push_back({MentionType::kNominal, e, std::vector<double>(d_a, 1.0)});
  }
  const int n = static_cast<int>(entities.size());
  Eigen::MatrixXd pairs = Eigen::MatrixXd::Constant(n * (n - 1) / 2, d_p, 0.5);
  return Document("t", d_a, d_p, std::move(mentions), pairs);
}

ModelDims Tiny() { return ModelDims{1, 1, 1, 1}; }

TEST_CASE("Zero parameters give zero scores") {
  Document doc = MakeDocument({0, 0, 2});
  ModelParams params(ModelDims{1, 1, 4, 5});
  Eigen::MatrixXd s = ScorePairs(doc, params);
  CHECK(s.cwiseAbs().maxCoeff() == 0);
  CHECK(params.L1Norm() == 0);
}

TEST_CASE("Hand-set scorer") {
  Document doc = MakeDocument({0, 0});
  ModelParams params(Tiny());
  params.w_mention()(0, 0) = 0.5;
  params.b_mention()(0) = 0.1;
  params.w_pair()(0, 0) = -0.8;
  params.b_pair()(0) = 0.2;
  params.u()(0) = 1.5;
  params.u()(1) = -2.0;
  params.u0() = 0.25;
  params.v()(0) = 2.0;
  params.v0() = 0.3;
  Eigen::MatrixXd s = ScorePairs(doc, params);
  // h_a = tanh(0.6), h_p = tanh(-0.2)
  CHECK(s(0, 0) == Approx(1.374099).epsilon(1e-6));
  CHECK(s(1, 1) == Approx(1.374099).epsilon(1e-6));
  CHECK(s(1, 0) == Approx(1.450325).epsilon(1e-6));
  CHECK(s(0, 1) == 0);
  CHECK(params.L1Norm() == Approx(0.5 + 0.1 + 0.8 + 0.2 + 1.5 + 2 + 0.25 + 2 + 0.3));
}

TEST_CASE("Dimension mismatch") {
  Document doc = MakeDocument({0, 0}, 2, 1);
  CHECK_THROWS_AS(ScorePairs(doc, ModelParams(Tiny())), ShapeError);
}

TEST_CASE("Link probabilities") {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(3, 3);
  s(1, 0) = 1;
  LinkDistribution p = LinkProbabilities(s);
  CHECK(p(1, 0) == Approx(0.7311).epsilon(1e-4));
  CHECK(p(1, 1) == Approx(0.2689).epsilon(1e-4));
  CHECK(p(2, 0) == Approx(1.0 / 3));
  CHECK(p(0, 1) == 0);
  Eigen::MatrixXd shifted = s;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j <= i; ++j) shifted(i, j) += 100 * (i + 1);
  CHECK((LinkProbabilities(shifted).matrix() - p.matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Delta cost cases") {
  std::array<double, 3> alpha = {0.1, 3.0, 1.0};
  std::vector<int> fresh = {2};
  std::vector<int> anaphoric = {0};
  CHECK(DeltaCost(2, 2, fresh, alpha) == 0);
  CHECK(DeltaCost(0, 2, fresh, alpha) == 0.1);
  CHECK(DeltaCost(2, 2, anaphoric, alpha) == 3.0);
  CHECK(DeltaCost(1, 2, anaphoric, alpha) == 1.0);
  CHECK(DeltaCost(0, 2, anaphoric, alpha) == 0);
}

TEST_CASE("Gamma cost cases") {
  std::array<double, 3> gamma = {0.1, 3.0, 1.0};
  CHECK(GammaCost(2, 2, 2, gamma) == 0);
  CHECK(GammaCost(0, 2, 2, gamma) == 0.1);
  CHECK(GammaCost(2, 2, 0, gamma) == 3.0);
  CHECK(GammaCost(1, 2, 0, gamma) == 1.0);
  CHECK(GammaCost(0, 2, 0, gamma) == 0);
}

TEST_CASE("Mention-ranking loss on a uniform model") {
  Document doc = MakeDocument({0, 0});
  ModelParams zero(Tiny());
  CHECK(MentionRankingLoss(doc, zero, CostConfig::Zero(), 0) == Approx(std::log(2.0)));
  CostConfig costs = CostConfig::Zero();
  costs.alpha[1] = 3;
  CHECK(MentionRankingLoss(doc, zero, costs, 0) == Approx(std::log(1 + std::exp(3.0))));
  CHECK(MentionRankingLoss(doc, zero, CostConfig{}, 0) ==
        Approx(std::log(1 + std::exp(3.0))));
}

TEST_CASE("Mention-ranking loss of a confident correct model vanishes") {
  Document doc = MakeDocument({0, 0, 2});
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(3, 3);
  s(1, 0) = 60;
  s(2, 2) = 60;
  LossConfig cfg;
  cfg.costs = CostConfig::Zero();
  CHECK(ScoreLoss(doc, s, cfg) < 1e-20);
}

TEST_CASE("Without costs the ranking loss is the marginal cross entropy") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0, 2);
  Document doc = MakeDocument({0, 1, 0, 1, 4});
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j <= i; ++j) s(i, j) = normal(rng);
  LinkDistribution p = LinkProbabilities(s);
  double expected = 0;
  for (int i = 0; i < 5; ++i) {
    double mass = 0;
    for (int j : doc.antecedents(i)) mass += p(i, j);
    expected -= std::log(mass);
  }
  LossConfig cfg;
  cfg.costs = CostConfig::Zero();
  CHECK(ScoreLoss(doc, s, cfg) == Approx(expected));
}

TEST_CASE("Raising a cost weight raises the ranking loss") {
  Document doc = MakeDocument({0, 1, 0, 3, 1});
  std::mt19937_64 rng(4);
  ModelParams params = ModelParams::Random(ModelDims{1, 1, 3, 3}, 0.5, 7);
  for (int k = 0; k < 3; ++k) {
    CostConfig lo;
    CostConfig hi = lo;
    hi.alpha[k] += 0.5;
    CHECK(MentionRankingLoss(doc, params, hi, 0) > MentionRankingLoss(doc, params, lo, 0));
  }
}

TEST_CASE("Entity-centric loss") {
  Document doc = MakeDocument({0, 0, 0});
  Eigen::MatrixXd p(3, 3);
  p << 1, 0, 0, 0.6, 0.4, 0, 0.5, 0.3, 0.2;
  Eigen::MatrixXd s = p.array().log().matrix();
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) s(i, j) = 0;
  LossConfig cfg;
  cfg.kind = LossKind::kEntityCentric;
  cfg.costs = CostConfig::Zero();
  CHECK(ScoreLoss(doc, s, cfg) == Approx(-std::log(0.6) - std::log(0.68)));

  // A false-new weight inflates the self-entity competitor by e^3.
  cfg.costs.gamma[1] = 3;
  double z3 = 0.68 + 0.12 + 0.20 * std::exp(3.0);
  double z2 = 0.6 + 0.4 * std::exp(3.0);
  CHECK(ScoreLoss(doc, s, cfg) == Approx(-std::log(0.6 / z2) - std::log(0.68 / z3)));

  Document singles = MakeDocument({0, 1});
  Eigen::MatrixXd confident = Eigen::MatrixXd::Zero(2, 2);
  confident(1, 1) = 80;
  cfg.costs = CostConfig::Zero();
  CHECK(ScoreLoss(singles, confident, cfg) < 1e-20);
}

TEST_CASE("Regularizer adds lambda times the L1 norm") {
  Document doc = MakeDocument({0, 0, 2});
  ModelParams params = ModelParams::Random(ModelDims{1, 1, 2, 2}, 0.5, 3);
  for (LossKind kind : {LossKind::kMentionRanking, LossKind::kEntityCentric,
                        LossKind::kBCubed, LossKind::kLea}) {
    LossConfig cfg;
    cfg.kind = kind;
    double base = Loss(doc, params, cfg);
    cfg.lambda = 0.01;
    CHECK(Loss(doc, params, cfg) - base == Approx(0.01 * params.L1Norm()));
  }
  ModelParams one(ModelDims{1, 1, 1, 1});
  one.flat()[0] = 1;
  one.flat()[1] = -2;
  CHECK(one.L1Norm() == 3);
}

TEST_CASE("Relaxed B-cubed loss of a perfect one-hot model") {
  Document doc = MakeDocument({0, 0, 2});
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(3, 3);
  s(0, 0) = 0;
  s(1, 0) = 200;
  s(2, 2) = 200;
  LossConfig cfg;
  cfg.kind = LossKind::kBCubed;
  CHECK(ScoreLoss(doc, s, cfg) == Approx(-1));
}

TEST_CASE("Loss kind names") {
  CHECK(ParseLossKind("mr-heuristic") == LossKind::kMentionRanking);
  CHECK(ParseLossKind("ec-heuristic") == LossKind::kEntityCentric);
  CHECK(ParseLossKind("b3") == LossKind::kBCubed);
  CHECK(ParseLossKind("lea") == LossKind::kLea);
  CHECK(LossKindName(LossKind::kLea) == "lea");
  CHECK_THROWS_AS(ParseLossKind("hinge"), ConfigError);
}

TEST_CASE("Analytic gradients of every loss") {
  for (int trial = 0; trial < 4; ++trial) {
    Document doc = testing::SmallDocument(3 + trial * 2, 4, 5, 100 + trial);
    ModelParams params = ModelParams::Random(ModelDims{4, 5, 3 + trial, 4}, 0.5, trial);
    for (LossKind kind : {LossKind::kMentionRanking, LossKind::kEntityCentric,
                          LossKind::kBCubed, LossKind::kLea}) {
      LossConfig cfg;
      cfg.kind = kind;
      cfg.beta = trial % 2 ? 1.0 : std::sqrt(1.4);
      cfg.lambda = 1e-3;
      CHECK(GradCheck(doc, params, cfg, 1e-5, trial) < 1e-5);
    }
  }
}

TEST_CASE("Relaxed LEA gradient at low temperature") {
  Document doc = testing::SmallDocument(7, 4, 5, 77);
  ModelParams params = ModelParams::Random(ModelDims{4, 5, 4, 4}, 0.5, 5);
  LossConfig cfg;
  cfg.kind = LossKind::kLea;
  cfg.temperature = 0.1;
  CHECK(GradCheck(doc, params, cfg, 1e-5, 2) < 1e-4);
}

TEST_CASE("Model file round trip") {
  ModelParams params = ModelParams::Random(ModelDims{3, 4, 5, 6}, 0.7, 9);
  std::stringstream buffer;
  WriteModel(params, buffer);
  ModelParams back = ReadModel(buffer);
  CHECK(back == params);
}

TEST_CASE("Malformed model files") {
  std::istringstream wrong_magic("something 1\n");
  CHECK_THROWS_AS(ReadModel(wrong_magic), ParseError);

  ModelParams params(ModelDims{1, 1, 1, 1});
  std::stringstream buffer;
  WriteModel(params, buffer);
  std::string text = buffer.str();
  text = text.substr(0, text.rfind("v_0"));
  std::istringstream truncated(text);
  try {
    ReadModel(truncated);
    FAIL("expected a parse error");
  } catch (const ParseError &e) {
    CHECK(e.line() > 0);
  }
}

TEST_CASE("Prediction follows the scores") {
  Document doc = MakeDocument({0, 0});
  ModelParams params(Tiny());
  params.u0() = 1;
  CHECK(Predict(doc, params).values() == std::vector<int>{0, 0});
  params.u0() = -1;
  CHECK(PredictClusters(doc, params) == Clustering::FromOneBased({{1}, {2}}));
}

}  // namespace
}  // namespace diffcoref
