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

#include "diffcoref/model.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "diffcoref/clustering.h"
#include "diffcoref/errors.h"
#include "diffcoref/soft_entity.h"

namespace diffcoref {
namespace {

constexpr std::string_view kModelMagic = "diffcoref-model";
constexpr int kModelVersion = 1;

double LogSumExp(const Eigen::Ref<const Eigen::VectorXd> &x) {
  const double top = x.maxCoeff();
  return top + std::log((x.array() - top).exp().sum());
}

bool Contains(std::span<const int> set, int x) {
  for (int y : set) {
    if (y == x) return true;
  }
  return false;
}

// dL/ds from dL/dp through the row softmax.
Eigen::MatrixXd SoftmaxBackward(const LinkDistribution &links,
                                const Eigen::MatrixXd &grad_links) {
  const int n = links.size();
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double mean = 0.0;
    for (int j = 0; j <= i; ++j) mean += grad_links(i, j) * links(i, j);
    for (int j = 0; j <= i; ++j) {
      grad(i, j) = links(i, j) * (grad_links(i, j) - mean);
    }
  }
  return grad;
}

double MentionRankingScoreLoss(const Document &doc,
                               const Eigen::MatrixXd &scores,
                               const CostConfig &costs,
                               Eigen::MatrixXd *grad) {
  const int n = doc.size();
  double loss = 0.0;
  for (int i = 0; i < n; ++i) {
    const std::vector<int> &gold = doc.antecedents(i);
    if (gold.empty()) {
      throw DataError("mention " + std::to_string(i + 1) + " of document " +
                      doc.id() + " has no gold antecedent");
    }
    Eigen::VectorXd augmented(i + 1);
    for (int j = 0; j <= i; ++j) {
      augmented(j) = scores(i, j) + DeltaCost(j, i, gold, costs.alpha);
    }
    Eigen::VectorXd correct(gold.size());
    for (size_t k = 0; k < gold.size(); ++k) correct(k) = augmented(gold[k]);
    const double lse_all = LogSumExp(augmented);
    const double lse_correct = LogSumExp(correct);
    loss += lse_all - lse_correct;
    if (grad != nullptr) {
      for (int j = 0; j <= i; ++j) {
        (*grad)(i, j) = std::exp(augmented(j) - lse_all);
      }
      for (int j : gold) {
        (*grad)(i, j) -= std::exp(augmented(j) - lse_correct);
      }
    }
  }
  return loss;
}

double EntityCentricScoreLoss(const Document &doc,
                              const Eigen::MatrixXd &scores,
                              const CostConfig &costs,
                              Eigen::MatrixXd *grad) {
  const int n = doc.size();
  const LinkDistribution links = LinkProbabilities(scores);
  const MembershipMatrix q = Membership(links);
  Eigen::MatrixXd grad_q = Eigen::MatrixXd::Zero(n, n);
  double loss = 0.0;
  for (int i = 0; i < n; ++i) {
    const int entity = doc.mention(i).gold_entity;
    if (entity > i || entity < 0) {
      throw DataError("gold entity of mention " + std::to_string(i + 1) +
                      " in document " + doc.id() + " starts after it");
    }
    Eigen::VectorXd weight(i + 1);
    for (int u = 0; u <= i; ++u) {
      weight(u) = std::exp(GammaCost(u, i, entity, costs.gamma));
    }
    double z = 0.0;
    for (int u = 0; u <= i; ++u) z += q(i, u) * weight(u);
    loss += std::log(z) - std::log(q(i, entity) * weight(entity));
    if (grad != nullptr) {
      for (int u = 0; u <= i; ++u) grad_q(i, u) = weight(u) / z;
      grad_q(i, entity) -= 1.0 / q(i, entity);
    }
  }
  if (grad != nullptr) {
    *grad = SoftmaxBackward(links, MembershipBackward(links, q, grad_q));
  }
  return loss;
}

double RelaxedScoreLoss(const Document &doc, const Eigen::MatrixXd &scores,
                        RelaxedMetric metric, double beta, double temperature,
                        Eigen::MatrixXd *grad) {
  const LinkDistribution links = LinkProbabilities(scores);
  const MembershipMatrix q = Membership(links);
  const MembershipMatrix tempered = TemperedMembership(q, temperature);
  if (grad == nullptr) {
    return -RelaxedScoreOf(metric, tempered, doc.gold_clusters(), beta).value;
  }
  RelaxedScoreGrad r =
      RelaxedScoreWithGrad(metric, tempered, doc.gold_clusters(), beta);
  const Eigen::MatrixXd grad_q =
      TemperedMembershipBackward(q, tempered, -r.grad);
  *grad = SoftmaxBackward(links, MembershipBackward(links, q, grad_q));
  return -r.score.value;
}

void WriteValues(std::ostream &out, std::span<const double> values) {
  char buf[32];
  for (double x : values) {
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    out << ' ' << buf;
  }
}

}  // namespace

ModelParams::ModelParams(const ModelDims &dims) : dims_(dims) {
  if (dims.mention_dim < 1 || dims.pair_dim < 1 || dims.hidden_mention < 1 ||
      dims.hidden_pair < 1) {
    throw ConfigError("model dimensions must be positive");
  }
  ComputeOffsets();
}

void ModelParams::ComputeOffsets() {
  const int ha = dims_.hidden_mention;
  const int hp = dims_.hidden_pair;
  offset_b_mention_ = ha * dims_.mention_dim;
  offset_w_pair_ = offset_b_mention_ + ha;
  offset_b_pair_ = offset_w_pair_ + hp * dims_.pair_dim;
  offset_u_ = offset_b_pair_ + hp;
  offset_u0_ = offset_u_ + ha + hp;
  offset_v_ = offset_u0_ + 1;
  offset_v0_ = offset_v_ + ha;
  data_.assign(offset_v0_ + 1, 0.0);
}

ModelParams ModelParams::Random(const ModelDims &dims, double scale,
                                std::uint64_t seed) {
  ModelParams params(dims);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-scale, scale);
  for (double &x : params.data_) x = dist(rng);
  return params;
}

std::vector<ModelParams::TensorInfo> ModelParams::Tensors() const {
  const int ha = dims_.hidden_mention;
  const int hp = dims_.hidden_pair;
  return {{"W_a", ha, dims_.mention_dim, 0},
          {"b_a", ha, 1, offset_b_mention_},
          {"W_p", hp, dims_.pair_dim, offset_w_pair_},
          {"b_p", hp, 1, offset_b_pair_},
          {"u", ha + hp, 1, offset_u_},
          {"u_0", 1, 1, offset_u0_},
          {"v", ha, 1, offset_v_},
          {"v_0", 1, 1, offset_v0_}};
}

MatrixMap ModelParams::w_mention() {
  return MatrixMap(data_.data(), dims_.hidden_mention, dims_.mention_dim);
}
ConstMatrixMap ModelParams::w_mention() const {
  return ConstMatrixMap(data_.data(), dims_.hidden_mention, dims_.mention_dim);
}
VectorMap ModelParams::b_mention() {
  return VectorMap(data_.data() + offset_b_mention_, dims_.hidden_mention);
}
ConstVectorMap ModelParams::b_mention() const {
  return ConstVectorMap(data_.data() + offset_b_mention_, dims_.hidden_mention);
}
MatrixMap ModelParams::w_pair() {
  return MatrixMap(data_.data() + offset_w_pair_, dims_.hidden_pair,
                   dims_.pair_dim);
}
ConstMatrixMap ModelParams::w_pair() const {
  return ConstMatrixMap(data_.data() + offset_w_pair_, dims_.hidden_pair,
                        dims_.pair_dim);
}
VectorMap ModelParams::b_pair() {
  return VectorMap(data_.data() + offset_b_pair_, dims_.hidden_pair);
}
ConstVectorMap ModelParams::b_pair() const {
  return ConstVectorMap(data_.data() + offset_b_pair_, dims_.hidden_pair);
}
VectorMap ModelParams::u() {
  return VectorMap(data_.data() + offset_u_,
                   dims_.hidden_mention + dims_.hidden_pair);
}
ConstVectorMap ModelParams::u() const {
  return ConstVectorMap(data_.data() + offset_u_,
                        dims_.hidden_mention + dims_.hidden_pair);
}
VectorMap ModelParams::v() {
  return VectorMap(data_.data() + offset_v_, dims_.hidden_mention);
}
ConstVectorMap ModelParams::v() const {
  return ConstVectorMap(data_.data() + offset_v_, dims_.hidden_mention);
}

double ModelParams::L1Norm() const {
  double sum = 0.0;
  for (double x : data_) sum += std::abs(x);
  return sum;
}

bool ModelParams::AllFinite() const {
  for (double x : data_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

void WriteModel(const ModelParams &params, std::ostream &out) {
  const ModelDims &d = params.dims();
  out << kModelMagic << ' ' << kModelVersion << '\n';
  out << "dims " << d.mention_dim << ' ' << d.pair_dim << ' '
      << d.hidden_mention << ' ' << d.hidden_pair << '\n';
  for (const auto &t : params.Tensors()) {
    out << t.name << ' ' << t.rows << ' ' << t.cols;
    WriteValues(out, params.flat().subspan(t.offset, t.rows * t.cols));
    out << '\n';
  }
}

ModelParams ReadModel(std::istream &in) {
  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> std::istringstream {
    if (!std::getline(in, line)) {
      throw ParseError("unexpected end of model file", line_no + 1);
    }
    ++line_no;
    return std::istringstream(line);
  };

  {
    std::istringstream header = next_line();
    std::string magic;
    int version = 0;
    if (!(header >> magic >> version) || magic != kModelMagic) {
      throw ParseError("not a diffcoref model file", line_no);
    }
    if (version != kModelVersion) {
      throw ParseError("unsupported model version " + std::to_string(version),
                       line_no);
    }
  }
  ModelDims dims;
  {
    std::istringstream fields = next_line();
    std::string key;
    if (!(fields >> key >> dims.mention_dim >> dims.pair_dim >>
          dims.hidden_mention >> dims.hidden_pair) ||
        key != "dims") {
      throw ParseError("expected 'dims <d_a> <d_p> <h_a> <h_p>'", line_no);
    }
  }
  ModelParams params;
  try {
    params = ModelParams(dims);
  } catch (const ConfigError &e) {
    throw ParseError(e.what(), line_no);
  }
  for (const auto &t : params.Tensors()) {
    std::istringstream fields = next_line();
    std::string name;
    int rows = 0, cols = 0;
    if (!(fields >> name >> rows >> cols) || name != t.name) {
      throw ParseError("expected tensor " + std::string(t.name), line_no);
    }
    if (rows != t.rows || cols != t.cols) {
      throw ParseError("tensor " + name + " has shape " +
                           std::to_string(rows) + "x" + std::to_string(cols) +
                           ", expected " + std::to_string(t.rows) + "x" +
                           std::to_string(t.cols),
                       line_no);
    }
    std::span<double> values = params.flat().subspan(t.offset, rows * cols);
    std::string token;
    for (double &x : values) {
      if (!(fields >> token)) {
        throw ParseError("tensor " + name + " has too few values", line_no);
      }
      const char *end = token.data() + token.size();
      auto [ptr, ec] = std::from_chars(token.data(), end, x);
      if (ec != std::errc() || ptr != end) {
        throw ParseError("bad number '" + token + "'", line_no);
      }
    }
    if (fields >> token) {
      throw ParseError("tensor " + name + " has too many values", line_no);
    }
  }
  return params;
}

void SaveModel(const ModelParams &params, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  WriteModel(params, out);
  if (!out) throw Error("failed writing " + path);
}

ModelParams LoadModel(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model file " + path);
  try {
    return ReadModel(in);
  } catch (const ParseError &e) {
    throw ParseError(path + ": " + e.what());
  }
}

double DeltaCost(int j, int i, std::span<const int> gold_antecedents,
                 const std::array<double, 3> &alpha) {
  const bool new_entity = Contains(gold_antecedents, i);
  if (j != i && new_entity) return alpha[0];
  if (j == i && !new_entity) return alpha[1];
  if (j != i && !Contains(gold_antecedents, j)) return alpha[2];
  return 0.0;
}

double GammaCost(int u, int i, int gold_entity,
                 const std::array<double, 3> &gamma) {
  if (u != i && gold_entity == i) return gamma[0];
  if (u == i && gold_entity != i) return gamma[1];
  if (u != gold_entity && u != i && gold_entity != i) return gamma[2];
  return 0.0;
}

ForwardPass Forward(const Document &doc, const ModelParams &params) {
  const ModelDims &d = params.dims();
  if (doc.mention_dim() != d.mention_dim || doc.pair_dim() != d.pair_dim) {
    throw ShapeError("document " + doc.id() + " has feature dims (" +
                     std::to_string(doc.mention_dim()) + ", " +
                     std::to_string(doc.pair_dim()) + ") but the model expects (" +
                     std::to_string(d.mention_dim) + ", " +
                     std::to_string(d.pair_dim) + ")");
  }
  const int n = doc.size();
  ForwardPass f;
  f.hidden_mention = ((doc.mention_features() * params.w_mention().transpose())
                          .rowwise() +
                      params.b_mention().transpose())
                         .array()
                         .tanh();
  f.hidden_pair = ((doc.pair_features() * params.w_pair().transpose()).rowwise() +
                   params.b_pair().transpose())
                      .array()
                      .tanh();
  const auto u = params.u();
  const Eigen::VectorXd mention_term =
      f.hidden_mention * u.head(d.hidden_mention);
  const Eigen::VectorXd pair_term = f.hidden_pair * u.tail(d.hidden_pair);
  const Eigen::VectorXd self_term = f.hidden_mention * params.v();
  f.scores = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      f.scores(i, j) = mention_term(i) + pair_term(PairIndex(i, j)) + params.u0();
    }
    f.scores(i, i) = self_term(i) + params.v0();
  }
  return f;
}

Eigen::MatrixXd ScorePairs(const Document &doc, const ModelParams &params) {
  return Forward(doc, params).scores;
}

LinkDistribution LinkProbabilities(const Eigen::MatrixXd &scores) {
  const int n = static_cast<int>(scores.rows());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const auto row = scores.row(i).head(i + 1);
    const double top = row.maxCoeff();
    const Eigen::RowVectorXd e = (row.array() - top).exp();
    p.row(i).head(i + 1) = e / e.sum();
  }
  return LinkDistribution::Unchecked(std::move(p));
}

void BackwardScores(const Document &doc, const ModelParams &params,
                    const ForwardPass &forward,
                    const Eigen::MatrixXd &grad_scores, ModelParams *grads) {
  const ModelDims &d = params.dims();
  const int n = doc.size();
  const int num_pairs = static_cast<int>(doc.pair_features().rows());
  Eigen::VectorXd grad_link_rows = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd grad_self(n);
  Eigen::VectorXd grad_pair(num_pairs);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      grad_link_rows(i) += grad_scores(i, j);
      grad_pair(PairIndex(i, j)) = grad_scores(i, j);
    }
    grad_self(i) = grad_scores(i, i);
  }
  const auto u = params.u();
  const auto u_mention = u.head(d.hidden_mention);
  const auto u_pair = u.tail(d.hidden_pair);

  auto gu = grads->u();
  gu.head(d.hidden_mention) += forward.hidden_mention.transpose() * grad_link_rows;
  gu.tail(d.hidden_pair) += forward.hidden_pair.transpose() * grad_pair;
  grads->u0() += grad_link_rows.sum();
  grads->v() += forward.hidden_mention.transpose() * grad_self;
  grads->v0() += grad_self.sum();

  const Eigen::MatrixXd grad_hidden_mention =
      grad_link_rows * u_mention.transpose() + grad_self * params.v().transpose();
  const Eigen::MatrixXd grad_pre_mention =
      grad_hidden_mention.array() *
      (1.0 - forward.hidden_mention.array().square());
  grads->w_mention() += grad_pre_mention.transpose() * doc.mention_features();
  grads->b_mention() += grad_pre_mention.colwise().sum().transpose();

  const Eigen::MatrixXd grad_pre_pair =
      (grad_pair * u_pair.transpose()).array() *
      (1.0 - forward.hidden_pair.array().square());
  grads->w_pair() += grad_pre_pair.transpose() * doc.pair_features();
  grads->b_pair() += grad_pre_pair.colwise().sum().transpose();
}

std::string_view LossKindName(LossKind kind) {
  switch (kind) {
    case LossKind::kMentionRanking:
      return "mr-heuristic";
    case LossKind::kEntityCentric:
      return "ec-heuristic";
    case LossKind::kBCubed:
      return "b3";
    case LossKind::kLea:
      return "lea";
  }
  return "?";
}

LossKind ParseLossKind(std::string_view name) {
  if (name == "mr-heuristic" || name == "mr") return LossKind::kMentionRanking;
  if (name == "ec-heuristic" || name == "ec") return LossKind::kEntityCentric;
  if (name == "b3") return LossKind::kBCubed;
  if (name == "lea") return LossKind::kLea;
  throw ConfigError("unknown loss '" + std::string(name) +
                    "' (expected mr-heuristic, ec-heuristic, b3 or lea)");
}

double ScoreLoss(const Document &doc, const Eigen::MatrixXd &scores,
                 const LossConfig &config, Eigen::MatrixXd *grad_scores) {
  const int n = doc.size();
  if (grad_scores != nullptr) *grad_scores = Eigen::MatrixXd::Zero(n, n);
  switch (config.kind) {
    case LossKind::kMentionRanking:
      return MentionRankingScoreLoss(doc, scores, config.costs, grad_scores);
    case LossKind::kEntityCentric:
      return EntityCentricScoreLoss(doc, scores, config.costs, grad_scores);
    case LossKind::kBCubed:
      return RelaxedScoreLoss(doc, scores, RelaxedMetric::kBCubed, config.beta,
                              config.temperature, grad_scores);
    case LossKind::kLea:
      return RelaxedScoreLoss(doc, scores, RelaxedMetric::kLea, config.beta,
                              config.temperature, grad_scores);
  }
  return 0.0;
}

double Loss(const Document &doc, const ModelParams &params,
            const LossConfig &config) {
  if (config.lambda < 0.0) throw DomainError("lambda must be nonnegative");
  return ScoreLoss(doc, ScorePairs(doc, params), config) +
         config.lambda * params.L1Norm();
}

LossAndGrad LossWithGrad(const Document &doc, const ModelParams &params,
                         const LossConfig &config) {
  if (config.lambda < 0.0) throw DomainError("lambda must be nonnegative");
  const ForwardPass forward = Forward(doc, params);
  Eigen::MatrixXd grad_scores;
  LossAndGrad out;
  out.loss = ScoreLoss(doc, forward.scores, config, &grad_scores) +
             config.lambda * params.L1Norm();
  out.grad = ModelParams(params.dims());
  BackwardScores(doc, params, forward, grad_scores, &out.grad);
  if (config.lambda > 0.0) {
    std::span<const double> theta = params.flat();
    std::span<double> g = out.grad.flat();
    for (size_t k = 0; k < theta.size(); ++k) {
      if (theta[k] > 0.0) {
        g[k] += config.lambda;
      } else if (theta[k] < 0.0) {
        g[k] -= config.lambda;
      }
    }
  }
  return out;
}

double MentionRankingLoss(const Document &doc, const ModelParams &params,
                          const CostConfig &costs, double lambda) {
  return Loss(doc, params, {LossKind::kMentionRanking, costs, 1.0, 1.0, lambda});
}

double EntityCentricLoss(const Document &doc, const ModelParams &params,
                         const CostConfig &costs, double lambda) {
  return Loss(doc, params, {LossKind::kEntityCentric, costs, 1.0, 1.0, lambda});
}

double RelaxedMetricLoss(const Document &doc, const ModelParams &params,
                         RelaxedMetric metric, double beta, double temperature,
                         double lambda) {
  LossConfig config;
  config.kind =
      metric == RelaxedMetric::kBCubed ? LossKind::kBCubed : LossKind::kLea;
  config.beta = beta;
  config.temperature = temperature;
  config.lambda = lambda;
  return Loss(doc, params, config);
}

AntecedentVector Predict(const Document &doc, const ModelParams &params) {
  return DecodeArgmax(LinkProbabilities(ScorePairs(doc, params)));
}

Clustering PredictClusters(const Document &doc, const ModelParams &params) {
  return AntecedentsToClusters(Predict(doc, params));
}

}  // namespace diffcoref
