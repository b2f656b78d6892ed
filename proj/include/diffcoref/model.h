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

// Neural mention-ranking scorer and its training objectives.
//
//   h_a(i)    = tanh(W_a phi_a(i) + b_a)
//   h_p(i, j) = tanh(W_p phi_p(i, j) + b_p)
//   s(i, j)   = u . [h_a(i); h_p(i, j)] + u_0     for j < i
//   s(i, i)   = v . h_a(i) + v_0
//   p(a_i = j) = softmax_j s(i, .)                 over j <= i
//
// All gradients are computed in closed form.

#ifndef DIFFCOREF_MODEL_H_
#define DIFFCOREF_MODEL_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "diffcoref/corpus.h"
#include "diffcoref/relaxed_metrics.h"
#include "diffcoref/types.h"

namespace diffcoref {

struct ModelDims {
  int mention_dim = 0;
  int pair_dim = 0;
  int hidden_mention = 200;
  int hidden_pair = 700;

  bool operator==(const ModelDims &) const = default;
};

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<RowMajorMatrix>;
using ConstMatrixMap = Eigen::Map<const RowMajorMatrix>;
using VectorMap = Eigen::Map<Eigen::VectorXd>;
using ConstVectorMap = Eigen::Map<const Eigen::VectorXd>;

// All trainable parameters, stored contiguously in the order
// W_a, b_a, W_p, b_p, u, u_0, v, v_0 (matrices row-major). The flat view is
// what the optimizer and the gradient checker operate on.
class ModelParams {
 public:
  struct TensorInfo {
    std::string_view name;
    int rows;
    int cols;
    int offset;
  };

  ModelParams() = default;
  // All zeros.
  explicit ModelParams(const ModelDims &dims);
  // Entries uniform in [-scale, scale].
  static ModelParams Random(const ModelDims &dims, double scale,
                            std::uint64_t seed);

  const ModelDims &dims() const { return dims_; }
  int size() const { return static_cast<int>(data_.size()); }
  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }

  // The eight tensors in storage order.
  std::vector<TensorInfo> Tensors() const;

  MatrixMap w_mention();
  ConstMatrixMap w_mention() const;
  VectorMap b_mention();
  ConstVectorMap b_mention() const;
  MatrixMap w_pair();
  ConstMatrixMap w_pair() const;
  VectorMap b_pair();
  ConstVectorMap b_pair() const;
  // u; the first hidden_mention entries multiply h_a, the rest h_p.
  VectorMap u();
  ConstVectorMap u() const;
  double &u0() { return data_[offset_u0_]; }
  double u0() const { return data_[offset_u0_]; }
  VectorMap v();
  ConstVectorMap v() const;
  double &v0() { return data_[offset_v0_]; }
  double v0() const { return data_[offset_v0_]; }

  double L1Norm() const;
  bool AllFinite() const;

  bool operator==(const ModelParams &o) const {
    return dims_ == o.dims_ && data_ == o.data_;
  }

 private:
  void ComputeOffsets();

  ModelDims dims_;
  std::vector<double> data_;
  int offset_b_mention_ = 0;
  int offset_w_pair_ = 0;
  int offset_b_pair_ = 0;
  int offset_u_ = 0;
  int offset_u0_ = 0;
  int offset_v_ = 0;
  int offset_v0_ = 0;
};

// Text model file; see docs/formats.md. Values are written with 17
// significant digits so a save/load round trip is exact.
void WriteModel(const ModelParams &params, std::ostream &out);
ModelParams ReadModel(std::istream &in);
void SaveModel(const ModelParams &params, const std::string &path);
ModelParams LoadModel(const std::string &path);

// Error-type weights. Index 0: false anaphor, 1: false new, 2: wrong link.
struct CostConfig {
  std::array<double, 3> alpha = {0.1, 3.0, 1.0};
  std::array<double, 3> gamma = {0.1, 3.0, 1.0};

  static CostConfig Zero() { return {{0, 0, 0}, {0, 0, 0}}; }
};

// Cost of choosing antecedent j for mention i given the gold antecedent set.
double DeltaCost(int j, int i, std::span<const int> gold_antecedents,
                 const std::array<double, 3> &alpha);

// Cost of assigning mention i to E_u when its gold entity is E_gold.
double GammaCost(int u, int i, int gold_entity,
                 const std::array<double, 3> &gamma);

// Activations kept for the backward pass.
struct ForwardPass {
  Eigen::MatrixXd hidden_mention;  // n x hidden_mention
  Eigen::MatrixXd hidden_pair;     // num_pairs x hidden_pair
  Eigen::MatrixXd scores;          // n x n, zero above the diagonal
};

// Throws ShapeError if the document's feature dims differ from the model's.
ForwardPass Forward(const Document &doc, const ModelParams &params);
Eigen::MatrixXd ScorePairs(const Document &doc, const ModelParams &params);

// Row softmax over j <= i.
LinkDistribution LinkProbabilities(const Eigen::MatrixXd &scores);

// Accumulates dL/dparams into `grads` from dL/dscores (lower triangle).
void BackwardScores(const Document &doc, const ModelParams &params,
                    const ForwardPass &forward,
                    const Eigen::MatrixXd &grad_scores, ModelParams *grads);

enum class LossKind { kMentionRanking, kEntityCentric, kBCubed, kLea };

std::string_view LossKindName(LossKind kind);
// Accepts "mr-heuristic", "ec-heuristic", "b3", "lea".
LossKind ParseLossKind(std::string_view name);

struct LossConfig {
  LossKind kind = LossKind::kMentionRanking;
  CostConfig costs;
  double beta = 1.0;
  double temperature = 1.0;
  double lambda = 0.0;
};

// Data term of the loss as a function of the raw score matrix. When
// `grad_scores` is non-null it receives dL/ds (zero above the diagonal).
double ScoreLoss(const Document &doc, const Eigen::MatrixXd &scores,
                 const LossConfig &config,
                 Eigen::MatrixXd *grad_scores = nullptr);

// Full objective including lambda * ||params||_1.
double Loss(const Document &doc, const ModelParams &params,
            const LossConfig &config);

struct LossAndGrad {
  double loss = 0.0;
  ModelParams grad;
};
LossAndGrad LossWithGrad(const Document &doc, const ModelParams &params,
                         const LossConfig &config);

double MentionRankingLoss(const Document &doc, const ModelParams &params,
                          const CostConfig &costs, double lambda);
double EntityCentricLoss(const Document &doc, const ModelParams &params,
                         const CostConfig &costs, double lambda);
double RelaxedMetricLoss(const Document &doc, const ModelParams &params,
                         RelaxedMetric metric, double beta, double temperature,
                         double lambda);

// Highest-scoring antecedent of every mention.
AntecedentVector Predict(const Document &doc, const ModelParams &params);
Clustering PredictClusters(const Document &doc, const ModelParams &params);

}  // namespace diffcoref

#endif  // DIFFCOREF_MODEL_H_
