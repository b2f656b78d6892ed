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

#ifndef DIFFCOREF_OPTIM_H_
#define DIFFCOREF_OPTIM_H_

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "diffcoref/analysis.h"
#include "diffcoref/corpus.h"
#include "diffcoref/model.h"

namespace diffcoref {

// accum += g^2; theta -= eta * g / (sqrt(accum) + eps), coordinatewise.
// Throws NumericError on a non-finite gradient, leaving params untouched.
void AdagradStep(std::span<double> params, std::span<const double> grads,
                 std::span<double> accum, double eta, double eps);

// F_beta grid used for tuning beta.
inline const std::array<double, 8> kBetaGrid = {
    std::sqrt(0.8), 1.0, std::sqrt(1.2), std::sqrt(1.4),
    std::sqrt(1.6), std::sqrt(1.8), 1.5, 2.0};

// Accepts a plain number ("1.1832") or a square root ("sqrt1.4",
// "sqrt(1.4)"). Throws ConfigError.
double ParseBeta(std::string_view text);

// Switches to `temperature` from `epoch` (1-based) onward.
struct AnnealingStep {
  int epoch = 1;
  double temperature = 1.0;
};

struct TrainConfig {
  LossKind loss = LossKind::kMentionRanking;
  double beta = 1.0;
  double temperature = 1.0;
  double learning_rate = 0.05;
  int epochs = 10;
  double lambda = 1e-6;
  std::uint64_t seed = 1;
  CostConfig costs;
  int hidden_mention = 200;
  int hidden_pair = 700;
  // Used when `init` is empty.
  double init_scale = 0.1;
  std::optional<ModelParams> init;
  std::vector<AnnealingStep> annealing;
  double adagrad_eps = 1e-8;

  // Throws ConfigError.
  void Validate() const;
  double TemperatureAt(int epoch) const;
  LossConfig LossAt(int epoch) const;
};

struct EpochRecord {
  int epoch = 0;
  double mean_loss = 0.0;
  MetricReport dev;
  double seconds = 0.0;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;

  // epoch,loss,muc,b3,ceaf_m,ceaf_e,blanc,lea,conll,seconds (F1 in [0, 1]).
  void WriteCsv(std::ostream &out) const;
};

struct TrainResult {
  ModelParams params;
  TrainHistory history;
};

// Corpus-level report of argmax-decoded predictions.
MetricReport Evaluate(const Corpus &docs, const ModelParams &params);

// One-document mini-batches in a seeded shuffled order each epoch. Returns
// the parameters of the epoch with the best dev CoNLL average (the first
// one on ties). Throws NumericError naming the document on a non-finite
// loss.
TrainResult Train(const Corpus &train, const Corpus &dev,
                  const TrainConfig &config,
                  const std::function<void(const EpochRecord &)> &on_epoch = {});

// Central differences on a random subset of at least `min_coords`
// coordinates (all of them if fewer exist). Returns
// max |g_a - g_fd| / max(1, |g_a|, |g_fd|). Throws ConfigError unless
// h lies in [1e-6, 1e-4].
double GradCheck(const Document &doc, const ModelParams &params,
                 const LossConfig &config, double h, std::uint64_t seed,
                 int min_coords = 200);

}  // namespace diffcoref

#endif  // DIFFCOREF_OPTIM_H_
