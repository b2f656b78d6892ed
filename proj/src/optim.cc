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

#include "diffcoref/optim.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

#include "diffcoref/errors.h"

namespace diffcoref {
namespace {

double ParseNumber(std::string_view text) {
  double x = 0.0;
  const char *end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, x);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("cannot parse beta '" + std::string(text) + "'");
  }
  return x;
}

void CheckSameDims(const Corpus &docs, int mention_dim, int pair_dim,
                   std::string_view which) {
  for (const Document &doc : docs) {
    if (doc.mention_dim() != mention_dim || doc.pair_dim() != pair_dim) {
      throw ShapeError(std::string(which) + " document " + doc.id() +
                       " has feature dims (" + std::to_string(doc.mention_dim()) +
                       ", " + std::to_string(doc.pair_dim()) + "), expected (" +
                       std::to_string(mention_dim) + ", " +
                       std::to_string(pair_dim) + ")");
    }
  }
}

}  // namespace

void AdagradStep(std::span<double> params, std::span<const double> grads,
                 std::span<double> accum, double eta, double eps) {
  if (params.size() != grads.size() || params.size() != accum.size()) {
    throw ShapeError("adagrad: parameter, gradient and accumulator sizes differ");
  }
  for (size_t k = 0; k < grads.size(); ++k) {
    if (!std::isfinite(grads[k])) {
      throw NumericError("adagrad: non-finite gradient at coordinate " +
                         std::to_string(k));
    }
  }
  for (size_t k = 0; k < params.size(); ++k) {
    const double g = grads[k];
    if (g == 0.0) continue;
    accum[k] += g * g;
    params[k] -= eta * g / (std::sqrt(accum[k]) + eps);
  }
}

double ParseBeta(std::string_view text) {
  double beta = 0.0;
  if (text.substr(0, 4) == "sqrt") {
    std::string_view arg = text.substr(4);
    if (!arg.empty() && arg.front() == '(' && arg.back() == ')') {
      arg = arg.substr(1, arg.size() - 2);
    }
    beta = std::sqrt(ParseNumber(arg));
  } else {
    beta = ParseNumber(text);
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw ConfigError("beta must be positive");
  }
  return beta;
}

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be > 0");
  if (!(temperature > 0.0)) throw ConfigError("temperature must be > 0");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (!(beta > 0.0)) throw ConfigError("beta must be > 0");
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
  if (!(adagrad_eps >= 0.0)) throw ConfigError("adagrad eps must be >= 0");
  if (!init && (hidden_mention < 1 || hidden_pair < 1)) {
    throw ConfigError("hidden sizes must be >= 1");
  }
  for (const AnnealingStep &step : annealing) {
    if (!(step.temperature > 0.0)) {
      throw ConfigError("annealing temperatures must be > 0");
    }
  }
  for (const double a : costs.alpha) {
    if (a < 0.0) throw ConfigError("costs must be nonnegative");
  }
  for (const double g : costs.gamma) {
    if (g < 0.0) throw ConfigError("costs must be nonnegative");
  }
}

double TrainConfig::TemperatureAt(int epoch) const {
  double t = temperature;
  int last = 0;
  for (const AnnealingStep &step : annealing) {
    if (step.epoch <= epoch && step.epoch >= last) {
      t = step.temperature;
      last = step.epoch;
    }
  }
  return t;
}

LossConfig TrainConfig::LossAt(int epoch) const {
  LossConfig c;
  c.kind = loss;
  c.costs = costs;
  c.beta = beta;
  c.temperature = TemperatureAt(epoch);
  c.lambda = lambda;
  return c;
}

void TrainHistory::WriteCsv(std::ostream &out) const {
  out << "epoch,loss,muc,b3,ceaf_m,ceaf_e,blanc,lea,conll,seconds\n";
  char buf[256];
  for (const EpochRecord &r : epochs) {
    std::snprintf(buf, sizeof(buf),
                  "%d,%.8g,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.3f\n", r.epoch,
                  r.mean_loss, r.dev.muc.f, r.dev.b_cubed.f, r.dev.ceaf_m.f,
                  r.dev.ceaf_e.f, r.dev.blanc.f, r.dev.lea.f, r.dev.conll,
                  r.seconds);
    out << buf;
  }
}

MetricReport Evaluate(const Corpus &docs, const ModelParams &params) {
  ReportAccumulator acc;
  for (const Document &doc : docs) {
    acc.Add(doc.gold_clusters(), PredictClusters(doc, params));
  }
  return acc.Finish();
}

TrainResult Train(const Corpus &train, const Corpus &dev,
                  const TrainConfig &config,
                  const std::function<void(const EpochRecord &)> &on_epoch) {
  config.Validate();
  if (train.empty()) throw InputError("training corpus is empty");
  const int mention_dim = train.front().mention_dim();
  const int pair_dim = train.front().pair_dim();
  CheckSameDims(train, mention_dim, pair_dim, "training");
  CheckSameDims(dev, mention_dim, pair_dim, "dev");

  ModelParams params;
  if (config.init) {
    params = *config.init;
    if (params.dims().mention_dim != mention_dim ||
        params.dims().pair_dim != pair_dim) {
      throw ShapeError("initial model expects feature dims (" +
                       std::to_string(params.dims().mention_dim) + ", " +
                       std::to_string(params.dims().pair_dim) +
                       ") but the corpus has (" + std::to_string(mention_dim) +
                       ", " + std::to_string(pair_dim) + ")");
    }
  } else {
    params = ModelParams::Random({mention_dim, pair_dim, config.hidden_mention,
                                  config.hidden_pair},
                                 config.init_scale, config.seed);
  }

  const Corpus &selection = dev.empty() ? train : dev;
  std::vector<double> accum(params.size(), 0.0);
  std::vector<int> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(config.seed);

  TrainResult result;
  double best_conll = -1.0;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    const LossConfig loss_config = config.LossAt(epoch);
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    for (int d : order) {
      const Document &doc = train[d];
      LossAndGrad lg = LossWithGrad(doc, params, loss_config);
      if (!std::isfinite(lg.loss)) {
        throw NumericError("non-finite loss on document " + doc.id() +
                           " in epoch " + std::to_string(epoch));
      }
      try {
        AdagradStep(params.flat(), lg.grad.flat(), accum,
                    config.learning_rate, config.adagrad_eps);
      } catch (const NumericError &e) {
        throw NumericError(std::string(e.what()) + " on document " + doc.id());
      }
      total += lg.loss;
    }
    EpochRecord record;
    record.epoch = epoch;
    record.mean_loss = total / train.size();
    record.dev = Evaluate(selection, params);
    record.seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    if (record.dev.conll > best_conll) {
      best_conll = record.dev.conll;
      result.params = params;
      result.history.best_epoch = epoch;
    }
    result.history.epochs.push_back(record);
    if (on_epoch) on_epoch(record);
  }
  return result;
}

double GradCheck(const Document &doc, const ModelParams &params,
                 const LossConfig &config, double h, std::uint64_t seed,
                 int min_coords) {
  if (!(h >= 1e-6 && h <= 1e-4)) {
    throw ConfigError("finite-difference step must lie in [1e-6, 1e-4]");
  }
  const LossAndGrad analytic = LossWithGrad(doc, params, config);
  std::vector<int> coords(params.size());
  std::iota(coords.begin(), coords.end(), 0);
  if (static_cast<int>(coords.size()) > min_coords) {
    std::mt19937_64 rng(seed);
    std::shuffle(coords.begin(), coords.end(), rng);
    coords.resize(min_coords);
  }
  ModelParams probe = params;
  double worst = 0.0;
  for (int k : coords) {
    const double theta = params.flat()[k];
    // The L1 term has a kink at zero.
    if (config.lambda > 0.0 && std::abs(theta) <= h) continue;
    probe.flat()[k] = theta + h;
    const double up = Loss(doc, probe, config);
    probe.flat()[k] = theta - h;
    const double down = Loss(doc, probe, config);
    probe.flat()[k] = theta;
    const double numeric = (up - down) / (2.0 * h);
    const double exact = analytic.grad.flat()[k];
    const double scale =
        std::max({1.0, std::abs(exact), std::abs(numeric)});
    worst = std::max(worst, std::abs(exact - numeric) / scale);
  }
  return worst;
}

}  // namespace diffcoref
