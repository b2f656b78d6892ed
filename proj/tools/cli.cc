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

#include "cli.h"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "diffcoref/analysis.h"
#include "diffcoref/corpus.h"
#include "diffcoref/errors.h"
#include "diffcoref/model.h"
#include "diffcoref/optim.h"

namespace diffcoref {
namespace cli {
namespace {

std::array<double, 3> ParseTriple(const std::string &text,
                                  const std::string &flag) {
  std::vector<double> values;
  std::istringstream in(text);
  std::string field;
  while (std::getline(in, field, ',')) {
    try {
      size_t used = 0;
      values.push_back(std::stod(field, &used));
      if (used != field.size()) throw std::invalid_argument(field);
    } catch (const std::exception &) {
      throw ConfigError(flag + ": cannot parse '" + field + "'");
    }
  }
  if (values.size() != 3) {
    throw ConfigError(flag + " expects three comma-separated numbers");
  }
  return {values[0], values[1], values[2]};
}

// "3:0.5,6:0.1" -> temperature 0.5 from epoch 3, 0.1 from epoch 6.
std::vector<AnnealingStep> ParseAnnealing(const std::string &text) {
  std::vector<AnnealingStep> steps;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw ConfigError("--anneal expects epoch:temperature items");
    }
    try {
      steps.push_back({std::stoi(item.substr(0, colon)),
                       std::stod(item.substr(colon + 1))});
    } catch (const std::exception &) {
      throw ConfigError("--anneal: cannot parse '" + item + "'");
    }
  }
  return steps;
}

std::ofstream OpenOutput(const std::string &path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  return out;
}

struct GenerateOptions {
  SyntheticConfig config;
  std::string type_signal;
  std::string out;
};

struct TrainOptions {
  std::string train;
  std::string dev;
  std::string loss = "mr-heuristic";
  std::string beta = "1";
  double temperature = 1.0;
  double eta = 0.05;
  int epochs = 10;
  double lambda = 1e-6;
  std::uint64_t seed = 1;
  std::string init;
  double init_scale = 0.1;
  int hidden_a = 200;
  int hidden_p = 700;
  std::string alpha = "0.1,3,1";
  std::string gamma = "0.1,3,1";
  std::string anneal;
  std::string out;
  std::string history;
};

struct EvaluateOptions {
  std::string corpus;
  std::string model;
  std::string csv;
  std::string response;
};

struct ScoreOptions {
  std::string key;
  std::string response;
  std::string csv;
};

struct GradCheckOptions {
  std::string loss = "mr-heuristic";
  double h = 1e-5;
  std::uint64_t seed = 1;
  double temperature = 1.0;
  std::string beta = "1";
  double lambda = 0.0;
  int mentions = 8;
  int hidden = 6;
  int coords = 200;
  double tolerance = 1e-5;
  std::string corpus;
  std::string model;
};

int RunGenerate(const GenerateOptions &o, std::ostream &out) {
  SyntheticConfig config = o.config;
  if (!o.type_signal.empty()) {
    config.type_signal = ParseTriple(o.type_signal, "--type-signal");
  }
  const Corpus docs = GenerateSynthetic(config);
  SaveCorpus(docs, o.out);
  out << "wrote " << docs.size() << " documents to " << o.out << "\n";
  return kExitOk;
}

int RunTrain(const TrainOptions &o, std::ostream &out) {
  TrainConfig config;
  config.loss = ParseLossKind(o.loss);
  config.beta = ParseBeta(o.beta);
  config.temperature = o.temperature;
  config.learning_rate = o.eta;
  config.epochs = o.epochs;
  config.lambda = o.lambda;
  config.seed = o.seed;
  config.init_scale = o.init_scale;
  config.hidden_mention = o.hidden_a;
  config.hidden_pair = o.hidden_p;
  config.costs.alpha = ParseTriple(o.alpha, "--alpha");
  config.costs.gamma = ParseTriple(o.gamma, "--gamma");
  if (!o.anneal.empty()) config.annealing = ParseAnnealing(o.anneal);
  config.Validate();

  const Corpus train = LoadCorpus(o.train);
  const Corpus dev = o.dev.empty() ? Corpus{} : LoadCorpus(o.dev);
  if (!o.init.empty()) config.init = LoadModel(o.init);

  const TrainResult result =
      Train(train, dev, config, [&](const EpochRecord &r) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "epoch %3d  loss %.6f  dev CoNLL %.2f  (%.1fs)\n",
                      r.epoch, r.mean_loss, 100.0 * r.dev.conll, r.seconds);
        out << buf << std::flush;
      });
  SaveModel(result.params, o.out);
  if (!o.history.empty()) {
    std::ofstream csv = OpenOutput(o.history);
    result.history.WriteCsv(csv);
  }
  out << "best epoch " << result.history.best_epoch << ", model written to "
      << o.out << "\n";
  return kExitOk;
}

int RunEvaluate(const EvaluateOptions &o, std::ostream &out) {
  const Corpus docs = LoadCorpus(o.corpus);
  const ModelParams params = LoadModel(o.model);
  ReportAccumulator acc;
  std::optional<std::ofstream> response;
  if (!o.response.empty()) response = OpenOutput(o.response);
  for (const Document &doc : docs) {
    const Clustering sys = PredictClusters(doc, params);
    acc.Add(doc.gold_clusters(), sys);
    if (response) WriteConllResponse(*response, doc.id(), sys);
  }
  const MetricReport report = acc.Finish();
  PrintReport(out, report);
  if (!o.csv.empty()) {
    std::ofstream csv = OpenOutput(o.csv);
    WriteReportCsv(csv, report);
  }
  return kExitOk;
}

int RunScore(const ScoreOptions &o, std::ostream &out) {
  const auto key = ParseConllKey(o.key);
  const auto response = ParseConllKey(o.response);
  std::map<std::string, const ConllDocument *> by_id;
  for (const auto &doc : response) by_id[doc.id] = &doc;
  ReportAccumulator acc;
  for (const auto &doc : key) {
    auto it = by_id.find(doc.id);
    if (it == by_id.end()) {
      throw InputError("response has no document '" + doc.id + "'");
    }
    acc.Add(doc.clusters, AlignToKey(doc, *it->second));
  }
  const MetricReport report = acc.Finish();
  PrintReport(out, report);
  if (!o.csv.empty()) {
    std::ofstream csv = OpenOutput(o.csv);
    WriteReportCsv(csv, report);
  }
  return kExitOk;
}

int RunErrors(const EvaluateOptions &o, std::ostream &out) {
  const Corpus docs = LoadCorpus(o.corpus);
  const ModelParams params = LoadModel(o.model);
  ErrorBreakdown total;
  for (const Document &doc : docs) {
    total += ComputeErrorBreakdown(doc, Predict(doc, params));
  }
  PrintErrorBreakdown(out, total);
  return kExitOk;
}

int RunGradCheck(const GradCheckOptions &o, std::ostream &out) {
  LossConfig config;
  config.kind = ParseLossKind(o.loss);
  config.beta = ParseBeta(o.beta);
  config.temperature = o.temperature;
  config.lambda = o.lambda;
  if (!(o.h >= 1e-6 && o.h <= 1e-4)) {
    throw ConfigError("--step must lie in [1e-6, 1e-4]");
  }
  Document doc;
  if (!o.corpus.empty()) {
    const Corpus docs = LoadCorpus(o.corpus);
    if (docs.empty()) throw InputError(o.corpus + " contains no documents");
    doc = docs.front();
  } else {
    SyntheticConfig sc;
    sc.num_docs = 1;
    sc.min_mentions = sc.max_mentions = o.mentions;
    sc.min_entities = 1;
    sc.max_entities = std::max(1, o.mentions / 2);
    sc.mention_dim = 6;
    sc.pair_dim = 8;
    sc.noise = 0.3;
    sc.seed = o.seed;
    doc = GenerateSynthetic(sc).front();
  }
  const ModelParams params =
      !o.model.empty()
          ? LoadModel(o.model)
          : ModelParams::Random(
                {doc.mention_dim(), doc.pair_dim(), o.hidden, o.hidden}, 0.5,
                o.seed);
  const double error = GradCheck(doc, params, config, o.h, o.seed, o.coords);
  const bool pass = error < o.tolerance;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s max relative error %.3e (tolerance %.1e) %s\n",
                std::string(LossKindName(config.kind)).c_str(), error,
                o.tolerance, pass ? "PASS" : "FAIL");
  out << buf;
  return pass ? kExitOk : kExitRuntime;
}

}  // namespace

int Run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
  CLI::App app{"Coreference metrics, mention-ranking training and "
               "differentiable B3/LEA losses",
               "diffcoref"};
  app.require_subcommand(1);

  GenerateOptions gen;
  auto *generate = app.add_subcommand("generate", "Write a synthetic corpus");
  generate->add_option("--docs", gen.config.num_docs, "Number of documents")
      ->capture_default_str();
  generate->add_option("--seed", gen.config.seed, "Random seed")
      ->capture_default_str();
  generate->add_option("--min-mentions", gen.config.min_mentions)
      ->capture_default_str();
  generate->add_option("--max-mentions", gen.config.max_mentions)
      ->capture_default_str();
  generate->add_option("--min-entities", gen.config.min_entities)
      ->capture_default_str();
  generate->add_option("--max-entities", gen.config.max_entities)
      ->capture_default_str();
  generate->add_option("--d-a", gen.config.mention_dim, "Mention feature size")
      ->capture_default_str();
  generate->add_option("--d-p", gen.config.pair_dim, "Pair feature size")
      ->capture_default_str();
  generate->add_option("--sigma", gen.config.noise, "Feature noise level")
      ->capture_default_str();
  generate->add_option("--prototype-dim", gen.config.prototype_dim,
                       "Dimension of the latent entity prototypes")
      ->capture_default_str();
  generate->add_option("--type-signal", gen.type_signal,
                       "Prototype scale per type: proper,nominal,pronominal "
                       "(default 1,1,0.45)");
  generate->add_option("--out", gen.out, "Output corpus (JSON lines)")
      ->required();

  TrainOptions tr;
  auto *train = app.add_subcommand("train", "Train a model");
  train->add_option("--train", tr.train, "Training corpus")
      ->required()
      ->check(CLI::ExistingFile);
  train->add_option("--dev", tr.dev, "Dev corpus for model selection")
      ->check(CLI::ExistingFile);
  train->add_option("--loss", tr.loss,
                    "mr-heuristic | ec-heuristic | b3 | lea")
      ->capture_default_str();
  train->add_option("--beta", tr.beta,
                    "F_beta weight: a number or sqrtX, e.g. sqrt1.4")
      ->capture_default_str();
  train->add_option("--temp", tr.temperature, "Softmax temperature T")
      ->capture_default_str();
  train->add_option("--eta", tr.eta, "AdaGrad learning rate")
      ->capture_default_str();
  train->add_option("--epochs", tr.epochs)->capture_default_str();
  train->add_option("--lambda", tr.lambda, "L1 weight")->capture_default_str();
  train->add_option("--seed", tr.seed)->capture_default_str();
  train->add_option("--init", tr.init, "Initial model file")
      ->check(CLI::ExistingFile);
  train->add_option("--init-scale", tr.init_scale,
                    "Uniform init range when --init is absent")
      ->capture_default_str();
  train->add_option("--hidden-a", tr.hidden_a, "Mention hidden size")
      ->capture_default_str();
  train->add_option("--hidden-p", tr.hidden_p, "Pair hidden size")
      ->capture_default_str();
  train->add_option("--alpha", tr.alpha, "Mention-ranking costs FA,FN,WL")
      ->capture_default_str();
  train->add_option("--gamma", tr.gamma, "Entity-centric costs FA,FN,WL")
      ->capture_default_str();
  train->add_option("--anneal", tr.anneal,
                    "Temperature schedule epoch:T[,epoch:T...]");
  train->add_option("--out", tr.out, "Output model file")->required();
  train->add_option("--history", tr.history, "Per-epoch CSV");

  EvaluateOptions ev;
  auto *evaluate =
      app.add_subcommand("evaluate", "Score a model on a feature corpus");
  evaluate->add_option("--corpus", ev.corpus)->required()->check(CLI::ExistingFile);
  evaluate->add_option("--model", ev.model)->required()->check(CLI::ExistingFile);
  evaluate->add_option("--csv", ev.csv, "Also write the report as CSV");
  evaluate->add_option("--response", ev.response,
                       "Write predicted clusters as CoNLL");

  ScoreOptions sc;
  auto *score = app.add_subcommand("score", "Score CoNLL key/response files");
  score->add_option("--key", sc.key)->required()->check(CLI::ExistingFile);
  score->add_option("--response", sc.response)
      ->required()
      ->check(CLI::ExistingFile);
  score->add_option("--csv", sc.csv, "Also write the report as CSV");

  EvaluateOptions er;
  auto *errors = app.add_subcommand("errors", "FA/FN/WL error breakdown");
  errors->add_option("--corpus", er.corpus)->required()->check(CLI::ExistingFile);
  errors->add_option("--model", er.model)->required()->check(CLI::ExistingFile);

  GradCheckOptions gc;
  auto *gradcheck = app.add_subcommand(
      "gradcheck", "Compare analytic and finite-difference gradients");
  gradcheck->add_option("--loss", gc.loss)->capture_default_str();
  gradcheck->add_option("--step", gc.h, "Finite-difference step")
      ->capture_default_str();
  gradcheck->add_option("--seed", gc.seed)->capture_default_str();
  gradcheck->add_option("--temp", gc.temperature)->capture_default_str();
  gradcheck->add_option("--beta", gc.beta)->capture_default_str();
  gradcheck->add_option("--lambda", gc.lambda)->capture_default_str();
  gradcheck->add_option("--mentions", gc.mentions,
                        "Mentions in the generated document")
      ->capture_default_str()
      ->check(CLI::Range(1, 10));
  gradcheck->add_option("--hidden", gc.hidden, "Hidden sizes")
      ->capture_default_str()
      ->check(CLI::Range(1, 8));
  gradcheck->add_option("--coords", gc.coords, "Coordinates to probe")
      ->capture_default_str();
  gradcheck->add_option("--tolerance", gc.tolerance)->capture_default_str();
  gradcheck->add_option("--corpus", gc.corpus, "Use the first document")
      ->check(CLI::ExistingFile);
  gradcheck->add_option("--model", gc.model)->check(CLI::ExistingFile);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp &e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (*generate) return RunGenerate(gen, out);
    if (*train) return RunTrain(tr, out);
    if (*evaluate) return RunEvaluate(ev, out);
    if (*score) return RunScore(sc, out);
    if (*errors) return RunErrors(er, out);
    if (*gradcheck) return RunGradCheck(gc, out);
  } catch (const ConfigError &e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ParseError &e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const FormatError &e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const InputError &e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DomainError &e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitValidation;
}

}  // namespace cli
}  // namespace diffcoref
