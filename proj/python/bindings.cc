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


#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "diffcoref/analysis.h"
#include "diffcoref/clustering.h"
#include "diffcoref/corpus.h"
#include "diffcoref/errors.h"
#include "diffcoref/metrics.h"
#include "diffcoref/model.h"
#include "diffcoref/optim.h"
#include "diffcoref/relaxed_metrics.h"
#include "diffcoref/soft_entity.h"

namespace py = pybind11;

namespace diffcoref {
namespace {

py::dict ReportDict(const MetricReport &r) {
  auto prf = [](const PRF &s) {
    py::dict d;
    d["recall"] = s.recall;
    d["precision"] = s.precision;
    d["f1"] = s.f;
    return d;
  };
  py::dict d;
  d["muc"] = prf(r.muc);
  d["b3"] = prf(r.b_cubed);
  d["ceaf_m"] = prf(r.ceaf_m);
  d["ceaf_e"] = prf(r.ceaf_e);
  d["blanc"] = prf(r.blanc);
  d["lea"] = prf(r.lea);
  d["conll"] = r.conll;
  return d;
}

py::dict CountsDict(const ErrorCounts &c) {
  py::dict d;
  d["false_anaphor"] = c.false_anaphor;
  d["false_new"] = c.false_new;
  d["wrong_link"] = c.wrong_link;
  d["correct"] = c.correct;
  return d;
}

LossConfig MakeLossConfig(const std::string &kind, double beta,
                          double temperature, double lambda) {
  LossConfig c;
  c.kind = ParseLossKind(kind);
  c.beta = beta;
  c.temperature = temperature;
  c.lambda = lambda;
  return c;
}

}  // namespace
}  // namespace diffcoref

PYBIND11_MODULE(_diffcoref, m) {
  using namespace diffcoref;
  m.doc() = "Coreference metrics, soft entity membership and training.";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<FormatError>(m, "FormatError", error.ptr());
  auto input = py::register_exception<InputError>(m, "InputError", error.ptr());
  py::register_exception<ShapeError>(m, "ShapeError", input.ptr());
  py::register_exception<DataError>(m, "DataError", input.ptr());
  py::register_exception<InvalidDistributionError>(
      m, "InvalidDistributionError", input.ptr());
  py::register_exception<DomainError>(m, "DomainError", error.ptr());
  py::register_exception<NumericError>(m, "NumericError", error.ptr());

  py::class_<Clustering>(m, "Clustering")
      .def(py::init<int, std::vector<std::vector<int>>>(), py::arg("n"),
           py::arg("clusters"), "0-based partition of range(n).")
      .def_static("from_labels",
                  [](const std::vector<int> &labels) {
                    return Clustering::FromLabels(labels);
                  })
      .def_static("from_one_based", &Clustering::FromOneBased)
      .def_property_readonly("num_mentions", &Clustering::num_mentions)
      .def_property_readonly("clusters", &Clustering::clusters)
      .def("cluster_of", &Clustering::cluster_of)
      .def("__eq__", &Clustering::operator==)
      .def("__repr__", &Clustering::ToString);

  py::class_<PRF>(m, "PRF")
      .def_readonly("precision", &PRF::precision)
      .def_readonly("recall", &PRF::recall)
      .def_readonly("f1", &PRF::f)
      .def_readonly("beta", &PRF::beta)
      .def("__repr__", [](const PRF &s) {
        return "PRF(recall=" + std::to_string(s.recall) +
               ", precision=" + std::to_string(s.precision) +
               ", f1=" + std::to_string(s.f) + ")";
      });

  m.def("muc", &Muc, py::arg("gold"), py::arg("sys"), py::arg("beta") = 1.0);
  m.def("b_cubed", &BCubed, py::arg("gold"), py::arg("sys"),
        py::arg("beta") = 1.0);
  m.def(
      "ceaf",
      [](const Clustering &g, const Clustering &s, const std::string &sim,
         double beta) {
        if (sim != "entity" && sim != "mention") {
          throw ConfigError("similarity must be 'entity' or 'mention'");
        }
        return Ceaf(g, s,
                    sim == "entity" ? CeafSimilarity::kEntity
                                    : CeafSimilarity::kMention,
                    beta);
      },
      py::arg("gold"), py::arg("sys"), py::arg("similarity") = "entity",
      py::arg("beta") = 1.0);
  m.def(
      "lea",
      [](const Clustering &g, const Clustering &s, double beta,
         bool singleton_self_links) {
        return Lea(g, s, beta, LeaOptions{singleton_self_links});
      },
      py::arg("gold"), py::arg("sys"), py::arg("beta") = 1.0,
      py::arg("singleton_self_links") = false);
  m.def("blanc", &Blanc, py::arg("gold"), py::arg("sys"));
  m.def("conll_average", &ConllAverage);
  m.def("metric_report", [](const Clustering &g, const Clustering &s) {
    return ReportDict(ComputeMetricReport(g, s));
  });

  m.def(
      "antecedents_to_clusters",
      [](const std::vector<int> &a) {
        return AntecedentsToClusters(AntecedentVector(a));
      },
      "0-based antecedent indices, a[i] <= i.");
  m.def("decode_argmax", [](const Eigen::MatrixXd &p) {
    return DecodeArgmax(LinkDistribution(p, 1e-6)).values();
  });

  m.def("membership", [](const Eigen::MatrixXd &p) {
    return Membership(LinkDistribution(p, 1e-6)).matrix();
  });
  m.def("brute_force_membership", [](const Eigen::MatrixXd &p) {
    return BruteForceMembership(LinkDistribution(p, 1e-6)).matrix();
  });
  m.def("tempered_membership", [](const Eigen::MatrixXd &q, double t) {
    return TemperedMembership(MembershipMatrix(q), t).matrix();
  });
  m.def(
      "relaxed_score",
      [](const std::string &metric, const Eigen::MatrixXd &q,
         const Clustering &gold, double beta) {
        RelaxedMetric kind;
        if (metric == "b3") {
          kind = RelaxedMetric::kBCubed;
        } else if (metric == "lea") {
          kind = RelaxedMetric::kLea;
        } else {
          throw ConfigError("metric must be 'b3' or 'lea'");
        }
        RelaxedScore s = RelaxedScoreOf(kind, MembershipMatrix(q), gold, beta);
        return py::make_tuple(s.value, s.precision, s.recall);
      },
      py::arg("metric"), py::arg("q"), py::arg("gold"), py::arg("beta") = 1.0,
      "Returns (F_beta, precision, recall).");

  py::class_<Document>(m, "Document")
      .def_property_readonly("id", &Document::id)
      .def_property_readonly("size", &Document::size)
      .def_property_readonly("mention_dim", &Document::mention_dim)
      .def_property_readonly("pair_dim", &Document::pair_dim)
      .def_property_readonly("mention_features", &Document::mention_features)
      .def_property_readonly("pair_features", &Document::pair_features)
      .def_property_readonly("gold_clusters", &Document::gold_clusters)
      .def_property_readonly("mention_types",
                             [](const Document &d) {
                               std::vector<std::string> t;
                               for (const auto &mm : d.mentions()) {
                                 t.emplace_back(MentionTypeName(mm.type));
                               }
                               return t;
                             })
      .def("__len__", &Document::size);

  m.def(
      "generate_synthetic",
      [](int num_docs, int min_mentions, int max_mentions, int min_entities,
         int max_entities, int mention_dim, int pair_dim, double noise,
         std::uint64_t seed, int prototype_dim,
         std::array<double, kNumMentionTypes> type_signal) {
        SyntheticConfig c;
        c.num_docs = num_docs;
        c.min_mentions = min_mentions;
        c.max_mentions = max_mentions;
        c.min_entities = min_entities;
        c.max_entities = max_entities;
        c.mention_dim = mention_dim;
        c.pair_dim = pair_dim;
        c.noise = noise;
        c.seed = seed;
        c.prototype_dim = prototype_dim;
        c.type_signal = type_signal;
        return GenerateSynthetic(c);
      },
      py::arg("num_docs") = 100, py::arg("min_mentions") = 8,
      py::arg("max_mentions") = 24, py::arg("min_entities") = 2,
      py::arg("max_entities") = 8, py::arg("mention_dim") = 10,
      py::arg("pair_dim") = 16, py::arg("noise") = 0.1, py::arg("seed") = 42,
      py::arg("prototype_dim") = 6,
      py::arg("type_signal") = SyntheticConfig().type_signal);
  m.def("save_corpus", &SaveCorpus);
  m.def("load_corpus", &LoadCorpus);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](int d_a, int d_p, int h_a, int h_p) {
             return ModelParams(ModelDims{d_a, d_p, h_a, h_p});
           }),
           py::arg("mention_dim"), py::arg("pair_dim"),
           py::arg("hidden_mention") = 200, py::arg("hidden_pair") = 700)
      .def_static(
          "random",
          [](int d_a, int d_p, int h_a, int h_p, double scale,
             std::uint64_t seed) {
            return ModelParams::Random(ModelDims{d_a, d_p, h_a, h_p}, scale,
                                       seed);
          },
          py::arg("mention_dim"), py::arg("pair_dim"),
          py::arg("hidden_mention"), py::arg("hidden_pair"),
          py::arg("scale") = 0.1, py::arg("seed") = 1)
      .def_property_readonly("size", &ModelParams::size)
      .def_property_readonly(
          "dims",
          [](const ModelParams &p) {
            const ModelDims &d = p.dims();
            return py::make_tuple(d.mention_dim, d.pair_dim, d.hidden_mention,
                                  d.hidden_pair);
          })
      .def_property_readonly("flat",
                             [](const ModelParams &p) {
                               auto f = p.flat();
                               return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(
                                   f.data(), static_cast<Eigen::Index>(f.size())));
                             })
      .def("l1_norm", &ModelParams::L1Norm)
      .def("__eq__", &ModelParams::operator==);
  m.def("save_model", &SaveModel);
  m.def("load_model", &LoadModel);

  m.def("scores", &ScorePairs, py::arg("doc"), py::arg("params"));
  m.def(
      "predict",
      [](const Document &d, const ModelParams &p) {
        return Predict(d, p).values();
      },
      py::arg("doc"), py::arg("params"));
  m.def("predict_clusters", &PredictClusters, py::arg("doc"),
        py::arg("params"));
  m.def(
      "loss",
      [](const Document &d, const ModelParams &p, const std::string &kind,
         double beta, double temperature, double lambda) {
        return Loss(d, p, MakeLossConfig(kind, beta, temperature, lambda));
      },
      py::arg("doc"), py::arg("params"), py::arg("kind") = "mr-heuristic",
      py::arg("beta") = 1.0, py::arg("temperature") = 1.0,
      py::arg("lambda_") = 0.0);
  m.def(
      "loss_with_grad",
      [](const Document &d, const ModelParams &p, const std::string &kind,
         double beta, double temperature, double lambda) {
        LossAndGrad lg =
            LossWithGrad(d, p, MakeLossConfig(kind, beta, temperature, lambda));
        auto f = lg.grad.flat();
        Eigen::VectorXd g = Eigen::Map<const Eigen::VectorXd>(
            f.data(), static_cast<Eigen::Index>(f.size()));
        return py::make_tuple(lg.loss, g);
      },
      py::arg("doc"), py::arg("params"), py::arg("kind") = "mr-heuristic",
      py::arg("beta") = 1.0, py::arg("temperature") = 1.0,
      py::arg("lambda_") = 0.0);
  m.def(
      "grad_check",
      [](const Document &d, const ModelParams &p, const std::string &kind,
         double h, std::uint64_t seed, double beta, double temperature) {
        return GradCheck(d, p, MakeLossConfig(kind, beta, temperature, 0.0), h,
                         seed);
      },
      py::arg("doc"), py::arg("params"), py::arg("kind") = "mr-heuristic",
      py::arg("h") = 1e-5, py::arg("seed") = 1, py::arg("beta") = 1.0,
      py::arg("temperature") = 1.0);

  m.def("evaluate", [](const Corpus &docs, const ModelParams &p) {
    return ReportDict(Evaluate(docs, p));
  });
  m.def(
      "error_breakdown",
      [](const Document &d, const std::vector<int> &antecedents) {
        ErrorBreakdown b = ComputeErrorBreakdown(d, AntecedentVector(antecedents));
        py::dict out;
        for (int t = 0; t < kNumMentionTypes; ++t) {
          out[py::str(std::string(MentionTypeName(static_cast<MentionType>(t))))] =
              CountsDict(b.by_type[t]);
        }
        out["total"] = CountsDict(b.Total());
        return out;
      },
      py::arg("doc"), py::arg("antecedents"));

  m.def(
      "train",
      [](const Corpus &train, const Corpus &dev, const std::string &loss,
         double beta, double temperature, double learning_rate, int epochs,
         double lambda, std::uint64_t seed, int hidden_mention,
         int hidden_pair, double init_scale,
         std::optional<ModelParams> init) {
        TrainConfig c;
        c.loss = ParseLossKind(loss);
        c.beta = beta;
        c.temperature = temperature;
        c.learning_rate = learning_rate;
        c.epochs = epochs;
        c.lambda = lambda;
        c.seed = seed;
        c.hidden_mention = hidden_mention;
        c.hidden_pair = hidden_pair;
        c.init_scale = init_scale;
        c.init = std::move(init);
        TrainResult r;
        {
          py::gil_scoped_release release;
          r = Train(train, dev, c);
        }
        py::list history;
        for (const EpochRecord &e : r.history.epochs) {
          py::dict row;
          row["epoch"] = e.epoch;
          row["loss"] = e.mean_loss;
          row["dev"] = ReportDict(e.dev);
          row["seconds"] = e.seconds;
          history.append(row);
        }
        return py::make_tuple(r.params, history, r.history.best_epoch);
      },
      py::arg("train"), py::arg("dev") = Corpus{},
      py::arg("loss") = "mr-heuristic", py::arg("beta") = 1.0,
      py::arg("temperature") = 1.0, py::arg("learning_rate") = 0.05,
      py::arg("epochs") = 10, py::arg("lambda_") = 1e-6, py::arg("seed") = 1,
      py::arg("hidden_mention") = 200, py::arg("hidden_pair") = 700,
      py::arg("init_scale") = 0.1, py::arg("init") = py::none(),
      "Returns (params, history, best_epoch).");

  m.def("adagrad_step",
        [](Eigen::Ref<Eigen::VectorXd> params, const Eigen::VectorXd &grads,
           Eigen::Ref<Eigen::VectorXd> accum, double eta, double eps) {
          AdagradStep({params.data(), static_cast<size_t>(params.size())},
                      {grads.data(), static_cast<size_t>(grads.size())},
                      {accum.data(), static_cast<size_t>(accum.size())}, eta,
                      eps);
        },
        py::arg("params").noconvert(), py::arg("grads"),
        py::arg("accum").noconvert(), py::arg("eta"), py::arg("eps") = 1e-8,
        "Updates float64 arrays in place.");
  m.attr("BETA_GRID") = std::vector<double>(kBetaGrid.begin(), kBetaGrid.end());
}
