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

#include "diffcoref/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

#include "diffcoref/errors.h"

namespace diffcoref {
namespace {

using nlohmann::json;

// Distance buckets for i - j: 1, 2, 3-4, 5-8, 9+.
constexpr int kNumDistanceBuckets = 5;

int DistanceBucket(int distance) {
  if (distance <= 1) return 0;
  if (distance == 2) return 1;
  if (distance <= 4) return 2;
  if (distance <= 8) return 3;
  return 4;
}

// Mention-type mix of first mentions and of subsequent mentions.
constexpr std::array<double, 3> kFirstMentionTypes = {0.6, 0.3, 0.1};
constexpr std::array<double, 3> kLaterMentionTypes = {0.2, 0.3, 0.5};

double Cosine(const Eigen::VectorXd &a, const Eigen::VectorXd &b) {
  const double den = a.norm() * b.norm();
  return den == 0.0 ? 0.0 : a.dot(b) / den;
}

std::string_view Trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

bool StartsWith(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

}  // namespace

std::string_view MentionTypeName(MentionType type) {
  switch (type) {
    case MentionType::kProper:
      return "proper";
    case MentionType::kNominal:
      return "nominal";
    case MentionType::kPronominal:
      return "pronominal";
  }
  return "?";
}

MentionType ParseMentionType(std::string_view name) {
  if (name == "proper") return MentionType::kProper;
  if (name == "nominal") return MentionType::kNominal;
  if (name == "pronominal") return MentionType::kPronominal;
  throw FormatError("unknown mention type '" + std::string(name) + "'");
}

Document::Document(std::string id, int mention_dim, int pair_dim,
                   std::vector<Mention> mentions, Eigen::MatrixXd pair_features)
    : id_(std::move(id)),
      mention_dim_(mention_dim),
      pair_dim_(pair_dim),
      mentions_(std::move(mentions)),
      pair_features_(std::move(pair_features)) {
  if (mention_dim_ < 1 || pair_dim_ < 1) {
    throw FormatError("document " + id_ + ": feature dimensions must be >= 1");
  }
  const int n = size();
  mention_features_.resize(n, mention_dim_);
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) {
    const Mention &m = mentions_[i];
    if (static_cast<int>(m.features.size()) != mention_dim_) {
      throw FormatError("document " + id_ + ", mention " +
                        std::to_string(i + 1) + ": expected " +
                        std::to_string(mention_dim_) + " features, got " +
                        std::to_string(m.features.size()));
    }
    if (m.gold_entity < 0 || m.gold_entity > i ||
        mentions_[m.gold_entity].gold_entity != m.gold_entity) {
      throw FormatError("document " + id_ + ", mention " +
                        std::to_string(i + 1) +
                        ": gold entity must be the index of an earlier "
                        "first mention");
    }
    for (int k = 0; k < mention_dim_; ++k) mention_features_(i, k) = m.features[k];
    labels[i] = m.gold_entity;
  }
  const int num_pairs = n * (n - 1) / 2;
  if (pair_features_.rows() != num_pairs || (num_pairs > 0 && pair_features_.cols() != pair_dim_)) {
    throw FormatError("document " + id_ + ": expected " +
                      std::to_string(num_pairs) + " pair feature rows of width " +
                      std::to_string(pair_dim_));
  }
  if (num_pairs == 0) pair_features_.resize(0, pair_dim_);
  gold_ = Clustering::FromLabels(labels);
  antecedents_.resize(n);
  for (int i = 0; i < n; ++i) {
    if (labels[i] == i) {
      antecedents_[i] = {i};
      continue;
    }
    for (int j = 0; j < i; ++j) {
      if (labels[j] == labels[i]) antecedents_[i].push_back(j);
    }
  }
}

bool Document::operator==(const Document &other) const {
  return id_ == other.id_ && mention_dim_ == other.mention_dim_ &&
         pair_dim_ == other.pair_dim_ && mentions_ == other.mentions_ &&
         pair_features_ == other.pair_features_;
}

void SyntheticConfig::Validate() const {
  if (num_docs < 0) throw ConfigError("num_docs must be >= 0");
  if (min_mentions < 1 || min_mentions > max_mentions) {
    throw ConfigError("mentions per document: empty range");
  }
  if (max_mentions > kMaxMentionsPerDocument) {
    throw ConfigError("at most " + std::to_string(kMaxMentionsPerDocument) +
                      " mentions per document");
  }
  if (min_entities < 1 || min_entities > max_entities) {
    throw ConfigError("entities per document: empty range");
  }
  if (min_entities > min_mentions) {
    throw ConfigError("min_entities cannot exceed min_mentions");
  }
  if (mention_dim < 1 || pair_dim < 1) {
    throw ConfigError("feature dimensions must be >= 1");
  }
  if (prototype_dim < 1) throw ConfigError("prototype_dim must be >= 1");
  for (double t : type_signal) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw ConfigError("type_signal entries must be finite and > 0");
    }
  }
  if (!(noise >= 0.0) || !std::isfinite(noise)) {
    throw ConfigError("noise must be a finite value >= 0");
  }
}

Corpus GenerateSynthetic(const SyntheticConfig &config) {
  config.Validate();
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto uniform_int = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  std::discrete_distribution<int> first_type(kFirstMentionTypes.begin(),
                                             kFirstMentionTypes.end());
  std::discrete_distribution<int> later_type(kLaterMentionTypes.begin(),
                                             kLaterMentionTypes.end());
  const double sigma = config.noise;

  Corpus docs;
  docs.reserve(config.num_docs);
  for (int d = 0; d < config.num_docs; ++d) {
    const int n = uniform_int(config.min_mentions, config.max_mentions);
    const int k = uniform_int(config.min_entities,
                              std::min(config.max_entities, n));

    // Every entity gets at least one mention.
    std::vector<int> latent(n);
    for (int i = 0; i < n; ++i) latent[i] = i < k ? i : uniform_int(0, k - 1);
    std::shuffle(latent.begin(), latent.end(), rng);

    std::vector<Eigen::VectorXd> prototypes(k);
    for (auto &p : prototypes) {
      p = Eigen::VectorXd::NullaryExpr(config.prototype_dim,
                                       [&] { return gauss(rng); });
      p.normalize();
    }

    std::vector<int> first_of(k, -1);
    std::vector<Mention> mentions(n);
    std::vector<Eigen::VectorXd> observed(n);
    for (int i = 0; i < n; ++i) {
      const int e = latent[i];
      const bool is_first = first_of[e] == -1;
      if (is_first) first_of[e] = i;
      Mention &m = mentions[i];
      m.gold_entity = first_of[e];
      m.type = static_cast<MentionType>(is_first ? first_type(rng)
                                                 : later_type(rng));
      observed[i] = config.type_signal[static_cast<int>(m.type)] * prototypes[e];
      if (sigma > 0.0) {
        for (int t = 0; t < config.prototype_dim; ++t) {
          observed[i](t) += sigma * gauss(rng);
        }
      }
      // [type one-hot | relative position | prototype slice | zero padding]
      m.features.assign(config.mention_dim, 0.0);
      std::vector<double> slots(kNumMentionTypes + 1, 0.0);
      slots[static_cast<int>(m.type)] = 1.0;
      slots[kNumMentionTypes] = n > 1 ? double(i) / (n - 1) : 0.0;
      for (int t = 0; t < config.mention_dim; ++t) {
        const int proto_slot = t - static_cast<int>(slots.size());
        if (proto_slot < 0) {
          m.features[t] = slots[t] + (sigma > 0.0 ? sigma * gauss(rng) : 0.0);
        } else if (proto_slot < config.prototype_dim) {
          m.features[t] = observed[i](proto_slot);
        } else {
          m.features[t] = sigma > 0.0 ? sigma * gauss(rng) : 0.0;
        }
      }
    }

    // [prototype cosine | distance bucket one-hot | type-pair one-hot |
    //  zero padding]
    const int num_pairs = n * (n - 1) / 2;
    Eigen::MatrixXd pairs(num_pairs, config.pair_dim);
    for (int i = 1; i < n; ++i) {
      for (int j = 0; j < i; ++j) {
        std::vector<double> onehots(kNumDistanceBuckets +
                                        kNumMentionTypes * kNumMentionTypes,
                                    0.0);
        onehots[DistanceBucket(i - j)] = 1.0;
        onehots[kNumDistanceBuckets +
                static_cast<int>(mentions[j].type) * kNumMentionTypes +
                static_cast<int>(mentions[i].type)] = 1.0;
        auto row = pairs.row(PairIndex(i, j));
        for (int t = 0; t < config.pair_dim; ++t) {
          if (t == 0) {
            row(t) = Cosine(observed[i], observed[j]);
            continue;
          }
          const int slot = t - 1;
          const double base =
              slot < static_cast<int>(onehots.size()) ? onehots[slot] : 0.0;
          row(t) = base + (sigma > 0.0 ? sigma * gauss(rng) : 0.0);
        }
      }
    }

    char id[32];
    std::snprintf(id, sizeof(id), "doc%04d", d);
    docs.emplace_back(id, config.mention_dim, config.pair_dim,
                      std::move(mentions), std::move(pairs));
  }
  return docs;
}

void WriteCorpus(const Corpus &docs, std::ostream &out) {
  for (const Document &doc : docs) {
    json j;
    j["id"] = doc.id();
    j["d_a"] = doc.mention_dim();
    j["d_p"] = doc.pair_dim();
    json mentions = json::array();
    for (int i = 0; i < doc.size(); ++i) {
      const Mention &m = doc.mention(i);
      mentions.push_back({{"index", i + 1},
                          {"type", MentionTypeName(m.type)},
                          {"gold_entity", m.gold_entity + 1},
                          {"features", m.features}});
    }
    j["mentions"] = std::move(mentions);
    json pairs = json::array();
    for (int i = 1; i < doc.size(); ++i) {
      for (int jj = 0; jj < i; ++jj) {
        const auto row = doc.pair_features().row(PairIndex(i, jj));
        pairs.push_back({{"j", jj + 1},
                         {"i", i + 1},
                         {"features", std::vector<double>(row.begin(), row.end())}});
      }
    }
    j["pairs"] = std::move(pairs);
    out << j.dump() << '\n';
  }
}

Corpus ReadCorpus(std::istream &in) {
  Corpus docs;
  std::string line;
  int line_no = 0;
  int d_a = -1, d_p = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error &e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    try {
      const std::string id = j.at("id").get<std::string>();
      const int mention_dim = j.at("d_a").get<int>();
      const int pair_dim = j.at("d_p").get<int>();
      if (d_a == -1) {
        d_a = mention_dim;
        d_p = pair_dim;
      } else if (mention_dim != d_a || pair_dim != d_p) {
        throw FormatError("line " + std::to_string(line_no) + ": document " +
                          id + " has dims (" + std::to_string(mention_dim) +
                          ", " + std::to_string(pair_dim) +
                          ") but earlier documents have (" +
                          std::to_string(d_a) + ", " + std::to_string(d_p) +
                          ")");
      }
      std::vector<Mention> mentions;
      for (const json &jm : j.at("mentions")) {
        const int index = jm.at("index").get<int>();
        if (index != static_cast<int>(mentions.size()) + 1) {
          throw FormatError("line " + std::to_string(line_no) +
                            ": mention indices must be 1, 2, ... in order");
        }
        Mention m;
        m.type = ParseMentionType(jm.at("type").get<std::string>());
        m.gold_entity = jm.at("gold_entity").get<int>() - 1;
        m.features = jm.at("features").get<std::vector<double>>();
        mentions.push_back(std::move(m));
      }
      const int n = static_cast<int>(mentions.size());
      const int num_pairs = n * (n - 1) / 2;
      Eigen::MatrixXd pairs(num_pairs, pair_dim);
      std::vector<bool> seen(num_pairs, false);
      for (const json &jp : j.at("pairs")) {
        const int a = jp.at("j").get<int>() - 1;
        const int b = jp.at("i").get<int>() - 1;
        if (a < 0 || a >= b || b >= n) {
          throw FormatError("line " + std::to_string(line_no) + ": pair (" +
                            std::to_string(a + 1) + ", " +
                            std::to_string(b + 1) + ") is not j < i <= n");
        }
        const int row = PairIndex(b, a);
        if (seen[row]) {
          throw FormatError("line " + std::to_string(line_no) +
                            ": duplicate pair (" + std::to_string(a + 1) +
                            ", " + std::to_string(b + 1) + ")");
        }
        seen[row] = true;
        const auto features = jp.at("features").get<std::vector<double>>();
        if (static_cast<int>(features.size()) != pair_dim) {
          throw FormatError("line " + std::to_string(line_no) + ": pair (" +
                            std::to_string(a + 1) + ", " +
                            std::to_string(b + 1) + ") has " +
                            std::to_string(features.size()) +
                            " features, expected " + std::to_string(pair_dim));
        }
        for (int t = 0; t < pair_dim; ++t) pairs(row, t) = features[t];
      }
      for (int i = 1; i < n; ++i) {
        for (int a = 0; a < i; ++a) {
          if (!seen[PairIndex(i, a)]) {
            throw FormatError("line " + std::to_string(line_no) +
                              ": missing pair (" + std::to_string(a + 1) +
                              ", " + std::to_string(i + 1) + ")");
          }
        }
      }
      try {
        docs.emplace_back(id, mention_dim, pair_dim, std::move(mentions),
                          std::move(pairs));
      } catch (const FormatError &e) {
        throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
      }
    } catch (const json::exception &e) {
      throw ParseError(std::string("bad document record: ") + e.what(),
                       line_no);
    }
  }
  return docs;
}

void SaveCorpus(const Corpus &docs, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  WriteCorpus(docs, out);
  if (!out) throw Error("failed writing " + path);
}

Corpus LoadCorpus(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open corpus file " + path);
  try {
    return ReadCorpus(in);
  } catch (const ParseError &e) {
    throw ParseError(path + ": " + e.what());
  } catch (const FormatError &e) {
    throw FormatError(path + ": " + e.what());
  }
}

std::vector<ConllDocument> ParseConll(std::istream &in) {
  struct PendingMention {
    Span span;
    int entity;
  };
  std::vector<ConllDocument> out;
  std::string line;
  int line_no = 0;
  bool in_doc = false;
  ConllDocument doc;
  std::vector<PendingMention> mentions;
  // Entity name -> stack of indices into `mentions` awaiting a close bracket.
  std::map<std::string, std::vector<int>> open;
  std::map<std::string, int> entity_ids;

  auto fail = [&](const std::string &what) -> ParseError {
    const std::string where = in_doc ? "document " + doc.id + ": " : "";
    return ParseError(where + what, line_no);
  };
  auto entity_id = [&](const std::string &name) {
    auto [it, inserted] =
        entity_ids.emplace(name, static_cast<int>(entity_ids.size()));
    return it->second;
  };

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = Trim(line);
    if (StartsWith(text, "#begin document")) {
      if (in_doc) throw fail("#begin document inside an open document");
      in_doc = true;
      doc = ConllDocument{};
      doc.id = std::string(Trim(text.substr(15)));
      mentions.clear();
      open.clear();
      entity_ids.clear();
      continue;
    }
    if (StartsWith(text, "#end document")) {
      if (!in_doc) throw fail("#end document without #begin document");
      for (const auto &[name, stack] : open) {
        if (!stack.empty()) throw fail("unclosed mention of entity " + name);
      }
      std::vector<int> labels;
      for (const auto &m : mentions) {
        doc.spans.push_back(m.span);
        labels.push_back(m.entity);
      }
      doc.clusters = Clustering::FromLabels(labels);
      out.push_back(std::move(doc));
      in_doc = false;
      continue;
    }
    if (text.empty() || text.front() == '#') continue;
    if (!in_doc) throw fail("token line outside a document");

    const int token = doc.num_tokens++;
    const std::string_view column = text.substr(text.find_last_of(" \t") + 1);
    if (column == "-" || column == "_") continue;
    size_t start = 0;
    while (start <= column.size()) {
      size_t bar = column.find('|', start);
      if (bar == std::string_view::npos) bar = column.size();
      std::string_view part = column.substr(start, bar - start);
      start = bar + 1;
      if (part.empty()) throw fail("empty coreference annotation");
      const bool opens = part.front() == '(';
      const bool closes = part.back() == ')';
      if (opens) part.remove_prefix(1);
      if (closes && !part.empty()) part.remove_suffix(1);
      if (part.empty() || (!opens && !closes)) {
        throw fail("malformed coreference annotation '" +
                   std::string(column) + "'");
      }
      const std::string name(part);
      if (opens && closes) {
        mentions.push_back({{token, token}, entity_id(name)});
      } else if (opens) {
        open[name].push_back(static_cast<int>(mentions.size()));
        mentions.push_back({{token, -1}, entity_id(name)});
      } else {
        auto it = open.find(name);
        if (it == open.end() || it->second.empty()) {
          throw fail("closing bracket for entity " + name +
                     " without an open mention");
        }
        mentions[it->second.back()].span.end = token;
        it->second.pop_back();
      }
    }
  }
  if (in_doc) throw fail("missing #end document");
  return out;
}

std::vector<ConllDocument> ParseConllKey(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open CoNLL file " + path);
  try {
    return ParseConll(in);
  } catch (const ParseError &e) {
    throw ParseError(path + ": " + e.what());
  }
}

void WriteConllResponse(std::ostream &out, const std::string &doc_id,
                        const Clustering &clusters) {
  out << "#begin document " << doc_id << '\n';
  for (int m = 0; m < clusters.num_mentions(); ++m) {
    out << "doc\t0\t" << m << "\t-\t(" << clusters.cluster_of(m) << ")\n";
  }
  out << "#end document\n";
}

void WriteConllResponse(const std::string &doc_id, const Clustering &clusters,
                        const std::string &path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  WriteConllResponse(out, doc_id, clusters);
  if (!out) throw Error("failed writing " + path);
}

Clustering AlignToKey(const ConllDocument &key, const ConllDocument &response) {
  std::map<Span, int> key_index;
  for (size_t m = 0; m < key.spans.size(); ++m) {
    if (!key_index.emplace(key.spans[m], static_cast<int>(m)).second) {
      throw InputError("document " + key.id + ": duplicate key mention");
    }
  }
  if (response.spans.size() != key.spans.size()) {
    throw InputError("document " + key.id + ": key has " +
                     std::to_string(key.spans.size()) +
                     " mentions, response has " +
                     std::to_string(response.spans.size()));
  }
  std::vector<int> labels(key.spans.size(), -1);
  for (size_t m = 0; m < response.spans.size(); ++m) {
    auto it = key_index.find(response.spans[m]);
    if (it == key_index.end() || labels[it->second] != -1) {
      throw InputError("document " + key.id +
                       ": response mentions differ from key mentions");
    }
    labels[it->second] = response.clusters.cluster_of(static_cast<int>(m));
  }
  return Clustering::FromLabels(labels);
}

}  // namespace diffcoref
