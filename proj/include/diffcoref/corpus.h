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

// Documents with gold mentions and dense features, the synthetic corpus
// generator, the line-delimited JSON feature-corpus format and a minimal
// CoNLL key/response reader and writer.

#ifndef DIFFCOREF_CORPUS_H_
#define DIFFCOREF_CORPUS_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "diffcoref/types.h"

namespace diffcoref {

enum class MentionType { kProper = 0, kNominal = 1, kPronominal = 2 };
inline constexpr int kNumMentionTypes = 3;

std::string_view MentionTypeName(MentionType type);
MentionType ParseMentionType(std::string_view name);

struct Mention {
  MentionType type = MentionType::kProper;
  // First mention (0-based) of the gold entity; equals the mention's own
  // position when the mention starts a new entity.
  int gold_entity = 0;
  std::vector<double> features;

  bool operator==(const Mention &) const = default;
};

// Index of the pair (j, i), j < i, in Document::pair_features.
inline int PairIndex(int i, int j) { return i * (i - 1) / 2 + j; }

class Document {
 public:
  Document() = default;

  // Builds and validates a document. `pair_features` holds one row per pair
  // j < i, in PairIndex order. Throws FormatError on any invariant violation.
  Document(std::string id, int mention_dim, int pair_dim,
           std::vector<Mention> mentions, Eigen::MatrixXd pair_features);

  const std::string &id() const { return id_; }
  int size() const { return static_cast<int>(mentions_.size()); }
  int mention_dim() const { return mention_dim_; }
  int pair_dim() const { return pair_dim_; }
  const std::vector<Mention> &mentions() const { return mentions_; }
  const Mention &mention(int i) const { return mentions_[i]; }

  // num_pairs x pair_dim, row PairIndex(i, j) holds phi_p(m_i, m_j).
  const Eigen::MatrixXd &pair_features() const { return pair_features_; }
  // size x mention_dim, row i holds phi_a(m_i).
  const Eigen::MatrixXd &mention_features() const { return mention_features_; }

  const Clustering &gold_clusters() const { return gold_; }

  // Gold antecedent set C(m_i): earlier mentions of the same entity, or {i}
  // when m_i starts its entity.
  const std::vector<int> &antecedents(int i) const { return antecedents_[i]; }
  bool is_anaphoric(int i) const { return mentions_[i].gold_entity != i; }

  bool operator==(const Document &other) const;

 private:
  std::string id_;
  int mention_dim_ = 0;
  int pair_dim_ = 0;
  std::vector<Mention> mentions_;
  Eigen::MatrixXd mention_features_;
  Eigen::MatrixXd pair_features_;
  Clustering gold_;
  std::vector<std::vector<int>> antecedents_;
};

using Corpus = std::vector<Document>;

inline constexpr int kMaxMentionsPerDocument = 64;

struct SyntheticConfig {
  int num_docs = 100;
  int min_mentions = 8;
  int max_mentions = 24;
  int min_entities = 2;
  int max_entities = 8;
  int mention_dim = 10;
  int pair_dim = 16;
  double noise = 0.1;
  std::uint64_t seed = 42;
  // Dimension of the latent entity prototypes.
  int prototype_dim = 6;
  // Prototype scale per mention type (proper, nominal, pronominal) before
  // noise is added. Weaker scales make a type harder to resolve.
  std::array<double, kNumMentionTypes> type_signal = {1.0, 1.0, 0.45};

  // Throws ConfigError.
  void Validate() const;
};

// Deterministic for a fixed config. Feature layout is described in
// docs/formats.md.
Corpus GenerateSynthetic(const SyntheticConfig &config);

// Line-delimited JSON, one document per line.
void WriteCorpus(const Corpus &docs, std::ostream &out);
Corpus ReadCorpus(std::istream &in);
void SaveCorpus(const Corpus &docs, const std::string &path);
Corpus LoadCorpus(const std::string &path);

// Token span [begin, end] (inclusive, 0-based token positions in a document).
struct Span {
  int begin = 0;
  int end = 0;
  auto operator<=>(const Span &) const = default;
};

// One "#begin document" block of a CoNLL file. Mentions are numbered in the
// order their opening bracket appears.
struct ConllDocument {
  std::string id;
  int num_tokens = 0;
  std::vector<Span> spans;
  Clustering clusters;
};

std::vector<ConllDocument> ParseConll(std::istream &in);
std::vector<ConllDocument> ParseConllKey(const std::string &path);

// Writes one token line per mention with a single-token bracket "(k)" in the
// last column, k being the cluster ordinal.
void WriteConllResponse(std::ostream &out, const std::string &doc_id,
                        const Clustering &clusters);
void WriteConllResponse(const std::string &doc_id, const Clustering &clusters,
                        const std::string &path);

// Re-expresses `response` over the mention numbering of `key` by matching
// spans. Throws InputError if the two documents do not contain the same
// spans.
Clustering AlignToKey(const ConllDocument &key, const ConllDocument &response);

}  // namespace diffcoref

#endif  // DIFFCOREF_CORPUS_H_
