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

#ifndef DIFFCOREF_ANALYSIS_H_
#define DIFFCOREF_ANALYSIS_H_

#include <array>
#include <iosfwd>
#include <span>

#include "diffcoref/corpus.h"
#include "diffcoref/metrics.h"
#include "diffcoref/types.h"

namespace diffcoref {

struct ErrorCounts {
  int false_anaphor = 0;
  int false_new = 0;
  int wrong_link = 0;
  int correct = 0;

  int total() const { return false_anaphor + false_new + wrong_link + correct; }
  ErrorCounts &operator+=(const ErrorCounts &o);
  bool operator==(const ErrorCounts &) const = default;
};

// Antecedent errors per mention type.
//   FA: gold non-anaphoric mention given an antecedent.
//   FN: gold anaphoric mention self-linked.
//   WL: gold anaphoric mention linked outside its gold entity.
struct ErrorBreakdown {
  std::array<ErrorCounts, kNumMentionTypes> by_type{};

  ErrorCounts Total() const;
  ErrorBreakdown &operator+=(const ErrorBreakdown &o);
};

// Throws InputError on a length mismatch.
ErrorBreakdown ComputeErrorBreakdown(const Clustering &gold,
                                     std::span<const MentionType> types,
                                     const AntecedentVector &predicted);
ErrorBreakdown ComputeErrorBreakdown(const Document &doc,
                                     const AntecedentVector &predicted);

void PrintErrorBreakdown(std::ostream &out, const ErrorBreakdown &breakdown);

struct MetricReport {
  PRF muc;
  PRF b_cubed;
  PRF ceaf_m;
  PRF ceaf_e;
  PRF blanc;
  PRF lea;
  double conll = 0.0;
};

// Sums metric counts over documents before dividing.
class ReportAccumulator {
 public:
  void Add(const Clustering &gold, const Clustering &sys);
  MetricReport Finish() const;

 private:
  ScoreCounts muc_;
  ScoreCounts b_cubed_;
  ScoreCounts ceaf_m_;
  ScoreCounts ceaf_e_;
  BlancCounts blanc_;
  ScoreCounts lea_;
};

MetricReport ComputeMetricReport(const Clustering &gold, const Clustering &sys);

// Aligned text table, one row per metric plus the CoNLL average, values in
// percent.
void PrintReport(std::ostream &out, const MetricReport &report);
// metric,recall,precision,f1 rows with values in [0, 1].
void WriteReportCsv(std::ostream &out, const MetricReport &report);

}  // namespace diffcoref

#endif  // DIFFCOREF_ANALYSIS_H_
