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

#include "diffcoref/analysis.h"

#include <cstdio>
#include <ostream>
#include <string>

#include "diffcoref/errors.h"

namespace diffcoref {

ErrorCounts &ErrorCounts::operator+=(const ErrorCounts &o) {
  false_anaphor += o.false_anaphor;
  false_new += o.false_new;
  wrong_link += o.wrong_link;
  correct += o.correct;
  return *this;
}

ErrorCounts ErrorBreakdown::Total() const {
  ErrorCounts total;
  for (const auto &c : by_type) total += c;
  return total;
}

ErrorBreakdown &ErrorBreakdown::operator+=(const ErrorBreakdown &o) {
  for (int t = 0; t < kNumMentionTypes; ++t) by_type[t] += o.by_type[t];
  return *this;
}

ErrorBreakdown ComputeErrorBreakdown(const Clustering &gold,
                                     std::span<const MentionType> types,
                                     const AntecedentVector &predicted) {
  const int n = gold.num_mentions();
  if (static_cast<int>(types.size()) != n || predicted.size() != n) {
    throw InputError("error breakdown: gold, types and prediction lengths "
                     "differ");
  }
  ErrorBreakdown out;
  for (int i = 0; i < n; ++i) {
    const int c = gold.cluster_of(i);
    // Clusters are sorted, so the first member is the entity's first mention.
    const bool anaphoric = gold.cluster(c).front() != i;
    const int a = predicted[i];
    ErrorCounts &counts = out.by_type[static_cast<int>(types[i])];
    if (!anaphoric) {
      if (a != i) {
        ++counts.false_anaphor;
      } else {
        ++counts.correct;
      }
    } else if (a == i) {
      ++counts.false_new;
    } else if (gold.cluster_of(a) != c) {
      ++counts.wrong_link;
    } else {
      ++counts.correct;
    }
  }
  return out;
}

ErrorBreakdown ComputeErrorBreakdown(const Document &doc,
                                     const AntecedentVector &predicted) {
  std::vector<MentionType> types;
  types.reserve(doc.size());
  for (const Mention &m : doc.mentions()) types.push_back(m.type);
  return ComputeErrorBreakdown(doc.gold_clusters(), types, predicted);
}

void PrintErrorBreakdown(std::ostream &out, const ErrorBreakdown &breakdown) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%-12s %8s %8s %8s %8s\n", "type", "FA", "FN",
                "WL", "correct");
  out << buf;
  auto row = [&](std::string_view name, const ErrorCounts &c) {
    std::snprintf(buf, sizeof(buf), "%-12.*s %8d %8d %8d %8d\n",
                  static_cast<int>(name.size()), name.data(), c.false_anaphor,
                  c.false_new, c.wrong_link, c.correct);
    out << buf;
  };
  for (int t = 0; t < kNumMentionTypes; ++t) {
    row(MentionTypeName(static_cast<MentionType>(t)), breakdown.by_type[t]);
  }
  row("total", breakdown.Total());
}

void ReportAccumulator::Add(const Clustering &gold, const Clustering &sys) {
  muc_ += MucCounts(gold, sys);
  b_cubed_ += BCubedCounts(gold, sys);
  ceaf_m_ += CeafCounts(gold, sys, CeafSimilarity::kMention);
  ceaf_e_ += CeafCounts(gold, sys, CeafSimilarity::kEntity);
  blanc_ += BlancLinkCounts(gold, sys);
  lea_ += LeaCounts(gold, sys);
}

MetricReport ReportAccumulator::Finish() const {
  MetricReport r;
  r.muc = muc_.ToPRF();
  r.b_cubed = b_cubed_.ToPRF();
  r.ceaf_m = ceaf_m_.ToPRF();
  r.ceaf_e = ceaf_e_.ToPRF();
  r.blanc = blanc_.ToPRF();
  r.lea = lea_.ToPRF();
  r.conll = ConllAverage(r.muc.f, r.b_cubed.f, r.ceaf_e.f);
  return r;
}

MetricReport ComputeMetricReport(const Clustering &gold, const Clustering &sys) {
  ReportAccumulator acc;
  acc.Add(gold, sys);
  return acc.Finish();
}

namespace {

template <typename Fn>
void ForEachRow(const MetricReport &r, Fn fn) {
  fn("MUC", r.muc);
  fn("B3", r.b_cubed);
  fn("CEAF_m", r.ceaf_m);
  fn("CEAF_e", r.ceaf_e);
  fn("BLANC", r.blanc);
  fn("LEA", r.lea);
}

}  // namespace

void PrintReport(std::ostream &out, const MetricReport &report) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%-8s %8s %8s %8s\n", "metric", "R", "P",
                "F1");
  out << buf;
  ForEachRow(report, [&](const char *name, const PRF &s) {
    std::snprintf(buf, sizeof(buf), "%-8s %8.2f %8.2f %8.2f\n", name,
                  100.0 * s.recall, 100.0 * s.precision, 100.0 * s.f);
    out << buf;
  });
  std::snprintf(buf, sizeof(buf), "%-8s %8s %8s %8.2f\n", "CoNLL", "", "",
                100.0 * report.conll);
  out << buf;
}

void WriteReportCsv(std::ostream &out, const MetricReport &report) {
  char buf[160];
  out << "metric,recall,precision,f1\n";
  ForEachRow(report, [&](const char *name, const PRF &s) {
    std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%.6f\n", name, s.recall,
                  s.precision, s.f);
    out << buf;
  });
  std::snprintf(buf, sizeof(buf), "CoNLL,,,%.6f\n", report.conll);
  out << buf;
}

}  // namespace diffcoref
