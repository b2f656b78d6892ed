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

// Exact coreference metrics: MUC, B-cubed, CEAF (mention and entity), BLANC
// and LEA. Each metric is exposed twice: as per-document counts that can be
// summed over a corpus (micro-average, the reference scorer's aggregation)
// and as a PRF for a single document.
//
// Ratios with a zero denominator are 0, and P = R = 0 gives F = 0.

#ifndef DIFFCOREF_METRICS_H_
#define DIFFCOREF_METRICS_H_

#include <vector>

#include <Eigen/Dense>

#include "diffcoref/types.h"

namespace diffcoref {

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
  double beta = 1.0;
};

// (1 + b^2) p r / (b^2 p + r), 0 when p + r == 0.
double FBeta(double precision, double recall, double beta = 1.0);

// Ratio with the 0/0 := 0 convention.
inline double SafeDiv(double num, double den) {
  return den == 0.0 ? 0.0 : num / den;
}

// Recall and precision as numerator/denominator pairs.
struct ScoreCounts {
  double recall_num = 0.0;
  double recall_den = 0.0;
  double precision_num = 0.0;
  double precision_den = 0.0;

  ScoreCounts &operator+=(const ScoreCounts &o);
  PRF ToPRF(double beta = 1.0) const;
};

// Link counts for the two BLANC classes.
struct BlancCounts {
  double coref_correct = 0.0;
  double coref_gold = 0.0;
  double coref_sys = 0.0;
  double noncoref_correct = 0.0;
  double noncoref_gold = 0.0;
  double noncoref_sys = 0.0;

  BlancCounts &operator+=(const BlancCounts &o);
  // P and R average the class values, f averages the class F1 scores. A class
  // with no links on either side is left out of the averages.
  PRF ToPRF() const;
};

enum class CeafSimilarity { kMention, kEntity };

struct LeaOptions {
  // Counts a singleton entity as one self-link instead of zero links.
  bool singleton_self_links = false;
};

// |G_v ∩ S_u| for every gold cluster v and system cluster u. Throws
// InputError when the clusterings cover different mention sets.
Eigen::MatrixXd OverlapMatrix(const Clustering &gold, const Clustering &sys);

ScoreCounts MucCounts(const Clustering &gold, const Clustering &sys);
ScoreCounts BCubedCounts(const Clustering &gold, const Clustering &sys);
ScoreCounts CeafCounts(const Clustering &gold, const Clustering &sys,
                       CeafSimilarity similarity);
ScoreCounts LeaCounts(const Clustering &gold, const Clustering &sys,
                      const LeaOptions &options = {});
BlancCounts BlancLinkCounts(const Clustering &gold, const Clustering &sys);

PRF Muc(const Clustering &gold, const Clustering &sys, double beta = 1.0);
PRF BCubed(const Clustering &gold, const Clustering &sys, double beta = 1.0);
PRF Ceaf(const Clustering &gold, const Clustering &sys,
         CeafSimilarity similarity, double beta = 1.0);
PRF Lea(const Clustering &gold, const Clustering &sys, double beta = 1.0,
        const LeaOptions &options = {});
PRF Blanc(const Clustering &gold, const Clustering &sys);

// Mean of the MUC, B-cubed and CEAF_e F scores.
double ConllAverage(double muc_f, double b3_f, double ceafe_f);

// Maximum-weight one-to-one assignment between the rows and columns of a
// (possibly rectangular) nonnegative weight matrix, by the Hungarian method.
// Returns, for every row, the matched column or -1.
std::vector<int> MaxWeightAssignment(const Eigen::MatrixXd &weights);

// Exhaustive search over all assignments; exponential, for cross-checking.
std::vector<int> MaxWeightAssignmentBruteForce(const Eigen::MatrixXd &weights);

}  // namespace diffcoref

#endif  // DIFFCOREF_METRICS_H_
