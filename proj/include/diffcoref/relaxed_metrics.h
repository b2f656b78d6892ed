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

// Differentiable B-cubed and LEA.
//
// Every potential entity E_u is a soft cluster whose members are weighted by
// the (tempered) membership probabilities q(i, u). Set sizes and link counts
// become sums of those weights:
//
//   |S_u|_d       = sum_i q(i, u)
//   link_d(S_u)   = sum_{j<i} q(i, u) q(j, u)
//   |G_v ∩ S_u|_d = sum_{i in G_v} q(i, u)
//
// and the exact precision/recall formulas are evaluated with these in place
// of the hard counts. With one-hot rows the results equal the exact metrics
// of the induced hard clustering.

#ifndef DIFFCOREF_RELAXED_METRICS_H_
#define DIFFCOREF_RELAXED_METRICS_H_

#include <optional>
#include <span>

#include <Eigen/Dense>

#include "diffcoref/types.h"

namespace diffcoref {

// Denominators below this contribute a zero term.
inline constexpr double kSoftDenominatorEpsilon = 1e-12;

enum class RelaxedMetric { kBCubed, kLea };

struct RelaxedScore {
  double value = 0.0;  // F_beta of the soft precision and recall
  double precision = 0.0;
  double recall = 0.0;
  double beta = 1.0;
  double temperature = 1.0;
};

// Throws InputError if u is out of range.
double SoftSize(const MembershipMatrix &q, int u);

// Sum over pairs j < i of q(i, u) q(j, u). When `restrict` is given only
// mentions in it are counted.
double SoftLink(const MembershipMatrix &q, int u,
                std::optional<std::span<const int>> restrict = std::nullopt);

RelaxedScore RelaxedBCubed(const MembershipMatrix &q, const Clustering &gold,
                           double beta = 1.0);
RelaxedScore RelaxedLea(const MembershipMatrix &q, const Clustering &gold,
                        double beta = 1.0);

RelaxedScore RelaxedScoreOf(RelaxedMetric metric, const MembershipMatrix &q,
                            const Clustering &gold, double beta);

// Value and gradient of F_hat with respect to the entries of q.
struct RelaxedScoreGrad {
  RelaxedScore score;
  Eigen::MatrixXd grad;
};
RelaxedScoreGrad RelaxedScoreWithGrad(RelaxedMetric metric,
                                      const MembershipMatrix &q,
                                      const Clustering &gold, double beta);

// -F_hat + lambda * params_l1. Throws DomainError if lambda < 0.
double RelaxedLoss(const MembershipMatrix &q, const Clustering &gold,
                   RelaxedMetric metric, double beta, double lambda,
                   double params_l1);

}  // namespace diffcoref

#endif  // DIFFCOREF_RELAXED_METRICS_H_
