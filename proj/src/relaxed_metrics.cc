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

#include "diffcoref/relaxed_metrics.h"

#include <vector>

#include "diffcoref/errors.h"
#include "diffcoref/metrics.h"

namespace diffcoref {
namespace {

void CheckMentions(const MembershipMatrix &q, const Clustering &gold) {
  if (q.size() != gold.num_mentions()) {
    throw InputError("membership matrix covers " + std::to_string(q.size()) +
                     " mentions but gold covers " +
                     std::to_string(gold.num_mentions()));
  }
}

// Column sums of q restricted to each gold cluster: c(v, u) and the sums of
// squares sq(v, u).
struct GoldSums {
  Eigen::MatrixXd c;
  Eigen::MatrixXd sq;
};

GoldSums SumsByGold(const Eigen::MatrixXd &q, const Clustering &gold) {
  const int n = static_cast<int>(q.rows());
  GoldSums s{Eigen::MatrixXd::Zero(gold.num_clusters(), n),
             Eigen::MatrixXd::Zero(gold.num_clusters(), n)};
  for (int i = 0; i < n; ++i) {
    const int v = gold.cluster_of(i);
    s.c.row(v) += q.row(i);
    s.sq.row(v) += q.row(i).array().square().matrix();
  }
  return s;
}

// dF/dP and dF/dR of F_beta.
void FBetaPartials(double p, double r, double beta, double *dp, double *dr) {
  const double b2 = beta * beta;
  const double den = b2 * p + r;
  if (p + r == 0.0 || den == 0.0) {
    *dp = *dr = 0.0;
    return;
  }
  *dp = (1.0 + b2) * r * r / (den * den);
  *dr = (1.0 + b2) * b2 * p * p / (den * den);
}

RelaxedScoreGrad BCubedImpl(const MembershipMatrix &membership,
                            const Clustering &gold, double beta,
                            bool want_grad) {
  CheckMentions(membership, gold);
  const Eigen::MatrixXd &q = membership.matrix();
  const int n = membership.size();
  const GoldSums sums = SumsByGold(q, gold);
  const Eigen::VectorXd size = q.colwise().sum().transpose();
  const double total = size.sum();

  double recall_num = 0.0;
  for (int v = 0; v < gold.num_clusters(); ++v) {
    recall_num += sums.c.row(v).squaredNorm() / gold.cluster(v).size();
  }
  Eigen::VectorXd common_sq = sums.c.colwise().squaredNorm().transpose();
  double precision_num = 0.0;
  for (int u = 0; u < n; ++u) {
    if (size(u) < kSoftDenominatorEpsilon) continue;
    precision_num += common_sq(u) / size(u);
  }
  RelaxedScoreGrad out;
  out.score.beta = beta;
  out.score.temperature = membership.temperature();
  out.score.recall = SafeDiv(recall_num, n);
  out.score.precision = SafeDiv(precision_num, total);
  out.score.value = FBeta(out.score.precision, out.score.recall, beta);
  if (!want_grad) return out;

  double df_dp, df_dr;
  FBetaPartials(out.score.precision, out.score.recall, beta, &df_dp, &df_dr);
  out.grad = Eigen::MatrixXd::Zero(n, n);
  if (n == 0 || total == 0.0) return out;
  for (int i = 0; i < n; ++i) {
    const int v = gold.cluster_of(i);
    const double gsize = gold.cluster(v).size();
    for (int u = 0; u <= i; ++u) {
      const double dr = 2.0 * sums.c(v, u) / gsize / n;
      double dnum = 0.0;
      if (size(u) >= kSoftDenominatorEpsilon) {
        dnum = 2.0 * sums.c(v, u) / size(u) -
               common_sq(u) / (size(u) * size(u));
      }
      const double dp = dnum / total - precision_num / (total * total);
      out.grad(i, u) = df_dp * dp + df_dr * dr;
    }
  }
  return out;
}

RelaxedScoreGrad LeaImpl(const MembershipMatrix &membership,
                         const Clustering &gold, double beta, bool want_grad) {
  CheckMentions(membership, gold);
  const Eigen::MatrixXd &q = membership.matrix();
  const int n = membership.size();
  const GoldSums sums = SumsByGold(q, gold);
  const Eigen::VectorXd size = q.colwise().sum().transpose();
  const Eigen::VectorXd sq = q.array().square().colwise().sum().transpose();
  const double total = size.sum();

  // Soft links of each soft cluster and those inside gold entities.
  const Eigen::VectorXd links =
      ((size.array().square() - sq.array()) / 2.0).matrix();
  const Eigen::MatrixXd common = (sums.c.array().square() - sums.sq.array()) / 2.0;
  const Eigen::VectorXd common_total = common.colwise().sum().transpose();

  double recall_num = 0.0;
  std::vector<double> recall_weight(gold.num_clusters(), 0.0);
  for (int v = 0; v < gold.num_clusters(); ++v) {
    const double gsize = gold.cluster(v).size();
    const double glinks = gsize * (gsize - 1.0) / 2.0;
    if (glinks == 0.0) continue;
    recall_weight[v] = gsize / glinks;
    recall_num += recall_weight[v] * common.row(v).sum();
  }
  double precision_num = 0.0;
  for (int u = 0; u < n; ++u) {
    if (links(u) < kSoftDenominatorEpsilon) continue;
    precision_num += size(u) * common_total(u) / links(u);
  }
  RelaxedScoreGrad out;
  out.score.beta = beta;
  out.score.temperature = membership.temperature();
  out.score.recall = SafeDiv(recall_num, n);
  out.score.precision = SafeDiv(precision_num, total);
  out.score.value = FBeta(out.score.precision, out.score.recall, beta);
  if (!want_grad) return out;

  double df_dp, df_dr;
  FBetaPartials(out.score.precision, out.score.recall, beta, &df_dp, &df_dr);
  out.grad = Eigen::MatrixXd::Zero(n, n);
  if (n == 0 || total == 0.0) return out;
  for (int i = 0; i < n; ++i) {
    const int v = gold.cluster_of(i);
    for (int u = 0; u <= i; ++u) {
      const double dcommon = sums.c(v, u) - q(i, u);
      const double dr = recall_weight[v] * dcommon / n;
      double dnum = 0.0;
      if (links(u) >= kSoftDenominatorEpsilon) {
        const double dlinks = size(u) - q(i, u);
        dnum = common_total(u) / links(u) + size(u) * dcommon / links(u) -
               size(u) * common_total(u) * dlinks / (links(u) * links(u));
      }
      const double dp = dnum / total - precision_num / (total * total);
      out.grad(i, u) = df_dp * dp + df_dr * dr;
    }
  }
  return out;
}

}  // namespace

double SoftSize(const MembershipMatrix &q, int u) {
  if (u < 0 || u >= q.size()) {
    throw InputError("soft cluster index out of range");
  }
  return q.matrix().col(u).sum();
}

double SoftLink(const MembershipMatrix &q, int u,
                std::optional<std::span<const int>> restrict) {
  if (u < 0 || u >= q.size()) {
    throw InputError("soft cluster index out of range");
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  auto add = [&](int i) {
    const double x = q(i, u);
    sum += x;
    sum_sq += x * x;
  };
  if (restrict) {
    for (int i : *restrict) {
      if (i < 0 || i >= q.size()) throw InputError("mention out of range");
      add(i);
    }
  } else {
    for (int i = 0; i < q.size(); ++i) add(i);
  }
  // sum_{j<i} x_i x_j = ((sum x)^2 - sum x^2) / 2
  return (sum * sum - sum_sq) / 2.0;
}

RelaxedScore RelaxedBCubed(const MembershipMatrix &q, const Clustering &gold,
                           double beta) {
  return BCubedImpl(q, gold, beta, false).score;
}

RelaxedScore RelaxedLea(const MembershipMatrix &q, const Clustering &gold,
                        double beta) {
  return LeaImpl(q, gold, beta, false).score;
}

RelaxedScore RelaxedScoreOf(RelaxedMetric metric, const MembershipMatrix &q,
                            const Clustering &gold, double beta) {
  return metric == RelaxedMetric::kBCubed ? RelaxedBCubed(q, gold, beta)
                                          : RelaxedLea(q, gold, beta);
}

RelaxedScoreGrad RelaxedScoreWithGrad(RelaxedMetric metric,
                                      const MembershipMatrix &q,
                                      const Clustering &gold, double beta) {
  return metric == RelaxedMetric::kBCubed ? BCubedImpl(q, gold, beta, true)
                                          : LeaImpl(q, gold, beta, true);
}

double RelaxedLoss(const MembershipMatrix &q, const Clustering &gold,
                   RelaxedMetric metric, double beta, double lambda,
                   double params_l1) {
  if (lambda < 0.0) throw DomainError("lambda must be nonnegative");
  return -RelaxedScoreOf(metric, q, gold, beta).value + lambda * params_l1;
}

}  // namespace diffcoref
