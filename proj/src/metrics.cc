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

#include "diffcoref/metrics.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include "diffcoref/errors.h"

namespace diffcoref {
namespace {

double Links(double size) { return size * (size - 1.0) / 2.0; }

std::vector<double> ClusterSizes(const Clustering &c) {
  std::vector<double> sizes;
  sizes.reserve(c.num_clusters());
  for (const auto &members : c.clusters()) sizes.push_back(members.size());
  return sizes;
}

// Minimum-cost assignment of every row to a distinct column; requires
// rows <= cols. Classic O(rows^2 cols) potentials formulation.
std::vector<int> MinCostAssignment(const Eigen::MatrixXd &cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> row_pot(n + 1, 0.0), col_pot(m + 1, 0.0);
  std::vector<int> match(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> min_slack(m + 1, inf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const int i0 = match[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - row_pot[i0] - col_pot[j];
        if (cur < min_slack[j]) {
          min_slack[j] = cur;
          way[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          row_pot[match[j]] += delta;
          col_pot[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j) {
    if (match[j] != 0) row_to_col[match[j] - 1] = j - 1;
  }
  return row_to_col;
}

double AssignmentWeight(const Eigen::MatrixXd &w, const std::vector<int> &a) {
  double total = 0.0;
  for (size_t r = 0; r < a.size(); ++r) {
    if (a[r] >= 0) total += w(r, a[r]);
  }
  return total;
}

}  // namespace

double FBeta(double precision, double recall, double beta) {
  if (precision + recall == 0.0) return 0.0;
  const double b2 = beta * beta;
  return (1.0 + b2) * precision * recall / (b2 * precision + recall);
}

ScoreCounts &ScoreCounts::operator+=(const ScoreCounts &o) {
  recall_num += o.recall_num;
  recall_den += o.recall_den;
  precision_num += o.precision_num;
  precision_den += o.precision_den;
  return *this;
}

PRF ScoreCounts::ToPRF(double beta) const {
  PRF out;
  out.beta = beta;
  out.recall = SafeDiv(recall_num, recall_den);
  out.precision = SafeDiv(precision_num, precision_den);
  out.f = FBeta(out.precision, out.recall, beta);
  return out;
}

BlancCounts &BlancCounts::operator+=(const BlancCounts &o) {
  coref_correct += o.coref_correct;
  coref_gold += o.coref_gold;
  coref_sys += o.coref_sys;
  noncoref_correct += o.noncoref_correct;
  noncoref_gold += o.noncoref_gold;
  noncoref_sys += o.noncoref_sys;
  return *this;
}

PRF BlancCounts::ToPRF() const {
  const double rc = SafeDiv(coref_correct, coref_gold);
  const double pc = SafeDiv(coref_correct, coref_sys);
  const double rn = SafeDiv(noncoref_correct, noncoref_gold);
  const double pn = SafeDiv(noncoref_correct, noncoref_sys);
  const bool has_coref = coref_gold + coref_sys > 0.0;
  const bool has_noncoref = noncoref_gold + noncoref_sys > 0.0;
  PRF out;
  if (has_coref && has_noncoref) {
    out.recall = (rc + rn) / 2.0;
    out.precision = (pc + pn) / 2.0;
    out.f = (FBeta(pc, rc) + FBeta(pn, rn)) / 2.0;
  } else if (has_coref) {
    out = {pc, rc, FBeta(pc, rc), 1.0};
  } else if (has_noncoref) {
    out = {pn, rn, FBeta(pn, rn), 1.0};
  } else {
    // Fewer than two mentions: there is only one clustering.
    out = {1.0, 1.0, 1.0, 1.0};
  }
  return out;
}

Eigen::MatrixXd OverlapMatrix(const Clustering &gold, const Clustering &sys) {
  if (gold.num_mentions() != sys.num_mentions()) {
    throw InputError("gold has " + std::to_string(gold.num_mentions()) +
                     " mentions but the response has " +
                     std::to_string(sys.num_mentions()));
  }
  Eigen::MatrixXd overlap =
      Eigen::MatrixXd::Zero(gold.num_clusters(), sys.num_clusters());
  for (int m = 0; m < gold.num_mentions(); ++m) {
    overlap(gold.cluster_of(m), sys.cluster_of(m)) += 1.0;
  }
  return overlap;
}

ScoreCounts MucCounts(const Clustering &gold, const Clustering &sys) {
  const Eigen::MatrixXd overlap = OverlapMatrix(gold, sys);
  ScoreCounts c;
  for (int v = 0; v < gold.num_clusters(); ++v) {
    const double parts = (overlap.row(v).array() > 0.0).count();
    c.recall_num += gold.cluster(v).size() - parts;
    c.recall_den += gold.cluster(v).size() - 1.0;
  }
  for (int u = 0; u < sys.num_clusters(); ++u) {
    const double parts = (overlap.col(u).array() > 0.0).count();
    c.precision_num += sys.cluster(u).size() - parts;
    c.precision_den += sys.cluster(u).size() - 1.0;
  }
  return c;
}

ScoreCounts BCubedCounts(const Clustering &gold, const Clustering &sys) {
  const Eigen::MatrixXd overlap = OverlapMatrix(gold, sys);
  const Eigen::MatrixXd squared = overlap.array().square();
  ScoreCounts c;
  for (int v = 0; v < gold.num_clusters(); ++v) {
    c.recall_num += squared.row(v).sum() / gold.cluster(v).size();
  }
  for (int u = 0; u < sys.num_clusters(); ++u) {
    c.precision_num += squared.col(u).sum() / sys.cluster(u).size();
  }
  c.recall_den = gold.num_mentions();
  c.precision_den = sys.num_mentions();
  return c;
}

ScoreCounts CeafCounts(const Clustering &gold, const Clustering &sys,
                       CeafSimilarity similarity) {
  const Eigen::MatrixXd overlap = OverlapMatrix(gold, sys);
  Eigen::MatrixXd phi = overlap;
  if (similarity == CeafSimilarity::kEntity) {
    for (int v = 0; v < phi.rows(); ++v) {
      for (int u = 0; u < phi.cols(); ++u) {
        phi(v, u) = 2.0 * overlap(v, u) /
                    double(gold.cluster(v).size() + sys.cluster(u).size());
      }
    }
  }
  const double best = AssignmentWeight(phi, MaxWeightAssignment(phi));
  ScoreCounts c;
  c.recall_num = best;
  c.precision_num = best;
  if (similarity == CeafSimilarity::kEntity) {
    c.recall_den = gold.num_clusters();
    c.precision_den = sys.num_clusters();
  } else {
    c.recall_den = gold.num_mentions();
    c.precision_den = sys.num_mentions();
  }
  return c;
}

ScoreCounts LeaCounts(const Clustering &gold, const Clustering &sys,
                      const LeaOptions &options) {
  const Eigen::MatrixXd overlap = OverlapMatrix(gold, sys);
  const std::vector<double> gold_sizes = ClusterSizes(gold);
  const std::vector<double> sys_sizes = ClusterSizes(sys);
  auto entity_links = [&](double size) {
    return options.singleton_self_links && size == 1.0 ? 1.0 : Links(size);
  };
  // A singleton intersection is a retrieved self-link only when both
  // entities are that singleton.
  auto common_links = [&](double common, double g, double s) {
    if (options.singleton_self_links && common == 1.0) {
      return g == 1.0 && s == 1.0 ? 1.0 : 0.0;
    }
    return Links(common);
  };
  ScoreCounts c;
  for (int v = 0; v < gold.num_clusters(); ++v) {
    const double links = entity_links(gold_sizes[v]);
    if (links == 0.0) continue;
    double resolved = 0.0;
    for (int u = 0; u < sys.num_clusters(); ++u) {
      resolved += common_links(overlap(v, u), gold_sizes[v], sys_sizes[u]);
    }
    c.recall_num += gold_sizes[v] * resolved / links;
  }
  for (int u = 0; u < sys.num_clusters(); ++u) {
    const double links = entity_links(sys_sizes[u]);
    if (links == 0.0) continue;
    double resolved = 0.0;
    for (int v = 0; v < gold.num_clusters(); ++v) {
      resolved += common_links(overlap(v, u), gold_sizes[v], sys_sizes[u]);
    }
    c.precision_num += sys_sizes[u] * resolved / links;
  }
  c.recall_den = gold.num_mentions();
  c.precision_den = sys.num_mentions();
  return c;
}

BlancCounts BlancLinkCounts(const Clustering &gold, const Clustering &sys) {
  const Eigen::MatrixXd overlap = OverlapMatrix(gold, sys);
  BlancCounts c;
  for (const auto &members : gold.clusters()) c.coref_gold += Links(members.size());
  for (const auto &members : sys.clusters()) c.coref_sys += Links(members.size());
  c.coref_correct = overlap.unaryExpr([](double x) { return Links(x); }).sum();
  const double pairs = Links(gold.num_mentions());
  c.noncoref_gold = pairs - c.coref_gold;
  c.noncoref_sys = pairs - c.coref_sys;
  c.noncoref_correct = pairs - c.coref_gold - c.coref_sys + c.coref_correct;
  return c;
}

PRF Muc(const Clustering &gold, const Clustering &sys, double beta) {
  return MucCounts(gold, sys).ToPRF(beta);
}

PRF BCubed(const Clustering &gold, const Clustering &sys, double beta) {
  return BCubedCounts(gold, sys).ToPRF(beta);
}

PRF Ceaf(const Clustering &gold, const Clustering &sys,
         CeafSimilarity similarity, double beta) {
  return CeafCounts(gold, sys, similarity).ToPRF(beta);
}

PRF Lea(const Clustering &gold, const Clustering &sys, double beta,
        const LeaOptions &options) {
  return LeaCounts(gold, sys, options).ToPRF(beta);
}

PRF Blanc(const Clustering &gold, const Clustering &sys) {
  return BlancLinkCounts(gold, sys).ToPRF();
}

double ConllAverage(double muc_f, double b3_f, double ceafe_f) {
  return (muc_f + b3_f + ceafe_f) / 3.0;
}

std::vector<int> MaxWeightAssignment(const Eigen::MatrixXd &weights) {
  if (weights.rows() == 0 || weights.cols() == 0) {
    return std::vector<int>(weights.rows(), -1);
  }
  if (weights.rows() <= weights.cols()) return MinCostAssignment(-weights);
  const std::vector<int> col_to_row = MinCostAssignment(-weights.transpose());
  std::vector<int> row_to_col(weights.rows(), -1);
  for (size_t c = 0; c < col_to_row.size(); ++c) {
    if (col_to_row[c] >= 0) row_to_col[col_to_row[c]] = static_cast<int>(c);
  }
  return row_to_col;
}

std::vector<int> MaxWeightAssignmentBruteForce(const Eigen::MatrixXd &weights) {
  const int rows = static_cast<int>(weights.rows());
  const int cols = static_cast<int>(weights.cols());
  // Permute the larger side; the first min(rows, cols) slots are matched.
  const int k = std::max(rows, cols);
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best(rows, -1);
  double best_weight = -std::numeric_limits<double>::infinity();
  do {
    std::vector<int> a(rows, -1);
    if (rows <= cols) {
      for (int r = 0; r < rows; ++r) a[r] = perm[r];
    } else {
      for (int c = 0; c < cols; ++c) a[perm[c]] = c;
    }
    const double w = AssignmentWeight(weights, a);
    if (w > best_weight) {
      best_weight = w;
      best = a;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace diffcoref
