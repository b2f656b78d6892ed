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

#include "diffcoref/soft_entity.h"

#include <cmath>
#include <limits>
#include <vector>

#include "diffcoref/errors.h"

namespace diffcoref {
namespace {

void EnumerateAntecedents(const Eigen::MatrixXd &p, int i, double weight,
                          std::vector<int> &root, Eigen::MatrixXd &q) {
  const int n = static_cast<int>(p.rows());
  if (i == n) {
    for (int m = 0; m < n; ++m) q(m, root[m]) += weight;
    return;
  }
  for (int j = 0; j <= i; ++j) {
    const double w = weight * p(i, j);
    if (w == 0.0) continue;
    root[i] = j == i ? i : root[j];
    EnumerateAntecedents(p, i + 1, w, root, q);
  }
}

}  // namespace

MembershipMatrix Membership(const LinkDistribution &links) {
  LinkDistribution::Validate(links.matrix(), 1e-6);
  const int n = links.size();
  const Eigen::MatrixXd &p = links.matrix();
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int u = 0; u < i; ++u) {
      double sum = 0.0;
      for (int j = u; j < i; ++j) sum += p(i, j) * q(j, u);
      q(i, u) = sum;
    }
    q(i, i) = p(i, i);
  }
  return MembershipMatrix(std::move(q));
}

Eigen::MatrixXd MembershipBackward(const LinkDistribution &links,
                                   const MembershipMatrix &membership,
                                   const Eigen::MatrixXd &grad_membership) {
  const int n = links.size();
  const Eigen::MatrixXd &p = links.matrix();
  const Eigen::MatrixXd &q = membership.matrix();
  // Adjoint of q(i, u) grows as later rows push gradient back into it, so
  // rows are finalized from last to first.
  Eigen::MatrixXd adj = grad_membership;
  Eigen::MatrixXd grad_p = Eigen::MatrixXd::Zero(n, n);
  for (int i = n - 1; i >= 0; --i) {
    grad_p(i, i) += adj(i, i);
    for (int u = 0; u < i; ++u) {
      const double g = adj(i, u);
      if (g == 0.0) continue;
      for (int j = u; j < i; ++j) {
        grad_p(i, j) += g * q(j, u);
        adj(j, u) += g * p(i, j);
      }
    }
  }
  return grad_p;
}

MembershipMatrix BruteForceMembership(const LinkDistribution &links) {
  const int n = links.size();
  if (n > kMaxBruteForceMentions) {
    throw InputError("brute-force membership is limited to " +
                     std::to_string(kMaxBruteForceMentions) + " mentions");
  }
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  std::vector<int> root(n, 0);
  EnumerateAntecedents(links.matrix(), 0, 1.0, root, q);
  return MembershipMatrix(std::move(q));
}

MembershipMatrix TemperedMembership(const MembershipMatrix &membership,
                                    double temperature) {
  if (!(temperature > 0.0)) {
    throw DomainError("temperature must be positive");
  }
  const int n = membership.size();
  const Eigen::MatrixXd log_q = membership.LogForm();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double top = -std::numeric_limits<double>::infinity();
    for (int u = 0; u <= i; ++u) top = std::max(top, log_q(i, u));
    if (!std::isfinite(top)) continue;
    double z = 0.0;
    for (int u = 0; u <= i; ++u) {
      if (!std::isfinite(log_q(i, u))) continue;
      out(i, u) = std::exp((log_q(i, u) - top) / temperature);
      z += out(i, u);
    }
    out.row(i) /= z;
  }
  return MembershipMatrix(std::move(out), temperature);
}

Eigen::MatrixXd TemperedMembershipBackward(
    const MembershipMatrix &membership, const MembershipMatrix &tempered,
    const Eigen::MatrixXd &grad_tempered) {
  const int n = membership.size();
  const double t = tempered.temperature();
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double mean = 0.0;
    for (int u = 0; u <= i; ++u) mean += grad_tempered(i, u) * tempered(i, u);
    for (int u = 0; u <= i; ++u) {
      const double q = membership(i, u);
      if (q <= 0.0) continue;
      // d q_T / d log q = q_T (delta - q_T) / T, then d log q / d q = 1/q.
      grad(i, u) = tempered(i, u) * (grad_tempered(i, u) - mean) / (t * q);
    }
  }
  return grad;
}

}  // namespace diffcoref
