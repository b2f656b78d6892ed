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

// Mention-to-entity probabilities derived from antecedent link
// probabilities.
//
// There is one potential entity E_u per mention u (the entity that m_u
// starts). Mention i joins E_u either by self-linking (u == i) or by linking
// to an earlier mention j that is itself in E_u:
//
//   q(i, u) = sum_{j=u}^{i-1} p(i, j) q(j, u)   for u < i
//   q(i, i) = p(i, i)
//   q(i, u) = 0                                for u > i
//
// Rows of q sum to one and q(i, u) <= q(u, u) for all i > u.

#ifndef DIFFCOREF_SOFT_ENTITY_H_
#define DIFFCOREF_SOFT_ENTITY_H_

#include <Eigen/Dense>

#include "diffcoref/types.h"

namespace diffcoref {

// O(n^3) time, O(n^2) space.
MembershipMatrix Membership(const LinkDistribution &links);

// Given dL/dq, returns dL/dp by a reverse sweep over the recursion.
// `membership` must be Membership(links).
Eigen::MatrixXd MembershipBackward(const LinkDistribution &links,
                                   const MembershipMatrix &membership,
                                   const Eigen::MatrixXd &grad_membership);

inline constexpr int kMaxBruteForceMentions = 8;

// Enumerates all n! antecedent vectors and accumulates the probability mass
// of each induced clustering. Throws InputError when n exceeds
// kMaxBruteForceMentions.
MembershipMatrix BruteForceMembership(const LinkDistribution &links);

// Row-wise softmax of log q / T over the columns u <= i. Zero entries stay
// zero. Throws DomainError if temperature <= 0.
MembershipMatrix TemperedMembership(const MembershipMatrix &membership,
                                    double temperature);

// Given dL/dq_T, returns dL/dq. `tempered` must be
// TemperedMembership(membership, T).
Eigen::MatrixXd TemperedMembershipBackward(const MembershipMatrix &membership,
                                           const MembershipMatrix &tempered,
                                           const Eigen::MatrixXd &grad_tempered);

}  // namespace diffcoref

#endif  // DIFFCOREF_SOFT_ENTITY_H_
