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

#include "diffcoref/clustering.h"

#include <vector>

#include "diffcoref/errors.h"

namespace diffcoref {

Clustering AntecedentsToClusters(const AntecedentVector &antecedents) {
  const int n = antecedents.size();
  // a_i <= i, so the root of every earlier mention is already known.
  std::vector<int> root(n);
  for (int i = 0; i < n; ++i) {
    root[i] = antecedents[i] == i ? i : root[antecedents[i]];
  }
  return Clustering::FromLabels(root);
}

AntecedentVector DecodeArgmax(const LinkDistribution &links) {
  LinkDistribution::Validate(links.matrix(), 1e-6);
  const int n = links.size();
  std::vector<int> a(n);
  for (int i = 0; i < n; ++i) {
    int best = 0;
    for (int j = 1; j <= i; ++j) {
      if (links(i, j) > links(i, best)) best = j;
    }
    a[i] = best;
  }
  return AntecedentVector(std::move(a));
}

Clustering MembershipArgmaxClusters(const MembershipMatrix &membership) {
  const int n = membership.size();
  std::vector<int> label(n);
  for (int i = 0; i < n; ++i) {
    int best = 0;
    for (int u = 1; u <= i; ++u) {
      if (membership(i, u) > membership(i, best)) best = u;
    }
    label[i] = best;
  }
  return Clustering::FromLabels(label);
}

}  // namespace diffcoref
