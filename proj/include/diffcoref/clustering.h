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

#ifndef DIFFCOREF_CLUSTERING_H_
#define DIFFCOREF_CLUSTERING_H_

#include "diffcoref/types.h"

namespace diffcoref {

// Clusters are the chains rooted at self-linked mentions.
Clustering AntecedentsToClusters(const AntecedentVector &antecedents);

// a_i = argmax_j p(a_i = j), ties to the smallest j. Rows must be normalized
// to within 1e-6.
AntecedentVector DecodeArgmax(const LinkDistribution &links);

// Groups mention i with the argmax column of row i of `membership`.
Clustering MembershipArgmaxClusters(const MembershipMatrix &membership);

}  // namespace diffcoref

#endif  // DIFFCOREF_CLUSTERING_H_
