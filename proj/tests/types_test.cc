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


#include <random>

#include "diffcoref/clustering.h"
#include "diffcoref/errors.h"
#include "diffcoref/types.h"
#include "doctest.h"
#include "test_util.h"

namespace diffcoref {
namespace {

TEST_CASE("Clustering canonicalizes member and cluster order") {
  Clustering c(4, {{3, 1}, {2, 0}});
  CHECK(c.clusters() == std::vector<std::vector<int>>{{0, 2}, {1, 3}});
  CHECK(c.cluster_of(3) == 1);
  CHECK(c.ToString() == "{{1,3},{2,4}}");
  CHECK(c == Clustering::FromOneBased({{2, 4}, {1, 3}}));
}

TEST_CASE("Clustering rejects non-partitions") {
  CHECK_THROWS_AS(Clustering(3, {{0, 1}}), InputError);
  CHECK_THROWS_AS(Clustering(2, {{0, 1}, {1}}), InputError);
  CHECK_THROWS_AS(Clustering(2, {{0, 1}, {}}), InputError);
  CHECK_THROWS_AS(Clustering(2, {{0, 2}}), InputError);
}

TEST_CASE("Clustering from labels") {
  std::vector<int> labels = {7, 3, 7, -1};
  CHECK(Clustering::FromLabels(labels) ==
        Clustering::FromOneBased({{1, 3}, {2}, {4}}));
  CHECK(Clustering::FromLabels(std::vector<int>{}).num_clusters() == 0);
}

TEST_CASE("AntecedentVector validates bounds") {
  CHECK_NOTHROW(AntecedentVector({0, 0, 1}));
  CHECK_THROWS_AS(AntecedentVector({0, 2}), InputError);
  CHECK_THROWS_AS(AntecedentVector({-1}), InputError);
  CHECK(AntecedentVector::FromOneBased({1, 1, 2}) == AntecedentVector({0, 0, 1}));
}

TEST_CASE("LinkDistribution validation") {
  Eigen::MatrixXd p(2, 2);
  p << 1, 0, 0.6, 0.4;
  CHECK_NOTHROW(LinkDistribution(p));
  Eigen::MatrixXd upper = p;
  upper(0, 1) = 0.1;
  CHECK_THROWS_AS(LinkDistribution{upper}, InvalidDistributionError);
  Eigen::MatrixXd bad_sum = p;
  bad_sum(1, 1) = 0.5;
  CHECK_THROWS_AS(LinkDistribution{bad_sum}, InvalidDistributionError);
  Eigen::MatrixXd negative = p;
  negative(1, 0) = -0.1;
  negative(1, 1) = 1.1;
  CHECK_THROWS_AS(LinkDistribution{negative}, InvalidDistributionError);
  Eigen::MatrixXd nan = p;
  nan(1, 0) = std::nan("");
  CHECK_THROWS_AS(LinkDistribution{nan}, InvalidDistributionError);
  CHECK_THROWS_AS(LinkDistribution(Eigen::MatrixXd::Ones(2, 3)),
                  InvalidDistributionError);
}

TEST_CASE("Antecedents to clusters") {
  CHECK(AntecedentsToClusters(AntecedentVector::FromOneBased({1, 1, 2})) ==
        Clustering::FromOneBased({{1, 2, 3}}));
  CHECK(AntecedentsToClusters(AntecedentVector::FromOneBased({1, 2, 3})) ==
        Clustering::FromOneBased({{1}, {2}, {3}}));
  CHECK(AntecedentsToClusters(AntecedentVector::FromOneBased({1, 1, 3, 2})) ==
        Clustering::FromOneBased({{1, 2, 4}, {3}}));
}

TEST_CASE("Antecedents to clusters always yields a partition") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(rng() % 30);
    AntecedentVector a = testing::RandomAntecedents(n, rng);
    Clustering c = AntecedentsToClusters(a);
    CHECK(c.num_mentions() == n);
    for (int i = 0; i < n; ++i) CHECK(c.cluster_of(i) == c.cluster_of(a[i]));
  }
}

TEST_CASE("Argmax decoding") {
  Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
  CHECK(DecodeArgmax(LinkDistribution(one)).values() == std::vector<int>{0});

  Eigen::MatrixXd p(3, 3);
  p << 1, 0, 0, 0.5, 0.5, 0, 0.5, 0.3, 0.2;
  AntecedentVector a = DecodeArgmax(LinkDistribution(p));
  CHECK(a[1] == 0);  // tie goes to the smaller index
  CHECK(a[2] == 0);

  Eigen::MatrixXd off = p;
  off(2, 2) = 0.3;
  CHECK_THROWS_AS(DecodeArgmax(LinkDistribution::Unchecked(off)),
                  InvalidDistributionError);
}

}  // namespace
}  // namespace diffcoref
