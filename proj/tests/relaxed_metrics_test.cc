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


#include <cmath>
#include <random>

#include "diffcoref/clustering.h"
#include "diffcoref/errors.h"
#include "diffcoref/metrics.h"
#include "diffcoref/relaxed_metrics.h"
#include "diffcoref/soft_entity.h"
#include "doctest.h"
#include "test_util.h"

namespace diffcoref {
namespace {

using doctest::Approx;

MembershipMatrix ThreeMentionMembership() {
  Eigen::MatrixXd p(3, 3);
  p << 1, 0, 0, 0.6, 0.4, 0, 0.5, 0.3, 0.2;
  return Membership(LinkDistribution(p));
}

// One-hot membership: mention i belongs to the entity started by the first
// member of its cluster.
MembershipMatrix OneHot(const Clustering &c) {
  const int n = c.num_mentions();
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) q(i, c.cluster(c.cluster_of(i)).front()) = 1;
  return MembershipMatrix(q);
}

const Clustering kGold = Clustering::FromOneBased({{1, 2, 3}, {4}});
const Clustering kSys = Clustering::FromOneBased({{1, 2}, {3, 4}});

TEST_CASE("Soft size") {
  CHECK(SoftSize(OneHot(Clustering::FromOneBased({{1, 2, 3}})), 0) == 3);
  MembershipMatrix q = ThreeMentionMembership();
  CHECK(SoftSize(q, 1) == Approx(0.52));
  CHECK(SoftSize(OneHot(Clustering::FromOneBased({{1, 2, 3}})), 2) == 0);
  CHECK_THROWS_AS(SoftSize(q, 3), InputError);
}

TEST_CASE("Soft link") {
  CHECK(SoftLink(OneHot(Clustering::FromOneBased({{1, 2, 3}})), 0) == Approx(3));
  MembershipMatrix q = ThreeMentionMembership();
  CHECK(SoftLink(q, 0) == Approx(1.688));
  std::vector<int> only = {0, 2};
  CHECK(SoftLink(q, 0, std::span<const int>(only)) == Approx(0.68));
}

TEST_CASE("Relaxed B-cubed") {
  CHECK(RelaxedBCubed(OneHot(kGold), kGold).value == Approx(1));
  CHECK(RelaxedBCubed(OneHot(kSys), kGold).value == Approx(12.0 / 17));

  // Hand evaluation: column sums (2.28, 0.52, 0.20); the single gold entity
  // of size 3 intersects them in the same amounts.
  MembershipMatrix q = ThreeMentionMembership();
  Clustering all = Clustering::FromOneBased({{1, 2, 3}});
  double c0 = 2.28, c1 = 0.52, c2 = 0.20;
  double recall = (c0 * c0 + c1 * c1 + c2 * c2) / 3 / 3;
  double precision = (c0 + c1 + c2) / 3;
  RelaxedScore s = RelaxedBCubed(q, all);
  CHECK(s.recall == Approx(recall).epsilon(1e-12));
  CHECK(s.recall == Approx(5.5088 / 9).epsilon(1e-12));
  CHECK(s.precision == Approx(precision).epsilon(1e-12));
  CHECK(s.precision == Approx(1.0));
  CHECK(s.value == Approx(0.759374).epsilon(1e-6));
}

TEST_CASE("Relaxed LEA") {
  Clustering pairs = Clustering::FromOneBased({{1, 2}, {3, 4, 5}});
  CHECK(RelaxedLea(OneHot(pairs), pairs).value == Approx(1));
  CHECK(RelaxedLea(OneHot(kSys), kGold).value == Approx(1.0 / 3));
  Clustering singles = Clustering::FromOneBased({{1}, {2}, {3}});
  RelaxedScore s = RelaxedLea(ThreeMentionMembership(), singles);
  CHECK(s.recall == 0);
  CHECK(s.value == 0);
}

TEST_CASE("Relaxed loss") {
  CHECK(RelaxedLoss(OneHot(kGold), kGold, RelaxedMetric::kBCubed, 1, 0, 0) ==
        Approx(-1));
  CHECK(RelaxedLoss(OneHot(kSys), kGold, RelaxedMetric::kBCubed, 1, 0, 0) ==
        Approx(-12.0 / 17));
  double base = RelaxedLoss(OneHot(kSys), kGold, RelaxedMetric::kLea, 1, 0, 1000);
  double reg = RelaxedLoss(OneHot(kSys), kGold, RelaxedMetric::kLea, 1, 1e-6, 1000);
  CHECK(reg - base == Approx(1e-3));
  CHECK_THROWS_AS(RelaxedLoss(OneHot(kSys), kGold, RelaxedMetric::kLea, 1, -1, 0),
                  DomainError);
}

TEST_CASE("Relaxed metrics agree with direct loops") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 1 + static_cast<int>(rng() % 12);
    MembershipMatrix q = Membership(LinkDistribution(testing::RandomLinkMatrix(n, rng)));
    Clustering gold = testing::RandomClustering(n, rng, 1 + rng() % n);
    auto [br, bp] = testing::ReferenceRelaxedBCubed(q.matrix(), gold);
    RelaxedScore b = RelaxedBCubed(q, gold);
    CHECK(b.recall == Approx(br));
    CHECK(b.precision == Approx(bp));
    auto [lr, lp] = testing::ReferenceRelaxedLea(q.matrix(), gold);
    RelaxedScore l = RelaxedLea(q, gold, 1.5);
    CHECK(l.recall == Approx(lr));
    CHECK(l.precision == Approx(lp));
    CHECK(l.value == Approx(testing::F(lp, lr, 1.5)));
  }
}

TEST_CASE("One-hot memberships reproduce the exact metrics") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 1 + static_cast<int>(rng() % 15);
    Clustering gold = testing::RandomClustering(n, rng, 1 + rng() % n);
    Clustering sys = testing::RandomClustering(n, rng, 1 + rng() % n);
    MembershipMatrix q = OneHot(sys);
    for (double beta : {1.0, std::sqrt(1.4), 2.0}) {
      CHECK(RelaxedBCubed(q, gold, beta).value ==
            Approx(BCubed(gold, sys, beta).f).epsilon(1e-12));
      CHECK(RelaxedLea(q, gold, beta).value ==
            Approx(Lea(gold, sys, beta).f).epsilon(1e-12));
    }
  }
}

TEST_CASE("Analytic metric gradients match finite differences") {
  std::mt19937_64 rng(10);
  for (auto metric : {RelaxedMetric::kBCubed, RelaxedMetric::kLea}) {
    for (int trial = 0; trial < 10; ++trial) {
      int n = 2 + static_cast<int>(rng() % 7);
      MembershipMatrix q = Membership(LinkDistribution(testing::RandomLinkMatrix(n, rng)));
      Clustering gold = testing::RandomClustering(n, rng, 1 + rng() % n);
      double beta = trial % 2 ? 1.0 : std::sqrt(1.8);
      RelaxedScoreGrad sg = RelaxedScoreWithGrad(metric, q, gold, beta);
      CHECK(sg.score.value == Approx(RelaxedScoreOf(metric, q, gold, beta).value));
      const double h = 1e-7;
      for (int i = 0; i < n; ++i) {
        for (int u = 0; u <= i; ++u) {
          Eigen::MatrixXd plus = q.matrix(), minus = q.matrix();
          plus(i, u) += h;
          minus(i, u) -= h;
          double fd = (RelaxedScoreOf(metric, MembershipMatrix(plus), gold, beta).value -
                       RelaxedScoreOf(metric, MembershipMatrix(minus), gold, beta).value) /
                      (2 * h);
          CHECK(sg.grad(i, u) == Approx(fd).epsilon(1e-5));
        }
      }
    }
  }
}

}  // namespace
}  // namespace diffcoref
