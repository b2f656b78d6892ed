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

// Core value types shared by all modules. Mentions are 0-based internally;
// everything that is printed or written to disk uses 1-based indices.

#ifndef DIFFCOREF_TYPES_H_
#define DIFFCOREF_TYPES_H_

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace diffcoref {

// A partition of the mentions {0, ..., n-1} into entities. Stored in
// canonical form: members sorted ascending, clusters ordered by their first
// member, so two equal partitions compare equal.
class Clustering {
 public:
  Clustering() = default;

  // Throws InputError unless `clusters` is a partition of {0..n-1} into
  // nonempty sets.
  Clustering(int num_mentions, std::vector<std::vector<int>> clusters);

  // Groups mentions by label; labels are arbitrary integers.
  static Clustering FromLabels(std::span<const int> labels);

  // Convenience for fixtures: 1-based members.
  static Clustering FromOneBased(
      const std::vector<std::vector<int>> &clusters);

  int num_mentions() const { return static_cast<int>(cluster_of_.size()); }
  int num_clusters() const { return static_cast<int>(clusters_.size()); }
  const std::vector<std::vector<int>> &clusters() const { return clusters_; }
  const std::vector<int> &cluster(int c) const { return clusters_[c]; }

  // Ordinal of the cluster containing mention m.
  int cluster_of(int m) const { return cluster_of_[m]; }

  bool operator==(const Clustering &other) const {
    return clusters_ == other.clusters_ &&
           cluster_of_.size() == other.cluster_of_.size();
  }

  // "{{1,2},{3}}" with 1-based mentions.
  std::string ToString() const;

 private:
  std::vector<std::vector<int>> clusters_;
  std::vector<int> cluster_of_;
};

// Antecedent choice a_i for every mention; a_i == i is a self-link.
class AntecedentVector {
 public:
  AntecedentVector() = default;

  // 0-based; throws InputError unless 0 <= a[i] <= i.
  explicit AntecedentVector(std::vector<int> antecedents);
  static AntecedentVector FromOneBased(const std::vector<int> &antecedents);

  int size() const { return static_cast<int>(a_.size()); }
  int operator[](int i) const { return a_[i]; }
  const std::vector<int> &values() const { return a_; }
  bool operator==(const AntecedentVector &) const = default;

 private:
  std::vector<int> a_;
};

// Row-stochastic lower-triangular matrix p(i, j) = p(a_i = j).
class LinkDistribution {
 public:
  LinkDistribution() = default;

  // Throws InvalidDistributionError if an entry is negative or non-finite, an
  // entry above the diagonal is nonzero, or a row sum differs from 1 by more
  // than `tolerance`.
  explicit LinkDistribution(Eigen::MatrixXd p, double tolerance = 1e-9);

  // Skips validation; for matrices that are normalized by construction.
  static LinkDistribution Unchecked(Eigen::MatrixXd p);

  // Throws InvalidDistributionError describing the first violation.
  static void Validate(const Eigen::MatrixXd &p, double tolerance);

  int size() const { return static_cast<int>(p_.rows()); }
  double operator()(int i, int j) const { return p_(i, j); }
  const Eigen::MatrixXd &matrix() const { return p_; }

 private:
  Eigen::MatrixXd p_;
};

// q(i, u) = probability that mention i belongs to the potential entity E_u
// whose first mention is u. Lower-triangular, rows sum to one.
class MembershipMatrix {
 public:
  MembershipMatrix() = default;
  explicit MembershipMatrix(Eigen::MatrixXd q, double temperature = 1.0)
      : q_(std::move(q)), temperature_(temperature) {}

  int size() const { return static_cast<int>(q_.rows()); }
  double operator()(int i, int u) const { return q_(i, u); }
  const Eigen::MatrixXd &matrix() const { return q_; }

  // Temperature the matrix was sharpened with; 1 for the raw recursion.
  double temperature() const { return temperature_; }

  // Elementwise log; structural and underflowed zeros map to -infinity.
  Eigen::MatrixXd LogForm() const;

 private:
  Eigen::MatrixXd q_;
  double temperature_ = 1.0;
};

}  // namespace diffcoref

#endif  // DIFFCOREF_TYPES_H_
