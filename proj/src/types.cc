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

#include "diffcoref/types.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "diffcoref/errors.h"

namespace diffcoref {

Clustering::Clustering(int num_mentions,
                       std::vector<std::vector<int>> clusters) {
  if (num_mentions < 0) throw InputError("negative mention count");
  cluster_of_.assign(num_mentions, -1);
  for (auto &c : clusters) {
    if (c.empty()) throw InputError("empty cluster");
    std::sort(c.begin(), c.end());
  }
  std::sort(clusters.begin(), clusters.end(),
            [](const auto &a, const auto &b) { return a.front() < b.front(); });
  for (size_t k = 0; k < clusters.size(); ++k) {
    for (int m : clusters[k]) {
      if (m < 0 || m >= num_mentions) {
        throw InputError("mention " + std::to_string(m + 1) +
                         " outside 1.." + std::to_string(num_mentions));
      }
      if (cluster_of_[m] != -1) {
        throw InputError("mention " + std::to_string(m + 1) +
                         " appears in two clusters");
      }
      cluster_of_[m] = static_cast<int>(k);
    }
  }
  for (int m = 0; m < num_mentions; ++m) {
    if (cluster_of_[m] == -1) {
      throw InputError("mention " + std::to_string(m + 1) +
                       " is not in any cluster");
    }
  }
  clusters_ = std::move(clusters);
}

Clustering Clustering::FromLabels(std::span<const int> labels) {
  std::map<int, std::vector<int>> groups;
  for (size_t m = 0; m < labels.size(); ++m) {
    groups[labels[m]].push_back(static_cast<int>(m));
  }
  std::vector<std::vector<int>> clusters;
  clusters.reserve(groups.size());
  for (auto &[label, members] : groups) clusters.push_back(std::move(members));
  return Clustering(static_cast<int>(labels.size()), std::move(clusters));
}

Clustering Clustering::FromOneBased(
    const std::vector<std::vector<int>> &clusters) {
  std::vector<std::vector<int>> zero_based;
  int n = 0;
  for (const auto &c : clusters) {
    auto &out = zero_based.emplace_back();
    for (int m : c) {
      out.push_back(m - 1);
      n = std::max(n, m);
    }
  }
  return Clustering(n, std::move(zero_based));
}

std::string Clustering::ToString() const {
  std::ostringstream out;
  out << '{';
  for (size_t k = 0; k < clusters_.size(); ++k) {
    if (k > 0) out << ',';
    out << '{';
    for (size_t t = 0; t < clusters_[k].size(); ++t) {
      if (t > 0) out << ',';
      out << clusters_[k][t] + 1;
    }
    out << '}';
  }
  out << '}';
  return out.str();
}

AntecedentVector::AntecedentVector(std::vector<int> antecedents)
    : a_(std::move(antecedents)) {
  for (int i = 0; i < size(); ++i) {
    if (a_[i] < 0 || a_[i] > i) {
      throw InputError("antecedent of mention " + std::to_string(i + 1) +
                       " must lie in 1.." + std::to_string(i + 1));
    }
  }
}

AntecedentVector AntecedentVector::FromOneBased(
    const std::vector<int> &antecedents) {
  std::vector<int> a(antecedents.size());
  std::transform(antecedents.begin(), antecedents.end(), a.begin(),
                 [](int x) { return x - 1; });
  return AntecedentVector(std::move(a));
}

LinkDistribution::LinkDistribution(Eigen::MatrixXd p, double tolerance)
    : p_(std::move(p)) {
  Validate(p_, tolerance);
}

LinkDistribution LinkDistribution::Unchecked(Eigen::MatrixXd p) {
  LinkDistribution d;
  d.p_ = std::move(p);
  return d;
}

void LinkDistribution::Validate(const Eigen::MatrixXd &p, double tolerance) {
  if (p.rows() != p.cols()) {
    throw InvalidDistributionError("link matrix must be square");
  }
  const Eigen::Index n = p.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double x = p(i, j);
      if (j > i) {
        if (x != 0.0) {
          throw InvalidDistributionError(
              "row " + std::to_string(i + 1) +
              " has mass above the diagonal");
        }
        continue;
      }
      if (!std::isfinite(x) || x < 0.0) {
        throw InvalidDistributionError("row " + std::to_string(i + 1) +
                                       " has a negative or non-finite entry");
      }
      sum += x;
    }
    if (std::abs(sum - 1.0) > tolerance) {
      std::ostringstream msg;
      msg << "row " << i + 1 << " sums to " << sum;
      throw InvalidDistributionError(msg.str());
    }
  }
}

Eigen::MatrixXd MembershipMatrix::LogForm() const {
  return q_.unaryExpr([](double x) {
    return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
  });
}

}  // namespace diffcoref
