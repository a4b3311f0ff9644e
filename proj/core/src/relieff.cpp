#include "eegtl/relieff.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "eegtl/errors.hpp"
#include "eegtl/rng.hpp"

namespace eegtl {

namespace {

// Validates the labeled feature set and packs it into a row-per-sample matrix.
Mat pack_features(const std::vector<FeatureVector>& features, const char* who) {
  if (features.empty()) {
    throw EmptyInputError(std::string(who) + ": empty feature set");
  }
  const Eigen::Index d = features[0].values.size();
  if (d == 0) {
    throw EmptyInputError(std::string(who) + ": empty feature vector");
  }
  Mat x(static_cast<Eigen::Index>(features.size()), d);
  for (std::size_t n = 0; n < features.size(); ++n) {
    const FeatureVector& f = features[n];
    if (f.values.size() != d) {
      throw DimensionError(std::string(who) + ": feature vector " +
                           std::to_string(n) + " has " +
                           std::to_string(f.values.size()) +
                           " entries, expected " + std::to_string(d));
    }
    if (f.label != -1 && f.label != 1) {
      throw InvalidArgumentError(std::string(who) +
                                 ": unlabeled feature vector at index " +
                                 std::to_string(n));
    }
    if (!f.values.allFinite()) {
      throw NumericError(std::string(who) +
                         ": non-finite feature value in vector " +
                         std::to_string(n));
    }
    x.row(static_cast<Eigen::Index>(n)) = f.values.transpose();
  }
  return x;
}

FeatureWeights relieff_impl(const std::vector<FeatureVector>& features, int k,
                            int n_iter, std::uint64_t seed, const char* who) {
  if (k < 1) {
    throw InvalidArgumentError(std::string(who) + ": invalid param k = " +
                               std::to_string(k) + ", expected k >= 1");
  }
  if (n_iter < 1) {
    throw InvalidArgumentError(std::string(who) + ": invalid param n_iter = " +
                               std::to_string(n_iter) +
                               ", expected n_iter >= 1");
  }
  const Mat x = pack_features(features, who);
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();

  for (int label : {-1, 1}) {
    long count = 0;
    for (const FeatureVector& f : features) {
      if (f.label == label) ++count;
    }
    if (count < static_cast<long>(k) + 1) {
      throw InvalidArgumentError(
          std::string(who) + ": too few samples in class " +
          std::to_string(label) + " (" + std::to_string(count) +
          " labeled, k + 1 = " + std::to_string(k + 1) + " required)");
    }
  }

  // Scale each feature by its range so the neighbor metric and the diff
  // updates share one normalization; constant features drop out entirely.
  Mat scaled = x;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double range = x.col(i).maxCoeff() - x.col(i).minCoeff();
    if (range > 0.0) {
      scaled.col(i) /= range;
    } else {
      scaled.col(i).setZero();
    }
  }

  Rng rng(seed);
  Vec weights = Vec::Zero(d);
  std::vector<std::pair<double, Eigen::Index>> hits;
  std::vector<std::pair<double, Eigen::Index>> misses;
  for (int it = 0; it < n_iter; ++it) {
    const Eigen::Index r =
        static_cast<Eigen::Index>(rng.index(static_cast<std::uint64_t>(n)));
    const int label = features[static_cast<std::size_t>(r)].label;
    hits.clear();
    misses.clear();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == r) continue;
      const double dist2 = (scaled.row(j) - scaled.row(r)).squaredNorm();
      if (features[static_cast<std::size_t>(j)].label == label) {
        hits.emplace_back(dist2, j);
      } else {
        misses.emplace_back(dist2, j);
      }
    }
    // Pair comparison breaks distance ties toward the lower sample index.
    std::sort(hits.begin(), hits.end());
    std::sort(misses.begin(), misses.end());
    for (int j = 0; j < k; ++j) {
      weights -= (scaled.row(hits[static_cast<std::size_t>(j)].second) -
                  scaled.row(r))
                     .cwiseAbs()
                     .transpose() /
                 static_cast<double>(k);
      weights += (scaled.row(misses[static_cast<std::size_t>(j)].second) -
                  scaled.row(r))
                     .cwiseAbs()
                     .transpose() /
                 static_cast<double>(k);
    }
  }
  return FeatureWeights{std::move(weights), n_iter, k};
}

}  // namespace

FeatureWeights relieff(const std::vector<FeatureVector>& features, int k,
                       int n_iter, std::uint64_t seed) {
  return relieff_impl(features, k, n_iter, seed, "relieff");
}

FeatureWeights crelieff(const std::vector<FeatureVector>& source_features,
                        const std::vector<FeatureVector>& target_features,
                        int k, int n_iter, std::uint64_t seed) {
  std::vector<FeatureVector> pooled;
  pooled.reserve(source_features.size() + target_features.size());
  pooled.insert(pooled.end(), source_features.begin(), source_features.end());
  pooled.insert(pooled.end(), target_features.begin(), target_features.end());
  return relieff_impl(pooled, k, n_iter, seed, "crelieff");
}

std::vector<int> select_top(const FeatureWeights& weights, int m) {
  const Eigen::Index d = weights.weights.size();
  if (d == 0) {
    throw EmptyInputError("select_top: empty weight vector");
  }
  if (m < 1 || static_cast<Eigen::Index>(m) > d) {
    throw InvalidArgumentError("select_top: invalid m = " + std::to_string(m) +
                               ", expected 1 <= m <= " + std::to_string(d));
  }
  std::vector<int> order(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < order.size(); ++i) {
    order[i] = static_cast<int>(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return weights.weights[a] > weights.weights[b];
  });
  order.resize(static_cast<std::size_t>(m));
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace eegtl
