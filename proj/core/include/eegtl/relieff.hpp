#pragma once

#include <cstdint>
#include <vector>

#include "eegtl/linalg.hpp"
#include "eegtl/spatial.hpp"

namespace eegtl {

inline constexpr int kDefaultReliefNeighbors = 10;
inline constexpr int kDefaultReliefIterations = 100;

struct FeatureWeights {
  Vec weights;            // one accumulated relevance score per feature
  int n_iterations = 0;
  int k = 0;
};

// ReliefF relevance weighting for binary-labeled feature vectors. Each of the
// n_iter rounds draws one sample (with replacement), finds its k nearest
// same-class hits and k nearest other-class misses, and moves every feature
// weight by (sum of miss diffs - sum of hit diffs) / k. Differences and the
// neighbor metric are range-normalized per feature over the input set; a
// constant feature therefore keeps weight exactly 0. The sample itself is
// never its own neighbor, and distance ties resolve toward the lower sample
// index, so results are fully determined by the seed.
//
// Requires at least k+1 labeled samples in each class.
FeatureWeights relieff(const std::vector<FeatureVector>& features,
                       int k = kDefaultReliefNeighbors,
                       int n_iter = kDefaultReliefIterations,
                       std::uint64_t seed = 0);

// Pooled-domain variant: runs ReliefF on source and target features
// concatenated (source first), with ranges computed over the pool. With an
// empty source this degenerates to relieff(target) bit for bit.
FeatureWeights crelieff(const std::vector<FeatureVector>& source_features,
                        const std::vector<FeatureVector>& target_features,
                        int k = kDefaultReliefNeighbors,
                        int n_iter = kDefaultReliefIterations,
                        std::uint64_t seed = 0);

// Indices of the m largest weights, returned in ascending index order. Equal
// weights rank by ascending index.
std::vector<int> select_top(const FeatureWeights& weights, int m);

}  // namespace eegtl
