#pragma once

#include <vector>

#include "eegtl/linalg.hpp"
#include "eegtl/spatial.hpp"

namespace eegtl {

// Relative ridge coefficient; the absolute ridge added to the pooled
// covariance is ridge * tr(sigma) / d.
inline constexpr double kDefaultLdaRidge = 1e-6;

struct LdaModel {
  Vec w;              // weight vector, decision is sign(w . x - theta)
  double theta = 0.0;
  Mat sigma;          // pooled within-class covariance before the ridge
};

// Fits binary LDA on labeled feature vectors: w solves
// (sigma + ridge * tr(sigma)/d * I) w = mean(+1) - mean(-1) and
// theta = w . (mean(+1) + mean(-1)) / 2. The pooled within-class covariance
// uses the maximum-likelihood divisor N. A zero-trace covariance (every
// sample identical within its class) falls back to an absolute ridge so the
// solve stays defined; equal class means then give w = 0 exactly.
//
// Requires both classes present.
LdaModel lda_fit(const std::vector<FeatureVector>& features,
                 double ridge = kDefaultLdaRidge);

// Pooled-domain variant: LDA on source and target features concatenated with
// equal sample weight. An empty source degenerates to lda_fit(target).
LdaModel clda_fit(const std::vector<FeatureVector>& source_features,
                  const std::vector<FeatureVector>& target_features,
                  double ridge = kDefaultLdaRidge);

// sign(w . x - theta) per input, with sign(0) mapped to +1. Input labels are
// ignored.
std::vector<int> lda_predict(const LdaModel& model,
                             const std::vector<FeatureVector>& features);

}  // namespace eegtl
