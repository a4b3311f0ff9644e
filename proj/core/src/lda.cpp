#include "eegtl/lda.hpp"

#include <string>

#include "eegtl/errors.hpp"

namespace eegtl {

namespace {

LdaModel fit_impl(const std::vector<FeatureVector>& features, double ridge,
                  const char* who) {
  if (features.empty()) {
    throw EmptyInputError(std::string(who) + ": empty feature set");
  }
  if (ridge < 0.0) {
    throw InvalidArgumentError(std::string(who) + ": invalid param ridge = " +
                               std::to_string(ridge));
  }
  const Eigen::Index d = features[0].values.size();
  if (d == 0) {
    throw EmptyInputError(std::string(who) + ": empty feature vector");
  }
  Vec mean_neg = Vec::Zero(d);
  Vec mean_pos = Vec::Zero(d);
  long n_neg = 0;
  long n_pos = 0;
  for (std::size_t n = 0; n < features.size(); ++n) {
    const FeatureVector& f = features[n];
    if (f.values.size() != d) {
      throw DimensionError(std::string(who) + ": feature vector " +
                           std::to_string(n) + " has " +
                           std::to_string(f.values.size()) +
                           " entries, expected " + std::to_string(d));
    }
    if (!f.values.allFinite()) {
      throw NumericError(std::string(who) +
                         ": non-finite feature value in vector " +
                         std::to_string(n));
    }
    if (f.label == -1) {
      mean_neg += f.values;
      ++n_neg;
    } else if (f.label == 1) {
      mean_pos += f.values;
      ++n_pos;
    } else {
      throw InvalidArgumentError(std::string(who) +
                                 ": unlabeled feature vector at index " +
                                 std::to_string(n));
    }
  }
  if (n_neg == 0) {
    throw EmptyInputError(std::string(who) + ": empty class -1");
  }
  if (n_pos == 0) {
    throw EmptyInputError(std::string(who) + ": empty class +1");
  }
  mean_neg /= static_cast<double>(n_neg);
  mean_pos /= static_cast<double>(n_pos);

  Mat sigma = Mat::Zero(d, d);
  for (const FeatureVector& f : features) {
    const Vec centered =
        f.values - (f.label == 1 ? mean_pos : mean_neg);
    sigma.noalias() += centered * centered.transpose();
  }
  sigma /= static_cast<double>(n_neg + n_pos);

  const double trace = sigma.trace();
  const double scale = trace > 0.0 ? trace / static_cast<double>(d) : 1.0;
  const Mat ridged = sigma + ridge * scale * Mat::Identity(d, d);

  LdaModel model;
  model.w = Eigen::LDLT<Mat>(ridged).solve(mean_pos - mean_neg);
  if (!model.w.allFinite()) {
    throw NumericError(std::string(who) +
                       ": singular pooled covariance, solve produced "
                       "non-finite weights");
  }
  model.theta = 0.5 * model.w.dot(mean_pos + mean_neg);
  model.sigma = sigma;
  return model;
}

}  // namespace

LdaModel lda_fit(const std::vector<FeatureVector>& features, double ridge) {
  return fit_impl(features, ridge, "lda_fit");
}

LdaModel clda_fit(const std::vector<FeatureVector>& source_features,
                  const std::vector<FeatureVector>& target_features,
                  double ridge) {
  std::vector<FeatureVector> pooled;
  pooled.reserve(source_features.size() + target_features.size());
  pooled.insert(pooled.end(), source_features.begin(), source_features.end());
  pooled.insert(pooled.end(), target_features.begin(), target_features.end());
  return fit_impl(pooled, ridge, "clda_fit");
}

std::vector<int> lda_predict(const LdaModel& model,
                             const std::vector<FeatureVector>& features) {
  std::vector<int> labels;
  labels.reserve(features.size());
  for (std::size_t n = 0; n < features.size(); ++n) {
    const FeatureVector& f = features[n];
    if (f.values.size() != model.w.size()) {
      throw DimensionError("lda_predict: feature vector " + std::to_string(n) +
                           " has " + std::to_string(f.values.size()) +
                           " entries, model expects " +
                           std::to_string(model.w.size()));
    }
    labels.push_back(model.w.dot(f.values) - model.theta >= 0.0 ? 1 : -1);
  }
  return labels;
}

}  // namespace eegtl
