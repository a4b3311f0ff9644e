#include "eegtl/spatial.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "eegtl/errors.hpp"
#include "eegtl/linalg.hpp"

namespace eegtl {

namespace {

/// Unregularized mean of per-trial covariances for one class; normalize
/// divides each trial's covariance by its trace before averaging.
Mat raw_class_mean(const std::vector<Trial>& trials, int label, bool normalize,
                   int* count_out) {
  Mat sum;
  int count = 0;
  for (const Trial& tr : trials) {
    if (tr.label != label) continue;
    Mat cov = tr.data * tr.data.transpose();
    if (normalize) {
      double trace = cov.trace();
      if (trace <= 0.0) {
        throw NumericError("class_mean_cov: rank-deficient all-zero trial");
      }
      cov /= trace;
    }
    if (count == 0) {
      sum = std::move(cov);
    } else {
      sum += cov;
    }
    ++count;
  }
  if (count == 0) {
    throw EmptyInputError("class_mean_cov: empty class " + std::to_string(label));
  }
  if (count_out != nullptr) *count_out = count;
  Mat mean = sum / static_cast<double>(count);
  return 0.5 * (mean + mean.transpose());
}

int count_labeled(const std::vector<Trial>& trials) {
  int n = 0;
  for (const Trial& tr : trials)
    if (tr.label != kUnlabeled) ++n;
  return n;
}

/// Weighted blend of two class covariances. The zero-weight sides short
/// circuit so degenerate parameter settings reproduce the single-domain
/// matrix bit for bit.
Mat blend(const Mat& ct, const Mat& cs, double wt, double ws) {
  if (ws == 0.0) return ct;
  if (wt == 0.0) return cs;
  return (wt * ct + ws * cs) / (wt + ws);
}

/// Leading f generalized eigenvectors of the pair (num, den), whitening
/// route: eigenvectors of den^{-1/2} num den^{-1/2} mapped back through
/// den^{-1/2}. Eigenvalue ties keep the solver's ascending-index order.
Mat leading_filters(const Mat& num, const Mat& den, int f) {
  Mat p = spd_inv_sqrt(den);
  Mat whitened = p * num * p;
  whitened = 0.5 * (whitened + whitened.transpose());

  Eigen::SelfAdjointEigenSolver<Mat> solver(whitened);
  if (solver.info() != Eigen::Success) {
    throw NumericError("csp: eigensolver failed to converge");
  }
  const Eigen::Index c = whitened.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(c));
  std::iota(order.begin(), order.end(), 0);
  // Descending by eigenvalue; stable so exact ties keep ascending index.
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     return solver.eigenvalues()[a] > solver.eigenvalues()[b];
                   });

  Mat filters(c, f);
  for (int j = 0; j < f; ++j) {
    filters.col(j) = p * solver.eigenvectors().col(order[static_cast<std::size_t>(j)]);
  }
  return filters;
}

/// Flip each column so its largest-magnitude entry is positive. The first
/// occurrence wins when magnitudes tie, keeping the choice deterministic.
void sign_normalize(Mat& filters) {
  for (Eigen::Index j = 0; j < filters.cols(); ++j) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < filters.rows(); ++i) {
      double mag = std::abs(filters(i, j));
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    if (filters(arg, j) < 0.0) filters.col(j) = -filters.col(j);
  }
}

/// Shared fitting path. Every public fit lands here so that parameter
/// settings which are mathematically equivalent also run bit-identically.
/// weight_of(count_t, count_s, class_k) returns the blend weights.
template <typename WeightFn>
FilterBank fit_impl(const std::vector<Trial>& source,
                    const std::vector<Trial>& target, int f,
                    WeightFn weight_of, SpatialMethod method, double beta,
                    double gamma) {
  if (f < 1) {
    throw InvalidArgumentError("spatial fit: f must be >= 1, got " +
                               std::to_string(f));
  }
  const Eigen::Index c = target.empty()
                             ? (source.empty() ? 0 : source.front().data.rows())
                             : target.front().data.rows();
  if (c == 0) {
    throw EmptyInputError("spatial fit: no trials at all");
  }
  if (2 * f > c) {
    throw InvalidArgumentError("spatial fit: 2f = " + std::to_string(2 * f) +
                               " filters exceed " + std::to_string(c) +
                               " channels");
  }

  // Per-class blended covariances, regularized once at the end. Zero-weight
  // domains are never touched, so CCSP works when one domain lacks a class
  // the pooled set still covers.
  Mat cov[2];
  for (int side = 0; side < 2; ++side) {
    int k = side == 0 ? -1 : 1;
    int n_t = 0, n_s = 0;
    auto [wt, ws] = weight_of(k);
    Mat blended;
    if (ws == 0.0) {
      blended = raw_class_mean(target, k, true, &n_t);
    } else if (wt == 0.0) {
      blended = raw_class_mean(source, k, true, &n_s);
    } else {
      Mat ct = raw_class_mean(target, k, true, &n_t);
      Mat cs = raw_class_mean(source, k, true, &n_s);
      blended = blend(ct, cs, wt, ws);
    }
    if (gamma != 0.0) {
      blended = (1.0 - gamma) * blended +
                (gamma / static_cast<double>(c)) * blended.trace() *
                    Mat::Identity(c, c);
    }
    cov[side] = regularize(blended, kEigFloor);
  }

  FilterBank bank;
  bank.f = f;
  bank.method = method;
  bank.beta = beta;
  bank.gamma = gamma;
  bank.filters.resize(c, 2 * f);
  // Column order per the W* convention: class -1 block, then class +1.
  bank.filters.leftCols(f) = leading_filters(cov[0], cov[1], f);
  bank.filters.rightCols(f) = leading_filters(cov[1], cov[0], f);
  sign_normalize(bank.filters);
  return bank;
}

}  // namespace

Mat class_mean_cov(const std::vector<Trial>& trials, int label, bool normalize) {
  return regularize(raw_class_mean(trials, label, normalize, nullptr), kEigFloor);
}

FilterBank csp_fit(const std::vector<Trial>& trials, int f) {
  return fit_impl({}, trials, f,
                  [](int) { return std::pair<double, double>{1.0, 0.0}; },
                  SpatialMethod::CSP, 1.0, 0.0);
}

FilterBank ccsp_fit(const std::vector<Trial>& source,
                    const std::vector<Trial>& target, int f) {
  // Equal weight per pooled trial means per-class counts as weights.
  auto weights = [&](int k) {
    double n_t = 0.0, n_s = 0.0;
    for (const Trial& tr : target)
      if (tr.label == k) n_t += 1.0;
    for (const Trial& tr : source)
      if (tr.label == k) n_s += 1.0;
    return std::pair<double, double>{n_t, n_s};
  };
  return fit_impl(source, target, f, weights, SpatialMethod::CCSP, 0.5, 0.0);
}

FilterBank rcsp_fit(const std::vector<Trial>& source,
                    const std::vector<Trial>& target, double beta, double gamma,
                    int f) {
  if (!(beta >= 0.0 && beta <= 1.0) || !(gamma >= 0.0 && gamma <= 1.0)) {
    throw InvalidArgumentError("rcsp_fit: invalid param, beta and gamma must "
                               "lie in [0, 1], got beta " +
                               std::to_string(beta) + ", gamma " +
                               std::to_string(gamma));
  }
  const double n_l = count_labeled(target);
  const double n_s = count_labeled(source);
  if (n_s == 0.0 && beta != 1.0) {
    throw InvalidArgumentError(
        "rcsp_fit: empty source is only allowed at beta = 1");
  }
  // The blend weights are class independent, so a missing target class
  // would otherwise slip through when beta = 0; the contract wants both.
  for (int k : {-1, 1}) {
    bool present = false;
    for (const Trial& tr : target) present = present || tr.label == k;
    if (!present) {
      throw EmptyInputError("rcsp_fit: empty class " + std::to_string(k) +
                            " in target");
    }
  }
  auto weights = [&](int) {
    return std::pair<double, double>{beta * n_l, (1.0 - beta) * n_s};
  };
  return fit_impl(source, target, f, weights, SpatialMethod::RCSP, beta, gamma);
}

std::vector<FeatureVector> extract_features(const std::vector<Trial>& trials,
                                            const FilterBank& bank) {
  std::vector<FeatureVector> out;
  out.reserve(trials.size());
  for (const Trial& tr : trials) {
    if (tr.data.rows() != bank.filters.rows()) {
      throw DimensionError("extract_features: trial has " +
                           std::to_string(tr.data.rows()) +
                           " channels, bank expects " +
                           std::to_string(bank.filters.rows()));
    }
    Mat filtered = bank.filters.transpose() * tr.data;
    Vec powers = filtered.rowwise().squaredNorm();
    double total = powers.sum();
    FeatureVector fv;
    fv.label = tr.label;
    fv.values.resize(powers.size());
    for (Eigen::Index i = 0; i < powers.size(); ++i) {
      if (powers[i] <= 0.0) {
        throw NumericError("extract_features: zero variance in filtered row " +
                           std::to_string(i));
      }
      fv.values[i] = std::log(powers[i] / total);
    }
    out.push_back(std::move(fv));
  }
  return out;
}

}  // namespace eegtl
