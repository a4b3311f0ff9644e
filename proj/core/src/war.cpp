#include "eegtl/war.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "eegtl/errors.hpp"
#include "eegtl/lda.hpp"

namespace eegtl {

namespace {

void require_resolved(const KernelSpec& kernel, const char* who) {
  if (kernel.type == KernelType::Rbf && !(kernel.bandwidth > 0.0)) {
    throw InvalidArgumentError(std::string(who) +
                               ": invalid param bandwidth = " +
                               std::to_string(kernel.bandwidth) +
                               ", resolve the median heuristic first");
  }
}

void validate_params(const WarParams& params, const char* who) {
  if (!(params.w_t > 0.0)) {
    throw InvalidArgumentError(std::string(who) + ": invalid param w_t = " +
                               std::to_string(params.w_t));
  }
  for (double lambda : {params.lambda1, params.lambda2, params.lambda3}) {
    if (!(lambda >= 0.0)) {
      throw InvalidArgumentError(std::string(who) +
                                 ": invalid param lambda = " +
                                 std::to_string(lambda));
    }
  }
  if (params.n_em_iters < 1) {
    throw InvalidArgumentError(std::string(who) +
                               ": invalid param n_em_iters = " +
                               std::to_string(params.n_em_iters));
  }
}

// Copies one block of feature vectors into `train` starting at `row`,
// checking dimensions and finiteness; labels are validated only when the
// block is a labeled one.
void fill_block(const std::vector<FeatureVector>& block, bool labeled,
                Eigen::Index d, Mat& train, Eigen::Index row,
                const char* who, const char* what) {
  for (std::size_t n = 0; n < block.size(); ++n) {
    const FeatureVector& f = block[n];
    if (f.values.size() != d) {
      throw DimensionError(std::string(who) + ": " + what + " vector " +
                           std::to_string(n) + " has " +
                           std::to_string(f.values.size()) +
                           " entries, expected " + std::to_string(d));
    }
    if (!f.values.allFinite()) {
      throw NumericError(std::string(who) + ": non-finite feature value in " +
                         what + " vector " + std::to_string(n));
    }
    if (labeled && f.label != -1 && f.label != 1) {
      throw InvalidArgumentError(std::string(who) + ": unlabeled " + what +
                                 " vector at index " + std::to_string(n));
    }
    train.row(row + static_cast<Eigen::Index>(n)) = f.values.transpose();
  }
}

}  // namespace

Mat kernel_matrix(const Mat& x_rows, const Mat& y_rows,
                  const KernelSpec& kernel) {
  if (x_rows.cols() != y_rows.cols()) {
    throw DimensionError("kernel_matrix: row dimensions differ, " +
                         std::to_string(x_rows.cols()) + " vs " +
                         std::to_string(y_rows.cols()));
  }
  if (kernel.type == KernelType::Linear) {
    return x_rows * y_rows.transpose();
  }
  require_resolved(kernel, "kernel_matrix");
  const Vec x_sq = x_rows.rowwise().squaredNorm();
  const Vec y_sq = y_rows.rowwise().squaredNorm();
  Mat dist2 = (-2.0 * x_rows * y_rows.transpose()).colwise() + x_sq;
  dist2.rowwise() += y_sq.transpose();
  const double inv = 1.0 / (2.0 * kernel.bandwidth * kernel.bandwidth);
  // Rounding can push tiny squared distances below zero; clamp before exp.
  return (-inv * dist2.cwiseMax(0.0)).array().exp();
}

double median_bandwidth(const Mat& rows) {
  const Eigen::Index n = rows.rows();
  std::vector<double> dists;
  dists.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n) / 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      dists.push_back((rows.row(i) - rows.row(j)).norm());
    }
  }
  if (dists.empty()) return 1.0;
  std::sort(dists.begin(), dists.end());
  const std::size_t m = dists.size();
  const double median = m % 2 == 1
                            ? dists[m / 2]
                            : 0.5 * (dists[m / 2 - 1] + dists[m / 2]);
  return median > 0.0 ? median : 1.0;
}

WarModel war_fit(const std::vector<FeatureVector>& source_features,
                 const std::vector<FeatureVector>& target_labeled,
                 const std::vector<FeatureVector>& target_unlabeled,
                 const WarParams& params) {
  validate_params(params, "war_fit");
  if (source_features.empty() && target_labeled.empty()) {
    throw EmptyInputError("war_fit: no labeled data");
  }

  const Eigen::Index n_s = static_cast<Eigen::Index>(source_features.size());
  const Eigen::Index n_l = static_cast<Eigen::Index>(target_labeled.size());
  const Eigen::Index n_u = static_cast<Eigen::Index>(target_unlabeled.size());
  const Eigen::Index n = n_s + n_l + n_u;
  const Eigen::Index d = n_s > 0 ? source_features[0].values.size()
                                 : target_labeled[0].values.size();
  if (d == 0) {
    throw EmptyInputError("war_fit: empty feature vector");
  }

  Mat train(n, d);
  fill_block(source_features, true, d, train, 0, "war_fit", "source");
  fill_block(target_labeled, true, d, train, n_s, "war_fit", "target labeled");
  fill_block(target_unlabeled, false, d, train, n_s + n_l, "war_fit",
             "target unlabeled");

  // Class-balance weights: a class-k sample in domain d weighs
  // N_d / (2 N_{d,k}), so both classes contribute N_d / 2 in total.
  Eigen::Index ns_by_class[2] = {0, 0};  // index 0 = class -1, 1 = class +1
  Eigen::Index nl_by_class[2] = {0, 0};
  for (const FeatureVector& f : source_features) {
    ++ns_by_class[f.label == 1 ? 1 : 0];
  }
  for (const FeatureVector& f : target_labeled) {
    ++nl_by_class[f.label == 1 ? 1 : 0];
  }
  Vec e_diag = Vec::Zero(n);
  Vec y = Vec::Zero(n);
  for (Eigen::Index i = 0; i < n_s; ++i) {
    const int label = source_features[static_cast<std::size_t>(i)].label;
    e_diag[i] = static_cast<double>(n_s) /
                (2.0 * static_cast<double>(ns_by_class[label == 1 ? 1 : 0]));
    y[i] = label;
  }
  for (Eigen::Index i = 0; i < n_l; ++i) {
    const int label = target_labeled[static_cast<std::size_t>(i)].label;
    e_diag[n_s + i] =
        params.w_t * static_cast<double>(n_l) /
        (2.0 * static_cast<double>(nl_by_class[label == 1 ? 1 : 0]));
    y[n_s + i] = label;
  }

  KernelSpec resolved = params.kernel;
  if (resolved.type == KernelType::Rbf && !(resolved.bandwidth > 0.0)) {
    resolved.bandwidth = median_bandwidth(train);
  }
  const Mat k = kernel_matrix(train, train, resolved);

  // Marginal discrepancy direction: mean prediction over source rows minus
  // mean over all target rows. Zero when either domain is absent.
  Vec e0 = Vec::Zero(n);
  if (n_s > 0 && n_l + n_u > 0) {
    e0.head(n_s).setConstant(1.0 / static_cast<double>(n_s));
    e0.tail(n_l + n_u)
        .setConstant(-1.0 / static_cast<double>(n_l + n_u));
  }

  // Pseudo-labels for the unlabeled rows, seeded by CLDA on the labeled
  // pool. When that pool holds one class only, CLDA cannot fit and every
  // unlabeled row starts from that class.
  std::vector<int> pseudo(static_cast<std::size_t>(n_u));
  if (n_u > 0) {
    const bool has_neg = ns_by_class[0] + nl_by_class[0] > 0;
    const bool has_pos = ns_by_class[1] + nl_by_class[1] > 0;
    if (has_neg && has_pos) {
      const LdaModel init = clda_fit(source_features, target_labeled);
      pseudo = lda_predict(init, target_unlabeled);
    } else {
      std::fill(pseudo.begin(), pseudo.end(), has_pos ? 1 : -1);
    }
  }

  // The solve matrix is ((E + l2 M0 + l3 M1) K + l1 I). Only the M1 term
  // moves between refinement rounds and M1 is rank 2, so factor the fixed
  // part once and fold the per-round correction in with the Woodbury
  // identity: (B + U L V^T)^-1 = B^-1 - B^-1 U (L^-1 + V^T B^-1 U)^-1 V^T B^-1.
  Mat fixed = e_diag.asDiagonal() * k;
  if (params.lambda2 > 0.0 && !e0.isZero(0.0)) {
    fixed.noalias() += params.lambda2 * e0 * (k * e0).transpose();
  }
  fixed.diagonal().array() += params.lambda1;
  const Eigen::PartialPivLU<Mat> lu(fixed);
  const double rcond = lu.rcond();
  const Vec b = e_diag.cwiseProduct(y);
  const Vec base_solution = lu.solve(b);

  const auto conditional_direction = [&](int label) {
    Vec e = Vec::Zero(n);
    Eigen::Index n_src = 0;
    Eigen::Index n_tgt = 0;
    for (Eigen::Index i = 0; i < n_s; ++i) {
      if (source_features[static_cast<std::size_t>(i)].label == label) ++n_src;
    }
    for (Eigen::Index i = 0; i < n_l; ++i) {
      if (target_labeled[static_cast<std::size_t>(i)].label == label) ++n_tgt;
    }
    for (Eigen::Index i = 0; i < n_u; ++i) {
      if (pseudo[static_cast<std::size_t>(i)] == label) ++n_tgt;
    }
    if (n_src == 0 || n_tgt == 0) return e;  // class absent on one side
    for (Eigen::Index i = 0; i < n_s; ++i) {
      if (source_features[static_cast<std::size_t>(i)].label == label) {
        e[i] = 1.0 / static_cast<double>(n_src);
      }
    }
    for (Eigen::Index i = 0; i < n_l; ++i) {
      if (target_labeled[static_cast<std::size_t>(i)].label == label) {
        e[n_s + i] = -1.0 / static_cast<double>(n_tgt);
      }
    }
    for (Eigen::Index i = 0; i < n_u; ++i) {
      if (pseudo[static_cast<std::size_t>(i)] == label) {
        e[n_s + n_l + i] = -1.0 / static_cast<double>(n_tgt);
      }
    }
    return e;
  };

  Vec alpha;
  Mat directions(n, 2);
  for (int round = 0;; ++round) {
    directions.col(0) = conditional_direction(-1);
    directions.col(1) = conditional_direction(1);
    if (params.lambda3 > 0.0 && !directions.isZero(0.0)) {
      const Mat k_dirs = k * directions;                // V
      const Mat b_inv_u = lu.solve(directions);        // B^-1 U
      Mat capacitance = k_dirs.transpose() * b_inv_u;  // V^T B^-1 U
      capacitance.diagonal().array() += 1.0 / params.lambda3;
      alpha = base_solution -
              b_inv_u * capacitance.partialPivLu().solve(
                            k_dirs.transpose() * base_solution);
      const Vec residual_vec = fixed * alpha +
                               params.lambda3 * directions *
                                   (k_dirs.transpose() * alpha) -
                               b;
      const double residual =
          residual_vec.norm() / std::max(1.0, b.norm());
      if (!alpha.allFinite() || residual > 1e-8) {
        char msg[160];
        std::snprintf(msg, sizeof(msg),
                      "war_fit: singular system, residual %.3e, condition "
                      "estimate %.3e",
                      residual, rcond > 0.0 ? 1.0 / rcond : 0.0);
        throw NumericError(msg);
      }
    } else {
      alpha = base_solution;
      const double residual =
          (fixed * alpha - b).norm() / std::max(1.0, b.norm());
      if (!alpha.allFinite() || residual > 1e-8) {
        char msg[160];
        std::snprintf(msg, sizeof(msg),
                      "war_fit: singular system, residual %.3e, condition "
                      "estimate %.3e",
                      residual, rcond > 0.0 ? 1.0 / rcond : 0.0);
        throw NumericError(msg);
      }
    }
    if (n_u == 0 || round + 1 >= params.n_em_iters) break;
    std::vector<int> refined(static_cast<std::size_t>(n_u));
    const Vec f_u = k.bottomRows(n_u) * alpha;
    for (Eigen::Index i = 0; i < n_u; ++i) {
      refined[static_cast<std::size_t>(i)] = f_u[i] >= 0.0 ? 1 : -1;
    }
    if (refined == pseudo) break;
    pseudo = refined;
  }

  WarModel model;
  model.train = train;
  model.alpha = alpha;
  model.targets = y;
  for (Eigen::Index i = 0; i < n_u; ++i) {
    model.targets[n_s + n_l + i] = pseudo[static_cast<std::size_t>(i)];
  }
  model.sample_weights = e_diag;
  model.m0 = e0.isZero(0.0) ? Mat::Zero(n, n).eval()
                            : Mat(e0 * e0.transpose());
  const Vec e_neg = conditional_direction(-1);
  const Vec e_pos = conditional_direction(1);
  model.m1 = e_neg * e_neg.transpose() + e_pos * e_pos.transpose();
  model.params = params;
  model.params.kernel = resolved;
  model.n_source = static_cast<int>(n_s);
  model.n_target_labeled = static_cast<int>(n_l);
  model.n_target_unlabeled = static_cast<int>(n_u);
  return model;
}

WarModel owar_fit(const std::vector<FeatureVector>& source_features,
                  const std::vector<FeatureVector>& target_labeled,
                  const WarParams& params) {
  return war_fit(source_features, target_labeled, {}, params);
}

Vec war_decision_values(const WarModel& model,
                        const std::vector<FeatureVector>& features) {
  const Eigen::Index d = model.train.cols();
  Mat rows(static_cast<Eigen::Index>(features.size()), d);
  for (std::size_t n = 0; n < features.size(); ++n) {
    if (features[n].values.size() != d) {
      throw DimensionError("war_predict: feature vector " + std::to_string(n) +
                           " has " + std::to_string(features[n].values.size()) +
                           " entries, model expects " + std::to_string(d));
    }
    rows.row(static_cast<Eigen::Index>(n)) = features[n].values.transpose();
  }
  return kernel_matrix(rows, model.train, model.params.kernel) * model.alpha;
}

std::vector<int> war_predict(const WarModel& model,
                             const std::vector<FeatureVector>& features) {
  const Vec values = war_decision_values(model, features);
  std::vector<int> labels(features.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    labels[static_cast<std::size_t>(i)] = values[i] >= 0.0 ? 1 : -1;
  }
  return labels;
}

}  // namespace eegtl
