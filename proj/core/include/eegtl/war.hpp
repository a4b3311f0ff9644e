#pragma once

#include <vector>

#include "eegtl/linalg.hpp"
#include "eegtl/spatial.hpp"

namespace eegtl {

enum class KernelType { Linear, Rbf };

struct KernelSpec {
  KernelType type = KernelType::Linear;
  // Rbf width sigma in exp(-|x-y|^2 / (2 sigma^2)). Non-positive means
  // "resolve by the median heuristic over the training rows at fit time";
  // kernel_matrix itself requires a resolved positive value.
  double bandwidth = 0.0;
};

struct WarParams {
  double w_t = 10.0;      // overall weight of target-domain labeled samples
  double lambda1 = 0.1;   // RKHS norm
  double lambda2 = 10.0;  // marginal distribution discrepancy
  double lambda3 = 10.0;  // conditional distribution discrepancy
  KernelSpec kernel;
  int n_em_iters = 5;     // pseudo-label refinement rounds (offline)
};

// Kernel classifier obtained from the closed-form solve
//   ((E + lambda2 M0 + lambda3 M1) K + lambda1 I) alpha = E y
// over training rows ordered (source, target labeled, target unlabeled).
struct WarModel {
  Mat train;           // training feature rows in solve order
  Vec alpha;           // representer coefficients, one per training row
  Vec targets;         // labels; unlabeled rows hold their final pseudo-label
  Vec sample_weights;  // diagonal of E (class-balanced, w_t folded in)
  Mat m0;              // marginal discrepancy coefficient matrix
  Mat m1;              // conditional discrepancy coefficient matrix
  WarParams params;    // as used, with the kernel bandwidth resolved
  int n_source = 0;
  int n_target_labeled = 0;
  int n_target_unlabeled = 0;
};

// K_ij = k(x_i, y_j) for row vectors x_i of x_rows and y_j of y_rows.
Mat kernel_matrix(const Mat& x_rows, const Mat& y_rows,
                  const KernelSpec& kernel);

// Median of pairwise Euclidean distances between rows; 1.0 when the rows are
// all identical. Used to resolve an unset rbf bandwidth.
double median_bandwidth(const Mat& rows);

// Weighted adaptation regularization. Sample weights class-balance each
// domain (a class-k sample in domain d gets N_d / (2 N_{d,k})); target
// labeled rows are additionally scaled by w_t and unlabeled rows carry
// weight 0. M0 penalizes the mean prediction gap between domains and M1 the
// per-class gaps, with a class skipped when either domain lacks it.
// Unlabeled rows start from clda_fit pseudo-labels and are refined for up to
// n_em_iters closed-form re-solves, stopping early once they stabilize.
//
// Requires at least one labeled sample overall; throws when the linear
// system is numerically singular.
WarModel war_fit(const std::vector<FeatureVector>& source_features,
                 const std::vector<FeatureVector>& target_labeled,
                 const std::vector<FeatureVector>& target_unlabeled,
                 const WarParams& params = WarParams{});

// Online variant: identical solve restricted to labeled rows, so no
// pseudo-label refinement takes place.
WarModel owar_fit(const std::vector<FeatureVector>& source_features,
                  const std::vector<FeatureVector>& target_labeled,
                  const WarParams& params = WarParams{});

// sign(sum_i alpha_i k(x_i, x)) per input, sign(0) mapped to +1. Input
// labels are ignored.
std::vector<int> war_predict(const WarModel& model,
                             const std::vector<FeatureVector>& features);

// Decision values sum_i alpha_i k(x_i, x) without the sign, for callers that
// need margins.
Vec war_decision_values(const WarModel& model,
                        const std::vector<FeatureVector>& features);

}  // namespace eegtl
