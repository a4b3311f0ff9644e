#pragma once

#include <vector>

#include "eegtl/trial.hpp"

namespace eegtl {

enum class SpatialMethod { CSP, CCSP, RCSP };

/// Filters per class when the caller does not choose; 2f = 6 spatial
/// filters total, the usual motor-imagery working point.
inline constexpr int kDefaultFiltersPerClass = 3;

/// A fitted spatial filter bank W*, c x 2f: the first f columns maximize
/// class -1 variance against class +1, the last f the reverse.
struct FilterBank {
  Mat filters;
  int f = 0;
  SpatialMethod method = SpatialMethod::CSP;
  double beta = 1.0;   // target weight, meaningful for RCSP
  double gamma = 0.0;  // shrinkage toward the scaled identity, RCSP
};

/// Log-variance feature vector of one trial; entries are logs of trace
/// fractions, hence never positive.
struct FeatureVector {
  Vec values;
  int label = kUnlabeled;
};

/// Mean covariance of the class-k trials, each trial contributing X X^T
/// (normalize=false) or X X^T / tr(X X^T) (normalize=true); regularized.
/// Unlabeled trials are ignored. Throws EmptyInputError when the class has
/// no trials.
Mat class_mean_cov(const std::vector<Trial>& trials, int label, bool normalize);

/// Classic CSP on one labeled set: per class k, the f leading generalized
/// eigenvectors of the pair (mean cov of k, mean cov of -k), solved by
/// whitening. Columns are sign-normalized (largest-magnitude entry
/// positive); ties between equal eigenvalues resolve by ascending
/// eigenvector index, so degenerate inputs still give deterministic output.
FilterBank csp_fit(const std::vector<Trial>& trials,
                   int f = kDefaultFiltersPerClass);

/// Combined CSP: CSP on the source and target pools with equal weight per
/// trial. The source may be empty, in which case this is csp_fit(target).
FilterBank ccsp_fit(const std::vector<Trial>& source,
                    const std::vector<Trial>& target,
                    int f = kDefaultFiltersPerClass);

/// Regularized CSP. Class covariances are blended as
///   C^k(beta) = (beta N_l Ct^k + (1-beta) N_s Cs^k) / (beta N_l + (1-beta) N_s)
/// with N_l, N_s the total labeled counts, then shrunk toward the scaled
/// identity by gamma. beta = 1 reduces to csp_fit(target) and, for balanced
/// classes, beta = 0.5 reduces to ccsp_fit, both bit-exactly: the degenerate
/// parameter settings feed the identical matrices through the same solver.
FilterBank rcsp_fit(const std::vector<Trial>& source,
                    const std::vector<Trial>& target, double beta, double gamma,
                    int f = kDefaultFiltersPerClass);

/// Log-variance features log(diag(Y Y^T) / tr(Y Y^T)) with Y = W*^T X.
/// Throws NumericError (zero variance) instead of returning -inf.
std::vector<FeatureVector> extract_features(const std::vector<Trial>& trials,
                                            const FilterBank& bank);

}  // namespace eegtl
