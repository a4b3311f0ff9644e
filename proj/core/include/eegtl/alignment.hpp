#pragma once

#include <vector>

#include "eegtl/trial.hpp"

namespace eegtl {

enum class AlignMethod { EA, PS };
enum class AlignMode { Offline, Online };

/// A fitted alignment reference: the mean spatial covariance of one domain
/// and its inverse square root, which whitens that domain's trials.
struct AlignmentReference {
  AlignMethod method = AlignMethod::EA;
  Mat reference;  // regularized mean covariance
  Mat whitener;   // reference^{-1/2}
  int n_trials_used = 0;
};

/// Reference from the Euclidean mean of the per-trial covariances X_n X_n^T.
/// Throws NumericError (degenerate reference) when the mean is not positive
/// definite even after regularization.
AlignmentReference ea_reference(const std::vector<Trial>& trials);

/// Reference from the Riemannian (Karcher) mean of the per-trial
/// covariances, each regularized before the mean iteration.
AlignmentReference ps_reference(const std::vector<Trial>& trials);

/// Left-multiply every trial by the whitener. Labels and order pass through.
std::vector<Trial> align(const std::vector<Trial>& trials,
                         const AlignmentReference& ref);

struct AlignedDomain {
  TrialSet set;
  AlignmentReference reference;
};

/// Align one domain. Offline mode estimates the reference from every trial;
/// online mode uses only the trials named by labeled_indices (the ones whose
/// labels would be available in a causal setting) but still aligns all of
/// them. Online mode with no labeled indices is an error: there is nothing
/// to estimate a reference from.
AlignedDomain domain_align(const TrialSet& domain, AlignMethod method,
                           AlignMode mode,
                           const std::vector<std::size_t>& labeled_indices);

}  // namespace eegtl
