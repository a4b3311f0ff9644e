#include "eegtl/alignment.hpp"

#include <string>

#include "eegtl/errors.hpp"
#include "eegtl/linalg.hpp"

namespace eegtl {

namespace {

void require_trials(const std::vector<Trial>& trials, const char* op) {
  if (trials.empty()) {
    throw EmptyInputError(std::string(op) + ": no trials to build a reference from");
  }
  const Eigen::Index c = trials.front().data.rows();
  for (const Trial& tr : trials) {
    if (tr.data.rows() != c) {
      throw DimensionError(std::string(op) + ": trials have mixed channel counts");
    }
  }
}

/// Shared tail of both reference builders: regularize, verify positive
/// definiteness, invert.
AlignmentReference finish_reference(AlignMethod method, Mat reference,
                                    int n_used, const char* op) {
  reference = regularize(reference, kEigFloor);
  EigenPair eig = sym_eig(reference);
  if (eig.values[eig.values.size() - 1] <= 0.0) {
    throw NumericError(std::string(op) +
                       ": degenerate reference, not positive definite after "
                       "regularization");
  }
  AlignmentReference ref;
  ref.method = method;
  ref.whitener = spd_inv_sqrt(reference);
  ref.reference = std::move(reference);
  ref.n_trials_used = n_used;
  return ref;
}

}  // namespace

AlignmentReference ea_reference(const std::vector<Trial>& trials) {
  require_trials(trials, "ea_reference");
  const Eigen::Index c = trials.front().data.rows();
  Mat mean = Mat::Zero(c, c);
  for (const Trial& tr : trials) {
    mean += tr.data * tr.data.transpose();
  }
  mean /= static_cast<double>(trials.size());
  return finish_reference(AlignMethod::EA, 0.5 * (mean + mean.transpose()),
                          static_cast<int>(trials.size()), "ea_reference");
}

AlignmentReference ps_reference(const std::vector<Trial>& trials) {
  require_trials(trials, "ps_reference");
  std::vector<Mat> covs;
  covs.reserve(trials.size());
  for (const Trial& tr : trials) {
    Mat cov = tr.data * tr.data.transpose();
    if (cov.trace() <= 0.0) {
      throw NumericError("ps_reference: degenerate reference, all-zero trial");
    }
    covs.push_back(regularize(0.5 * (cov + cov.transpose()), kEigFloor));
  }
  Mat mean = riemannian_mean(covs);
  return finish_reference(AlignMethod::PS, std::move(mean),
                          static_cast<int>(trials.size()), "ps_reference");
}

std::vector<Trial> align(const std::vector<Trial>& trials,
                         const AlignmentReference& ref) {
  std::vector<Trial> out;
  out.reserve(trials.size());
  for (const Trial& tr : trials) {
    if (tr.data.rows() != ref.whitener.cols()) {
      throw DimensionError("align: trial has " + std::to_string(tr.data.rows()) +
                           " channels, reference expects " +
                           std::to_string(ref.whitener.cols()));
    }
    out.push_back({ref.whitener * tr.data, tr.label});
  }
  return out;
}

AlignedDomain domain_align(const TrialSet& domain, AlignMethod method,
                           AlignMode mode,
                           const std::vector<std::size_t>& labeled_indices) {
  std::vector<Trial> basis;
  if (mode == AlignMode::Offline) {
    basis = domain.trials;
  } else {
    if (labeled_indices.empty()) {
      throw EmptyInputError(
          "domain_align: empty online reference, no labeled trials to "
          "estimate from");
    }
    basis.reserve(labeled_indices.size());
    for (std::size_t idx : labeled_indices) {
      if (idx >= domain.trials.size()) {
        throw InvalidArgumentError("domain_align: labeled index " +
                                   std::to_string(idx) + " out of range");
      }
      basis.push_back(domain.trials[idx]);
    }
  }

  AlignmentReference ref = method == AlignMethod::EA ? ea_reference(basis)
                                                     : ps_reference(basis);
  AlignedDomain out;
  out.set = domain;
  out.set.trials = align(domain.trials, ref);
  out.reference = std::move(ref);
  return out;
}

}  // namespace eegtl
