#pragma once

#include <cstdint>
#include <vector>

#include "eegtl/trial.hpp"

namespace eegtl {

/// Parameters of the synthetic motor-imagery generator. The model: both
/// classes share a random orthogonal latent basis A; class k has diagonal
/// latent variances D_k with contrast rho on two designated components,
/// swapped between classes. Each subject observes through a perturbed
/// mixing M_s = I + sigma_mix * G_s, and trials are
/// M_s * (A D_k A^T)^{1/2} * Z + sigma_noise * E with Z, E standard normal.
struct SynthParams {
  int n_subjects = 5;
  int n_sessions = 1;
  int n_trials_per_class = 60;
  int channels = 8;
  int samples = 64;
  double fs_hz = 128.0;
  double rho = 6.0;
  double sigma_mix = 0.4;
  double sigma_noise = 0.5;
};

/// Ground truth behind a generated corpus, exposed so tests can compare
/// empirical covariances against the latent ones.
struct SynthModel {
  Mat basis;                        // shared orthogonal A
  Vec variances_neg;                // diagonal of D_{-1}
  Vec variances_pos;                // diagonal of D_{+1}
  std::vector<Mat> subject_mixing;  // M_s per subject

  /// Noise-free per-sample trial covariance M_s (A D_k A^T) M_s^T.
  Mat class_covariance(int subject, int label) const;
};

struct SynthResult {
  /// Subject-major, session-minor: all sessions of subject 0 first.
  std::vector<TrialSet> sets;
  SynthModel model;
};

/// Generate a corpus. Same seed and params give bit-identical output; the
/// per-subject streams are derived independently, so subject s sees the
/// same data regardless of how many other subjects are requested.
SynthResult synth_generate(const SynthParams& params, std::uint64_t seed);

}  // namespace eegtl
