#include "eegtl/synth.hpp"

#include <cmath>
#include <string>

#include "eegtl/errors.hpp"
#include "eegtl/rng.hpp"

namespace eegtl {

namespace {

// Share of the subject perturbation that is unstructured rather than a
// latent amplitude gain, and the share of gain variance that is a single
// per-subject loudness common to all components. See the mixing
// construction below.
constexpr double kMixRoughness = 0.12;
constexpr double kMixShared = 0.85;

Mat gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Mat g(rows, cols);
  // Row-major fill so the draw order matches how a trial reads: per
  // channel, then per sample.
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = rng.normal();
  return g;
}

Mat random_orthogonal(Rng& rng, Eigen::Index n) {
  Eigen::HouseholderQR<Mat> qr(gaussian_matrix(rng, n, n));
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR();
  for (Eigen::Index i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  return q;
}

std::string pad2(int v) {
  std::string s = std::to_string(v);
  return s.size() < 2 ? "0" + s : s;
}

void validate(const SynthParams& p) {
  auto fail = [](const std::string& what) {
    throw InvalidArgumentError("synth_generate: " + what);
  };
  if (p.n_subjects < 1) fail("n_subjects must be >= 1");
  if (p.n_sessions < 1) fail("n_sessions must be >= 1");
  if (p.n_trials_per_class < 1) fail("n_trials_per_class must be >= 1");
  if (p.channels < 2) fail("channels must be >= 2");
  if (p.samples < 2) fail("samples must be >= 2");
  if (!(p.fs_hz > 0.0)) fail("fs_hz must be positive");
  if (!(p.rho >= 1.0)) fail("rho must be >= 1");
  if (p.sigma_mix < 0.0) fail("sigma_mix must be >= 0");
  if (p.sigma_noise < 0.0) fail("sigma_noise must be >= 0");
}

}  // namespace

Mat SynthModel::class_covariance(int subject, int label) const {
  const Vec& d = label < 0 ? variances_neg : variances_pos;
  const Mat& m = subject_mixing.at(static_cast<std::size_t>(subject));
  Mat latent = basis * d.asDiagonal() * basis.transpose();
  Mat cov = m * latent * m.transpose();
  return 0.5 * (cov + cov.transpose());
}

SynthResult synth_generate(const SynthParams& params, std::uint64_t seed) {
  validate(params);
  const Eigen::Index c = params.channels;
  const Eigen::Index t = params.samples;

  SynthResult out;
  SynthModel& model = out.model;

  Rng model_rng(derive_seed(seed, {fnv1a("model")}));
  model.basis = random_orthogonal(model_rng, c);
  model.variances_neg = Vec::Ones(c);
  model.variances_pos = Vec::Ones(c);
  model.variances_neg[0] = params.rho;
  model.variances_pos[1] = params.rho;

  // Square roots of the class covariances, shared by every subject.
  Mat half_neg = model.basis * model.variances_neg.array().sqrt().matrix().asDiagonal() *
                 model.basis.transpose();
  Mat half_pos = model.basis * model.variances_pos.array().sqrt().matrix().asDiagonal() *
                 model.basis.transpose();

  for (int s = 0; s < params.n_subjects; ++s) {
    Rng mix_rng(derive_seed(seed, {fnv1a("mixing"), static_cast<std::uint64_t>(s)}));
    // The perturbation mixes two parts. Per-component amplitude gains in
    // the shared latent basis dominate; they shift second-order statistics
    // in a way whitening can undo. Gains are correlated within a subject
    // (a common loudness plus component-specific spread), so unaligned
    // pooling is skewed toward loud subjects. A smaller unstructured
    // remainder adds relative rotations between subjects that no
    // covariance-level alignment can remove, so domains never align
    // exactly.
    Mat mixing;
    do {
      const double loudness = mix_rng.normal();
      Vec delta(c);
      for (Eigen::Index i = 0; i < c; ++i)
        delta[i] = std::sqrt(kMixShared) * loudness +
                   std::sqrt(1.0 - kMixShared) * mix_rng.normal();
      Mat g = model.basis * delta.asDiagonal() * model.basis.transpose() +
              kMixRoughness * gaussian_matrix(mix_rng, c, c);
      mixing = Mat::Identity(c, c) + params.sigma_mix * g;
    } while (!Eigen::FullPivLU<Mat>(mixing).isInvertible());
    model.subject_mixing.push_back(mixing);

    for (int sess = 0; sess < params.n_sessions; ++sess) {
      Rng trial_rng(derive_seed(seed, {fnv1a("trials"),
                                       static_cast<std::uint64_t>(s),
                                       static_cast<std::uint64_t>(sess)}));
      TrialSet set;
      set.subject_id = "s" + pad2(s + 1);
      set.session_id = "sess" + pad2(sess + 1);
      set.fs_hz = params.fs_hz;
      set.class_names = {{-1, "left"}, {1, "right"}};
      set.trials.reserve(2 * static_cast<std::size_t>(params.n_trials_per_class));
      // Interleave classes so any prefix of the session is near balanced.
      for (int i = 0; i < params.n_trials_per_class; ++i) {
        for (int label : {-1, 1}) {
          const Mat& half = label < 0 ? half_neg : half_pos;
          Mat z = gaussian_matrix(trial_rng, c, t);
          Mat x = mixing * (half * z);
          x += params.sigma_noise * gaussian_matrix(trial_rng, c, t);
          set.trials.push_back({std::move(x), label});
        }
      }
      out.sets.push_back(std::move(set));
    }
  }
  return out;
}

}  // namespace eegtl
