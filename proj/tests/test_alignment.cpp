#include "eegtl/alignment.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "eegtl/errors.hpp"
#include "eegtl/linalg.hpp"
#include "eegtl/rng.hpp"
#include "eegtl/synth.hpp"
#include "test_support.hpp"

using eegtl::AlignMethod;
using eegtl::AlignMode;
using eegtl::Mat;
using eegtl::Trial;

namespace {

std::vector<Trial> random_trials(eegtl::Rng& rng, int n, int c, int t) {
  std::vector<Trial> trials;
  for (int i = 0; i < n; ++i) {
    trials.push_back({test_support::random_gaussian(rng, c, t), i % 2 ? 1 : -1});
  }
  return trials;
}

Mat mean_covariance(const std::vector<Trial>& trials) {
  const Eigen::Index c = trials.front().data.rows();
  Mat mean = Mat::Zero(c, c);
  for (const Trial& tr : trials) mean += tr.data * tr.data.transpose();
  return mean / static_cast<double>(trials.size());
}

}  // namespace

TEST_CASE("ea_reference closed-form cases") {
  eegtl::Rng rng(201);
  Mat x0 = test_support::random_gaussian(rng, 3, 40);

  // All trials identical: the mean covariance is just X0 X0^T.
  std::vector<Trial> same = {{x0, -1}, {x0, 1}, {x0, -1}};
  auto ref = eegtl::ea_reference(same);
  Mat expected = x0 * x0.transpose();
  CHECK((ref.reference - expected).norm() / expected.norm() < 1e-9);
  CHECK(ref.n_trials_used == 3);

  // Trial covariances diag(1,1) and diag(3,1): trials are built so that
  // X X^T hits those exactly.
  Mat x1 = Mat::Identity(2, 2);
  Mat x2 = Mat::Zero(2, 2);
  x2(0, 0) = std::sqrt(3.0);
  x2(1, 1) = 1.0;
  auto hand = eegtl::ea_reference({{x1, -1}, {x2, 1}});
  CHECK(hand.reference(0, 0) == doctest::Approx(2.0));
  CHECK(hand.reference(1, 1) == doctest::Approx(1.0));
  CHECK(hand.whitener(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(hand.whitener(1, 1) == doctest::Approx(1.0));
  CHECK(std::abs(hand.whitener(0, 1)) < 1e-12);
}

TEST_CASE("whitener inverts the reference") {
  eegtl::Rng rng(203);
  auto trials = random_trials(rng, 12, 4, 50);
  auto ref = eegtl::ea_reference(trials);
  CHECK((ref.whitener * ref.reference * ref.whitener - Mat::Identity(4, 4))
            .norm() < 1e-6);
}

TEST_CASE("aligned trials have identity mean covariance") {
  eegtl::Rng rng(205);
  auto trials = random_trials(rng, 15, 5, 60);
  auto ref = eegtl::ea_reference(trials);
  auto aligned = eegtl::align(trials, ref);
  CHECK((mean_covariance(aligned) - Mat::Identity(5, 5)).norm() < 1e-6);

  // Re-estimating a reference from already-aligned trials is a no-op.
  auto ref2 = eegtl::ea_reference(aligned);
  CHECK((ref2.whitener - Mat::Identity(5, 5)).norm() < 1e-5);

  // Labels and order pass through.
  for (std::size_t i = 0; i < trials.size(); ++i) {
    CHECK(aligned[i].label == trials[i].label);
  }
}

TEST_CASE("ps_reference closed-form cases") {
  eegtl::Rng rng(207);
  Mat x0 = test_support::random_gaussian(rng, 3, 40);
  std::vector<Trial> same = {{x0, -1}, {x0, 1}};

  auto ps = eegtl::ps_reference(same);
  auto ea = eegtl::ea_reference(same);
  CHECK((ps.reference - ea.reference).norm() / ea.reference.norm() < 1e-6);

  // Commuting covariances diag(1,4) and diag(4,1): Karcher mean is the
  // elementwise geometric mean diag(2,2).
  Mat x1 = Mat::Zero(2, 2);
  x1(0, 0) = 1.0;
  x1(1, 1) = 2.0;
  Mat x2 = Mat::Zero(2, 2);
  x2(0, 0) = 2.0;
  x2(1, 1) = 1.0;
  auto geo = eegtl::ps_reference({{x1, -1}, {x2, 1}});
  CHECK((geo.reference - 2.0 * Mat::Identity(2, 2)).norm() < 1e-6);
}

TEST_CASE("ps_reference satisfies the Karcher stationarity condition") {
  eegtl::Rng rng(209);
  auto trials = random_trials(rng, 10, 4, 50);
  auto ref = eegtl::ps_reference(trials);

  std::vector<Mat> covs;
  for (const Trial& tr : trials) {
    Mat cov = tr.data * tr.data.transpose();
    covs.push_back(eegtl::regularize(0.5 * (cov + cov.transpose()), eegtl::kEigFloor));
  }
  CHECK(test_support::karcher_residual(covs, ref.reference) < 1e-8);

  // Congruence property: the Karcher mean of the whitened covariances is
  // the identity.
  auto aligned = eegtl::align(trials, ref);
  std::vector<Mat> aligned_covs;
  for (const Trial& tr : aligned) {
    Mat cov = tr.data * tr.data.transpose();
    aligned_covs.push_back(0.5 * (cov + cov.transpose()));
  }
  Mat aligned_mean = eegtl::riemannian_mean(aligned_covs, 1e-10, 100);
  CHECK((aligned_mean - Mat::Identity(4, 4)).norm() < 1e-5);
}

TEST_CASE("alignment commutes with trial reordering") {
  eegtl::Rng rng(211);
  auto trials = random_trials(rng, 8, 3, 40);
  std::vector<Trial> reversed(trials.rbegin(), trials.rend());

  for (auto method : {AlignMethod::EA, AlignMethod::PS}) {
    auto ref_fwd = method == AlignMethod::EA ? eegtl::ea_reference(trials)
                                             : eegtl::ps_reference(trials);
    auto ref_rev = method == AlignMethod::EA ? eegtl::ea_reference(reversed)
                                             : eegtl::ps_reference(reversed);
    CHECK((ref_fwd.reference - ref_rev.reference).norm() /
              ref_fwd.reference.norm() < 1e-9);
  }
}

TEST_CASE("degenerate trials are rejected") {
  std::vector<Trial> zeros = {{Mat::Zero(2, 10), -1}, {Mat::Zero(2, 10), 1}};
  CHECK_THROWS_WITH_AS(eegtl::ea_reference(zeros),
                       doctest::Contains("degenerate reference"),
                       eegtl::NumericError);
  CHECK_THROWS_WITH_AS(eegtl::ps_reference(zeros),
                       doctest::Contains("degenerate reference"),
                       eegtl::NumericError);
  CHECK_THROWS_AS(eegtl::ea_reference({}), eegtl::EmptyInputError);
}

TEST_CASE("align validates channel counts") {
  eegtl::Rng rng(213);
  auto trials = random_trials(rng, 4, 3, 30);
  auto ref = eegtl::ea_reference(trials);
  std::vector<Trial> wrong = {{Mat::Zero(4, 30), -1}};
  CHECK_THROWS_AS(eegtl::align(wrong, ref), eegtl::DimensionError);
}

TEST_CASE("domain_align online mode restricts the reference basis") {
  eegtl::SynthParams p;
  p.n_subjects = 1;
  p.n_trials_per_class = 10;
  p.channels = 4;
  p.samples = 40;
  auto data = eegtl::synth_generate(p, 301);
  const auto& set = data.sets[0];

  auto offline = eegtl::domain_align(set, AlignMethod::EA, AlignMode::Offline, {});
  CHECK(offline.reference.n_trials_used == 20);

  std::vector<std::size_t> all(set.trials.size());
  std::iota(all.begin(), all.end(), 0);
  auto online_all = eegtl::domain_align(set, AlignMethod::EA, AlignMode::Online, all);
  CHECK((online_all.reference.reference - offline.reference.reference).norm() <
        1e-12);

  auto online4 = eegtl::domain_align(set, AlignMethod::EA, AlignMode::Online,
                                     {0, 1, 2, 3});
  CHECK(online4.reference.n_trials_used == 4);
  // The reference is genuinely different from the offline one.
  CHECK((online4.reference.reference - offline.reference.reference).norm() >
        1e-6);
  // But every trial still gets aligned.
  CHECK(online4.set.trials.size() == set.trials.size());

  CHECK_THROWS_WITH_AS(
      eegtl::domain_align(set, AlignMethod::EA, AlignMode::Online, {}),
      doctest::Contains("empty online reference"), eegtl::EmptyInputError);
  CHECK_THROWS_AS(
      eegtl::domain_align(set, AlignMethod::EA, AlignMode::Online, {99}),
      eegtl::InvalidArgumentError);
}
