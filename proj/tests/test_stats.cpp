#include <cmath>
#include <vector>

#include "doctest.h"
#include "eegtl/errors.hpp"
#include "eegtl/rng.hpp"
#include "eegtl/stats.hpp"

using namespace eegtl;

TEST_CASE("paired_ttest: identical samples give t = 0, p = 1") {
  const std::vector<double> a = {0.4, 0.7, 0.55, 0.61};
  const TTestReport r = paired_ttest(a, a);
  CHECK(r.t == 0.0);
  CHECK(r.p == 1.0);
  CHECK(r.df == 3);
  CHECK_FALSE(r.significant);
}

TEST_CASE("paired_ttest: (1,2,3) vs zeros matches the df = 2 closed form") {
  const TTestReport r = paired_ttest({1.0, 2.0, 3.0}, {0.0, 0.0, 0.0});
  // d = (1,2,3): mean 2, sd 1, t = 2 sqrt(3); for two degrees of freedom the
  // two-tailed p has the closed form 1 - t / sqrt(2 + t^2) = 1 - sqrt(6/7).
  CHECK(r.t == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-12));
  CHECK(r.df == 2);
  CHECK(r.p == doctest::Approx(1.0 - std::sqrt(6.0 / 7.0)).epsilon(1e-8));
  CHECK(r.t == doctest::Approx(3.4641).epsilon(1e-4));
  CHECK(r.p == doctest::Approx(0.0742).epsilon(2e-2));
}

TEST_CASE("paired_ttest: swapping the samples negates t and keeps p") {
  const std::vector<double> a = {0.71, 0.64, 0.80, 0.55, 0.69};
  const std::vector<double> b = {0.66, 0.61, 0.74, 0.57, 0.62};
  const TTestReport fwd = paired_ttest(a, b);
  const TTestReport rev = paired_ttest(b, a);
  CHECK(fwd.t == doctest::Approx(-rev.t).epsilon(1e-12));
  CHECK(fwd.p == doctest::Approx(rev.p).epsilon(1e-12));
}

TEST_CASE("paired_ttest: constant nonzero shift reports certainty") {
  const TTestReport r = paired_ttest({1.5, 2.5, 3.5}, {1.0, 2.0, 3.0});
  CHECK(std::isinf(r.t));
  CHECK(r.t > 0.0);
  CHECK(r.p == 0.0);
  CHECK(r.significant);
}

TEST_CASE("paired_ttest: p stays within [0,1] on random inputs") {
  Rng rng(7301);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(8), b(8);
    for (int i = 0; i < 8; ++i) {
      a[static_cast<std::size_t>(i)] = rng.normal();
      b[static_cast<std::size_t>(i)] = rng.normal();
    }
    const TTestReport r = paired_ttest(a, b);
    CHECK(r.p >= 0.0);
    CHECK(r.p <= 1.0);
    CHECK(r.significant == (r.p < r.alpha));
  }
}

TEST_CASE("paired_ttest: validation") {
  CHECK_THROWS_WITH_AS(paired_ttest({1.0, 2.0}, {1.0}),
                       doctest::Contains("length mismatch"), DimensionError);
  CHECK_THROWS_WITH_AS(paired_ttest({1.0}, {2.0}),
                       doctest::Contains("too short"), InvalidArgumentError);
  CHECK_THROWS_WITH_AS(paired_ttest({1.0, 2.0}, {0.0, 1.0}, 1.5),
                       doctest::Contains("invalid param"),
                       InvalidArgumentError);
}
