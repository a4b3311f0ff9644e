#pragma once

#include <vector>

namespace eegtl {

inline constexpr double kDefaultAlpha = 0.05;

struct TTestReport {
  double t = 0.0;
  int df = 0;
  double p = 1.0;        // two-tailed
  double alpha = kDefaultAlpha;
  bool significant = false;
};

// Paired two-tailed t-test on the differences a - b, with the sample
// standard deviation (n - 1 divisor) and the Student-t CDF evaluated through
// the regularized incomplete beta function. An all-zero difference vector
// reports t = 0, p = 1; zero spread around a nonzero mean reports t = +/-inf,
// p = 0.
TTestReport paired_ttest(const std::vector<double>& a,
                         const std::vector<double>& b,
                         double alpha = kDefaultAlpha);

}  // namespace eegtl
