#include "eegtl/stats.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "eegtl/errors.hpp"

namespace eegtl {

TTestReport paired_ttest(const std::vector<double>& a,
                         const std::vector<double>& b, double alpha) {
  if (a.size() != b.size()) {
    throw DimensionError("paired_ttest: length mismatch, " +
                         std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
  if (a.size() < 2) {
    throw InvalidArgumentError("paired_ttest: too short, need n >= 2, got " +
                               std::to_string(a.size()));
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgumentError("paired_ttest: invalid param alpha = " +
                               std::to_string(alpha));
  }
  const auto n = static_cast<double>(a.size());
  double mean = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) mean += a[i] - b[i];
  mean /= n;
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double centered = a[i] - b[i] - mean;
    ss += centered * centered;
  }
  const double sd = std::sqrt(ss / (n - 1.0));

  TTestReport report;
  report.df = static_cast<int>(a.size()) - 1;
  report.alpha = alpha;
  if (sd == 0.0) {
    if (mean == 0.0) {
      report.t = 0.0;
      report.p = 1.0;
    } else {
      report.t = std::copysign(std::numeric_limits<double>::infinity(), mean);
      report.p = 0.0;
    }
  } else {
    report.t = mean / (sd / std::sqrt(n));
    const double df = n - 1.0;
    report.p =
        boost::math::ibeta(df / 2.0, 0.5, df / (df + report.t * report.t));
  }
  report.significant = report.p < alpha;
  return report;
}

}  // namespace eegtl
