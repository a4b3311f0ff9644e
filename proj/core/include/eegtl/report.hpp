#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "eegtl/pipeline.hpp"
#include "eegtl/stats.hpp"

namespace eegtl {

inline constexpr const char* kResultsCsvHeader =
    "dataset,target_subject,config,align,spatial,select,clf,mode,transfer,"
    "n_l,repeat,seed,accuracy";

// One row per result under the fixed header above. The config column is the
// config id; the factored columns repeat its parts for easy filtering.
// Accuracy is written with enough digits to round-trip exactly. Text fields
// must not contain the delimiter, there is no quoting.
void write_results_csv(std::ostream& out,
                       const std::vector<RunResult>& results);
void write_results_csv(const std::filesystem::path& path,
                       const std::vector<RunResult>& results);

// Parses a file written by write_results_csv. The config is rebuilt from
// the factored columns plus the filter and selection counts encoded in the
// id; war parameters are not part of the schema and read back as defaults,
// correct/eval counts read back as zero. Malformed input raises
// FormatError.
std::vector<RunResult> read_results_csv(std::istream& in);
std::vector<RunResult> read_results_csv(const std::filesystem::path& path);

struct ConfigSummary {
  std::string config_id;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  double improvement_pct = 0.0;  // vs the baseline config's mean
  int n_repeats = 0;             // repeats with at least one feasible cell
  int n_cells = 0;               // cells entering the mean
};

// Per-config accuracy over the n_l >= 4 rows, in first-appearance order.
// Cells are averaged within each repeat first, then mean and sample std are
// taken over the repeat means, so repeats with skipped cells still weigh
// equally. Configs without qualifying rows are dropped; a baseline id with
// no rows raises "missing baseline".
std::vector<ConfigSummary> summarize(const std::vector<RunResult>& results,
                                     const std::string& baseline = "csp-lda");

// Paired t-test between two configs' accuracies. Cells pair on
// (dataset, target subject, n_l, repeat); keys present for only one of the
// two are dropped. Positive t means config_a scored higher.
TTestReport config_ttest(const std::vector<RunResult>& results,
                         const std::string& config_a,
                         const std::string& config_b,
                         double alpha = kDefaultAlpha);

}  // namespace eegtl
