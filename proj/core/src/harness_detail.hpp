#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "eegtl/alignment.hpp"
#include "eegtl/pipeline.hpp"
#include "eegtl/trial.hpp"

namespace eegtl::detail {

// Offline domain alignment depends only on (method, trial set), never on
// the labeled draw, so the sweep computes it once per set and shares it
// across cells. Keys are (method_key, address of the caller's set).
struct AlignmentCache {
  std::map<std::pair<int, const TrialSet*>, std::vector<Trial>> aligned;
};

int method_key(AlignMethod method);

// run_pipeline body with an optional cache fast path. Sources are passed by
// pointer so the sweep can form leave-one-out views without copying trial
// data. Results are bitwise identical with and without the cache, since
// domain_align is deterministic.
RunResult run_cell(const PipelineConfig& config,
                   const std::vector<const TrialSet*>& source_sets,
                   const TrialSet& target_set, int n_l, std::uint64_t seed,
                   const AlignmentCache* cache);

}  // namespace eegtl::detail
