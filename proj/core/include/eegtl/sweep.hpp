#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eegtl/pipeline.hpp"

namespace eegtl {

struct SweepOptions {
  std::vector<int> n_l_grid = {0, 4, 8, 12, 16, 20};
  int repeats = 30;
  std::uint64_t base_seed = 0;
  int n_threads = 0;  // 0 = one thread per hardware core
  std::string dataset_name = "dataset";
};

// The comparison grid: {none, ea} alignment x {csp, ccsp, rcsp} x
// {lda, clda, war}, 18 configs at default parameters. include_ps adds the
// ps-aligned block for the full 27.
std::vector<PipelineConfig> standard_grid(bool include_ps = false);

// The selection arms: {none, ea} x {csp, rcsp} x {lda, war}, each in three
// variants: f = 3 without selection, f = 10 with relieff keeping 6, f = 10
// with crelieff keeping 6. 24 configs.
std::vector<PipelineConfig> featsel_grid();

// Runs every (target, config, n_l, repeat) cell of the experiment and
// returns one RunResult per feasible cell, in a deterministic order that
// does not depend on thread count. The cell seed is derived from
// (base_seed, target subject, n_l, repeat) only, so configs sharing a cell
// see the same labeled draw and can be compared pairwise.
//
// Targets come from each config's transfer kind: cross-subject holds one
// set out as the target and pools the rest as sources; cross-session
// expects exactly two sessions per subject and transfers from the first
// session (ordered by session id) to the second. Cells whose config cannot
// run at their n_l (csp at 0, a one-class draw) are skipped; any other
// per-cell error aborts the sweep.
std::vector<RunResult> sweep(const std::vector<TrialSet>& sets,
                             const std::vector<PipelineConfig>& configs,
                             const SweepOptions& options = {});

// sweep over featsel_grid().
std::vector<RunResult> feature_selection_experiment(
    const std::vector<TrialSet>& sets, const SweepOptions& options = {});

}  // namespace eegtl
