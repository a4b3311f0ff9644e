#include "eegtl/sweep.hpp"

#include <atomic>
#include <cstddef>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>

#include "eegtl/errors.hpp"
#include "eegtl/rng.hpp"
#include "harness_detail.hpp"

namespace eegtl {

std::vector<PipelineConfig> standard_grid(bool include_ps) {
  std::vector<AlignKind> aligns = {AlignKind::None, AlignKind::EA};
  if (include_ps) aligns.push_back(AlignKind::PS);
  std::vector<PipelineConfig> out;
  for (AlignKind align : aligns) {
    for (SpatialMethod spatial :
         {SpatialMethod::CSP, SpatialMethod::CCSP, SpatialMethod::RCSP}) {
      for (ClassifierKind clf :
           {ClassifierKind::Lda, ClassifierKind::Clda, ClassifierKind::War}) {
        PipelineConfig config;
        config.align = align;
        config.spatial = spatial;
        config.clf = clf;
        out.push_back(config);
      }
    }
  }
  return out;
}

std::vector<PipelineConfig> featsel_grid() {
  std::vector<PipelineConfig> out;
  for (AlignKind align : {AlignKind::None, AlignKind::EA}) {
    for (SpatialMethod spatial : {SpatialMethod::CSP, SpatialMethod::RCSP}) {
      for (ClassifierKind clf : {ClassifierKind::Lda, ClassifierKind::War}) {
        for (SelectKind select :
             {SelectKind::None, SelectKind::ReliefF, SelectKind::CReliefF}) {
          PipelineConfig config;
          config.align = align;
          config.spatial = spatial;
          config.clf = clf;
          config.select = select;
          // The no-selection arm keeps the default f; the selection arms
          // widen the bank to f = 10 (20 filters) and keep select_m = 6.
          config.n_filters =
              select == SelectKind::None ? kDefaultFiltersPerClass : 10;
          out.push_back(config);
        }
      }
    }
  }
  return out;
}

namespace {

// One (sources, target) transfer task. Sources point into the caller's set
// vector, so alignment cache keys stay valid across cells.
struct TransferPair {
  std::vector<const TrialSet*> sources;
  const TrialSet* target = nullptr;
};

std::vector<TransferPair> cross_subject_pairs(
    const std::vector<TrialSet>& sets) {
  if (sets.size() < 2) {
    throw InvalidArgumentError(
        "sweep: cross-subject transfer needs at least 2 subjects, got " +
        std::to_string(sets.size()));
  }
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      if (sets[i].subject_id == sets[j].subject_id) {
        throw InvalidArgumentError(
            "sweep: duplicate subject id '" + sets[i].subject_id +
            "' in cross-subject transfer");
      }
    }
  }
  std::vector<TransferPair> pairs(sets.size());
  for (std::size_t t = 0; t < sets.size(); ++t) {
    pairs[t].target = &sets[t];
    for (std::size_t s = 0; s < sets.size(); ++s) {
      if (s != t) pairs[t].sources.push_back(&sets[s]);
    }
  }
  return pairs;
}

std::vector<TransferPair> cross_session_pairs(
    const std::vector<TrialSet>& sets) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const TrialSet*>> by_subject;
  for (const TrialSet& set : sets) {
    auto [it, inserted] = by_subject.try_emplace(set.subject_id);
    if (inserted) order.push_back(set.subject_id);
    it->second.push_back(&set);
  }
  std::vector<TransferPair> pairs;
  pairs.reserve(order.size());
  for (const std::string& subject : order) {
    std::vector<const TrialSet*>& sessions = by_subject[subject];
    if (sessions.size() != 2) {
      throw InvalidArgumentError(
          "sweep: cross-session transfer needs exactly 2 sessions per "
          "subject, '" + subject + "' has " +
          std::to_string(sessions.size()));
    }
    if (sessions[0]->session_id == sessions[1]->session_id) {
      throw InvalidArgumentError("sweep: subject '" + subject +
                                 "' has duplicate session id '" +
                                 sessions[0]->session_id + "'");
    }
    if (sessions[1]->session_id < sessions[0]->session_id) {
      std::swap(sessions[0], sessions[1]);
    }
    TransferPair pair;
    pair.sources.push_back(sessions[0]);
    pair.target = sessions[1];
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

struct Cell {
  const PipelineConfig* config = nullptr;
  const TransferPair* pair = nullptr;
  int n_l = 0;
  int repeat = 0;
  std::uint64_t seed = 0;
};

}  // namespace

std::vector<RunResult> sweep(const std::vector<TrialSet>& sets,
                             const std::vector<PipelineConfig>& configs,
                             const SweepOptions& options) {
  if (sets.empty()) throw EmptyInputError("sweep: no trial sets");
  if (configs.empty()) throw EmptyInputError("sweep: no configs");
  if (options.repeats < 1) {
    throw InvalidArgumentError("sweep: invalid param repeats = " +
                               std::to_string(options.repeats));
  }
  if (options.n_l_grid.empty()) {
    throw InvalidArgumentError("sweep: invalid param n_l_grid is empty");
  }
  for (int n_l : options.n_l_grid) {
    if (n_l < 0) {
      throw InvalidArgumentError("sweep: invalid param n_l = " +
                                 std::to_string(n_l));
    }
  }
  // Static config errors (online war, bad parameters) fail the whole sweep
  // up front; only per-cell infeasibility is skipped below.
  for (const PipelineConfig& config : configs) validate(config);

  bool wants_subject = false;
  bool wants_session = false;
  bool wants_align[2] = {false, false};
  for (const PipelineConfig& config : configs) {
    (config.transfer == TransferKind::CrossSubject ? wants_subject
                                                   : wants_session) = true;
    if (config.align == AlignKind::EA) {
      wants_align[detail::method_key(AlignMethod::EA)] = true;
    } else if (config.align == AlignKind::PS) {
      wants_align[detail::method_key(AlignMethod::PS)] = true;
    }
  }
  std::vector<TransferPair> subject_pairs;
  std::vector<TransferPair> session_pairs;
  if (wants_subject) subject_pairs = cross_subject_pairs(sets);
  if (wants_session) session_pairs = cross_session_pairs(sets);

  // Offline references are draw-independent, so align each set once per
  // method used instead of once per cell.
  detail::AlignmentCache cache;
  for (AlignMethod method : {AlignMethod::EA, AlignMethod::PS}) {
    if (!wants_align[detail::method_key(method)]) continue;
    for (const TrialSet& set : sets) {
      cache.aligned[{detail::method_key(method), &set}] =
          domain_align(set, method, AlignMode::Offline, {}).set.trials;
    }
  }

  std::vector<Cell> cells;
  for (const PipelineConfig& config : configs) {
    const std::vector<TransferPair>& pairs =
        config.transfer == TransferKind::CrossSubject ? subject_pairs
                                                      : session_pairs;
    for (const TransferPair& pair : pairs) {
      for (int n_l : options.n_l_grid) {
        for (int repeat = 0; repeat < options.repeats; ++repeat) {
          Cell cell;
          cell.config = &config;
          cell.pair = &pair;
          cell.n_l = n_l;
          cell.repeat = repeat;
          cell.seed = derive_seed(options.base_seed,
                                  {fnv1a(pair.target->subject_id),
                                   static_cast<std::uint64_t>(n_l),
                                   static_cast<std::uint64_t>(repeat)});
          cells.push_back(cell);
        }
      }
    }
  }

  // Workers pull cells off a shared counter and write into per-cell slots,
  // so the merged order matches the enumeration above for any thread count.
  std::vector<std::optional<RunResult>> slots(cells.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size() || failed.load()) return;
      const Cell& cell = cells[i];
      try {
        RunResult result =
            detail::run_cell(*cell.config, cell.pair->sources,
                             *cell.pair->target, cell.n_l, cell.seed, &cache);
        result.dataset = options.dataset_name;
        result.repeat = cell.repeat;
        slots[i] = std::move(result);
      } catch (const InfeasibleConfigError&) {
        // This cell cannot run at its n_l; the slot stays empty.
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  };

  int n_threads = options.n_threads;
  if (n_threads <= 0) {
    n_threads = static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) n_threads = 1;
  }
  if (cells.size() < static_cast<std::size_t>(n_threads)) {
    n_threads = static_cast<int>(cells.size());
  }
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(work);
    for (std::thread& thread : pool) thread.join();
  }
  if (failed.load()) std::rethrow_exception(error);

  std::vector<RunResult> results;
  results.reserve(cells.size());
  for (std::optional<RunResult>& slot : slots) {
    if (slot.has_value()) results.push_back(std::move(*slot));
  }
  return results;
}

std::vector<RunResult> feature_selection_experiment(
    const std::vector<TrialSet>& sets, const SweepOptions& options) {
  return sweep(sets, featsel_grid(), options);
}

}  // namespace eegtl
