#include "eegtl/pipeline.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "eegtl/errors.hpp"
#include "eegtl/lda.hpp"
#include "eegtl/rng.hpp"
#include "harness_detail.hpp"

namespace eegtl {

std::string to_string(AlignKind kind) {
  switch (kind) {
    case AlignKind::None: return "none";
    case AlignKind::EA: return "ea";
    case AlignKind::PS: return "ps";
  }
  throw InvalidArgumentError("to_string: invalid align kind");
}

std::string to_string(SpatialMethod method) {
  switch (method) {
    case SpatialMethod::CSP: return "csp";
    case SpatialMethod::CCSP: return "ccsp";
    case SpatialMethod::RCSP: return "rcsp";
  }
  throw InvalidArgumentError("to_string: invalid spatial method");
}

std::string to_string(SelectKind kind) {
  switch (kind) {
    case SelectKind::None: return "none";
    case SelectKind::ReliefF: return "relieff";
    case SelectKind::CReliefF: return "crelieff";
  }
  throw InvalidArgumentError("to_string: invalid select kind");
}

std::string to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::Lda: return "lda";
    case ClassifierKind::Clda: return "clda";
    case ClassifierKind::War: return "war";
    case ClassifierKind::Owar: return "owar";
  }
  throw InvalidArgumentError("to_string: invalid classifier kind");
}

std::string to_string(AlignMode mode) {
  return mode == AlignMode::Offline ? "offline" : "online";
}

std::string to_string(TransferKind kind) {
  return kind == TransferKind::CrossSubject ? "cross-subject" : "cross-session";
}

namespace {

[[noreturn]] void unknown_name(const char* what, const std::string& name) {
  throw InvalidArgumentError(std::string("invalid ") + what + " '" + name +
                             "'");
}

}  // namespace

AlignKind align_kind_from(const std::string& name) {
  if (name == "none") return AlignKind::None;
  if (name == "ea") return AlignKind::EA;
  if (name == "ps") return AlignKind::PS;
  unknown_name("align kind", name);
}

SpatialMethod spatial_method_from(const std::string& name) {
  if (name == "csp") return SpatialMethod::CSP;
  if (name == "ccsp") return SpatialMethod::CCSP;
  if (name == "rcsp") return SpatialMethod::RCSP;
  unknown_name("spatial method", name);
}

SelectKind select_kind_from(const std::string& name) {
  if (name == "none") return SelectKind::None;
  if (name == "relieff") return SelectKind::ReliefF;
  if (name == "crelieff") return SelectKind::CReliefF;
  unknown_name("select kind", name);
}

ClassifierKind classifier_kind_from(const std::string& name) {
  if (name == "lda") return ClassifierKind::Lda;
  if (name == "clda") return ClassifierKind::Clda;
  if (name == "war") return ClassifierKind::War;
  if (name == "owar") return ClassifierKind::Owar;
  unknown_name("classifier kind", name);
}

AlignMode align_mode_from(const std::string& name) {
  if (name == "offline") return AlignMode::Offline;
  if (name == "online") return AlignMode::Online;
  unknown_name("mode", name);
}

TransferKind transfer_kind_from(const std::string& name) {
  if (name == "cross-subject") return TransferKind::CrossSubject;
  if (name == "cross-session") return TransferKind::CrossSession;
  unknown_name("transfer kind", name);
}

std::string PipelineConfig::id() const {
  std::string out;
  if (align != AlignKind::None) out += to_string(align) + "-";
  out += to_string(spatial);
  if (n_filters != kDefaultFiltersPerClass) {
    out += std::to_string(2 * n_filters);
  }
  if (select != SelectKind::None) {
    out += "-" + to_string(select) + std::to_string(select_m);
  }
  out += "-" + to_string(clf);
  return out;
}

void validate(const PipelineConfig& config) {
  if (config.mode == AlignMode::Online && config.clf == ClassifierKind::War) {
    throw InfeasibleConfigError(
        "validate: war is offline-only, it trains on the unlabeled "
        "evaluation batch; use owar under online mode");
  }
  if (config.n_filters < 1) {
    throw InvalidArgumentError("validate: invalid param n_filters = " +
                               std::to_string(config.n_filters));
  }
  if (config.spatial == SpatialMethod::RCSP &&
      (config.beta < 0.0 || config.beta > 1.0 || config.gamma < 0.0 ||
       config.gamma > 1.0)) {
    throw InvalidArgumentError("validate: invalid param beta/gamma outside "
                               "[0, 1]");
  }
  if (config.select != SelectKind::None &&
      (config.select_m < 1 || config.relieff_k < 1 ||
       config.relieff_iters < 1)) {
    throw InvalidArgumentError(
        "validate: invalid param in selection settings");
  }
}

namespace {

[[noreturn]] void infeasible(const PipelineConfig& config, int n_l,
                             const std::string& why) {
  throw InfeasibleConfigError("run_pipeline: config " + config.id() +
                              " at n_l = " + std::to_string(n_l) +
                              " is infeasible: " + why);
}

std::vector<FeatureVector> take_columns(const std::vector<FeatureVector>& fs,
                                        const std::vector<int>& keep) {
  std::vector<FeatureVector> out;
  out.reserve(fs.size());
  for (const FeatureVector& f : fs) {
    Vec v(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) {
      v[static_cast<Eigen::Index>(j)] = f.values[keep[j]];
    }
    out.push_back(FeatureVector{std::move(v), f.label});
  }
  return out;
}

}  // namespace

namespace detail {

int method_key(AlignMethod method) {
  return method == AlignMethod::EA ? 0 : 1;
}

RunResult run_cell(const PipelineConfig& config,
                   const std::vector<const TrialSet*>& source_sets,
                   const TrialSet& target_set, int n_l, std::uint64_t seed,
                   const AlignmentCache* cache) {
  validate(config);
  if (target_set.trials.empty()) {
    throw EmptyInputError("run_pipeline: empty target set");
  }
  const int n_target = static_cast<int>(target_set.trials.size());
  if (n_l < 0 || n_l >= n_target) {
    throw InvalidArgumentError(
        "run_pipeline: invalid param n_l = " + std::to_string(n_l) +
        ", target has " + std::to_string(n_target) +
        " trials and the evaluation set must stay nonempty");
  }
  const Eigen::Index channels = target_set.channels();
  for (std::size_t t = 0; t < target_set.trials.size(); ++t) {
    const int label = target_set.trials[t].label;
    if (label != -1 && label != 1) {
      throw InvalidArgumentError("run_pipeline: target trial " +
                                 std::to_string(t) +
                                 " is unlabeled, ground truth is required");
    }
  }
  for (const TrialSet* set : source_sets) {
    if (set->trials.empty()) {
      throw EmptyInputError("run_pipeline: source set '" + set->subject_id +
                            "' is empty");
    }
    if (set->channels() != channels) {
      throw DimensionError("run_pipeline: source set '" + set->subject_id +
                           "' has " + std::to_string(set->channels()) +
                           " channels, target has " +
                           std::to_string(channels));
    }
    for (std::size_t t = 0; t < set->trials.size(); ++t) {
      const int label = set->trials[t].label;
      if (label != -1 && label != 1) {
        throw InvalidArgumentError("run_pipeline: source trial " +
                                   std::to_string(t) + " of '" +
                                   set->subject_id + "' is unlabeled");
      }
    }
  }

  // Stages that consume target labels cannot run without any.
  if (n_l == 0) {
    if (config.spatial == SpatialMethod::CSP) {
      infeasible(config, n_l,
                 "no csp filters can be trained without labeled target "
                 "trials");
    }
    if (config.spatial == SpatialMethod::RCSP) {
      infeasible(config, n_l,
                 "rcsp needs labeled target trials for its target "
                 "covariance term");
    }
    if (config.select == SelectKind::ReliefF) {
      infeasible(config, n_l, "relieff needs labeled target trials");
    }
    if (config.clf == ClassifierKind::Lda) {
      infeasible(config, n_l,
                 "no lda classifier can be trained without labeled target "
                 "trials");
    }
    if (config.mode == AlignMode::Online && config.align != AlignKind::None) {
      infeasible(config, n_l,
                 "online alignment needs labeled target trials for its "
                 "reference");
    }
  }

  // Labeled-trial draw. The stream is derived from the cell seed, so two
  // configs sharing a seed see the same subset.
  Rng draw_rng(derive_seed(seed, {fnv1a("labels")}));
  std::vector<std::size_t> labeled_idx;
  if (config.stratified) {
    std::vector<std::size_t> by_class[2];  // 0 = class -1, 1 = class +1
    for (std::size_t t = 0; t < target_set.trials.size(); ++t) {
      by_class[target_set.trials[t].label == 1 ? 1 : 0].push_back(t);
    }
    // Class -1 receives the extra draw when n_l is odd.
    const std::size_t take[2] = {static_cast<std::size_t>(n_l / 2 + n_l % 2),
                                 static_cast<std::size_t>(n_l / 2)};
    for (int c : {0, 1}) {
      if (by_class[c].size() < take[c]) {
        infeasible(config, n_l,
                   "stratified draw needs " + std::to_string(take[c]) +
                       " trials of class " + (c == 0 ? "-1" : "+1") +
                       ", target has " + std::to_string(by_class[c].size()));
      }
      for (std::size_t i :
           draw_rng.sample_without_replacement(by_class[c].size(), take[c])) {
        labeled_idx.push_back(by_class[c][i]);
      }
    }
  } else {
    labeled_idx = draw_rng.sample_without_replacement(
        static_cast<std::size_t>(n_target), static_cast<std::size_t>(n_l));
  }
  std::sort(labeled_idx.begin(), labeled_idx.end());

  std::vector<bool> is_labeled(static_cast<std::size_t>(n_target), false);
  for (std::size_t i : labeled_idx) is_labeled[i] = true;

  if (n_l > 0) {
    int drawn[2] = {0, 0};
    for (std::size_t i : labeled_idx) {
      ++drawn[target_set.trials[i].label == 1 ? 1 : 0];
    }
    const bool one_class = drawn[0] == 0 || drawn[1] == 0;
    const bool needs_both = config.spatial != SpatialMethod::CCSP ||
                            config.clf == ClassifierKind::Lda ||
                            config.select == SelectKind::ReliefF;
    if (one_class && needs_both) {
      infeasible(config, n_l,
                 "labeled draw contains a single class and a target-only "
                 "stage needs both");
    }
  }

  // Alignment: every source subject gets its own offline reference; the
  // target reference honors the mode (online restricts it to the labeled
  // draw). Offline alignment is independent of the labeled draw, so the
  // sweep precomputes it once per (method, set) and passes it in here.
  std::vector<std::vector<Trial>> source_trials;
  source_trials.reserve(source_sets.size());
  std::vector<Trial> target_trials;
  if (config.align == AlignKind::None) {
    for (const TrialSet* set : source_sets) {
      source_trials.push_back(set->trials);
    }
    target_trials = target_set.trials;
  } else {
    const AlignMethod method =
        config.align == AlignKind::EA ? AlignMethod::EA : AlignMethod::PS;
    const auto offline_aligned = [&](const TrialSet& set) {
      if (cache != nullptr) {
        auto it = cache->aligned.find({method_key(method), &set});
        if (it != cache->aligned.end()) return it->second;
      }
      return domain_align(set, method, AlignMode::Offline, {}).set.trials;
    };
    for (const TrialSet* set : source_sets) {
      source_trials.push_back(offline_aligned(*set));
    }
    target_trials =
        config.mode == AlignMode::Online
            ? domain_align(target_set, method, AlignMode::Online, labeled_idx)
                  .set.trials
            : offline_aligned(target_set);
  }

  // Pool all source subjects into one source domain.
  std::vector<Trial> source_pool;
  for (const auto& trials : source_trials) {
    source_pool.insert(source_pool.end(), trials.begin(), trials.end());
  }
  std::vector<Trial> target_labeled;
  std::vector<Trial> target_eval;
  std::vector<int> eval_truth;
  for (std::size_t t = 0; t < target_trials.size(); ++t) {
    if (is_labeled[t]) {
      target_labeled.push_back(target_trials[t]);
    } else {
      eval_truth.push_back(target_trials[t].label);
      target_eval.push_back(Trial{target_trials[t].data, kUnlabeled});
    }
  }

  FilterBank bank;
  switch (config.spatial) {
    case SpatialMethod::CSP:
      bank = csp_fit(target_labeled, config.n_filters);
      break;
    case SpatialMethod::CCSP:
      bank = ccsp_fit(source_pool, target_labeled, config.n_filters);
      break;
    case SpatialMethod::RCSP:
      bank = rcsp_fit(source_pool, target_labeled, config.beta, config.gamma,
                      config.n_filters);
      break;
  }

  std::vector<FeatureVector> feats_source = extract_features(source_pool, bank);
  std::vector<FeatureVector> feats_labeled =
      extract_features(target_labeled, bank);
  std::vector<FeatureVector> feats_eval = extract_features(target_eval, bank);

  if (config.select != SelectKind::None) {
    long counts[2] = {0, 0};
    for (const FeatureVector& f : feats_labeled) {
      ++counts[f.label == 1 ? 1 : 0];
    }
    if (config.select == SelectKind::CReliefF) {
      for (const FeatureVector& f : feats_source) {
        ++counts[f.label == 1 ? 1 : 0];
      }
    }
    const long min_count = std::min(counts[0], counts[1]);
    const int k_eff =
        static_cast<int>(std::min<long>(config.relieff_k, min_count - 1));
    if (k_eff < 1) {
      infeasible(config, n_l,
                 "relieff needs at least 2 labeled trials per class, "
                 "smallest class has " + std::to_string(min_count));
    }
    const std::uint64_t select_seed = derive_seed(seed, {fnv1a("select")});
    const FeatureWeights weights =
        config.select == SelectKind::ReliefF
            ? relieff(feats_labeled, k_eff, config.relieff_iters, select_seed)
            : crelieff(feats_source, feats_labeled, k_eff,
                       config.relieff_iters, select_seed);
    const std::vector<int> keep = select_top(weights, config.select_m);
    feats_source = take_columns(feats_source, keep);
    feats_labeled = take_columns(feats_labeled, keep);
    feats_eval = take_columns(feats_eval, keep);
  }

  std::vector<int> predicted;
  switch (config.clf) {
    case ClassifierKind::Lda:
      predicted = lda_predict(lda_fit(feats_labeled), feats_eval);
      break;
    case ClassifierKind::Clda:
      predicted = lda_predict(clda_fit(feats_source, feats_labeled), feats_eval);
      break;
    case ClassifierKind::War:
      predicted = war_predict(
          war_fit(feats_source, feats_labeled, feats_eval, config.war),
          feats_eval);
      break;
    case ClassifierKind::Owar:
      predicted =
          war_predict(owar_fit(feats_source, feats_labeled, config.war),
                      feats_eval);
      break;
  }

  RunResult result;
  result.dataset = "dataset";
  result.target_subject = target_set.subject_id;
  result.config = config;
  result.n_l = n_l;
  result.seed = seed;
  result.n_eval = static_cast<int>(target_eval.size());
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] == eval_truth[i]) ++result.n_correct;
  }
  result.accuracy = static_cast<double>(result.n_correct) /
                    static_cast<double>(result.n_eval);
  return result;
}

}  // namespace detail

RunResult run_pipeline(const PipelineConfig& config,
                       const std::vector<TrialSet>& source_sets,
                       const TrialSet& target_set, int n_l,
                       std::uint64_t seed) {
  std::vector<const TrialSet*> views;
  views.reserve(source_sets.size());
  for (const TrialSet& set : source_sets) views.push_back(&set);
  return detail::run_cell(config, views, target_set, n_l, seed, nullptr);
}

}  // namespace eegtl
