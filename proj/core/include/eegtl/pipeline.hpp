#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eegtl/alignment.hpp"
#include "eegtl/relieff.hpp"
#include "eegtl/spatial.hpp"
#include "eegtl/trial.hpp"
#include "eegtl/war.hpp"

namespace eegtl {

enum class AlignKind { None, EA, PS };
enum class SelectKind { None, ReliefF, CReliefF };
enum class ClassifierKind { Lda, Clda, War, Owar };
enum class TransferKind { CrossSubject, CrossSession };

std::string to_string(AlignKind kind);
std::string to_string(SpatialMethod method);
std::string to_string(SelectKind kind);
std::string to_string(ClassifierKind kind);
std::string to_string(AlignMode mode);
std::string to_string(TransferKind kind);

AlignKind align_kind_from(const std::string& name);
SpatialMethod spatial_method_from(const std::string& name);
SelectKind select_kind_from(const std::string& name);
ClassifierKind classifier_kind_from(const std::string& name);
AlignMode align_mode_from(const std::string& name);
TransferKind transfer_kind_from(const std::string& name);

struct PipelineConfig {
  AlignKind align = AlignKind::None;
  SpatialMethod spatial = SpatialMethod::CSP;
  int n_filters = kDefaultFiltersPerClass;  // f per class, 2f filters total
  double beta = 0.1;                        // rcsp source-target blend
  double gamma = 0.1;                       // rcsp identity shrinkage
  SelectKind select = SelectKind::None;
  int select_m = 6;                         // features kept after selection
  int relieff_k = kDefaultReliefNeighbors;  // clamped per cell, see below
  int relieff_iters = kDefaultReliefIterations;
  ClassifierKind clf = ClassifierKind::Lda;
  WarParams war;
  AlignMode mode = AlignMode::Offline;
  TransferKind transfer = TransferKind::CrossSubject;
  // Class-stratify the labeled-trial draw instead of sampling uniformly over
  // all trials. Uniform draws can hit a single class at small N_l, which
  // makes the cell infeasible for target-only methods.
  bool stratified = false;

  // Short name like "ea-rcsp-war" or "csp20-relieff6-lda": alignment prefix
  // unless none, spatial token with the filter count when f differs from the
  // default, selection token with m, classifier token.
  std::string id() const;
};

struct RunResult {
  std::string dataset;
  std::string target_subject;
  PipelineConfig config;
  int n_l = 0;
  int repeat = 0;
  std::uint64_t seed = 0;
  int n_correct = 0;
  int n_eval = 0;
  double accuracy = 0.0;
};

// Rejects configs that can never run: war under online mode (it needs the
// unlabeled evaluation batch), non-positive filter or selection counts,
// rcsp parameters outside [0, 1].
void validate(const PipelineConfig& config);

// One experiment cell. Draws N_l labeled target trials by the seed (the rest
// form the evaluation set), aligns each source subject and the target
// domain, pools the sources, fits spatial filters, extracts log-variance
// features, optionally selects them, fits the classifier, and scores the
// evaluation trials.
//
// Throws InfeasibleConfigError when the cell cannot run at all: target-only
// stages (csp, rcsp's target term, relieff, lda) with N_l = 0, a labeled
// draw that contains one class, or a ReliefF neighbor count that cannot be
// clamped to the class sizes. ReliefF's k is clamped to
// min(relieff_k, smallest class count - 1) so small N_l cells stay runnable.
RunResult run_pipeline(const PipelineConfig& config,
                       const std::vector<TrialSet>& source_sets,
                       const TrialSet& target_set, int n_l,
                       std::uint64_t seed);

}  // namespace eegtl
