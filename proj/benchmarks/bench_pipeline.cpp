// Stage-level costs at the synthetic study's working point: alignment
// references, spatial filtering, feature extraction, both classifier fits,
// and one full cross-subject experiment cell. One generated corpus is
// shared by every benchmark so the numbers are comparable.

#include <benchmark/benchmark.h>

#include <vector>

#include "eegtl/alignment.hpp"
#include "eegtl/lda.hpp"
#include "eegtl/pipeline.hpp"
#include "eegtl/spatial.hpp"
#include "eegtl/synth.hpp"
#include "eegtl/war.hpp"

namespace {

using eegtl::FeatureVector;
using eegtl::TrialSet;

const eegtl::SynthResult& corpus() {
  static const eegtl::SynthResult result = [] {
    eegtl::SynthParams params;  // 5 subjects, 120 trials each, 8 channels
    params.samples = 32;
    return eegtl::synth_generate(params, 7);
  }();
  return result;
}

std::vector<FeatureVector> target_features() {
  const TrialSet& set = corpus().sets[0];
  return eegtl::extract_features(set.trials, eegtl::csp_fit(set.trials));
}

std::vector<FeatureVector> source_features() {
  const eegtl::FilterBank bank = eegtl::csp_fit(corpus().sets[0].trials);
  std::vector<FeatureVector> pooled;
  for (std::size_t s = 1; s < corpus().sets.size(); ++s) {
    for (FeatureVector& f :
         eegtl::extract_features(corpus().sets[s].trials, bank)) {
      pooled.push_back(std::move(f));
    }
  }
  return pooled;
}

void BM_ea_reference(benchmark::State& state) {
  const auto& trials = corpus().sets[0].trials;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eegtl::ea_reference(trials));
  }
}
BENCHMARK(BM_ea_reference);

void BM_ps_reference(benchmark::State& state) {
  const auto& trials = corpus().sets[0].trials;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eegtl::ps_reference(trials));
  }
}
BENCHMARK(BM_ps_reference)->Unit(benchmark::kMillisecond);

void BM_csp_fit(benchmark::State& state) {
  const auto& trials = corpus().sets[0].trials;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eegtl::csp_fit(trials));
  }
}
BENCHMARK(BM_csp_fit);

void BM_rcsp_fit(benchmark::State& state) {
  std::vector<eegtl::Trial> source;
  for (std::size_t s = 1; s < corpus().sets.size(); ++s) {
    const auto& trials = corpus().sets[s].trials;
    source.insert(source.end(), trials.begin(), trials.end());
  }
  const auto& target = corpus().sets[0].trials;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eegtl::rcsp_fit(source, target, 0.1, 0.1));
  }
}
BENCHMARK(BM_rcsp_fit);

void BM_extract_features(benchmark::State& state) {
  const auto& trials = corpus().sets[0].trials;
  const eegtl::FilterBank bank = eegtl::csp_fit(trials);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eegtl::extract_features(trials, bank));
  }
}
BENCHMARK(BM_extract_features);

void BM_lda_fit(benchmark::State& state) {
  const auto features = target_features();
  for (auto _ : state) {
    benchmark::DoNotOptimize(eegtl::lda_fit(features));
  }
}
BENCHMARK(BM_lda_fit);

void BM_war_fit(benchmark::State& state) {
  // 480 source rows, 12 labeled target rows, the rest unlabeled: the
  // kernel solve plus pseudo-label refinement that dominates a war cell.
  const auto source = source_features();
  auto target = target_features();
  std::vector<FeatureVector> labeled(target.begin(), target.begin() + 12);
  std::vector<FeatureVector> unlabeled(target.begin() + 12, target.end());
  for (FeatureVector& f : unlabeled) f.label = eegtl::kUnlabeled;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eegtl::war_fit(source, labeled, unlabeled));
  }
}
BENCHMARK(BM_war_fit)->Unit(benchmark::kMillisecond);

void BM_pipeline_cell(benchmark::State& state) {
  // The headline transfer pipeline, one cell: align five domains, fit
  // rcsp, extract, fit war, score the evaluation split.
  eegtl::PipelineConfig config;
  config.align = eegtl::AlignKind::EA;
  config.spatial = eegtl::SpatialMethod::RCSP;
  config.clf = eegtl::ClassifierKind::War;
  const TrialSet& target = corpus().sets[0];
  const std::vector<TrialSet> sources(corpus().sets.begin() + 1,
                                      corpus().sets.end());
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        eegtl::run_pipeline(config, sources, target, 12, 1));
  }
}
BENCHMARK(BM_pipeline_cell)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
