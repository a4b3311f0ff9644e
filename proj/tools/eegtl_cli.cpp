// Command-line front end for the transfer-learning pipeline: generate
// synthetic corpora, run single cells, sweep config grids, and post-process
// result CSVs.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eegtl/dataset_io.hpp"
#include "eegtl/errors.hpp"
#include "eegtl/pipeline.hpp"
#include "eegtl/report.hpp"
#include "eegtl/sweep.hpp"
#include "eegtl/synth.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// A data directory holds one trial-set directory per (subject, session).
std::vector<eegtl::TrialSet> load_corpus(const fs::path& dir) {
  std::vector<fs::path> set_dirs;
  if (fs::is_directory(dir)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_directory() && fs::exists(entry.path() / "manifest.json")) {
        set_dirs.push_back(entry.path());
      }
    }
  }
  if (set_dirs.empty()) {
    throw eegtl::FormatError("no trial sets under " + dir.string());
  }
  std::sort(set_dirs.begin(), set_dirs.end());
  std::vector<eegtl::TrialSet> sets;
  sets.reserve(set_dirs.size());
  for (const fs::path& p : set_dirs) sets.push_back(eegtl::load_trialset(p));
  // Order by ids so the sweep layout does not depend on directory names.
  std::stable_sort(sets.begin(), sets.end(),
                   [](const eegtl::TrialSet& a, const eegtl::TrialSet& b) {
                     return std::tie(a.subject_id, a.session_id) <
                            std::tie(b.subject_id, b.session_id);
                   });
  return sets;
}

// JSON config files mirror the PipelineConfig field names, everything
// optional. Unknown keys are rejected so typos do not silently fall back to
// defaults.
eegtl::PipelineConfig config_from_json(const json& j) {
  if (!j.is_object()) {
    throw eegtl::FormatError("config json: expected an object");
  }
  static const std::vector<std::string> known = {
      "align",     "spatial",    "n_filters", "beta",
      "gamma",     "select",     "select_m",  "relieff_k",
      "relieff_iters", "clf",    "war",       "mode",
      "transfer",  "stratified"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw eegtl::FormatError("config json: unknown key '" + key + "'");
    }
  }
  eegtl::PipelineConfig config;
  try {
    if (j.contains("align"))
      config.align = eegtl::align_kind_from(j.at("align").get<std::string>());
    if (j.contains("spatial"))
      config.spatial =
          eegtl::spatial_method_from(j.at("spatial").get<std::string>());
    if (j.contains("n_filters")) config.n_filters = j.at("n_filters").get<int>();
    if (j.contains("beta")) config.beta = j.at("beta").get<double>();
    if (j.contains("gamma")) config.gamma = j.at("gamma").get<double>();
    if (j.contains("select"))
      config.select =
          eegtl::select_kind_from(j.at("select").get<std::string>());
    if (j.contains("select_m")) config.select_m = j.at("select_m").get<int>();
    if (j.contains("relieff_k")) config.relieff_k = j.at("relieff_k").get<int>();
    if (j.contains("relieff_iters"))
      config.relieff_iters = j.at("relieff_iters").get<int>();
    if (j.contains("clf"))
      config.clf = eegtl::classifier_kind_from(j.at("clf").get<std::string>());
    if (j.contains("mode"))
      config.mode = eegtl::align_mode_from(j.at("mode").get<std::string>());
    if (j.contains("transfer"))
      config.transfer =
          eegtl::transfer_kind_from(j.at("transfer").get<std::string>());
    if (j.contains("stratified"))
      config.stratified = j.at("stratified").get<bool>();
    if (j.contains("war")) {
      const json& w = j.at("war");
      static const std::vector<std::string> war_known = {
          "w_t", "lambda1", "lambda2", "lambda3", "kernel", "n_em_iters"};
      for (const auto& [key, value] : w.items()) {
        if (std::find(war_known.begin(), war_known.end(), key) ==
            war_known.end()) {
          throw eegtl::FormatError("config json: unknown key 'war." + key +
                                   "'");
        }
      }
      if (w.contains("w_t")) config.war.w_t = w.at("w_t").get<double>();
      if (w.contains("lambda1"))
        config.war.lambda1 = w.at("lambda1").get<double>();
      if (w.contains("lambda2"))
        config.war.lambda2 = w.at("lambda2").get<double>();
      if (w.contains("lambda3"))
        config.war.lambda3 = w.at("lambda3").get<double>();
      if (w.contains("n_em_iters"))
        config.war.n_em_iters = w.at("n_em_iters").get<int>();
      if (w.contains("kernel")) {
        const json& k = w.at("kernel");
        if (k.contains("type")) {
          const std::string type = k.at("type").get<std::string>();
          if (type == "linear") {
            config.war.kernel.type = eegtl::KernelType::Linear;
          } else if (type == "rbf") {
            config.war.kernel.type = eegtl::KernelType::Rbf;
          } else {
            throw eegtl::FormatError("config json: unknown kernel type '" +
                                     type + "'");
          }
        }
        if (k.contains("bandwidth")) {
          config.war.kernel.bandwidth = k.at("bandwidth").get<double>();
        }
      }
    }
  } catch (const json::exception& e) {
    throw eegtl::FormatError(std::string("config json: ") + e.what());
  }
  return config;
}

std::vector<eegtl::PipelineConfig> configs_from_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw eegtl::FormatError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw eegtl::FormatError(path.string() + ": " + e.what());
  }
  std::vector<eegtl::PipelineConfig> configs;
  if (j.is_array()) {
    for (const json& item : j) configs.push_back(config_from_json(item));
  } else {
    configs.push_back(config_from_json(j));
  }
  if (configs.empty()) {
    throw eegtl::FormatError(path.string() + ": empty config list");
  }
  return configs;
}

// Pipeline flags shared by run/sweep/featsel-sweep. Each flag only takes
// effect when the user passed it, so grid and config-file entries keep
// their own values otherwise.
struct PipelineFlags {
  std::string align, spatial, select, clf, mode, transfer, kernel;
  int filter_f = 0, top_m = 0;
  double beta = 0.0, gamma = 0.0, wt = 0.0;
  double lambda1 = 0.0, lambda2 = 0.0, lambda3 = 0.0, bandwidth = 0.0;
  bool stratified = false;

  CLI::Option* o_align = nullptr;
  CLI::Option* o_spatial = nullptr;
  CLI::Option* o_filters = nullptr;
  CLI::Option* o_beta = nullptr;
  CLI::Option* o_gamma = nullptr;
  CLI::Option* o_select = nullptr;
  CLI::Option* o_top = nullptr;
  CLI::Option* o_clf = nullptr;
  CLI::Option* o_wt = nullptr;
  CLI::Option* o_l1 = nullptr;
  CLI::Option* o_l2 = nullptr;
  CLI::Option* o_l3 = nullptr;
  CLI::Option* o_kernel = nullptr;
  CLI::Option* o_bandwidth = nullptr;
  CLI::Option* o_mode = nullptr;
  CLI::Option* o_transfer = nullptr;
  CLI::Option* o_stratified = nullptr;

  void add_to(CLI::App* app) {
    o_align = app->add_option("--align", align, "Alignment: none, ea, ps");
    o_spatial = app->add_option("--spatial", spatial,
                                "Spatial filter: csp, ccsp, rcsp");
    o_filters =
        app->add_option("--filters", filter_f, "Filters per class (f)");
    o_beta = app->add_option("--beta", beta, "rcsp source-target blend");
    o_gamma = app->add_option("--gamma", gamma, "rcsp identity shrinkage");
    o_select = app->add_option("--select", select,
                               "Feature selection: none, relieff, crelieff");
    o_top = app->add_option("--top", top_m, "Features kept by selection");
    o_clf =
        app->add_option("--clf", clf, "Classifier: lda, clda, war, owar");
    o_wt = app->add_option("--wt", wt, "war weight of labeled target trials");
    o_l1 = app->add_option("--lambda1", lambda1, "war RKHS-norm weight");
    o_l2 = app->add_option("--lambda2", lambda2,
                           "war marginal-discrepancy weight");
    o_l3 = app->add_option("--lambda3", lambda3,
                           "war conditional-discrepancy weight");
    o_kernel =
        app->add_option("--kernel", kernel, "war kernel: linear, rbf");
    o_bandwidth = app->add_option("--bandwidth", bandwidth,
                                  "rbf width; <= 0 picks the median heuristic");
    o_mode = app->add_option("--mode", mode, "offline or online");
    o_transfer = app->add_option("--transfer", transfer,
                                 "cross-subject or cross-session");
    o_stratified = app->add_flag("--stratified", stratified,
                                 "Class-stratify the labeled draw");
  }

  void apply(eegtl::PipelineConfig* config) const {
    if (o_align->count()) config->align = eegtl::align_kind_from(align);
    if (o_spatial->count())
      config->spatial = eegtl::spatial_method_from(spatial);
    if (o_filters->count()) config->n_filters = filter_f;
    if (o_beta->count()) config->beta = beta;
    if (o_gamma->count()) config->gamma = gamma;
    if (o_select->count()) config->select = eegtl::select_kind_from(select);
    if (o_top->count()) config->select_m = top_m;
    if (o_clf->count()) config->clf = eegtl::classifier_kind_from(clf);
    if (o_wt->count()) config->war.w_t = wt;
    if (o_l1->count()) config->war.lambda1 = lambda1;
    if (o_l2->count()) config->war.lambda2 = lambda2;
    if (o_l3->count()) config->war.lambda3 = lambda3;
    if (o_kernel->count()) {
      if (kernel == "linear") {
        config->war.kernel.type = eegtl::KernelType::Linear;
      } else if (kernel == "rbf") {
        config->war.kernel.type = eegtl::KernelType::Rbf;
      } else {
        throw eegtl::InvalidArgumentError("invalid kernel '" + kernel + "'");
      }
    }
    if (o_bandwidth->count()) config->war.kernel.bandwidth = bandwidth;
    if (o_mode->count()) config->mode = eegtl::align_mode_from(mode);
    if (o_transfer->count())
      config->transfer = eegtl::transfer_kind_from(transfer);
    if (o_stratified->count()) config->stratified = stratified;
  }
};

// Picks the (sources, target) split for a single run the same way the
// sweep would for this config's transfer kind.
void split_for_target(const std::vector<eegtl::TrialSet>& sets,
                      const std::string& subject,
                      eegtl::TransferKind transfer,
                      std::vector<eegtl::TrialSet>* sources,
                      const eegtl::TrialSet** target) {
  std::vector<const eegtl::TrialSet*> of_subject;
  for (const eegtl::TrialSet& set : sets) {
    if (set.subject_id == subject) of_subject.push_back(&set);
  }
  if (of_subject.empty()) {
    throw eegtl::InvalidArgumentError("no trial set for subject '" + subject +
                                      "'");
  }
  if (transfer == eegtl::TransferKind::CrossSubject) {
    if (of_subject.size() != 1) {
      throw eegtl::InvalidArgumentError(
          "subject '" + subject +
          "' has several sessions; use --transfer cross-session");
    }
    *target = of_subject.front();
    for (const eegtl::TrialSet& set : sets) {
      if (set.subject_id != subject) sources->push_back(set);
    }
    if (sources->empty()) {
      throw eegtl::InvalidArgumentError(
          "cross-subject transfer needs at least one other subject");
    }
  } else {
    if (of_subject.size() != 2) {
      throw eegtl::InvalidArgumentError(
          "cross-session transfer needs exactly 2 sessions for '" + subject +
          "', found " + std::to_string(of_subject.size()));
    }
    if (of_subject[1]->session_id < of_subject[0]->session_id) {
      std::swap(of_subject[0], of_subject[1]);
    }
    sources->push_back(*of_subject[0]);
    *target = nullptr;
    for (const eegtl::TrialSet& set : sets) {
      if (&set == of_subject[1]) *target = &set;
    }
  }
}

void run_sweep_command(const fs::path& data_dir, const fs::path& out_csv,
                       std::vector<eegtl::PipelineConfig> configs,
                       const PipelineFlags& flags, eegtl::SweepOptions options,
                       const std::string& dataset_name) {
  for (eegtl::PipelineConfig& config : configs) flags.apply(&config);
  options.dataset_name =
      dataset_name.empty() ? data_dir.filename().string() : dataset_name;
  if (options.dataset_name.empty()) options.dataset_name = "dataset";

  const std::vector<eegtl::TrialSet> sets = load_corpus(data_dir);
  const auto start = std::chrono::steady_clock::now();
  const std::vector<eegtl::RunResult> results =
      eegtl::sweep(sets, configs, options);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  eegtl::write_results_csv(out_csv, results);
  std::printf("%zu results (%zu configs, %zu sets) in %.1f s -> %s\n",
              results.size(), configs.size(), sets.size(), seconds,
              out_csv.string().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transfer-learning pipelines for motor-imagery EEG"};
  app.require_subcommand(1);

  // --- synth ---------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  eegtl::SynthParams synth_params;
  std::uint64_t synth_seed = 0;
  fs::path synth_out;
  synth->add_option("--subjects", synth_params.n_subjects, "Subjects")
      ->capture_default_str();
  synth->add_option("--sessions", synth_params.n_sessions,
                    "Sessions per subject")
      ->capture_default_str();
  synth->add_option("--trials", synth_params.n_trials_per_class,
                    "Trials per class and session")
      ->capture_default_str();
  synth->add_option("--channels", synth_params.channels, "Channels")
      ->capture_default_str();
  synth->add_option("--samples", synth_params.samples, "Samples per trial")
      ->capture_default_str();
  synth->add_option("--fs", synth_params.fs_hz, "Sampling rate in Hz")
      ->capture_default_str();
  synth->add_option("--rho", synth_params.rho, "Class contrast")
      ->capture_default_str();
  synth->add_option("--sigma-mix", synth_params.sigma_mix,
                    "Subject mixing perturbation")
      ->capture_default_str();
  synth->add_option("--sigma-noise", synth_params.sigma_noise,
                    "Additive sensor noise")
      ->capture_default_str();
  synth->add_option("--seed", synth_seed, "Generator seed")
      ->capture_default_str();
  synth->add_option("--out", synth_out, "Output data directory")->required();
  synth->callback([&] {
    const eegtl::SynthResult generated =
        eegtl::synth_generate(synth_params, synth_seed);
    fs::create_directories(synth_out);
    for (const eegtl::TrialSet& set : generated.sets) {
      eegtl::save_trialset(
          set, synth_out / (set.subject_id + "_" + set.session_id));
    }
    std::printf("wrote %zu trial sets to %s\n", generated.sets.size(),
                synth_out.string().c_str());
  });

  // --- run -----------------------------------------------------------
  auto* run = app.add_subcommand("run", "Run a single pipeline cell");
  fs::path run_data, run_config_file;
  std::string run_target;
  int run_nl = 8;
  std::uint64_t run_seed = 0;
  PipelineFlags run_flags;
  run->add_option("--data", run_data, "Data directory")->required();
  run->add_option("--target", run_target, "Target subject id")->required();
  run->add_option("--config", run_config_file,
                  "JSON config file (flags may override it)");
  run->add_option("--nl", run_nl, "Labeled target trials")
      ->capture_default_str();
  run->add_option("--seed", run_seed, "Cell seed")->capture_default_str();
  run_flags.add_to(run);
  run->callback([&] {
    eegtl::PipelineConfig config;
    if (!run_config_file.empty()) {
      const std::vector<eegtl::PipelineConfig> configs =
          configs_from_file(run_config_file);
      if (configs.size() != 1) {
        throw eegtl::InvalidArgumentError(
            "run: --config expects a single config, found " +
            std::to_string(configs.size()));
      }
      config = configs.front();
    }
    run_flags.apply(&config);
    const std::vector<eegtl::TrialSet> sets = load_corpus(run_data);
    std::vector<eegtl::TrialSet> sources;
    const eegtl::TrialSet* target = nullptr;
    split_for_target(sets, run_target, config.transfer, &sources, &target);
    const eegtl::RunResult result =
        eegtl::run_pipeline(config, sources, *target, run_nl, run_seed);
    std::printf("config: %s\ntarget: %s  n_l: %d  seed: %llu\n",
                result.config.id().c_str(), result.target_subject.c_str(),
                result.n_l, static_cast<unsigned long long>(result.seed));
    std::printf("accuracy: %.4f (%d/%d correct)\n", result.accuracy,
                result.n_correct, result.n_eval);
  });

  // --- sweep / featsel-sweep ----------------------------------------
  struct SweepCli {
    fs::path data, out, config_file;
    std::string dataset_name;
    eegtl::SweepOptions options;
    PipelineFlags flags;
    bool include_ps = false;
  };
  SweepCli sweep_cli, featsel_cli;
  const auto add_sweep_options = [](CLI::App* cmd, SweepCli* cli) {
    cmd->add_option("--data", cli->data, "Data directory")->required();
    cmd->add_option("--out", cli->out, "Result CSV path")->required();
    cmd->add_option("--nl", cli->options.n_l_grid,
                    "Labeled-trial grid, e.g. --nl 0,4,8,12,16,20")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--repeats", cli->options.repeats, "Repeats per cell")
        ->capture_default_str();
    cmd->add_option("--seed", cli->options.base_seed, "Base seed")
        ->capture_default_str();
    cmd->add_option("--threads", cli->options.n_threads,
                    "Worker threads; 0 = hardware")
        ->capture_default_str();
    cmd->add_option("--dataset-name", cli->dataset_name,
                    "Dataset column value; defaults to the data dir name");
    cli->flags.add_to(cmd);
  };

  auto* sweep_cmd =
      app.add_subcommand("sweep", "Run the comparison grid over a corpus");
  add_sweep_options(sweep_cmd, &sweep_cli);
  sweep_cmd->add_option("--config", sweep_cli.config_file,
                        "JSON config file (object or array) replacing the "
                        "built-in grid");
  sweep_cmd->add_flag("--include-ps", sweep_cli.include_ps,
                      "Add the ps-aligned block (27 configs)");
  sweep_cmd->callback([&] {
    std::vector<eegtl::PipelineConfig> configs =
        sweep_cli.config_file.empty()
            ? eegtl::standard_grid(sweep_cli.include_ps)
            : configs_from_file(sweep_cli.config_file);
    run_sweep_command(sweep_cli.data, sweep_cli.out, std::move(configs),
                      sweep_cli.flags, sweep_cli.options,
                      sweep_cli.dataset_name);
  });

  auto* featsel_cmd = app.add_subcommand(
      "featsel-sweep", "Run the feature-selection arms over a corpus");
  add_sweep_options(featsel_cmd, &featsel_cli);
  featsel_cmd->callback([&] {
    run_sweep_command(featsel_cli.data, featsel_cli.out,
                      eegtl::featsel_grid(), featsel_cli.flags,
                      featsel_cli.options, featsel_cli.dataset_name);
  });

  // --- summarize -----------------------------------------------------
  auto* summarize_cmd =
      app.add_subcommand("summarize", "Mean accuracy per config over a CSV");
  fs::path summarize_in;
  std::string summarize_baseline = "csp-lda";
  summarize_cmd->add_option("--in", summarize_in, "Result CSV")->required();
  summarize_cmd->add_option("--baseline", summarize_baseline,
                            "Baseline config id")
      ->capture_default_str();
  summarize_cmd->callback([&] {
    const std::vector<eegtl::ConfigSummary> summary = eegtl::summarize(
        eegtl::read_results_csv(summarize_in), summarize_baseline);
    std::printf("%-28s %8s %8s %9s %8s %7s\n", "config", "mean", "std",
                "improv%", "repeats", "cells");
    for (const eegtl::ConfigSummary& s : summary) {
      std::printf("%-28s %8.4f %8.4f %+9.2f %8d %7d\n", s.config_id.c_str(),
                  s.mean_accuracy, s.std_accuracy, s.improvement_pct,
                  s.n_repeats, s.n_cells);
    }
  });

  // --- ttest ---------------------------------------------------------
  auto* ttest_cmd = app.add_subcommand(
      "ttest", "Paired t-test between two configs over a CSV");
  fs::path ttest_in;
  std::string ttest_a, ttest_b;
  double ttest_alpha = eegtl::kDefaultAlpha;
  ttest_cmd->add_option("--in", ttest_in, "Result CSV")->required();
  ttest_cmd->add_option("--config-a", ttest_a, "First config id")->required();
  ttest_cmd->add_option("--config-b", ttest_b, "Second config id")
      ->required();
  ttest_cmd->add_option("--alpha", ttest_alpha, "Significance level")
      ->capture_default_str();
  ttest_cmd->callback([&] {
    const eegtl::TTestReport report = eegtl::config_ttest(
        eegtl::read_results_csv(ttest_in), ttest_a, ttest_b, ttest_alpha);
    std::printf("%s vs %s: t = %.4f, df = %d, p = %.4g (%ssignificant at "
                "alpha = %g)\n",
                ttest_a.c_str(), ttest_b.c_str(), report.t, report.df,
                report.p, report.significant ? "" : "not ", report.alpha);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const eegtl::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
