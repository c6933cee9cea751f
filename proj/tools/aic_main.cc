// Copyright 2026 The AIC Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// Command-line front end. Uses only the public C interface.

#include <csignal>
#include <cstdint>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "aic/aic.h"

namespace {

int Fail(aic_status status) {
  std::fprintf(stderr, "aic: %s: %s\n", aic_status_name(status), aic_last_error());
  return 1;
}

// Releases a manifest handle on scope exit.
struct ManifestHandle {
  aic_manifest* m = nullptr;
  ~ManifestHandle() { aic_manifest_free(m); }
};

struct StoreHandle {
  aic_store* s = nullptr;
  ~StoreHandle() { aic_store_free(s); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Triplet-comparison image quality study toolkit"};
  app.set_version_flag("--version", std::string(aic_version()));
  app.require_subcommand(1);

  std::string manifest_path;
  std::string out;
  int status = 0;
  ManifestHandle manifest;

  auto load_manifest = [&]() -> bool {
    const aic_status s = aic_manifest_load(manifest_path.c_str(), &manifest.m);
    if (s != AIC_OK) status = Fail(s);
    return s == AIC_OK;
  };

  // catalog match / match-all
  auto* catalog = app.add_subcommand("catalog", "Stimulus catalog operations");
  catalog->require_subcommand(1);
  std::string codec, source, work_dir = ".";
  double target_bpp = 0, tolerance = 0.02;
  auto* match = catalog->add_subcommand("match", "Find the quality setting closest to a bitrate");
  match->add_option("--manifest", manifest_path)->required();
  match->add_option("--codec", codec)->required();
  match->add_option("--source", source)->required();
  match->add_option("--target-bpp", target_bpp)->required();
  match->add_option("--tolerance", tolerance);
  match->add_option("--work-dir", work_dir);
  match->callback([&] {
    if (!load_manifest()) return;
    aic_match_result r{};
    const aic_status s = aic_catalog_match(manifest.m, source.c_str(), codec.c_str(),
                                           target_bpp, tolerance, work_dir.c_str(), &r);
    if (s != AIC_OK) {
      status = Fail(s);
      return;
    }
    std::printf("quality\t%d\nactual_bpp\t%.6g\nadjusted_target_bpp\t%.6g\n"
                "relative_deviation\t%.6g\nevaluations\t%d\n",
                r.quality, r.actual_bpp, r.adjusted_target_bpp, r.relative_deviation,
                r.evaluations);
    if (r.out_of_range) std::fprintf(stderr, "warning: target outside the quality range\n");
    else if (!r.within_tolerance) std::fprintf(stderr, "warning: deviation above tolerance\n");
  });
  std::string report_path;
  auto* match_all = catalog->add_subcommand("match-all", "Match every stimulus of a manifest");
  match_all->add_option("--manifest", manifest_path)->required();
  match_all->add_option("--tolerance", tolerance);
  match_all->add_option("--work-dir", work_dir);
  match_all->add_option("--out", out, "Updated manifest")->required();
  match_all->add_option("--report", report_path);
  match_all->callback([&] {
    if (!load_manifest()) return;
    char* report = nullptr;
    aic_status s = aic_catalog_match_all(manifest.m, tolerance, work_dir.c_str(), &report);
    if (s == AIC_OK) s = aic_manifest_write(manifest.m, out.c_str());
    if (s != AIC_OK) {
      aic_string_free(report);
      status = Fail(s);
      return;
    }
    if (report_path.empty()) {
      std::fputs(report, stdout);
    } else if (FILE* f = std::fopen(report_path.c_str(), "w")) {
      std::fputs(report, f);
      std::fclose(f);
    }
    aic_string_free(report);
  });

  // design gen
  auto* design = app.add_subcommand("design", "Triplet design");
  design->require_subcommand(1);
  aic_design_options dopt;
  aic_design_options_default(&dopt);
  std::string method = "btc";
  bool unbalanced = false, merge = false;
  auto* gen = design->add_subcommand("gen", "Generate triplets and batches");
  gen->add_option("--manifest", manifest_path)->required();
  gen->add_option("--method", method)->check(CLI::IsMember({"btc", "ptc"}));
  gen->add_option("--cross-count", dopt.cross_count);
  gen->add_option("--batch-size", dopt.batch_size);
  gen->add_option("--seed", dopt.seed);
  gen->add_flag("--unbalanced", unbalanced, "Allow uneven codec-pair allocation");
  gen->add_flag("--merge", merge, "Add to an existing design file of the other method");
  gen->add_option("--out", out)->required();
  gen->callback([&] {
    if (!load_manifest()) return;
    dopt.method = method.c_str();
    dopt.balanced = !unbalanced;
    const aic_status s = aic_design_generate(manifest.m, &dopt, out.c_str(), merge);
    if (s != AIC_OK) status = Fail(s);
  });

  // serve / export
  std::string data_dir, batches_path, host = "127.0.0.1", admin_token, assets;
  int port = 8080;
  aic_store_options sopt;
  aic_store_options_default(&sopt);
  auto* serve = app.add_subcommand("serve", "Run the study service");
  serve->add_option("--manifest", manifest_path)->required();
  serve->add_option("--batches", batches_path, "Design file (omit to resume)");
  serve->add_option("--data-dir", data_dir)->required();
  serve->add_option("--host", host);
  serve->add_option("--port", port);
  serve->add_option("--admin-token", admin_token);
  serve->add_option("--assets", assets);
  serve->add_option("--target-instances", sopt.target_instances);
  serve->add_option("--max-batches", sopt.max_batches_per_participant);
  serve->callback([&] {
    if (!load_manifest()) return;
    StoreHandle store;
    aic_status s = aic_store_open(data_dir.c_str(),
                                  batches_path.empty() ? nullptr : batches_path.c_str(),
                                  &sopt, &store.s);
    if (s != AIC_OK) {
      status = Fail(s);
      return;
    }
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);
    aic_server_options o{host.c_str(), port, admin_token.c_str(),
                         assets.empty() ? nullptr : assets.c_str()};
    aic_server* server = nullptr;
    s = aic_server_start(store.s, manifest.m, &o, &server);
    if (s != AIC_OK) {
      status = Fail(s);
      return;
    }
    std::fprintf(stderr, "listening on %s:%d\n", host.c_str(), aic_server_port(server));
    int sig = 0;
    sigwait(&signals, &sig);
    aic_server_free(server);
  });
  auto* export_cmd = app.add_subcommand("export", "Export responses from a data directory");
  export_cmd->add_option("--data-dir", data_dir)->required();
  export_cmd->add_option("--out", out)->required();
  export_cmd->add_option("--manifest", manifest_path, "Judge correctness by bitrate");
  std::string export_method;
  export_cmd->add_option("--method", export_method)->check(CLI::IsMember({"btc", "ptc"}));
  export_cmd->callback([&] {
    if (!manifest_path.empty() && !load_manifest()) return;
    StoreHandle store;
    aic_status s = aic_store_open(data_dir.c_str(), nullptr, &sopt, &store.s);
    if (s == AIC_OK) {
      s = aic_store_export(store.s, manifest.m,
                           export_method.empty() ? nullptr : export_method.c_str(),
                           out.c_str());
    }
    if (s != AIC_OK) status = Fail(s);
  });

  // clean
  std::string responses;
  double threshold = 0.7;
  auto* clean = app.add_subcommand("clean", "Score and filter batch instances");
  clean->add_option("--responses", responses)->required();
  clean->add_option("--manifest", manifest_path)->required();
  clean->add_option("--threshold", threshold);
  clean->add_option("--out", out)->required();
  clean->add_option("--report", report_path);
  clean->callback([&] {
    if (!load_manifest()) return;
    aic_clean_summary sum{};
    const aic_status s =
        aic_clean(manifest.m, responses.c_str(), threshold, out.c_str(),
                  report_path.empty() ? nullptr : report_path.c_str(), &sum);
    if (s != AIC_OK) {
      status = Fail(s);
      return;
    }
    std::printf("retained\tbtc=%d\tptc=%d\nexcluded\tbtc=%d\tptc=%d\n", sum.retained_btc,
                sum.retained_ptc, sum.excluded_btc, sum.excluded_ptc);
  });

  // fit
  aic_fit_options fopt;
  aic_fit_options_default(&fopt);
  auto* fit = app.add_subcommand("fit", "Fit per-source rate-distortion curves");
  fit->add_option("--responses", responses)->required();
  fit->add_option("--manifest", manifest_path)->required();
  fit->add_option("--out", out)->required();
  fit->add_option("--k", fopt.k, "Probit slope");
  fit->add_option("--restarts", fopt.restarts);
  fit->add_option("--seed", fopt.seed);
  fit->callback([&] {
    if (!load_manifest()) return;
    const aic_status s = aic_fit(manifest.m, responses.c_str(), &fopt, out.c_str());
    if (s != AIC_OK) status = Fail(s);
  });

  // bootstrap
  aic_bootstrap_options bopt;
  aic_bootstrap_options_default(&bopt);
  std::string model_path;
  bool stratified = false;
  auto* boot = app.add_subcommand("bootstrap", "Bootstrap confidence bands");
  boot->add_option("--responses", responses)->required();
  boot->add_option("--manifest", manifest_path)->required();
  boot->add_option("--model", model_path)->required();
  boot->add_option("--n", bopt.replicates);
  boot->add_option("--grid", bopt.grid_size);
  boot->add_option("--seed", bopt.seed);
  boot->add_option("--threads", bopt.threads);
  boot->add_flag("--stratified", stratified, "Resample BTC and PTC separately");
  boot->add_option("--out", out)->required();
  boot->callback([&] {
    if (!load_manifest()) return;
    bopt.stratified = stratified;
    double width = 0;
    const aic_status s = aic_bootstrap(manifest.m, responses.c_str(), model_path.c_str(),
                                       &bopt, out.c_str(), &width);
    if (s != AIC_OK) {
      status = Fail(s);
      return;
    }
    std::printf("mean_width_at_1jnd\t%.4f\n", width);
  });

  // plot-data
  std::string bands_path;
  int grid = 100;
  auto* plot = app.add_subcommand("plot-data", "Per-source curve and stimulus series");
  plot->add_option("--manifest", manifest_path)->required();
  plot->add_option("--model", model_path)->required();
  plot->add_option("--bands", bands_path);
  plot->add_option("--grid", grid);
  plot->add_option("--out", out)->required();
  plot->callback([&] {
    if (!load_manifest()) return;
    const aic_status s =
        aic_plot_data(manifest.m, model_path.c_str(),
                      bands_path.empty() ? nullptr : bands_path.c_str(), grid, out.c_str());
    if (s != AIC_OK) status = Fail(s);
  });

  // bench
  std::string models, scores;
  bool significance = false;
  std::string scope = "overall";
  auto* bench = app.add_subcommand("bench", "Correlate metric scores with the JND scale");
  bench->add_option("--manifest", manifest_path)->required();
  bench->add_option("--models", models, "Model file (.json) or bands file")->required();
  bench->add_option("--scores", scores)->required();
  bench->add_option("--out", out)->required();
  bench->add_flag("--significance", significance, "Pairwise tests between metrics");
  bench->add_option("--significance-scope", scope, "Correlations the tests compare")
      ->check(CLI::IsMember({"overall", "per-codec", "per-source"}));
  bench->callback([&] {
    if (!load_manifest()) return;
    const aic_significance sig = !significance          ? AIC_SIGNIFICANCE_NONE
                                 : scope == "per-codec"  ? AIC_SIGNIFICANCE_PER_CODEC
                                 : scope == "per-source" ? AIC_SIGNIFICANCE_PER_SOURCE
                                                         : AIC_SIGNIFICANCE_OVERALL;
    const aic_status s = aic_bench(manifest.m, models.c_str(), scores.c_str(), sig, out.c_str());
    if (s != AIC_OK) status = Fail(s);
  });

  // simulate
  aic_simulate_options mopt;
  aic_simulate_options_default(&mopt);
  std::string design_path, truth_path;
  auto* sim = app.add_subcommand("simulate", "Synthetic responses from known curves");
  sim->add_option("--manifest", manifest_path)->required();
  sim->add_option("--design", design_path)->required();
  sim->add_option("--truth", truth_path, "Model file with generating parameters")->required();
  sim->add_option("--responses-per-triplet", mopt.responses_per_triplet);
  sim->add_option("--not-sure", mopt.not_sure_propensity);
  sim->add_option("--guessers", mopt.guesser_fraction);
  sim->add_option("--seed", mopt.seed);
  sim->add_option("--out", out)->required();
  sim->callback([&] {
    if (!load_manifest()) return;
    const aic_status s = aic_simulate(manifest.m, design_path.c_str(), truth_path.c_str(),
                                      &mopt, out.c_str());
    if (s != AIC_OK) status = Fail(s);
  });

  // run
  std::string config, stages;
  auto* run = app.add_subcommand("run", "Run pipeline stages from a config file");
  run->add_option("--config", config)->required();
  run->add_option("--stages", stages, "Comma-separated subset");
  run->callback([&] {
    char* report = nullptr;
    const aic_status s = aic_run(config.c_str(), stages.c_str(), &report);
    if (s != AIC_OK) {
      status = Fail(s);
      return;
    }
    std::puts(report);
    aic_string_free(report);
  });

  CLI11_PARSE(app, argc, argv);
  return status;
}
