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
#include "pipeline/run.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <functional>
#include <optional>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "bench/benchmark.h"
#include "catalog/manifest.h"
#include "cleansing/cleansing.h"
#include "common/file_io.h"
#include "common/random.h"
#include "common/status_macros.h"
#include "design/batches.h"
#include "scale/bootstrap.h"
#include "scale/fit.h"
#include "scale/model_io.h"
#include "scale/simulate.h"
#include "store/store.h"

namespace aic::pipeline {

using nlohmann::json;

const std::vector<std::string>& StageNames() {
  static const std::vector<std::string> kNames = {"design", "collect", "clean",
                                                  "fit",    "bootstrap", "bench"};
  return kNames;
}

std::filesystem::path RunConfig::Path(const std::filesystem::path& p) const {
  return p.is_absolute() ? p : base_dir / p;
}

std::filesystem::path RunConfig::Output(const std::string& stage, const std::string& key,
                                        const std::string& fallback) const {
  const std::string work = doc.value("work_dir", "out");
  std::string name = fallback;
  if (doc.contains(stage) && doc[stage].contains(key)) name = doc[stage][key];
  const std::filesystem::path p(name);
  return p.is_absolute() ? p : Path(work) / p;
}

uint64_t RunConfig::StageSeed(const std::string& stage) const {
  return DeriveSeed(root_seed, stage);
}

absl::StatusOr<RunConfig> LoadRunConfig(const std::filesystem::path& path) {
  AIC_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  RunConfig config;
  config.config_path = path;
  config.base_dir = path.parent_path();
  try {
    config.doc = json::parse(text);
    config.root_seed = config.doc.value("root_seed", uint64_t{1});
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("run config: ", e.what()));
  }
  if (!config.doc.contains("manifest")) {
    return absl::InvalidArgumentError("run config: missing 'manifest'");
  }
  return config;
}

const StageRecord* RunReport::Find(const std::string& name) const {
  for (const auto& s : stages) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

json RunReport::ToJson() const {
  json doc;
  doc["tool"] = "aic";
  doc["version"] = version;
  doc["root_seed"] = root_seed;
  doc["config_sha256"] = config_sha256;
  doc["stages"] = json::array();
  for (const auto& s : stages) {
    doc["stages"].push_back({{"name", s.name},
                             {"status", s.status},
                             {"seed", s.seed},
                             {"inputs", s.inputs},
                             {"outputs", s.outputs},
                             {"metrics", s.metrics},
                             {"diagnostics", s.diagnostics}});
  }
  return doc;
}

absl::StatusOr<RunReport> RunReport::FromJson(const json& doc) {
  RunReport r;
  try {
    r.version = doc.value("version", "");
    r.root_seed = doc.value("root_seed", uint64_t{0});
    r.config_sha256 = doc.value("config_sha256", "");
    for (const auto& js : doc.at("stages")) {
      StageRecord s;
      s.name = js.at("name");
      s.status = js.at("status");
      s.seed = js.value("seed", uint64_t{0});
      s.inputs = js.value("inputs", std::map<std::string, std::string>{});
      s.outputs = js.value("outputs", std::map<std::string, std::string>{});
      s.metrics = js.value("metrics", json::object());
      s.diagnostics = js.value("diagnostics", "");
      r.stages.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("run report: ", e.what()));
  }
  return r;
}

namespace {

// Shared state of one pipeline invocation.
class Runner {
 public:
  Runner(const RunConfig& config, RunReport previous)
      : config_(config), previous_(std::move(previous)) {}

  absl::Status Design(StageRecord& rec);
  absl::Status Collect(StageRecord& rec);
  absl::Status Clean(StageRecord& rec);
  absl::Status Fit(StageRecord& rec);
  absl::Status Bootstrap(StageRecord& rec);
  absl::Status Bench(StageRecord& rec);

  // Records the input's hash, checking it against the hash its producing
  // stage reported.
  absl::Status Input(StageRecord& rec, const std::filesystem::path& p);
  absl::Status Output(StageRecord& rec, const std::filesystem::path& p);
  // Report key of a path: relative to the config directory.
  std::string Key(const std::filesystem::path& p) const;

  void Remember(const StageRecord& rec) {
    for (const auto& [path, hash] : rec.outputs) produced_[path] = {rec.name, hash};
  }

  absl::StatusOr<const catalog::StudyManifest*> Manifest(StageRecord& rec) {
    const auto path = config_.Path(config_.doc.at("manifest").get<std::string>());
    AIC_RETURN_IF_ERROR(Input(rec, path));
    if (!manifest_) {
      AIC_ASSIGN_OR_RETURN(auto m, catalog::LoadManifest(path));
      manifest_ = std::move(m);
    }
    return &*manifest_;
  }

  const json& Section(const std::string& name) const {
    static const json kEmpty = json::object();
    return config_.doc.contains(name) ? config_.doc.at(name) : kEmpty;
  }

  const RunConfig& config_;
  RunReport previous_;
  std::map<std::string, std::pair<std::string, std::string>> produced_;
  std::optional<catalog::StudyManifest> manifest_;
};

std::string Runner::Key(const std::filesystem::path& p) const {
  std::error_code ec;
  const auto base = config_.base_dir.empty() ? std::filesystem::path(".") : config_.base_dir;
  auto rel = std::filesystem::relative(p, base, ec);
  return (ec || rel.empty() ? p : rel).lexically_normal().generic_string();
}

absl::Status Runner::Input(StageRecord& rec, const std::filesystem::path& p) {
  AIC_ASSIGN_OR_RETURN(std::string hash, Sha256File(p));
  const std::string key = Key(p);
  rec.inputs[key] = hash;
  auto it = produced_.find(key);
  if (it != produced_.end() && it->second.second != hash) {
    return absl::FailedPreconditionError(
        absl::StrCat("input ", key, " changed since stage '", it->second.first,
                     "' produced it; re-run that stage"));
  }
  return absl::OkStatus();
}

absl::Status Runner::Output(StageRecord& rec, const std::filesystem::path& p) {
  AIC_ASSIGN_OR_RETURN(std::string hash, Sha256File(p));
  rec.outputs[Key(p)] = hash;
  return absl::OkStatus();
}

absl::Status Runner::Design(StageRecord& rec) {
  AIC_ASSIGN_OR_RETURN(const auto* manifest, Manifest(rec));
  const json& s = Section("design");
  design::DesignOptions opt;
  opt.cross_count = s.value("cross_count", 24);
  opt.batch_size = s.value("batch_size", 120);
  opt.balanced = s.value("balanced", true);
  opt.seed = rec.seed;
  design::Design all;
  for (const auto& name : s.value("methods", std::vector<std::string>{"btc", "ptc"})) {
    AIC_ASSIGN_OR_RETURN(auto method, design::ParseMethod(name));
    AIC_ASSIGN_OR_RETURN(auto d, design::GenerateDesign(*manifest, method, opt));
    all.Merge(d);
    rec.metrics[name + "_triplets"] = d.triplets.size();
    rec.metrics[name + "_batches"] = d.batches.size();
  }
  const auto out = config_.Output("design", "out", "design.json");
  AIC_RETURN_IF_ERROR(design::WriteDesign(all, out));
  return Output(rec, out);
}

absl::Status Runner::Collect(StageRecord& rec) {
  AIC_ASSIGN_OR_RETURN(const auto* manifest, Manifest(rec));
  const json& s = Section("collect");
  const std::string mode = s.value("mode", "simulate");
  const auto out = config_.Output("collect", "out", "responses.tsv");
  std::vector<store::ResponseRecord> rows;
  if (mode == "file") {
    const auto src = config_.Path(s.at("responses").get<std::string>());
    AIC_RETURN_IF_ERROR(Input(rec, src));
    AIC_ASSIGN_OR_RETURN(rows, store::LoadResponses(src));
  } else if (mode == "export") {
    const auto dir = config_.Path(s.at("data_dir").get<std::string>());
    store::StoreOptions so;
    AIC_ASSIGN_OR_RETURN(auto st, store::ResponseStore::Open(dir, nullptr, so));
    rows = st->Rows(std::nullopt);
  } else if (mode == "simulate") {
    const auto design_path = config_.Output("design", "out", "design.json");
    AIC_RETURN_IF_ERROR(Input(rec, design_path));
    AIC_ASSIGN_OR_RETURN(auto design, design::LoadDesign(design_path));
    const auto truth_path = config_.Path(s.at("truth").get<std::string>());
    AIC_RETURN_IF_ERROR(Input(rec, truth_path));
    AIC_ASSIGN_OR_RETURN(auto truth, scale::LoadModels(truth_path));

    // Synthetic observers go through the real store: enroll, take up to the
    // batch limit, answer every question.
    const auto dir = config_.Output("collect", "data_dir", "store");
    std::error_code ec;
    std::filesystem::remove_all(dir, ec);
    store::StoreOptions so;
    so.fsync = false;
    so.target_instances = s.value("responses_per_triplet",
                                  manifest->responses_per_triplet_target);
    AIC_ASSIGN_OR_RETURN(auto st, store::ResponseStore::Open(dir, &design, so));
    scale::ObserverModel observer;
    observer.k = truth.k;
    observer.not_sure_propensity = s.value("not_sure_propensity", 0.0);
    observer.guesser_fraction = s.value("guesser_fraction", 0.0);
    Rng rng(rec.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto method : {design::Method::kBtc, design::Method::kPtc}) {
      if (design.BatchesFor(method).empty()) continue;
      bool complete = false;
      while (!complete) {
        AIC_ASSIGN_OR_RETURN(auto participant, st->Enroll(method));
        const bool guesser = u(rng) < observer.guesser_fraction;
        int64_t clock_ms = 0;
        for (int b = 0; b < so.max_batches_per_participant; ++b) {
          auto batch = st->AssignBatch(participant.id, method);
          if (absl::IsOutOfRange(batch.status())) {
            complete = true;
            break;
          }
          if (!batch.ok()) return batch.status();
          for (const auto& id : batch->questions) {
            const auto* t = st->design().FindTriplet(id);
            AIC_ASSIGN_OR_RETURN(double p, scale::TrueLeftProbability(
                                               *t, truth.sources, *manifest, truth.k));
            store::Response r;
            r.participant_id = participant.id;
            r.batch_id = batch->id;
            r.triplet_id = id;
            r.choice = scale::SampleChoice(p, observer, guesser, rng);
            r.response_time_ms = static_cast<int64_t>(
                1500 + 6000 * (1.0 - 2.0 * std::abs(p - 0.5)) * u(rng));
            r.toggle_count = method == design::Method::kPtc ? 1 + static_cast<int>(3 * u(rng))
                                                            : -1;
            clock_ms += r.response_time_ms;
            r.submitted_at_ms = clock_ms;
            AIC_RETURN_IF_ERROR(st->RecordResponse(r).status());
          }
        }
      }
    }
    rows = st->Rows(std::nullopt);
  } else {
    return absl::InvalidArgumentError(absl::StrCat("unknown collect mode '", mode, "'"));
  }
  store::SortForExport(rows);
  const auto summary = store::Summarize(rows, manifest);
  rec.metrics["responses"] = rows.size();
  rec.metrics["left"] = summary.left;
  rec.metrics["not_sure"] = summary.not_sure;
  rec.metrics["right"] = summary.right;
  rec.metrics["skip"] = summary.skip;
  AIC_RETURN_IF_ERROR(store::WriteResponses(rows, out, manifest, true));
  return Output(rec, out);
}

absl::Status Runner::Clean(StageRecord& rec) {
  AIC_ASSIGN_OR_RETURN(const auto* manifest, Manifest(rec));
  const json& s = Section("clean");
  const double threshold = s.value("threshold", cleansing::kDefaultThreshold);
  const auto in = config_.Output("collect", "out", "responses.tsv");
  AIC_RETURN_IF_ERROR(Input(rec, in));
  AIC_ASSIGN_OR_RETURN(auto rows, store::LoadResponses(in));
  auto instances = cleansing::GroupInstances(rows);
  cleansing::ScoreInstances(instances, manifest);
  const auto result = cleansing::FilterInstances(std::move(instances), threshold);
  for (auto m : {design::Method::kBtc, design::Method::kPtc}) {
    int kept = 0;
    int total = 0;
    for (const auto& i : result.retained) kept += i.method == m, total += i.method == m;
    for (const auto& i : result.excluded) total += i.method == m;
    rec.metrics[absl::StrCat("retained_", design::MethodName(m))] = kept;
    rec.metrics[absl::StrCat("instances_", design::MethodName(m))] = total;
  }
  const auto out = config_.Output("clean", "out", "retained.tsv");
  const auto report = config_.Output("clean", "report", "audit.tsv");
  AIC_RETURN_IF_ERROR(
      store::WriteResponses(cleansing::Flatten(result.retained), out, manifest, false));
  AIC_RETURN_IF_ERROR(WriteFileAtomic(report, cleansing::AuditReport(result, threshold)));
  AIC_RETURN_IF_ERROR(Output(rec, out));
  return Output(rec, report);
}

scale::FitConfig FitConfigFrom(const json& s, uint64_t seed) {
  scale::FitConfig c;
  c.k = s.value("k", 1.0);
  c.restarts = s.value("restarts", 8);
  c.seed = seed;
  c.minimize.max_iterations = s.value("max_iterations", 500);
  return c;
}

absl::Status Runner::Fit(StageRecord& rec) {
  AIC_ASSIGN_OR_RETURN(const auto* manifest, Manifest(rec));
  const auto in = config_.Output("clean", "out", "retained.tsv");
  AIC_RETURN_IF_ERROR(Input(rec, in));
  AIC_ASSIGN_OR_RETURN(auto rows, store::LoadResponses(in));
  const auto cfg = FitConfigFrom(Section("fit"), rec.seed);
  scale::ModelFile models;
  models.k = cfg.k;
  AIC_ASSIGN_OR_RETURN(models.sources, scale::FitAll(rows, *manifest, cfg));
  int unconverged = 0;
  for (const auto& m : models.sources) unconverged += !m.diagnostics.converged;
  rec.metrics["sources"] = models.sources.size();
  rec.metrics["unconverged"] = unconverged;
  const auto out = config_.Output("fit", "out", "model.json");
  AIC_RETURN_IF_ERROR(scale::WriteModels(models, out));
  return Output(rec, out);
}

absl::Status Runner::Bootstrap(StageRecord& rec) {
  AIC_ASSIGN_OR_RETURN(const auto* manifest, Manifest(rec));
  const json& s = Section("bootstrap");
  const auto in = config_.Output("clean", "out", "retained.tsv");
  const auto model_path = config_.Output("fit", "out", "model.json");
  AIC_RETURN_IF_ERROR(Input(rec, in));
  AIC_RETURN_IF_ERROR(Input(rec, model_path));
  AIC_ASSIGN_OR_RETURN(auto rows, store::LoadResponses(in));
  AIC_ASSIGN_OR_RETURN(auto models, scale::LoadModels(model_path));
  scale::BootstrapConfig bc;
  bc.replicates = s.value("replicates", 1000);
  bc.grid_size = s.value("grid", 100);
  bc.mode = s.value("stratified", false) ? scale::ResampleMode::kStratified
                                         : scale::ResampleMode::kPooled;
  bc.fit = FitConfigFrom(Section("fit"), rec.seed);
  bc.threads = s.value("threads", 0);
  std::vector<scale::RdCurveBand> bands;
  double width_sum = 0;
  int width_n = 0;
  int failures = 0;
  for (const auto& model : models.sources) {
    AIC_ASSIGN_OR_RETURN(auto problem, scale::LikelihoodProblem::Build(
                                           model.source_id, rows, *manifest, models.k));
    bc.seed = DeriveSeed(rec.seed, model.source_id);
    AIC_ASSIGN_OR_RETURN(auto result, scale::BootstrapBands(problem, *manifest, bc, &model));
    failures += result.failures;
    for (auto& b : result.bands) {
      if (auto w = scale::WidthAtDistortion(b, 1.0)) {
        width_sum += *w;
        ++width_n;
      }
      bands.push_back(std::move(b));
    }
  }
  rec.metrics["failed_replicates"] = failures;
  rec.metrics["mean_width_at_1jnd"] = width_n ? width_sum / width_n : 0.0;
  const auto out = config_.Output("bootstrap", "out", "bands.tsv");
  AIC_RETURN_IF_ERROR(scale::WriteBands(bands, out));
  return Output(rec, out);
}

absl::Status Runner::Bench(StageRecord& rec) {
  AIC_ASSIGN_OR_RETURN(const auto* manifest, Manifest(rec));
  const json& s = Section("bench");
  const auto model_path = config_.Output("fit", "out", "model.json");
  AIC_RETURN_IF_ERROR(Input(rec, model_path));
  AIC_ASSIGN_OR_RETURN(auto models, scale::LoadModels(model_path));
  AIC_ASSIGN_OR_RETURN(auto jnd, bench::JndFromModels(models, *manifest));
  const auto dir = config_.Path(s.value("scores", "scores"));
  AIC_ASSIGN_OR_RETURN(auto tables, bench::LoadScoreDirectory(dir));
  std::vector<bench::CorrelationReport> reports;
  for (const auto& t : tables) {
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.path().stem() == t.metric) AIC_RETURN_IF_ERROR(Input(rec, entry.path()));
    }
    AIC_RETURN_IF_ERROR(bench::CheckCoverage(t, *manifest));
    AIC_ASSIGN_OR_RETURN(auto r, bench::Correlate(t, jnd));
    rec.metrics[t.metric] = {{"plcc", r.plcc}, {"srcc", r.srcc}};
    reports.push_back(std::move(r));
  }
  AIC_ASSIGN_OR_RETURN(auto scope,
                       bench::ParseScope(s.value("significance_scope", "overall")));
  std::vector<bench::SignificanceEntry> sig;
  const bool significance = s.value("significance", true);
  if (significance) sig = bench::PairwiseSignificance(tables, jnd, scope);
  const auto out = config_.Output("bench", "out", "bench.tsv");
  AIC_RETURN_IF_ERROR(WriteFileAtomic(
      out, bench::RenderReport(reports, significance ? &sig : nullptr, scope)));
  return Output(rec, out);
}

}  // namespace

absl::StatusOr<RunReport> Run(const RunConfig& config,
                              const std::vector<std::string>& stages) {
  for (const auto& s : stages) {
    if (std::find(StageNames().begin(), StageNames().end(), s) == StageNames().end()) {
      return absl::InvalidArgumentError(absl::StrCat("unknown stage '", s, "'"));
    }
  }
  const auto report_path = config.Output("report", "path", "run_report.json");
  RunReport previous;
  if (auto text = ReadFile(report_path); text.ok()) {
    try {
      auto parsed = RunReport::FromJson(json::parse(*text));
      if (parsed.ok()) previous = *std::move(parsed);
    } catch (const json::exception&) {
    }
  }
  std::error_code ec;
  std::filesystem::create_directories(config.Path(config.doc.value("work_dir", "out")), ec);

  Runner runner(config, previous);
  for (const auto& s : previous.stages) {
    if (s.status == "ok") runner.Remember(s);
  }
  RunReport report;
  report.root_seed = config.root_seed;
  AIC_ASSIGN_OR_RETURN(report.config_sha256, Sha256File(config.config_path));

  const std::map<std::string, std::function<absl::Status(Runner&, StageRecord&)>> kStages = {
      {"design", &Runner::Design}, {"collect", &Runner::Collect},
      {"clean", &Runner::Clean},   {"fit", &Runner::Fit},
      {"bootstrap", &Runner::Bootstrap}, {"bench", &Runner::Bench}};
  absl::Status failure;
  for (const auto& name : StageNames()) {
    const bool requested =
        stages.empty() || std::find(stages.begin(), stages.end(), name) != stages.end();
    if (!requested) {
      // Keep the earlier record of stages not re-run.
      if (const auto* old = previous.Find(name)) report.stages.push_back(*old);
      continue;
    }
    StageRecord rec;
    rec.name = name;
    rec.seed = config.StageSeed(name);
    absl::Status s = kStages.at(name)(runner, rec);
    rec.status = s.ok() ? "ok" : "failed";
    if (!s.ok()) rec.diagnostics = std::string(s.ToString());
    runner.Remember(rec);
    report.stages.push_back(std::move(rec));
    if (!s.ok()) {
      failure = s;
      break;
    }
  }
  AIC_RETURN_IF_ERROR(WriteFileAtomic(report_path, report.ToJson().dump(2) + "\n"));
  if (!failure.ok()) {
    return absl::Status(failure.code(),
                        absl::StrCat("stage '", report.stages.back().name,
                                     "' failed: ", failure.message()));
  }
  return report;
}

}  // namespace aic::pipeline
