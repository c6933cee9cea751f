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
#include "aic/aic.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "bench/benchmark.h"
#include "catalog/bitrate_match.h"
#include "catalog/manifest.h"
#include "cleansing/cleansing.h"
#include "common/file_io.h"
#include "common/random.h"
#include "design/batches.h"
#include "json.hpp"
#include "pipeline/run.h"
#include "scale/bootstrap.h"
#include "scale/fit.h"
#include "scale/model_io.h"
#include "scale/simulate.h"
#include "store/response.h"
#include "store/service.h"
#include "store/store.h"

struct aic_manifest {
  aic::catalog::StudyManifest manifest;
};

struct aic_store {
  std::unique_ptr<aic::store::ResponseStore> store;
};

struct aic_server {
  std::unique_ptr<aic::store::StudyService> service;
  std::thread thread;
  absl::Status result;
};

namespace {

thread_local std::string last_error;

aic_status ToCode(absl::StatusCode code) {
  switch (code) {
    case absl::StatusCode::kOk:
      return AIC_OK;
    case absl::StatusCode::kInvalidArgument:
      return AIC_INVALID_ARGUMENT;
    case absl::StatusCode::kNotFound:
      return AIC_NOT_FOUND;
    case absl::StatusCode::kFailedPrecondition:
      return AIC_FAILED_PRECONDITION;
    case absl::StatusCode::kOutOfRange:
      return AIC_OUT_OF_RANGE;
    case absl::StatusCode::kResourceExhausted:
      return AIC_RESOURCE_EXHAUSTED;
    case absl::StatusCode::kUnauthenticated:
      return AIC_UNAUTHENTICATED;
    case absl::StatusCode::kAlreadyExists:
      return AIC_ALREADY_EXISTS;
    case absl::StatusCode::kUnavailable:
      return AIC_UNAVAILABLE;
    default:
      return AIC_INTERNAL;
  }
}

aic_status Report(const absl::Status& status) {
  last_error = status.ok() ? "" : std::string(status.message());
  return ToCode(status.code());
}

aic_status Invalid(const char* what) {
  return Report(absl::InvalidArgumentError(what));
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

std::string Str(const char* s) { return s ? s : ""; }

// Runs body, converting exceptions into AIC_INTERNAL.
template <typename F>
aic_status Guard(F&& body) {
  try {
    return Report(body());
  } catch (const std::exception& e) {
    return Report(absl::InternalError(e.what()));
  }
}

absl::Status MatchWith(const aic::catalog::StudyManifest& m, const char* source_id,
                       const char* codec_id, double target, double tolerance,
                       const aic::catalog::BitrateProbe* probe, const char* work_dir,
                       aic_match_result* out) {
  const auto* source = m.FindSource(Str(source_id));
  const auto* codec = m.FindCodec(Str(codec_id));
  if (!source) return absl::NotFoundError(absl::StrCat("unknown source '", Str(source_id), "'"));
  if (!codec) return absl::NotFoundError(absl::StrCat("unknown codec '", Str(codec_id), "'"));
  aic::catalog::BitrateProbe command;
  if (!probe) {
    command = aic::catalog::MakeCommandProbe(*codec, *source, m.base_dir,
                                             work_dir ? work_dir : ".");
    probe = &command;
  }
  auto r = aic::catalog::MatchBitrate(*codec, *source, target, tolerance, *probe);
  if (!r.ok()) return r.status();
  out->quality = r->quality;
  out->actual_bpp = r->actual_bpp;
  out->adjusted_target_bpp = r->adjusted_target_bpp;
  out->relative_deviation = r->relative_deviation;
  out->evaluations = r->evaluations;
  out->out_of_range = r->out_of_range;
  out->within_tolerance = r->within_tolerance;
  return absl::OkStatus();
}

aic::scale::FitConfig FitConfigOf(const aic_fit_options& o) {
  aic::scale::FitConfig c;
  c.k = o.k;
  c.restarts = o.restarts;
  c.seed = o.seed;
  c.minimize.max_iterations = o.max_iterations;
  return c;
}

}  // namespace

extern "C" {

const char* aic_version(void) { return aic::pipeline::kVersion; }

const char* aic_status_name(aic_status status) {
  switch (status) {
    case AIC_OK:
      return "ok";
    case AIC_INVALID_ARGUMENT:
      return "invalid argument";
    case AIC_NOT_FOUND:
      return "not found";
    case AIC_FAILED_PRECONDITION:
      return "failed precondition";
    case AIC_OUT_OF_RANGE:
      return "out of range";
    case AIC_RESOURCE_EXHAUSTED:
      return "resource exhausted";
    case AIC_UNAUTHENTICATED:
      return "unauthenticated";
    case AIC_ALREADY_EXISTS:
      return "already exists";
    case AIC_UNAVAILABLE:
      return "unavailable";
    case AIC_INTERNAL:
      break;
  }
  return "internal";
}

const char* aic_last_error(void) { return last_error.c_str(); }

void aic_string_free(char* s) { std::free(s); }

aic_status aic_manifest_load(const char* path, aic_manifest** out) {
  if (!path || !out) return Invalid("null argument");
  return Guard([&]() -> absl::Status {
    auto m = aic::catalog::LoadManifest(path);
    if (!m.ok()) return m.status();
    *out = new aic_manifest{*std::move(m)};
    return absl::OkStatus();
  });
}

void aic_manifest_free(aic_manifest* manifest) { delete manifest; }

aic_status aic_manifest_write(const aic_manifest* manifest, const char* path) {
  if (!manifest || !path) return Invalid("null argument");
  return Guard([&] { return aic::catalog::WriteManifest(manifest->manifest, path); });
}

size_t aic_manifest_stimulus_count(const aic_manifest* manifest) {
  return manifest ? manifest->manifest.stimuli.size() : 0;
}

aic_status aic_catalog_match(const aic_manifest* manifest, const char* source_id,
                             const char* codec_id, double target_bpp, double tolerance,
                             const char* work_dir, aic_match_result* out) {
  if (!manifest || !out) return Invalid("null argument");
  return Guard([&] {
    return MatchWith(manifest->manifest, source_id, codec_id, target_bpp, tolerance,
                     nullptr, work_dir, out);
  });
}

aic_status aic_catalog_match_probe(const aic_manifest* manifest, const char* source_id,
                                   const char* codec_id, double target_bpp,
                                   double tolerance, aic_bpp_probe probe, void* user,
                                   aic_match_result* out) {
  if (!manifest || !out || !probe) return Invalid("null argument");
  aic::catalog::BitrateProbe wrapped = [probe, user](int q) -> absl::StatusOr<double> {
    double bpp = 0;
    if (probe(user, q, &bpp) != 0) {
      return absl::InternalError(absl::StrCat("encoder failed at quality ", q));
    }
    return bpp;
  };
  return Guard([&] {
    return MatchWith(manifest->manifest, source_id, codec_id, target_bpp, tolerance,
                     &wrapped, nullptr, out);
  });
}

aic_status aic_catalog_match_all(aic_manifest* manifest, double tolerance,
                                 const char* work_dir, char** report) {
  if (!manifest) return Invalid("null argument");
  return Guard([&]() -> absl::Status {
    auto& m = manifest->manifest;
    std::string table =
        "source_id\tcodec_id\tlevel\ttarget_bpp\tadjusted_target_bpp\tquality\t"
        "actual_bpp\trelative_deviation\tevaluations\tflag\n";
    for (auto& s : m.stimuli) {
      aic_match_result r{};
      auto st = MatchWith(m, s.source_id.c_str(), s.codec_id.c_str(), s.target_bpp,
                          tolerance, nullptr, work_dir, &r);
      if (!st.ok()) {
        return absl::Status(st.code(), absl::StrCat(s.source_id, "/", s.codec_id, "/",
                                                    s.level, ": ", st.message()));
      }
      s.quality = r.quality;
      s.actual_bpp = r.actual_bpp;
      absl::StrAppendFormat(&table, "%s\t%s\t%d\t%.6g\t%.6g\t%d\t%.6g\t%.6g\t%d\t%s\n",
                            s.source_id, s.codec_id, s.level, s.target_bpp,
                            r.adjusted_target_bpp, r.quality, r.actual_bpp,
                            r.relative_deviation, r.evaluations,
                            r.out_of_range       ? "out_of_range"
                            : r.within_tolerance ? "ok"
                                                 : "outside_tolerance");
    }
    if (report) *report = Dup(table);
    return absl::OkStatus();
  });
}

void aic_design_options_default(aic_design_options* options) {
  options->method = "btc";
  options->cross_count = 24;
  options->batch_size = 120;
  options->balanced = 1;
  options->seed = 1;
}

aic_status aic_design_generate(const aic_manifest* manifest,
                               const aic_design_options* options, const char* out_path,
                               int merge) {
  if (!manifest || !options || !out_path) return Invalid("null argument");
  return Guard([&]() -> absl::Status {
    auto method = aic::design::ParseMethod(Str(options->method));
    if (!method.ok()) return method.status();
    aic::design::DesignOptions o;
    o.cross_count = options->cross_count;
    o.batch_size = options->batch_size;
    o.balanced = options->balanced != 0;
    o.seed = options->seed;
    auto d = aic::design::GenerateDesign(manifest->manifest, *method, o);
    if (!d.ok()) return d.status();
    aic::design::Design out;
    if (merge && std::filesystem::exists(out_path)) {
      auto existing = aic::design::LoadDesign(out_path);
      if (!existing.ok()) return existing.status();
      if (!existing->BatchesFor(*method).empty()) {
        return absl::AlreadyExistsError(
            absl::StrCat(out_path, " already holds a ",
                         aic::design::MethodName(*method), " design"));
      }
      out = *std::move(existing);
    }
    out.Merge(*d);
    return aic::design::WriteDesign(out, out_path);
  });
}

void aic_store_options_default(aic_store_options* options) {
  aic::store::StoreOptions d;
  options->max_batches_per_participant = d.max_batches_per_participant;
  options->target_instances = d.target_instances;
  options->fsync = d.fsync;
}

aic_status aic_store_open(const char* data_dir, const char* design_path,
                          const aic_store_options* options, aic_store** out) {
  if (!data_dir || !out) return Invalid("null argument");
  return Guard([&]() -> absl::Status {
    aic::store::StoreOptions o;
    if (options) {
      o.max_batches_per_participant = options->max_batches_per_participant;
      o.target_instances = options->target_instances;
      o.fsync = options->fsync != 0;
    }
    std::optional<aic::design::Design> design;
    if (design_path) {
      auto d = aic::design::LoadDesign(design_path);
      if (!d.ok()) return d.status();
      design = *std::move(d);
    }
    auto s = aic::store::ResponseStore::Open(data_dir, design ? &*design : nullptr, o);
    if (!s.ok()) return s.status();
    *out = new aic_store{*std::move(s)};
    return absl::OkStatus();
  });
}

void aic_store_free(aic_store* store) { delete store; }

aic_status aic_store_enroll(aic_store* store, const char* method, char** json) {
  if (!store || !json) return Invalid("null argument");
  return Guard([&]() -> absl::Status {
    auto m = aic::design::ParseMethod(Str(method));
    if (!m.ok()) return m.status();
    auto p = store->store->Enroll(*m);
    if (!p.ok()) return p.status();
    nlohmann::json doc = {{"participant_id", p->id},
                          {"token", p->token},
                          {"method", aic::design::MethodName(p->method)}};
    *json = Dup(doc.dump());
    return absl::OkStatus();
  });
}

aic_status aic_store_assign(aic_store* store, const char* participant_id, char** json) {
  if (!store || !participant_id || !json) return Invalid("null argument");
  return Guard([&]() -> absl::Status {
    auto p = store->store->FindParticipant(participant_id);
    if (!p.ok()) return p.status();
    auto b = store->store->AssignBatch(p->id, p->method);
    if (!b.ok()) return b.status();
    nlohmann::json doc = {{"batch_id", b->id},
                          {"method", aic::design::MethodName(b->method)},
                          {"questions", b->questions}};
    *json = Dup(doc.dump());
    return absl::OkStatus();
  });
}

aic_status aic_store_record(aic_store* store, const char* response_json, int* duplicate,
                            int* batch_completed) {
  if (!store || !response_json) return Invalid("null argument");
  return Guard([&]() -> absl::Status {
    const auto doc = nlohmann::json::parse(response_json, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
      return absl::InvalidArgumentError("response is not a JSON object");
    }
    aic::store::Response r;
    r.participant_id = doc.value("participant_id", "");
    r.batch_id = doc.value("batch_id", "");
    r.triplet_id = doc.value("triplet_id", "");
    auto choice = aic::store::ParseChoice(doc.value("choice", ""));
    if (!choice.ok()) return choice.status();
    r.choice = *choice;
    r.response_time_ms = doc.value("response_time_ms", int64_t{0});
    r.toggle_count = doc.value("toggle_count", -1);
    r.submitted_at_ms = doc.value("submitted_at_ms", int64_t{0});
    auto ack = store->store->RecordResponse(r);
    if (!ack.ok()) return ack.status();
    if (duplicate) *duplicate = ack->duplicate;
    if (batch_completed) *batch_completed = ack->batch_completed;
    return absl::OkStatus();
  });
}

size_t aic_store_response_count(const aic_store* store) {
  return store ? store->store->ResponseCount() : 0;
}

aic_status aic_store_export(const aic_store* store, const aic_manifest* manifest,
                            const char* method, const char* out_path) {
  if (!store || !out_path) return Invalid("null argument");
  return Guard([&]() -> absl::Status {
    std::optional<aic::design::Method> m;
    if (method && *method) {
      auto parsed = aic::design::ParseMethod(method);
      if (!parsed.ok()) return parsed.status();
      m = *parsed;
    }
    auto rows = store->store->Rows(m);
    aic::store::SortForExport(rows);
    return aic::store::WriteResponses(rows, out_path,
                                      manifest ? &manifest->manifest : nullptr, true);
  });
}

aic_status aic_server_start(aic_store* store, const aic_manifest* manifest,
                            const aic_server_options* options, aic_server** out) {
  if (!store || !manifest || !options || !out) return Invalid("null argument");
  return Guard([&]() -> absl::Status {
    aic::store::ServiceOptions o;
    o.admin_token = Str(options->admin_token);
    if (options->asset_root) o.asset_root = options->asset_root;
    auto server = std::make_unique<aic_server>();
    server->service = std::make_unique<aic::store::StudyService>(
        store->store.get(), &manifest->manifest, o);
    auto port = server->service->Bind(options->host ? options->host : "127.0.0.1",
                                      options->port);
    if (!port.ok()) return port.status();
    aic_server* raw = server.get();
    raw->thread = std::thread([raw] { raw->result = raw->service->Serve(); });
    raw->service->WaitUntilReady();
    *out = server.release();
    return absl::OkStatus();
  });
}

int aic_server_port(const aic_server* server) { return server ? server->service->port() : -1; }

aic_status aic_server_wait(aic_server* server) {
  if (!server) return Invalid("null argument");
  if (server->thread.joinable()) server->thread.join();
  return Report(server->result);
}

void aic_server_stop(aic_server* server) {
  if (server) server->service->Stop();
}

void aic_server_free(aic_server* server) {
  if (!server) return;
  server->service->Stop();
  if (server->thread.joinable()) server->thread.join();
  delete server;
}

aic_status aic_clean(const aic_manifest* manifest, const char* responses_path,
                     double threshold, const char* out_path, const char* report_path,
                     aic_clean_summary* summary) {
  if (!manifest || !responses_path || !out_path) return Invalid("null argument");
  return Guard([&]() -> absl::Status {
    auto rows = aic::store::LoadResponses(responses_path);
    if (!rows.ok()) return rows.status();
    auto instances = aic::cleansing::GroupInstances(*rows);
    aic::cleansing::ScoreInstances(instances, &manifest->manifest);
    auto result = aic::cleansing::FilterInstances(std::move(instances), threshold);
    auto s = aic::store::WriteResponses(aic::cleansing::Flatten(result.retained), out_path,
                                        &manifest->manifest, false);
    if (!s.ok()) return s;
    if (report_path) {
      s = aic::WriteFileAtomic(report_path, aic::cleansing::AuditReport(result, threshold));
      if (!s.ok()) return s;
    }
    if (summary) {
      *summary = {};
      for (const auto& i : result.retained) {
        (i.method == aic::design::Method::kBtc ? summary->retained_btc
                                               : summary->retained_ptc)++;
      }
      for (const auto& i : result.excluded) {
        (i.method == aic::design::Method::kBtc ? summary->excluded_btc
                                               : summary->excluded_ptc)++;
      }
    }
    return absl::OkStatus();
  });
}

void aic_fit_options_default(aic_fit_options* options) {
  aic::scale::FitConfig d;
  options->k = d.k;
  options->restarts = d.restarts;
  options->seed = d.seed;
  options->max_iterations = d.minimize.max_iterations;
}

aic_status aic_fit(const aic_manifest* manifest, const char* responses_path,
                   const aic_fit_options* options, const char* model_path) {
  if (!manifest || !responses_path || !options || !model_path) {
    return Invalid("null argument");
  }
  return Guard([&]() -> absl::Status {
    auto rows = aic::store::LoadResponses(responses_path);
    if (!rows.ok()) return rows.status();
    const auto config = FitConfigOf(*options);
    aic::scale::ModelFile models;
    models.k = config.k;
    auto fitted = aic::scale::FitAll(*rows, manifest->manifest, config);
    if (!fitted.ok()) return fitted.status();
    models.sources = *std::move(fitted);
    return aic::scale::WriteModels(models, model_path);
  });
}

void aic_bootstrap_options_default(aic_bootstrap_options* options) {
  aic::scale::BootstrapConfig d;
  options->replicates = d.replicates;
  options->grid_size = d.grid_size;
  options->seed = d.seed;
  options->stratified = 0;
  options->threads = d.threads;
  aic_fit_options_default(&options->fit);
}

aic_status aic_bootstrap(const aic_manifest* manifest, const char* responses_path,
                         const char* model_path, const aic_bootstrap_options* options,
                         const char* bands_path, double* mean_width_at_1jnd) {
  if (!manifest || !responses_path || !model_path || !options || !bands_path) {
    return Invalid("null argument");
  }
  return Guard([&]() -> absl::Status {
    const auto& m = manifest->manifest;
    auto rows = aic::store::LoadResponses(responses_path);
    if (!rows.ok()) return rows.status();
    auto models = aic::scale::LoadModels(model_path);
    if (!models.ok()) return models.status();
    aic::scale::BootstrapConfig bc;
    bc.replicates = options->replicates;
    bc.grid_size = options->grid_size;
    bc.mode = options->stratified ? aic::scale::ResampleMode::kStratified
                                  : aic::scale::ResampleMode::kPooled;
    bc.threads = options->threads;
    bc.fit = FitConfigOf(options->fit);
    bc.fit.k = models->k;
    std::vector<aic::scale::RdCurveBand> bands;
    double sum = 0;
    int n = 0;
    for (const auto& model : models->sources) {
      auto problem =
          aic::scale::LikelihoodProblem::Build(model.source_id, *rows, m, models->k);
      if (!problem.ok()) return problem.status();
      bc.seed = aic::DeriveSeed(options->seed, model.source_id);
      auto result = aic::scale::BootstrapBands(*problem, m, bc, &model);
      if (!result.ok()) return result.status();
      for (auto& b : result->bands) {
        if (auto w = aic::scale::WidthAtDistortion(b, 1.0)) {
          sum += *w;
          ++n;
        }
        bands.push_back(std::move(b));
      }
    }
    if (mean_width_at_1jnd) *mean_width_at_1jnd = n ? sum / n : 0.0;
    return aic::scale::WriteBands(bands, bands_path);
  });
}

aic_status aic_plot_data(const aic_manifest* manifest, const char* model_path,
                         const char* bands_path, int grid_size, const char* out_path) {
  if (!manifest || !model_path || !out_path) return Invalid("null argument");
  return Guard([&]() -> absl::Status {
    auto models = aic::scale::LoadModels(model_path);
    if (!models.ok()) return models.status();
    std::vector<aic::scale::RdCurveBand> bands;
    if (bands_path) {
      auto b = aic::scale::LoadBands(bands_path);
      if (!b.ok()) return b.status();
      bands = *std::move(b);
    }
    return aic::WriteFileAtomic(
        out_path, aic::scale::PlotData(*models, bands, manifest->manifest, grid_size));
  });
}

aic_status aic_bench(const aic_manifest* manifest, const char* models_path,
                     const char* scores_dir, aic_significance significance,
                     const char* out_path) {
  if (!manifest || !models_path || !scores_dir || !out_path) return Invalid("null argument");
  return Guard([&]() -> absl::Status {
    const auto& m = manifest->manifest;
    absl::StatusOr<aic::bench::JndMap> jnd;
    if (std::filesystem::path(models_path).extension() == ".json") {
      auto models = aic::scale::LoadModels(models_path);
      if (!models.ok()) return models.status();
      jnd = aic::bench::JndFromModels(*models, m);
    } else {
      auto bands = aic::scale::LoadBands(models_path);
      if (!bands.ok()) return bands.status();
      jnd = aic::bench::JndFromBands(*bands, m);
    }
    if (!jnd.ok()) return jnd.status();
    auto tables = aic::bench::LoadScoreDirectory(scores_dir);
    if (!tables.ok()) return tables.status();
    std::vector<aic::bench::CorrelationReport> reports;
    for (const auto& t : *tables) {
      auto s = aic::bench::CheckCoverage(t, m);
      if (!s.ok()) return s;
      auto r = aic::bench::Correlate(t, *jnd);
      if (!r.ok()) return r.status();
      reports.push_back(*std::move(r));
    }
    const auto scope = significance == AIC_SIGNIFICANCE_PER_CODEC
                           ? aic::bench::SignificanceScope::kPerCodec
                       : significance == AIC_SIGNIFICANCE_PER_SOURCE
                           ? aic::bench::SignificanceScope::kPerSource
                           : aic::bench::SignificanceScope::kOverall;
    std::vector<aic::bench::SignificanceEntry> sig;
    if (significance != AIC_SIGNIFICANCE_NONE) {
      sig = aic::bench::PairwiseSignificance(*tables, *jnd, scope);
    }
    return aic::WriteFileAtomic(
        out_path, aic::bench::RenderReport(
                      reports, significance != AIC_SIGNIFICANCE_NONE ? &sig : nullptr, scope));
  });
}

void aic_simulate_options_default(aic_simulate_options* options) {
  aic::scale::SimulationConfig d;
  options->responses_per_triplet = d.responses_per_triplet;
  options->not_sure_propensity = d.observer.not_sure_propensity;
  options->guesser_fraction = d.observer.guesser_fraction;
  options->seed = d.seed;
}

aic_status aic_simulate(const aic_manifest* manifest, const char* design_path,
                        const char* truth_path, const aic_simulate_options* options,
                        const char* out_path) {
  if (!manifest || !design_path || !truth_path || !options || !out_path) {
    return Invalid("null argument");
  }
  return Guard([&]() -> absl::Status {
    auto design = aic::design::LoadDesign(design_path);
    if (!design.ok()) return design.status();
    auto truth = aic::scale::LoadModels(truth_path);
    if (!truth.ok()) return truth.status();
    aic::scale::SimulationConfig c;
    c.responses_per_triplet = options->responses_per_triplet;
    c.seed = options->seed;
    c.observer.k = truth->k;
    c.observer.not_sure_propensity = options->not_sure_propensity;
    c.observer.guesser_fraction = options->guesser_fraction;
    auto rows = aic::scale::SimulateResponses(*design, manifest->manifest, truth->sources, c);
    if (!rows.ok()) return rows.status();
    aic::store::SortForExport(*rows);
    return aic::store::WriteResponses(*rows, out_path, &manifest->manifest, true);
  });
}

aic_status aic_run(const char* config_path, const char* stages, char** report_json) {
  if (!config_path) return Invalid("null argument");
  return Guard([&]() -> absl::Status {
    auto config = aic::pipeline::LoadRunConfig(config_path);
    if (!config.ok()) return config.status();
    std::vector<std::string> list;
    if (stages && *stages) {
      list = absl::StrSplit(stages, ',', absl::SkipWhitespace());
    }
    auto report = aic::pipeline::Run(*config, list);
    if (!report.ok()) return report.status();
    if (report_json) *report_json = Dup(report->ToJson().dump(2));
    return absl::OkStatus();
  });
}

}  // extern "C"
