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
#include "store/store.h"

#include <unistd.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "common/file_io.h"
#include "common/status_macros.h"
#include "json.hpp"

namespace aic::store {

using design::Batch;
using design::Method;
using nlohmann::json;

namespace {

std::string NewToken() {
  std::random_device rd;
  std::string token;
  for (int i = 0; i < 4; ++i) absl::StrAppend(&token, absl::Hex(rd(), absl::kZeroPad8));
  return token;
}

json ResponseToJson(const Response& r, int question_index) {
  return {{"ev", "response"},
          {"pid", r.participant_id},
          {"batch", r.batch_id},
          {"triplet", r.triplet_id},
          {"q", question_index},
          {"choice", ChoiceName(r.choice)},
          {"time_ms", r.response_time_ms},
          {"toggles", r.toggle_count},
          {"at_ms", r.submitted_at_ms}};
}

}  // namespace

ResponseStore::ResponseStore(std::filesystem::path data_dir, design::Design design,
                             StoreOptions options)
    : data_dir_(std::move(data_dir)), design_(std::move(design)), options_(options) {
  design_.Reindex();
  for (const auto& b : design_.batches) started_[b.id] = 0;
}

ResponseStore::~ResponseStore() {
  if (log_ != nullptr) std::fclose(log_);
}

absl::StatusOr<std::unique_ptr<ResponseStore>> ResponseStore::Open(
    const std::filesystem::path& data_dir, const design::Design* design,
    StoreOptions options) {
  std::error_code ec;
  std::filesystem::create_directories(data_dir, ec);
  if (ec) {
    return absl::UnavailableError(
        absl::StrCat("cannot create data dir ", data_dir.string(), ": ", ec.message()));
  }
  const auto design_path = data_dir / "design.json";
  design::Design loaded;
  if (design != nullptr) {
    AIC_RETURN_IF_ERROR(design::WriteDesign(*design, design_path));
    loaded = *design;
  } else {
    AIC_ASSIGN_OR_RETURN(loaded, design::LoadDesign(design_path));
  }
  std::unique_ptr<ResponseStore> store(
      new ResponseStore(data_dir, std::move(loaded), options));
  AIC_RETURN_IF_ERROR(store->Replay());
  std::lock_guard<std::mutex> lock(store->mu_);
  AIC_RETURN_IF_ERROR(store->OpenLogLocked());
  return store;
}

absl::Status ResponseStore::OpenLogLocked() {
  log_ = std::fopen(log_path().c_str(), "a");
  if (log_ == nullptr) {
    return absl::UnavailableError(absl::StrCat("cannot open ", log_path().string(),
                                               ": ", std::strerror(errno)));
  }
  return absl::OkStatus();
}

absl::Status ResponseStore::Replay() {
  std::ifstream in(log_path());
  if (!in) return absl::OkStatus();
  std::vector<std::string> lines;
  std::string line;
  bool torn_tail = false;
  while (std::getline(in, line)) lines.push_back(line);
  if (!lines.empty()) {
    // A crash can leave a partial final line; it was never acknowledged.
    in.clear();
    in.seekg(-1, std::ios::end);
    char last = 0;
    in.get(last);
    torn_tail = last != '\n';
  }
  std::lock_guard<std::mutex> lock(mu_);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    absl::Status s = ApplyLine(lines[i]);
    if (!s.ok()) {
      if (i + 1 == lines.size() && torn_tail) break;
      return absl::DataLossError(
          absl::StrCat("store log line ", i + 1, ": ", s.message()));
    }
  }
  if (torn_tail) {
    return WriteFileAtomic(log_path(), SnapshotLocked());
  }
  return absl::OkStatus();
}

absl::Status ResponseStore::ApplyLine(const std::string& line) {
  json ev;
  try {
    ev = json::parse(line);
    const std::string kind = ev.at("ev").get<std::string>();
    if (kind == "enroll") {
      Participant p;
      p.id = ev.at("pid").get<std::string>();
      p.token = ev.at("token").get<std::string>();
      AIC_ASSIGN_OR_RETURN(p.method, design::ParseMethod(ev.at("method").get<std::string>()));
      token_to_id_[p.token] = p.id;
      participants_[p.id] = p;
      next_participant_ = std::max<int>(next_participant_,
                                        ev.value("seq", next_participant_) + 1);
    } else if (kind == "assign") {
      const std::string pid = ev.at("pid").get<std::string>();
      const std::string batch = ev.at("batch").get<std::string>();
      auto it = participants_.find(pid);
      if (it == participants_.end()) return absl::NotFoundError("assign: unknown pid");
      it->second.active_batch = batch;
      ++started_[batch];
    } else if (kind == "response") {
      Response r;
      r.participant_id = ev.at("pid").get<std::string>();
      r.batch_id = ev.at("batch").get<std::string>();
      r.triplet_id = ev.at("triplet").get<std::string>();
      AIC_ASSIGN_OR_RETURN(r.choice, ParseChoice(ev.at("choice").get<std::string>()));
      r.response_time_ms = ev.at("time_ms").get<int64_t>();
      r.toggle_count = ev.at("toggles").get<int>();
      r.submitted_at_ms = ev.at("at_ms").get<int64_t>();
      const auto* triplet = design_.FindTriplet(r.triplet_id);
      if (triplet == nullptr) return absl::NotFoundError("response: unknown triplet");
      ResponseRecord row{r, ev.at("q").get<int>(), *triplet};
      keys_.insert({r.participant_id, r.triplet_id, r.batch_id});
      auto& done = answered_[r.participant_id][r.batch_id];
      done.insert(r.triplet_id);
      const auto* batch = design_.FindBatch(r.batch_id);
      auto& p = participants_[r.participant_id];
      if (batch != nullptr && done.size() == batch->questions.size() &&
          p.active_batch == r.batch_id) {
        p.completed_batches.push_back(r.batch_id);
        p.active_batch.reset();
      }
      rows_.push_back(std::move(row));
    } else {
      return absl::InvalidArgumentError(absl::StrCat("unknown event '", kind, "'"));
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(e.what());
  }
  return absl::OkStatus();
}

absl::Status ResponseStore::AppendLocked(const std::string& line) {
  if (log_ == nullptr) AIC_RETURN_IF_ERROR(OpenLogLocked());
  const std::string data = line + "\n";
  if (std::fwrite(data.data(), 1, data.size(), log_) != data.size() ||
      std::fflush(log_) != 0) {
    return absl::DataLossError(absl::StrCat("append to ", log_path().string(), " failed"));
  }
  if (options_.fsync) ::fsync(::fileno(log_));
  if (options_.compact_every > 0 && ++appends_since_compaction_ >= options_.compact_every) {
    std::fclose(log_);
    log_ = nullptr;
    AIC_RETURN_IF_ERROR(WriteFileAtomic(log_path(), SnapshotLocked()));
    appends_since_compaction_ = 0;
    AIC_RETURN_IF_ERROR(OpenLogLocked());
  }
  return absl::OkStatus();
}

std::string ResponseStore::SnapshotLocked() const {
  // Events are replayed in order, so emit participants and their assignments
  // in the sequence that reproduces the current state.
  std::string out;
  std::vector<const Participant*> order;
  for (const auto& [id, p] : participants_) order.push_back(&p);
  for (const auto* p : order) {
    json e = {{"ev", "enroll"},
              {"pid", p->id},
              {"token", p->token},
              {"method", design::MethodName(p->method)}};
    long seq = 0;
    if (p->id.size() > 1) seq = std::strtol(p->id.c_str() + 1, nullptr, 10);
    e["seq"] = seq;
    absl::StrAppend(&out, e.dump(), "\n");
  }
  // Completed batches first (in completion order), then the active one.
  std::map<std::string, std::vector<const ResponseRecord*>> by_pb;
  for (const auto& row : rows_) {
    by_pb[row.response.participant_id + "\n" + row.response.batch_id].push_back(&row);
  }
  for (const auto* p : order) {
    std::vector<std::string> batches = p->completed_batches;
    if (p->active_batch) batches.push_back(*p->active_batch);
    for (const auto& b : batches) {
      absl::StrAppend(&out, json({{"ev", "assign"}, {"pid", p->id}, {"batch", b}}).dump(),
                      "\n");
      for (const auto* row : by_pb[p->id + "\n" + b]) {
        absl::StrAppend(&out, ResponseToJson(row->response, row->question_index).dump(),
                        "\n");
      }
    }
  }
  return out;
}

absl::Status ResponseStore::Compact() {
  std::lock_guard<std::mutex> lock(mu_);
  if (log_ != nullptr) {
    std::fclose(log_);
    log_ = nullptr;
  }
  AIC_RETURN_IF_ERROR(WriteFileAtomic(log_path(), SnapshotLocked()));
  appends_since_compaction_ = 0;
  return OpenLogLocked();
}

absl::StatusOr<Participant> ResponseStore::Enroll(Method method) {
  std::lock_guard<std::mutex> lock(mu_);
  Participant p;
  const int seq = next_participant_;
  p.id = absl::StrFormat("p%05d", seq);
  p.token = NewToken();
  p.method = method;
  json e = {{"ev", "enroll"},
            {"pid", p.id},
            {"token", p.token},
            {"method", design::MethodName(method)},
            {"seq", seq}};
  AIC_RETURN_IF_ERROR(AppendLocked(e.dump()));
  ++next_participant_;
  token_to_id_[p.token] = p.id;
  participants_[p.id] = p;
  return p;
}

absl::StatusOr<Participant> ResponseStore::FindByToken(const std::string& token) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = token_to_id_.find(token);
  if (it == token_to_id_.end()) return absl::UnauthenticatedError("unknown token");
  return participants_.at(it->second);
}

absl::StatusOr<Participant> ResponseStore::FindParticipant(const std::string& id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = participants_.find(id);
  if (it == participants_.end()) {
    return absl::NotFoundError(absl::StrCat("unknown participant '", id, "'"));
  }
  return it->second;
}

absl::StatusOr<Batch> ResponseStore::AssignBatch(const std::string& participant_id,
                                                 Method method) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = participants_.find(participant_id);
  if (it == participants_.end()) {
    return absl::NotFoundError(absl::StrCat("unknown participant '", participant_id, "'"));
  }
  Participant& p = it->second;
  if (p.method != method) {
    return absl::FailedPreconditionError(absl::StrCat(
        "participant enrolled for ", design::MethodName(p.method), ", not ",
        design::MethodName(method)));
  }
  if (p.active_batch) return *design_.FindBatch(*p.active_batch);
  if (static_cast<int>(p.completed_batches.size()) >= options_.max_batches_per_participant) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "limit reached: participant '", p.id, "' completed ",
        p.completed_batches.size(), " batches"));
  }
  const Batch* best = nullptr;
  int best_count = 0;
  for (const auto& b : design_.batches) {
    if (b.method != method) continue;
    if (std::find(p.completed_batches.begin(), p.completed_batches.end(), b.id) !=
        p.completed_batches.end()) {
      continue;
    }
    const int count = started_[b.id];
    if (count >= options_.target_instances) continue;
    if (best == nullptr || count < best_count) {
      best = &b;
      best_count = count;
    }
  }
  if (best == nullptr) {
    return absl::OutOfRangeError("study complete: no batch below target coverage");
  }
  json e = {{"ev", "assign"}, {"pid", p.id}, {"batch", best->id}};
  AIC_RETURN_IF_ERROR(AppendLocked(e.dump()));
  ++started_[best->id];
  p.active_batch = best->id;
  return *best;
}

absl::StatusOr<Acknowledgment> ResponseStore::RecordResponse(const Response& r) {
  std::lock_guard<std::mutex> lock(mu_);
  auto pit = participants_.find(r.participant_id);
  if (pit == participants_.end()) {
    return absl::NotFoundError(absl::StrCat("unknown participant '", r.participant_id, "'"));
  }
  Participant& p = pit->second;
  if (keys_.count({r.participant_id, r.triplet_id, r.batch_id})) {
    return Acknowledgment{.duplicate = true};
  }
  if (p.active_batch != r.batch_id) {
    return absl::FailedPreconditionError(
        absl::StrCat("batch '", r.batch_id, "' is not the participant's active batch"));
  }
  const Batch* batch = design_.FindBatch(r.batch_id);
  const auto q = std::find(batch->questions.begin(), batch->questions.end(), r.triplet_id);
  if (q == batch->questions.end()) {
    return absl::NotFoundError(
        absl::StrCat("unknown triplet '", r.triplet_id, "' for batch '", r.batch_id, "'"));
  }
  const auto* triplet = design_.FindTriplet(r.triplet_id);
  if (triplet->method == Method::kPtc && r.choice != Choice::kSkip &&
      r.toggle_count < 1) {
    return absl::InvalidArgumentError(
        "PTC responses need at least one toggle before submission");
  }
  if (r.response_time_ms < 0) {
    return absl::InvalidArgumentError("response_time_ms must be >= 0");
  }
  const int question_index = static_cast<int>(q - batch->questions.begin());
  AIC_RETURN_IF_ERROR(AppendLocked(ResponseToJson(r, question_index).dump()));
  keys_.insert({r.participant_id, r.triplet_id, r.batch_id});
  rows_.push_back(ResponseRecord{r, question_index, *triplet});
  auto& done = answered_[r.participant_id][r.batch_id];
  done.insert(r.triplet_id);
  Acknowledgment ack;
  if (done.size() == batch->questions.size()) {
    p.completed_batches.push_back(r.batch_id);
    p.active_batch.reset();
    ack.batch_completed = true;
  }
  return ack;
}

std::vector<ResponseRecord> ResponseStore::Rows(std::optional<Method> method) const {
  std::vector<ResponseRecord> out;
  {
    std::lock_guard<std::mutex> lock(mu_);
    for (const auto& row : rows_) {
      if (!method || row.triplet.method == *method) out.push_back(row);
    }
  }
  SortForExport(out);
  return out;
}

std::map<std::string, int> ResponseStore::Coverage(Method method) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::map<std::string, int> out;
  for (const auto& b : design_.batches) {
    if (b.method == method) out[b.id] = started_.at(b.id);
  }
  return out;
}

size_t ResponseStore::ResponseCount() const {
  std::lock_guard<std::mutex> lock(mu_);
  return rows_.size();
}

}  // namespace aic::store
