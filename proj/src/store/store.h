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
#ifndef AIC_STORE_STORE_H_
#define AIC_STORE_STORE_H_

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "design/batches.h"
#include "store/response.h"

namespace aic::store {

struct StoreOptions {
  int max_batches_per_participant = 2;
  // Batch instances wanted per batch; equals responses per triplet since
  // every triplet lives in exactly one batch.
  int target_instances = 24;
  // fsync the log after every append.
  bool fsync = true;
  // Rewrite the log after this many appends (0 disables).
  int compact_every = 5000;
};

struct Participant {
  std::string id;
  std::string token;
  design::Method method = design::Method::kBtc;
  std::vector<std::string> completed_batches;
  std::optional<std::string> active_batch;
};

struct Acknowledgment {
  bool duplicate = false;
  // The submission completed the participant's active batch.
  bool batch_completed = false;
};

// Append-only response store backed by a JSON-lines event log in `data_dir`.
// All public methods are thread-safe; mutations are serialized.
class ResponseStore {
 public:
  // Opens (or creates) the store in `data_dir`. A design given here is
  // persisted as data_dir/design.json; otherwise that file must exist.
  static absl::StatusOr<std::unique_ptr<ResponseStore>> Open(
      const std::filesystem::path& data_dir, const design::Design* design,
      StoreOptions options);
  ~ResponseStore();

  ResponseStore(const ResponseStore&) = delete;
  ResponseStore& operator=(const ResponseStore&) = delete;

  absl::StatusOr<Participant> Enroll(design::Method method);
  absl::StatusOr<Participant> FindByToken(const std::string& token) const;
  absl::StatusOr<Participant> FindParticipant(const std::string& id) const;

  // Resumes the participant's active batch if any; otherwise picks the batch
  // of `method` with the fewest started instances that the participant has
  // not done, ties broken by batch order. Fails with ResourceExhausted when
  // the participant hit the batch limit and with OutOfRange when every
  // eligible batch reached its target coverage.
  absl::StatusOr<design::Batch> AssignBatch(const std::string& participant_id,
                                            design::Method method);

  // Validates and durably appends. A repeated (participant, triplet, batch)
  // is acknowledged as a duplicate without a new row.
  absl::StatusOr<Acknowledgment> RecordResponse(const Response& response);

  // Rows sorted by (batch, participant, question index).
  std::vector<ResponseRecord> Rows(std::optional<design::Method> method) const;
  // Started instances per batch id.
  std::map<std::string, int> Coverage(design::Method method) const;
  size_t ResponseCount() const;

  absl::Status Compact();

  const design::Design& design() const { return design_; }
  const StoreOptions& options() const { return options_; }
  std::filesystem::path log_path() const { return data_dir_ / "responses.log"; }

 private:
  ResponseStore(std::filesystem::path data_dir, design::Design design,
                StoreOptions options);
  absl::Status Replay();
  absl::Status ApplyLine(const std::string& line);
  absl::Status AppendLocked(const std::string& line);
  absl::Status OpenLogLocked();
  std::string SnapshotLocked() const;

  using Key = std::tuple<std::string, std::string, std::string>;

  const std::filesystem::path data_dir_;
  design::Design design_;
  const StoreOptions options_;

  mutable std::mutex mu_;
  std::FILE* log_ = nullptr;
  int appends_since_compaction_ = 0;
  int next_participant_ = 1;
  std::map<std::string, Participant> participants_;
  std::map<std::string, std::string> token_to_id_;
  std::map<std::string, int> started_;
  std::vector<ResponseRecord> rows_;
  std::set<Key> keys_;
  // participant -> (batch -> answered triplets)
  std::map<std::string, std::map<std::string, std::set<std::string>>> answered_;
};

}  // namespace aic::store

#endif  // AIC_STORE_STORE_H_
