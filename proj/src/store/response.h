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
#ifndef AIC_STORE_RESPONSE_H_
#define AIC_STORE_RESPONSE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "catalog/manifest.h"
#include "design/triplet.h"

namespace aic::store {

// Which image the observer judged more distorted.
enum class Choice { kLeft, kNotSure, kRight, kSkip };

absl::string_view ChoiceName(Choice choice);
absl::StatusOr<Choice> ParseChoice(absl::string_view name);

struct Response {
  std::string triplet_id;
  std::string batch_id;
  std::string participant_id;
  Choice choice = Choice::kSkip;
  int64_t response_time_ms = 0;
  // Number of in-place toggles; -1 when not applicable (BTC).
  int toggle_count = -1;
  int64_t submitted_at_ms = 0;
};

// One row of the response file: a response joined with its triplet.
struct ResponseRecord {
  Response response;
  int question_index = 0;
  design::Triplet triplet;
};

// Outcome of a same-codec judgment. Cross-codec triplets and skips have no
// ground truth and map to kUnscored.
enum class Outcome { kCorrect, kNotSure, kIncorrect, kUnscored };

// A response is correct when the lower-bitrate image is judged more
// distorted. Bitrates come from the manifest when given; otherwise the level
// ordering (higher level = lower bitrate, source = highest) is used.
Outcome Judge(const design::Triplet& triplet, Choice choice,
              const catalog::StudyManifest* manifest = nullptr);

struct LevelDifferenceStats {
  int level_difference = 0;
  int64_t correct = 0;
  int64_t not_sure = 0;
  int64_t incorrect = 0;
  double mean_response_time_ms = 0;

  int64_t Total() const { return correct + not_sure + incorrect; }
  double CorrectRatio() const;
  double NotSureRatio() const;
  double IncorrectRatio() const;
};

struct ResponseSummary {
  int64_t left = 0;
  int64_t not_sure = 0;
  int64_t right = 0;
  int64_t skip = 0;
  int64_t Total() const { return left + not_sure + right + skip; }
  // Same-codec statistics keyed by |level difference|; filled only when a
  // manifest is supplied.
  std::vector<LevelDifferenceStats> by_level_difference;
};

ResponseSummary Summarize(const std::vector<ResponseRecord>& rows,
                          const catalog::StudyManifest* manifest);

// Sorts by (batch, participant, question index). Batches order by method then
// numeric suffix so that "btc-10" follows "btc-9".
void SortForExport(std::vector<ResponseRecord>& rows);

// Tab-separated response file. Header lines start with '#'. When
// `with_summary` is set, per-method summary blocks are appended as '#' lines.
std::string SerializeResponses(const std::vector<ResponseRecord>& rows,
                               const catalog::StudyManifest* manifest,
                               bool with_summary);
absl::StatusOr<std::vector<ResponseRecord>> ParseResponses(absl::string_view text);
absl::StatusOr<std::vector<ResponseRecord>> LoadResponses(
    const std::filesystem::path& path);
absl::Status WriteResponses(const std::vector<ResponseRecord>& rows,
                            const std::filesystem::path& path,
                            const catalog::StudyManifest* manifest = nullptr,
                            bool with_summary = true);

}  // namespace aic::store

#endif  // AIC_STORE_RESPONSE_H_
