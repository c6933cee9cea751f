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
#include "store/response.h"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <tuple>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "common/file_io.h"
#include "common/status_macros.h"

namespace aic::store {

using design::Method;
using design::StimulusRef;
using design::Triplet;
using design::TripletKind;

absl::string_view ChoiceName(Choice choice) {
  switch (choice) {
    case Choice::kLeft:
      return "left";
    case Choice::kNotSure:
      return "not_sure";
    case Choice::kRight:
      return "right";
    case Choice::kSkip:
      return "skip";
  }
  return "skip";
}

absl::StatusOr<Choice> ParseChoice(absl::string_view name) {
  if (name == "left") return Choice::kLeft;
  if (name == "not_sure") return Choice::kNotSure;
  if (name == "right") return Choice::kRight;
  if (name == "skip") return Choice::kSkip;
  return absl::InvalidArgumentError(absl::StrCat("unknown choice '", name, "'"));
}

namespace {

double Bitrate(const Triplet& t, const StimulusRef& ref,
               const catalog::StudyManifest* manifest) {
  if (ref.IsSource()) return std::numeric_limits<double>::infinity();
  if (manifest != nullptr) {
    if (const auto* st = manifest->FindStimulus(t.source_id, ref.codec, ref.level)) {
      return st->actual_bpp;
    }
  }
  return -static_cast<double>(ref.level);
}

}  // namespace

Outcome Judge(const Triplet& triplet, Choice choice,
              const catalog::StudyManifest* manifest) {
  if (triplet.kind != TripletKind::kSameCodec || choice == Choice::kSkip) {
    return Outcome::kUnscored;
  }
  if (choice == Choice::kNotSure) return Outcome::kNotSure;
  const double left = Bitrate(triplet, triplet.left, manifest);
  const double right = Bitrate(triplet, triplet.right, manifest);
  if (left == right) return Outcome::kUnscored;
  const bool left_more_distorted = left < right;
  return (choice == Choice::kLeft) == left_more_distorted ? Outcome::kCorrect
                                                          : Outcome::kIncorrect;
}

double LevelDifferenceStats::CorrectRatio() const {
  return Total() ? static_cast<double>(correct) / Total() : 0.0;
}
double LevelDifferenceStats::NotSureRatio() const {
  return Total() ? static_cast<double>(not_sure) / Total() : 0.0;
}
double LevelDifferenceStats::IncorrectRatio() const {
  return Total() ? static_cast<double>(incorrect) / Total() : 0.0;
}

ResponseSummary Summarize(const std::vector<ResponseRecord>& rows,
                          const catalog::StudyManifest* manifest) {
  ResponseSummary s;
  std::map<int, LevelDifferenceStats> groups;
  std::map<int, double> time_sum;
  for (const auto& row : rows) {
    switch (row.response.choice) {
      case Choice::kLeft:
        ++s.left;
        break;
      case Choice::kNotSure:
        ++s.not_sure;
        break;
      case Choice::kRight:
        ++s.right;
        break;
      case Choice::kSkip:
        ++s.skip;
        break;
    }
    if (manifest == nullptr) continue;
    const Outcome outcome = Judge(row.triplet, row.response.choice, manifest);
    if (outcome == Outcome::kUnscored) continue;
    const int diff = row.triplet.LevelDifference();
    auto& g = groups[diff];
    g.level_difference = diff;
    if (outcome == Outcome::kCorrect) ++g.correct;
    if (outcome == Outcome::kNotSure) ++g.not_sure;
    if (outcome == Outcome::kIncorrect) ++g.incorrect;
    time_sum[diff] += static_cast<double>(row.response.response_time_ms);
  }
  for (auto& [diff, g] : groups) {
    g.mean_response_time_ms = time_sum[diff] / static_cast<double>(g.Total());
    s.by_level_difference.push_back(g);
  }
  return s;
}

namespace {

// (method, numeric suffix, id) for batch ids like "btc-12".
std::tuple<std::string, long, std::string> BatchKey(const std::string& id) {
  const auto dash = id.rfind('-');
  long n = -1;
  if (dash != std::string::npos && absl::SimpleAtoi(id.substr(dash + 1), &n)) {
    return {id.substr(0, dash), n, id};
  }
  return {id, -1, id};
}

constexpr absl::string_view kColumns =
    "batch_id\tparticipant_id\tquestion_index\ttriplet_id\tmethod\tsource_id\t"
    "left\tright\tkind\tchoice\tresponse_time_ms\ttoggle_count\tsubmitted_at_ms";

void AppendSummary(std::string& out, absl::string_view label,
                   const ResponseSummary& s) {
  absl::StrAppend(&out, "#summary\t", label, "\tleft=", s.left,
                  "\tnot_sure=", s.not_sure, "\tright=", s.right, "\tskip=", s.skip,
                  "\ttotal=", s.Total(), "\n");
  for (const auto& g : s.by_level_difference) {
    absl::StrAppend(
        &out,
        absl::StrFormat("#summary\t%s\tlevel_difference=%d\tn=%d\tcorrect=%.6f\t"
                        "not_sure=%.6f\tincorrect=%.6f\tmean_time_s=%.3f\n",
                        label, g.level_difference, g.Total(), g.CorrectRatio(),
                        g.NotSureRatio(), g.IncorrectRatio(),
                        g.mean_response_time_ms / 1000.0));
  }
}

}  // namespace

void SortForExport(std::vector<ResponseRecord>& rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ResponseRecord& a, const ResponseRecord& b) {
                     return std::forward_as_tuple(BatchKey(a.response.batch_id),
                                                  a.response.participant_id,
                                                  a.question_index) <
                            std::forward_as_tuple(BatchKey(b.response.batch_id),
                                                  b.response.participant_id,
                                                  b.question_index);
                   });
}

std::string SerializeResponses(const std::vector<ResponseRecord>& rows,
                               const catalog::StudyManifest* manifest,
                               bool with_summary) {
  std::string out;
  out += "# aic responses v1\n";
  out += "# choice: which image was judged more distorted (left | not_sure | right "
         "| skip)\n";
  out += "# left/right: SOURCE or <codec>:<level>; toggle_count -1 = not recorded\n";
  absl::StrAppend(&out, "#", kColumns, "\n");
  for (const auto& row : rows) {
    const auto& r = row.response;
    absl::StrAppend(&out, r.batch_id, "\t", r.participant_id, "\t", row.question_index,
                    "\t", r.triplet_id, "\t", design::MethodName(row.triplet.method),
                    "\t", row.triplet.source_id, "\t", row.triplet.left.ToString(),
                    "\t", row.triplet.right.ToString(), "\t",
                    design::KindName(row.triplet.kind), "\t", ChoiceName(r.choice),
                    "\t", r.response_time_ms, "\t", r.toggle_count, "\t",
                    r.submitted_at_ms, "\n");
  }
  if (with_summary) {
    for (Method m : {Method::kBtc, Method::kPtc}) {
      std::vector<ResponseRecord> subset;
      for (const auto& row : rows) {
        if (row.triplet.method == m) subset.push_back(row);
      }
      if (subset.empty()) continue;
      AppendSummary(out, design::MethodName(m), Summarize(subset, manifest));
    }
  }
  return out;
}

absl::StatusOr<std::vector<ResponseRecord>> ParseResponses(absl::string_view text) {
  std::vector<ResponseRecord> rows;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    std::vector<absl::string_view> f = absl::StrSplit(line, '\t');
    auto bad = [&](absl::string_view what) {
      return absl::InvalidArgumentError(
          absl::StrCat("responses line ", line_no, ": ", what));
    };
    if (f.size() != 13) return bad(absl::StrCat("expected 13 columns, got ", f.size()));
    ResponseRecord row;
    auto& r = row.response;
    r.batch_id = std::string(f[0]);
    r.participant_id = std::string(f[1]);
    r.triplet_id = std::string(f[3]);
    if (!absl::SimpleAtoi(f[2], &row.question_index)) return bad("question_index");
    auto method = design::ParseMethod(f[4]);
    if (!method.ok()) return bad(method.status().message());
    auto left = StimulusRef::Parse(f[6]);
    auto right = StimulusRef::Parse(f[7]);
    if (!left.ok() || !right.ok()) return bad("stimulus reference");
    row.triplet = Triplet::Make(*method, std::string(f[5]), *left, *right);
    if (row.triplet.id != r.triplet_id) return bad("triplet_id does not match fields");
    if (design::KindName(row.triplet.kind) != f[8]) return bad("kind mismatch");
    auto choice = ParseChoice(f[9]);
    if (!choice.ok()) return bad(choice.status().message());
    r.choice = *choice;
    if (!absl::SimpleAtoi(f[10], &r.response_time_ms) ||
        !absl::SimpleAtoi(f[11], &r.toggle_count) ||
        !absl::SimpleAtoi(f[12], &r.submitted_at_ms)) {
      return bad("numeric field");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

absl::StatusOr<std::vector<ResponseRecord>> LoadResponses(
    const std::filesystem::path& path) {
  AIC_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  return ParseResponses(text);
}

absl::Status WriteResponses(const std::vector<ResponseRecord>& rows,
                            const std::filesystem::path& path,
                            const catalog::StudyManifest* manifest, bool with_summary) {
  return WriteFileAtomic(path, SerializeResponses(rows, manifest, with_summary));
}

}  // namespace aic::store
