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
#include "cleansing/cleansing.h"

#include <cmath>
#include <map>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/string_view.h"

namespace aic::cleansing {

using store::Choice;
using store::Outcome;

std::vector<BatchInstance> GroupInstances(const std::vector<store::ResponseRecord>& rows) {
  std::vector<BatchInstance> out;
  std::map<std::pair<std::string, std::string>, size_t> index;
  for (const auto& row : rows) {
    const auto key = std::make_pair(row.response.participant_id, row.response.batch_id);
    auto [it, inserted] = index.emplace(key, out.size());
    if (inserted) {
      BatchInstance inst;
      inst.participant_id = key.first;
      inst.batch_id = key.second;
      inst.method = row.triplet.method;
      out.push_back(std::move(inst));
    }
    out[it->second].responses.push_back(row);
  }
  return out;
}

absl::StatusOr<double> Accuracy(const BatchInstance& instance,
                                const catalog::StudyManifest* manifest) {
  double num = 0;
  double den = 0;
  for (const auto& row : instance.responses) {
    const Outcome o = store::Judge(row.triplet, row.response.choice, manifest);
    if (o == Outcome::kUnscored) continue;
    const double w = row.triplet.LevelDifference();
    den += w;
    if (o == Outcome::kCorrect) num += w;
    if (o == Outcome::kNotSure) num += 0.5 * w;
  }
  if (den == 0) {
    return absl::FailedPreconditionError(
        absl::StrCat("instance (", instance.participant_id, ", ", instance.batch_id,
                     ") has no scorable same-codec responses"));
  }
  return num / den;
}

absl::StatusOr<double> Consistency(const BatchInstance& instance,
                                   const catalog::StudyManifest* manifest) {
  std::map<std::string, const store::ResponseRecord*> by_id;
  for (const auto& row : instance.responses) by_id[row.response.triplet_id] = &row;
  double num = 0;
  double den = 0;
  for (const auto& [id, row] : by_id) {
    const std::string mirror_id = row->triplet.MirrorId();
    if (!(id < mirror_id)) continue;
    auto m = by_id.find(mirror_id);
    if (m == by_id.end()) continue;
    const Outcome a = store::Judge(row->triplet, row->response.choice, manifest);
    const Outcome b = store::Judge(m->second->triplet, m->second->response.choice, manifest);
    if (a == Outcome::kUnscored || b == Outcome::kUnscored) continue;
    double score = 0;
    if (a == b) {
      score = 1.0;
    } else if (a == Outcome::kNotSure || b == Outcome::kNotSure) {
      score = 0.375;
    }
    const double w = row->triplet.LevelDifference();
    num += w * score;
    den += w;
  }
  if (den == 0) {
    return absl::FailedPreconditionError(
        absl::StrCat("instance (", instance.participant_id, ", ", instance.batch_id,
                     ") has no scorable mirror pairs"));
  }
  return num / den;
}

void ScoreInstances(std::vector<BatchInstance>& instances,
                    const catalog::StudyManifest* manifest) {
  for (auto& inst : instances) {
    auto acc = Accuracy(inst, manifest);
    auto con = Consistency(inst, manifest);
    if (acc.ok()) inst.accuracy = *acc;
    if (con.ok()) inst.consistency = *con;
    if (!acc.ok()) {
      inst.note = std::string(acc.status().message());
    } else if (!con.ok()) {
      inst.note = std::string(con.status().message());
    }
  }
}

FilterResult FilterInstances(std::vector<BatchInstance> instances, double threshold) {
  FilterResult result;
  for (auto& inst : instances) {
    const double mean = inst.MeanScore();
    if (std::isfinite(mean) && mean >= threshold) {
      result.retained.push_back(std::move(inst));
    } else {
      result.excluded.push_back(std::move(inst));
    }
  }
  return result;
}

std::vector<store::ResponseRecord> Flatten(const std::vector<BatchInstance>& instances) {
  std::vector<store::ResponseRecord> rows;
  for (const auto& inst : instances) {
    rows.insert(rows.end(), inst.responses.begin(), inst.responses.end());
  }
  store::SortForExport(rows);
  return rows;
}

std::string AuditReport(const FilterResult& result, double threshold) {
  std::string out;
  absl::StrAppend(&out, "# threshold\t", threshold, "\n");
  for (auto m : {design::Method::kBtc, design::Method::kPtc}) {
    size_t kept = 0;
    size_t total = 0;
    for (const auto& i : result.retained) {
      if (i.method == m) ++kept, ++total;
    }
    for (const auto& i : result.excluded) {
      if (i.method == m) ++total;
    }
    if (total > 0) {
      absl::StrAppend(&out, "# ", design::MethodName(m), "\tretained=", kept,
                      "\texcluded=", total - kept, "\ttotal=", total, "\n");
    }
  }
  out += "#participant_id\tbatch_id\tmethod\tresponses\taccuracy\tconsistency\tmean\t"
         "decision\tnote\n";
  auto emit = [&](const BatchInstance& i, absl::string_view decision) {
    absl::StrAppend(&out,
                    absl::StrFormat("%s\t%s\t%s\t%d\t%.6f\t%.6f\t%.6f\t%s\t%s\n",
                                    i.participant_id, i.batch_id,
                                    design::MethodName(i.method), i.responses.size(),
                                    i.accuracy, i.consistency, i.MeanScore(), decision,
                                    i.note));
  };
  for (const auto& i : result.excluded) emit(i, "excluded");
  for (const auto& i : result.retained) emit(i, "retained");
  return out;
}

}  // namespace aic::cleansing
