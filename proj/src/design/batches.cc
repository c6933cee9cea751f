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
#include "design/batches.h"

#include <algorithm>
#include <set>
#include <tuple>
#include <utility>

#include "absl/strings/str_cat.h"
#include "common/file_io.h"
#include "common/random.h"
#include "common/status_macros.h"
#include "json.hpp"

namespace aic::design {

using nlohmann::json;

void Design::Reindex() {
  index_.clear();
  for (size_t i = 0; i < triplets.size(); ++i) index_[triplets[i].id] = i;
}

const Triplet* Design::FindTriplet(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &triplets[it->second];
}

const Batch* Design::FindBatch(const std::string& id) const {
  for (const auto& b : batches) {
    if (b.id == id) return &b;
  }
  return nullptr;
}

std::vector<const Batch*> Design::BatchesFor(Method method) const {
  std::vector<const Batch*> out;
  for (const auto& b : batches) {
    if (b.method == method) out.push_back(&b);
  }
  return out;
}

void Design::Merge(const Design& other) {
  triplets.insert(triplets.end(), other.triplets.begin(), other.triplets.end());
  batches.insert(batches.end(), other.batches.begin(), other.batches.end());
  Reindex();
}

absl::StatusOr<std::vector<Triplet>> GenerateTriplets(
    const catalog::StudyManifest& manifest, Method method,
    const DesignOptions& options) {
  std::vector<Triplet> out;
  for (const auto& source : manifest.sources) {
    for (const auto& codec : manifest.codecs) {
      AIC_ASSIGN_OR_RETURN(auto same,
                           GenerateSameCodec(manifest, source.id, codec.id, method));
      out.insert(out.end(), same.begin(), same.end());
    }
    if (options.cross_count > 0) {
      AIC_ASSIGN_OR_RETURN(auto cross,
                           GenerateCrossCodec(manifest, source.id, method,
                                              options.cross_count, options.seed,
                                              options.balanced));
      out.insert(out.end(), cross.begin(), cross.end());
    }
  }
  return out;
}

namespace {

bool AdjacentMirror(const std::vector<const Triplet*>& order) {
  for (size_t i = 0; i + 1 < order.size(); ++i) {
    if (order[i]->MirrorId() == order[i + 1]->id) return true;
  }
  return false;
}

}  // namespace

absl::StatusOr<std::vector<Batch>> AssignBatches(const std::vector<Triplet>& triplets,
                                                 int batch_size, uint64_t seed) {
  if (batch_size <= 0 || batch_size % 2 != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("batch size ", batch_size, " must be positive and even"));
  }
  if (triplets.empty()) return std::vector<Batch>{};
  if (triplets.size() % static_cast<size_t>(batch_size) != 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        triplets.size(), " triplets are not divisible into batches of ", batch_size));
  }
  const Method method = triplets.front().method;
  std::map<std::string, const Triplet*> by_id;
  for (const auto& t : triplets) {
    if (t.method != method) {
      return absl::InvalidArgumentError("batches cannot mix methods");
    }
    if (!by_id.emplace(t.id, &t).second) {
      return absl::InvalidArgumentError(absl::StrCat("duplicate triplet '", t.id, "'"));
    }
  }

  // Mirror pairs keyed by (source, kind), in input order.
  using PairT = std::pair<const Triplet*, const Triplet*>;
  std::map<std::pair<std::string, TripletKind>, std::vector<PairT>> groups;
  std::set<std::string> taken;
  for (const auto& t : triplets) {
    if (taken.count(t.id)) continue;
    auto mirror = by_id.find(t.MirrorId());
    if (mirror == by_id.end() || mirror->second == &t) {
      return absl::InvalidArgumentError(
          absl::StrCat("triplet '", t.id, "' has no mirror counterpart"));
    }
    taken.insert(t.id);
    taken.insert(mirror->first);
    groups[{t.source_id, t.kind}].emplace_back(&t, mirror->second);
  }

  Rng rng(seed);
  const size_t num_batches = triplets.size() / static_cast<size_t>(batch_size);
  std::vector<std::vector<const Triplet*>> members(num_batches);
  size_t cursor = 0;
  for (auto& [key, pairs] : groups) {
    std::shuffle(pairs.begin(), pairs.end(), rng);
    for (const auto& [a, b] : pairs) {
      members[cursor % num_batches].push_back(a);
      members[cursor % num_batches].push_back(b);
      ++cursor;
    }
  }

  std::vector<Batch> out;
  out.reserve(num_batches);
  for (size_t i = 0; i < num_batches; ++i) {
    const std::vector<const Triplet*> paired = members[i];
    auto& order = members[i];
    bool ok = order.size() <= 2;
    for (int attempt = 0; attempt < 200 && !ok; ++attempt) {
      std::shuffle(order.begin(), order.end(), rng);
      ok = !AdjacentMirror(order);
    }
    if (!ok) {
      // Pairs were appended adjacently; emit all first members, then all
      // second members, which separates every pair.
      std::vector<const Triplet*> split;
      for (size_t j = 0; j < paired.size(); j += 2) split.push_back(paired[j]);
      for (size_t j = 1; j < paired.size(); j += 2) split.push_back(paired[j]);
      order = std::move(split);
    }
    Batch batch;
    batch.id = absl::StrCat(MethodName(method), "-", i + 1);
    batch.method = method;
    for (const auto* t : order) batch.questions.push_back(t->id);
    out.push_back(std::move(batch));
  }
  return out;
}

absl::StatusOr<Design> GenerateDesign(const catalog::StudyManifest& manifest,
                                      Method method, const DesignOptions& options) {
  Design design;
  AIC_ASSIGN_OR_RETURN(design.triplets, GenerateTriplets(manifest, method, options));
  AIC_ASSIGN_OR_RETURN(
      design.batches,
      AssignBatches(design.triplets, options.batch_size,
                    DeriveSeed(options.seed, absl::StrCat("batches/", MethodName(method)))));
  design.Reindex();
  return design;
}

std::string SerializeDesign(const Design& design) {
  json doc;
  doc["triplets"] = json::array();
  for (const auto& t : design.triplets) {
    doc["triplets"].push_back({{"id", t.id},
                               {"method", MethodName(t.method)},
                               {"source", t.source_id},
                               {"left", t.left.ToString()},
                               {"right", t.right.ToString()},
                               {"kind", KindName(t.kind)}});
  }
  doc["batches"] = json::array();
  for (const auto& b : design.batches) {
    doc["batches"].push_back(
        {{"id", b.id}, {"method", MethodName(b.method)}, {"questions", b.questions}});
  }
  return doc.dump(1) + "\n";
}

absl::StatusOr<Design> ParseDesign(const std::string& json_text) {
  Design design;
  try {
    const json doc = json::parse(json_text);
    for (const auto& jt : doc.at("triplets")) {
      AIC_ASSIGN_OR_RETURN(Method method, ParseMethod(jt.at("method").get<std::string>()));
      AIC_ASSIGN_OR_RETURN(auto left, StimulusRef::Parse(jt.at("left").get<std::string>()));
      AIC_ASSIGN_OR_RETURN(auto right,
                           StimulusRef::Parse(jt.at("right").get<std::string>()));
      Triplet t = Triplet::Make(method, jt.at("source").get<std::string>(), left, right);
      if (t.id != jt.at("id").get<std::string>()) {
        return absl::InvalidArgumentError(
            absl::StrCat("triplet id '", jt.at("id").get<std::string>(),
                         "' does not match its fields"));
      }
      if (left == right) {
        return absl::InvalidArgumentError(
            absl::StrCat("triplet '", t.id, "' compares a stimulus with itself"));
      }
      design.triplets.push_back(std::move(t));
    }
    design.Reindex();
    for (const auto& jb : doc.at("batches")) {
      Batch b;
      b.id = jb.at("id").get<std::string>();
      AIC_ASSIGN_OR_RETURN(b.method, ParseMethod(jb.at("method").get<std::string>()));
      b.questions = jb.at("questions").get<std::vector<std::string>>();
      for (const auto& q : b.questions) {
        if (design.FindTriplet(q) == nullptr) {
          return absl::InvalidArgumentError(
              absl::StrCat("batch '", b.id, "' references unknown triplet '", q, "'"));
        }
      }
      design.batches.push_back(std::move(b));
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("design file: ", e.what()));
  }
  return design;
}

absl::StatusOr<Design> LoadDesign(const std::filesystem::path& path) {
  AIC_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  return ParseDesign(text);
}

absl::Status WriteDesign(const Design& design, const std::filesystem::path& path) {
  return WriteFileAtomic(path, SerializeDesign(design));
}

}  // namespace aic::design
