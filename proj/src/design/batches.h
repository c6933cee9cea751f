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
#ifndef AIC_DESIGN_BATCHES_H_
#define AIC_DESIGN_BATCHES_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "catalog/manifest.h"
#include "design/triplet.h"

namespace aic::design {

struct Batch {
  std::string id;
  Method method = Method::kBtc;
  // Triplet ids in presentation order.
  std::vector<std::string> questions;
};

struct DesignOptions {
  int cross_count = 24;
  int batch_size = 120;
  bool balanced = true;
  uint64_t seed = 1;
};

// Triplets and batches of one or both methods.
class Design {
 public:
  std::vector<Triplet> triplets;
  std::vector<Batch> batches;

  // Rebuilds the id index; call after mutating `triplets`.
  void Reindex();
  const Triplet* FindTriplet(const std::string& id) const;
  const Batch* FindBatch(const std::string& id) const;
  std::vector<const Batch*> BatchesFor(Method method) const;
  // Appends another design's triplets and batches.
  void Merge(const Design& other);

 private:
  std::map<std::string, size_t> index_;
};

// Same-codec triplets of every (source, codec) followed by `cross_count`
// cross-codec triplets per source.
absl::StatusOr<std::vector<Triplet>> GenerateTriplets(
    const catalog::StudyManifest& manifest, Method method,
    const DesignOptions& options);

// Splits mirror pairs into batches of `batch_size` questions. Pairs are
// grouped by (source, kind), shuffled within their group and dealt
// round-robin, so group counts per batch differ by at most one. Question order
// is then shuffled so that no triplet sits next to its mirror.
absl::StatusOr<std::vector<Batch>> AssignBatches(const std::vector<Triplet>& triplets,
                                                 int batch_size, uint64_t seed);

absl::StatusOr<Design> GenerateDesign(const catalog::StudyManifest& manifest,
                                      Method method, const DesignOptions& options);

std::string SerializeDesign(const Design& design);
absl::StatusOr<Design> ParseDesign(const std::string& json_text);
absl::StatusOr<Design> LoadDesign(const std::filesystem::path& path);
absl::Status WriteDesign(const Design& design, const std::filesystem::path& path);

}  // namespace aic::design

#endif  // AIC_DESIGN_BATCHES_H_
