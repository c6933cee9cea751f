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
#ifndef AIC_SCALE_MODEL_H_
#define AIC_SCALE_MODEL_H_

#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "catalog/manifest.h"
#include "design/triplet.h"
#include "store/response.h"

namespace aic::scale {

// Exponential rate-distortion curve d(r) = alpha * exp(-beta * r) in JND,
// plus the quadratic map h(d) = gamma1 * d + gamma2 * d^2 from plain to
// boosted viewing.
struct CodecParams {
  double alpha = 2.0;   // JND
  double beta = 1.0;    // 1/bpp
  double gamma1 = 2.0;
  double gamma2 = 0.1;  // 1/JND

  bool IsValid() const;
};

double RdDistortion(const CodecParams& p, double bpp);
double Boost(const CodecParams& p, double distortion);

inline constexpr double kProbabilityFloor = 1e-12;

// Thurstone Case V: probability that the left image is judged more
// distorted, Phi(k * (d_left - d_right)).
double ChoiceProbability(double d_left, double d_right, double k = 1.0);

struct FitDiagnostics {
  double negative_log_likelihood = 0;
  int iterations = 0;
  int restart = 0;
  bool converged = false;
  bool used_fallback = false;
  std::string termination;
};

// Four parameters per codec for one source image.
struct SourceModel {
  std::string source_id;
  std::vector<std::string> codec_ids;
  std::vector<CodecParams> params;
  FitDiagnostics diagnostics;

  const CodecParams* Find(const std::string& codec_id) const;
  size_t NumParameters() const { return 4 * params.size(); }
};

// A stimulus on the model's scale: a codec curve evaluated at `bpp`, or the
// source itself (codec < 0) with distortion 0 under either viewing.
struct ScalePoint {
  int codec = -1;
  double bpp = 0;
};

// Judgments of one triplet, as fractional votes for each side.
struct TripletVotes {
  std::string triplet_id;
  design::Method method = design::Method::kBtc;
  ScalePoint left;
  ScalePoint right;
  double left_votes = 0;
  double right_votes = 0;
  double not_sure_votes = 0;
  // Bootstrap multiplicity.
  double weight = 1.0;
};

// Negative log-likelihood of one source's responses under the unified model.
// Not-sure responses count half for each side. Parameters are optimized in an
// unconstrained space: log alpha, log beta, log gamma1, softplus^-1 gamma2.
class LikelihoodProblem {
 public:
  static absl::StatusOr<LikelihoodProblem> Build(
      const std::string& source_id, const std::vector<store::ResponseRecord>& rows,
      const catalog::StudyManifest& manifest, double k = 1.0);

  const std::string& source_id() const { return source_id_; }
  const std::vector<std::string>& codec_ids() const { return codec_ids_; }
  const std::vector<TripletVotes>& votes() const { return votes_; }
  std::vector<TripletVotes>& mutable_votes() { return votes_; }
  double k() const { return k_; }
  size_t NumParameters() const { return 4 * codec_ids_.size(); }

  double Evaluate(const std::vector<CodecParams>& params) const;
  // Value at unconstrained `theta`; fills `gradient` when non-empty.
  double EvaluateTheta(std::span<const double> theta, std::span<double> gradient) const;
  // Each codec has at least one vote on a non-source stimulus.
  absl::Status CheckIdentifiable() const;

  static std::vector<double> ToTheta(const std::vector<CodecParams>& params);
  static std::vector<CodecParams> FromTheta(std::span<const double> theta);

 private:
  double Compute(const std::vector<CodecParams>& params, std::span<const double> theta,
                 std::span<double> gradient) const;

  std::string source_id_;
  std::vector<std::string> codec_ids_;
  std::vector<TripletVotes> votes_;
  double k_ = 1.0;
};

// Sum over individual responses of -log p(choice); skips are ignored.
absl::StatusOr<double> NegativeLogLikelihood(
    const SourceModel& model, const std::vector<store::ResponseRecord>& rows,
    const catalog::StudyManifest& manifest, double k = 1.0);

}  // namespace aic::scale

#endif  // AIC_SCALE_MODEL_H_
