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
#include "scale/model.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "absl/strings/str_cat.h"

namespace aic::scale {

namespace {

double Softplus(double x) { return x > 30 ? x : std::log1p(std::exp(x)); }
double InverseSoftplus(double y) { return y > 30 ? y : std::log(std::expm1(y)); }
double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double NormalCdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
double NormalPdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

bool CodecParams::IsValid() const {
  return alpha > 0 && beta > 0 && gamma1 > 0 && gamma2 >= 0 && std::isfinite(alpha) &&
         std::isfinite(beta) && std::isfinite(gamma1) && std::isfinite(gamma2);
}

double RdDistortion(const CodecParams& p, double bpp) {
  return p.alpha * std::exp(-p.beta * bpp);
}

double Boost(const CodecParams& p, double distortion) {
  return p.gamma1 * distortion + p.gamma2 * distortion * distortion;
}

double ChoiceProbability(double d_left, double d_right, double k) {
  return NormalCdf(k * (d_left - d_right));
}

const CodecParams* SourceModel::Find(const std::string& codec_id) const {
  for (size_t i = 0; i < codec_ids.size(); ++i) {
    if (codec_ids[i] == codec_id) return &params[i];
  }
  return nullptr;
}

absl::StatusOr<LikelihoodProblem> LikelihoodProblem::Build(
    const std::string& source_id, const std::vector<store::ResponseRecord>& rows,
    const catalog::StudyManifest& manifest, double k) {
  if (!(k > 0)) return absl::InvalidArgumentError("scaling constant k must be > 0");
  LikelihoodProblem problem;
  problem.source_id_ = source_id;
  problem.k_ = k;
  std::map<std::string, int> codec_index;
  for (const auto& c : manifest.codecs) {
    codec_index[c.id] = static_cast<int>(problem.codec_ids_.size());
    problem.codec_ids_.push_back(c.id);
  }
  auto point = [&](const design::StimulusRef& ref) -> absl::StatusOr<ScalePoint> {
    if (ref.IsSource()) return ScalePoint{};
    const auto* st = manifest.FindStimulus(source_id, ref.codec, ref.level);
    if (st == nullptr) {
      return absl::NotFoundError(absl::StrCat("stimulus (", source_id, ", ",
                                              ref.ToString(), ") not in manifest"));
    }
    return ScalePoint{codec_index.at(ref.codec), st->actual_bpp};
  };
  std::map<std::string, size_t> index;
  for (const auto& row : rows) {
    if (row.triplet.source_id != source_id) continue;
    if (row.response.choice == store::Choice::kSkip) continue;
    auto [it, inserted] = index.emplace(row.triplet.id, problem.votes_.size());
    if (inserted) {
      TripletVotes v;
      v.triplet_id = row.triplet.id;
      v.method = row.triplet.method;
      auto l = point(row.triplet.left);
      if (!l.ok()) return l.status();
      auto r = point(row.triplet.right);
      if (!r.ok()) return r.status();
      v.left = *l;
      v.right = *r;
      problem.votes_.push_back(v);
    }
    auto& v = problem.votes_[it->second];
    switch (row.response.choice) {
      case store::Choice::kLeft:
        v.left_votes += 1;
        break;
      case store::Choice::kRight:
        v.right_votes += 1;
        break;
      case store::Choice::kNotSure:
        v.not_sure_votes += 1;
        break;
      case store::Choice::kSkip:
        break;
    }
  }
  return problem;
}

absl::Status LikelihoodProblem::CheckIdentifiable() const {
  std::vector<bool> seen(codec_ids_.size(), false);
  for (const auto& v : votes_) {
    if (v.weight <= 0) continue;
    if (v.left.codec >= 0) seen[static_cast<size_t>(v.left.codec)] = true;
    if (v.right.codec >= 0) seen[static_cast<size_t>(v.right.codec)] = true;
  }
  for (size_t c = 0; c < seen.size(); ++c) {
    if (!seen[c]) {
      return absl::FailedPreconditionError(absl::StrCat(
          "source '", source_id_, "': codec '", codec_ids_[c], "' has no responses"));
    }
  }
  return absl::OkStatus();
}

std::vector<double> LikelihoodProblem::ToTheta(const std::vector<CodecParams>& params) {
  std::vector<double> theta;
  theta.reserve(4 * params.size());
  for (const auto& p : params) {
    theta.push_back(std::log(p.alpha));
    theta.push_back(std::log(p.beta));
    theta.push_back(std::log(p.gamma1));
    theta.push_back(InverseSoftplus(std::max(p.gamma2, 1e-300)));
  }
  return theta;
}

std::vector<CodecParams> LikelihoodProblem::FromTheta(std::span<const double> theta) {
  std::vector<CodecParams> params(theta.size() / 4);
  for (size_t c = 0; c < params.size(); ++c) {
    params[c].alpha = std::exp(theta[4 * c]);
    params[c].beta = std::exp(theta[4 * c + 1]);
    params[c].gamma1 = std::exp(theta[4 * c + 2]);
    params[c].gamma2 = Softplus(theta[4 * c + 3]);
  }
  return params;
}

double LikelihoodProblem::Evaluate(const std::vector<CodecParams>& params) const {
  return Compute(params, {}, {});
}

double LikelihoodProblem::EvaluateTheta(std::span<const double> theta,
                                        std::span<double> gradient) const {
  return Compute(FromTheta(theta), theta, gradient);
}

double LikelihoodProblem::Compute(const std::vector<CodecParams>& params,
                                  std::span<const double> theta,
                                  std::span<double> gradient) const {
  const bool want_grad = !gradient.empty();
  if (want_grad) std::fill(gradient.begin(), gradient.end(), 0.0);

  // Scale value of a point and its derivative w.r.t. the codec's theta.
  struct Eval {
    double value = 0;
    double d[4] = {0, 0, 0, 0};
  };
  auto evaluate = [&](const ScalePoint& pt, bool boosted) {
    Eval e;
    if (pt.codec < 0) return e;
    const auto& p = params[static_cast<size_t>(pt.codec)];
    const double dist = RdDistortion(p, pt.bpp);
    const double d_da = dist;                   // d/d(log alpha)
    const double d_db = -p.beta * pt.bpp * dist;  // d/d(log beta)
    if (!boosted) {
      e.value = dist;
      e.d[0] = d_da;
      e.d[1] = d_db;
      return e;
    }
    const double slope = p.gamma1 + 2.0 * p.gamma2 * dist;
    e.value = Boost(p, dist);
    e.d[0] = slope * d_da;
    e.d[1] = slope * d_db;
    e.d[2] = p.gamma1 * dist;
    if (want_grad) {
      e.d[3] = dist * dist * Sigmoid(theta[4 * static_cast<size_t>(pt.codec) + 3]);
    }
    return e;
  };

  double total = 0;
  for (const auto& v : votes_) {
    if (v.weight == 0) continue;
    const bool boosted = v.method == design::Method::kBtc;
    const Eval l = evaluate(v.left, boosted);
    const Eval r = evaluate(v.right, boosted);
    const double x = k_ * (l.value - r.value);
    const double p_raw = NormalCdf(x);
    const double q_raw = NormalCdf(-x);
    const double p = std::clamp(p_raw, kProbabilityFloor, 1.0 - kProbabilityFloor);
    const double q = std::clamp(q_raw, kProbabilityFloor, 1.0 - kProbabilityFloor);
    const double wl = v.left_votes + 0.5 * v.not_sure_votes;
    const double wr = v.right_votes + 0.5 * v.not_sure_votes;
    total -= v.weight * (wl * std::log(p) + wr * std::log(q));
    if (!want_grad) continue;
    const double pdf = NormalPdf(x);
    double dx = 0;  // d(nll)/dx
    if (p == p_raw) dx -= wl * pdf / p;
    if (q == q_raw) dx += wr * pdf / q;
    dx *= v.weight * k_;
    for (int j = 0; j < 4; ++j) {
      if (v.left.codec >= 0) gradient[4 * static_cast<size_t>(v.left.codec) + j] += dx * l.d[j];
      if (v.right.codec >= 0) {
        gradient[4 * static_cast<size_t>(v.right.codec) + j] -= dx * r.d[j];
      }
    }
  }
  return total;
}

absl::StatusOr<double> NegativeLogLikelihood(const SourceModel& model,
                                             const std::vector<store::ResponseRecord>& rows,
                                             const catalog::StudyManifest& manifest,
                                             double k) {
  auto problem = LikelihoodProblem::Build(model.source_id, rows, manifest, k);
  if (!problem.ok()) return problem.status();
  std::vector<CodecParams> params;
  for (const auto& id : problem->codec_ids()) {
    const auto* p = model.Find(id);
    if (p == nullptr) {
      return absl::InvalidArgumentError(absl::StrCat("model lacks codec '", id, "'"));
    }
    params.push_back(*p);
  }
  return problem->Evaluate(params);
}

}  // namespace aic::scale
