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
#include "store/service.h"

#include <chrono>
#include <string>

#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "httplib.h"
#include "json.hpp"

namespace aic::store {

using nlohmann::json;

namespace {

int HttpCode(const absl::Status& s) {
  switch (s.code()) {
    case absl::StatusCode::kInvalidArgument:
      return 400;
    case absl::StatusCode::kUnauthenticated:
      return 401;
    case absl::StatusCode::kNotFound:
      return 404;
    case absl::StatusCode::kFailedPrecondition:
      return 409;
    case absl::StatusCode::kOutOfRange:
      return 410;
    case absl::StatusCode::kResourceExhausted:
      return 429;
    default:
      return 500;
  }
}

void Reply(httplib::Response& res, int code, const json& body) {
  res.status = code;
  res.set_content(body.dump(), "application/json");
}

void ReplyError(httplib::Response& res, const absl::Status& s) {
  Reply(res, HttpCode(s),
        {{"error", std::string(s.message())},
         {"code", absl::StatusCodeToString(s.code())}});
}

std::string BearerToken(const httplib::Request& req) {
  const std::string auth = req.get_header_value("Authorization");
  constexpr absl::string_view kPrefix = "Bearer ";
  if (!absl::StartsWith(auth, kPrefix)) return "";
  return auth.substr(kPrefix.size());
}

int64_t NowMs() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

StudyService::StudyService(ResponseStore* store, const catalog::StudyManifest* manifest,
                           ServiceOptions options)
    : store_(store),
      manifest_(manifest),
      options_(std::move(options)),
      server_(std::make_unique<httplib::Server>()) {
  if (options_.asset_root.empty() && manifest_ != nullptr) {
    options_.asset_root = manifest_->base_dir;
  }
  Register();
}

StudyService::~StudyService() { Stop(); }

void StudyService::Register() {
  auto& srv = *server_;
  if (!options_.asset_root.empty()) {
    srv.set_mount_point("/assets", options_.asset_root.string());
  }

  srv.Post("/api/enroll", [this](const httplib::Request& req, httplib::Response& res) {
    std::string method_name = "btc";
    try {
      if (!req.body.empty()) method_name = json::parse(req.body).value("method", "btc");
    } catch (const json::exception& e) {
      return ReplyError(res, absl::InvalidArgumentError(e.what()));
    }
    auto method = design::ParseMethod(method_name);
    if (!method.ok()) return ReplyError(res, method.status());
    auto p = store_->Enroll(*method);
    if (!p.ok()) return ReplyError(res, p.status());
    Reply(res, 200,
          {{"participant_id", p->id},
           {"token", p->token},
           {"method", design::MethodName(p->method)},
           {"max_batches", store_->options().max_batches_per_participant}});
  });

  srv.Post("/api/next-batch", [this](const httplib::Request& req, httplib::Response& res) {
    auto p = store_->FindByToken(BearerToken(req));
    if (!p.ok()) return ReplyError(res, p.status());
    auto batch = store_->AssignBatch(p->id, p->method);
    if (!batch.ok()) return ReplyError(res, batch.status());
    json questions = json::array();
    for (size_t i = 0; i < batch->questions.size(); ++i) {
      questions.push_back({{"index", i}, {"triplet_id", batch->questions[i]}});
    }
    Reply(res, 200,
          {{"batch_id", batch->id},
           {"method", design::MethodName(batch->method)},
           {"questions", questions}});
  });

  srv.Get("/api/triplet", [this](const httplib::Request& req, httplib::Response& res) {
    const auto* t = store_->design().FindTriplet(req.get_param_value("id"));
    if (t == nullptr) {
      return ReplyError(res, absl::NotFoundError("unknown triplet"));
    }
    auto url = [&](const design::StimulusRef& ref) -> std::string {
      if (manifest_ == nullptr) return "";
      std::filesystem::path file;
      if (ref.IsSource()) {
        if (const auto* s = manifest_->FindSource(t->source_id)) file = s->file;
      } else if (const auto* st =
                     manifest_->FindStimulus(t->source_id, ref.codec, ref.level)) {
        file = st->file;
      }
      return file.empty() ? "" : "/assets/" + file.generic_string();
    };
    json params;
    if (t->method == design::Method::kBtc) {
      params = {{"zoom", options_.btc_zoom}, {"flicker_hz", options_.btc_flicker_hz}};
    } else {
      params = {{"zoom", 1.0}, {"min_toggles", options_.ptc_min_toggles}};
    }
    Reply(res, 200,
          {{"triplet_id", t->id},
           {"method", design::MethodName(t->method)},
           {"source_id", t->source_id},
           {"kind", design::KindName(t->kind)},
           {"left", {{"ref", t->left.ToString()}, {"url", url(t->left)}}},
           {"pivot", {{"ref", "SOURCE"}, {"url", url(design::StimulusRef::Source())}}},
           {"right", {{"ref", t->right.ToString()}, {"url", url(t->right)}}},
           {"params", params}});
  });

  srv.Post("/api/response", [this](const httplib::Request& req, httplib::Response& res) {
    auto p = store_->FindByToken(BearerToken(req));
    if (!p.ok()) return ReplyError(res, p.status());
    Response r;
    try {
      const json body = json::parse(req.body);
      r.participant_id = p->id;
      r.batch_id = body.at("batch_id").get<std::string>();
      r.triplet_id = body.at("triplet_id").get<std::string>();
      auto choice = ParseChoice(body.at("choice").get<std::string>());
      if (!choice.ok()) return ReplyError(res, choice.status());
      r.choice = *choice;
      r.response_time_ms = body.value("response_time_ms", int64_t{0});
      r.toggle_count = body.value("toggle_count", -1);
      r.submitted_at_ms = body.value("submitted_at_ms", int64_t{0});
    } catch (const json::exception& e) {
      return ReplyError(res, absl::InvalidArgumentError(e.what()));
    }
    if (r.submitted_at_ms == 0) r.submitted_at_ms = NowMs();
    auto ack = store_->RecordResponse(r);
    if (!ack.ok()) return ReplyError(res, ack.status());
    Reply(res, 200,
          {{"ack", true},
           {"duplicate", ack->duplicate},
           {"batch_completed", ack->batch_completed}});
  });

  srv.Get("/api/admin/export", [this](const httplib::Request& req, httplib::Response& res) {
    if (options_.admin_token.empty() || BearerToken(req) != options_.admin_token) {
      return ReplyError(res, absl::UnauthenticatedError("admin token required"));
    }
    std::optional<design::Method> filter;
    const std::string m = req.has_param("method") ? req.get_param_value("method") : "all";
    if (m != "all") {
      auto method = design::ParseMethod(m);
      if (!method.ok()) return ReplyError(res, method.status());
      filter = *method;
    }
    res.set_content(SerializeResponses(store_->Rows(filter), manifest_, true),
                    "text/tab-separated-values");
  });
}

absl::StatusOr<int> StudyService::Bind(const std::string& host, int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port(host.c_str());
    if (port_ < 0) return absl::UnavailableError("bind failed");
  } else {
    if (!server_->bind_to_port(host.c_str(), port)) {
      return absl::UnavailableError(absl::StrCat("cannot bind ", host, ":", port));
    }
    port_ = port;
  }
  return port_;
}

absl::Status StudyService::Serve() {
  if (!server_->listen_after_bind()) {
    return absl::UnavailableError("server stopped with an error");
  }
  return absl::OkStatus();
}

absl::Status StudyService::Listen(const std::string& host, int port) {
  auto bound = Bind(host, port);
  if (!bound.ok()) return bound.status();
  return Serve();
}

void StudyService::WaitUntilReady() const { server_->wait_until_ready(); }

void StudyService::Stop() {
  if (server_) server_->stop();
}

bool StudyService::IsRunning() const { return server_ && server_->is_running(); }

}  // namespace aic::store
