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
#ifndef AIC_STORE_SERVICE_H_
#define AIC_STORE_SERVICE_H_

#include <filesystem>
#include <memory>
#include <string>

#include "absl/status/status.h"
#include "catalog/manifest.h"
#include "store/store.h"

namespace httplib {
class Server;
}

namespace aic::store {

struct ServiceOptions {
  // Bearer token for /api/admin/*. Empty disables the admin endpoints.
  std::string admin_token;
  // Directory served under /assets/; defaults to the manifest directory.
  std::filesystem::path asset_root;
  double btc_zoom = 2.0;
  double btc_flicker_hz = 10.0;
  int ptc_min_toggles = 1;
};

// JSON-over-HTTP front end of a ResponseStore.
//
//   POST /api/enroll          {"method": "btc"|"ptc"} -> {participant_id, token}
//   POST /api/next-batch      (bearer) -> {batch_id, method, questions[]}
//   GET  /api/triplet?id=...  -> image URLs and method parameters
//   POST /api/response        (bearer) {batch_id, triplet_id, choice,
//                             response_time_ms, toggle_count} -> {ack, duplicate}
//   GET  /api/admin/export?method=btc|ptc|all  (admin bearer) -> response file
//   GET  /assets/...          stimulus images
class StudyService {
 public:
  StudyService(ResponseStore* store, const catalog::StudyManifest* manifest,
               ServiceOptions options);
  ~StudyService();

  // Blocks until Stop(). Port 0 binds an ephemeral port, see port().
  absl::Status Listen(const std::string& host, int port);
  // Binds and returns the port without blocking; then call Serve().
  absl::StatusOr<int> Bind(const std::string& host, int port);
  absl::Status Serve();
  // Blocks until a concurrent Serve() accepts connections.
  void WaitUntilReady() const;
  void Stop();
  int port() const { return port_; }
  bool IsRunning() const;

 private:
  void Register();

  ResponseStore* store_;
  const catalog::StudyManifest* manifest_;
  ServiceOptions options_;
  std::unique_ptr<httplib::Server> server_;
  int port_ = 0;
};

}  // namespace aic::store

#endif  // AIC_STORE_SERVICE_H_
