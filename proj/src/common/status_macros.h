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

#ifndef AIC_COMMON_STATUS_MACROS_H_
#define AIC_COMMON_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define AIC_CONCAT_INNER_(a, b) a##b
#define AIC_CONCAT_(a, b) AIC_CONCAT_INNER_(a, b)

#define AIC_RETURN_IF_ERROR(expr)              \
  do {                                         \
    absl::Status aic_status_ = (expr);         \
    if (!aic_status_.ok()) return aic_status_; \
  } while (0)

#define AIC_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, expr) \
  auto tmp = (expr);                               \
  if (!tmp.ok()) return tmp.status();              \
  lhs = std::move(tmp).value()

#define AIC_ASSIGN_OR_RETURN(lhs, expr) \
  AIC_ASSIGN_OR_RETURN_IMPL_(AIC_CONCAT_(aic_statusor_, __LINE__), lhs, expr)

#endif  // AIC_COMMON_STATUS_MACROS_H_
