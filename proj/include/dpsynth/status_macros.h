//
// Copyright 2026 The dpsynth Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DPSYNTH_STATUS_MACROS_H_
#define DPSYNTH_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define DPSYNTH_CONCAT_INNER_(x, y) x##y
#define DPSYNTH_CONCAT_(x, y) DPSYNTH_CONCAT_INNER_(x, y)

// Returns early from the enclosing function if `expr` is not OK.
#define RETURN_IF_ERROR(expr)                    \
  do {                                           \
    const absl::Status _dpsynth_status = (expr); \
    if (!_dpsynth_status.ok()) {                 \
      return _dpsynth_status;                    \
    }                                            \
  } while (0)

// Evaluates `rexpr` (an absl::StatusOr<T>), returns its status on error and
// otherwise move-assigns the value to `lhs`.
#define ASSIGN_OR_RETURN(lhs, rexpr)                                         \
  ASSIGN_OR_RETURN_IMPL_(DPSYNTH_CONCAT_(_dpsynth_statusor_, __LINE__), lhs, \
                         rexpr)

#define ASSIGN_OR_RETURN_IMPL_(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                           \
  if (!statusor.ok()) {                              \
    return statusor.status();                        \
  }                                                  \
  lhs = std::move(statusor).value()

#endif  // DPSYNTH_STATUS_MACROS_H_
