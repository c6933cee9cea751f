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
#ifndef AIC_SCALE_OPTIMIZER_H_
#define AIC_SCALE_OPTIMIZER_H_

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace aic::scale {

// Returns f(x); fills `gradient` when it is non-empty. Non-finite values
// mark x as infeasible.
using Objective =
    std::function<double(std::span<const double> x, std::span<double> gradient)>;

struct MinimizeOptions {
  int max_iterations = 500;
  double function_tolerance = 1e-12;
  double gradient_tolerance = 1e-9;
  double parameter_tolerance = 1e-10;
  int simplex_max_evaluations = 40000;
};

struct MinimizeResult {
  std::vector<double> x;
  double value = 0;
  int iterations = 0;
  bool converged = false;
  // The quasi-Newton line search failed and the simplex search took over.
  bool used_fallback = false;
  std::string termination;
};

// BFGS with a Wolfe line search (Ceres). Falls back to Nelder-Mead from the
// best point reached when the line search fails.
MinimizeResult MinimizeQuasiNewton(const Objective& objective, std::vector<double> x0,
                                   const MinimizeOptions& options);

// Derivative-free simplex search with adaptive coefficients.
MinimizeResult MinimizeNelderMead(const Objective& objective, std::vector<double> x0,
                                  const MinimizeOptions& options);

}  // namespace aic::scale

#endif  // AIC_SCALE_OPTIMIZER_H_
