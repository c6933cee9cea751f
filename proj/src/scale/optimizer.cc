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
#include "scale/optimizer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "ceres/gradient_problem.h"
#include "ceres/gradient_problem_solver.h"

namespace aic::scale {

namespace {

class CeresObjective : public ceres::FirstOrderFunction {
 public:
  CeresObjective(const Objective* f, int n) : f_(f), n_(n) {}

  bool Evaluate(const double* x, double* cost, double* gradient) const override {
    std::span<const double> xs(x, static_cast<size_t>(n_));
    std::span<double> gs;
    if (gradient != nullptr) gs = std::span<double>(gradient, static_cast<size_t>(n_));
    *cost = (*f_)(xs, gs);
    if (!std::isfinite(*cost)) return false;
    if (gradient != nullptr) {
      for (int i = 0; i < n_; ++i) {
        if (!std::isfinite(gradient[i])) return false;
      }
    }
    return true;
  }
  int NumParameters() const override { return n_; }

 private:
  const Objective* f_;
  int n_;
};

double Value(const Objective& f, const std::vector<double>& x) {
  const double v = f(x, {});
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

// Ceres reports a line search that cannot make progress as convergence on
// the step size. A gradient that is still large marks such a stall.
bool Stalled(const Objective& f, const MinimizeResult& r) {
  std::vector<double> g(r.x.size());
  const double v = f(r.x, g);
  if (!std::isfinite(v)) return true;
  double norm = 0;
  for (double gi : g) norm = std::max(norm, std::abs(gi));
  return !(norm <= 1e-4 * std::max(1.0, std::abs(v)));
}

}  // namespace

MinimizeResult MinimizeQuasiNewton(const Objective& objective, std::vector<double> x0,
                                   const MinimizeOptions& options) {
  const int n = static_cast<int>(x0.size());
  MinimizeResult result;
  result.x = x0;
  // GradientProblem takes ownership of the function.
  ceres::GradientProblem problem(new CeresObjective(&objective, n));
  ceres::GradientProblemSolver::Options solver;
  solver.line_search_direction_type = ceres::BFGS;
  solver.line_search_type = ceres::WOLFE;
  solver.max_num_iterations = options.max_iterations;
  solver.function_tolerance = options.function_tolerance;
  solver.gradient_tolerance = options.gradient_tolerance;
  solver.parameter_tolerance = options.parameter_tolerance;
  solver.logging_type = ceres::SILENT;
  solver.minimizer_progress_to_stdout = false;
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(solver, problem, result.x.data(), &summary);

  result.iterations = static_cast<int>(summary.iterations.size());
  result.value = Value(objective, result.x);
  result.termination = ceres::TerminationTypeToString(summary.termination_type);
  if (summary.termination_type == ceres::CONVERGENCE && !Stalled(objective, result)) {
    result.converged = true;
    return result;
  }
  if (summary.termination_type == ceres::NO_CONVERGENCE) return result;

  // Line search failure or stall: continue derivative-free.
  std::vector<double> start = std::isfinite(result.value) ? result.x : x0;
  MinimizeResult simplex = MinimizeNelderMead(objective, std::move(start), options);
  simplex.iterations += result.iterations;
  simplex.used_fallback = true;
  if (!(simplex.value <= result.value) && std::isfinite(result.value)) {
    result.used_fallback = true;
    return result;
  }
  return simplex;
}

MinimizeResult MinimizeNelderMead(const Objective& objective, std::vector<double> x0,
                                  const MinimizeOptions& options) {
  const size_t n = x0.size();
  // Adaptive coefficients (Gao & Han) behave better than the classic ones
  // beyond a handful of dimensions.
  const double dim = static_cast<double>(n);
  const double reflect = 1.0;
  const double expand = 1.0 + 2.0 / dim;
  const double contract = 0.75 - 1.0 / (2.0 * dim);
  const double shrink = 1.0 - 1.0 / dim;

  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (size_t i = 0; i < n; ++i) {
    simplex[i + 1][i] += x0[i] != 0 ? 0.1 * std::abs(x0[i]) + 0.05 : 0.1;
  }
  std::vector<double> values(n + 1);
  int evaluations = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evaluations;
    return Value(objective, x);
  };
  for (size_t i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

  MinimizeResult result;
  std::vector<size_t> order(n + 1);
  int iterations = 0;
  while (evaluations < options.simplex_max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return values[a] < values[b]; });
    const size_t best = order.front();
    const size_t worst = order.back();
    const size_t second_worst = order[n - 1];
    double spread = 0;
    for (size_t i = 0; i <= n; ++i) {
      for (size_t j = 0; j < n; ++j) {
        spread = std::max(spread, std::abs(simplex[i][j] - simplex[best][j]));
      }
    }
    if (std::abs(values[worst] - values[best]) <=
            options.function_tolerance * (1.0 + std::abs(values[best])) &&
        spread <= std::sqrt(options.parameter_tolerance)) {
      result.converged = true;
      break;
    }
    ++iterations;
    std::vector<double> centroid(n, 0.0);
    for (size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / dim;
    }
    auto along = [&](double t) {
      std::vector<double> x(n);
      for (size_t j = 0; j < n; ++j) x[j] = centroid[j] + t * (simplex[worst][j] - centroid[j]);
      return x;
    };
    std::vector<double> xr = along(-reflect);
    const double fr = eval(xr);
    if (fr < values[best]) {
      std::vector<double> xe = along(-reflect * expand);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[worst] = std::move(xe);
        values[worst] = fe;
      } else {
        simplex[worst] = std::move(xr);
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second_worst]) {
      simplex[worst] = std::move(xr);
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    std::vector<double> xc = along(outside ? -reflect * contract : contract);
    const double fc = eval(xc);
    if (fc < (outside ? fr : values[worst])) {
      simplex[worst] = std::move(xc);
      values[worst] = fc;
      continue;
    }
    for (size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (size_t j = 0; j < n; ++j) {
        simplex[i][j] = simplex[best][j] + shrink * (simplex[i][j] - simplex[best][j]);
      }
      values[i] = eval(simplex[i]);
    }
  }
  const size_t best = static_cast<size_t>(
      std::min_element(values.begin(), values.end()) - values.begin());
  result.x = simplex[best];
  result.value = values[best];
  result.iterations = iterations;
  result.termination = result.converged ? "SIMPLEX_CONVERGENCE" : "SIMPLEX_MAX_EVALUATIONS";
  return result;
}

}  // namespace aic::scale
