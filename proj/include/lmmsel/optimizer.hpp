#pragma once

#include "lmmsel/model.hpp"

#include <functional>
#include <string>
#include <vector>

namespace lmmsel {

struct OptimizerOptions {
  int max_iters = 500;
  double grad_tol = 1e-6;   // sup-norm of the projected gradient
  double step_tol = 1e-10;  // relative sup-norm of an accepted step
  double fd_step = 1e-6;    // central difference step, scaled by (1 + |x_i|)
  int memory = 10;          // number of stored secant pairs
  bool auto_scale = true;   // rescale coordinates by sqrt of diagonal curvature at x0
};

struct OptimizerResult {
  Vector x;
  double f = 0.0;
  bool converged = false;
  int iterations = 0;
  int evaluations = 0;
  std::string status;
  std::vector<double> trace;  // objective at every accepted iterate, x0 first
};

/// Objective returning +inf (or NaN) for points it cannot evaluate; such
/// points are rejected during line search and finite differencing.
using Objective = std::function<double(const Vector&)>;

/// Minimizes objective over the box [lower, upper] with a projected
/// limited-memory BFGS method and finite-difference gradients. Bounds may be
/// infinite. Every accepted iterate lies in the box and the accepted
/// objective values are non-increasing.
OptimizerResult minimize(const Objective& objective, const Vector& x0, const Vector& lower,
                         const Vector& upper, const OptimizerOptions& opts = {});

/// Same without bounds.
OptimizerResult minimize(const Objective& objective, const Vector& x0,
                         const OptimizerOptions& opts = {});

/// Central differences with step fd_step * (1 + |x_i|); one-sided at a bound
/// or next to a point where the objective is not finite. fx is objective(x).
Vector fd_gradient(const Objective& objective, const Vector& x, const Vector& lower,
                   const Vector& upper, double fd_step, double fx);

}  // namespace lmmsel
