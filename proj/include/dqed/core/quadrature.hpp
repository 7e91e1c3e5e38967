#pragma once

#include <functional>
#include <vector>

#include "dqed/core/types.hpp"

namespace dqed::quad {

// Integrand filling `out` (preallocated, length m) with m complex values at x.
using VectorIntegrand = std::function<void(double x, VecXc& out)>;

struct Result {
  VecXc value;
  double error = 0.0;  // max-norm estimate over the components
  int intervals = 0;
  int evaluations = 0;
  bool converged = false;
};

struct Options {
  double abs_tol = 0.0;
  double rel_tol = 1e-12;
  int max_intervals = 400000;
};

// Globally adaptive Gauss–Kronrod (7/15) over the panels given by
// `breakpoints` (sorted, at least two). All components share one mesh and
// the worst component drives refinement.
Result adaptive_gk15(const VectorIntegrand& f, int m, const std::vector<double>& breakpoints,
                     const Options& opt);

// Fixed-order Gauss–Legendre nodes/weights on [a, b].
void gauss_legendre(int order, double a, double b, std::vector<double>& x, std::vector<double>& w);

}  // namespace dqed::quad
