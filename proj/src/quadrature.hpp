// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the srbeam authors

#ifndef SRBEAM_QUADRATURE_HPP
#define SRBEAM_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace srbeam::specfun {

// Adaptive Gauss-Kronrod (7-15) settings.  node_count is the panel budget:
// the integrator keeps bisecting the worst panel until the summed error
// estimate meets the tolerances or the budget is exhausted.
struct Quadrature {
  int node_count = 1024;
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;

  void validate() const;  // node_count >= 16, tolerances > 0
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
  int panels = 0;
};

QuadResult integrate(const std::function<double(double)>& f, double lo,
                     double hi, const Quadrature& q = {});

// Same integrator seeded with explicit initial panel boundaries; use when
// the integrand concentrates in a narrow region of the interval so the
// first error estimates cannot alias past it.
QuadResult integrate_segmented(const std::function<double(double)>& f,
                               const std::vector<double>& breakpoints,
                               const Quadrature& q = {});

}  // namespace srbeam::specfun

#endif
