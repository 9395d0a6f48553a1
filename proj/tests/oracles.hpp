// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the srbeam authors
//
// Test-only reference implementations.  They deliberately take different
// routes than the library (adaptive Simpson instead of Gauss-Kronrod,
// integral representations instead of series/continued fractions) so the
// comparisons stay two-sided.

#ifndef SRBEAM_TESTS_ORACLES_HPP
#define SRBEAM_TESTS_ORACLES_HPP

#include <functional>

namespace srbeam::oracles {

// Recursive adaptive Simpson on [a, b].
double simpson(const std::function<double(double)>& f, double a, double b,
               double tol);

// E1(z) = int_z^inf e^{-t}/t dt for z > 0, by quadrature.
double e1(double z);

// int_0^inf e^{-x} log2(1 + beta x) dx, by quadrature.
double bd_rate(double beta);

// e^{-x} I_0(x) from the integral form (1/pi) int_0^pi e^{x(cos t - 1)} dt.
double i0_scaled(double x);

// Moments of the noncentral chi-square density by quadrature.
double ncx2_mass(double lam, double sigma);
double ncx2_mean(double lam, double sigma);

// int_0^inf log2(1+x) f(x) dx for the same density.
double csr_rate(double lam, double sigma);

}  // namespace srbeam::oracles

#endif
