// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the srbeam authors

#ifndef SRBEAM_SPECFUN_HPP
#define SRBEAM_SPECFUN_HPP

#include "quadrature.hpp"

namespace srbeam::specfun {

// Exponential integral Ei(x) on the negative axis (x < 0 strictly).
// Series for |x| < 6, continued fraction for |x| >= 6.
double exp_integral_ei(double x);

// e^z * E1(z) for z > 0.  Stable for arbitrarily large z (no underflow);
// this is the form the closed-form backscatter rate actually needs.
double e1_scaled(double z);

// e^{-x} * I_0(x) for x >= 0.  Power series below x = 20, asymptotic
// expansion above; bounded in (0, 1] for all finite x.
double bessel_i0_scaled(double x);

// ln(x) - Ei(-x) for x > 0 (expected log of a noncentral chi-square with
// two degrees of freedom, per-component variance 1/2, noncentrality x).
double q1(double x);

// Density of |Z|^2 where Z is complex Gaussian with |mean|^2 = noncentrality
// and per-component variance component_variance.  Evaluated through the
// scaled Bessel so it cannot overflow at large noncentrality / variance.
double noncentral_chi2_pdf(double x, double noncentrality,
                           double component_variance);

// Closed-form backscatter rate E[log2(1 + beta |s|^2)], |s|^2 ~ Exp(1):
// -e^{1/beta} Ei(-1/beta) log2(e) for beta > 0, and 0 at beta = 0.
// Monotone increasing and concave in beta.
double psr_bd_rate_closed(double beta);

}  // namespace srbeam::specfun

#endif
