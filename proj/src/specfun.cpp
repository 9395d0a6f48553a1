// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the srbeam authors

#include "specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace srbeam::specfun {
namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240;
constexpr double kLog2E = 1.4426950408889634073599246810019;

// E1(z) for 0 < z < 6 from the Ei power series:
//   Ei(-z) = gamma + ln z + sum_k (-z)^k / (k k!),  E1(z) = -Ei(-z).
double e1_series(double z) {
  double sum = 0.0;
  double term = 1.0;  // (-z)^k / k!
  for (int k = 1; k < 80; ++k) {
    term *= -z / k;
    const double contrib = term / k;
    sum += contrib;
    if (std::abs(contrib) < 1e-18 * (std::abs(sum) + 1e-300)) break;
  }
  return -(kEulerGamma + std::log(z) + sum);
}

// Modified Lentz continued fraction for e^z E1(z); reliable for z >= 2,
// used from z >= 6 where it converges within ~25 terms.
double e1_cf_scaled(double z) {
  constexpr double tiny = 1e-300;
  double b = z + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 200; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = a * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return h;
}

}  // namespace

double e1_scaled(double z) {
  if (!(z > 0.0) || !std::isfinite(z))
    throw std::domain_error("e1_scaled: requires finite z > 0");
  if (z < 6.0) return std::exp(z) * e1_series(z);
  return e1_cf_scaled(z);
}

double exp_integral_ei(double x) {
  if (!std::isfinite(x) || x >= 0.0)
    throw std::domain_error("exp_integral_ei: requires finite x < 0");
  const double z = -x;
  if (z < 6.0) return -e1_series(z);
  // -e^{-z} * (e^z E1(z)); underflows to -0 below x ~ -745.
  return -std::exp(-z) * e1_cf_scaled(z);
}

double bessel_i0_scaled(double x) {
  if (!std::isfinite(x) || x < 0.0)
    throw std::domain_error("bessel_i0_scaled: requires finite x >= 0");
  if (x <= 20.0) {
    // sum_m ((x/2)^2)^m / (m!)^2, all terms positive.
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int m = 1; m < 120; ++m) {
      term *= q / (static_cast<double>(m) * m);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return std::exp(-x) * sum;
  }
  // Asymptotic series: e^{-x} I_0(x) ~ (2 pi x)^{-1/2} sum_k t_k,
  // t_0 = 1, t_{k+1} = t_k ((2k+1)^2) / (8 x (k+1)).
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 40; ++k) {
    const double next =
        term * ((2.0 * k + 1.0) * (2.0 * k + 1.0)) / (8.0 * x * (k + 1.0));
    if (next >= term) break;  // divergent tail of the asymptotic series
    term = next;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum / std::sqrt(2.0 * M_PI * x);
}

double q1(double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw std::domain_error("q1: requires finite x > 0");
  // ln x - Ei(-x); the Ei term through the scaled route for large x.
  if (x < 6.0) return std::log(x) + e1_series(x);
  return std::log(x) + std::exp(-x) * e1_cf_scaled(x);
}

double noncentral_chi2_pdf(double x, double noncentrality,
                           double component_variance) {
  if (!(x >= 0.0) || !std::isfinite(x))
    throw std::domain_error("noncentral_chi2_pdf: x must be >= 0");
  if (!(noncentrality >= 0.0) || !std::isfinite(noncentrality))
    throw std::domain_error("noncentral_chi2_pdf: noncentrality must be >= 0");
  if (!(component_variance > 0.0) || !std::isfinite(component_variance))
    throw std::domain_error("noncentral_chi2_pdf: variance must be > 0");
  const double sigma = component_variance;
  // (1/2S) exp(-(x+l)/2S) I0(sqrt(x l)/S)
  //   = (1/2S) exp(-(sqrt(x)-sqrt(l))^2 / 2S) * [e^{-a} I0(a)],
  // with a = sqrt(x l)/S; the grouped exponent never overflows.
  const double d = std::sqrt(x) - std::sqrt(noncentrality);
  const double a = std::sqrt(x * noncentrality) / sigma;
  return 0.5 / sigma * std::exp(-0.5 * d * d / sigma) * bessel_i0_scaled(a);
}

double psr_bd_rate_closed(double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw std::domain_error("psr_bd_rate_closed: requires finite beta >= 0");
  if (beta == 0.0) return 0.0;  // continuity at zero backscatter SNR
  return kLog2E * e1_scaled(1.0 / beta);
}

}  // namespace srbeam::specfun
