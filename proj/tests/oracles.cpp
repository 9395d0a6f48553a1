// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the srbeam authors

#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

#include "specfun.hpp"

namespace srbeam::oracles {
namespace {

double simpson_step(const std::function<double(double)>& f, double a,
                    double fa, double b, double fb, double m, double fm,
                    double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double simpson(const std::function<double(double)>& f, double a, double b,
               double tol) {
  if (!(a < b)) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, fa, b, fb, m, fm, whole, tol, 60);
}

namespace {

// Piecewise adaptive Simpson over equal segments; integrands with features
// much narrower than the interval would alias past the plain version.
double simpson_segmented(const std::function<double(double)>& f, double a,
                         double b, int segments, double tol) {
  double acc = 0.0;
  for (int i = 0; i < segments; ++i) {
    const double lo = a + (b - a) * i / segments;
    const double hi = a + (b - a) * (i + 1) / segments;
    acc += simpson(f, lo, hi, tol / segments);
  }
  return acc;
}

}  // namespace

double e1(double z) {
  if (!(z > 0.0)) throw std::invalid_argument("oracle e1: z must be > 0");
  // The tail beyond z + 90 is below e^{-(z+90)}, negligible at any z of
  // interest relative to E1(z) ~ e^{-z}/z.
  return simpson([](double t) { return std::exp(-t) / t; }, z, z + 90.0,
                 1e-14 * std::exp(-z));
}

double bd_rate(double beta) {
  if (!(beta >= 0.0)) throw std::invalid_argument("oracle bd_rate: beta < 0");
  if (beta == 0.0) return 0.0;
  const double ln2 = std::log(2.0);
  const auto f = [beta, ln2](double x) {
    return std::exp(-x) * std::log1p(beta * x) / ln2;
  };
  // Dyadic splits resolve the fast rise near x ~ 1/beta at any beta.
  double acc = 0.0;
  double hi = 120.0;
  for (int k = 0; k < 60 && hi > 1e-14; ++k) {
    const double lo = hi * 0.5;
    acc += simpson(f, lo, hi, 1e-13);
    hi = lo;
  }
  acc += simpson(f, 0.0, hi, 1e-15);
  return acc;
}

double i0_scaled(double x) {
  if (!(x >= 0.0)) throw std::invalid_argument("oracle i0: x < 0");
  return simpson_segmented(
             [x](double t) { return std::exp(x * (std::cos(t) - 1.0)); }, 0.0,
             M_PI, 64, 1e-14) /
         M_PI;
}

namespace {

double ncx2_moment(double lam, double sigma, int order,
                   const std::function<double(double)>& weight) {
  const double window =
      lam + 2.0 * sigma + 44.0 * std::sqrt(2.0 * sigma * (lam + sigma));
  return simpson_segmented(
      [&](double x) {
        return weight(x) * std::pow(x, order) *
               specfun::noncentral_chi2_pdf(x, lam, sigma);
      },
      0.0, window, 96, 1e-11);
}

}  // namespace

double ncx2_mass(double lam, double sigma) {
  return ncx2_moment(lam, sigma, 0, [](double) { return 1.0; });
}

double ncx2_mean(double lam, double sigma) {
  return ncx2_moment(lam, sigma, 1, [](double) { return 1.0; });
}

double csr_rate(double lam, double sigma) {
  const double ln2 = std::log(2.0);
  return ncx2_moment(lam, sigma, 0,
                     [ln2](double x) { return std::log1p(x) / ln2; });
}

}  // namespace srbeam::oracles
