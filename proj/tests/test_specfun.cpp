// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the srbeam authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <doctest.h>

#include "oracles.hpp"
#include "rng.hpp"
#include "specfun.hpp"

using namespace srbeam;

TEST_CASE("exponential integral on the negative axis") {
  // Frozen against the quadrature oracle (and recomputed below).
  CHECK(specfun::exp_integral_ei(-1.0) ==
        doctest::Approx(-0.21938393439552027).epsilon(1e-12));
  CHECK(specfun::exp_integral_ei(-0.5) ==
        doctest::Approx(-0.55977359477616081).epsilon(1e-12));
  CHECK(std::abs(specfun::exp_integral_ei(-50.0)) < 1e-20);

  for (const double z : {0.05, 0.3, 1.0, 2.5, 5.9, 6.1, 9.0, 25.0, 80.0}) {
    const double ref = -oracles::e1(z);
    CHECK(specfun::exp_integral_ei(-z) ==
          doctest::Approx(ref).epsilon(1e-11));
  }

  // Strictly negative and monotone decreasing on the axis: the value falls
  // away from 0- as x approaches 0 (derivative e^x / x < 0).
  double prev = specfun::exp_integral_ei(-30.0);
  for (double z = 29.0; z >= 0.25; z -= 0.25) {
    const double cur = specfun::exp_integral_ei(-z);
    CHECK(cur < 0.0);
    CHECK(cur < prev);
    prev = cur;
  }

  CHECK_THROWS_AS(specfun::exp_integral_ei(0.0), std::domain_error);
  CHECK_THROWS_AS(specfun::exp_integral_ei(1.0), std::domain_error);
  CHECK_THROWS_AS(specfun::exp_integral_ei(std::nan("")), std::domain_error);
}

TEST_CASE("scaled Bessel I0") {
  CHECK(specfun::bessel_i0_scaled(0.0) == 1.0);
  CHECK(specfun::bessel_i0_scaled(1.0) ==
        doctest::Approx(0.46575960759364044).epsilon(1e-13));

  const double big = specfun::bessel_i0_scaled(700.0);
  CHECK(std::isfinite(big));
  CHECK(big > 0.0);
  CHECK(big == doctest::Approx(0.015081295651531358).epsilon(1e-11));

  for (double x = 0.01; x <= 1000.0; x *= 2.3) {
    CHECK(specfun::bessel_i0_scaled(x) ==
          doctest::Approx(oracles::i0_scaled(x)).epsilon(1e-11));
    CHECK(specfun::bessel_i0_scaled(x) <= 1.0);
    CHECK(specfun::bessel_i0_scaled(x) > 0.0);
  }
  // Series/asymptotic handover.
  CHECK(specfun::bessel_i0_scaled(std::nextafter(20.0, 21.0)) ==
        doctest::Approx(specfun::bessel_i0_scaled(20.0)).epsilon(1e-13));

  CHECK_THROWS_AS(specfun::bessel_i0_scaled(-1e-9), std::domain_error);
  CHECK_THROWS_AS(specfun::bessel_i0_scaled(std::nan("")), std::domain_error);
}

TEST_CASE("q1") {
  CHECK(specfun::q1(1.0) ==
        doctest::Approx(0.21938393439552027).epsilon(1e-12));
  CHECK(specfun::q1(0.5) ==
        doctest::Approx(-0.13337358578378450).epsilon(1e-12));
  CHECK(specfun::q1(0.1) ==
        doctest::Approx(-0.47966113457465501).epsilon(1e-12));
  // q1(x) - ln(x) -> 0 as the exponential-integral term dies away.
  CHECK(std::abs(specfun::q1(1e4) - std::log(1e4)) < 1e-15);
  CHECK_THROWS_AS(specfun::q1(0.0), std::domain_error);
  CHECK_THROWS_AS(specfun::q1(-1.0), std::domain_error);
}

TEST_CASE("q1 matches the expected log of a noncentral chi-square") {
  // Two-dof draws with per-component variance 1/2 and noncentrality x.
  for (const double x : {0.1, 1.0, 10.0}) {
    Xoshiro256pp rng(20260810);
    const double mu = std::sqrt(x);
    const double sd = std::sqrt(0.5);
    const std::int64_t n = 1'000'000;
    double sum = 0.0, sumsq = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      const double a = mu + sd * rng.gaussian();
      const double b = sd * rng.gaussian();
      const double v = std::log(a * a + b * b);
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / n;
    const double se =
        std::sqrt(std::max(0.0, (sumsq - mean * mean * n) / (n - 1.0)) / n);
    CHECK(std::abs(mean - specfun::q1(x)) < 3.0 * se);
  }
}

TEST_CASE("noncentral chi-square density") {
  // Central case degenerates to the exponential density.
  for (const double x : {0.0, 0.5, 2.0, 7.0}) {
    const double sigma = 1.3;
    CHECK(specfun::noncentral_chi2_pdf(x, 0.0, sigma) ==
          doctest::Approx(0.5 / sigma * std::exp(-0.5 * x / sigma))
              .epsilon(1e-14));
  }

  CHECK(oracles::ncx2_mass(4.0, 1.0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(oracles::ncx2_mean(4.0, 1.0) == doctest::Approx(6.0).epsilon(1e-6));

  // No overflow where the naive form would blow up.
  const double dens = specfun::noncentral_chi2_pdf(3000.0, 3000.0, 1.0);
  CHECK(std::isfinite(dens));
  CHECK(dens > 0.0);

  CHECK_THROWS_AS(specfun::noncentral_chi2_pdf(-1.0, 1.0, 1.0),
                  std::domain_error);
  CHECK_THROWS_AS(specfun::noncentral_chi2_pdf(1.0, -1.0, 1.0),
                  std::domain_error);
  CHECK_THROWS_AS(specfun::noncentral_chi2_pdf(1.0, 1.0, 0.0),
                  std::domain_error);
}

TEST_CASE("noncentral density: random-parameter normalization and mean") {
  Xoshiro256pp rng(77);
  for (int i = 0; i < 200; ++i) {
    const double lam = 100.0 * rng.uniform();
    const double sigma = 0.01 + 9.99 * rng.uniform();
    CHECK(oracles::ncx2_mass(lam, sigma) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(oracles::ncx2_mean(lam, sigma) ==
          doctest::Approx(lam + 2.0 * sigma).epsilon(1e-4));
  }
}

TEST_CASE("closed-form backscatter rate") {
  CHECK(specfun::psr_bd_rate_closed(0.0) == 0.0);
  CHECK(specfun::psr_bd_rate_closed(1.0) ==
        doctest::Approx(0.86034738227088595).epsilon(1e-12));
  CHECK(specfun::psr_bd_rate_closed(10.0) ==
        doctest::Approx(2.90651480841480498).epsilon(1e-12));

  // Quadrature agreement across ten decades.
  for (int i = 0; i < 50; ++i) {
    const double beta = std::pow(10.0, -4.0 + 8.0 * i / 49.0);
    CHECK(std::abs(specfun::psr_bd_rate_closed(beta) -
                   oracles::bd_rate(beta)) < 1e-7);
  }

  CHECK_THROWS_AS(specfun::psr_bd_rate_closed(-0.1), std::domain_error);
  CHECK_THROWS_AS(specfun::psr_bd_rate_closed(std::nan("")),
                  std::domain_error);
}

TEST_CASE("closed-form rate is monotone and midpoint concave") {
  double prev = 0.0;
  for (int i = 0; i < 120; ++i) {
    const double beta = std::pow(10.0, -5.0 + 10.0 * i / 119.0);
    const double r = specfun::psr_bd_rate_closed(beta);
    CHECK(r > prev);
    prev = r;
  }
  Xoshiro256pp rng(4242);
  for (int i = 0; i < 300; ++i) {
    const double b1 = std::pow(10.0, -4.0 + 8.0 * rng.uniform());
    const double b2 = std::pow(10.0, -4.0 + 8.0 * rng.uniform());
    const double mid = specfun::psr_bd_rate_closed(0.5 * (b1 + b2));
    const double chord = 0.5 * (specfun::psr_bd_rate_closed(b1) +
                                specfun::psr_bd_rate_closed(b2));
    CHECK(mid >= chord - 1e-12);
  }
}

TEST_CASE("quadrature plumbing") {
  CHECK_THROWS_AS(specfun::integrate([](double x) { return x; }, 0.0, 1.0,
                                     specfun::Quadrature{8, 1e-10, 1e-10}),
                  std::invalid_argument);
  CHECK_THROWS_AS(specfun::integrate([](double x) { return x; }, 0.0, 1.0,
                                     specfun::Quadrature{64, 0.0, 1e-10}),
                  std::invalid_argument);

  const auto r1 =
      specfun::integrate([](double x) { return x * x; }, 0.0, 1.0, {});
  CHECK(r1.converged);
  CHECK(r1.value == doctest::Approx(1.0 / 3.0).epsilon(1e-13));

  const auto r2 =
      specfun::integrate([](double x) { return std::exp(-x); }, 0.0, 50.0, {});
  CHECK(r2.converged);
  CHECK(r2.value == doctest::Approx(1.0).epsilon(1e-12));
}
