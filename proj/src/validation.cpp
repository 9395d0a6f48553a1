// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the srbeam authors

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "harness.hpp"
#include "rng.hpp"
#include "specfun.hpp"

namespace srbeam::harness {

using channel::ChannelRealization;
using channel::SystemParams;

namespace {

constexpr double kLn2 = 0.69314718055994530941723212145818;

// Tabulated CDF of the noncentral chi-square (2 dof) by cumulative Simpson
// integration of the density over the concentration window.
struct CdfTable {
  std::vector<double> x, cdf;

  static CdfTable build(double lam, double sigma, int panels) {
    const double window =
        lam + 2.0 * sigma + 40.0 * std::sqrt(2.0 * sigma * (lam + sigma));
    CdfTable t;
    t.x.resize(panels + 1);
    t.cdf.resize(panels + 1);
    const double h = window / panels;
    double acc = 0.0;
    double f_lo = specfun::noncentral_chi2_pdf(0.0, lam, sigma);
    t.x[0] = 0.0;
    t.cdf[0] = 0.0;
    for (int i = 0; i < panels; ++i) {
      const double a = i * h;
      const double b = a + h;
      const double f_mid = specfun::noncentral_chi2_pdf(a + 0.5 * h, lam, sigma);
      const double f_hi = specfun::noncentral_chi2_pdf(b, lam, sigma);
      acc += h / 6.0 * (f_lo + 4.0 * f_mid + f_hi);
      t.x[i + 1] = b;
      t.cdf[i + 1] = std::min(acc, 1.0);
      f_lo = f_hi;
    }
    return t;
  }

  double operator()(double v) const {
    if (v <= 0.0) return 0.0;
    if (v >= x.back()) return 1.0;
    const auto it = std::upper_bound(x.begin(), x.end(), v);
    const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
    const double w = (v - x[i]) / (x[i + 1] - x[i]);
    return std::min(1.0, cdf[i] + w * (cdf[i + 1] - cdf[i]));
  }
};

double ks_statistic(std::vector<double>& samples, const CdfTable& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

struct Battery {
  const ExperimentConfig& cfg;
  ValidationReport report;

  // measured <= tolerance passes; the mutation hook force-breaks the named
  // check so the reporting path itself stays testable.
  void check(const std::string& name, double measured, double tolerance,
             const std::string& details) {
    if (cfg.mutation == name) measured = std::abs(measured) + 10.0 * tolerance + 1.0;
    report.checks.push_back(
        {name, measured <= tolerance, tolerance, measured, details});
  }
};

SystemParams fixture_params(int antennas, double power, int spreading) {
  SystemParams p;
  p.antennas = antennas;
  p.transmit_power = power;
  p.noise_power = 1.0;
  p.reflection = 0.5;
  p.spreading = spreading;
  p.weight = 0.5;
  return p;
}

channel::Beamformer random_unit(const ChannelRealization& ch,
                                Xoshiro256pp& rng) {
  channel::cvec w(ch.antennas());
  for (int i = 0; i < ch.antennas(); ++i) w(i) = rng.cscg();
  return channel::Beamformer::canonical(w, ch);
}

void check_specfun(Battery& b) {
  // Closed form against direct quadrature of the exponential average (the
  // dyadic cuts resolve the fast rise near x ~ 1/beta).
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double beta = std::pow(10.0, -4.0 + 8.0 * i / 49.0);
    const auto integrand = [beta](double x) {
      return std::exp(-x) * std::log1p(beta * x) / kLn2;
    };
    std::vector<double> cuts{0.0};
    for (int k = 49; k >= 0; --k) cuts.push_back(120.0 * std::pow(0.5, k));
    specfun::Quadrature q{4096, 1e-11, 1e-11};
    const double ref = specfun::integrate_segmented(integrand, cuts, q).value;
    worst = std::max(worst,
                     std::abs(specfun::psr_bd_rate_closed(beta) - ref));
  }
  b.check("bd_rate_closed_vs_quadrature", worst, 1e-7,
          "max |closed - quadrature| over 50 log-spaced beta in [1e-4, 1e4]");

  // Density normalization and mean over random parameter draws.
  Xoshiro256pp rng(b.cfg.seed + 11);
  double worst_mass = 0.0, worst_mean = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double lam = 100.0 * rng.uniform();
    const double sigma = 0.01 + 9.99 * rng.uniform();
    const double window =
        lam + 2.0 * sigma + 40.0 * std::sqrt(2.0 * sigma * (lam + sigma));
    const double width = std::sqrt(2.0 * sigma * (lam + sigma));
    std::vector<double> cuts{0.0};
    for (const double k : {-40.0, -10.0, -2.0, 0.0, 2.0, 10.0, 40.0}) {
      const double x = lam + k * width;
      if (x > cuts.back() + 1e-12 * window && x < window) cuts.push_back(x);
    }
    cuts.push_back(window);
    specfun::Quadrature q{2048, 1e-10, 1e-10};
    const double mass =
        specfun::integrate_segmented(
            [&](double x) { return specfun::noncentral_chi2_pdf(x, lam, sigma); },
            cuts, q)
            .value;
    const double mean =
        specfun::integrate_segmented(
            [&](double x) {
              return x * specfun::noncentral_chi2_pdf(x, lam, sigma);
            },
            cuts, q)
            .value;
    worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
    worst_mean = std::max(
        worst_mean, std::abs(mean - (lam + 2.0 * sigma)) / (lam + 2.0 * sigma));
  }
  b.check("ncx2_normalization", worst_mass, 1e-6,
          "max |integral - 1| over 1000 random (noncentrality, variance)");
  b.check("ncx2_mean", worst_mean, 1e-4,
          "max relative deviation of the mean from noncentrality + 2 variance");

  // Expected-log identity against Monte Carlo draws (variance-1/2 parts).
  double worst_sigmas = 0.0;
  for (const double x : {0.1, 1.0, 10.0}) {
    Xoshiro256pp mc(b.cfg.seed + 17);
    const double mu = std::sqrt(x);
    const double sd = std::sqrt(0.5);
    const std::int64_t n = 1'000'000;
    double sum = 0.0, sumsq = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      const double a = mu + sd * mc.gaussian();
      const double bb = sd * mc.gaussian();
      const double v = std::log(a * a + bb * bb);
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / n;
    const double se =
        std::sqrt(std::max(0.0, (sumsq - mean * mean * n) / (n - 1.0)) / n);
    worst_sigmas =
        std::max(worst_sigmas, std::abs(mean - specfun::q1(x)) / (3.0 * se));
  }
  b.check("q1_log_identity", worst_sigmas, 1.0,
          "max |MC mean log - q1| in units of 3 standard errors, x in {0.1,1,10}");

  // Monotone increasing and midpoint concave.
  double margin = 0.0;
  double prev = specfun::psr_bd_rate_closed(1e-3);
  Xoshiro256pp pick(b.cfg.seed + 23);
  for (int i = 1; i < 40; ++i) {
    const double beta = std::pow(10.0, -3.0 + 6.0 * i / 39.0);
    const double r = specfun::psr_bd_rate_closed(beta);
    margin = std::max(margin, prev - r);
    prev = r;
  }
  for (int i = 0; i < 200; ++i) {
    const double b1 = 1e-3 * std::pow(10.0, 6.0 * pick.uniform());
    const double b2 = 1e-3 * std::pow(10.0, 6.0 * pick.uniform());
    const double lhs = specfun::psr_bd_rate_closed(0.5 * (b1 + b2));
    const double rhs = 0.5 * (specfun::psr_bd_rate_closed(b1) +
                              specfun::psr_bd_rate_closed(b2));
    margin = std::max(margin, rhs - lhs);
  }
  b.check("bd_rate_monotone_concave", margin, 1e-12,
          "max violation of monotonicity / midpoint concavity");
}

void check_distribution(Battery& b) {
  double worst = 0.0;
  for (int fix = 0; fix < 5; ++fix) {
    const SystemParams p = fixture_params(2, 10.0, 128);
    const ChannelRealization ch =
        channel::generate(p, -10.0, Xoshiro256pp::derive(b.cfg.seed, 40 + fix));
    Xoshiro256pp rng(Xoshiro256pp::derive(b.cfg.seed, 60 + fix));
    const auto w = random_unit(ch, rng);
    const auto snr = rates::decompose(ch, w, p);
    const CdfTable cdf = CdfTable::build(snr.direct_snr,
                                         0.5 * snr.backscatter_snr, 1 << 16);
    const std::complex<double> u = ch.direct.dot(w.vec());
    const std::complex<double> tv =
        std::conj(std::sqrt(p.reflection) * ch.backward) *
        ch.forward.dot(w.vec());
    const std::int64_t n = 1'000'000;
    std::vector<double> samples(n);
    for (std::int64_t i = 0; i < n; ++i)
      samples[i] = p.transmit_power *
                   std::norm(u + std::conj(rng.cscg()) * tv) / p.noise_power;
    const double d = ks_statistic(samples, cdf);
    worst = std::max(worst, d * std::sqrt(static_cast<double>(n)) / 1.6276);
  }
  b.check("csr_distribution_ks", worst, 1.0,
          "max KS statistic relative to the 1% critical value, 5 fixtures");
}

void check_asymptotics(Battery& b) {
  double worst = 0.0, gain_min = 1.0;
  for (const double lam : {1e3, 1e4, 1e5}) {
    for (const double two_sigma : {lam / 100.0, lam / 10.0}) {
      const rates::SnrDecomposition snr{lam, two_sigma};
      const double exact = rates::csr_primary_rate_exact(snr).value;
      const double asym = rates::csr_primary_rate_asymptotic(snr);
      worst = std::max(worst, std::abs(asym - exact) / exact);
      gain_min = std::min(gain_min, asym - std::log2(lam));
    }
  }
  b.check("prop2_asymptotic_envelope", worst, 0.01,
          "max relative error of the high-SNR closed form");
  b.check("prop2_rate_gain_positive", gain_min > 0.0 ? 0.0 : 1.0, 0.5,
          "scattered-path rate gain strictly positive on the grid");
}

void check_span_restriction(Battery& b) {
  double worst = -1.0;
  beamform::SolverConfig sc = b.cfg.solver;
  sc.saa_samples = 500;
  int inst = 0;
  for (const int m : {2, 3, 4}) {
    for (int k = 0; k < 4; ++k, ++inst) {
      SystemParams p = fixture_params(m, 10.0, 1);
      const ChannelRealization ch = channel::generate(
          p, -10.0, Xoshiro256pp::derive(b.cfg.seed, 100 + inst));
      sc.seed = Xoshiro256pp::derive(b.cfg.seed, 200 + inst);
      const double reduced = beamform::solve_wsrm_psr(ch, p, sc).objective;
      const double full =
          beamform::sphere_search_wsrm(ch, p, sc, 20000).objective;
      worst = std::max(worst, full - reduced);

      SystemParams pc = fixture_params(m, 10.0, 128);
      const double reduced_c =
          beamform::solve_wsrm_csr(ch, pc, sc).saa_objective;
      const double full_c =
          beamform::sphere_search_wsrm(ch, pc, sc, 20000).objective;
      worst = std::max(worst, full_c - reduced_c);
    }
  }
  b.check("prop3_span_restriction", worst, 1e-3,
          "max excess of full-space random search over the reduced optimum");
}

void check_solver_vs_oracle(Battery& b) {
  beamform::SolverConfig sc = b.cfg.solver;
  sc.saa_samples = 500;
  double worst_rate = 0.0, worst_power = 0.0;
  for (int k = 0; k < 8; ++k) {
    SystemParams p = fixture_params(2, 10.0, 1);
    p.weight = 0.2 + 0.6 * (k / 7.0);
    const ChannelRealization ch =
        channel::generate(p, -10.0, Xoshiro256pp::derive(b.cfg.seed, 300 + k));
    sc.seed = Xoshiro256pp::derive(b.cfg.seed, 400 + k);

    worst_rate = std::max(
        worst_rate, std::abs(beamform::solve_wsrm_psr(ch, p, sc).objective -
                             beamform::grid_search_wsrm(ch, p, sc).objective));
    SystemParams pc = p;
    pc.spreading = 128;
    worst_rate = std::max(
        worst_rate,
        std::abs(beamform::solve_wsrm_csr(ch, pc, sc).saa_objective -
                 beamform::grid_search_wsrm(ch, pc, sc).objective));

    const double eps_s = 0.5 + k * 0.25;
    const double eps_c = 0.05 + 0.02 * k;
    const double solver_p =
        beamform::solve_tpm_psr(ch, eps_s, eps_c, p, sc).objective;
    const double oracle_p =
        beamform::grid_search_tpm(ch, eps_s, eps_c, p, sc).objective;
    worst_power =
        std::max(worst_power, std::abs(solver_p - oracle_p) / oracle_p);
    const double solver_pc =
        beamform::solve_tpm_csr(ch, eps_s, eps_c / 20.0, pc, sc).objective;
    const double oracle_pc =
        beamform::grid_search_tpm(ch, eps_s, eps_c / 20.0, pc, sc).objective;
    worst_power =
        std::max(worst_power, std::abs(solver_pc - oracle_pc) / oracle_pc);
  }
  b.check("solver_vs_oracle_wsrm", worst_rate, 2e-3,
          "max |solver - grid oracle| objective gap, PSR and CSR");
  b.check("solver_vs_oracle_tpm", worst_power, 1e-3,
          "max relative minimum-power gap, PSR and CSR");
}

void check_extraction(Battery& b) {
  const double p = 7.5;
  Eigen::Matrix2cd u;
  const double c = std::cos(0.7), s = std::sin(0.7);
  u << std::complex<double>(c, 0.0), std::complex<double>(-s, 0.1),
      std::complex<double>(s, 0.1), std::complex<double>(c, 0.0);
  Eigen::HouseholderQR<Eigen::Matrix2cd> qr(u);
  const Eigen::Matrix2cd q = qr.householderQ();
  Eigen::Matrix2cd relaxed =
      q * Eigen::Vector2d(0.7 * p, 0.3 * p).asDiagonal() * q.adjoint();
  const auto cands = beamform::phase_randomized_candidates(
      relaxed, 500, Xoshiro256pp::derive(b.cfg.seed, 500));
  double worst = 0.0;
  for (const auto& v : cands)
    worst = std::max(worst, std::abs(v.squaredNorm() - p) / p);
  b.check("extraction_power_preservation", worst, 1e-12,
          "max relative |v|^2 - trace deviation over 500 trials");
}

}  // namespace

ValidationReport run_validation(const ExperimentConfig& cfg) {
  cfg.validate();
  Battery b{cfg, {}};
  check_specfun(b);
  check_distribution(b);
  check_asymptotics(b);
  check_span_restriction(b);
  check_solver_vs_oracle(b);
  check_extraction(b);
  b.report.all_passed = true;
  for (const auto& c : b.report.checks) b.report.all_passed &= c.passed;
  return b.report;
}

}  // namespace srbeam::harness
