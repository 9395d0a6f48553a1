// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the srbeam authors

#include "rates.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "parallel.hpp"
#include "rng.hpp"
#include "specfun.hpp"

namespace srbeam::rates {
namespace {

constexpr double kLn2 = 0.69314718055994530941723212145818;

double log2_1p(double x) { return std::log1p(x) / kLn2; }

}  // namespace

SnrDecomposition decompose(const ChannelRealization& ch, const Beamformer& w,
                           const SystemParams& params) {
  params.validate();
  const double p = params.transmit_power;
  const double s2 = params.noise_power;
  const double direct = std::norm(ch.direct.dot(w.vec()));
  const double fwd = std::norm(ch.forward.dot(w.vec()));
  return {p * direct / s2,
          p * params.reflection * std::norm(ch.backward) * fwd / s2};
}

double psr_primary_rate(const ChannelRealization& ch, const Beamformer& w,
                        const SystemParams& params) {
  const SnrDecomposition snr = decompose(ch, w, params);
  return log2_1p(snr.direct_snr / (snr.backscatter_snr + 1.0));
}

double psr_bd_rate(const ChannelRealization& ch, const Beamformer& w,
                   const SystemParams& params) {
  return specfun::psr_bd_rate_closed(decompose(ch, w, params).backscatter_snr);
}

namespace {

// Upper bound on \int_U^inf log2(1+x) f(x) dx for the noncentral density.
// |Z| <= sqrt(l) + |G| gives P(X > U) <= exp(-r0^2 / 2S) with
// r0 = sqrt(U) - sqrt(l), and the concavity of log2(1+x) at U bounds the
// excess by E[(X-U)^+] / ((1+U) ln 2).
double tail_bound(double upper, double lam, double sigma) {
  const double r0 = std::sqrt(upper) - std::sqrt(lam);
  if (r0 <= 0.0) return std::numeric_limits<double>::infinity();
  const double decay = std::exp(-0.5 * r0 * r0 / sigma);
  const double excess = std::sqrt(2.0 * M_PI * sigma * lam) + 2.0 * sigma;
  return (log2_1p(upper) + excess / ((1.0 + upper) * kLn2)) * decay;
}

double mc_from_decomposition(double lam, double sigma, std::int64_t n,
                             double* stderr_out) {
  Xoshiro256pp rng(0xd1cebea7u);
  const double mu = std::sqrt(lam);
  const double sd = std::sqrt(sigma);
  double sum = 0.0, sumsq = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const double a = mu + sd * rng.gaussian();
    const double b = sd * rng.gaussian();
    const double r = log2_1p(a * a + b * b);
    sum += r;
    sumsq += r * r;
  }
  const double mean = sum / static_cast<double>(n);
  const double var =
      (sumsq - mean * mean * static_cast<double>(n)) / static_cast<double>(n - 1);
  if (stderr_out) *stderr_out = std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
  return mean;
}

}  // namespace

CsrExactResult csr_primary_rate_exact(const SnrDecomposition& snr,
                                      const specfun::Quadrature& quad) {
  const double lam = snr.direct_snr;
  if (!(lam >= 0.0) || !std::isfinite(lam))
    throw std::domain_error("csr_primary_rate_exact: direct_snr must be >= 0");
  const double sigma = 0.5 * snr.backscatter_snr;
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::domain_error("csr_primary_rate_exact: backscatter_snr must be > 0");

  const auto integrand = [lam, sigma](double x) {
    return log2_1p(x) * specfun::noncentral_chi2_pdf(x, lam, sigma);
  };
  const double tol = std::max(quad.abs_tol, 1e-12);
  double upper =
      lam + 2.0 * sigma + 40.0 * std::sqrt(2.0 * sigma * (lam + sigma));
  for (int attempt = 0; attempt < 6; ++attempt) {
    if (tail_bound(upper, lam, sigma) <= 0.1 * tol) break;
    upper *= 2.0;
  }
  if (tail_bound(upper, lam, sigma) <= 0.1 * tol) {
    // Seed panels around the density's concentration region so the first
    // error estimates cannot step over a narrow peak.
    const double width = std::sqrt(2.0 * sigma * (lam + sigma));
    std::vector<double> cuts{0.0};
    for (const double k : {-40.0, -10.0, -2.0, 0.0, 2.0, 10.0, 40.0}) {
      const double x = lam + k * width;
      if (x > cuts.back() + 1e-12 * upper && x < upper) cuts.push_back(x);
    }
    cuts.push_back(upper);
    const auto res = specfun::integrate_segmented(integrand, cuts, quad);
    if (res.converged) return {res.value, res.error_estimate, false};
  }
  double se = 0.0;
  const double mc = mc_from_decomposition(lam, sigma, 1'000'000, &se);
  return {mc, se, true};
}

McEstimate csr_primary_rate_mc(const ChannelRealization& ch,
                               const Beamformer& w, const SystemParams& params,
                               std::int64_t samples, std::uint64_t seed) {
  if (samples < 1000)
    throw std::invalid_argument("csr_primary_rate_mc: samples must be >= 1000");
  params.validate();
  const double p = params.transmit_power;
  const double s2 = params.noise_power;
  const std::complex<double> u = ch.direct.dot(w.vec());
  const std::complex<double> v =
      std::conj(std::sqrt(params.reflection) * ch.backward) *
      ch.forward.dot(w.vec());

  constexpr std::int64_t kChunk = 1 << 14;
  const std::size_t chunks =
      static_cast<std::size_t>((samples + kChunk - 1) / kChunk);
  std::vector<double> sums(chunks, 0.0), sumsqs(chunks, 0.0);
  parallel_for(chunks, [&](std::size_t c) {
    Xoshiro256pp rng(Xoshiro256pp::derive(seed, c));
    const std::int64_t lo = static_cast<std::int64_t>(c) * kChunk;
    const std::int64_t hi = std::min(samples, lo + kChunk);
    double sum = 0.0, sumsq = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) {
      // h_eq^H w = h1^H w + conj(c) conj(sqrt(a) g) h2^H w; conj(c) ~ c.
      const std::complex<double> heq = u + rng.cscg() * v;
      const double r = log2_1p(p * std::norm(heq) / s2);
      sum += r;
      sumsq += r * r;
    }
    sums[c] = sum;
    sumsqs[c] = sumsq;
  });
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {  // fixed order, thread-agnostic
    sum += sums[c];
    sumsq += sumsqs[c];
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sumsq - mean * mean * n) / (n - 1.0));
  return {mean, std::sqrt(var / n), samples};
}

double csr_primary_rate_asymptotic(const SnrDecomposition& snr) {
  if (!(snr.direct_snr > 0.0))
    throw std::domain_error("csr_primary_rate_asymptotic: direct_snr must be > 0");
  if (!(snr.backscatter_snr > 0.0))
    throw std::domain_error(
        "csr_primary_rate_asymptotic: backscatter_snr must be > 0");
  const double ratio = snr.direct_snr / snr.backscatter_snr;
  // rate gain -Ei(-ratio) log2 e = e^{-ratio} e1_scaled(ratio) log2 e > 0
  const double gain =
      std::exp(-ratio) * specfun::e1_scaled(ratio) / kLn2;
  return std::log2(snr.direct_snr) + gain;
}

double csr_primary_rate(const ChannelRealization& ch, const Beamformer& w,
                        const SystemParams& params) {
  const SnrDecomposition snr = decompose(ch, w, params);
  if (snr.backscatter_snr <= 0.0) return log2_1p(snr.direct_snr);
  return csr_primary_rate_exact(snr).value;
}

double csr_bd_rate(const ChannelRealization& ch, const Beamformer& w,
                   const SystemParams& params) {
  const SnrDecomposition snr = decompose(ch, w, params);
  const double n = static_cast<double>(params.spreading);
  return log2_1p(n * snr.backscatter_snr) / n;
}

double invert_psr_bd_rate(double rate) {
  if (!(rate >= 0.0) || !std::isfinite(rate))
    throw std::domain_error("invert_psr_bd_rate: rate must be finite, >= 0");
  if (rate == 0.0) return 0.0;
  if (rate > 900.0)
    throw std::domain_error("invert_psr_bd_rate: rate out of representable range");
  // E[log2(1+beta X)] <= log2(1+beta), so 2^rate - 1 brackets from below.
  double lo = std::expm1(rate * kLn2);
  double hi = std::max(4.0 * lo, 1e-12);
  while (specfun::psr_bd_rate_closed(hi) < rate) {
    lo = hi;
    hi *= 4.0;
    if (!std::isfinite(hi))
      throw std::domain_error("invert_psr_bd_rate: bracket overflow");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (specfun::psr_bd_rate_closed(mid) < rate ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace srbeam::rates
