// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the srbeam authors

#ifndef SRBEAM_RATES_HPP
#define SRBEAM_RATES_HPP

#include <cstdint>

#include "channel.hpp"
#include "quadrature.hpp"

namespace srbeam::rates {

using channel::Beamformer;
using channel::ChannelRealization;
using channel::SystemParams;

enum class Setup { kPsr, kCsr };

struct RatePair {
  double primary = 0.0;  // bits/s/Hz
  double bd = 0.0;       // bits/s/Hz
  Setup setup = Setup::kPsr;
};

// direct_snr = p |h1^H w|^2 / s2, backscatter_snr = p a |g|^2 |h2^H w|^2 / s2
// (the latter equals 2 * component_variance of the equivalent-channel SNR).
struct SnrDecomposition {
  double direct_snr = 0.0;
  double backscatter_snr = 0.0;
};

SnrDecomposition decompose(const ChannelRealization& ch, const Beamformer& w,
                           const SystemParams& params);

// PSR: BD signal treated as noise while decoding the primary stream.
double psr_primary_rate(const ChannelRealization& ch, const Beamformer& w,
                        const SystemParams& params);

// PSR backscatter rate, closed form through the exponential integral.
double psr_bd_rate(const ChannelRealization& ch, const Beamformer& w,
                   const SystemParams& params);

struct CsrExactResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool mc_fallback = false;  // set when the quadrature failed to converge
};

// CSR primary rate: quadrature of log2(1+x) against the noncentral
// chi-square density over a windowed range with an analytic tail bound.
// Requires backscatter_snr > 0; falls back to Monte Carlo with a flag when
// quadrature does not converge.
CsrExactResult csr_primary_rate_exact(const SnrDecomposition& snr,
                                      const specfun::Quadrature& quad = {});

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

// Sample average over the BD symbol; deterministic given the seed and
// independent of the number of worker threads.
McEstimate csr_primary_rate_mc(const ChannelRealization& ch,
                               const Beamformer& w, const SystemParams& params,
                               std::int64_t samples, std::uint64_t seed);

// High-SNR closed form log2(direct_snr) - Ei(-ratio) log2 e; the second
// term is the positive rate gain from the scattered path.
double csr_primary_rate_asymptotic(const SnrDecomposition& snr);

// Dispatcher: exact quadrature when backscatter_snr > 0, else the plain
// beamformed-MISO rate (the density degenerates at zero variance).
double csr_primary_rate(const ChannelRealization& ch, const Beamformer& w,
                        const SystemParams& params);

// (1/N) log2(1 + N beta): despreading gain N at 1/N the symbol rate.
double csr_bd_rate(const ChannelRealization& ch, const Beamformer& w,
                   const SystemParams& params);

// Root of psr_bd_rate_closed(beta) = rate, relative tolerance ~1e-12.
double invert_psr_bd_rate(double rate);

}  // namespace srbeam::rates

#endif
