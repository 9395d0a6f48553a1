// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the srbeam authors

#ifndef SRBEAM_CHANNEL_HPP
#define SRBEAM_CHANNEL_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace srbeam::channel {

using cvec = Eigen::VectorXcd;

// Scenario constants.  transmit_power and noise_power are linear,
// noise-normalized units; spreading = 1 selects the PSR setup, larger
// values the CSR setup.
struct SystemParams {
  int antennas = 2;            // M >= 2
  double transmit_power = 1.0; // p > 0
  double noise_power = 1.0;    // sigma^2 > 0
  double reflection = 1.0;     // alpha in [0, 1]
  int spreading = 1;           // N >= 1
  double weight = 0.5;         // rho in [0, 1]

  void validate() const;
  bool psr() const { return spreading == 1; }
};

// One fading block: direct link (PT->PR), forward link (PT->BD) and the
// scalar backward link (BD->PR).  The backward phase is fixed to zero;
// every rate expression depends on it only through |backward|^2.
struct ChannelRealization {
  cvec direct;                     // h1
  cvec forward;                    // h2
  std::complex<double> backward;   // g

  int antennas() const { return static_cast<int>(direct.size()); }
  void validate() const;
};

// i.i.d. unit-variance CSCG entries for both vector links; the backward
// scalar is static and scaled so that relative_gain_db() returns
// delta_gamma_db exactly (alpha = 0 degenerates to backward = 0).
// Deterministic in (params, delta_gamma_db, seed).
ChannelRealization generate(const SystemParams& params, double delta_gamma_db,
                            std::uint64_t seed);

// 10 log10(alpha |g|^2) under the unit-variance entry convention.
// Returns -inf when alpha |g|^2 == 0 (documented sentinel, no throw).
double relative_gain_db(const ChannelRealization& ch, double reflection);

// h1 + sqrt(alpha) c g h2
cvec equivalent_channel(const ChannelRealization& ch, double reflection,
                        std::complex<double> bd_symbol);

// Unit-norm transmit vector with a canonical global phase: the inner
// product h1_hat^H w is real and >= 0 (falling back to h2_hat when w is
// orthogonal to h1), so solver outputs are directly comparable.
class Beamformer {
 public:
  static Beamformer canonical(cvec w, const ChannelRealization& ch);

  const cvec& vec() const { return w_; }
  int antennas() const { return static_cast<int>(w_.size()); }

 private:
  explicit Beamformer(cvec w) : w_(std::move(w)) {}
  cvec w_;
};

// JSON fixture schema: complex numbers as [re, im] pairs.
std::string to_json(const ChannelRealization& ch);
ChannelRealization channel_from_json(const std::string& text);
std::string ensemble_to_json(const std::vector<ChannelRealization>& batch);
std::vector<ChannelRealization> ensemble_from_json(const std::string& text);

}  // namespace srbeam::channel

#endif
