// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the srbeam authors

#ifndef SRBEAM_BEAMFORM_HPP
#define SRBEAM_BEAMFORM_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rates.hpp"

namespace srbeam::beamform {

using channel::Beamformer;
using channel::ChannelRealization;
using channel::SystemParams;
using cvec = channel::cvec;

// Thrown by the power-minimization solvers when no direction can meet the
// rate constraints (parallel channels with an unattainable SINR ratio).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two-column reduced basis [h1_hat, h2_hat]: every optimal beamformer lies
// in its span, so the M-dimensional design collapses to two complex
// weights.  When the channels are collinear the second column degenerates
// to a deterministic orthonormal completion and `collinear` is set.
struct ReducedBasis {
  Eigen::MatrixXcd basis;             // M x 2
  Eigen::Matrix2cd gram;              // B^H B
  Eigen::Vector2cd proj_direct;       // B^H h1
  Eigen::Vector2cd proj_forward;      // B^H h2
  Eigen::Matrix2cd gram_direct;       // B^H h1 h1^H B
  Eigen::Matrix2cd gram_backscatter;  // a |g|^2 B^H h2 h2^H B
  double backscatter_scale = 0.0;     // a |g|^2
  bool collinear = false;

  // a |g|^2-free equivalent-channel Gram for a given BD symbol.
  Eigen::Matrix2cd gram_equivalent(std::complex<double> bd_symbol) const;

  // w = B a / ||B a||; throws on a zero combination.
  cvec expand(const Eigen::Vector2cd& weights) const;
};

ReducedBasis reduce_basis(const ChannelRealization& ch, double reflection);

// Hermitian 2x2 represented by its four real parameters; the relaxed
// solver variable and the rank diagnostic carrier.
struct Hermitian2 {
  double diag0 = 0.0;
  double diag1 = 0.0;
  std::complex<double> off{0.0, 0.0};

  static Hermitian2 from(const Eigen::Matrix2cd& m);
  Eigen::Matrix2cd matrix() const;
  // Eigenvalues in decreasing order (closed form).
  std::pair<double, double> eigenvalues() const;
  double rank_ratio() const;  // lambda2 / lambda1, 0 for the zero matrix
  bool psd(double tol = 1e-10) const;
};

enum class Extraction { kEigenvector, kRandomized };

struct SolveStats {
  int objective_evals = 0;
  int refine_iters = 0;
  int ascent_iters = 0;
  int rand_trials = 0;
};

struct SolveReport {
  cvec w;                  // unit norm, canonical phase
  double objective = 0.0;  // weighted rate (WSRM) / minimum power (TPM)
  double sdr_bound = 0.0;
  double rank_ratio = 0.0;
  Extraction extraction = Extraction::kEigenvector;
  Hermitian2 relaxed;      // optimal relaxed variable (whitened coordinates)
  SolveStats stats;
  bool collinear = false;
  // CSR extras: the sample-average objective the solver optimized and the
  // exact-quadrature re-evaluation of the returned beamformer.
  double saa_objective = 0.0;
  double exact_objective = 0.0;
};

struct SolverConfig {
  int xi_steps = 200;           // 1-D sweep resolution (>= 32)
  double xi_refine_tol = 1e-6;  // golden-section tolerance, relative to range
  int rand_trials = 1000;       // randomization candidates D (>= 100)
  double rank_one_tol = 1e-6;   // sigma2/sigma1 below which W counts as rank one
  int saa_samples = 2000;       // common-random-number draws (>= 500)
  int grid_t = 64;              // oracle resolution (>= 64)
  int grid_phi = 64;
  int grid_refine_rounds = 4;   // local oracle refinement passes
  std::uint64_t seed = 1;

  void validate() const;
};

// Weighted sum-rate maximization, PSR setup: 1-D sweep of the interference
// level with the inner problem solved in closed form on the rank-one face.
SolveReport solve_wsrm_psr(const ChannelRealization& ch,
                           const SystemParams& params, const SolverConfig& cfg);

// Weighted sum-rate maximization, CSR setup: projected gradient over the
// trace-p slice of the 2x2 PSD cone on a fixed common-random-number sample
// average, then randomized extraction with a local rank-one polish.
SolveReport solve_wsrm_csr(const ChannelRealization& ch,
                           const SystemParams& params, const SolverConfig& cfg);

// Transmit power minimization, PSR setup (objective = minimum power).
SolveReport solve_tpm_psr(const ChannelRealization& ch, double eps_s,
                          double eps_c, const SystemParams& params,
                          const SolverConfig& cfg);

// Transmit power minimization, CSR setup: the expectation constraint is
// evaluated by SAA; per direction the minimal power is a 1-D root find.
SolveReport solve_tpm_csr(const ChannelRealization& ch, double eps_s,
                          double eps_c, const SystemParams& params,
                          const SolverConfig& cfg);

// Reduced-space oracle: exhaustive grid over a(t, phi) = (sqrt(t),
// sqrt(1-t) e^{i phi}) in the [h1_hat, h2_hat] basis plus local refinement.
SolveReport grid_search_wsrm(const ChannelRealization& ch,
                             const SystemParams& params,
                             const SolverConfig& cfg);
SolveReport grid_search_tpm(const ChannelRealization& ch, double eps_s,
                            double eps_c, const SystemParams& params,
                            const SolverConfig& cfg);

// Full-space oracle: random unit directions in C^M, used to validate that
// the span restriction loses nothing.
SolveReport sphere_search_wsrm(const ChannelRealization& ch,
                               const SystemParams& params,
                               const SolverConfig& cfg, int directions);

// Phase-randomized rank-one candidates from a PSD matrix with trace p;
// every candidate has squared norm exactly trace(relaxed).
std::vector<Eigen::Vector2cd> phase_randomized_candidates(
    const Eigen::Matrix2cd& relaxed, int trials, std::uint64_t seed);

// Common-random-number BD symbol draws shared by solvers and oracles.
std::vector<std::complex<double>> saa_draws(int count, std::uint64_t seed);

}  // namespace srbeam::beamform

#endif
