// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the srbeam authors

#include <algorithm>
#include <cmath>
#include <limits>

#include "span2.hpp"
#include "specfun.hpp"

namespace srbeam::beamform {

using detail::SpanFrame;
using detail::kLn2;
using detail::log2_1p;
using std::complex;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

cvec canonicalize(const cvec& w, const ChannelRealization& ch) {
  return channel::Beamformer::canonical(w, ch).vec();
}

SolveReport power_report(const ChannelRealization& ch, const cvec& w,
                         double power, const SpanFrame& frame,
                         const Eigen::Vector2cd& q, SolveStats stats) {
  SolveReport rep;
  rep.w = canonicalize(w, ch);
  rep.objective = power;
  rep.sdr_bound = power;  // the linear SDP attains its optimum at rank one
  rep.extraction = Extraction::kEigenvector;
  rep.collinear = frame.collinear;
  rep.relaxed = Hermitian2::from(power * (q * q.adjoint()));
  rep.rank_ratio = rep.relaxed.rank_ratio();
  rep.stats = stats;
  return rep;
}

void check_targets(double eps_s, double eps_c) {
  if (!(eps_s >= 0.0) || !std::isfinite(eps_s))
    throw std::invalid_argument("tpm: eps_s must be finite, >= 0");
  if (!(eps_c >= 0.0) || !std::isfinite(eps_c))
    throw std::invalid_argument("tpm: eps_c must be finite, >= 0");
}

}  // namespace

// ---------------------------------------------------------------------------
// PSR: both constraints are linear in p at a fixed direction, so the
// per-direction minimum power is closed form and the solver is a 1-D search
// over the aligned rank-one face (phases that do not maximize |h1^H w| at
// fixed |h2^H w| only raise the required power).
// ---------------------------------------------------------------------------
SolveReport solve_tpm_psr(const ChannelRealization& ch, double eps_s,
                          double eps_c, const SystemParams& params,
                          const SolverConfig& cfg) {
  params.validate();
  ch.validate();
  cfg.validate();
  check_targets(eps_s, eps_c);

  const SpanFrame frame(ch, params.reflection);
  const double s2 = params.noise_power;
  const double snr_gap = std::expm1(eps_s * kLn2);          // 2^eps_s - 1
  const double beta_req = rates::invert_psr_bd_rate(eps_c);  // BD SNR target
  const double c2 = frame.bscale * frame.n2 * frame.n2;

  if (beta_req > 0.0 && c2 <= 0.0)
    throw InfeasibleError("tpm psr: BD rate required but backscatter path is zero");

  SolveStats stats;
  const auto min_power = [&](double s) {
    ++stats.objective_evals;
    double power = 0.0;
    if (beta_req > 0.0) {
      const double a2 = c2 * s;
      if (a2 <= 0.0) return kInf;
      power = beta_req * s2 / a2;
    }
    if (snr_gap > 0.0) {
      const double margin = frame.direct_power(s) - snr_gap * c2 * s;
      if (margin <= 0.0) return kInf;
      power = std::max(power, snr_gap * s2 / margin);
    }
    return power;
  };

  // Closed-form endpoints keep the boundary cases exact.
  if (snr_gap <= 0.0 && beta_req <= 0.0)
    return power_report(ch, ch.direct, 0.0, frame,
                        Eigen::Vector2cd(frame.a_par * frame.u_par / frame.n1,
                                         frame.a_perp / frame.n1),
                        stats);
  if (snr_gap <= 0.0) {
    // Only the BD constraint: all power toward the forward link.
    const Eigen::Vector2cd q(frame.u_par, 0.0);
    return power_report(ch, frame.make(1.0, 0.0), min_power(1.0), frame, q,
                        stats);
  }
  if (c2 <= 0.0) {
    // No backscatter path: classic matched-filter power minimum.
    const double power = snr_gap * s2 / (frame.n1 * frame.n1);
    const double s_mrt = frame.mrt_weight();
    const Eigen::Vector2cd q(std::sqrt(s_mrt) * frame.u_par,
                             std::sqrt(1.0 - s_mrt));
    return power_report(ch, frame.make(s_mrt, 0.0), power, frame, q, stats);
  }

  if (frame.collinear) {
    // 1-D span: feasible only if the fixed SINR ratio clears the target.
    if (frame.a_par * frame.a_par <= snr_gap * c2)
      throw InfeasibleError("tpm psr: parallel channels cannot meet the SINR target");
    const double power = min_power(1.0);
    return power_report(ch, frame.make(1.0, 0.0), power, frame,
                        Eigen::Vector2cd(frame.u_par, 0.0), stats);
  }

  int best = -1;
  double best_val = kInf;
  std::vector<double> sgrid(cfg.xi_steps);
  for (int k = 0; k < cfg.xi_steps; ++k) {
    const double s = k / static_cast<double>(cfg.xi_steps - 1);
    sgrid[k] = s;
    const double val = min_power(s);
    if (val < best_val) {
      best_val = val;
      best = k;
    }
  }
  if (best < 0) throw InfeasibleError("tpm psr: no feasible direction");
  const double lo = sgrid[std::max(0, best - 1)];
  const double hi = sgrid[std::min(cfg.xi_steps - 1, best + 1)];
  double s_star = detail::golden_min(min_power, lo, hi, cfg.xi_refine_tol,
                                     &stats.refine_iters);
  double val_star = min_power(s_star);
  for (const double cand : {sgrid[best], 1.0, frame.mrt_weight()}) {
    const double v = min_power(cand);
    if (v < val_star) {
      val_star = v;
      s_star = cand;
    }
  }

  const Eigen::Vector2cd q(std::sqrt(s_star) * frame.u_par,
                           std::sqrt(1.0 - s_star));
  return power_report(ch, frame.make(s_star, 0.0), val_star, frame, q, stats);
}

// ---------------------------------------------------------------------------
// CSR: the primary-rate constraint has no closed SNR form; its left side is
// strictly increasing in p, so the per-direction minimum power is a 1-D root
// find on the common-random-number sample average (bracketed Newton).  The
// outer search runs over the aligned face and then rescans the relative
// phase, which the finite sample average makes weakly relevant.
// ---------------------------------------------------------------------------
namespace {

struct SaaPower {
  const std::vector<double>* link_powers;  // X_k at the probed direction
  double s2;

  double rate(double p) const {
    double acc = 0.0;
    for (const double x : *link_powers) acc += log2_1p(p * x / s2);
    return acc / static_cast<double>(link_powers->size());
  }
  double rate_derivative(double p) const {
    double acc = 0.0;
    for (const double x : *link_powers) acc += x / (s2 + p * x);
    return acc / (static_cast<double>(link_powers->size()) * kLn2);
  }

  // Smallest p with rate(p) >= target; the rate is concave increasing, so
  // Newton from the Jensen lower bound converges from below.
  double solve(double target) const {
    if (target <= 0.0) return 0.0;
    double mean = 0.0;
    for (const double x : *link_powers) mean += x;
    mean /= static_cast<double>(link_powers->size());
    if (!(mean > 0.0)) return kInf;
    double p = s2 * std::expm1(target * kLn2) / mean;
    for (int it = 0; it < 200; ++it) {
      const double gap = target - rate(p);
      if (gap <= 1e-13 * std::max(1.0, target)) break;
      const double d = rate_derivative(p);
      if (!(d > 0.0)) return kInf;
      p += gap / d;
      if (!std::isfinite(p)) return kInf;
    }
    return p;
  }
};

}  // namespace

SolveReport solve_tpm_csr(const ChannelRealization& ch, double eps_s,
                          double eps_c, const SystemParams& params,
                          const SolverConfig& cfg) {
  params.validate();
  ch.validate();
  cfg.validate();
  check_targets(eps_s, eps_c);
  const double n_spread = static_cast<double>(params.spreading);
  if (n_spread * eps_c > 900.0)
    throw std::invalid_argument("tpm csr: N * eps_c out of representable range");

  const SpanFrame frame(ch, params.reflection);
  const double s2 = params.noise_power;
  const double c2 = frame.bscale * frame.n2 * frame.n2;
  const double snr_bd = std::expm1(n_spread * eps_c * kLn2) / n_spread;

  if (snr_bd > 0.0 && c2 <= 0.0)
    throw InfeasibleError("tpm csr: BD rate required but backscatter path is zero");

  SolveStats stats;
  if (c2 <= 0.0) {
    // No scattered component: the expectation collapses to the MISO rate.
    const double power = std::expm1(eps_s * kLn2) * s2 / (frame.n1 * frame.n1);
    const double s_mrt = frame.mrt_weight();
    const Eigen::Vector2cd q(std::sqrt(s_mrt) * frame.u_par,
                             std::sqrt(1.0 - s_mrt));
    return power_report(ch, frame.make(s_mrt, 0.0), power, frame, q, stats);
  }

  const auto draws = saa_draws(cfg.saa_samples, cfg.seed);
  std::vector<double> link_powers;
  const SaaPower primary{&link_powers, s2};

  const auto min_power = [&](double s, double phi) {
    ++stats.objective_evals;
    double power = 0.0;
    if (snr_bd > 0.0) {
      const double a2 = c2 * s;
      if (a2 <= 0.0) return kInf;
      power = snr_bd * s2 / a2;
    }
    if (eps_s > 0.0) {
      detail::saa_link_powers(frame.direct_ip(s, phi),
                              std::conj(frame.bd_gain) * frame.forward_ip(s),
                              draws, link_powers);
      power = std::max(power, primary.solve(eps_s));
    }
    return power;
  };

  if (eps_s <= 0.0)
    return power_report(ch, frame.make(1.0, 0.0), min_power(1.0, 0.0), frame,
                        Eigen::Vector2cd(frame.u_par, 0.0), stats);

  // Aligned sweep over s, then a full scan of the relative phase.
  int best = -1;
  double best_val = kInf;
  std::vector<double> sgrid(cfg.xi_steps);
  for (int k = 0; k < cfg.xi_steps; ++k) {
    const double s = k / static_cast<double>(cfg.xi_steps - 1);
    sgrid[k] = s;
    const double val = min_power(s, 0.0);
    if (val < best_val) {
      best_val = val;
      best = k;
    }
  }
  if (best < 0) throw InfeasibleError("tpm csr: no feasible direction");
  double s_star = sgrid[best];
  double phi_star = 0.0;
  for (int j = 0; j < cfg.grid_phi; ++j) {
    const double phi = 2.0 * M_PI * j / cfg.grid_phi;
    const double val = min_power(s_star, phi);
    if (val < best_val) {
      best_val = val;
      phi_star = phi;
    }
  }
  for (int round = 0; round < 3; ++round) {
    const double window = 1.0 / (cfg.xi_steps - 1);
    const double lo = std::max(0.0, s_star - window);
    const double hi = std::min(1.0, s_star + window);
    s_star = detail::golden_min(
        [&](double s) { return min_power(s, phi_star); }, lo, hi,
        cfg.xi_refine_tol, &stats.refine_iters);
    const double dphi = 2.0 * M_PI / cfg.grid_phi;
    phi_star = detail::golden_min(
        [&](double phi) { return min_power(s_star, phi); }, phi_star - dphi,
        phi_star + dphi, cfg.xi_refine_tol, &stats.refine_iters);
  }
  double val_star = min_power(s_star, phi_star);
  for (const double cand : {sgrid[best], 1.0}) {
    const double v = min_power(cand, phi_star);
    if (v < val_star) {
      val_star = v;
      s_star = cand;
    }
  }
  if (!std::isfinite(val_star))
    throw InfeasibleError("tpm csr: no feasible direction");

  const complex<double> rot(std::cos(phi_star), std::sin(phi_star));
  const Eigen::Vector2cd q(std::sqrt(s_star) * frame.u_par,
                           std::sqrt(1.0 - s_star) * rot);
  return power_report(ch, frame.make(s_star, phi_star), val_star, frame, q,
                      stats);
}

}  // namespace srbeam::beamform
