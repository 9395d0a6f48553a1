// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the srbeam authors

#include <algorithm>
#include <cmath>
#include <limits>

#include "rng.hpp"
#include "span2.hpp"
#include "specfun.hpp"

namespace srbeam::beamform {

using detail::log2_1p;
using std::complex;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2Local = 0.69314718055994530941723212145818;

// Direction scoring shared by the reduced-grid and full-sphere oracles.
// WSRM: value = weighted rate (maximize).  TPM: value = minimum power
// (minimize), +inf when the direction is infeasible.
struct DirectionScore {
  const ChannelRealization* ch;
  const SystemParams* params;
  std::vector<complex<double>> draws;  // CSR only
  double eps_s = 0.0, eps_c = 0.0;     // TPM only
  double snr_target = 0.0;             // 2^eps_s - 1
  double bd_snr_target = 0.0;          // PSR: inverted rate; CSR: (2^{N e}-1)/N
  bool tpm = false;

  mutable std::vector<double> link_powers;

  double wsrm_psr(complex<double> u, complex<double> v) const {
    const double p = params->transmit_power;
    const double s2 = params->noise_power;
    const double bs = params->reflection * std::norm(ch->backward);
    const double interference = p * bs * std::norm(v);
    const double rate_s = log2_1p(p * std::norm(u) / (interference + s2));
    const double rate_c = specfun::psr_bd_rate_closed(interference / s2);
    return params->weight * rate_s + (1.0 - params->weight) * rate_c;
  }

  double wsrm_csr(complex<double> u, complex<double> v) const {
    const double p = params->transmit_power;
    const double s2 = params->noise_power;
    const double bs = params->reflection * std::norm(ch->backward);
    const complex<double> tv =
        std::conj(std::sqrt(params->reflection) * ch->backward) * v;
    double acc = 0.0;
    for (const auto& c : draws)
      acc += log2_1p(p * std::norm(u + std::conj(c) * tv) / s2);
    const double primary = acc / static_cast<double>(draws.size());
    const double n = static_cast<double>(params->spreading);
    const double bd = log2_1p(n * bs * p * std::norm(v) / s2) / n;
    return params->weight * primary + (1.0 - params->weight) * bd;
  }

  double tpm_psr(complex<double> u, complex<double> v) const {
    const double s2 = params->noise_power;
    const double bs = params->reflection * std::norm(ch->backward);
    const double a2 = bs * std::norm(v);
    double power = 0.0;
    if (bd_snr_target > 0.0) {
      if (a2 <= 0.0) return kInf;
      power = bd_snr_target * s2 / a2;
    }
    if (snr_target > 0.0) {
      const double margin = std::norm(u) - snr_target * a2;
      if (margin <= 0.0) return kInf;
      power = std::max(power, snr_target * s2 / margin);
    }
    return power;
  }

  double tpm_csr(complex<double> u, complex<double> v) const {
    const double s2 = params->noise_power;
    const double bs = params->reflection * std::norm(ch->backward);
    const double a2 = bs * std::norm(v);
    double power = 0.0;
    if (bd_snr_target > 0.0) {
      if (a2 <= 0.0) return kInf;
      power = bd_snr_target * s2 / a2;
    }
    if (eps_s > 0.0) {
      const complex<double> tv =
          std::conj(std::sqrt(params->reflection) * ch->backward) * v;
      link_powers.resize(draws.size());
      for (std::size_t k = 0; k < draws.size(); ++k)
        link_powers[k] = std::norm(u + std::conj(draws[k]) * tv);
      double mean = 0.0;
      for (const double x : link_powers) mean += x;
      mean /= static_cast<double>(link_powers.size());
      if (!(mean > 0.0)) return kInf;
      double p = s2 * std::expm1(eps_s * kLn2Local) / mean;
      for (int it = 0; it < 200; ++it) {
        double rate = 0.0, deriv = 0.0;
        for (const double x : link_powers) {
          rate += log2_1p(p * x / s2);
          deriv += x / (s2 + p * x);
        }
        rate /= static_cast<double>(link_powers.size());
        deriv /= static_cast<double>(link_powers.size()) * kLn2Local;
        const double gap = eps_s - rate;
        if (gap <= 1e-13 * std::max(1.0, eps_s)) break;
        if (!(deriv > 0.0)) return kInf;
        p += gap / deriv;
        if (!std::isfinite(p)) return kInf;
      }
      power = std::max(power, p);
    }
    return power;
  }

  // Returns the value to MAXIMIZE (negated power for TPM).
  double operator()(const cvec& w) const {
    const complex<double> u = ch->direct.dot(w);
    const complex<double> v = ch->forward.dot(w);
    if (tpm)
      return params->psr() ? -tpm_psr(u, v) : -tpm_csr(u, v);
    return params->psr() ? wsrm_psr(u, v) : wsrm_csr(u, v);
  }
};

struct GridBest {
  double value = -kInf;
  double t = 0.0, phi = 0.0;
  cvec w;
};

// Exhaustive scan of a(t, phi) = (sqrt(t), sqrt(1-t) e^{i phi}) in the raw
// [h1_hat, h2_hat] basis, ties broken toward smaller t then smaller phi.
GridBest scan_grid(const ReducedBasis& rb, const DirectionScore& score,
                   double t_lo, double t_hi, double phi_lo, double phi_hi,
                   int nt, int nphi, const GridBest* incumbent) {
  GridBest best;
  if (incumbent) best = *incumbent;
  for (int i = 0; i < nt; ++i) {
    const double t =
        nt == 1 ? t_lo : t_lo + (t_hi - t_lo) * i / static_cast<double>(nt - 1);
    for (int j = 0; j < nphi; ++j) {
      const double phi =
          phi_lo + (phi_hi - phi_lo) * j / static_cast<double>(nphi);
      const complex<double> rot(std::cos(phi), std::sin(phi));
      const Eigen::Vector2cd a(std::sqrt(t), std::sqrt(1.0 - t) * rot);
      const cvec raw = rb.basis * a;
      const double nrm = raw.norm();
      if (nrm < 1e-9) continue;
      const cvec w = raw / nrm;
      const double value = score(w);
      if (value > best.value + 1e-15) {
        best = {value, t, phi, w};
      } else if (std::abs(value - best.value) <= 1e-15 &&
                 (t < best.t || (t == best.t && phi < best.phi))) {
        best = {value, t, phi, w};
      }
    }
  }
  return best;
}

SolveReport finish_report(const ChannelRealization& ch, const GridBest& best,
                          bool tpm, bool collinear, int evals) {
  if (!std::isfinite(best.value) || best.w.size() == 0) {
    if (tpm) throw InfeasibleError("grid search: no feasible direction");
    throw std::runtime_error("grid search: no admissible direction");
  }
  SolveReport rep;
  rep.w = channel::Beamformer::canonical(best.w, ch).vec();
  rep.objective = tpm ? -best.value : best.value;
  rep.sdr_bound = rep.objective;
  rep.extraction = Extraction::kEigenvector;
  rep.collinear = collinear;
  rep.stats.objective_evals = evals;
  return rep;
}

DirectionScore make_score(const ChannelRealization& ch,
                          const SystemParams& params, const SolverConfig& cfg,
                          bool tpm, double eps_s, double eps_c) {
  DirectionScore score;
  score.ch = &ch;
  score.params = &params;
  score.tpm = tpm;
  if (!params.psr()) score.draws = saa_draws(cfg.saa_samples, cfg.seed);
  if (tpm) {
    score.eps_s = eps_s;
    score.eps_c = eps_c;
    score.snr_target = std::expm1(eps_s * kLn2Local);
    if (params.psr()) {
      score.bd_snr_target = rates::invert_psr_bd_rate(eps_c);
    } else {
      const double n = static_cast<double>(params.spreading);
      score.bd_snr_target = std::expm1(n * eps_c * kLn2Local) / n;
    }
  }
  return score;
}

SolveReport run_grid(const ChannelRealization& ch, const SystemParams& params,
                     const SolverConfig& cfg, bool tpm, double eps_s,
                     double eps_c) {
  params.validate();
  ch.validate();
  cfg.validate();
  const ReducedBasis rb = reduce_basis(ch, params.reflection);
  const DirectionScore score = make_score(ch, params, cfg, tpm, eps_s, eps_c);

  GridBest best = scan_grid(rb, score, 0.0, 1.0, 0.0, 2.0 * M_PI, cfg.grid_t,
                            cfg.grid_phi, nullptr);
  int evals = cfg.grid_t * cfg.grid_phi;
  double dt = 1.0 / (cfg.grid_t - 1);
  double dphi = 2.0 * M_PI / cfg.grid_phi;
  for (int round = 0; round < cfg.grid_refine_rounds; ++round) {
    if (!std::isfinite(best.value)) break;
    best = scan_grid(rb, score, std::max(0.0, best.t - dt),
                     std::min(1.0, best.t + dt), best.phi - dphi,
                     best.phi + dphi, 9, 9, &best);
    evals += 81;
    dt *= 0.25;
    dphi *= 0.25;
  }
  return finish_report(ch, best, tpm, rb.collinear, evals);
}

}  // namespace

SolveReport grid_search_wsrm(const ChannelRealization& ch,
                             const SystemParams& params,
                             const SolverConfig& cfg) {
  return run_grid(ch, params, cfg, false, 0.0, 0.0);
}

SolveReport grid_search_tpm(const ChannelRealization& ch, double eps_s,
                            double eps_c, const SystemParams& params,
                            const SolverConfig& cfg) {
  if (!(eps_s >= 0.0) || !(eps_c >= 0.0))
    throw std::invalid_argument("grid_search_tpm: negative rate target");
  return run_grid(ch, params, cfg, true, eps_s, eps_c);
}

SolveReport sphere_search_wsrm(const ChannelRealization& ch,
                               const SystemParams& params,
                               const SolverConfig& cfg, int directions) {
  params.validate();
  ch.validate();
  cfg.validate();
  if (directions < 1)
    throw std::invalid_argument("sphere_search_wsrm: directions must be positive");
  const DirectionScore score = make_score(ch, params, cfg, false, 0.0, 0.0);
  Xoshiro256pp rng(Xoshiro256pp::derive(cfg.seed, 0x5fe));
  const int m = ch.antennas();
  cvec w(m), best_w;
  double best_val = -kInf;
  for (int d = 0; d < directions; ++d) {
    for (int i = 0; i < m; ++i) w(i) = rng.cscg();
    const double nrm = w.norm();
    if (nrm < 1e-12) continue;
    w /= nrm;
    const double value = score(w);
    if (value > best_val) {
      best_val = value;
      best_w = w;
    }
  }
  GridBest best{best_val, 0.0, 0.0, best_w};
  return finish_report(ch, best, false, false, directions);
}

}  // namespace srbeam::beamform
