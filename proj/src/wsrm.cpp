// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the srbeam authors

#include <algorithm>
#include <array>
#include <cmath>

#include "rng.hpp"
#include "span2.hpp"
#include "specfun.hpp"

namespace srbeam::beamform {

using detail::SpanFrame;
using detail::kLn2;
using detail::log2_1p;
using std::complex;

namespace {

cvec canonicalize(const cvec& w, const ChannelRealization& ch) {
  return channel::Beamformer::canonical(w, ch).vec();
}

SolveReport mrt_report(const ChannelRealization& ch, const SystemParams& params,
                       double objective_weight) {
  SolveReport rep;
  rep.w = canonicalize(ch.direct, ch);
  const double snr = params.transmit_power * ch.direct.squaredNorm() /
                     params.noise_power;
  rep.objective = objective_weight * log2_1p(snr);
  rep.sdr_bound = rep.objective;
  rep.extraction = Extraction::kEigenvector;
  rep.relaxed = Hermitian2{params.transmit_power, 0.0, {0.0, 0.0}};
  rep.saa_objective = rep.objective;
  rep.exact_objective = rep.objective;
  return rep;
}

}  // namespace

// ---------------------------------------------------------------------------
// PSR: auxiliary-variable sweep.  With xi = interference + noise fixed, the
// inner relaxed problem (max Tr(G1 A), two trace constraints, A psd) attains
// its optimum at a rank-one extreme point, which the frame solves in closed
// form: |h1^H w| = sqrt(s) a_par + sqrt(1-s) a_perp at |h2^H w|^2 = s n2^2.
// The sweep runs over xi (log-spaced) with golden refinement, then snaps the
// analytic endpoint candidates so the boundary cases are exact.
// ---------------------------------------------------------------------------
SolveReport solve_wsrm_psr(const ChannelRealization& ch,
                           const SystemParams& params,
                           const SolverConfig& cfg) {
  params.validate();
  ch.validate();
  cfg.validate();
  const SpanFrame frame(ch, params.reflection);
  const double p = params.transmit_power;
  const double s2 = params.noise_power;
  const double rho = params.weight;
  const double c2 = frame.bscale * frame.n2 * frame.n2;  // a|g|^2 ||h2||^2

  if (p * c2 <= 1e-300) return mrt_report(ch, params, rho);

  SolveStats stats;
  const auto objective = [&](double s) {
    const double sinr = p * frame.direct_power(s) / (p * c2 * s + s2);
    const double beta = p * c2 * s / s2;
    ++stats.objective_evals;
    return rho * log2_1p(sinr) +
           (1.0 - rho) * specfun::psr_bd_rate_closed(beta);
  };

  // xi in [s2, s2 + p c2], log-spaced, endpoints included.
  const double xi_hi = s2 + p * c2;
  const double log_ratio = std::log(xi_hi / s2);
  int best = 0;
  double best_val = -1.0;
  std::vector<double> sgrid(cfg.xi_steps);
  for (int k = 0; k < cfg.xi_steps; ++k) {
    const double xi =
        s2 * std::exp(log_ratio * k / static_cast<double>(cfg.xi_steps - 1));
    double s = std::clamp((xi - s2) / (p * c2), 0.0, 1.0);
    if (k == 0) s = 0.0;
    if (k == cfg.xi_steps - 1) s = 1.0;
    sgrid[k] = s;
    const double val = objective(s);
    if (val > best_val) {
      best_val = val;
      best = k;
    }
  }
  const double lo = sgrid[std::max(0, best - 1)];
  const double hi = sgrid[std::min(cfg.xi_steps - 1, best + 1)];
  double s_star = detail::golden_max(objective, lo, hi, cfg.xi_refine_tol,
                                     &stats.refine_iters);
  double val_star = objective(s_star);
  for (const double cand : {0.0, 1.0, frame.mrt_weight(), sgrid[best]}) {
    const double v = objective(cand);
    if (v > val_star + 1e-15 ||
        (std::abs(v - val_star) <= 1e-15 && cand < s_star)) {
      val_star = std::max(v, val_star);
      s_star = cand;
    }
  }

  SolveReport rep;
  rep.w = canonicalize(frame.make(s_star, 0.0), ch);
  rep.objective = val_star;
  rep.sdr_bound = val_star;  // the relaxed inner optimum is exactly rank one
  rep.extraction = Extraction::kEigenvector;
  rep.collinear = frame.collinear;
  const Eigen::Vector2cd q(std::sqrt(s_star) * frame.u_par,
                           std::sqrt(1.0 - s_star));
  rep.relaxed = Hermitian2::from(p * (q * q.adjoint()));
  rep.rank_ratio = rep.relaxed.rank_ratio();
  rep.stats = stats;
  rep.saa_objective = val_star;
  rep.exact_objective = val_star;
  return rep;
}

// ---------------------------------------------------------------------------
// CSR: sample-average objective over the trace-p slice of the 2x2 PSD cone,
// parameterized on the Bloch ball A = (p/2)(I + r.sigma), ||r|| <= 1.  The
// objective is concave in r, so projected gradient ascent reaches the SDR
// optimum; extraction then searches the rank-one boundary (randomized
// candidates plus a gradient polish on the sphere).
// ---------------------------------------------------------------------------
namespace {

struct BlochObjective {
  // Per-draw affine coefficients: Tr(M_k A) = (p/2)(alpha_k + b_k . r).
  std::vector<double> alpha;
  std::vector<std::array<double, 3>> b;
  double p, s2, rho, bscale, fwd_sq;  // fwd_sq = ||h2||^2
  int spreading;

  double bd_term(double rz) const {
    const double x2 = 0.5 * p * fwd_sq * (1.0 + rz);  // p |h2^H w|^2
    const double n = static_cast<double>(spreading);
    return (1.0 - rho) * log2_1p(n * bscale * x2 / s2) / n;
  }

  double value(const std::array<double, 3>& r) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < alpha.size(); ++k) {
      const double y =
          0.5 * p * (alpha[k] + b[k][0] * r[0] + b[k][1] * r[1] + b[k][2] * r[2]);
      acc += log2_1p(y / s2);
    }
    return rho * acc / static_cast<double>(alpha.size()) + bd_term(r[2]);
  }

  std::array<double, 3> gradient(const std::array<double, 3>& r) const {
    std::array<double, 3> g{0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < alpha.size(); ++k) {
      const double y =
          0.5 * p * (alpha[k] + b[k][0] * r[0] + b[k][1] * r[1] + b[k][2] * r[2]);
      const double scale = 0.5 * p / (s2 + y);
      g[0] += scale * b[k][0];
      g[1] += scale * b[k][1];
      g[2] += scale * b[k][2];
    }
    const double inv = rho / (static_cast<double>(alpha.size()) * kLn2);
    for (auto& gi : g) gi *= inv;
    const double x2 = 0.5 * p * fwd_sq * (1.0 + r[2]);
    const double n = static_cast<double>(spreading);
    g[2] += (1.0 - rho) * (0.5 * p * fwd_sq * bscale) /
            ((s2 + n * bscale * x2) * kLn2);
    return g;
  }
};

inline double norm3(const std::array<double, 3>& r) {
  return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
}

inline std::array<double, 3> clip_ball(std::array<double, 3> r) {
  const double n = norm3(r);
  if (n > 1.0)
    for (auto& x : r) x /= n;
  return r;
}

inline std::array<double, 3> to_sphere(std::array<double, 3> r) {
  const double n = norm3(r);
  if (n <= 1e-300) return {0.0, 0.0, 1.0};
  for (auto& x : r) x /= n;
  return r;
}

Eigen::Vector2cd q_from_bloch(const std::array<double, 3>& r_unit) {
  const double z = std::clamp(r_unit[2], -1.0, 1.0);
  const double q0 = std::sqrt(0.5 * (1.0 + z));
  if (q0 < 1e-12) return {complex<double>(0.0, 0.0), complex<double>(1.0, 0.0)};
  return {complex<double>(q0, 0.0),
          complex<double>(r_unit[0], r_unit[1]) / (2.0 * q0)};
}

std::array<double, 3> bloch_from_q(const Eigen::Vector2cd& q) {
  const complex<double> cross = q(0) * std::conj(q(1));
  return {2.0 * cross.real(), -2.0 * cross.imag(),
          std::norm(q(0)) - std::norm(q(1))};
}

// Projected gradient ascent; `sphere` restricts to the rank-one boundary.
template <class Proj>
std::array<double, 3> ascend(const BlochObjective& f, std::array<double, 3> r,
                             Proj&& proj, int max_iter, SolveStats* stats) {
  double step = 1.0;
  double fr = f.value(r);
  for (int it = 0; it < max_iter; ++it) {
    const auto g = f.gradient(r);
    bool improved = false;
    for (int bt = 0; bt < 40; ++bt) {
      std::array<double, 3> cand = proj(std::array<double, 3>{
          r[0] + step * g[0], r[1] + step * g[1], r[2] + step * g[2]});
      const double fc = f.value(cand);
      if (fc > fr) {
        const double moved = std::abs(cand[0] - r[0]) +
                             std::abs(cand[1] - r[1]) +
                             std::abs(cand[2] - r[2]);
        r = cand;
        fr = fc;
        improved = true;
        step *= 1.4;
        if (stats) ++stats->ascent_iters;
        if (moved < 1e-13) return r;
        break;
      }
      step *= 0.35;
      if (step < 1e-16) return r;
    }
    if (!improved) return r;
  }
  return r;
}

}  // namespace

SolveReport solve_wsrm_csr(const ChannelRealization& ch,
                           const SystemParams& params,
                           const SolverConfig& cfg) {
  params.validate();
  ch.validate();
  cfg.validate();
  const SpanFrame frame(ch, params.reflection);
  const double p = params.transmit_power;
  const double s2 = params.noise_power;
  const double rho = params.weight;

  if (frame.bscale * frame.n2 * frame.n2 <= 1e-300)
    return mrt_report(ch, params, rho);

  const auto draws = saa_draws(cfg.saa_samples, cfg.seed);

  // Frame coordinates: m1 = (a_par u_par, a_perp), m2 = (n2, 0).
  const Eigen::Vector2cd m1(frame.a_par * frame.u_par, frame.a_perp);
  const Eigen::Vector2cd m2(frame.n2, 0.0);

  BlochObjective f;
  f.p = p;
  f.s2 = s2;
  f.rho = rho;
  f.bscale = frame.bscale;
  f.fwd_sq = frame.n2 * frame.n2;
  f.spreading = params.spreading;
  f.alpha.reserve(draws.size());
  f.b.reserve(draws.size());
  for (const auto& c : draws) {
    const Eigen::Vector2cd meq = m1 + frame.bd_gain * c * m2;
    const complex<double> cross = meq(0) * std::conj(meq(1));
    f.alpha.push_back(meq.squaredNorm());
    f.b.push_back({2.0 * cross.real(), -2.0 * cross.imag(),
                   std::norm(meq(0)) - std::norm(meq(1))});
  }

  SolveStats stats;
  const auto relaxed_r =
      ascend(f, {0.0, 0.0, 0.0}, clip_ball, 4000, &stats);
  const double bound = f.value(relaxed_r);
  const double radius = norm3(relaxed_r);
  const double rank_ratio = (1.0 - radius) / (1.0 + radius);
  Eigen::Matrix2cd relaxed_mat;
  relaxed_mat(0, 0) = 0.5 * p * (1.0 + relaxed_r[2]);
  relaxed_mat(1, 1) = 0.5 * p * (1.0 - relaxed_r[2]);
  relaxed_mat(0, 1) = 0.5 * p * complex<double>(relaxed_r[0], -relaxed_r[1]);
  relaxed_mat(1, 0) = std::conj(relaxed_mat(0, 1));

  // Rank-one boundary search seeded from the relaxed solution.
  std::vector<std::array<double, 3>> seeds;
  seeds.push_back(to_sphere(relaxed_r));
  seeds.push_back(bloch_from_q(m1.normalized()));  // matched filter
  seeds.push_back({0.0, 0.0, 1.0});                // forward-link direction
  for (int i = 1; i < 8; ++i) {
    const double s = i / 8.0;
    const Eigen::Vector2cd q(std::sqrt(s) * frame.u_par, std::sqrt(1.0 - s));
    seeds.push_back(bloch_from_q(q));
  }
  Extraction extraction = Extraction::kEigenvector;
  if (rank_ratio > cfg.rank_one_tol) {
    extraction = Extraction::kRandomized;
    const auto cands = phase_randomized_candidates(
        relaxed_mat, cfg.rand_trials, Xoshiro256pp::derive(cfg.seed, 0xec));
    stats.rand_trials = static_cast<int>(cands.size());
    for (const auto& v : cands) seeds.push_back(bloch_from_q(v.normalized()));
  }

  std::array<double, 3> best_r = seeds.front();
  double best_val = f.value(best_r);
  for (const auto& r : seeds) {
    const double val = f.value(r);
    if (val > best_val) {
      best_val = val;
      best_r = r;
    }
  }
  best_r = ascend(f, best_r, to_sphere, 600, &stats);
  best_val = f.value(best_r);
  stats.objective_evals = static_cast<int>(seeds.size());

  SolveReport rep;
  const Eigen::Vector2cd q = q_from_bloch(best_r);
  rep.w = canonicalize(q(0) * frame.axis_fwd + q(1) * frame.axis_perp, ch);
  rep.saa_objective = best_val;
  rep.objective = best_val;
  rep.sdr_bound = std::max(bound, best_val);
  rep.rank_ratio = rank_ratio;
  rep.extraction = extraction;
  rep.collinear = frame.collinear;
  rep.relaxed = Hermitian2::from(relaxed_mat);
  rep.stats = stats;

  // Exact re-scoring of the returned beamformer (quadrature primary rate).
  const auto bw = channel::Beamformer::canonical(rep.w, ch);
  const auto snr = rates::decompose(ch, bw, params);
  const double primary = snr.backscatter_snr > 0.0
                             ? rates::csr_primary_rate_exact(snr).value
                             : log2_1p(snr.direct_snr);
  rep.exact_objective =
      rho * primary + (1.0 - rho) * rates::csr_bd_rate(ch, bw, params);
  return rep;
}

}  // namespace srbeam::beamform
