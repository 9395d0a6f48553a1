// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the srbeam authors

#include <cmath>

#include "beamform.hpp"
#include "rng.hpp"

namespace srbeam::beamform {

namespace {

// Deterministic unit vector orthogonal to u: orthogonalize the canonical
// basis vector with the smallest |u_k| component.
cvec orthonormal_completion(const cvec& u) {
  Eigen::Index pick = 0;
  double best = std::abs(u(0));
  for (Eigen::Index k = 1; k < u.size(); ++k) {
    if (std::abs(u(k)) < best) {
      best = std::abs(u(k));
      pick = k;
    }
  }
  cvec e = cvec::Zero(u.size());
  e(pick) = 1.0;
  cvec r = e - u * u.dot(e);
  return r / r.norm();
}

}  // namespace

Eigen::Matrix2cd ReducedBasis::gram_equivalent(
    std::complex<double> bd_symbol) const {
  const Eigen::Vector2cd proj =
      proj_direct + std::sqrt(backscatter_scale) * bd_symbol * proj_forward;
  return proj * proj.adjoint();
}

cvec ReducedBasis::expand(const Eigen::Vector2cd& weights) const {
  cvec w = basis * weights;
  const double n = w.norm();
  if (!(n > 0.0)) throw std::invalid_argument("reduced basis: zero combination");
  return w / n;
}

ReducedBasis reduce_basis(const ChannelRealization& ch, double reflection) {
  if (!(reflection >= 0.0 && reflection <= 1.0))
    throw std::invalid_argument("reduce_basis: reflection outside [0, 1]");
  const double n1 = ch.direct.norm();
  const double n2 = ch.forward.norm();
  if (!(n1 > 0.0) || !(n2 > 0.0))
    throw std::invalid_argument("reduce_basis: zero channel vector");

  ReducedBasis rb;
  const cvec h1n = ch.direct / n1;
  const cvec h2n = ch.forward / n2;
  rb.collinear = std::abs(h1n.dot(h2n)) > 1.0 - 1e-10;

  rb.basis.resize(ch.antennas(), 2);
  rb.basis.col(0) = h1n;
  rb.basis.col(1) = rb.collinear ? orthonormal_completion(h1n) : h2n;

  rb.gram = rb.basis.adjoint() * rb.basis;
  rb.proj_direct = rb.basis.adjoint() * ch.direct;
  rb.proj_forward = rb.basis.adjoint() * ch.forward;
  rb.backscatter_scale = reflection * std::norm(ch.backward);
  rb.gram_direct = rb.proj_direct * rb.proj_direct.adjoint();
  rb.gram_backscatter =
      rb.backscatter_scale * (rb.proj_forward * rb.proj_forward.adjoint());
  return rb;
}

Hermitian2 Hermitian2::from(const Eigen::Matrix2cd& m) {
  return {m(0, 0).real(), m(1, 1).real(), m(0, 1)};
}

Eigen::Matrix2cd Hermitian2::matrix() const {
  Eigen::Matrix2cd m;
  m << diag0, off, std::conj(off), diag1;
  return m;
}

std::pair<double, double> Hermitian2::eigenvalues() const {
  const double tr = diag0 + diag1;
  const double gap =
      std::sqrt(0.25 * (diag0 - diag1) * (diag0 - diag1) + std::norm(off));
  return {0.5 * tr + gap, 0.5 * tr - gap};
}

double Hermitian2::rank_ratio() const {
  const auto [l1, l2] = eigenvalues();
  if (!(std::abs(l1) > 0.0)) return 0.0;
  return std::abs(l2) / std::abs(l1);
}

bool Hermitian2::psd(double tol) const {
  return eigenvalues().second >= -tol;
}

void SolverConfig::validate() const {
  if (xi_steps < 32) throw std::invalid_argument("solver: xi_steps must be >= 32");
  if (!(xi_refine_tol > 0.0))
    throw std::invalid_argument("solver: xi_refine_tol must be > 0");
  if (rand_trials < 100)
    throw std::invalid_argument("solver: rand_trials must be >= 100");
  if (!(rank_one_tol > 0.0))
    throw std::invalid_argument("solver: rank_one_tol must be > 0");
  if (saa_samples < 500)
    throw std::invalid_argument("solver: saa_samples must be >= 500");
  if (grid_t < 64 || grid_phi < 64)
    throw std::invalid_argument("solver: oracle grids must be >= 64");
  if (grid_refine_rounds < 0)
    throw std::invalid_argument("solver: grid_refine_rounds must be >= 0");
}

std::vector<std::complex<double>> saa_draws(int count, std::uint64_t seed) {
  Xoshiro256pp rng(Xoshiro256pp::derive(seed, 0x5aa));
  std::vector<std::complex<double>> draws(count);
  for (auto& c : draws) c = rng.cscg();
  return draws;
}

}  // namespace srbeam::beamform
