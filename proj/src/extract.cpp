// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the srbeam authors

#include <Eigen/Eigenvalues>
#include <cmath>

#include "beamform.hpp"
#include "rng.hpp"

namespace srbeam::beamform {

// v_d = U S^{1/2} e_d with unit-modulus random phases e_d.  Because U is
// unitary and |e_d,i| = 1, every candidate satisfies ||v_d||^2 = trace(S)
// regardless of the phases, so a trace-p relaxed solution maps to
// power-exact rank-one candidates.
std::vector<Eigen::Vector2cd> phase_randomized_candidates(
    const Eigen::Matrix2cd& relaxed, int trials, std::uint64_t seed) {
  if (trials < 1)
    throw std::invalid_argument("extraction: trials must be positive");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> eig(relaxed);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("extraction: eigendecomposition failed");
  const Eigen::Vector2d vals = eig.eigenvalues().cwiseMax(0.0);
  const Eigen::Vector2d roots = vals.cwiseSqrt();
  const Eigen::Matrix2cd& u = eig.eigenvectors();

  Xoshiro256pp rng(seed);
  std::vector<Eigen::Vector2cd> out;
  out.reserve(trials);
  for (int d = 0; d < trials; ++d) {
    const double t0 = 2.0 * M_PI * rng.uniform();
    const double t1 = 2.0 * M_PI * rng.uniform();
    const Eigen::Vector2cd scaled(
        roots(0) * std::complex<double>(std::cos(t0), std::sin(t0)),
        roots(1) * std::complex<double>(std::cos(t1), std::sin(t1)));
    out.push_back(u * scaled);
  }
  return out;
}

}  // namespace srbeam::beamform
