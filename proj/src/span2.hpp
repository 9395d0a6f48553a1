// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the srbeam authors
//
// Internal 2-D geometry shared by the solvers and the grid oracles.  Every
// admissible beamformer lives in span{h1, h2}; this header fixes one
// orthonormal frame of that span, anchored on the forward link, in which
// the two quadratic forms |h1^H w|^2 and |h2^H w|^2 have a closed shape.

#ifndef SRBEAM_SPAN2_HPP
#define SRBEAM_SPAN2_HPP

#include <cmath>
#include <complex>
#include <vector>

#include "beamform.hpp"

namespace srbeam::beamform::detail {

using std::complex;

constexpr double kLn2 = 0.69314718055994530941723212145818;

inline double log2_1p(double x) { return std::log1p(x) / kLn2; }

// Orthonormal frame {axis_fwd, axis_perp} of span{h1, h2}: axis_fwd along
// h2, axis_perp along the residual of h1.  For w(s, phi) =
// sqrt(s) u_par axis_fwd + sqrt(1-s) e^{i phi} axis_perp:
//   |h2^H w|^2 = s n2^2                      (independent of phi)
//   h1^H w     = sqrt(s) a_par + sqrt(1-s) e^{i phi} a_perp
// so phi = 0 maximizes |h1^H w| at fixed s.
struct SpanFrame {
  cvec axis_fwd;
  cvec axis_perp;
  complex<double> u_par;  // unit scalar aligning h1^H axis_fwd to the real axis
  double n1 = 0.0, n2 = 0.0;
  double a_par = 0.0, a_perp = 0.0;
  double bscale = 0.0;            // a |g|^2
  complex<double> bd_gain{0, 0};  // sqrt(a) g
  bool collinear = false;

  SpanFrame(const ChannelRealization& ch, double reflection) {
    n1 = ch.direct.norm();
    n2 = ch.forward.norm();
    if (!(n1 > 0.0) || !(n2 > 0.0))
      throw std::invalid_argument("span frame: zero channel vector");
    axis_fwd = ch.forward / n2;
    const complex<double> ip = ch.direct.dot(axis_fwd);  // h1^H h2_hat
    a_par = std::abs(ip);
    u_par = a_par > 0.0 ? std::conj(ip) / a_par : complex<double>(1.0, 0.0);
    cvec resid = ch.direct - (axis_fwd.dot(ch.direct)) * axis_fwd;
    a_perp = resid.norm();
    collinear = a_perp <= 1e-10 * n1;
    if (collinear) {
      // Deterministic completion; contributes nothing to either link.
      Eigen::Index pick = 0;
      double best = std::abs(axis_fwd(0));
      for (Eigen::Index k = 1; k < axis_fwd.size(); ++k)
        if (std::abs(axis_fwd(k)) < best) {
          best = std::abs(axis_fwd(k));
          pick = k;
        }
      cvec e = cvec::Zero(axis_fwd.size());
      e(pick) = 1.0;
      resid = e - axis_fwd * axis_fwd.dot(e);
      a_perp = 0.0;
      axis_perp = resid / resid.norm();
    } else {
      axis_perp = resid / a_perp;
    }
    bscale = reflection * std::norm(ch.backward);
    bd_gain = std::sqrt(reflection) * ch.backward;
  }

  // Largest |h1^H w|^2 attainable with |h2^H w|^2 = s n2^2 and ||w|| = 1.
  double direct_power(double s) const {
    const double r = std::sqrt(s) * a_par + std::sqrt(1.0 - s) * a_perp;
    return r * r;
  }

  // Weight of h1 along the span axes: s = a_par^2 / n1^2 reproduces the
  // matched filter h1 / ||h1|| exactly.
  double mrt_weight() const {
    return (a_par / n1) * (a_par / n1);
  }

  cvec make(double s, double phi) const {
    const complex<double> rot(std::cos(phi), std::sin(phi));
    return std::sqrt(s) * u_par * axis_fwd +
           std::sqrt(1.0 - s) * rot * axis_perp;
  }

  // Inner products of w(s, phi) without materializing the M-vector.
  complex<double> direct_ip(double s, double phi) const {
    const complex<double> rot(std::cos(phi), std::sin(phi));
    return std::sqrt(s) * a_par + std::sqrt(1.0 - s) * rot * a_perp;
  }
  complex<double> forward_ip(double s) const { return std::sqrt(s) * u_par * n2; }
};

// X_k = |h1^H w + conj(c_k) conj(sqrt(a) g) h2^H w|^2 for the common draws.
inline void saa_link_powers(complex<double> direct_ip, complex<double> bd_ip,
                            const std::vector<complex<double>>& draws,
                            std::vector<double>& out) {
  out.resize(draws.size());
  for (std::size_t k = 0; k < draws.size(); ++k)
    out[k] = std::norm(direct_ip + std::conj(draws[k]) * bd_ip);
}

// rho * mean_k log2(1 + p X_k / s2) + (1-rho)/N log2(1 + N beta).
inline double csr_saa_objective(const std::vector<double>& link_powers,
                                double fwd_power, double p, double s2,
                                double rho, int spreading, double bscale) {
  double acc = 0.0;
  for (const double x : link_powers) acc += log2_1p(p * x / s2);
  const double primary = acc / static_cast<double>(link_powers.size());
  const double n = static_cast<double>(spreading);
  const double bd = log2_1p(n * bscale * p * fwd_power / s2) / n;
  return rho * primary + (1.0 - rho) * bd;
}

// Golden-section scan for a maximum on [lo, hi] (unimodal near the optimum;
// callers bracket with a coarse grid first).
template <class F>
double golden_max(F&& f, double lo, double hi, double tol, int* evals) {
  constexpr double kInvPhi = 0.61803398874989484820458683436564;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  if (evals) *evals += 2;
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
    if (evals) ++*evals;
  }
  return fc > fd ? c : d;
}

template <class F>
double golden_min(F&& f, double lo, double hi, double tol, int* evals) {
  return golden_max([&f](double x) { return -f(x); }, lo, hi, tol, evals);
}

}  // namespace srbeam::beamform::detail

#endif
