// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the srbeam authors

#ifndef SRBEAM_RNG_HPP
#define SRBEAM_RNG_HPP

#include <array>
#include <complex>
#include <cstdint>

namespace srbeam {

// xoshiro256++ with splitmix64 seeding.  Seeds are portable: the generator,
// the seeding procedure and the Gaussian transform (trigonometric
// Box-Muller, fixed two-uniform consumption per pair) are pinned here so
// that a (seed, stream) pair produces the same draws on every platform.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed);

  std::uint64_t next();

  // Uniform on (0, 1]; consumes one 64-bit word.
  double uniform();

  // Standard normal via Box-Muller; consumes two words, second variate of
  // the pair is discarded so consumption is call-count deterministic.
  double gaussian();

  // Circularly symmetric complex Gaussian, unit variance (E|z|^2 = 1).
  // Uses one Box-Muller pair: (r cos t + i r sin t) / sqrt(2).
  std::complex<double> cscg();

  // Derived stream seed for task decomposition: mixing (seed, stream) with
  // the splitmix64 finalizer.  Independent of evaluation order.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

 private:
  std::array<std::uint64_t, 4> state_;
};

}  // namespace srbeam

#endif
