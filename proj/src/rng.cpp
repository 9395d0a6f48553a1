// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the srbeam authors

#include "rng.hpp"

#include <cmath>

namespace srbeam {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

inline std::uint64_t splitmix_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Xoshiro256pp::Xoshiro256pp(std::uint64_t seed) {
  std::uint64_t s = seed;
  for (auto& word : state_) {
    s += kGolden;
    word = splitmix_finalize(s);
  }
}

std::uint64_t Xoshiro256pp::next() {
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Xoshiro256pp::uniform() {
  // 53-bit mantissa, in (0, 1] so log() below is always finite.
  return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
}

double Xoshiro256pp::gaussian() {
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  return r * std::cos(2.0 * M_PI * u2);
}

std::complex<double> Xoshiro256pp::cscg() {
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-std::log(u1));  // -2 log u / 2 for the 1/sqrt(2) scale
  const double t = 2.0 * M_PI * u2;
  return {r * std::cos(t), r * std::sin(t)};
}

std::uint64_t Xoshiro256pp::derive(std::uint64_t seed, std::uint64_t stream) {
  return splitmix_finalize(splitmix_finalize(seed + kGolden) ^
                           splitmix_finalize(stream * kGolden + 1));
}

}  // namespace srbeam
