// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the srbeam authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <doctest.h>

#include "channel.hpp"
#include "rng.hpp"

using namespace srbeam;
using channel::SystemParams;

namespace {

SystemParams params(int m = 2, double alpha = 1.0) {
  SystemParams p;
  p.antennas = m;
  p.transmit_power = 10.0;
  p.noise_power = 1.0;
  p.reflection = alpha;
  p.spreading = 1;
  p.weight = 0.5;
  return p;
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(params(1).validate(), std::invalid_argument);
  SystemParams bad = params();
  bad.reflection = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = params();
  bad.transmit_power = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = params();
  bad.spreading = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = params();
  bad.weight = -0.1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_NOTHROW(params(4).validate());
}

TEST_CASE("generation is deterministic in the seed") {
  const auto a = channel::generate(params(3), -10.0, 7);
  const auto b = channel::generate(params(3), -10.0, 7);
  CHECK(a.direct == b.direct);
  CHECK(a.forward == b.forward);
  CHECK(a.backward == b.backward);
  const auto c = channel::generate(params(3), -10.0, 8);
  CHECK(a.direct != c.direct);
}

TEST_CASE("relative gain hits the requested level exactly") {
  for (const double dg : {-20.0, -10.0, 0.0}) {
    for (const double alpha : {0.05, 0.4, 1.0}) {
      const auto ch = channel::generate(params(2, alpha), dg, 3);
      CHECK(channel::relative_gain_db(ch, alpha) == doctest::Approx(dg).epsilon(1e-12));
    }
  }
  // Pure log arithmetic with a unit backward link.
  channel::ChannelRealization ch = channel::generate(params(2, 1.0), 0.0, 5);
  ch.backward = 1.0;
  CHECK(channel::relative_gain_db(ch, 1.0) == doctest::Approx(0.0));
  CHECK(channel::relative_gain_db(ch, 0.1) == doctest::Approx(-10.0));
  CHECK(channel::relative_gain_db(ch, 0.01) == doctest::Approx(-20.0));
  CHECK(std::isinf(channel::relative_gain_db(ch, 0.0)));
  CHECK(channel::relative_gain_db(ch, 0.0) < 0.0);
}

TEST_CASE("entry statistics match the unit-variance convention") {
  const std::int64_t draws = 100000;
  double sum = 0.0, sumsq = 0.0;
  SystemParams p = params(4);
  for (std::int64_t s = 0; s < draws / 4; ++s) {
    const auto ch = channel::generate(p, -10.0, 1000 + s);
    for (int m = 0; m < 4; ++m) {
      const double re = ch.direct(m).real();
      sum += re;
      sumsq += re * re;
    }
  }
  const double mean = sum / draws;
  const double var = sumsq / draws - mean * mean;
  // Re part carries half the unit variance; 3 standard errors.
  const double se = std::sqrt(2.0 * 0.25 / draws);  // var of sample var ~ 2 s^4 / n
  CHECK(std::abs(var - 0.5) < 3.0 * se);
  CHECK(std::abs(mean) < 3.0 * std::sqrt(0.5 / draws));
}

TEST_CASE("equivalent channel") {
  const auto ch = channel::generate(params(3), -10.0, 11);
  const std::complex<double> c{0.3, -1.1};

  CHECK(channel::equivalent_channel(ch, 1.0, 0.0) == ch.direct);
  CHECK(channel::equivalent_channel(ch, 0.0, c) == ch.direct);

  channel::ChannelRealization same = ch;
  same.forward = same.direct;
  same.backward = 1.0;
  const channel::cvec doubled = channel::equivalent_channel(same, 1.0, 1.0);
  CHECK((doubled - 2.0 * same.direct).norm() < 1e-14);

  // Linearity in the BD symbol: h(c1) + h(c2) - h1 = h(c1 + c2).
  Xoshiro256pp rng(5);
  for (int i = 0; i < 32; ++i) {
    const std::complex<double> c1 = rng.cscg();
    const std::complex<double> c2 = rng.cscg();
    const channel::cvec lhs = channel::equivalent_channel(ch, 0.7, c1) +
                              channel::equivalent_channel(ch, 0.7, c2) -
                              ch.direct;
    const channel::cvec rhs = channel::equivalent_channel(ch, 0.7, c1 + c2);
    CHECK((lhs - rhs).norm() < 1e-12);
  }
}

TEST_CASE("beamformer canonicalization") {
  const auto ch = channel::generate(params(3), -10.0, 13);
  Xoshiro256pp rng(99);
  channel::cvec raw(3);
  for (int i = 0; i < 3; ++i) raw(i) = rng.cscg();

  const auto w = channel::Beamformer::canonical(raw, ch);
  CHECK(w.vec().norm() == doctest::Approx(1.0).epsilon(1e-12));
  const std::complex<double> ip = ch.direct.dot(w.vec());
  CHECK(std::abs(ip.imag()) < 1e-12);
  CHECK(ip.real() >= 0.0);

  // Idempotent and phase-insensitive in the input.
  const auto w2 = channel::Beamformer::canonical(
      std::complex<double>(0.36, -0.93) * raw, ch);
  CHECK((w.vec() - w2.vec()).norm() < 1e-12);

  // Falls back to the forward link when orthogonal to the direct one.
  channel::cvec perp = raw - ch.direct * (ch.direct.dot(raw) /
                                          ch.direct.squaredNorm());
  const auto wp = channel::Beamformer::canonical(perp, ch);
  const std::complex<double> ip2 = ch.forward.dot(wp.vec());
  CHECK(std::abs(ip2.imag()) < 1e-10);

  CHECK_THROWS_AS(channel::Beamformer::canonical(channel::cvec::Zero(3), ch),
                  std::invalid_argument);
}

TEST_CASE("channel JSON round trip") {
  const auto ch = channel::generate(params(4, 0.3), -17.5, 21);
  const auto back = channel::channel_from_json(channel::to_json(ch));
  CHECK((back.direct - ch.direct).norm() == 0.0);
  CHECK((back.forward - ch.forward).norm() == 0.0);
  CHECK(back.backward == ch.backward);

  std::vector<channel::ChannelRealization> batch;
  for (int i = 0; i < 5; ++i)
    batch.push_back(channel::generate(params(2), -10.0, 100 + i));
  const auto round = channel::ensemble_from_json(channel::ensemble_to_json(batch));
  REQUIRE(round.size() == batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i)
    CHECK((round[i].direct - batch[i].direct).norm() == 0.0);

  CHECK_THROWS(channel::channel_from_json("{\"direct\": 3}"));
}
