// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the srbeam authors

#include "channel.hpp"

#include <cmath>
#include <json.hpp>
#include <limits>
#include <stdexcept>

#include "rng.hpp"

namespace srbeam::channel {

using nlohmann::json;

void SystemParams::validate() const {
  if (antennas < 2) throw std::invalid_argument("params: antennas must be >= 2");
  if (!(transmit_power > 0.0) || !std::isfinite(transmit_power))
    throw std::invalid_argument("params: transmit_power must be > 0");
  if (!(noise_power > 0.0) || !std::isfinite(noise_power))
    throw std::invalid_argument("params: noise_power must be > 0");
  if (!(reflection >= 0.0 && reflection <= 1.0))
    throw std::invalid_argument("params: reflection must lie in [0, 1]");
  if (spreading < 1) throw std::invalid_argument("params: spreading must be >= 1");
  if (!(weight >= 0.0 && weight <= 1.0))
    throw std::invalid_argument("params: weight must lie in [0, 1]");
}

void ChannelRealization::validate() const {
  if (direct.size() != forward.size() || direct.size() == 0)
    throw std::invalid_argument("channel: direct/forward size mismatch");
  if (!direct.allFinite() || !forward.allFinite() ||
      !std::isfinite(backward.real()) || !std::isfinite(backward.imag()))
    throw std::invalid_argument("channel: non-finite entries");
  if (direct.norm() == 0.0 && forward.norm() == 0.0)
    throw std::invalid_argument("channel: both links are zero");
}

ChannelRealization generate(const SystemParams& params, double delta_gamma_db,
                            std::uint64_t seed) {
  params.validate();
  Xoshiro256pp rng(seed);
  ChannelRealization ch;
  ch.direct.resize(params.antennas);
  ch.forward.resize(params.antennas);
  for (int m = 0; m < params.antennas; ++m) ch.direct(m) = rng.cscg();
  for (int m = 0; m < params.antennas; ++m) ch.forward(m) = rng.cscg();
  if (params.reflection > 0.0) {
    const double gain = std::pow(10.0, delta_gamma_db / 10.0);
    ch.backward = std::sqrt(gain / params.reflection);  // real, phase 0
  } else {
    ch.backward = 0.0;
  }
  return ch;
}

double relative_gain_db(const ChannelRealization& ch, double reflection) {
  if (!(reflection >= 0.0 && reflection <= 1.0))
    throw std::invalid_argument("relative_gain_db: reflection outside [0, 1]");
  const double gain = reflection * std::norm(ch.backward);
  if (gain == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(gain);
}

cvec equivalent_channel(const ChannelRealization& ch, double reflection,
                        std::complex<double> bd_symbol) {
  if (!(reflection >= 0.0 && reflection <= 1.0))
    throw std::invalid_argument("equivalent_channel: reflection outside [0, 1]");
  return ch.direct +
         std::sqrt(reflection) * bd_symbol * ch.backward * ch.forward;
}

Beamformer Beamformer::canonical(cvec w, const ChannelRealization& ch) {
  const double norm = w.norm();
  if (!(norm > 0.0) || !w.allFinite())
    throw std::invalid_argument("beamformer: zero or non-finite vector");
  w /= norm;
  std::complex<double> ref = ch.direct.dot(w);  // h1^H w
  if (std::abs(ref) < 1e-12) ref = ch.forward.dot(w);
  if (std::abs(ref) >= 1e-12) w *= std::conj(ref) / std::abs(ref);
  return Beamformer(std::move(w));
}

namespace {

json cplx(const std::complex<double>& z) { return json::array({z.real(), z.imag()}); }

std::complex<double> cplx_from(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("channel json: complex entries are [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json vec_to_json(const cvec& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(cplx(v(i)));
  return arr;
}

cvec vec_from_json(const json& arr) {
  cvec v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) v(i) = cplx_from(arr[i]);
  return v;
}

json realization_to_json(const ChannelRealization& ch) {
  return json{{"antennas", ch.antennas()},
              {"direct", vec_to_json(ch.direct)},
              {"forward", vec_to_json(ch.forward)},
              {"backward", cplx(ch.backward)}};
}

ChannelRealization realization_from_json(const json& j) {
  ChannelRealization ch;
  ch.direct = vec_from_json(j.at("direct"));
  ch.forward = vec_from_json(j.at("forward"));
  ch.backward = cplx_from(j.at("backward"));
  if (j.contains("antennas") && j["antennas"].get<int>() != ch.antennas())
    throw std::invalid_argument("channel json: antenna count mismatch");
  ch.validate();
  return ch;
}

}  // namespace

std::string to_json(const ChannelRealization& ch) {
  return realization_to_json(ch).dump();
}

ChannelRealization channel_from_json(const std::string& text) {
  return realization_from_json(json::parse(text));
}

std::string ensemble_to_json(const std::vector<ChannelRealization>& batch) {
  json arr = json::array();
  for (const auto& ch : batch) arr.push_back(realization_to_json(ch));
  return json{{"channels", arr}}.dump();
}

std::vector<ChannelRealization> ensemble_from_json(const std::string& text) {
  const json j = json::parse(text);
  std::vector<ChannelRealization> out;
  for (const auto& item : j.at("channels")) out.push_back(realization_from_json(item));
  return out;
}

}  // namespace srbeam::channel
