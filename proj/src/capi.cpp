// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the srbeam authors

#include "srbeam/srbeam.h"

#include <algorithm>
#include <cstring>
#include <functional>
#include <json.hpp>
#include <memory>
#include <new>
#include <string>

#include "harness.hpp"
#include "specfun.hpp"

namespace {

thread_local std::string g_last_error;

struct Guard {
  srb_status run(const std::function<srb_status()>& body) {
    try {
      return body();
    } catch (const std::domain_error& e) {
      g_last_error = e.what();
      return SRB_E_DOMAIN;
    } catch (const srbeam::beamform::InfeasibleError& e) {
      g_last_error = e.what();
      return SRB_E_INFEASIBLE;
    } catch (const nlohmann::json::exception& e) {
      g_last_error = e.what();
      return SRB_E_PARSE;
    } catch (const std::invalid_argument& e) {
      g_last_error = e.what();
      return SRB_E_INVALID;
    } catch (const std::bad_alloc&) {
      g_last_error = "out of memory";
      return SRB_E_INTERNAL;
    } catch (const std::exception& e) {
      g_last_error = e.what();
      return SRB_E_INTERNAL;
    }
  }
};

srb_status guarded(const std::function<srb_status()>& body) {
  return Guard{}.run(body);
}

srb_status invalid(const char* why) {
  g_last_error = why;
  return SRB_E_INVALID;
}

srbeam::channel::SystemParams to_params(const srb_params& p) {
  srbeam::channel::SystemParams out;
  out.antennas = p.antennas;
  out.transmit_power = p.transmit_power;
  out.noise_power = p.noise_power;
  out.reflection = p.reflection;
  out.spreading = p.spreading;
  out.weight = p.weight;
  out.validate();
  return out;
}

srbeam::beamform::SolverConfig to_solver(const srb_solver_options* o) {
  srbeam::beamform::SolverConfig cfg;
  if (o) {
    cfg.xi_steps = o->xi_steps;
    cfg.xi_refine_tol = o->xi_refine_tol;
    cfg.rand_trials = o->rand_trials;
    cfg.rank_one_tol = o->rank_one_tol;
    cfg.saa_samples = o->saa_samples;
    cfg.grid_t = o->grid_t;
    cfg.grid_phi = o->grid_phi;
    cfg.grid_refine_rounds = o->grid_refine_rounds;
    cfg.seed = o->seed;
  }
  cfg.validate();
  return cfg;
}

srbeam::channel::Beamformer to_beamformer(const srb_channel* ch,
                                          const double* w);

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct srb_channel {
  srbeam::channel::ChannelRealization ch;
};

struct srb_report {
  srbeam::beamform::SolveReport rep;
};

namespace {

srbeam::channel::Beamformer to_beamformer(const srb_channel* ch,
                                          const double* w) {
  const int m = ch->ch.antennas();
  srbeam::channel::cvec v(m);
  for (int i = 0; i < m; ++i) v(i) = {w[2 * i], w[2 * i + 1]};
  return srbeam::channel::Beamformer::canonical(v, ch->ch);
}

}  // namespace

extern "C" {

const char* srb_version(void) { return SRBEAM_VERSION; }

const char* srb_status_name(srb_status status) {
  switch (status) {
    case SRB_OK: return "ok";
    case SRB_E_INVALID: return "invalid argument";
    case SRB_E_DOMAIN: return "domain error";
    case SRB_E_INFEASIBLE: return "infeasible";
    case SRB_E_PARSE: return "parse error";
    case SRB_E_IO: return "io error";
    case SRB_E_VALIDATION: return "validation failure";
    case SRB_E_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* srb_last_error(void) { return g_last_error.c_str(); }

void srb_string_free(char* text) { delete[] text; }

void srb_params_default(srb_params* params) {
  if (!params) return;
  params->antennas = 2;
  params->transmit_power = 1.0;
  params->noise_power = 1.0;
  params->reflection = 1.0;
  params->spreading = 1;
  params->weight = 0.5;
}

srb_status srb_exp_integral_ei(double x, double* out) {
  if (!out) return invalid("null output");
  return guarded([&] {
    *out = srbeam::specfun::exp_integral_ei(x);
    return SRB_OK;
  });
}

srb_status srb_bessel_i0_scaled(double x, double* out) {
  if (!out) return invalid("null output");
  return guarded([&] {
    *out = srbeam::specfun::bessel_i0_scaled(x);
    return SRB_OK;
  });
}

srb_status srb_q1(double x, double* out) {
  if (!out) return invalid("null output");
  return guarded([&] {
    *out = srbeam::specfun::q1(x);
    return SRB_OK;
  });
}

srb_status srb_noncentral_chi2_pdf(double x, double noncentrality,
                                   double component_variance, double* out) {
  if (!out) return invalid("null output");
  return guarded([&] {
    *out = srbeam::specfun::noncentral_chi2_pdf(x, noncentrality,
                                                component_variance);
    return SRB_OK;
  });
}

srb_status srb_psr_bd_rate(double beta, double* out) {
  if (!out) return invalid("null output");
  return guarded([&] {
    *out = srbeam::specfun::psr_bd_rate_closed(beta);
    return SRB_OK;
  });
}

srb_status srb_psr_bd_rate_inverse(double rate, double* out) {
  if (!out) return invalid("null output");
  return guarded([&] {
    *out = srbeam::rates::invert_psr_bd_rate(rate);
    return SRB_OK;
  });
}

srb_status srb_channel_generate(const srb_params* params,
                                double delta_gamma_db, uint64_t seed,
                                srb_channel** out) {
  if (!params || !out) return invalid("null argument");
  return guarded([&] {
    auto handle = std::make_unique<srb_channel>();
    handle->ch = srbeam::channel::generate(to_params(*params), delta_gamma_db,
                                           seed);
    *out = handle.release();
    return SRB_OK;
  });
}

srb_status srb_channel_from_json(const char* text, srb_channel** out) {
  if (!text || !out) return invalid("null argument");
  return guarded([&] {
    auto handle = std::make_unique<srb_channel>();
    handle->ch = srbeam::channel::channel_from_json(text);
    *out = handle.release();
    return SRB_OK;
  });
}

srb_status srb_channel_to_json(const srb_channel* ch, char** out) {
  if (!ch || !out) return invalid("null argument");
  return guarded([&] {
    *out = dup_string(srbeam::channel::to_json(ch->ch));
    return SRB_OK;
  });
}

srb_status srb_channel_antennas(const srb_channel* ch, int32_t* out) {
  if (!ch || !out) return invalid("null argument");
  *out = ch->ch.antennas();
  return SRB_OK;
}

srb_status srb_channel_relative_gain_db(const srb_channel* ch,
                                        double reflection, double* out) {
  if (!ch || !out) return invalid("null argument");
  return guarded([&] {
    *out = srbeam::channel::relative_gain_db(ch->ch, reflection);
    return SRB_OK;
  });
}

void srb_channel_free(srb_channel* ch) { delete ch; }

srb_status srb_rates_psr(const srb_channel* ch, const srb_params* params,
                         const double* w, double* primary, double* bd) {
  if (!ch || !params || !w || !primary || !bd) return invalid("null argument");
  return guarded([&] {
    const auto p = to_params(*params);
    const auto bw = to_beamformer(ch, w);
    *primary = srbeam::rates::psr_primary_rate(ch->ch, bw, p);
    *bd = srbeam::rates::psr_bd_rate(ch->ch, bw, p);
    return SRB_OK;
  });
}

srb_status srb_rates_csr(const srb_channel* ch, const srb_params* params,
                         const double* w, double* primary, double* bd) {
  if (!ch || !params || !w || !primary || !bd) return invalid("null argument");
  return guarded([&] {
    const auto p = to_params(*params);
    const auto bw = to_beamformer(ch, w);
    *primary = srbeam::rates::csr_primary_rate(ch->ch, bw, p);
    *bd = srbeam::rates::csr_bd_rate(ch->ch, bw, p);
    return SRB_OK;
  });
}

void srb_solver_options_default(srb_solver_options* options) {
  if (!options) return;
  const srbeam::beamform::SolverConfig cfg;
  options->xi_steps = cfg.xi_steps;
  options->xi_refine_tol = cfg.xi_refine_tol;
  options->rand_trials = cfg.rand_trials;
  options->rank_one_tol = cfg.rank_one_tol;
  options->saa_samples = cfg.saa_samples;
  options->grid_t = cfg.grid_t;
  options->grid_phi = cfg.grid_phi;
  options->grid_refine_rounds = cfg.grid_refine_rounds;
  options->seed = cfg.seed;
}

srb_status srb_solve_wsrm(const srb_channel* ch, const srb_params* params,
                          const srb_solver_options* options,
                          srb_report** out) {
  if (!ch || !params || !out) return invalid("null argument");
  return guarded([&] {
    const auto p = to_params(*params);
    const auto cfg = to_solver(options);
    auto handle = std::make_unique<srb_report>();
    handle->rep = p.psr() ? srbeam::beamform::solve_wsrm_psr(ch->ch, p, cfg)
                          : srbeam::beamform::solve_wsrm_csr(ch->ch, p, cfg);
    *out = handle.release();
    return SRB_OK;
  });
}

srb_status srb_solve_tpm(const srb_channel* ch, double eps_s, double eps_c,
                         const srb_params* params,
                         const srb_solver_options* options,
                         srb_report** out) {
  if (!ch || !params || !out) return invalid("null argument");
  return guarded([&] {
    const auto p = to_params(*params);
    const auto cfg = to_solver(options);
    auto handle = std::make_unique<srb_report>();
    handle->rep =
        p.psr() ? srbeam::beamform::solve_tpm_psr(ch->ch, eps_s, eps_c, p, cfg)
                : srbeam::beamform::solve_tpm_csr(ch->ch, eps_s, eps_c, p, cfg);
    *out = handle.release();
    return SRB_OK;
  });
}

srb_status srb_grid_search_wsrm(const srb_channel* ch, const srb_params* params,
                                const srb_solver_options* options,
                                srb_report** out) {
  if (!ch || !params || !out) return invalid("null argument");
  return guarded([&] {
    const auto p = to_params(*params);
    const auto cfg = to_solver(options);
    auto handle = std::make_unique<srb_report>();
    handle->rep = srbeam::beamform::grid_search_wsrm(ch->ch, p, cfg);
    *out = handle.release();
    return SRB_OK;
  });
}

srb_status srb_report_objective(const srb_report* rep, double* out) {
  if (!rep || !out) return invalid("null argument");
  *out = rep->rep.objective;
  return SRB_OK;
}

srb_status srb_report_sdr_bound(const srb_report* rep, double* out) {
  if (!rep || !out) return invalid("null argument");
  *out = rep->rep.sdr_bound;
  return SRB_OK;
}

srb_status srb_report_rank_ratio(const srb_report* rep, double* out) {
  if (!rep || !out) return invalid("null argument");
  *out = rep->rep.rank_ratio;
  return SRB_OK;
}

srb_status srb_report_extraction(const srb_report* rep, const char** out) {
  if (!rep || !out) return invalid("null argument");
  *out = rep->rep.extraction == srbeam::beamform::Extraction::kEigenvector
             ? "eigvec"
             : "randomized";
  return SRB_OK;
}

srb_status srb_report_beamformer(const srb_report* rep, double* out,
                                 size_t capacity, size_t* written) {
  if (!rep || !out) return invalid("null argument");
  const auto& w = rep->rep.w;
  const size_t need = 2 * static_cast<size_t>(w.size());
  for (size_t i = 0; i < std::min(capacity / 2, static_cast<size_t>(w.size()));
       ++i) {
    out[2 * i] = w(static_cast<Eigen::Index>(i)).real();
    out[2 * i + 1] = w(static_cast<Eigen::Index>(i)).imag();
  }
  if (written) *written = need;
  if (capacity < need) return invalid("beamformer buffer too small");
  return SRB_OK;
}

void srb_report_free(srb_report* rep) { delete rep; }

srb_status srb_run_experiment(const srb_run_options* options,
                              char** summary_json) {
  if (!options || !options->config_path) return invalid("null config path");
  return guarded([&]() -> srb_status {
    auto cfg = srbeam::harness::load_config(options->config_path);
    if (options->scenario && *options->scenario)
      cfg.scenario = srbeam::harness::scenario_from_name(options->scenario);
    if (options->output_path && *options->output_path)
      cfg.output_path = options->output_path;
    if (options->has_seed) cfg.seed = options->seed;
    if (options->realizations > 0) cfg.realizations = options->realizations;
    if (options->full_scale) cfg.full_scale = true;
    const auto summary = srbeam::harness::run_experiment(cfg);
    if (summary_json) *summary_json = dup_string(summary.to_json());
    if (cfg.scenario == srbeam::harness::Scenario::kValidate &&
        !summary.validation_passed) {
      g_last_error = "validation checks failed; see the written report";
      return SRB_E_VALIDATION;
    }
    return SRB_OK;
  });
}

}  // extern "C"
