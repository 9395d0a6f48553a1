/* SPDX-License-Identifier: Apache-2.0
 * Copyright (c) 2026 the srbeam authors
 *
 * C API for the srbeam library: achievable rates and transmit beamforming
 * for a MISO link assisted by a passive backscatter device.
 *
 * Conventions:
 *  - every fallible call returns an srb_status; 0 is success,
 *  - srb_last_error() describes the most recent failure on this thread,
 *  - complex vectors cross the boundary as interleaved doubles
 *    [re0, im0, re1, im1, ...],
 *  - objects behind opaque handles are freed with their matching _free().
 */

#ifndef SRBEAM_H
#define SRBEAM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined _WIN32
#define SRB_API __declspec(dllexport)
#else
#define SRB_API __attribute__((visibility("default")))
#endif

typedef enum srb_status {
  SRB_OK = 0,
  SRB_E_INVALID = 1,     /* invalid argument or configuration */
  SRB_E_DOMAIN = 2,      /* argument outside a function's domain */
  SRB_E_INFEASIBLE = 3,  /* power minimization has no feasible direction */
  SRB_E_PARSE = 4,       /* malformed JSON/TOML input */
  SRB_E_IO = 5,          /* file system failure */
  SRB_E_VALIDATION = 6,  /* validation scenario reported failures */
  SRB_E_INTERNAL = 7
} srb_status;

SRB_API const char* srb_version(void);
SRB_API const char* srb_status_name(srb_status status);
/* Thread-local message for the last failing call on this thread. */
SRB_API const char* srb_last_error(void);
/* Frees strings returned through char** out-parameters. */
SRB_API void srb_string_free(char* text);

/* Scenario constants (linear, noise-normalized units).  spreading == 1
 * selects the PSR setup, larger values the CSR setup. */
typedef struct srb_params {
  int32_t antennas;       /* M >= 2 */
  double transmit_power;  /* p > 0 */
  double noise_power;     /* sigma^2 > 0 */
  double reflection;      /* alpha in [0, 1] */
  int32_t spreading;      /* N >= 1 */
  double weight;          /* rho in [0, 1] */
} srb_params;

SRB_API void srb_params_default(srb_params* params);

/* ---- special functions ---- */

/* Exponential integral Ei(x), x < 0. */
SRB_API srb_status srb_exp_integral_ei(double x, double* out);
/* e^{-x} I_0(x), x >= 0. */
SRB_API srb_status srb_bessel_i0_scaled(double x, double* out);
/* ln(x) - Ei(-x), x > 0. */
SRB_API srb_status srb_q1(double x, double* out);
/* Noncentral chi-square density (2 dof) with per-component variance. */
SRB_API srb_status srb_noncentral_chi2_pdf(double x, double noncentrality,
                                           double component_variance,
                                           double* out);
/* Closed-form backscatter rate at link SNR beta >= 0 (bits/s/Hz). */
SRB_API srb_status srb_psr_bd_rate(double beta, double* out);
/* Inverse of the above: the SNR required for a given rate. */
SRB_API srb_status srb_psr_bd_rate_inverse(double rate, double* out);

/* ---- channels ---- */

typedef struct srb_channel srb_channel;

/* i.i.d. Rayleigh vector links plus a static backward scalar scaled so the
 * relative backscatter gain equals delta_gamma_db exactly. */
SRB_API srb_status srb_channel_generate(const srb_params* params,
                                        double delta_gamma_db, uint64_t seed,
                                        srb_channel** out);
SRB_API srb_status srb_channel_from_json(const char* text, srb_channel** out);
SRB_API srb_status srb_channel_to_json(const srb_channel* ch, char** out);
SRB_API srb_status srb_channel_antennas(const srb_channel* ch, int32_t* out);
SRB_API srb_status srb_channel_relative_gain_db(const srb_channel* ch,
                                                double reflection, double* out);
SRB_API void srb_channel_free(srb_channel* ch);

/* ---- rates (w: 2*M interleaved doubles, unit norm enforced inside) ---- */

SRB_API srb_status srb_rates_psr(const srb_channel* ch,
                                 const srb_params* params, const double* w,
                                 double* primary, double* bd);
SRB_API srb_status srb_rates_csr(const srb_channel* ch,
                                 const srb_params* params, const double* w,
                                 double* primary, double* bd);

/* ---- beamforming solvers ---- */

typedef struct srb_solver_options {
  int32_t xi_steps;
  double xi_refine_tol;
  int32_t rand_trials;
  double rank_one_tol;
  int32_t saa_samples;
  int32_t grid_t;
  int32_t grid_phi;
  int32_t grid_refine_rounds;
  uint64_t seed;
} srb_solver_options;

SRB_API void srb_solver_options_default(srb_solver_options* options);

typedef struct srb_report srb_report;

/* Weighted sum-rate maximization; the setup follows params->spreading. */
SRB_API srb_status srb_solve_wsrm(const srb_channel* ch,
                                  const srb_params* params,
                                  const srb_solver_options* options,
                                  srb_report** out);
/* Transmit power minimization under rate targets; SRB_E_INFEASIBLE when no
 * direction satisfies them. */
SRB_API srb_status srb_solve_tpm(const srb_channel* ch, double eps_s,
                                 double eps_c, const srb_params* params,
                                 const srb_solver_options* options,
                                 srb_report** out);
/* Reduced-space exhaustive oracle over the two-channel span. */
SRB_API srb_status srb_grid_search_wsrm(const srb_channel* ch,
                                        const srb_params* params,
                                        const srb_solver_options* options,
                                        srb_report** out);

SRB_API srb_status srb_report_objective(const srb_report* rep, double* out);
SRB_API srb_status srb_report_sdr_bound(const srb_report* rep, double* out);
SRB_API srb_status srb_report_rank_ratio(const srb_report* rep, double* out);
/* "eigvec" or "randomized"; pointer owned by the library. */
SRB_API srb_status srb_report_extraction(const srb_report* rep,
                                         const char** out);
/* Copies min(capacity, 2*M) doubles; *written gets 2*M. */
SRB_API srb_status srb_report_beamformer(const srb_report* rep, double* out,
                                         size_t capacity, size_t* written);
SRB_API void srb_report_free(srb_report* rep);

/* ---- experiment harness ---- */

typedef struct srb_run_options {
  const char* config_path; /* required: JSON or TOML experiment config */
  const char* scenario;    /* optional override, e.g. "rate_region" */
  const char* output_path; /* optional override */
  uint64_t seed;           /* used when has_seed != 0 */
  int32_t has_seed;
  int32_t realizations;    /* > 0 overrides the config */
  int32_t full_scale;      /* restores the 1e4-realization setting */
} srb_run_options;

/* Runs the configured scenario; writes the CSV/JSON artifact and returns a
 * JSON summary (free with srb_string_free).  A validation scenario that
 * fails any check returns SRB_E_VALIDATION after writing its report. */
SRB_API srb_status srb_run_experiment(const srb_run_options* options,
                                      char** summary_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SRBEAM_H */
