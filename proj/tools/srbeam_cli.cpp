// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the srbeam authors
//
// CLI driver over the shared-library C API.  Exit codes: 0 success,
// 1 invalid configuration or runtime failure, 2 validation failure.

#include <CLI11.hpp>
#include <cstdio>
#include <string>

#include "srbeam/srbeam.h"

namespace {

struct CommonArgs {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool has_seed = false;
  int realizations = 0;
  bool full = false;
};

void add_common(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("--config", args->config, "experiment config (JSON or TOML)")
      ->required();
  cmd->add_option("--out", args->out, "output path override");
  cmd->add_option("--seed", args->seed, "master seed override")
      ->each([args](const std::string&) { args->has_seed = true; });
  cmd->add_option("--realizations", args->realizations,
                  "channel realization count override");
  cmd->add_flag("--full", args->full,
                "full-scale run (1e4 realizations, as in the reference plots)");
}

int run(const CommonArgs& args, const char* scenario) {
  srb_run_options options{};
  options.config_path = args.config.c_str();
  options.scenario = scenario;
  options.output_path = args.out.empty() ? nullptr : args.out.c_str();
  options.seed = args.seed;
  options.has_seed = args.has_seed ? 1 : 0;
  options.realizations = args.realizations;
  options.full_scale = args.full ? 1 : 0;

  char* summary = nullptr;
  const srb_status status = srb_run_experiment(&options, &summary);
  if (summary) {
    std::printf("%s\n", summary);
    srb_string_free(summary);
  }
  if (status == SRB_OK) return 0;
  std::fprintf(stderr, "error (%s): %s\n", srb_status_name(status),
               srb_last_error());
  return status == SRB_E_VALIDATION ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"achievable rates and transmit beamforming for MISO "
               "backscatter (symbiotic radio) links"};
  app.require_subcommand(1);
  app.set_version_flag("--version", srb_version());

  CommonArgs rate_region, snr_sweep, tpm_sweep, validate;
  std::string tpm_variable = "eps_c";

  add_common(app.add_subcommand("rate-region",
                                "Pareto rate-region sweep over the weight"),
             &rate_region);
  add_common(app.add_subcommand("snr-sweep",
                                "rates versus received SNR for each method"),
             &snr_sweep);
  auto* tpm = app.add_subcommand(
      "tpm-sweep", "minimum transmit power versus a rate requirement");
  add_common(tpm, &tpm_sweep);
  tpm->add_option("--sweep", tpm_variable,
                  "swept requirement: eps_c (default) or eps_s")
      ->check(CLI::IsMember({"eps_c", "eps_s"}));
  add_common(app.add_subcommand("validate", "run the invariant battery"),
             &validate);

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand("rate-region")) return run(rate_region, "rate_region");
  if (app.got_subcommand("snr-sweep")) return run(snr_sweep, "snr_sweep");
  if (app.got_subcommand("tpm-sweep"))
    return run(tpm_sweep, tpm_variable == "eps_s" ? "tpm_eps_s_sweep"
                                                  : "tpm_eps_c_sweep");
  if (app.got_subcommand("validate")) return run(validate, "validate");
  return 1;
}
