// superkde command line: Monte Carlo harness plus kernel/risk inspection.
#include "superkde/superkde.h"

#include <CLI11.hpp>

#include <cstdio>
#include <map>
#include <optional>
#include <string>

namespace {

constexpr int exit_config = 2;
constexpr int exit_numeric = 3;

int
fail(skde_status status)
{
  std::fprintf(stderr, "superkde: %s: %s\n", skde_status_name(status), skde_last_error());
  const bool config_side = status == SKDE_CONFIG_ERROR || status == SKDE_IO_ERROR ||
                           status == SKDE_INVALID_ARGUMENT;
  return config_side ? exit_config : exit_numeric;
}

struct SimOptions
{
  std::optional<std::string> config;
  std::map<std::string, std::string> flags;
  bool verbose = false;
};

void
progress(uint64_t n, uint64_t rep, void*)
{
  std::fprintf(stderr, "  n=%llu rep=%llu\n", static_cast<unsigned long long>(n),
               static_cast<unsigned long long>(rep));
}

int
run_sim(const SimOptions& opt)
{
  skde_config* cfg = nullptr;
  skde_status st = skde_config_create(&cfg);
  if (st != SKDE_OK) {
    return fail(st);
  }
  const auto finish = [&](int code) {
    skde_config_destroy(cfg);
    return code;
  };
  if (opt.config && (st = skde_config_load_file(cfg, opt.config->c_str())) != SKDE_OK) {
    return finish(fail(st));
  }
  for (const auto& [key, value] : opt.flags) {
    if ((st = skde_config_set(cfg, key.c_str(), value.c_str())) != SKDE_OK) {
      return finish(fail(st));
    }
  }
  if (opt.verbose && (st = skde_config_set(cfg, "verbose", "true")) != SKDE_OK) {
    return finish(fail(st));
  }
  if ((st = skde_config_validate(cfg)) != SKDE_OK) {
    return finish(fail(st));
  }

  skde_results* results = nullptr;
  const bool verbose = skde_config_verbose(cfg) != 0;
  st = skde_run_experiment(cfg, verbose ? progress : nullptr, nullptr, &results);
  if (st != SKDE_OK) {
    return finish(fail(st));
  }
  const std::string out = skde_config_out_path(cfg);
  const std::string meta = out + ".meta.json";
  st = skde_results_write_csv(results, out.c_str());
  if (st == SKDE_OK) {
    st = skde_results_write_metadata(results, meta.c_str());
  }
  if (st == SKDE_OK && verbose) {
    st = skde_results_write_records(results, (out + ".reps.csv").c_str());
  }
  if (st != SKDE_OK) {
    skde_results_destroy(results);
    return finish(fail(st));
  }

  std::printf("%-6s %-8s %12s %12s %5s %9s\n", "n", "method", "mean_x1000", "sd_x1000",
              "reps", "fallback");
  for (size_t i = 0; i < skde_results_row_count(results); ++i) {
    skde_result_row row;
    skde_results_row(results, i, &row);
    std::printf("%-6llu %-8s %12.6g %12.6g %5llu %9llu\n",
                static_cast<unsigned long long>(row.n), row.method, row.mean_ise_scaled,
                row.sd_ise_scaled, static_cast<unsigned long long>(row.reps),
                static_cast<unsigned long long>(row.fallback_count));
  }
  if (const size_t failed = skde_results_failure_count(results)) {
    std::fprintf(stderr, "superkde: %zu replications failed (see %s)\n", failed,
                 meta.c_str());
  }
  std::printf("wrote %s and %s\n", out.c_str(), meta.c_str());
  skde_results_destroy(results);
  return finish(0);
}

int
run_classify(const std::string& kernel_name, int j_max, double eps)
{
  skde_kernel* k = nullptr;
  skde_status st = skde_kernel_create(kernel_name.c_str(), &k);
  if (st != SKDE_OK) {
    return fail(st);
  }
  skde_classification c;
  st = skde_kernel_classify(k, j_max, eps, &c);
  skde_kernel_destroy(k);
  if (st != SKDE_OK) {
    return fail(st);
  }
  std::printf("kernel = %s\n", kernel_name.c_str());
  std::printf("s_k = %.6g\n", c.s_k);
  std::printf("t_k = %.6g\n", c.t_k);
  if (c.order > 0) {
    std::printf("order = %d\n", c.order);
  } else if (c.moment_count == 0) {
    std::printf("order = undefined (not integrable, no moments)\n");
  } else {
    std::printf("order = infinite (no nonzero moment up to j = %d)\n", j_max);
  }
  std::printf("roughness = %.10g\n", c.roughness);
  std::printf("is_superkernel = %s\n", c.is_superkernel ? "true" : "false");
  for (int j = 0; j < c.moment_count; ++j) {
    std::printf("m%d = %.6e\n", j + 1, c.moments[j]);
  }
  return 0;
}

int
run_mise(const std::string& kernel_name, const std::string& density_name, uint64_t n, double h)
{
  skde_kernel* k = nullptr;
  skde_density* d = nullptr;
  skde_status st = skde_kernel_create(kernel_name.c_str(), &k);
  if (st == SKDE_OK) {
    st = skde_density_create(density_name.c_str(), &d);
  }
  if (st != SKDE_OK) {
    skde_kernel_destroy(k);
    return fail(st);
  }
  skde_risk_report r;
  st = skde_mise(k, d, n, h, &r);
  skde_kernel_destroy(k);
  skde_density_destroy(d);
  if (st != SKDE_OK) {
    return fail(st);
  }
  std::printf("h = %.5e\n", r.h);
  std::printf("n = %llu\n", static_cast<unsigned long long>(r.n));
  std::printf("bias_term = %.5e\n", r.bias_term);
  std::printf("variance_term = %.5e\n", r.variance_term);
  std::printf("mise = %.5e\n", r.mise);
  return 0;
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{ "Superkernel density estimation toolkit" };
  app.require_subcommand(1);

  SimOptions sim;
  auto* sim_cmd = app.add_subcommand("sim", "Run the bandwidth-selector Monte Carlo experiment");
  sim_cmd->add_option("--config", sim.config, "key = value config file");
  std::map<std::string, std::string> raw;
  for (const char* key : { "density", "kernel", "selectors", "sizes", "reps", "seed", "out",
                           "workers", "ise-scale" }) {
    sim_cmd->add_option(std::string("--") + key, raw[key]);
  }
  sim_cmd->add_flag("--verbose", sim.verbose, "Progress on stderr and a per-rep log");

  std::string kernel_name;
  int j_max = 10;
  double eps = 1e-6;
  auto* classify_cmd = app.add_subcommand("classify", "Flatness, order and roughness of a kernel");
  classify_cmd->add_option("--kernel", kernel_name)->required();
  classify_cmd->add_option("--j-max", j_max)->check(CLI::Range(2, SKDE_MAX_MOMENTS));
  classify_cmd->add_option("--eps", eps)->check(CLI::PositiveNumber);

  std::string mise_kernel;
  std::string mise_density;
  uint64_t mise_n = 0;
  double mise_h = 0.0;
  auto* mise_cmd = app.add_subcommand("mise", "Exact MISE decomposition");
  mise_cmd->set_help_flag("--help", "Print this help message and exit");
  mise_cmd->add_option("--kernel", mise_kernel)->required();
  mise_cmd->add_option("--density", mise_density)->required();
  mise_cmd->add_option("--n", mise_n)->required();
  mise_cmd->add_option("--h", mise_h)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config;
  }

  if (*sim_cmd) {
    for (const auto& [key, value] : raw) {
      if (sim_cmd->count(std::string("--") + key) > 0) {
        sim.flags[key] = value;
      }
    }
    return run_sim(sim);
  }
  if (*classify_cmd) {
    return run_classify(kernel_name, j_max, eps);
  }
  return run_mise(mise_kernel, mise_density, mise_n, mise_h);
}
