#include "superkde/superkde.h"

#include "superkde/error.hpp"
#include "superkde/estimation.hpp"
#include "superkde/experiment.hpp"
#include "superkde/risk.hpp"
#include "superkde/selectors.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <new>
#include <string>

using namespace superkde;

struct skde_kernel
{
  KernelSpec spec;
};

struct skde_density
{
  DensitySpec spec;
};

struct skde_sample
{
  Sample data;
};

struct skde_config
{
  ExperimentConfig config;
};

struct skde_results
{
  ExperimentConfig config;
  ExperimentResult result;
};

namespace {

thread_local std::string last_error;

skde_status
to_status(ErrorCode code)
{
  switch (code) {
    case ErrorCode::invalid_argument: return SKDE_INVALID_ARGUMENT;
    case ErrorCode::invalid_bandwidth: return SKDE_INVALID_BANDWIDTH;
    case ErrorCode::invalid_bracket: return SKDE_INVALID_BRACKET;
    case ErrorCode::non_convergence: return SKDE_NON_CONVERGENCE;
    case ErrorCode::divergent: return SKDE_DIVERGENT;
    case ErrorCode::not_integrable: return SKDE_NOT_INTEGRABLE;
    case ErrorCode::not_applicable: return SKDE_NOT_APPLICABLE;
    case ErrorCode::no_flat_region: return SKDE_NO_FLAT_REGION;
    case ErrorCode::empty_grid: return SKDE_EMPTY_GRID;
    case ErrorCode::degenerate_sample: return SKDE_DEGENERATE_SAMPLE;
    case ErrorCode::no_root: return SKDE_NO_ROOT;
    case ErrorCode::config_error: return SKDE_CONFIG_ERROR;
    case ErrorCode::io_error: return SKDE_IO_ERROR;
  }
  return SKDE_INTERNAL_ERROR;
}

template<class F>
skde_status
guarded(F&& body)
{
  try {
    body();
    return SKDE_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return SKDE_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    last_error = e.what();
    return SKDE_INTERNAL_ERROR;
  } catch (...) {
    last_error = "unknown exception";
    return SKDE_INTERNAL_ERROR;
  }
}

void
require(bool ok, const char* what)
{
  if (!ok) {
    throw Error(ErrorCode::invalid_argument, what);
  }
}

void
write_text(const std::string& text, const char* path)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::io_error, std::string("cannot open '") + path + "' for writing");
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw Error(ErrorCode::io_error, std::string("failed writing '") + path + "'");
  }
}

} // namespace

extern "C" {

const char*
skde_last_error(void)
{
  return last_error.c_str();
}

const char*
skde_status_name(skde_status status)
{
  switch (status) {
    case SKDE_OK: return "Ok";
    case SKDE_INTERNAL_ERROR: return "InternalError";
    default: break;
  }
  static constexpr ErrorCode codes[] = {
    ErrorCode::invalid_argument, ErrorCode::invalid_bandwidth, ErrorCode::invalid_bracket,
    ErrorCode::non_convergence,  ErrorCode::divergent,         ErrorCode::not_integrable,
    ErrorCode::not_applicable,   ErrorCode::no_flat_region,    ErrorCode::empty_grid,
    ErrorCode::degenerate_sample, ErrorCode::no_root,          ErrorCode::config_error,
    ErrorCode::io_error,
  };
  for (ErrorCode c : codes) {
    if (to_status(c) == status) {
      return error_code_name(c);
    }
  }
  return "Unknown";
}

// ------------------------------------------------------------------ kernels

skde_status
skde_kernel_create(const char* name, skde_kernel** out)
{
  return guarded([&] {
    require(name && out, "skde_kernel_create: null argument");
    *out = new skde_kernel{ kernel_from_name(name) };
  });
}

void
skde_kernel_destroy(skde_kernel* kernel)
{
  delete kernel;
}

skde_status
skde_kernel_eval(const skde_kernel* kernel, double x, double* out)
{
  return guarded([&] {
    require(kernel && out, "skde_kernel_eval: null argument");
    *out = kernel_eval(kernel->spec, x);
  });
}

skde_status
skde_kernel_cf(const skde_kernel* kernel, double t, double* out)
{
  return guarded([&] {
    require(kernel && out, "skde_kernel_cf: null argument");
    *out = kernel_cf(kernel->spec, t);
  });
}

skde_status
skde_kernel_roughness(const skde_kernel* kernel, double* out)
{
  return guarded([&] {
    require(kernel && out, "skde_kernel_roughness: null argument");
    *out = kernel->spec.roughness();
  });
}

skde_status
skde_kernel_moment(const skde_kernel* kernel, int j, double* out)
{
  return guarded([&] {
    require(kernel && out, "skde_kernel_moment: null argument");
    *out = kernel_moment(kernel->spec, j).value;
  });
}

skde_status
skde_kernel_admissible(const skde_kernel* kernel, int* out)
{
  return guarded([&] {
    require(kernel && out, "skde_kernel_admissible: null argument");
    *out = check_admissible(kernel->spec) ? 1 : 0;
  });
}

skde_status
skde_kernel_classify(const skde_kernel* kernel,
                     int j_max,
                     double moment_eps,
                     skde_classification* out)
{
  return guarded([&] {
    require(kernel && out, "skde_kernel_classify: null argument");
    require(j_max <= SKDE_MAX_MOMENTS, "skde_kernel_classify: j_max too large");
    const KernelClassification c = classify(kernel->spec, j_max, moment_eps);
    *out = skde_classification{};
    out->s_k = c.s_k;
    out->t_k = c.t_k;
    out->order = c.order.value_or(0);
    out->is_superkernel = c.is_superkernel ? 1 : 0;
    out->roughness = c.roughness;
    out->moment_count = static_cast<int>(c.moments.size());
    std::copy(c.moments.begin(), c.moments.end(), out->moments);
  });
}

// ---------------------------------------------------------------- densities

skde_status
skde_density_create(const char* name, skde_density** out)
{
  return guarded([&] {
    require(name && out, "skde_density_create: null argument");
    *out = new skde_density{ density_from_name(name) };
  });
}

void
skde_density_destroy(skde_density* density)
{
  delete density;
}

skde_status
skde_density_pdf(const skde_density* density, double x, double* out)
{
  return guarded([&] {
    require(density && out, "skde_density_pdf: null argument");
    *out = density_eval(density->spec, x);
  });
}

skde_status
skde_density_cf(const skde_density* density, double t, double* out)
{
  return guarded([&] {
    require(density && out, "skde_density_cf: null argument");
    *out = density_cf(density->spec, t);
  });
}

skde_status
skde_density_cdf(const skde_density* density, double x, double* out)
{
  return guarded([&] {
    require(density && out, "skde_density_cdf: null argument");
    *out = density_cdf(density->spec, x);
  });
}

skde_status
skde_density_deriv_roughness(const skde_density* density, int k, double* out)
{
  return guarded([&] {
    require(density && out, "skde_density_deriv_roughness: null argument");
    *out = deriv_roughness(density->spec, k);
  });
}

// ------------------------------------------------------------------ samples

skde_status
skde_sample_create(const double* points, size_t n, skde_sample** out)
{
  return guarded([&] {
    require(out && (points || n == 0), "skde_sample_create: null argument");
    *out = new skde_sample{ Sample(std::vector<double>(points, points + n)) };
  });
}

skde_status
skde_sample_draw(const skde_density* density,
                 size_t n,
                 uint64_t seed,
                 uint64_t stream_id,
                 skde_sample** out)
{
  return guarded([&] {
    require(density && out, "skde_sample_draw: null argument");
    RngStream rng(seed, stream_id);
    *out = new skde_sample{ sample(density->spec, n, rng) };
  });
}

void
skde_sample_destroy(skde_sample* sample)
{
  delete sample;
}

size_t
skde_sample_size(const skde_sample* sample)
{
  return sample ? sample->data.n() : 0;
}

skde_status
skde_sample_points(const skde_sample* sample, double* buffer, size_t capacity)
{
  return guarded([&] {
    require(sample && (buffer || capacity == 0), "skde_sample_points: null argument");
    const auto pts = sample->data.points();
    std::copy_n(pts.begin(), std::min(capacity, pts.size()), buffer);
  });
}

// --------------------------------------------------------------- estimation

skde_status
skde_kde_eval(const skde_kernel* kernel,
              double h,
              const skde_sample* sample,
              double x,
              double* out)
{
  return guarded([&] {
    require(kernel && sample && out, "skde_kde_eval: null argument");
    *out = kde_eval(Estimate(kernel->spec, h, sample->data), x);
  });
}

skde_status
skde_ecf(const skde_sample* sample, double t, double* re, double* im)
{
  return guarded([&] {
    require(sample && re && im, "skde_ecf: null argument");
    const auto v = ecf(sample->data, t);
    *re = v.real();
    *im = v.imag();
  });
}

// --------------------------------------------------------------------- risk

skde_status
skde_mise(const skde_kernel* kernel,
          const skde_density* density,
          uint64_t n,
          double h,
          skde_risk_report* out)
{
  return guarded([&] {
    require(kernel && density && out, "skde_mise: null argument");
    const RiskReport r = mise_exact(kernel->spec, density->spec, n, h);
    *out = { r.h, r.bias_term, r.variance_term, r.mise, r.n };
  });
}

skde_status
skde_variance_identity(const skde_kernel* kernel,
                       const skde_density* density,
                       uint64_t n,
                       double h,
                       double* out)
{
  return guarded([&] {
    require(kernel && density && out, "skde_variance_identity: null argument");
    *out = variance_identity_check(kernel->spec, density->spec, n, h);
  });
}

skde_status
skde_optimal_bandwidth(const skde_kernel* kernel,
                       const skde_density* density,
                       uint64_t n,
                       double h_lo,
                       double h_hi,
                       double* h0n,
                       double* phi)
{
  return guarded([&] {
    require(kernel && density && h0n && phi, "skde_optimal_bandwidth: null argument");
    const OptimalBandwidthResult r =
      (h_lo == 0.0 && h_hi == 0.0)
        ? optimal_bandwidth(kernel->spec, density->spec, n)
        : optimal_bandwidth(kernel->spec, density->spec, n, h_lo, h_hi);
    *h0n = r.h0n;
    *phi = r.phi;
  });
}

skde_status
skde_ise(const skde_kernel* kernel,
         double h,
         const skde_sample* sample,
         const skde_density* density,
         skde_ise_route route,
         double* out)
{
  return guarded([&] {
    require(kernel && sample && density && out, "skde_ise: null argument");
    *out = ise_exact(kernel->spec, h, sample->data, density->spec,
                     route == SKDE_ISE_PAIR_SUM ? IseRoute::pair_sum : IseRoute::fourier);
  });
}

skde_status
skde_zero_bias_bandwidth(const skde_kernel* kernel, const skde_density* density, double* out)
{
  return guarded([&] {
    require(kernel && density && out, "skde_zero_bias_bandwidth: null argument");
    *out = zero_bias_bandwidth(kernel->spec, density->spec);
  });
}

skde_status
skde_parametric_bound(const skde_kernel* kernel, const skde_density* density, double* out)
{
  return guarded([&] {
    require(kernel && density && out, "skde_parametric_bound: null argument");
    *out = parametric_bound(kernel->spec, density->spec);
  });
}

skde_status
skde_smooth_rate_bound(const skde_kernel* kernel,
                       const skde_density* density,
                       int k,
                       double* out)
{
  return guarded([&] {
    require(kernel && density && out, "skde_smooth_rate_bound: null argument");
    *out = smooth_rate_bound(kernel->spec, density->spec, k);
  });
}

// ---------------------------------------------------------------- selectors

skde_status
skde_select_politis(const skde_sample* sample, double c, double ell, double* h, double* d_hat)
{
  return guarded([&] {
    require(sample && h, "skde_select_politis: null argument");
    PolitisSettings settings;
    settings.c = c;
    settings.ell = ell;
    const SelectorResult r = politis_select(sample->data, settings);
    *h = r.h;
    if (d_hat) {
      *d_hat = r.diagnostics.at("D_hat");
    }
  });
}

skde_status
skde_select_lscv(const skde_sample* sample,
                 const skde_kernel* kernel,
                 const double* h_grid,
                 size_t grid_size,
                 double* h)
{
  return guarded([&] {
    require(sample && kernel && h && (h_grid || grid_size == 0),
            "skde_select_lscv: null argument");
    const std::vector<double> grid(h_grid, h_grid + grid_size);
    *h = lscv_select(sample->data, kernel->spec, grid).h;
  });
}

skde_status
skde_lscv_score(const skde_sample* sample,
                const skde_kernel* kernel,
                double h,
                skde_ise_route route,
                double* out)
{
  return guarded([&] {
    require(sample && kernel && out, "skde_lscv_score: null argument");
    *out = lscv_score(sample->data, kernel->spec, h,
                      route == SKDE_ISE_PAIR_SUM ? LscvRoute::pair_sum : LscvRoute::fourier);
  });
}

skde_status
skde_select_sj(const skde_sample* sample, double* h)
{
  return guarded([&] {
    require(sample && h, "skde_select_sj: null argument");
    *h = sj_select(sample->data).h;
  });
}

// -------------------------------------------------------------- experiments

skde_status
skde_config_create(skde_config** out)
{
  return guarded([&] {
    require(out, "skde_config_create: null argument");
    *out = new skde_config{};
  });
}

void
skde_config_destroy(skde_config* config)
{
  delete config;
}

skde_status
skde_config_load_file(skde_config* config, const char* path)
{
  return guarded([&] {
    require(config && path, "skde_config_load_file: null argument");
    // parse into a scratch config so a bad file leaves `config` untouched
    ExperimentConfig loaded = config->config;
    load_config_file(loaded, path);
    config->config = std::move(loaded);
  });
}

skde_status
skde_config_set(skde_config* config, const char* key, const char* value)
{
  return guarded([&] {
    require(config && key && value, "skde_config_set: null argument");
    apply_config_value(config->config, key, value);
  });
}

skde_status
skde_config_validate(const skde_config* config)
{
  return guarded([&] {
    require(config, "skde_config_validate: null argument");
    config->config.validate();
  });
}

const char*
skde_config_out_path(const skde_config* config)
{
  return config ? config->config.out_path.c_str() : nullptr;
}

int
skde_config_verbose(const skde_config* config)
{
  return config && config->config.verbose ? 1 : 0;
}

skde_status
skde_run_experiment(const skde_config* config,
                    skde_progress_fn progress,
                    void* user,
                    skde_results** out)
{
  return guarded([&] {
    require(config && out, "skde_run_experiment: null argument");
    ProgressCallback cb;
    if (progress) {
      cb = [progress, user](std::uint64_t n, std::uint64_t rep) { progress(n, rep, user); };
    }
    auto results = std::make_unique<skde_results>();
    results->config = config->config;
    results->result = run_experiment(config->config, cb);
    *out = results.release();
  });
}

void
skde_results_destroy(skde_results* results)
{
  delete results;
}

size_t
skde_results_row_count(const skde_results* results)
{
  return results ? results->result.rows.size() : 0;
}

size_t
skde_results_failure_count(const skde_results* results)
{
  return results ? results->result.failures.size() : 0;
}

skde_status
skde_results_row(const skde_results* results, size_t index, skde_result_row* out)
{
  return guarded([&] {
    require(results && out, "skde_results_row: null argument");
    require(index < results->result.rows.size(), "skde_results_row: index out of range");
    const ResultRow& r = results->result.rows[index];
    *out = { r.n, r.method.c_str(), r.mean_ise_scaled, r.sd_ise_scaled,
             r.reps, r.seed, r.fallback_count };
  });
}

skde_status
skde_results_write_csv(const skde_results* results, const char* path)
{
  return guarded([&] {
    require(results && path, "skde_results_write_csv: null argument");
    write_csv(results->result.rows, path);
  });
}

skde_status
skde_results_write_metadata(const skde_results* results, const char* path)
{
  return guarded([&] {
    require(results && path, "skde_results_write_metadata: null argument");
    write_text(format_metadata(results->config, results->result), path);
  });
}

skde_status
skde_results_write_records(const skde_results* results, const char* path)
{
  return guarded([&] {
    require(results && path, "skde_results_write_records: null argument");
    require(results->config.verbose, "skde_results_write_records: run was not verbose");
    write_text(format_records(results->result.records), path);
  });
}

} // extern "C"
