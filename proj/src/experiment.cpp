#include "superkde/experiment.hpp"

#include "superkde/error.hpp"
#include "superkde/risk.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace superkde {

namespace {

std::string
trim(const std::string& s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string
lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return s;
}

[[noreturn]] void
config_error(const std::string& key, const std::string& why)
{
  throw Error(ErrorCode::config_error, "config key '" + key + "': " + why);
}

std::uint64_t
parse_u64(const std::string& key, const std::string& text)
{
  const std::string t = trim(text);
  std::uint64_t value = 0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || end != t.data() + t.size() || t.empty()) {
    config_error(key, "expected a nonnegative integer, got '" + text + "'");
  }
  return value;
}

double
parse_real(const std::string& key, const std::string& text)
{
  const std::string t = trim(text);
  char* end = nullptr;
  const double value = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(value)) {
    config_error(key, "expected a real number, got '" + text + "'");
  }
  return value;
}

bool
parse_bool(const std::string& key, const std::string& text)
{
  const std::string t = lower(trim(text));
  if (t == "1" || t == "true" || t == "yes" || t == "on") {
    return true;
  }
  if (t == "0" || t == "false" || t == "no" || t == "off") {
    return false;
  }
  config_error(key, "expected a boolean, got '" + text + "'");
}

std::vector<std::string>
split_list(const std::string& text)
{
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) {
      out.push_back(item);
    }
  }
  return out;
}

bool
is_known_selector(const std::string& s)
{
  return s == "cv" || s == "sj" || s == "politis";
}

} // namespace

const std::vector<std::string>&
config_keys()
{
  static const std::vector<std::string> keys = {
    "density", "kernel",   "selectors", "sizes", "reps",
    "seed",    "out",      "workers",   "verbose", "ise-scale",
  };
  return keys;
}

void
ExperimentConfig::validate() const
{
  try {
    density_from_name(density);
  } catch (const Error& e) {
    config_error("density", e.what());
  }
  try {
    kernel_from_name(kernel);
  } catch (const Error& e) {
    config_error("kernel", e.what());
  }
  if (selectors.empty()) {
    config_error("selectors", "at least one selector is required");
  }
  for (const auto& s : selectors) {
    if (!is_known_selector(s)) {
      config_error("selectors", "unknown selector '" + s + "' (expected cv, sj or politis)");
    }
  }
  if (sizes.empty()) {
    config_error("sizes", "at least one sample size is required");
  }
  for (std::uint64_t n : sizes) {
    if (n < 10) {
      config_error("sizes", "sample sizes must be >= 10");
    }
    if (n > 0xffffffffull) {
      config_error("sizes", "sample sizes must fit in 32 bits");
    }
  }
  if (reps < 1) {
    config_error("reps", "must be >= 1");
  }
  if (reps > 0xffffffffull) {
    config_error("reps", "must fit in 32 bits");
  }
  if (!(ise_scale > 0.0)) {
    config_error("ise-scale", "must be positive");
  }
  if (workers < 1) {
    config_error("workers", "must be >= 1");
  }
  if (out_path.empty()) {
    config_error("out", "must not be empty");
  }
}

void
apply_config_value(ExperimentConfig& config,
                   const std::string& raw_key,
                   const std::string& value)
{
  const std::string key = lower(trim(raw_key));
  if (key == "density") {
    config.density = lower(trim(value));
  } else if (key == "kernel") {
    config.kernel = lower(trim(value));
  } else if (key == "selectors") {
    config.selectors.clear();
    for (auto& s : split_list(value)) {
      config.selectors.push_back(lower(s));
    }
  } else if (key == "sizes") {
    config.sizes.clear();
    for (const auto& s : split_list(value)) {
      config.sizes.push_back(parse_u64(key, s));
    }
  } else if (key == "reps") {
    config.reps = parse_u64(key, value);
  } else if (key == "seed") {
    config.seed = parse_u64(key, value);
  } else if (key == "out") {
    config.out_path = trim(value);
  } else if (key == "workers") {
    const auto w = parse_u64(key, value);
    if (w < 1 || w > 4096) {
      config_error(key, "must be between 1 and 4096");
    }
    config.workers = static_cast<unsigned>(w);
  } else if (key == "verbose") {
    config.verbose = parse_bool(key, value);
  } else if (key == "ise-scale" || key == "ise_scale") {
    config.ise_scale = parse_real("ise-scale", value);
  } else {
    config_error(key, "unknown key");
  }
}

void
load_config_file(ExperimentConfig& config, const std::string& path)
{
  std::ifstream in(path);
  if (!in) {
    config_error("config", "cannot read '" + path + "'");
  }
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      config_error("config", "line " + std::to_string(line_no) + " of '" + path +
                               "' is not `key = value`");
    }
    apply_config_value(config, line.substr(0, eq), line.substr(eq + 1));
  }
}

ExperimentConfig
parse_config(const std::optional<std::string>& path,
             const std::map<std::string, std::string>& overrides)
{
  ExperimentConfig config;
  if (path) {
    load_config_file(config, *path);
  }
  for (const auto& [key, value] : overrides) {
    apply_config_value(config, key, value);
  }
  config.validate();
  return config;
}

std::uint64_t
replication_stream_id(std::uint64_t n, std::uint64_t rep)
{
  return (n << 32) | (rep & 0xffffffffull);
}

std::uint64_t
sample_hash(const Sample& sample)
{
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (double x : sample.points()) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &x, sizeof(double));
    for (unsigned char b : bytes) {
      hash ^= b;
      hash *= 0x100000001b3ull;
    }
  }
  return hash;
}

namespace {

struct Outcome
{
  double h = 0.0;
  double ise = 0.0;
  bool fallback = false;
};

struct RepOutcome
{
  std::vector<Outcome> methods;
  std::uint64_t hash = 0;
  std::string failure;
};

RepOutcome
run_replication(const ExperimentConfig& config,
                const DensitySpec& density,
                const KernelSpec& kernel,
                const KernelSpec& gaussian,
                std::uint64_t n,
                std::uint64_t rep)
{
  RepOutcome out;
  RngStream rng(config.seed, replication_stream_id(n, rep));
  const Sample data = sample(density, n, rng);
  out.hash = sample_hash(data);

  try {
    for (const auto& method : config.selectors) {
      Outcome o;
      const KernelSpec* used = &kernel;
      if (method == "politis") {
        try {
          o.h = politis_select(data, config.politis).h;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::no_flat_region) {
            throw;
          }
          o.h = 1.0 / config.politis.d_max;
          o.fallback = true;
        }
      } else if (method == "cv") {
        double center = 0.0;
        try {
          center = zero_bias_bandwidth(kernel, density);
        } catch (const Error&) {
          center = robust_scale(data) * std::pow(static_cast<double>(n), -0.2);
        }
        o.h = lscv_select(data, kernel, lscv_default_grid(center)).h;
      } else {
        o.h = sj_select(data).h;
        used = &gaussian;
      }
      o.ise = ise_exact(*used, o.h, data, density, IseRoute::pair_sum);
      out.methods.push_back(o);
    }
  } catch (const Error& e) {
    out.methods.clear();
    out.failure = "n=" + std::to_string(n) + " rep=" + std::to_string(rep) +
                  ": " + error_code_name(e.code()) + ": " + e.what();
  }
  return out;
}

} // namespace

ExperimentResult
run_experiment(const ExperimentConfig& config, const ProgressCallback& progress)
{
  config.validate();
  const DensitySpec density = density_from_name(config.density);
  const KernelSpec kernel = kernel_from_name(config.kernel);
  const KernelSpec gaussian = gaussian_kernel();

  struct Task
  {
    std::size_t size_index;
    std::uint64_t rep;
  };
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < config.sizes.size(); ++s) {
    for (std::uint64_t r = 0; r < config.reps; ++r) {
      tasks.push_back({ s, r });
    }
  }
  std::vector<RepOutcome> outcomes(tasks.size());

  std::atomic<std::size_t> next{ 0 };
  std::mutex progress_mutex;
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) {
        return;
      }
      const std::uint64_t n = config.sizes[tasks[i].size_index];
      outcomes[i] =
        run_replication(config, density, kernel, gaussian, n, tasks[i].rep);
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(n, tasks[i].rep);
      }
    }
  };
  const unsigned thread_count =
    std::max(1u, std::min<unsigned>(config.workers, static_cast<unsigned>(tasks.size())));
  if (thread_count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < thread_count; ++t) {
      pool.emplace_back(worker);
    }
    for (auto& t : pool) {
      t.join();
    }
  }

  // reduction in (size, rep) order, independent of scheduling
  ExperimentResult result;
  result.single_rep_sd_zero = config.reps == 1;
  std::size_t i = 0;
  for (std::size_t s = 0; s < config.sizes.size(); ++s) {
    const std::uint64_t n = config.sizes[s];
    const std::size_t m = config.selectors.size();
    std::vector<std::vector<double>> values(m);
    std::vector<std::uint64_t> fallbacks(m, 0);
    for (std::uint64_t r = 0; r < config.reps; ++r, ++i) {
      const RepOutcome& o = outcomes[i];
      if (!o.failure.empty()) {
        result.failures.push_back(o.failure);
        continue;
      }
      for (std::size_t k = 0; k < m; ++k) {
        values[k].push_back(config.ise_scale * o.methods[k].ise);
        fallbacks[k] += o.methods[k].fallback ? 1 : 0;
        if (config.verbose) {
          result.records.push_back({ n, r, config.selectors[k], o.methods[k].h,
                                     o.methods[k].ise, o.methods[k].fallback,
                                     o.hash });
        }
      }
    }
    if (values[0].empty()) {
      throw Error(ErrorCode::non_convergence,
                  "run_experiment: every replication failed at n = " +
                    std::to_string(n));
    }
    for (std::size_t k = 0; k < m; ++k) {
      const auto& v = values[k];
      const double count = static_cast<double>(v.size());
      double mean = 0.0;
      for (double x : v) {
        mean += x;
      }
      mean /= count;
      double sd = 0.0;
      if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) {
          ss += (x - mean) * (x - mean);
        }
        sd = std::sqrt(ss / (count - 1.0));
      }
      result.rows.push_back({ n, config.selectors[k], mean, sd, v.size(),
                              config.seed, fallbacks[k] });
    }
  }
  return result;
}

namespace {

std::string
format_real(double x)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

} // namespace

std::string
format_csv(const std::vector<ResultRow>& rows)
{
  if (rows.empty()) {
    throw Error(ErrorCode::invalid_argument, "format_csv: no rows to write");
  }
  std::string out = "n,method,mean_ise_x1000,sd_ise_x1000,reps,seed,fallback_count\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + ',' + r.method + ',' + format_real(r.mean_ise_scaled) +
           ',' + format_real(r.sd_ise_scaled) + ',' + std::to_string(r.reps) + ',' +
           std::to_string(r.seed) + ',' + std::to_string(r.fallback_count) + '\n';
  }
  return out;
}

void
write_csv(const std::vector<ResultRow>& rows, const std::string& path)
{
  const std::string text = format_csv(rows);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::io_error, "cannot open '" + path + "' for writing");
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw Error(ErrorCode::io_error, "failed writing '" + path + "'");
  }
}

std::string
format_metadata(const ExperimentConfig& config, const ExperimentResult& result)
{
  nlohmann::ordered_json meta;
  meta["prng"] = RngStream::algorithm;
  meta["stream_id"] = "(n << 32) | rep";
  meta["config"] = {
    { "density", config.density },     { "kernel", config.kernel },
    { "selectors", config.selectors }, { "sizes", config.sizes },
    { "reps", config.reps },           { "seed", config.seed },
    { "ise_scale", config.ise_scale },
  };
  nlohmann::ordered_json kernels;
  for (const auto& s : config.selectors) {
    kernels[s] = (s == "sj") ? "gaussian" : config.kernel;
  }
  meta["kernel_per_method"] = kernels;
  meta["ise"] = "exact, Fourier-form identity evaluated with (K*K) pair sums";
  meta["politis"] = {
    { "c", config.politis.c },           { "ell", config.politis.ell },
    { "d_step", config.politis.d_step }, { "d_max", config.politis.d_max },
    { "t_step", config.politis.t_step }, { "fallback_h", 1.0 / config.politis.d_max },
  };
  meta["cv_grid"] = "40 log-spaced points over [0.1, 4] x (S_K/D_f, or "
                    "robust scale * n^(-1/5) when undefined)";
  meta["sd_single_rep_reported_as_zero"] = result.single_rep_sd_zero;
  nlohmann::ordered_json fallbacks = nlohmann::ordered_json::array();
  for (const auto& r : result.rows) {
    fallbacks.push_back({ { "n", r.n }, { "method", r.method },
                          { "fallback_count", r.fallback_count }, { "reps_used", r.reps } });
  }
  meta["rows"] = fallbacks;
  meta["failed_replications"] = result.failures;
  return meta.dump(2) + "\n";
}

std::string
format_records(const std::vector<RepRecord>& records)
{
  std::string out = "n,rep,method,h,ise,fallback,sample_hash\n";
  char buf[64];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(r.sample_hash));
    out += std::to_string(r.n) + ',' + std::to_string(r.rep) + ',' + r.method + ',' +
           format_real(r.h) + ',' + format_real(r.ise) + ',' + (r.fallback ? "1" : "0") +
           ',' + buf + '\n';
  }
  return out;
}

} // namespace superkde
