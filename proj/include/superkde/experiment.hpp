#pragma once

#include "superkde/selectors.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace superkde {

//! Monte Carlo protocol: for every size n and replication, one sample is
//! drawn and handed to every selector; each selected bandwidth is scored by
//! its exact integrated squared error.
struct ExperimentConfig
{
  std::string density = "fvp";
  //! Kernel for `cv` and `politis`; `sj` always uses the Gaussian kernel.
  std::string kernel = "trapezoidal";
  std::vector<std::string> selectors = { "cv", "sj", "politis" };
  std::vector<std::uint64_t> sizes = { 100, 400, 1600 };
  std::uint64_t reps = 100;
  std::uint64_t seed = 42;
  std::string out_path = "superkde_sim.csv";
  double ise_scale = 1000.0;
  unsigned workers = 1;
  bool verbose = false;
  PolitisSettings politis;

  //! Throws Error(config_error) naming the offending key.
  void validate() const;
};

struct ResultRow
{
  std::uint64_t n;
  std::string method;
  double mean_ise_scaled;
  double sd_ise_scaled;
  std::uint64_t reps;
  std::uint64_t seed;
  std::uint64_t fallback_count;
};

//! One (n, rep, method) outcome; kept for the verbose per-replication log.
struct RepRecord
{
  std::uint64_t n;
  std::uint64_t rep;
  std::string method;
  double h;
  double ise;
  bool fallback;
  std::uint64_t sample_hash;
};

struct ExperimentResult
{
  std::vector<ResultRow> rows;
  std::vector<RepRecord> records;
  //! Replications dropped because a selector without fallback failed.
  std::vector<std::string> failures;
  bool single_rep_sd_zero = false;
};

//! Keys accepted in config files and as CLI flags (without the dashes).
const std::vector<std::string>& config_keys();

//! Reads a flat `key = value` file (blank lines and `#` comments ignored),
//! then applies `overrides` on top. Defaults give the full three-selector,
//! three-size, 100-replication protocol on the fvp density.
ExperimentConfig parse_config(const std::optional<std::string>& path,
                              const std::map<std::string, std::string>& overrides = {});

//! Sets one key on an existing config (same parsing as parse_config).
void apply_config_value(ExperimentConfig& config,
                        const std::string& key,
                        const std::string& value);

//! Applies every `key = value` line of a config file to `config`.
void load_config_file(ExperimentConfig& config, const std::string& path);

//! Stream id of the (n, rep) replication: n in the high 32 bits.
std::uint64_t replication_stream_id(std::uint64_t n, std::uint64_t rep);

//! FNV-1a over the bytes of the sample points.
std::uint64_t sample_hash(const Sample& sample);

using ProgressCallback = std::function<void(std::uint64_t n, std::uint64_t rep)>;

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const ProgressCallback& progress = {});

//! Header `n,method,mean_ise_x1000,sd_ise_x1000,reps,seed,fallback_count`,
//! reals with 6 significant digits, LF line endings.
std::string format_csv(const std::vector<ResultRow>& rows);
void write_csv(const std::vector<ResultRow>& rows, const std::string& path);

//! Run metadata (PRNG, protocol, fallback and failure accounting) as JSON.
std::string format_metadata(const ExperimentConfig& config,
                            const ExperimentResult& result);

//! Per-replication log with the sample hash of every (n, rep, method).
std::string format_records(const std::vector<RepRecord>& records);

} // namespace superkde
