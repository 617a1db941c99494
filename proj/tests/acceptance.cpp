// Acceptance checks. With no arguments every criterion runs; otherwise only
// the named ones (c01 ... c12). One PASS/FAIL line per criterion.
#include "superkde/densities.hpp"
#include "superkde/estimation.hpp"
#include "superkde/kernels.hpp"
#include "superkde/risk.hpp"
#include "superkde/selectors.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace superkde;
namespace fs = std::filesystem;

namespace {

struct Outcome
{
  bool pass;
  std::string detail;
};

class Clock
{
public:
  double seconds() const
  {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string
fmt(const char* f, auto... args)
{
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct CliRun
{
  int code;
  std::string out;
};

CliRun
cli(const std::string& args)
{
  const std::string cmd = std::string(SUPERKDE_CLI) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    return { -1, "popen failed" };
  }
  std::string out;
  std::array<char, 4096> buf;
  while (const std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe)) {
    out.append(buf.data(), got);
  }
  const int status = pclose(pipe);
  return { WIFEXITED(status) ? WEXITSTATUS(status) : -1, out };
}

std::string
slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path
scratch_dir()
{
  const auto dir = fs::temp_directory_path() / "superkde_acceptance";
  fs::create_directories(dir);
  return dir;
}

double
field(const std::string& text, const std::string& key)
{
  const auto at = text.find(key + " = ");
  if (at == std::string::npos) {
    return NAN;
  }
  return std::strtod(text.c_str() + at + key.size() + 3, nullptr);
}

double
phi(const KernelSpec& k, const DensitySpec& f, double n)
{
  return optimal_bandwidth(k, f, static_cast<std::uint64_t>(n)).phi;
}

Outcome
c01()
{
  Clock clock;
  const auto r = cli("mise --kernel trapezoidal --density fvp --n 100 --h 1");
  const double t = clock.seconds();
  const double mise = field(r.out, "mise");
  const double bias = field(r.out, "bias_term");
  const bool ok = r.code == 0 && std::abs(mise - 1 / (100 * pi)) <= 1e-8 &&
                  std::abs(bias) <= 1e-10 && t < 1.0;
  return { ok, fmt("mise = %.6e, bias_term = %.3g, %.3f s", mise, bias, t) };
}

Outcome
c02()
{
  Clock clock;
  const auto k = trapezoidal_kernel();
  const auto f = fvp_density();
  bool ok = true;
  std::string detail;
  for (double n : { 1e2, 1e3, 1e4 }) {
    const double v = n * phi(k, f, n);
    ok = ok && v <= 4 / (3 * pi) + 1e-6 && v >= 1 / pi - 1e-6;
    detail += fmt("n=%g: n*Phi=%.6f; ", n, v);
  }
  const double t = clock.seconds();
  ok = ok && t < 10.0;
  return { ok, detail + fmt("bounds [%.6f, %.6f], %.2f s", 1 / pi, 4 / (3 * pi), t) };
}

Outcome
c03()
{
  bool ok = true;
  std::string detail;
  for (const char* name : { "trapezoidal", "gaussian", "epanechnikov", "natterer", "sinc" }) {
    const auto k = kernel_from_name(name);
    const auto c = classify(k);
    if (!c.is_superkernel) {
      continue;
    }
    const double lower = c.s_k / pi;
    ok = ok && c.roughness >= lower - 1e-9;
    if (std::string(name) == "sinc") {
      ok = ok && std::abs(c.roughness - lower) <= 1e-9;
    }
    detail += fmt("%s R=%.10f S/pi=%.10f; ", name, c.roughness, lower);
  }
  return { ok, detail };
}

Outcome
c04()
{
  Clock clock;
  const auto k = gaussian_kernel();
  const auto f = gaussian_density();
  std::vector<double> v;
  for (double n : { 1e3, 1e4, 1e5 }) {
    v.push_back(std::pow(n, 0.8) * phi(k, f, n));
  }
  const double t = clock.seconds();
  const double d1 = std::abs(v[1] / v[0] - 1);
  const double d2 = std::abs(v[2] / v[1] - 1);
  return { d1 < 0.1 && d2 < 0.1 && t < 30.0,
           fmt("n^0.8 Phi = %.6f %.6f %.6f (changes %.2f%%, %.2f%%), %.2f s", v[0], v[1], v[2],
               100 * d1, 100 * d2, t) };
}

Outcome
c05()
{
  const auto k = gaussian_kernel();
  const auto f = fvp_density();
  std::vector<double> v;
  for (double n : { 1e2, 1e3, 1e4 }) {
    v.push_back(n * phi(k, f, n));
  }
  return { v[0] < v[1] && v[1] < v[2], fmt("n Phi = %.6f %.6f %.6f", v[0], v[1], v[2]) };
}

Outcome
c06()
{
  const auto k = trapezoidal_kernel();
  const auto f = gaussian_density();
  const double bound = smooth_rate_bound(k, f, 2);
  bool ok = true;
  std::string detail;
  for (double n : { 1e3, 1e4, 1e5 }) {
    const double v = std::pow(n, 0.8) * phi(k, f, n);
    ok = ok && v <= bound;
    detail += fmt("n=%g: %.6f; ", n, v);
  }
  return { ok, detail + fmt("bound %.6f", bound) };
}

Outcome
c07()
{
  const auto k = trapezoidal_kernel();
  const auto f = fvp_density();
  bool ok = true;
  double prev = infinity;
  std::string detail;
  for (double n : { 1e2, 1e3, 1e4, 1e5 }) {
    const double gap = std::abs(optimal_bandwidth(k, f, std::uint64_t(n)).h0n - 1);
    ok = ok && gap < prev;
    prev = gap;
    detail += fmt("n=%g: |h0n-1|=%.5f; ", n, gap);
  }
  return { ok, detail };
}

std::map<std::pair<int, std::string>, std::pair<double, double>>
read_results(const std::string& csv)
{
  std::map<std::pair<int, std::string>, std::pair<double, double>> rows;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string n, method, mean, sd;
    std::getline(ls, n, ',');
    std::getline(ls, method, ',');
    std::getline(ls, mean, ',');
    std::getline(ls, sd, ',');
    rows[{ std::stoi(n), method }] = { std::stod(mean), std::stod(sd) };
  }
  return rows;
}

Outcome
c08()
{
  const auto out = scratch_dir() / "table.csv";
  Clock clock;
  const auto r = cli("sim --seed 42 --out " + out.string());
  const double t = clock.seconds();
  if (r.code != 0) {
    return { false, "sim exited with " + std::to_string(r.code) + ": " + r.out };
  }
  const auto rows = read_results(slurp(out));
  const std::map<int, std::pair<double, double>> bands{ { 100, { 1.7, 3.8 } },
                                                         { 400, { 0.4, 0.9 } },
                                                         { 1600, { 0.12, 0.27 } } };
  bool ok = rows.size() == 9 && t < 600.0;
  std::string detail;
  for (const auto& [n, band] : bands) {
    const auto& cv = rows.at({ n, "cv" });
    const auto& sj = rows.at({ n, "sj" });
    const auto& po = rows.at({ n, "politis" });
    ok = ok && po.first >= band.first && po.first <= band.second;
    if (n != 100) {
      ok = ok && po.first < sj.first;
    }
    ok = ok && cv.second > po.second;
    detail += fmt("n=%d politis %.4g sj %.4g, sd cv %.4g politis %.4g; ", n, po.first, sj.first,
                  cv.second, po.second);
  }
  return { ok, detail + fmt("%.0f s", t) };
}

Outcome
c09()
{
  const auto k = trapezoidal_kernel();
  const auto f = fvp_density();
  bool ok = true;
  std::string detail;
  for (double x : { 0.0, 1.0 }) {
    double sum = 0.0;
    double sum2 = 0.0;
    const int reps = 2000;
    for (int r = 0; r < reps; ++r) {
      RngStream rng(9, static_cast<std::uint64_t>(r));
      const double v = kde_eval(Estimate(k, 1.0, sample(f, 50, rng)), x);
      sum += v;
      sum2 += v * v;
    }
    const double mean = sum / reps;
    const double se = std::sqrt((sum2 / reps - mean * mean) / (reps - 1));
    const double z = (mean - f.pdf(x)) / se;
    ok = ok && std::abs(z) < 3;
    detail += fmt("x=%g: mean %.6f f %.6f z %.2f; ", x, mean, f.pdf(x), z);
  }
  return { ok, detail };
}

Outcome
c10()
{
  const auto f = fvp_density();
  const std::size_t n = 10000;
  RngStream rng(42, 0);
  const auto s = sample(f, n, rng);
  std::vector<double> xs(s.points().begin(), s.points().end());
  std::sort(xs.begin(), xs.end());
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double F = density_cdf(f, xs[i]);
    d = std::max({ d, (i + 1.0) / n - F, F - double(i) / n });
  }
  const double critical = 1.628 / std::sqrt(double(n));
  bool ok = d < critical;
  std::string detail = fmt("KS %.5f < %.5f; ", d, critical);
  for (double t : { 0.25, 0.5, 0.75 }) {
    const double err = std::abs(ecf(s, t) - std::complex<double>(f.cf(t), 0.0));
    ok = ok && err < 4 / std::sqrt(double(n));
    detail += fmt("|ecf-cf|(%.2f) = %.4f; ", t, err);
  }
  return { ok, detail };
}

Outcome
c11()
{
  const std::vector<KernelSpec> kernels{ trapezoidal_kernel(), gaussian_kernel(),
                                         epanechnikov_kernel(), natterer_kernel(),
                                         sinc_kernel() };
  const std::vector<DensitySpec> densities{ fvp_density(), gaussian_density(),
                                            cauchy_density() };
  RngStream rng(11, 0);
  double worst_v = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto& k = kernels[rng.next_u64() % kernels.size()];
    const auto& f = densities[rng.next_u64() % densities.size()];
    const double h = std::exp(std::log(0.05) + rng.uniform() * std::log(60.0));
    const std::uint64_t n = 10 + rng.next_u64() % 5000;
    const double v = mise_exact(k, f, n, h).variance_term / (2 * pi);
    worst_v = std::max(worst_v, std::abs(variance_identity_check(k, f, n, h) - v) / std::abs(v));
  }
  double worst_lscv = 0.0;
  for (std::uint64_t r = 0; r < 20; ++r) {
    RngStream srng(12, r);
    const std::size_t n = 2 + srng.next_u64() % 49;
    const auto s = sample(fvp_density(), n, srng);
    const double h = 0.3 + 2 * srng.uniform();
    const auto& k = kernels[r % 3];
    const double a = lscv_score(s, k, h, LscvRoute::fourier);
    const double b = lscv_score(s, k, h, LscvRoute::pair_sum);
    worst_lscv = std::max(worst_lscv, std::abs(a - b) / std::max(1.0, std::abs(a)));
  }
  return { worst_v <= 1e-9 && worst_lscv <= 1e-8,
           fmt("variance identity worst rel %.2e, lscv routes worst %.2e", worst_v,
               worst_lscv) };
}

Outcome
c12()
{
  const auto dir = scratch_dir();
  const std::string common = "sim --sizes 100,400 --reps 8 --seed 42 ";
  std::vector<std::string> outputs;
  for (const auto& [tag, workers] :
       std::vector<std::pair<std::string, int>>{ { "a", 1 }, { "b", 1 }, { "c", 3 }, { "d", 8 } }) {
    const auto out = dir / ("det_" + tag + ".csv");
    const auto r = cli(common + "--workers " + std::to_string(workers) + " --out " + out.string());
    if (r.code != 0) {
      return { false, "sim exited with " + std::to_string(r.code) };
    }
    outputs.push_back(slurp(out));
  }
  const bool ok = !outputs[0].empty() &&
                  std::all_of(outputs.begin(), outputs.end(),
                              [&](const std::string& s) { return s == outputs[0]; });
  return { ok, fmt("4 runs (workers 1, 1, 3, 8), %zu bytes each, identical = %s",
                   outputs[0].size(), ok ? "yes" : "no") };
}

} // namespace

int
main(int argc, char** argv)
{
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
    { "c01", c01 }, { "c02", c02 }, { "c03", c03 }, { "c04", c04 },
    { "c05", c05 }, { "c06", c06 }, { "c07", c07 }, { "c08", c08 },
    { "c09", c09 }, { "c10", c10 }, { "c11", c11 }, { "c12", c12 },
  };
  std::vector<std::string> wanted(argv + 1, argv + argc);
  int failures = 0;
  for (const auto& [id, check] : criteria) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), id) == wanted.end()) {
      continue;
    }
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = { false, std::string("error: ") + e.what() };
    }
    std::printf("%s %s  %s\n", id.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
