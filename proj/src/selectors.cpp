#include "superkde/selectors.hpp"

#include "pair_sums.hpp"
#include "superkde/error.hpp"
#include "superkde/estimation.hpp"

#include <algorithm>
#include <cmath>

namespace superkde {

void
PolitisSettings::validate() const
{
  if (!(c > 0.0) || !(ell > 0.0) || !(d_step > 0.0) || !(d_max > 0.0) ||
      !(t_step > 0.0) || d_step > d_max) {
    throw Error(ErrorCode::invalid_argument,
                "PolitisSettings: all fields must be positive and d_step <= d_max");
  }
}

double
politis_threshold(std::size_t n, double c)
{
  const double nn = static_cast<double>(n);
  return c * std::log(nn) / nn;
}

SelectorResult
politis_select(const Sample& sample, const PolitisSettings& settings)
{
  settings.validate();
  if (sample.n() < 2) {
    throw Error(ErrorCode::invalid_argument, "politis_select: need n >= 2");
  }
  const double threshold = politis_threshold(sample.n(), settings.c);
  const auto d_count =
    static_cast<long>(std::floor(settings.d_max / settings.d_step + 1e-9));
  // inner grid: m t_step strictly inside (0, ell)
  long t_count = static_cast<long>(std::ceil(settings.ell / settings.t_step)) - 1;
  while (t_count > 0 &&
         static_cast<double>(t_count) * settings.t_step >= settings.ell) {
    --t_count;
  }
  while (static_cast<double>(t_count + 1) * settings.t_step < settings.ell) {
    ++t_count;
  }

  // With equal steps D + t falls on one common grid, so |ecf|^2 is cached.
  const bool shared_grid = settings.d_step == settings.t_step;
  std::vector<double> cache;
  if (shared_grid) {
    cache.assign(static_cast<std::size_t>(d_count + t_count + 1), -1.0);
  }
  double evaluations = 0.0;
  const auto power = [&](long k, long m) {
    if (shared_grid) {
      double& slot = cache[static_cast<std::size_t>(k + m)];
      if (slot < 0.0) {
        slot = ecf_abs2(sample, static_cast<double>(k + m) * settings.d_step);
        evaluations += 1.0;
      }
      return slot;
    }
    evaluations += 1.0;
    return ecf_abs2(sample,
                    static_cast<double>(k) * settings.d_step +
                      static_cast<double>(m) * settings.t_step);
  };

  for (long k = 1; k <= d_count; ++k) {
    bool flat = true;
    for (long m = 1; m <= t_count; ++m) {
      if (!(power(k, m) < threshold)) {
        flat = false;
        break;
      }
    }
    if (flat) {
      const double d_hat = static_cast<double>(k) * settings.d_step;
      return { 1.0 / d_hat,
               { { "D_hat", d_hat },
                 { "threshold", threshold },
                 { "evaluations", evaluations } } };
    }
  }
  throw Error(ErrorCode::no_flat_region,
              "politis_select: no flat region of the empirical characteristic "
              "function below D = " +
                std::to_string(settings.d_max));
}

namespace {

double
fhat_roughness_fourier(const Sample& sample, const KernelSpec& kernel, double h)
{
  const auto xs = sample.points();
  const double nn = static_cast<double>(xs.size());
  const auto integrand = [&](double t) {
    double c = 0.0;
    double s = 0.0;
    for (double x : xs) {
      c += std::cos(t * x);
      s += std::sin(t * x);
    }
    const double k = kernel.cf(t * h);
    return (c * c + s * s) / (nn * nn) * k * k;
  };
  const double upper = kernel.cf_integration_upper() / h;
  std::vector<double> points{ 0.0, upper };
  for (double b : kernel.cf_breakpoints()) {
    points.push_back(b / h);
  }
  const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
  if (*mx > *mn) {
    detail::refine_points(points, pi / (*mx - *mn));
  }
  QuadratureSettings settings;
  settings.max_subdivisions = 1 << 20;
  return integrate_even(integrand,
                        points,
                        upper,
                        !kernel.cf_has_compact_support(),
                        settings) /
         (2.0 * pi);
}

double
lscv_from_sums(std::size_t n, double h, double fhat_roughness, double kernel_pair_sum)
{
  const double nn = static_cast<double>(n);
  // (2/n) sum_i f_{-i}(X_i) = 4/(n(n-1)) sum_{i<j} K_h(X_i - X_j)
  return fhat_roughness - 4.0 * kernel_pair_sum / (nn * (nn - 1.0) * h);
}

} // namespace

double
lscv_score(const Sample& sample, const KernelSpec& kernel, double h, LscvRoute route)
{
  if (sample.n() < 2) {
    throw Error(ErrorCode::invalid_argument, "lscv_score: need n >= 2");
  }
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorCode::invalid_bandwidth, "bandwidth must be positive");
  }
  const auto diffs = detail::pair_differences(sample.points());
  const auto sums = detail::pair_sums(kernel, diffs, h, true);
  const double roughness =
    route == LscvRoute::pair_sum
      ? detail::estimate_roughness(kernel, sample.n(), sums.self_convolution, h)
      : fhat_roughness_fourier(sample, kernel, h);
  return lscv_from_sums(sample.n(), h, roughness, sums.kernel);
}

std::vector<double>
lscv_default_grid(double center, std::size_t count)
{
  if (!(center > 0.0) || count < 1) {
    throw Error(ErrorCode::invalid_argument,
                "lscv_default_grid: center must be positive and count >= 1");
  }
  std::vector<double> grid(count);
  const double lo = std::log(0.1 * center);
  const double hi = std::log(4.0 * center);
  for (std::size_t i = 0; i < count; ++i) {
    const double frac =
      count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    grid[i] = std::exp(lo + frac * (hi - lo));
  }
  return grid;
}

SelectorResult
lscv_select(const Sample& sample,
            const KernelSpec& kernel,
            const std::vector<double>& h_grid)
{
  if (h_grid.empty()) {
    throw Error(ErrorCode::empty_grid, "lscv_select: empty bandwidth grid");
  }
  if (sample.n() < 2) {
    throw Error(ErrorCode::invalid_argument, "lscv_select: need n >= 2");
  }
  for (double h : h_grid) {
    if (!(h > 0.0) || !std::isfinite(h)) {
      throw Error(ErrorCode::invalid_bandwidth,
                  "lscv_select: grid bandwidths must be positive");
    }
  }
  const auto diffs = detail::pair_differences(sample.points());
  double best_h = 0.0;
  double best_score = infinity;
  for (double h : h_grid) {
    const auto sums = detail::pair_sums(kernel, diffs, h, true);
    const double roughness =
      detail::estimate_roughness(kernel, sample.n(), sums.self_convolution, h);
    const double score =
      lscv_from_sums(sample.n(), h, roughness, sums.kernel);
    if (score < best_score || (score == best_score && h < best_h)) {
      best_score = score;
      best_h = h;
    }
  }
  return { best_h,
           { { "lscv", best_score },
             { "grid_size", static_cast<double>(h_grid.size()) } } };
}

double
robust_scale(const Sample& sample)
{
  const auto xs = sample.points();
  const double nn = static_cast<double>(xs.size());
  if (xs.size() < 2) {
    throw Error(ErrorCode::degenerate_sample, "robust_scale: need n >= 2");
  }
  double mean = 0.0;
  for (double x : xs) {
    mean += x;
  }
  mean /= nn;
  double ss = 0.0;
  for (double x : xs) {
    ss += (x - mean) * (x - mean);
  }
  const double sd = std::sqrt(ss / (nn - 1.0));

  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  const auto quantile = [&sorted](double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
  };
  const double iqr_scale = (quantile(0.75) - quantile(0.25)) / 1.349;
  const double scale = std::min(sd, iqr_scale);
  // a zero IQR with a positive sd falls back to the sd
  return scale > 0.0 ? scale : sd;
}

namespace {

// Gaussian kernel functional estimates
//   psi_r(g) = (n phi_r(0) + 2 sum_{i<j} phi_r(d/g)) / (n (n-1) g^(r+1))
// with phi_r the r-th derivative of the standard normal density.
double
psi4(std::span<const double> diffs, std::size_t n, double g)
{
  double sum = 0.0;
  for (double d : diffs) {
    const double u2 = (d / g) * (d / g);
    sum += std::exp(-0.5 * u2) * (u2 * u2 - 6.0 * u2 + 3.0);
  }
  const double nn = static_cast<double>(n);
  sum = 2.0 * sum + 3.0 * nn;
  return sum / (nn * (nn - 1.0) * std::pow(g, 5) * std::sqrt(2.0 * pi));
}

double
psi6(std::span<const double> diffs, std::size_t n, double g)
{
  double sum = 0.0;
  for (double d : diffs) {
    const double u2 = (d / g) * (d / g);
    sum += std::exp(-0.5 * u2) * (u2 * u2 * u2 - 15.0 * u2 * u2 + 45.0 * u2 - 15.0);
  }
  const double nn = static_cast<double>(n);
  sum = 2.0 * sum - 15.0 * nn;
  return sum / (nn * (nn - 1.0) * std::pow(g, 7) * std::sqrt(2.0 * pi));
}

} // namespace

SelectorResult
sj_select(const Sample& sample)
{
  if (sample.n() < 10) {
    throw Error(ErrorCode::invalid_argument, "sj_select: need n >= 10");
  }
  const auto xs = sample.points();
  if (std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs[0]; })) {
    throw Error(ErrorCode::degenerate_sample, "sj_select: all points identical");
  }
  const double scale = robust_scale(sample);
  if (!(scale > 0.0)) {
    throw Error(ErrorCode::degenerate_sample, "sj_select: zero scale");
  }
  const std::size_t n = sample.n();
  const double nn = static_cast<double>(n);
  const auto diffs = detail::pair_differences(xs);

  // Sheather & Jones (1991): normal-scale pilots for psi_4 and psi_6, then
  // the psi_4 pilot bandwidth gamma(h) = alpha2 h^(5/7) inside the equation
  //   h = (R(K) / (n mu_2(K)^2 psi_4(gamma(h))))^(1/5),  R(K) = 1/(2 sqrt(pi)).
  const double a = 1.24 * scale * std::pow(nn, -1.0 / 7.0);
  const double b = 1.23 * scale * std::pow(nn, -1.0 / 9.0);
  const double c1 = 1.0 / (2.0 * std::sqrt(pi) * nn);
  const double td = -psi6(diffs, n, b);
  const double sd_a = psi4(diffs, n, a);
  if (!(td > 0.0) || !(sd_a > 0.0)) {
    throw Error(ErrorCode::no_root, "sj_select: nonpositive pilot functional");
  }
  const double alpha2 = 1.357 * std::pow(sd_a / td, 1.0 / 7.0);

  int evaluations = 0;
  const auto equation = [&](double h) {
    ++evaluations;
    const double psi = psi4(diffs, n, alpha2 * std::pow(h, 5.0 / 7.0));
    if (!(psi > 0.0)) {
      throw Error(ErrorCode::no_root, "sj_select: nonpositive psi_4 estimate");
    }
    return std::pow(c1 / psi, 0.2) - h;
  };

  double lo = 1e-3 * scale;
  double hi = 10.0 * scale;
  double f_lo = equation(lo);
  const double f_hi = equation(hi);
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    throw Error(ErrorCode::no_root, "sj_select: bisection bracket has no sign change");
  }
  while (hi - lo > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = equation(mid);
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return { 0.5 * (lo + hi),
           { { "scale", scale },
             { "alpha2", alpha2 },
             { "evaluations", static_cast<double>(evaluations) } } };
}

} // namespace superkde
