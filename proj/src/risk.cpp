#include "superkde/risk.hpp"

#include "pair_sums.hpp"
#include "superkde/error.hpp"

#include <algorithm>
#include <cmath>

namespace superkde {

namespace {

// Upper limit of a cf-side integral and whether it is only a truncation cap.
struct Limit
{
  double upper;
  bool is_cap;
};

Limit
kernel_limit(const KernelSpec& kernel, double h)
{
  return { kernel.cf_integration_upper() / h, !kernel.cf_has_compact_support() };
}

Limit
density_limit(const DensitySpec& density)
{
  return { density.cf_integration_upper(), !density.cf_has_compact_support() };
}

// The product of two factors vanishes beyond the smaller support.
Limit
product_limit(Limit a, Limit b)
{
  if (a.upper < b.upper) {
    return a;
  }
  if (b.upper < a.upper) {
    return b;
  }
  return { a.upper, a.is_cap && b.is_cap };
}

// A sum or difference of two factors vanishes beyond the larger support.
Limit
union_limit(Limit a, Limit b)
{
  return { std::max(a.upper, b.upper), a.is_cap || b.is_cap };
}

std::vector<double>
risk_breakpoints(const KernelSpec& kernel, const DensitySpec& density, double h)
{
  std::vector<double> points(density.cf_breakpoints().begin(),
                             density.cf_breakpoints().end());
  for (double b : kernel.cf_breakpoints()) {
    points.push_back(b / h);
  }
  for (double b : { kernel.s_k(), kernel.t_k() }) {
    if (b > 0.0) {
      points.push_back(b / h);
    }
  }
  if (kernel.cf_has_compact_support()) {
    points.push_back(kernel.cf_support_upper() / h);
  }
  return points;
}

void
check_bandwidth(double h)
{
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorCode::invalid_bandwidth, "bandwidth must be positive");
  }
}

void
check_n(std::uint64_t n)
{
  if (n < 1) {
    throw Error(ErrorCode::invalid_argument, "sample size must be >= 1");
  }
}

} // namespace

RiskReport
mise_exact(const KernelSpec& kernel,
           const DensitySpec& density,
           std::uint64_t n,
           double h,
           const QuadratureSettings& settings)
{
  check_bandwidth(h);
  check_n(n);
  const auto points = risk_breakpoints(kernel, density, h);
  const double nn = static_cast<double>(n);

  const auto bias_integrand = [&](double t) {
    const double f = density.cf(t);
    const double k = kernel.cf(t * h) - 1.0;
    return f * f * k * k;
  };
  const Limit fl = density_limit(density);
  const double bias =
    integrate_even(bias_integrand, points, fl.upper, fl.is_cap, settings);

  const auto cross_integrand = [&](double t) {
    const double f = density.cf(t);
    const double k = kernel.cf(t * h);
    return f * f * k * k;
  };
  const Limit cl = product_limit(fl, kernel_limit(kernel, h));
  const double cross =
    integrate_even(cross_integrand, points, cl.upper, cl.is_cap, settings);
  const double kernel_l2 = 2.0 * pi * kernel.roughness();

  const double variance = kernel_l2 / (nn * h) - cross / nn;

  RiskReport report;
  report.h = h;
  report.bias_term = std::max(0.0, bias);
  report.variance_term = std::max(0.0, variance);
  report.mise = (report.bias_term + report.variance_term) / (2.0 * pi);
  report.n = n;
  return report;
}

double
variance_identity_check(const KernelSpec& kernel,
                        const DensitySpec& density,
                        std::uint64_t n,
                        double h,
                        const QuadratureSettings& settings)
{
  check_bandwidth(h);
  check_n(n);
  const double nn = static_cast<double>(n);

  // R(K_h * f) = (1/2pi) int cf_K(th)^2 cf_f(t)^2 dt, with u = t h
  const auto integrand = [&](double u) {
    const double k = kernel.cf(u);
    const double f = density.cf(u / h);
    return k * k * f * f;
  };
  std::vector<double> points(kernel.cf_breakpoints().begin(),
                             kernel.cf_breakpoints().end());
  for (double b : density.cf_breakpoints()) {
    points.push_back(b * h);
  }
  const Limit kl{ kernel.cf_integration_upper(), !kernel.cf_has_compact_support() };
  const Limit fl{ density.cf_integration_upper() * h,
                  !density.cf_has_compact_support() };
  const Limit l = product_limit(kl, fl);
  const double conv_roughness =
    integrate_even(integrand, points, l.upper, l.is_cap, settings) /
    (2.0 * pi * h);

  return kernel_roughness(kernel, settings) / (nn * h) - conv_roughness / nn;
}

std::pair<double, double>
default_bandwidth_bracket(const KernelSpec& kernel, const DensitySpec& density)
{
  if (kernel.s_k() > 0.0 && density.cf_has_compact_support()) {
    const double zero_bias = kernel.s_k() / density.d_f();
    return { 0.05 * zero_bias, 20.0 * zero_bias };
  }
  return { 1e-3 * density.scale(), 10.0 * density.scale() };
}

OptimalBandwidthResult
optimal_bandwidth(const KernelSpec& kernel,
                  const DensitySpec& density,
                  std::uint64_t n,
                  double h_lo,
                  double h_hi)
{
  if (!(h_lo > 0.0) || !(h_lo < h_hi) || !std::isfinite(h_hi)) {
    throw Error(ErrorCode::invalid_bracket,
                "optimal_bandwidth: need 0 < h_lo < h_hi");
  }
  const auto risk = [&](double h) {
    return mise_exact(kernel, density, n, h).mise;
  };
  // search in log h; an absolute tolerance there is relative in h
  const auto found = minimize_scalar(
    [&](double u) { return risk(std::exp(u)); }, std::log(h_lo), std::log(h_hi), 1e-9);
  double h_best = std::exp(found.argmin);
  double best = found.value;

  // Flat stretch: move to its right end, where the variance is smallest.
  const double flat_tol = 1e-12 * best;
  if (h_best * 1.001 < h_hi && risk(h_best * 1.001) <= best + flat_tol) {
    double inside = h_best;
    double outside = h_hi;
    if (risk(h_hi) <= best + flat_tol) {
      inside = h_hi;
    } else {
      while (outside - inside > 1e-10 * outside) {
        const double mid = 0.5 * (inside + outside);
        if (risk(mid) <= best + flat_tol) {
          inside = mid;
        } else {
          outside = mid;
        }
      }
    }
    h_best = inside;
    best = std::min(best, risk(inside));
  }

  for (double end : { h_lo, h_hi }) {
    const double r = risk(end);
    if (r < best) {
      best = r;
      h_best = end;
    }
  }
  return { h_best, best, { h_lo, h_hi } };
}

OptimalBandwidthResult
optimal_bandwidth(const KernelSpec& kernel,
                  const DensitySpec& density,
                  std::uint64_t n)
{
  const auto [lo, hi] = default_bandwidth_bracket(kernel, density);
  return optimal_bandwidth(kernel, density, n, lo, hi);
}

namespace {

double
ise_fourier(const KernelSpec& kernel,
            double h,
            const Sample& sample,
            const DensitySpec& density,
            const QuadratureSettings& settings)
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
    const double a = kernel.cf(t * h) / nn;
    const double re = a * c - density.cf(t);
    const double im = a * s;
    return re * re + im * im;
  };

  const Limit l = union_limit(density_limit(density), kernel_limit(kernel, h));
  std::vector<double> points = risk_breakpoints(kernel, density, h);
  points.push_back(0.0);
  points.push_back(l.upper);
  std::erase_if(points, [&](double p) { return p < 0.0 || p > l.upper; });

  // highest frequency in |ecf|^2 is the sample range, in Re ecf it is max |X|
  const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
  const double width =
    std::max({ *mx - *mn, std::abs(*mn), std::abs(*mx) });
  if (width > 0.0) {
    detail::refine_points(points, pi / width);
  }
  QuadratureSettings wide = settings;
  wide.max_subdivisions = std::max<int>(wide.max_subdivisions, 1 << 20);
  return integrate_even(integrand, points, l.upper, l.is_cap, wide) /
         (2.0 * pi);
}

double
ise_pair_sum(const KernelSpec& kernel,
             double h,
             const Sample& sample,
             const DensitySpec& density,
             const QuadratureSettings& settings)
{
  const auto xs = sample.points();
  const auto diffs = detail::pair_differences(xs);
  const double fhat_roughness = detail::estimate_roughness(
    kernel, xs.size(), detail::pair_sums(kernel, diffs, h, false).self_convolution, h);

  // int f_hat f = (1/n) sum_i (K_h * f)(X_i), each term a cosine integral
  const Limit l = product_limit(density_limit(density), kernel_limit(kernel, h));
  std::vector<double> points = risk_breakpoints(kernel, density, h);
  points.push_back(0.0);
  points.push_back(l.upper);
  std::erase_if(points, [&](double p) { return p < 0.0 || p > l.upper; });
  const auto smooth_part = [&](double t) { return kernel.cf(t * h) * density.cf(t); };
  if (l.is_cap) {
    // the integrand must have died out at the cap
    integrate_even(smooth_part, points, l.upper, true, settings);
  }
  double cross = 0.0;
  for (double x : xs) {
    cross += detail::cosine_integral(smooth_part, points, x, settings);
  }
  cross /= static_cast<double>(xs.size());

  return fhat_roughness - 2.0 * cross + deriv_roughness(density, 0);
}

} // namespace

double
ise_exact(const KernelSpec& kernel,
          double h,
          const Sample& sample,
          const DensitySpec& density,
          IseRoute route,
          const QuadratureSettings& settings)
{
  check_bandwidth(h);
  if (route == IseRoute::pair_sum) {
    return std::max(0.0, ise_pair_sum(kernel, h, sample, density, settings));
  }
  return ise_fourier(kernel, h, sample, density, settings);
}

double
zero_bias_bandwidth(const KernelSpec& kernel, const DensitySpec& density)
{
  if (!(kernel.s_k() > 0.0)) {
    throw Error(ErrorCode::not_applicable,
                "zero-bias bandwidth undefined: kernel '" + kernel.name() +
                  "' has S_K = 0");
  }
  if (!density.cf_has_compact_support()) {
    throw Error(ErrorCode::not_applicable,
                "zero-bias bandwidth undefined: density '" + density.name() +
                  "' has D_f = infinity");
  }
  return kernel.s_k() / density.d_f();
}

double
parametric_bound(const KernelSpec& kernel, const DensitySpec& density)
{
  zero_bias_bandwidth(kernel, density);
  return density.d_f() * kernel.roughness() / kernel.s_k();
}

double
smooth_rate_bound(const KernelSpec& kernel, const DensitySpec& density, int k)
{
  if (k < 1) {
    throw Error(ErrorCode::invalid_argument, "smooth_rate_bound: k must be >= 1");
  }
  if (!(kernel.s_k() > 0.0)) {
    throw Error(ErrorCode::not_applicable,
                "smooth_rate_bound: kernel '" + kernel.name() + "' has S_K = 0");
  }
  const double two_k = 2.0 * k;
  const double power = two_k / (two_k + 1.0);
  return (two_k + 1.0) * std::pow(two_k, -power) *
         std::pow(kernel.roughness() / kernel.s_k(), power) *
         deriv_roughness(density, k);
}

std::vector<double>
supersmooth_rate_check(const KernelSpec& kernel,
                       const DensitySpec& density,
                       double alpha,
                       double gamma,
                       const std::vector<std::uint64_t>& n_list)
{
  for (std::uint64_t n : n_list) {
    if (n < 2) {
      throw Error(ErrorCode::invalid_argument,
                  "supersmooth_rate_check: every n must be >= 2");
    }
  }
  if (n_list.empty()) {
    return {};
  }
  if (!(kernel.s_k() > 0.0)) {
    throw Error(ErrorCode::not_applicable,
                "supersmooth_rate_check: kernel '" + kernel.name() +
                  "' has S_K = 0");
  }
  supersmooth_integral(density, alpha, gamma);

  std::vector<double> out;
  out.reserve(n_list.size());
  for (std::uint64_t n : n_list) {
    const double nn = static_cast<double>(n);
    const double phi = optimal_bandwidth(kernel, density, n).phi;
    out.push_back(nn / std::pow(std::log(nn), 1.0 / alpha) * phi);
  }
  return out;
}

} // namespace superkde
