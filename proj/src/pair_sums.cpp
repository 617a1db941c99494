#include "pair_sums.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace superkde::detail {

std::vector<double>
pair_differences(std::span<const double> x)
{
  std::vector<double> d;
  const std::size_t n = x.size();
  d.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      d.push_back(x[j] - x[i]);
    }
  }
  return d;
}

PairSums
pair_sums(const KernelSpec& kernel,
          std::span<const double> diffs,
          double h,
          bool with_kernel)
{
  PairSums out;
  if (!with_kernel) {
    for (double d : diffs) {
      out.self_convolution += kernel.self_convolution(d / h);
    }
    return out;
  }
  for (double d : diffs) {
    double k = 0.0;
    double kk = 0.0;
    kernel.pair_terms(d / h, k, kk);
    out.self_convolution += kk;
    out.kernel += k;
  }
  return out;
}

double
estimate_roughness(const KernelSpec& kernel,
                   std::size_t n,
                   double self_convolution_sum,
                   double h)
{
  const double nn = static_cast<double>(n);
  return (nn * kernel.self_convolution(0.0) + 2.0 * self_convolution_sum) /
         (nn * nn * h);
}

void
refine_points(std::vector<double>& points, double width)
{
  std::sort(points.begin(), points.end());
  const double lo = points.front();
  const double hi = points.back();
  if (!(width > 0.0) || !std::isfinite(width)) {
    return;
  }
  const auto pieces = static_cast<long>(std::ceil((hi - lo) / width));
  for (long i = 1; i < pieces; ++i) {
    points.push_back(lo + static_cast<double>(i) * width);
  }
}

double
cosine_integral(const RealFunction& g,
                std::vector<double> points,
                double x,
                const QuadratureSettings& settings)
{
  const double ax = std::abs(x);
  if (ax > 0.0) {
    refine_points(points, std::numbers::pi / ax);
  }
  const auto integrand = [&g, x](double t) { return g(t) * std::cos(t * x); };
  QuadratureSettings wide = settings;
  wide.max_subdivisions = std::max<int>(wide.max_subdivisions, 1 << 20);
  return integrate(integrand, points, wide) / std::numbers::pi;
}

} // namespace superkde::detail
