#include "superkde/estimation.hpp"

#include "superkde/error.hpp"

#include <algorithm>
#include <cmath>

namespace superkde {

Estimate::Estimate(KernelSpec kernel, double bandwidth, Sample sample)
  : kernel_(std::move(kernel))
  , bandwidth_(bandwidth)
  , sample_(std::move(sample))
{
  if (!(bandwidth_ > 0.0) || !std::isfinite(bandwidth_)) {
    throw Error(ErrorCode::invalid_bandwidth, "Estimate: bandwidth must be positive");
  }
}

void
EvalGrid::validate() const
{
  if (!(lo < hi) || count < 2) {
    throw Error(ErrorCode::invalid_argument, "EvalGrid: need lo < hi and count >= 2");
  }
}

double
EvalGrid::point(std::size_t i) const
{
  if (i + 1 == count) {
    return hi;
  }
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

double
kde_eval(const Estimate& est, double x)
{
  const KernelSpec& kernel = est.kernel();
  const double h = est.bandwidth();
  const auto points = est.sample().points();
  const double sum = pairwise_sum(
    points, [&kernel, h, x](double xi) { return kernel.eval((x - xi) / h); });
  return sum / (static_cast<double>(points.size()) * h);
}

std::vector<double>
kde_eval_grid(const Estimate& est, const EvalGrid& grid)
{
  grid.validate();
  std::vector<double> out(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i) {
    out[i] = kde_eval(est, grid.point(i));
  }
  return out;
}

std::complex<double>
ecf(const Sample& sample, double t)
{
  const auto points = sample.points();
  const double n = static_cast<double>(points.size());
  const double re = pairwise_sum(points, [t](double x) { return std::cos(t * x); });
  const double im = pairwise_sum(points, [t](double x) { return std::sin(t * x); });
  return { re / n, im / n };
}

double
ecf_abs2(const Sample& sample, double t)
{
  return std::min(1.0, std::norm(ecf(sample, t)));
}

} // namespace superkde
