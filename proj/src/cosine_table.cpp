#include "cosine_table.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace superkde::detail {

namespace {

const QuadratureSettings table_settings{ 1e-13, 1e-12, 1 << 15 };

} // namespace

CosineTransformTable::CosineTransformTable(RealFunction g,
                                           std::vector<double> breakpoints,
                                           double support,
                                           double x_max,
                                           double step)
  : g_(std::move(g))
  , x_max_(x_max)
  , step_(step)
{
  points_.push_back(0.0);
  for (double b : breakpoints) {
    if (b > 0.0 && b < support) {
      points_.push_back(b);
    }
  }
  points_.push_back(support);
}

double
CosineTransformTable::direct(double x) const
{
  const auto integrand = [this, x](double t) { return g_(t) * std::cos(t * x); };
  return integrate(integrand, points_, table_settings) / std::numbers::pi;
}

void
CosineTransformTable::build() const
{
  const auto count = static_cast<std::size_t>(std::llround(x_max_ / step_)) + 1;
  values_.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    values_[i] = direct(static_cast<double>(i) * step_);
  }
}

double
CosineTransformTable::operator()(double x) const
{
  std::call_once(built_, [this] { build(); });
  const double ax = std::abs(x);
  const auto last = static_cast<long>(values_.size()) - 1;
  const double pos = ax / step_;
  const auto i = static_cast<long>(std::floor(pos));
  if (i + 2 > last) {
    return direct(ax);
  }
  // nodes i-1 .. i+2; the function is even, so negative indices mirror
  const auto at = [this](long k) { return values_[static_cast<std::size_t>(std::abs(k))]; };
  const double u = pos - static_cast<double>(i);
  const double f0 = at(i - 1);
  const double f1 = at(i);
  const double f2 = at(i + 1);
  const double f3 = at(i + 2);
  return -u * (u - 1.0) * (u - 2.0) / 6.0 * f0 +
         (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0 * f1 -
         (u + 1.0) * u * (u - 2.0) / 2.0 * f2 +
         (u + 1.0) * u * (u - 1.0) / 6.0 * f3;
}

} // namespace superkde::detail
