#pragma once

#include "superkde/kernels.hpp"
#include "superkde/numerics.hpp"

#include <span>
#include <vector>

namespace superkde::detail {

//! X_j - X_i for all i < j.
std::vector<double> pair_differences(std::span<const double> x);

struct PairSums
{
  //! sum over pairs of (K*K)(d/h)
  double self_convolution = 0.0;
  //! sum over pairs of K(d/h)
  double kernel = 0.0;
};

PairSums pair_sums(const KernelSpec& kernel,
                   std::span<const double> diffs,
                   double h,
                   bool with_kernel);

//! R(f_hat) = (1/n^2) sum_{i,j} (K*K)_h(X_i - X_j), diagonal included.
double estimate_roughness(const KernelSpec& kernel,
                          std::size_t n,
                          double self_convolution_sum,
                          double h);

//! (1/pi) int g(t) cos(t x) dt over [points.front(), points.back()], with
//! extra panel boundaries every half period of cos(t x).
double cosine_integral(const RealFunction& g,
                       std::vector<double> points,
                       double x,
                       const QuadratureSettings& settings);

//! Adds boundaries every `width` between the first and last entry.
void refine_points(std::vector<double>& points, double width);

} // namespace superkde::detail
