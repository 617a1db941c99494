#pragma once

#include "superkde/densities.hpp"
#include "superkde/kernels.hpp"
#include "superkde/numerics.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace superkde {

//! Fourier-domain risk decomposition 2 pi MISE(h) = B(h) + V(h) with
//!   B(h) = int cf_f(t)^2 (cf_K(th) - 1)^2 dt
//!   V(h) = (1/nh) int cf_K(t)^2 dt - (1/n) int cf_f(t)^2 cf_K(th)^2 dt
struct RiskReport
{
  double h;
  double bias_term;
  double variance_term;
  double mise;
  std::uint64_t n;
};

struct OptimalBandwidthResult
{
  double h0n;
  double phi;
  std::pair<double, double> bracket;
};

RiskReport mise_exact(const KernelSpec& kernel,
                      const DensitySpec& density,
                      std::uint64_t n,
                      double h,
                      const QuadratureSettings& settings = {});

//! R(K)/(nh) - R(K_h * f)/n, with R(K_h * f) integrated on the rescaled
//! frequency axis u = t h. Equals V(h) / (2 pi).
double variance_identity_check(const KernelSpec& kernel,
                               const DensitySpec& density,
                               std::uint64_t n,
                               double h,
                               const QuadratureSettings& settings = {});

//! Default search bracket: [0.05, 20] * S_K/D_f when that ratio is defined,
//! otherwise [1e-3, 10] times the density scale.
std::pair<double, double> default_bandwidth_bracket(const KernelSpec& kernel,
                                                    const DensitySpec& density);

//! Minimizes mise_exact over h in [h_lo, h_hi]. On a flat stretch of the
//! risk curve the largest minimizing h is returned.
OptimalBandwidthResult optimal_bandwidth(const KernelSpec& kernel,
                                         const DensitySpec& density,
                                         std::uint64_t n,
                                         double h_lo,
                                         double h_hi);
OptimalBandwidthResult optimal_bandwidth(const KernelSpec& kernel,
                                         const DensitySpec& density,
                                         std::uint64_t n);

enum class IseRoute
{
  //! (1/2pi) int |ecf(t) cf_K(th) - cf_f(t)|^2 dt by adaptive quadrature.
  fourier,
  //! The same quantity expanded as R(f_hat) - 2 int f_hat f + R(f), with
  //! R(f_hat) an exact O(n^2) sum of (K*K)_h over sample pairs.
  pair_sum,
};

//! Unscaled integrated squared error of the estimate with bandwidth h.
double ise_exact(const KernelSpec& kernel,
                 double h,
                 const Sample& sample,
                 const DensitySpec& density,
                 IseRoute route = IseRoute::fourier,
                 const QuadratureSettings& settings = {});

//! S_K / D_f. Throws Error(not_applicable) if S_K = 0 or D_f is infinite.
double zero_bias_bandwidth(const KernelSpec& kernel, const DensitySpec& density);

//! D_f R(K) / S_K, an upper bound of n Phi(n, f, K) for every n.
double parametric_bound(const KernelSpec& kernel, const DensitySpec& density);

//! (2k+1) (2k)^(-2k/(2k+1)) (R(K)/S_K)^(2k/(2k+1)) R(f^(k)), an upper bound
//! of n^(2k/(2k+1)) Phi(n, f, K) for superkernels.
double smooth_rate_bound(const KernelSpec& kernel,
                         const DensitySpec& density,
                         int k);

//! n / (log n)^(1/alpha) * Phi(n, f, K) for each n (all n >= 2).
std::vector<double> supersmooth_rate_check(const KernelSpec& kernel,
                                           const DensitySpec& density,
                                           double alpha,
                                           double gamma,
                                           const std::vector<std::uint64_t>& n_list);

} // namespace superkde
