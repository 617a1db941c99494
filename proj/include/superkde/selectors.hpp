#pragma once

#include "superkde/densities.hpp"
#include "superkde/kernels.hpp"

#include <map>
#include <string>
#include <vector>

namespace superkde {

//! Settings of the ECF flat-region rule. D is scanned over
//! {d_step, 2 d_step, ..., d_max}; the inner check runs over
//! {t_step, 2 t_step, ...} inside (0, ell).
struct PolitisSettings
{
  double c = 1.0;
  double ell = 1.0;
  double d_step = 0.01;
  double d_max = 20.0;
  double t_step = 0.01;

  void validate() const;
};

struct SelectorResult
{
  double h;
  std::map<std::string, double> diagnostics;
};

//! c log(n) / n.
double politis_threshold(std::size_t n, double c);

//! D_hat = first grid D with |ecf(D + t)|^2 < c log(n)/n for every inner t;
//! h = 1 / D_hat. Throws Error(no_flat_region) if no D <= d_max qualifies.
SelectorResult politis_select(const Sample& sample,
                              const PolitisSettings& settings = {});

enum class LscvRoute
{
  //! R(f_hat) by quadrature of |ecf(t)|^2 cf_K(th)^2 in the Fourier domain.
  fourier,
  //! R(f_hat) as a sum of (K*K)_h over sample pairs.
  pair_sum,
};

//! LSCV(h) = R(f_hat_h) - (2/n) sum_i f_hat_{-i}(X_i).
double lscv_score(const Sample& sample,
                  const KernelSpec& kernel,
                  double h,
                  LscvRoute route = LscvRoute::fourier);

//! 40 (by default) log-spaced bandwidths spanning [0.1, 4] * center.
std::vector<double> lscv_default_grid(double center, std::size_t count = 40);

//! Argmin of LSCV over h_grid; ties go to the smaller h. The grid is
//! scored with the pair-sum route.
SelectorResult lscv_select(const Sample& sample,
                           const KernelSpec& kernel,
                           const std::vector<double>& h_grid);

//! min(sd, IQR/1.349), the robust normal-scale spread.
double robust_scale(const Sample& sample);

//! Sheather-Jones solve-the-equation bandwidth for the Gaussian kernel.
SelectorResult sj_select(const Sample& sample);

} // namespace superkde
