#pragma once

#include "superkde/densities.hpp"
#include "superkde/kernels.hpp"

#include <complex>
#include <vector>

namespace superkde {

//! A kernel density estimate f(x) = (1/n) sum_i K_h(x - X_i).
class Estimate
{
public:
  Estimate(KernelSpec kernel, double bandwidth, Sample sample);

  const KernelSpec& kernel() const { return kernel_; }
  double bandwidth() const { return bandwidth_; }
  const Sample& sample() const { return sample_; }

private:
  KernelSpec kernel_;
  double bandwidth_;
  Sample sample_;
};

//! Equispaced grid of `count` points from lo to hi inclusive.
struct EvalGrid
{
  double lo;
  double hi;
  std::size_t count;

  void validate() const;
  double point(std::size_t i) const;
};

double kde_eval(const Estimate& est, double x);
std::vector<double> kde_eval_grid(const Estimate& est, const EvalGrid& grid);

//! Empirical characteristic function (1/n) sum_j exp(i t X_j).
std::complex<double> ecf(const Sample& sample, double t);
//! |ecf(t)|^2.
double ecf_abs2(const Sample& sample, double t);

} // namespace superkde
