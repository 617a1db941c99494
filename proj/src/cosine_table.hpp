#pragma once

#include "superkde/numerics.hpp"

#include <mutex>
#include <vector>

namespace superkde::detail {

//! Even inverse Fourier transform of a compactly supported even function g:
//!   value(x) = (1/pi) int_0^support g(t) cos(t x) dt.
//! Tabulated lazily on [0, x_max] and interpolated with 4-point Lagrange
//! polynomials; evaluated by direct quadrature beyond the table.
class CosineTransformTable
{
public:
  CosineTransformTable(RealFunction g,
                       std::vector<double> breakpoints,
                       double support,
                       double x_max = 200.0,
                       double step = 0.01);

  double operator()(double x) const;
  double direct(double x) const;

private:
  void build() const;

  RealFunction g_;
  std::vector<double> points_;
  double x_max_;
  double step_;
  mutable std::once_flag built_;
  mutable std::vector<double> values_;
};

} // namespace superkde::detail
