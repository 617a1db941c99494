#pragma once

#include "superkde/kernels.hpp"
#include "superkde/numerics.hpp"

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace superkde {

//! Immutable sequence of real observations (n >= 1). Copies share storage.
class Sample
{
public:
  explicit Sample(std::vector<double> points);

  std::size_t n() const noexcept { return points_->size(); }
  std::span<const double> points() const noexcept { return *points_; }
  double operator[](std::size_t i) const { return (*points_)[i]; }

private:
  std::shared_ptr<const std::vector<double>> points_;
};

using Sampler = std::function<std::vector<double>(RngStream&, std::size_t)>;

struct DensityDefinition
{
  std::string name;
  RealFunction pdf;
  RealFunction cf;
  Sampler sampler;
  std::vector<double> cf_breakpoints;
  double c_f = infinity;
  double d_f = infinity;
  //! Truncation point for cf-side integrals when d_f is infinite.
  double cf_cap = infinity;
  //! Spread used to scale default bandwidth brackets.
  double scale = 1.0;
  //! The CDF integrates the pdf up to this radius ...
  double cdf_radius = 1000.0;
  //! ... and uses this survival function P(X > x) beyond it.
  RealFunction survival_tail;
};

//! Symmetric target density. Immutable; copies share state.
class DensitySpec
{
public:
  explicit DensitySpec(DensityDefinition definition);

  const std::string& name() const { return def_->name; }
  double pdf(double x) const { return def_->pdf(x); }
  double cf(double t) const { return def_->cf(t); }
  std::vector<double> draw(RngStream& rng, std::size_t n) const
  {
    return def_->sampler(rng, n);
  }

  std::span<const double> cf_breakpoints() const { return def_->cf_breakpoints; }
  double c_f() const { return def_->c_f; }
  double d_f() const { return def_->d_f; }
  bool cf_has_compact_support() const { return def_->d_f < infinity; }
  //! d_f if finite, else the truncation cap.
  double cf_integration_upper() const
  {
    return cf_has_compact_support() ? def_->d_f : def_->cf_cap;
  }
  double scale() const { return def_->scale; }
  double cdf_radius() const { return def_->cdf_radius; }
  double survival_tail(double x) const { return def_->survival_tail(x); }

private:
  std::shared_ptr<const DensityDefinition> def_;
};

//! Fejer-de la Vallee-Poussin density (1 - cos x) / (pi x^2); cf (1-|t|)_+.
DensitySpec fvp_density();
DensitySpec gaussian_density();
DensitySpec cauchy_density();

//! Case-insensitive lookup: `fvp`, `gaussian`, `cauchy`.
DensitySpec density_from_name(std::string_view name);

double density_eval(const DensitySpec& density, double x);
double density_cf(const DensitySpec& density, double t);
Sample sample(const DensitySpec& density, std::size_t n, RngStream& rng);
double density_cdf(const DensitySpec& density, double x);

//! R(f^(k)) = (1/2pi) int |t|^(2k) cf(t)^2 dt.
double deriv_roughness(const DensitySpec& density, int k);

//! I = int exp(gamma |t|^alpha) cf(t)^2 dt. Throws Error(divergent) when
//! the integrand does not die out before the truncation point.
double supersmooth_integral(const DensitySpec& density,
                            double alpha,
                            double gamma);

} // namespace superkde
