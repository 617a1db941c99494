#include "superkde/densities.hpp"

#include "superkde/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace superkde {

Sample::Sample(std::vector<double> points)
{
  if (points.empty()) {
    throw Error(ErrorCode::invalid_argument, "Sample: need at least one point");
  }
  for (double x : points) {
    if (!std::isfinite(x)) {
      throw Error(ErrorCode::invalid_argument, "Sample: points must be finite");
    }
  }
  points_ = std::make_shared<const std::vector<double>>(std::move(points));
}

DensitySpec::DensitySpec(DensityDefinition definition)
{
  if (!definition.pdf || !definition.cf || !definition.sampler ||
      !definition.survival_tail) {
    throw Error(ErrorCode::invalid_argument,
                "DensitySpec '" + definition.name +
                  "': pdf, cf, sampler and survival_tail are required");
  }
  if (!(definition.d_f < infinity) && !std::isfinite(definition.cf_cap)) {
    throw Error(ErrorCode::invalid_argument,
                "DensitySpec '" + definition.name +
                  "': infinite cf support needs a finite cf_cap");
  }
  std::sort(definition.cf_breakpoints.begin(), definition.cf_breakpoints.end());
  def_ = std::make_shared<const DensityDefinition>(std::move(definition));
}

namespace {

double
fvp_pdf(double x)
{
  if (x == 0.0) {
    return 0.5 / pi;
  }
  // 1 - cos x = 2 sin^2(x/2), free of cancellation
  const double s = std::sin(0.5 * x) / (0.5 * x);
  return 0.5 * s * s / pi;
}

} // namespace

DensitySpec
fvp_density()
{
  DensityDefinition def;
  def.name = "fvp";
  def.pdf = fvp_pdf;
  def.cf = [](double t) { return std::max(0.0, 1.0 - std::abs(t)); };
  // Rejection from the envelope min(1/(2 pi), 2/(pi x^2)): since
  // 1 - cos x <= min(x^2/2, 2) it dominates f. Its mass 4/pi splits evenly
  // between a uniform part on [-2, 2] and Pareto tails with |x| = 2/U.
  def.sampler = [](RngStream& rng, std::size_t n) {
    std::vector<double> out;
    out.reserve(n);
    while (out.size() < n) {
      double x = 0.0;
      if (rng.uniform() < 0.5) {
        x = -2.0 + 4.0 * rng.uniform();
      } else {
        x = 2.0 / rng.uniform();
        if (rng.uniform() < 0.5) {
          x = -x;
        }
      }
      const double envelope =
        std::abs(x) <= 2.0 ? 0.5 / pi : 2.0 / (pi * x * x);
      if (rng.uniform() * envelope <= fvp_pdf(x)) {
        out.push_back(x);
      }
    }
    return out;
  };
  def.cf_breakpoints = { 1.0 };
  def.c_f = 1.0;
  def.d_f = 1.0;
  def.cdf_radius = 1000.0;
  // P(X > x) = 1/(pi x) + sin(x)/(pi x^2) + O(x^-3)
  def.survival_tail = [](double x) {
    return 1.0 / (pi * x) + std::sin(x) / (pi * x * x);
  };
  return DensitySpec(std::move(def));
}

DensitySpec
gaussian_density()
{
  DensityDefinition def;
  def.name = "gaussian";
  def.pdf = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * pi); };
  def.cf = [](double t) { return std::exp(-0.5 * t * t); };
  def.sampler = [](RngStream& rng, std::size_t n) {
    std::vector<double> out;
    out.reserve(n + 1);
    while (out.size() < n) {
      const double r = std::sqrt(-2.0 * std::log(rng.uniform()));
      const double theta = 2.0 * pi * rng.uniform();
      out.push_back(r * std::cos(theta));
      out.push_back(r * std::sin(theta));
    }
    out.resize(n);
    return out;
  };
  def.cf_cap = 40.0;
  def.cdf_radius = 40.0;
  def.survival_tail = [](double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); };
  return DensitySpec(std::move(def));
}

DensitySpec
cauchy_density()
{
  DensityDefinition def;
  def.name = "cauchy";
  def.pdf = [](double x) { return 1.0 / (pi * (1.0 + x * x)); };
  def.cf = [](double t) { return std::exp(-std::abs(t)); };
  def.sampler = [](RngStream& rng, std::size_t n) {
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(std::tan(pi * (rng.uniform() - 0.5)));
    }
    return out;
  };
  def.cf_cap = 60.0;
  def.cdf_radius = 1000.0;
  def.survival_tail = [](double x) { return std::atan(1.0 / x) / pi; };
  return DensitySpec(std::move(def));
}

DensitySpec
density_from_name(std::string_view name)
{
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  if (key == "fvp") {
    return fvp_density();
  }
  if (key == "gaussian") {
    return gaussian_density();
  }
  if (key == "cauchy") {
    return cauchy_density();
  }
  throw Error(ErrorCode::config_error,
              "unknown density '" + std::string(name) +
                "' (expected fvp, gaussian or cauchy)");
}

double
density_eval(const DensitySpec& density, double x)
{
  return density.pdf(x);
}

double
density_cf(const DensitySpec& density, double t)
{
  return density.cf(t);
}

Sample
sample(const DensitySpec& density, std::size_t n, RngStream& rng)
{
  if (n < 1) {
    throw Error(ErrorCode::invalid_argument, "sample: n must be >= 1");
  }
  return Sample(density.draw(rng, n));
}

double
density_cdf(const DensitySpec& density, double x)
{
  const double ax = std::abs(x);
  if (ax == 0.0) {
    return 0.5;
  }
  const double radius = density.cdf_radius();
  const double inner = std::min(ax, radius);
  double mass = integrate([&density](double u) { return density.pdf(u); },
                          0.0,
                          inner,
                          { 1e-12, 1e-10, 1 << 15 });
  if (ax > radius) {
    mass += density.survival_tail(radius) - density.survival_tail(ax);
  }
  return x > 0.0 ? 0.5 + mass : 0.5 - mass;
}

double
deriv_roughness(const DensitySpec& density, int k)
{
  if (k < 0) {
    throw Error(ErrorCode::invalid_argument, "deriv_roughness: k must be >= 0");
  }
  const auto integrand = [&density, k](double t) {
    const double v = density.cf(t);
    return std::pow(t, 2 * k) * v * v;
  };
  return integrate_even(integrand,
                        density.cf_breakpoints(),
                        density.cf_integration_upper(),
                        !density.cf_has_compact_support()) /
         (2.0 * pi);
}

double
supersmooth_integral(const DensitySpec& density, double alpha, double gamma)
{
  if (!(alpha > 0.0) || !(gamma > 0.0)) {
    throw Error(ErrorCode::invalid_argument,
                "supersmooth_integral: alpha and gamma must be positive");
  }
  const auto integrand = [&density, alpha, gamma](double t) {
    const double v = density.cf(t);
    if (v == 0.0) {
      return 0.0;
    }
    return std::exp(gamma * std::pow(std::abs(t), alpha) +
                    2.0 * std::log(std::abs(v)));
  };
  try {
    return integrate_even(integrand,
                          density.cf_breakpoints(),
                          density.cf_integration_upper(),
                          !density.cf_has_compact_support(),
                          {},
                          ErrorCode::divergent);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::non_convergence) {
      throw Error(ErrorCode::divergent,
                  std::string("supersmooth_integral diverges: ") + e.what());
    }
    throw;
  }
}

} // namespace superkde
