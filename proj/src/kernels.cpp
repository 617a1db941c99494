#include "superkde/kernels.hpp"

#include "cosine_table.hpp"
#include "superkde/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace superkde {

struct KernelSpec::State
{
  KernelDefinition def;
  std::shared_ptr<detail::CosineTransformTable> spatial_table;
  std::shared_ptr<detail::CosineTransformTable> self_conv_table;
  double roughness = 0.0;
  FlatRegion flat{ 0.0, 0.0 };
};

KernelSpec::KernelSpec(KernelDefinition definition)
{
  if (!definition.cf) {
    throw Error(ErrorCode::invalid_argument,
                "KernelSpec: a characteristic function is required");
  }
  if (definition.cf_support_upper < infinity) {
    definition.cf_cap = definition.cf_support_upper;
  }
  if (!(definition.cf_cap > 0.0) || !std::isfinite(definition.cf_cap)) {
    throw Error(ErrorCode::invalid_argument,
                "KernelSpec '" + definition.name +
                  "': infinite cf support needs a finite cf_cap");
  }
  std::sort(definition.cf_breakpoints.begin(), definition.cf_breakpoints.end());
  std::sort(definition.spatial_breakpoints.begin(),
            definition.spatial_breakpoints.end());

  auto state = std::make_shared<State>();
  const bool compact = definition.cf_support_upper < infinity;
  if (!definition.spatial || !definition.self_convolution) {
    if (!compact) {
      throw Error(ErrorCode::invalid_argument,
                  "KernelSpec '" + definition.name +
                    "': numeric spatial forms need a compact cf support");
    }
  }
  if (!definition.spatial) {
    state->spatial_table = std::make_shared<detail::CosineTransformTable>(
      definition.cf, definition.cf_breakpoints, definition.cf_support_upper);
  }
  if (!definition.self_convolution) {
    auto cf = definition.cf;
    state->self_conv_table = std::make_shared<detail::CosineTransformTable>(
      [cf](double t) {
        const double v = cf(t);
        return v * v;
      },
      definition.cf_breakpoints,
      definition.cf_support_upper);
  }
  state->def = std::move(definition);
  state_ = state;

  state->roughness = kernel_roughness(*this);
  state->flat = compute_s_t(*this);
}

const std::string&
KernelSpec::name() const
{
  return state_->def.name;
}

bool
KernelSpec::integrable() const
{
  return state_->def.integrable;
}

double
KernelSpec::cf(double t) const
{
  return state_->def.cf(t);
}

double
KernelSpec::eval(double x, bool allow_nonintegrable) const
{
  if (!state_->def.integrable && !allow_nonintegrable) {
    throw Error(ErrorCode::not_integrable,
                "kernel '" + state_->def.name +
                  "' is not integrable; spatial evaluation refused");
  }
  if (state_->spatial_table) {
    return (*state_->spatial_table)(x);
  }
  return state_->def.spatial(x);
}

double
KernelSpec::self_convolution(double x) const
{
  if (!state_->def.integrable) {
    throw Error(ErrorCode::not_integrable,
                "kernel '" + state_->def.name +
                  "' is not integrable; spatial evaluation refused");
  }
  if (state_->self_conv_table) {
    return (*state_->self_conv_table)(x);
  }
  return state_->def.self_convolution(x);
}

void
KernelSpec::pair_terms(double x, double& k, double& kk) const
{
  if (state_->def.pair_terms) {
    state_->def.pair_terms(x, k, kk);
    return;
  }
  k = eval(x);
  kk = self_convolution(x);
}

std::span<const double>
KernelSpec::cf_breakpoints() const
{
  return state_->def.cf_breakpoints;
}

std::span<const double>
KernelSpec::spatial_breakpoints() const
{
  return state_->def.spatial_breakpoints;
}

double
KernelSpec::cf_support_upper() const
{
  return state_->def.cf_support_upper;
}

bool
KernelSpec::cf_has_compact_support() const
{
  return state_->def.cf_support_upper < infinity;
}

double
KernelSpec::cf_integration_upper() const
{
  return state_->def.cf_cap;
}

double
KernelSpec::roughness() const
{
  return state_->roughness;
}

double
KernelSpec::s_k() const
{
  return state_->flat.s_k;
}

double
KernelSpec::t_k() const
{
  return state_->flat.t_k;
}

// ---------------------------------------------------------------- built-ins

KernelSpec
trapezoidal_kernel()
{
  KernelDefinition def;
  def.name = "trapezoidal";
  def.cf = [](double t) {
    const double a = std::abs(t);
    if (a < 1.0) {
      return 1.0;
    }
    return a < 2.0 ? 2.0 - a : 0.0;
  };
  def.spatial = [](double x) {
    if (std::abs(x) < 1e-2) {
      const double x2 = x * x;
      return (1.5 + x2 * (-5.0 / 8.0 + x2 * (7.0 / 80.0 - x2 * 17.0 / 2688.0))) /
             pi;
    }
    // cos x - cos 2x = 2 sin(3x/2) sin(x/2)
    return 2.0 * std::sin(1.5 * x) * std::sin(0.5 * x) / (pi * x * x);
  };
  def.self_convolution = [](double x) {
    if (std::abs(x) < 0.1) {
      const double x2 = x * x;
      return (4.0 / 3.0 +
              x2 * (-13.0 / 30.0 +
                    x2 * (1.0 / 21.0 +
                          x2 * (-251.0 / 90720.0 + x2 * 509.0 / 4989600.0)))) /
             pi;
    }
    return 2.0 * (x * std::cos(x) + std::sin(x) - std::sin(2.0 * x)) /
           (pi * x * x * x);
  };
  def.pair_terms = [spatial = def.spatial,
                    self = def.self_convolution](double x, double& k, double& kk) {
    if (std::abs(x) < 0.1) {
      k = spatial(x);
      kk = self(x);
      return;
    }
    const double sn = std::sin(x);
    const double cs = std::cos(x);
    const double x2 = x * x;
    // cos x - cos 2x = (1 - cos x)(1 + 2 cos x), sin 2x = 2 sin x cos x
    k = (1.0 - cs) * (1.0 + 2.0 * cs) / (pi * x2);
    kk = 2.0 * (x * cs + sn * (1.0 - 2.0 * cs)) / (pi * x2 * x);
  };
  def.cf_breakpoints = { 1.0, 2.0 };
  def.cf_support_upper = 2.0;
  return KernelSpec(std::move(def));
}

KernelSpec
gaussian_kernel()
{
  KernelDefinition def;
  def.name = "gaussian";
  def.cf = [](double t) { return std::exp(-0.5 * t * t); };
  def.spatial = [](double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * pi);
  };
  def.self_convolution = [](double x) {
    return std::exp(-0.25 * x * x) / (2.0 * std::sqrt(pi));
  };
  def.pair_terms = [](double x, double& k, double& kk) {
    const double e = std::exp(-0.25 * x * x);
    k = e * e / std::sqrt(2.0 * pi);
    kk = e / (2.0 * std::sqrt(pi));
  };
  def.cf_cap = 40.0;
  return KernelSpec(std::move(def));
}

KernelSpec
epanechnikov_kernel()
{
  KernelDefinition def;
  def.name = "epanechnikov";
  def.cf = [](double t) {
    const double a = std::abs(t);
    if (a < 0.05) {
      const double t2 = t * t;
      return 1.0 + t2 * (-0.1 + t2 * (1.0 / 280.0 - t2 / 15120.0));
    }
    return 3.0 * (std::sin(a) - a * std::cos(a)) / (a * a * a);
  };
  def.spatial = [](double x) {
    return std::abs(x) <= 1.0 ? 0.75 * (1.0 - x * x) : 0.0;
  };
  def.self_convolution = [](double x) {
    const double a = std::abs(x);
    if (a >= 2.0) {
      return 0.0;
    }
    const double r = 2.0 - a;
    return 3.0 / 160.0 * r * r * r * (a * a + 6.0 * a + 4.0);
  };
  // |cf(t)| <= 3 (1 + t) / t^3, so the squared tail beyond 5000 is ~1e-11
  def.cf_cap = 5000.0;
  def.spatial_breakpoints = { 1.0 };
  return KernelSpec(std::move(def));
}

KernelSpec
natterer_kernel()
{
  KernelDefinition def;
  def.name = "natterer";
  def.cf = [](double t) {
    const double t2 = t * t;
    return t2 < 1.0 ? std::exp(-t2 / (1.0 - t2)) : 0.0;
  };
  def.cf_breakpoints = { 1.0 };
  def.cf_support_upper = 1.0;
  return KernelSpec(std::move(def));
}

KernelSpec
sinc_kernel()
{
  KernelDefinition def;
  def.name = "sinc";
  def.cf = [](double t) { return std::abs(t) <= 1.0 ? 1.0 : 0.0; };
  const auto sinc = [](double x) {
    return std::abs(x) < 1e-8 ? 1.0 / pi : std::sin(x) / (pi * x);
  };
  def.spatial = sinc;
  def.self_convolution = sinc;
  def.cf_breakpoints = { 1.0 };
  def.cf_support_upper = 1.0;
  def.integrable = false;
  return KernelSpec(std::move(def));
}

KernelSpec
kernel_from_name(std::string_view name)
{
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  if (key == "trapezoidal") {
    return trapezoidal_kernel();
  }
  if (key == "gaussian") {
    return gaussian_kernel();
  }
  if (key == "epanechnikov") {
    return epanechnikov_kernel();
  }
  if (key == "natterer") {
    return natterer_kernel();
  }
  if (key == "sinc") {
    return sinc_kernel();
  }
  throw Error(ErrorCode::config_error,
              "unknown kernel '" + std::string(name) +
                "' (expected trapezoidal, gaussian, epanechnikov, natterer "
                "or sinc)");
}

// --------------------------------------------------------------- operations

double
kernel_eval(const KernelSpec& kernel, double x)
{
  return kernel.eval(x);
}

double
kernel_scaled_eval(const KernelSpec& kernel, double h, double x)
{
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorCode::invalid_bandwidth, "bandwidth must be positive");
  }
  return kernel.eval(x / h) / h;
}

double
kernel_cf(const KernelSpec& kernel, double t)
{
  return kernel.cf(t);
}

FlatRegion
compute_s_t(const KernelSpec& kernel,
            double flatness_eps,
            double scan_step,
            double scan_max)
{
  if (!(flatness_eps > 0.0) || !(scan_step > 0.0) || !(scan_max > 0.0)) {
    throw Error(ErrorCode::invalid_argument,
                "compute_s_t: eps, step and max must be positive");
  }
  std::vector<double> grid;
  const auto steps = static_cast<long>(std::floor(scan_max / scan_step + 1e-9));
  grid.reserve(static_cast<std::size_t>(steps) + 8);
  for (long i = 0; i <= steps; ++i) {
    grid.push_back(static_cast<double>(i) * scan_step);
  }
  for (double b : kernel.cf_breakpoints()) {
    if (b <= scan_max) {
      grid.push_back(b);
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  FlatRegion flat{ 0.0, 0.0 };
  bool still_flat = true;
  for (double t : grid) {
    const bool is_flat = std::abs(kernel.cf(t) - 1.0) <= flatness_eps;
    if (is_flat) {
      flat.t_k = t;
      if (still_flat) {
        flat.s_k = t;
      }
    } else {
      still_flat = false;
    }
  }
  return flat;
}

namespace {

struct TruncatedMoment
{
  MomentResult result;
  bool converged;
};

TruncatedMoment
truncated_moment(const KernelSpec& kernel, int j, double radius)
{
  if (j < 1) {
    throw Error(ErrorCode::invalid_argument, "kernel_moment: j must be >= 1");
  }
  if (!kernel.integrable()) {
    throw Error(ErrorCode::not_integrable,
                "kernel '" + kernel.name() + "' has no moments");
  }
  // a real cf means K is even
  if (j % 2 == 1) {
    return { { 0.0, 0.0, false }, true };
  }
  const auto integrand = [&kernel, j](double x) {
    return std::pow(x, j) * kernel.eval(x);
  };
  // even integrand: integrate over x >= 0 and double
  const auto half_line = [&](double lo, double hi) {
    std::vector<double> points{ lo, hi };
    for (double b : kernel.spatial_breakpoints()) {
      if (b > lo && b < hi) {
        points.push_back(b);
      }
    }
    return 2.0 * integrate(integrand, points);
  };

  double value = 0.0;
  try {
    value = half_line(0.0, radius);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::non_convergence || !(kernel.s_k() > 0.0)) {
      throw;
    }
    return { { 0.0, infinity, true }, true };
  }

  double tail = infinity;
  try {
    tail = half_line(radius, 2.0 * radius);
  } catch (const Error&) {
  }
  if (std::abs(tail) <= std::max(1e-9, 1e-4 * std::abs(value))) {
    return { { value, tail, false }, true };
  }
  if (kernel.s_k() > 0.0) {
    return { { 0.0, tail, true }, true };
  }
  return { { value, tail, false }, false };
}

} // namespace

MomentResult
kernel_moment(const KernelSpec& kernel, int j, double radius)
{
  const TruncatedMoment m = truncated_moment(kernel, j, radius);
  if (!m.converged) {
    throw Error(ErrorCode::non_convergence,
                "kernel_moment: moment " + std::to_string(j) + " of '" +
                  kernel.name() + "' not converged at radius " +
                  std::to_string(radius) + " (tail estimate " +
                  std::to_string(m.result.tail_estimate) + ")");
  }
  return m.result;
}

KernelClassification
classify(const KernelSpec& kernel, int j_max, double moment_eps)
{
  if (j_max < 2) {
    throw Error(ErrorCode::invalid_argument, "classify: j_max must be >= 2");
  }
  KernelClassification out;
  out.s_k = kernel.s_k();
  out.t_k = kernel.t_k();
  out.roughness = kernel.roughness();
  out.is_superkernel = out.s_k == out.t_k && out.s_k > 0.0;
  // no moments to report: the Fourier-side fields are all there is
  if (!kernel.integrable()) {
    return out;
  }

  for (int j = 1; j <= j_max; ++j) {
    const TruncatedMoment tm = truncated_moment(kernel, j, 200.0);
    const double m = tm.result.value;
    if (!tm.converged) {
      if (out.order) {
        break;
      }
      // imprecise, but still provably nonzero: that fixes the order
      if (std::abs(m) - 2.0 * std::abs(tm.result.tail_estimate) > moment_eps) {
        out.moments.push_back(m);
        out.order = j;
        break;
      }
      kernel_moment(kernel, j);
    }
    out.moments.push_back(m);
    if (!out.order && std::abs(m) > moment_eps) {
      out.order = j;
    }
  }
  return out;
}

double
kernel_roughness(const KernelSpec& kernel, const QuadratureSettings& settings)
{
  const auto integrand = [&kernel](double t) {
    const double v = kernel.cf(t);
    return v * v;
  };
  return integrate_even(integrand,
                        kernel.cf_breakpoints(),
                        kernel.cf_integration_upper(),
                        !kernel.cf_has_compact_support(),
                        settings) /
         (2.0 * pi);
}

bool
check_admissible(const KernelSpec& kernel)
{
  return kernel.roughness() < 2.0 * kernel.eval(0.0);
}

} // namespace superkde
