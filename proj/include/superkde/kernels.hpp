#pragma once

#include "superkde/numerics.hpp"

#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace superkde {

inline constexpr double pi = std::numbers::pi;
inline constexpr double infinity = std::numeric_limits<double>::infinity();

//! Everything needed to build a kernel. The characteristic function is the
//! primary description; all built-ins are symmetric, so `cf` is real and even.
struct KernelDefinition
{
  std::string name;
  RealFunction cf;
  //! K(x). Left empty, it is obtained by numeric inverse Fourier transform of
  //! `cf` (requires a finite cf support).
  RealFunction spatial;
  //! (K*K)(x), used by pair-sum risk formulas. Left empty, it is obtained by
  //! numeric inverse Fourier transform of cf^2.
  RealFunction self_convolution;
  //! Optional fused K(x) and (K*K)(x), for the pair-sum hot loops.
  std::function<void(double x, double& k, double& kk)> pair_terms;
  //! Kinks and support points of cf on t >= 0.
  std::vector<double> cf_breakpoints;
  //! Smallest U with cf(t) = 0 for |t| >= U, or infinity.
  double cf_support_upper = infinity;
  //! Truncation point for cf-side integrals when the support is infinite.
  double cf_cap = infinity;
  //! Kinks of K on x >= 0 (e.g. the edge of a compact spatial support).
  std::vector<double> spatial_breakpoints;
  bool integrable = true;
};

//! Immutable kernel object. Copies share state; safe for concurrent reads.
//! The flatness functionals S_K, T_K and the roughness R(K) are computed
//! once at construction with the default settings.
class KernelSpec
{
public:
  explicit KernelSpec(KernelDefinition definition);

  const std::string& name() const;
  bool integrable() const;

  double cf(double t) const;
  //! K(x). Throws Error(not_integrable) for non-integrable kernels unless
  //! `allow_nonintegrable` is set.
  double eval(double x, bool allow_nonintegrable = false) const;
  double self_convolution(double x) const;
  //! k = K(x), kk = (K*K)(x).
  void pair_terms(double x, double& k, double& kk) const;

  std::span<const double> cf_breakpoints() const;
  std::span<const double> spatial_breakpoints() const;
  double cf_support_upper() const;
  bool cf_has_compact_support() const;
  //! Support bound if finite, else the truncation cap.
  double cf_integration_upper() const;

  double roughness() const;
  double s_k() const;
  double t_k() const;

private:
  struct State;
  std::shared_ptr<const State> state_;
};

KernelSpec trapezoidal_kernel();
KernelSpec gaussian_kernel();
KernelSpec epanechnikov_kernel();
KernelSpec natterer_kernel();
//! cf = indicator of [-1, 1]. Not integrable: usable cf-side only.
KernelSpec sinc_kernel();

//! Case-insensitive lookup of the built-in kernels (`trapezoidal`,
//! `gaussian`, `epanechnikov`, `natterer`, `sinc`).
KernelSpec kernel_from_name(std::string_view name);

double kernel_eval(const KernelSpec& kernel, double x);
//! K_h(x) = K(x / h) / h.
double kernel_scaled_eval(const KernelSpec& kernel, double h, double x);
double kernel_cf(const KernelSpec& kernel, double t);

struct FlatRegion
{
  double s_k;
  double t_k;
};

//! S_K and T_K on the grid {0, step, 2 step, ...} up to scan_max, merged
//! with the cf breakpoints. A point is flat when |cf(t) - 1| <= flatness_eps.
FlatRegion compute_s_t(const KernelSpec& kernel,
                       double flatness_eps = 1e-9,
                       double scan_step = 1e-3,
                       double scan_max = 10.0);

struct MomentResult
{
  double value;
  //! Signed integral of x^j K(x) over radius < |x| < 2 radius.
  double tail_estimate;
  //! Set when the truncated integral did not converge but the cf is
  //! identically one near the origin, so every derivative of the cf at 0
  //! (hence every moment, taken in the generalized sense) vanishes.
  bool from_flat_cf;
};

//! m_j(K) = int x^j K(x) dx over |x| <= radius with a signed tail check.
MomentResult kernel_moment(const KernelSpec& kernel,
                           int j,
                           double radius = 200.0);

struct KernelClassification
{
  double s_k;
  double t_k;
  //! Smallest j <= j_max with a nonzero moment; empty means no nonzero
  //! moment was found up to j_max.
  std::optional<int> order;
  //! m_1, m_2, ...; shorter than j_max when a higher moment failed to
  //! converge after the order was already determined.
  std::vector<double> moments;
  double roughness;
  bool is_superkernel;
};

KernelClassification classify(const KernelSpec& kernel,
                              int j_max = 10,
                              double moment_eps = 1e-6);

//! R(K) = (1/2pi) int cf(t)^2 dt, integrated in the Fourier domain.
double kernel_roughness(const KernelSpec& kernel,
                        const QuadratureSettings& settings = {});

//! Admissibility: R(K) < 2 K(0).
bool check_admissible(const KernelSpec& kernel);

} // namespace superkde
