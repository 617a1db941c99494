#pragma once

#include "superkde/error.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace superkde {

using RealFunction = std::function<double(double)>;

//! Tolerances for adaptive quadrature. A result Q is accepted once the
//! estimated error is below max(abs_tol, rel_tol * |Q|).
struct QuadratureSettings
{
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_subdivisions = 1 << 15;

  void validate() const;
};

//! Integrates f over [a, b] by globally adaptive Gauss-Kronrod (7/15)
//! subdivision. Throws Error(non_convergence) when max_subdivisions is
//! exhausted before the tolerance is met.
double integrate(const RealFunction& f,
                 double a,
                 double b,
                 const QuadratureSettings& settings = {});

//! Same, over [points.front(), points.back()] with every entry of `points`
//! used as an initial panel boundary. Kinks of piecewise-smooth integrands
//! must be listed here. Entries are sorted and deduplicated internally.
double integrate(const RealFunction& f,
                 std::span<const double> points,
                 const QuadratureSettings& settings = {});

//! Integral of an even integrand over (-upper, upper), computed as twice the
//! half-line integral with the given kink points (those outside (0, upper)
//! are ignored). When `upper_is_cap` is set the integrand is not known to
//! vanish beyond `upper`; the tail over [upper, 2 upper] is then estimated
//! and Error(tail_error) is raised if it is not negligible.
double integrate_even(const RealFunction& f,
                      std::span<const double> breakpoints,
                      double upper,
                      bool upper_is_cap,
                      const QuadratureSettings& settings = {},
                      ErrorCode tail_error = ErrorCode::non_convergence);

struct MinimizeResult
{
  double argmin;
  double value;
};

//! Brent's derivative-free minimizer (golden section with parabolic steps)
//! on [lo, hi]. The returned argmin is within `tol` of a local minimizer.
MinimizeResult minimize_scalar(const RealFunction& g,
                               double lo,
                               double hi,
                               double tol = 1e-7);

//! Sum of f(x) over xs, accumulated pairwise.
double pairwise_sum(std::span<const double> xs,
                    const std::function<double(double)>& f);

//! Deterministic pseudo-random stream keyed by (seed, stream_id).
//!
//! The engine is std::mt19937_64 seeded through std::seed_seq with the four
//! 32-bit halves of seed and stream_id; both are fully specified by the C++
//! standard, so sequences are identical across platforms and compilers.
class RngStream
{
public:
  static constexpr const char* algorithm =
    "mt19937_64 seeded by seed_seq(seed_lo, seed_hi, stream_lo, stream_hi)";

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  //! Uniform draw on the open interval (0, 1), 53 bits of resolution.
  double uniform()
  {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

} // namespace superkde
