#include "superkde/densities.hpp"
#include "superkde/error.hpp"
#include "superkde/estimation.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace superkde;

namespace {

ErrorCode
code_of(const auto& call)
{
  try {
    call();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::invalid_argument;
}

double
ks_statistic(std::vector<double> xs, const DensitySpec& d)
{
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double F = density_cdf(d, xs[i]);
    worst = std::max({ worst, F - static_cast<double>(i) / n,
                       static_cast<double>(i + 1) / n - F });
  }
  return worst;
}

} // namespace

TEST_CASE("density_eval and density_cf examples")
{
  const auto fvp = fvp_density();
  CHECK(density_eval(fvp, 0.0) == doctest::Approx(1 / (2 * pi)).epsilon(1e-14));
  CHECK(density_eval(fvp, pi) == doctest::Approx(2 / (pi * pi * pi)).epsilon(1e-12));
  CHECK(density_eval(gaussian_density(), 0.0) == doctest::Approx(1 / std::sqrt(2 * pi)));
  CHECK(density_cf(fvp, 0.0) == 1.0);
  CHECK(density_cf(fvp, 0.5) == 0.5);
  CHECK(density_cf(fvp, 2.0) == 0.0);
  for (double d : { 0.01, 0.1, 1.0 }) {
    CHECK(density_cf(fvp, fvp.d_f() + d) == 0.0);
  }
  CHECK(fvp.c_f() == 1.0);
  CHECK(fvp.d_f() == 1.0);
  CHECK_FALSE(gaussian_density().cf_has_compact_support());
  CHECK(density_cf(cauchy_density(), 2.0) == doctest::Approx(std::exp(-2.0)));
}

TEST_CASE("density invariants")
{
  for (const auto& d : { fvp_density(), gaussian_density(), cauchy_density() }) {
    CAPTURE(d.name());
    CHECK(d.cf(0.0) == doctest::Approx(1.0));
    for (double t : { 0.2, 0.8, 1.5, 3.0, 10.0 }) {
      CHECK(std::abs(d.cf(t)) <= 1.0);
      CHECK(d.cf(t) == d.cf(-t));
    }
    for (double x : { 0.0, 0.3, -2.0, 7.0, 100.0 }) {
      CHECK(d.pdf(x) >= 0.0);
    }
  }
  // unit mass; the FVP and Cauchy tails beyond the truncation are added analytically
  const auto fvp = fvp_density();
  const double fvp_mass = integrate([&](double x) { return fvp.pdf(x); },
                                    std::vector<double>{ -2000.0, 0.0, 2000.0 },
                                    QuadratureSettings{ 1e-12, 1e-10, 1 << 18 }) +
                          2 * fvp.survival_tail(2000.0);
  CHECK(std::abs(fvp_mass - 1.0) < 1e-6);
  const auto g = gaussian_density();
  CHECK(std::abs(integrate([&](double x) { return g.pdf(x); }, -40.0, 40.0) - 1.0) < 1e-6);
}

TEST_CASE("Fourier round trip reproduces the pdf")
{
  for (const auto& d : { fvp_density(), gaussian_density() }) {
    for (double x : { 0.0, 1.0, -1.0, pi, -pi }) {
      const std::vector<double> br(d.cf_breakpoints().begin(), d.cf_breakpoints().end());
      const double inv =
        integrate_even([&](double t) { return d.cf(t) * std::cos(t * x); }, br,
                       d.cf_integration_upper(), !d.cf_has_compact_support()) /
        (2 * pi);
      CHECK(std::abs(inv - d.pdf(x)) < 1e-6);
    }
  }
}

TEST_CASE("sample determinism and basic shape")
{
  RngStream r1(9, 1);
  RngStream r2(9, 1);
  const auto a = sample(gaussian_density(), 5, r1);
  const auto b = sample(gaussian_density(), 5, r2);
  REQUIRE(a.n() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(std::isfinite(a[i]));
    CHECK(a[i] == b[i]);
  }

  RngStream r3(2024, 3);
  const auto s = sample(fvp_density(), 10000, r3);
  double mean = 0.0;
  for (double x : s.points()) {
    mean += x;
  }
  mean /= 1e4;
  double ss = 0.0;
  for (double x : s.points()) {
    ss += (x - mean) * (x - mean);
  }
  const double sd = std::sqrt(ss / (1e4 - 1));
  CHECK(std::abs(mean) < 3 * sd / 100);

  CHECK(code_of([] { Sample(std::vector<double>{}); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { Sample(std::vector<double>{ 1.0, NAN }); }) == ErrorCode::invalid_argument);
}

TEST_CASE("FVP sampler passes KS and ECF checks")
{
  RngStream rng(42, 10000);
  const auto s = sample(fvp_density(), 10000, rng);
  const std::vector<double> xs(s.points().begin(), s.points().end());
  CHECK(ks_statistic(xs, fvp_density()) < 1.63 / std::sqrt(1e4));
  for (double t : { 0.25, 0.5, 0.75 }) {
    CHECK(std::abs(ecf(s, t) - std::complex<double>(1 - t, 0.0)) < 4 / std::sqrt(1e4));
  }
}

TEST_CASE("Gaussian and Cauchy samplers pass KS")
{
  RngStream rng(7, 1);
  for (const auto& d : { gaussian_density(), cauchy_density() }) {
    const auto s = sample(d, 5000, rng);
    const std::vector<double> xs(s.points().begin(), s.points().end());
    CHECK(ks_statistic(xs, d) < 1.63 / std::sqrt(5000.0));
  }
}

TEST_CASE("density_cdf")
{
  CHECK(density_cdf(fvp_density(), 0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(density_cdf(gaussian_density(), 0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(density_cdf(fvp_density(), 1e6) - 1.0) < 1e-4);
  CHECK(density_cdf(gaussian_density(), 1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-9));
  CHECK(density_cdf(cauchy_density(), 1.0) == doctest::Approx(0.75).epsilon(1e-9));
  // monotone on a grid, continuous across the tail switch
  double prev = 0.0;
  for (double x = -1500.0; x <= 1500.0; x += 37.5) {
    const double F = density_cdf(fvp_density(), x);
    CHECK(F >= prev);
    prev = F;
  }
  CHECK(std::abs(density_cdf(fvp_density(), 999.999) - density_cdf(fvp_density(), 1000.001)) <
        1e-8);
}

TEST_CASE("deriv_roughness")
{
  CHECK(deriv_roughness(gaussian_density(), 2) ==
        doctest::Approx(3 / (8 * std::sqrt(pi))).epsilon(1e-9));
  CHECK(deriv_roughness(fvp_density(), 1) == doctest::Approx(1 / (30 * pi)).epsilon(1e-10));
  CHECK(deriv_roughness(fvp_density(), 0) == doctest::Approx(1 / (3 * pi)).epsilon(1e-10));
  // Parseval
  const auto g = gaussian_density();
  const double direct =
    integrate_even([&](double t) { return g.cf(t) * g.cf(t); }, std::vector<double>{}, 40.0,
                   true) /
    (2 * pi);
  CHECK(std::abs(deriv_roughness(g, 0) - direct) < 1e-8);
  CHECK(code_of([] { deriv_roughness(fvp_density(), -1); }) == ErrorCode::invalid_argument);
}

TEST_CASE("supersmooth_integral")
{
  CHECK(supersmooth_integral(gaussian_density(), 2.0, 0.5) ==
        doctest::Approx(std::sqrt(2 * pi)).epsilon(1e-9));
  CHECK(supersmooth_integral(fvp_density(), 1.0, 1.0) ==
        doctest::Approx(2 * (2 * std::exp(1.0) - 5)).epsilon(1e-10));
  CHECK(code_of([] { supersmooth_integral(gaussian_density(), 2.0, 1.5); }) ==
        ErrorCode::divergent);
}

TEST_CASE("density_from_name")
{
  CHECK(density_from_name("FVP").name() == "fvp");
  CHECK(density_from_name("cauchy").name() == "cauchy");
  CHECK(code_of([] { density_from_name("laplace"); }) == ErrorCode::config_error);
}
