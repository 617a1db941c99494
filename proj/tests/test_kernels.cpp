#include "superkde/error.hpp"
#include "superkde/kernels.hpp"

#include <doctest.h>

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

std::vector<KernelSpec>
integrable_builtins()
{
  return { trapezoidal_kernel(), gaussian_kernel(), epanechnikov_kernel(), natterer_kernel() };
}

} // namespace

TEST_CASE("kernel_eval examples")
{
  const auto trap = trapezoidal_kernel();
  CHECK(kernel_eval(trap, 0.0) == doctest::Approx(1.5 / pi).epsilon(1e-14));
  CHECK(kernel_eval(trap, pi) == doctest::Approx(-2.0 / (pi * pi * pi)).epsilon(1e-12));
  CHECK(kernel_eval(gaussian_kernel(), 0.0) == doctest::Approx(1 / std::sqrt(2 * pi)));

  // series and closed form meet smoothly at the switch radius
  for (double x : { 0.0099, 0.0101, -0.0101 }) {
    const double closed = (std::cos(x) - std::cos(2 * x)) / (pi * x * x);
    CHECK(std::abs(kernel_eval(trap, x) - closed) < 1e-9);
  }
}

TEST_CASE("kernel_scaled_eval")
{
  const auto trap = trapezoidal_kernel();
  CHECK(kernel_scaled_eval(trap, 2.0, 0.0) == doctest::Approx(0.75 / pi));
  CHECK(kernel_scaled_eval(trap, 1.0, 0.7) == kernel_eval(trap, 0.7));
  CHECK(kernel_scaled_eval(gaussian_kernel(), 0.5, 0.0) == doctest::Approx(2 / std::sqrt(2 * pi)));
  CHECK(code_of([&] { kernel_scaled_eval(trap, 0.0, 1.0); }) == ErrorCode::invalid_bandwidth);
  CHECK(code_of([&] { kernel_scaled_eval(trap, -1.0, 1.0); }) == ErrorCode::invalid_bandwidth);
}

TEST_CASE("kernel_cf examples and invariants")
{
  const auto trap = trapezoidal_kernel();
  CHECK(kernel_cf(trap, 0.5) == 1.0);
  CHECK(kernel_cf(trap, 1.5) == 0.5);
  CHECK(kernel_cf(trap, 2.5) == 0.0);
  for (const auto& k : { trapezoidal_kernel(), gaussian_kernel(), epanechnikov_kernel(),
                         natterer_kernel(), sinc_kernel() }) {
    CAPTURE(k.name());
    CHECK(kernel_cf(k, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    for (double t : { 0.3, 0.9, 1.7, 4.0 }) {
      CHECK(kernel_cf(k, t) == kernel_cf(k, -t));
    }
    if (k.cf_has_compact_support()) {
      for (double d : { 0.01, 1.0 }) {
        CHECK(kernel_cf(k, k.cf_support_upper() + d) == 0.0);
      }
    }
  }
}

TEST_CASE("sinc refuses spatial evaluation")
{
  const auto s = sinc_kernel();
  CHECK_FALSE(s.integrable());
  CHECK(code_of([&] { kernel_eval(s, 0.0); }) == ErrorCode::not_integrable);
  CHECK(s.eval(pi / 2, true) == doctest::Approx(1.0 / (pi * pi / 2)));
  CHECK(code_of([&] { kernel_moment(s, 2); }) == ErrorCode::not_integrable);
}

TEST_CASE("compute_s_t")
{
  auto st = compute_s_t(trapezoidal_kernel());
  CHECK(st.s_k == doctest::Approx(1.0));
  CHECK(st.t_k == doctest::Approx(1.0));
  st = compute_s_t(gaussian_kernel());
  CHECK(st.s_k == 0.0);
  CHECK(st.t_k == 0.0);
  st = compute_s_t(natterer_kernel());
  CHECK(st.s_k == 0.0);
  CHECK(st.t_k == 0.0);
  CHECK(compute_s_t(sinc_kernel()).s_k == doctest::Approx(1.0));

  // larger eps never shrinks the flat region
  for (const auto& k : { gaussian_kernel(), natterer_kernel(), trapezoidal_kernel() }) {
    double prev = 0.0;
    for (double eps : { 1e-9, 1e-6, 1e-3, 1e-2, 0.1 }) {
      const double s = compute_s_t(k, eps).s_k;
      CHECK(s >= prev);
      prev = s;
    }
  }
}

TEST_CASE("kernel_moment")
{
  CHECK(std::abs(kernel_moment(gaussian_kernel(), 1).value) < 1e-12);
  CHECK(kernel_moment(gaussian_kernel(), 2).value == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(kernel_moment(epanechnikov_kernel(), 2).value == doctest::Approx(0.2).epsilon(1e-10));
  CHECK(code_of([] { kernel_moment(gaussian_kernel(), 0); }) == ErrorCode::invalid_argument);
}

TEST_CASE("classify")
{
  auto c = classify(gaussian_kernel(), 6);
  REQUIRE(c.order);
  CHECK(*c.order == 2);
  CHECK_FALSE(c.is_superkernel);

  c = classify(trapezoidal_kernel(), 6);
  CHECK_FALSE(c.order);
  CHECK(c.is_superkernel);
  for (double m : c.moments) {
    CHECK(std::abs(m) <= 1e-6);
  }
  CHECK(!classify(trapezoidal_kernel(), 10).order);

  c = classify(epanechnikov_kernel(), 6);
  REQUIRE(c.order);
  CHECK(*c.order == 2);
  CHECK(c.moments[1] == doctest::Approx(0.2).epsilon(1e-8));
  CHECK_FALSE(c.is_superkernel);

  // the cf has second derivative -2 at 0, so m_2 = 2
  c = classify(natterer_kernel(), 6);
  REQUIRE(c.order);
  CHECK(*c.order == 2);
  CHECK(c.moments[1] == doctest::Approx(2.0).epsilon(1e-3));

  for (const auto& k : integrable_builtins()) {
    const auto r = classify(k);
    CHECK(r.s_k <= r.t_k);
    CHECK(r.roughness > 0.0);
    CHECK(r.is_superkernel == (r.s_k == r.t_k && r.s_k > 0.0));
  }
  CHECK(code_of([] { classify(gaussian_kernel(), 1); }) == ErrorCode::invalid_argument);

  // sinc: Fourier-side fields only
  c = classify(sinc_kernel());
  CHECK(c.is_superkernel);
  CHECK(c.moments.empty());
  CHECK(c.roughness == doctest::Approx(1 / pi).epsilon(1e-12));
}

TEST_CASE("kernel_roughness")
{
  CHECK(kernel_roughness(trapezoidal_kernel()) == doctest::Approx(4 / (3 * pi)).epsilon(1e-10));
  CHECK(kernel_roughness(sinc_kernel()) == doctest::Approx(1 / pi).epsilon(1e-12));
  CHECK(kernel_roughness(gaussian_kernel()) ==
        doctest::Approx(1 / (2 * std::sqrt(pi))).epsilon(1e-10));
  CHECK(kernel_roughness(epanechnikov_kernel()) == doctest::Approx(0.6).epsilon(1e-7));

  // spatial cross-check: R(K) = (K*K)(0)
  for (const auto& k : integrable_builtins()) {
    CHECK(k.roughness() == doctest::Approx(k.self_convolution(0.0)).epsilon(1e-6));
  }
}

TEST_CASE("superkernel roughness lower bound")
{
  for (const auto& k : { trapezoidal_kernel(), sinc_kernel() }) {
    CHECK(k.roughness() >= k.s_k() / pi - 1e-9);
  }
  CHECK(std::abs(sinc_kernel().roughness() - sinc_kernel().s_k() / pi) < 1e-9);
}

TEST_CASE("check_admissible")
{
  CHECK(check_admissible(trapezoidal_kernel()));
  CHECK(check_admissible(gaussian_kernel()));

  KernelDefinition flipped;
  flipped.name = "flipped";
  flipped.cf = [](double t) {
    const double a = std::abs(t);
    const double phi = a < 1 ? 1.0 : (a < 2 ? 2 - a : 0.0);
    return a < 2 ? 2 - phi : 0.0;
  };
  flipped.cf_breakpoints = { 1.0, 2.0 };
  flipped.cf_support_upper = 2.0;
  flipped.spatial = [](double x) { return -trapezoidal_kernel().eval(x); };
  flipped.self_convolution = [](double x) { return trapezoidal_kernel().self_convolution(x); };
  const KernelSpec neg(flipped);
  CHECK(neg.eval(0.0) < 0.0);
  CHECK_FALSE(check_admissible(neg));
}

TEST_CASE("built-in kernels integrate to one and match their cf")
{
  for (const auto& k : integrable_builtins()) {
    CAPTURE(k.name());
    std::vector<double> pts{ -200.0, 0.0, 200.0 };
    for (double b : k.spatial_breakpoints()) {
      pts.push_back(b);
      pts.push_back(-b);
    }
    QuadratureSettings s;
    s.max_subdivisions = 1 << 18;
    const double mass = integrate([&](double x) { return k.eval(x); }, pts, s);
    // the trapezoidal tail beyond 200 is O(1/200^2)
    CHECK(std::abs(mass - 1.0) < (k.name() == "trapezoidal" ? 2e-5 : 1e-6));
  }
  for (const auto& k : { trapezoidal_kernel(), gaussian_kernel() }) {
    for (double x : { 0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0 }) {
      const std::vector<double> br(k.cf_breakpoints().begin(), k.cf_breakpoints().end());
      const double inv =
        integrate_even([&](double t) { return k.cf(t) * std::cos(t * x); }, br,
                       k.cf_integration_upper(), !k.cf_has_compact_support()) /
        (2 * pi);
      CHECK(std::abs(inv - k.eval(x)) < 1e-6);
    }
  }
}

TEST_CASE("kernel_from_name")
{
  CHECK(kernel_from_name("Trapezoidal").name() == "trapezoidal");
  CHECK(kernel_from_name("GAUSSIAN").name() == "gaussian");
  CHECK(code_of([] { kernel_from_name("box"); }) == ErrorCode::config_error);
}

TEST_CASE("fused pair terms agree with separate evaluation")
{
  for (const auto& k : integrable_builtins()) {
    for (double x : { 0.0, 0.05, 0.1, 0.37, 1.0, 3.3, -7.5, 40.0 }) {
      double kv = 0.0;
      double kk = 0.0;
      k.pair_terms(x, kv, kk);
      CHECK(std::abs(kv - k.eval(x)) < 1e-13);
      CHECK(std::abs(kk - k.self_convolution(x)) < 1e-13);
    }
  }
}
