#include "superkde/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <string>

namespace superkde {

namespace {

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
constexpr std::array<double, 8> kronrod_nodes = {
  0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
  0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
  0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
  0.207784955007898467600689403773245, 0.000000000000000000000000000000000
};
constexpr std::array<double, 8> kronrod_weights = {
  0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
  0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
  0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
  0.204432940075298892414161999234649, 0.209482141084727828012999174891714
};
constexpr std::array<double, 4> gauss_weights = {
  0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
  0.381830050505118944950369775488975, 0.417959183673469387755102040816327
};

struct Panel
{
  double a;
  double b;
  double value;
  double error;

  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel
gauss_kronrod_15(const RealFunction& f, double a, double b)
{
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double uflow = std::numeric_limits<double>::min();

  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  std::array<double, 7> f_left{};
  std::array<double, 7> f_right{};
  const double f_center = f(center);
  double kronrod = f_center * kronrod_weights[7];
  double gauss = f_center * gauss_weights[3];
  double abs_sum = std::abs(kronrod);

  for (int j = 0; j < 7; ++j) {
    const double dx = half * kronrod_nodes[j];
    f_left[j] = f(center - dx);
    f_right[j] = f(center + dx);
    const double pair = f_left[j] + f_right[j];
    kronrod += kronrod_weights[j] * pair;
    abs_sum +=
      kronrod_weights[j] * (std::abs(f_left[j]) + std::abs(f_right[j]));
    if (j % 2 == 1) {
      gauss += gauss_weights[j / 2] * pair;
    }
  }

  const double mean = 0.5 * kronrod;
  double asc = kronrod_weights[7] * std::abs(f_center - mean);
  for (int j = 0; j < 7; ++j) {
    asc += kronrod_weights[j] *
           (std::abs(f_left[j] - mean) + std::abs(f_right[j] - mean));
  }

  const double value = kronrod * half;
  double error = std::abs((kronrod - gauss) * half);
  asc *= std::abs(half);
  abs_sum *= std::abs(half);
  if (asc != 0.0 && error != 0.0) {
    error = asc * std::min(1.0, std::pow(200.0 * error / asc, 1.5));
  }
  if (abs_sum > uflow / (50.0 * eps)) {
    error = std::max(50.0 * eps * abs_sum, error);
  }
  if (!std::isfinite(value) || !std::isfinite(error)) {
    throw Error(ErrorCode::non_convergence,
                "integrate: non-finite integrand on [" + std::to_string(a) +
                  ", " + std::to_string(b) + "]");
  }
  return { a, b, value, error };
}

} // namespace

void
QuadratureSettings::validate() const
{
  if (!(abs_tol > 0.0) || !(rel_tol >= 0.0) || max_subdivisions < 1) {
    throw Error(ErrorCode::invalid_argument,
                "QuadratureSettings: need abs_tol > 0, rel_tol >= 0 and "
                "max_subdivisions >= 1");
  }
}

double
integrate(const RealFunction& f,
          double a,
          double b,
          const QuadratureSettings& settings)
{
  const std::array<double, 2> points = { a, b };
  return integrate(f, points, settings);
}

double
integrate(const RealFunction& f,
          std::span<const double> points,
          const QuadratureSettings& settings)
{
  settings.validate();
  std::vector<double> cuts(points.begin(), points.end());
  if (cuts.size() < 2) {
    throw Error(ErrorCode::invalid_argument,
                "integrate: need at least two interval end points");
  }
  for (double p : cuts) {
    if (!std::isfinite(p)) {
      throw Error(ErrorCode::invalid_argument,
                  "integrate: interval end points must be finite");
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  if (cuts.size() < 2) {
    throw Error(ErrorCode::invalid_argument, "integrate: need a < b");
  }

  std::priority_queue<Panel> panels;
  double total = 0.0;
  double total_error = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Panel p = gauss_kronrod_15(f, cuts[i], cuts[i + 1]);
    total += p.value;
    total_error += p.error;
    panels.push(p);
  }

  int subdivisions = 0;
  while (total_error > std::max(settings.abs_tol, settings.rel_tol * std::abs(total))) {
    if (subdivisions >= settings.max_subdivisions) {
      char detail[96];
      std::snprintf(detail, sizeof detail, "%d subdivisions (error %.3e)",
                    subdivisions, total_error);
      throw Error(ErrorCode::non_convergence,
                  std::string("integrate: tolerance not met after ") + detail);
    }
    Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw Error(ErrorCode::non_convergence,
                  "integrate: panel cannot be subdivided further");
    }
    Panel left = gauss_kronrod_15(f, worst.a, mid);
    Panel right = gauss_kronrod_15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++subdivisions;

    // the running sums drift; refresh them now and then
    if (subdivisions % 256 == 0) {
      total = 0.0;
      total_error = 0.0;
      auto copy = panels;
      while (!copy.empty()) {
        total += copy.top().value;
        total_error += copy.top().error;
        copy.pop();
      }
    }
  }

  double sum = 0.0;
  while (!panels.empty()) {
    sum += panels.top().value;
    panels.pop();
  }
  return sum;
}

double
integrate_even(const RealFunction& f,
               std::span<const double> breakpoints,
               double upper,
               bool upper_is_cap,
               const QuadratureSettings& settings,
               ErrorCode tail_error)
{
  if (!(upper > 0.0) || !std::isfinite(upper)) {
    throw Error(ErrorCode::invalid_argument,
                "integrate_even: upper limit must be positive and finite");
  }
  std::vector<double> points{ 0.0, upper };
  for (double p : breakpoints) {
    if (p > 0.0 && p < upper) {
      points.push_back(p);
    }
  }
  const double half = integrate(f, points, settings);

  if (upper_is_cap) {
    double tail = 0.0;
    try {
      tail = integrate([&f](double t) { return std::abs(f(t)); },
                       upper,
                       2.0 * upper,
                       settings);
    } catch (const Error&) {
      tail = std::numeric_limits<double>::infinity();
    }
    const double allowed =
      std::max(settings.abs_tol, settings.rel_tol * std::abs(half));
    if (!(tail <= allowed)) {
      throw Error(tail_error,
                  "integrand not negligible beyond truncation point " +
                    std::to_string(upper) + " (tail estimate " +
                    std::to_string(tail) + ")");
    }
  }
  return 2.0 * half;
}

MinimizeResult
minimize_scalar(const RealFunction& g, double lo, double hi, double tol)
{
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorCode::invalid_bracket,
                "minimize_scalar: need finite lo < hi");
  }
  if (!(tol > 0.0)) {
    throw Error(ErrorCode::invalid_argument,
                "minimize_scalar: tol must be positive");
  }

  const double golden = 0.5 * (3.0 - std::sqrt(5.0));
  const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());

  double a = lo;
  double b = hi;
  double v = a + golden * (b - a);
  double w = v;
  double x = v;
  double e = 0.0;
  double d = 0.0;
  double fx = g(x);
  double fv = fx;
  double fw = fx;

  for (int iter = 0; iter < 500; ++iter) {
    const double xm = 0.5 * (a + b);
    const double tol1 = sqrt_eps * std::abs(x) + tol / 3.0;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - xm) <= tol2 - 0.5 * (b - a)) {
      break;
    }

    bool golden_step = true;
    if (std::abs(e) > tol1) {
      // trial parabola through x, v, w
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) {
        p = -p;
      }
      q = std::abs(q);
      r = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * r) && p > q * (a - x) &&
          p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) {
          d = (x < xm) ? tol1 : -tol1;
        }
        golden_step = false;
      }
    }
    if (golden_step) {
      e = (x < xm) ? b - x : a - x;
      d = golden * e;
    }

    const double u =
      (std::abs(d) >= tol1) ? x + d : x + ((d > 0.0) ? tol1 : -tol1);
    const double fu = g(u);

    if (fu <= fx) {
      if (u < x) {
        b = x;
      } else {
        a = x;
      }
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      if (u < x) {
        a = u;
      } else {
        b = u;
      }
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  return { x, fx };
}

namespace {

double
pairwise_sum_impl(const double* xs,
                  std::size_t count,
                  const std::function<double(double)>& f)
{
  if (count <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      s += f(xs[i]);
    }
    return s;
  }
  const std::size_t half = count / 2;
  return pairwise_sum_impl(xs, half, f) +
         pairwise_sum_impl(xs + half, count - half, f);
}

} // namespace

double
pairwise_sum(std::span<const double> xs, const std::function<double(double)>& f)
{
  return pairwise_sum_impl(xs.data(), xs.size(), f);
}

namespace {

std::mt19937_64
seeded_engine(std::uint64_t seed, std::uint64_t stream_id)
{
  std::seed_seq seq{ static_cast<std::uint32_t>(seed & 0xffffffffu),
                     static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(stream_id & 0xffffffffu),
                     static_cast<std::uint32_t>(stream_id >> 32) };
  return std::mt19937_64(seq);
}

} // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
  : seed_(seed)
  , stream_id_(stream_id)
  , engine_(seeded_engine(seed, stream_id))
{}

const char*
error_code_name(ErrorCode code) noexcept
{
  switch (code) {
    case ErrorCode::invalid_argument:
      return "InvalidArgument";
    case ErrorCode::invalid_bandwidth:
      return "InvalidBandwidth";
    case ErrorCode::invalid_bracket:
      return "InvalidBracket";
    case ErrorCode::non_convergence:
      return "NonConvergence";
    case ErrorCode::divergent:
      return "Divergent";
    case ErrorCode::not_integrable:
      return "NotIntegrable";
    case ErrorCode::not_applicable:
      return "NotApplicable";
    case ErrorCode::no_flat_region:
      return "NoFlatRegion";
    case ErrorCode::empty_grid:
      return "EmptyGrid";
    case ErrorCode::degenerate_sample:
      return "DegenerateSample";
    case ErrorCode::no_root:
      return "NoRoot";
    case ErrorCode::config_error:
      return "ConfigError";
    case ErrorCode::io_error:
      return "IoError";
  }
  return "Unknown";
}

} // namespace superkde
