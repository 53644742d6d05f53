#include "chameleon/bubble.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>

#include "chameleon/error.hpp"

namespace chameleon::bubble {

namespace {

using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
using Gauss = boost::math::quadrature::gauss<double, 10>;

constexpr double kQuadTol = 1e-11;
constexpr unsigned kQuadDepth = 18;
constexpr double kSplit = 0.5;

double integrate(const std::function<double(double)>& f, double a, double b) {
  if (!(b > a)) return 0.0;
  // both substituted variables vary the integrand on O(1) scales
  if (b - a < 1e-3) return Gauss::integrate(f, a, b);
  return Quad::integrate(f, a, b, kQuadDepth, kQuadTol);
}

// sum_{j<n} (j+1) u^j, so that 1 - u^n - n u^n (1-u) = (1-u)^2 P(u)
double poly_p(int n, double u) {
  double acc = 0.0;
  for (int j = n - 1; j >= 0; --j) acc = acc * u + (j + 1);
  return acc;
}

// D(u) without cancellation: (1-u)^2 P(u) + n (1-alpha) u^n (1-u)
double denominator(int n, double delta, double u) {
  const double w = 1.0 - u;
  return w * w * poly_p(n, u) + n * delta * std::pow(u, n) * w;
}

// v = asinh(t / tau) with ln tau = log_gap / 2
double v_of_t(double t, double log_gap) {
  if (t <= 0.0) return 0.0;
  const double r = std::log(t) - 0.5 * log_gap;
  if (r > 18.0) return r + std::log(2.0);
  return std::asinh(std::exp(r));
}

double t_of_v(double v, double log_gap) {
  if (v < 1.0) return std::exp(0.5 * log_gap) * std::sinh(v);
  return std::exp(0.5 * log_gap + v + std::log1p(-std::exp(-2.0 * v)) -
                  std::log(2.0));
}

struct Root {
  double y0;
  double log_gap;
};

double y0_vacuum_closed(int n, double r_lambda) {
  return std::pow(std::sqrt(2.0) * r_lambda / j_integral(n, 0.0),
                  2.0 / (n + 2));
}

// Bisection on ln y0 for the vacuum problem with a non-zero wall field.
Root solve_vacuum(int n, double r_lambda, double y_wall) {
  const double target = std::log(std::sqrt(2.0) * r_lambda);
  auto g = [&](double ly) {
    const double y = std::exp(ly);
    const double uc = y_wall / y;
    if (uc >= 1.0) return -HUGE_VAL;
    return (1.0 + 0.5 * n) * ly +
           std::log(bubble_quadrature(n, 0.5 * n, 0.0, uc, 1.0)) - target;
  };
  double lo = std::log(y_wall > 0 ? y_wall : 1e-300);
  double hi = std::log(y0_vacuum_closed(n, r_lambda)) + 1.0;
  while (g(hi) < 0.0) {
    hi += 1.0;
    if (hi > 700.0) throw SolverError("solve_y0: vacuum bracket failed");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return {std::exp(0.5 * (lo + hi)), 0.0};
}

// Unknown s = ln(-ln(1 - alpha)); alpha = -expm1(-e^s) and
// y0 = y_min alpha^(1/(n+1)).
Root solve_loaded(int n, double r_lambda, double y_min, double y_wall) {
  const double target = std::log(std::sqrt(2.0) * r_lambda);
  auto state = [&](double s) {
    const double lg = -std::exp(s);
    const double alpha = -std::expm1(lg);
    const double y0 = y_min * std::exp(std::log(alpha) / (n + 1));
    return Root{y0, lg};
  };
  auto g = [&](double s) {
    const Root r = state(s);
    const double uc = y_wall / r.y0;
    if (uc >= 1.0) return -HUGE_VAL;
    return (1.0 + 0.5 * n) * std::log(r.y0) +
           std::log(bubble_quadrature(n, 0.5 * n, r.log_gap, uc, 1.0)) -
           target;
  };
  double hi = 0.0;
  while (g(hi) < 0.0) {
    hi += 1.0;
    if (hi > 9.0) throw SolverError("solve_y0: dense-gas bracket failed");
  }
  double lo = hi - 1.0;
  while (g(lo) > 0.0) {
    lo -= 4.0;
    if (lo < -740.0) throw SolverError("solve_y0: dilute bracket failed");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return state(0.5 * (lo + hi));
}

void validate(const ChameleonParams& p, double rho, const CellGeometry& geom) {
  detail::require(std::isfinite(rho) && rho >= 0.0, "bubble: rho must be >= 0");
  detail::require(std::isfinite(geom.half_width) && geom.half_width > 0.0,
                  "bubble: half_width must be > 0");
  detail::require(geom.boundary_field >= 0.0,
                  "bubble: boundary_field must be >= 0");
  (void)p;
}

bool loaded(const ChameleonParams& p, double rho) {
  return rho > 0.0 && p.beta > 0.0;
}

Root exact_root(const ChameleonParams& p, double rho, const CellGeometry& geom) {
  const double r_lambda = geom.half_width_natural() * p.lambda;
  const double y_wall = geom.boundary_field / p.lambda;
  if (!loaded(p, rho)) {
    if (y_wall == 0.0) return {y0_vacuum_closed(p.n, r_lambda), 0.0};
    return solve_vacuum(p.n, r_lambda, y_wall);
  }
  const double y_min = min_field(p, rho) / p.lambda;
  detail::require(y_wall < y_min,
                  "bubble: boundary_field must lie below the bulk minimum");
  return solve_loaded(p.n, r_lambda, y_min, y_wall);
}

bool use_asymptotic(const ChameleonParams& p, double rho,
                    const CellGeometry& geom) {
  return loaded(p, rho) && geom.boundary_field == 0.0 &&
         mass_at_min(p, rho) * geom.half_width_natural() > kAsymptoticMassRange;
}

}  // namespace

double CellGeometry::half_width_natural() const {
  return units::length_to_natural(half_width);
}

double bubble_quadrature(int n, double power, double log_gap, double u_lo,
                         double u_hi) {
  detail::require(n >= 1, "bubble_quadrature: n must be >= 1");
  detail::require(log_gap <= 0.0, "bubble_quadrature: log_gap must be <= 0");
  detail::require(0.0 <= u_lo && u_lo <= u_hi && u_hi <= 1.0,
                  "bubble_quadrature: need 0 <= u_lo <= u_hi <= 1");
  const double delta = std::exp(log_gap);
  double total = 0.0;

  if (u_lo < kSplit) {
    const double b = std::min(u_hi, kSplit);
    total += integrate(
        [&](double w) {
          const double u = w * w;
          return 2.0 * w * std::pow(u, power) / std::sqrt(denominator(n, delta, u));
        },
        std::sqrt(u_lo), std::sqrt(b));
  }
  if (u_hi > kSplit) {
    const double a = std::max(u_lo, kSplit);
    const double v_lo = v_of_t(std::sqrt(1.0 - u_hi), log_gap);
    const double v_hi = v_of_t(std::sqrt(1.0 - a), log_gap);
    total += integrate(
        [&](double v) {
          const double t = t_of_v(v, log_gap);
          const double u = 1.0 - t * t;
          const double th = std::tanh(v);
          const double sech = v > 700.0 ? 0.0 : 1.0 / std::cosh(v);
          return 2.0 * std::pow(u, power) /
                 std::sqrt(th * th * poly_p(n, u) + n * std::pow(u, n) * sech * sech);
        },
        v_lo, v_hi);
  }
  return total;
}

double j_integral_log_gap(int n, double log_gap) {
  return bubble_quadrature(n, 0.5 * n, log_gap, 0.0, 1.0);
}

double k_integral_log_gap(int n, double log_gap) {
  return bubble_quadrature(n, 1.0 + 0.5 * n, log_gap, 0.0, 1.0);
}

double j_integral(int n, double alpha) {
  detail::require(alpha >= 0.0 && alpha < 1.0, "j_integral: alpha in [0, 1)");
  return j_integral_log_gap(n, std::log1p(-alpha));
}

double k_integral(int n, double alpha) {
  detail::require(alpha >= 0.0 && alpha < 1.0, "k_integral: alpha in [0, 1)");
  return k_integral_log_gap(n, std::log1p(-alpha));
}

BubbleSolution solve_bubble(const ChameleonParams& p, double rho,
                            const CellGeometry& geom) {
  validate(p, rho, geom);
  BubbleSolution sol;
  if (use_asymptotic(p, rho, geom)) {
    sol.asymptotic = true;
    sol.y0 = min_field(p, rho) / p.lambda;
    sol.alpha = 1.0;
    sol.log_gap = -INFINITY;
    sol.line_integral = high_pressure_line_integral(p, rho, geom);
    return sol;
  }
  const Root r = exact_root(p, rho, geom);
  sol.y0 = r.y0;
  sol.log_gap = r.log_gap;
  sol.alpha = -std::expm1(r.log_gap);
  const double uc = geom.boundary_field / (p.lambda * r.y0);
  sol.line_integral = std::sqrt(2.0) * std::pow(r.y0, 2.0 + 0.5 * p.n) *
                      bubble_quadrature(p.n, 1.0 + 0.5 * p.n, r.log_gap, uc, 1.0);
  return sol;
}

double solve_y0(const ChameleonParams& p, double rho, const CellGeometry& geom) {
  return solve_bubble(p, rho, geom).y0;
}

double bubble_line_integral(const ChameleonParams& p, double rho,
                            const CellGeometry& geom) {
  return solve_bubble(p, rho, geom).line_integral;
}

double vacuum_line_integral(const ChameleonParams& p, const CellGeometry& geom) {
  validate(p, 0.0, geom);
  const int n = p.n;
  const double r_lambda = geom.half_width_natural() * p.lambda;
  return std::sqrt(2.0) *
         std::pow(std::sqrt(2.0) * r_lambda / j_integral(n, 0.0),
                  (n + 4.0) / (n + 2.0)) *
         k_integral(n, 0.0);
}

double high_pressure_line_integral(const ChameleonParams& p, double rho,
                                   const CellGeometry& geom) {
  validate(p, rho, geom);
  return 2.0 * geom.half_width_natural() * min_field(p, rho);
}

double ivanov_profile(const ChameleonParams& p, const CellGeometry& geom,
                      double x) {
  validate(p, 0.0, geom);
  const double s = x / geom.half_width;
  detail::require(std::abs(s) <= 1.0, "ivanov_profile: |x| must be <= R");
  const int n = p.n;
  const double rl = geom.half_width_natural() * p.lambda;
  return p.lambda * std::pow(rl, 2.0 / (n + 2)) *
         std::pow((n + 2) / (2.0 * std::sqrt(2.0)) * (1.0 - s * s),
                  2.0 / (n + 2));
}

std::vector<ProfileSample> profile_samples(const ChameleonParams& p, double rho,
                                           const CellGeometry& geom, int count) {
  validate(p, rho, geom);
  detail::require(count >= 3, "profile_samples: count must be >= 3");
  const Root r = exact_root(p, rho, geom);
  const int n = p.n;
  const double phi0 = p.lambda * r.y0;
  const double uc = geom.boundary_field / phi0;
  // distance from the wall per unit of the partial J integral, in m
  const double scale = units::length_from_natural(
      std::pow(r.y0, 1.0 + 0.5 * n) / (std::sqrt(2.0) * p.lambda));

  // u = uc + (1 - uc) sin(theta)^(4/(n+2)): x(theta) is smooth at the centre
  // and quadratic at the wall, so neither end collapses in floating point
  std::vector<double> u(count), d(count);
  for (int i = 0; i < count; ++i) {
    const double s = std::sin(0.5 * M_PI * (count - 1 - i) / (count - 1));
    u[i] = uc + (1.0 - uc) * std::pow(s * s, 2.0 / (n + 2));
  }
  u[0] = 1.0;
  u[count - 1] = uc;
  d[count - 1] = 0.0;
  for (int i = count - 2; i >= 0; --i) {
    d[i] = d[i + 1] +
           scale * bubble_quadrature(n, 0.5 * n, r.log_gap, u[i + 1], u[i]);
  }

  std::vector<ProfileSample> out;
  out.reserve(2 * count - 1);
  const double R = geom.half_width;
  for (int i = count - 1; i >= 0; --i) out.push_back({-R + d[i], phi0 * u[i]});
  out.back().x = 0.0;
  for (int i = 1; i < count; ++i) out.push_back({R - d[i], phi0 * u[i]});
  return out;
}

}  // namespace chameleon::bubble
