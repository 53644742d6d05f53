#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <random>
#include <vector>

#include "chameleon/bubble.hpp"
#include "chameleon/error.hpp"

using namespace chameleon;
using namespace chameleon::bubble;

namespace {

constexpr double L = 2.4e-3;

// Closed forms at alpha = 0 through the Beta function.
double j0_oracle(int n) { return std::beta(0.5 + 1.0 / n, 0.5) / n; }
double k0_oracle(int n) { return std::beta(0.5 + 2.0 / n, 0.5) / n; }

// Direct tanh-sinh quadrature of the textbook integrand, no substitutions.
// Extended precision absorbs the cancellation in 1 - u^n near u = 1.
double direct(int n, double alpha, double power) {
  boost::math::quadrature::tanh_sinh<long double> ts;
  const long double a = alpha;
  return static_cast<double>(ts.integrate(
      [&](long double u) {
        const long double un = std::pow(u, n);
        return std::pow(u, static_cast<long double>(power)) /
               std::sqrt(1.0L - un + n * a * un * (u - 1.0L));
      },
      0.0L, 1.0L));
}

double helium_rho(double mbar) {
  return units::GasSpec::helium(mbar).mass_density_natural();
}

double trapezoid(const std::vector<ProfileSample>& s) {
  double acc = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    acc += 0.5 * (s[i].phi + s[i - 1].phi) * (s[i].x - s[i - 1].x);
  }
  return units::length_to_natural(acc);
}

const CellGeometry kCell = CellGeometry::from_gap_cm(1.0);

}  // namespace

TEST_CASE("J and K at alpha = 0") {
  CHECK(j_integral(1, 0.0) == doctest::Approx(M_PI / 2).epsilon(1e-10));
  CHECK(j_integral(2, 0.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(k_integral(1, 0.0) == doctest::Approx(3 * M_PI / 8).epsilon(1e-10));
  CHECK(k_integral(2, 0.0) == doctest::Approx(M_PI / 4).epsilon(1e-10));
  for (int n = 1; n <= 8; ++n) {
    CHECK(j_integral(n, 0.0) == doctest::Approx(j0_oracle(n)).epsilon(1e-10));
    CHECK(k_integral(n, 0.0) == doctest::Approx(k0_oracle(n)).epsilon(1e-10));
  }
}

TEST_CASE("J and K against direct quadrature") {
  for (int n = 1; n <= 6; ++n) {
    for (double a : {0.1, 0.5, 0.9, 0.99}) {
      CHECK(j_integral(n, a) == doctest::Approx(direct(n, a, 0.5 * n)).epsilon(1e-8));
      CHECK(k_integral(n, a) == doctest::Approx(direct(n, a, 1 + 0.5 * n)).epsilon(1e-8));
    }
  }
  CHECK_THROWS_AS(j_integral(2, 1.0), ValidationError);
  CHECK_THROWS_AS(k_integral(2, -0.1), ValidationError);
}

TEST_CASE("J grows with alpha, K stays below J") {
  for (int n = 1; n <= 6; ++n) {
    double prev = 0.0;
    for (double a = 0.0; a < 0.999; a += 0.05) {
      const double j = j_integral(n, a);
      CHECK(j > prev);
      CHECK(k_integral(n, a) < j);
      prev = j;
    }
  }
}

TEST_CASE("logarithmic growth as alpha -> 1") {
  // deep in the gap the integrand in the stretched variable is flat at
  // 2 / sqrt(P(1)), so J(L) - J(L - 2) = 2 sqrt(2 / (n (n + 1)))
  for (int n = 1; n <= 6; ++n) {
    const double slope = 2.0 * std::sqrt(2.0 / (n * (n + 1.0)));
    for (double lg : {-60.0, -400.0, -3000.0}) {
      const double dj = j_integral_log_gap(n, lg - 2.0) - j_integral_log_gap(n, lg);
      CHECK(dj == doctest::Approx(slope).epsilon(1e-8));
    }
  }
}

TEST_CASE("vacuum bubble") {
  const ChameleonParams p(2, 1e9);
  const double rl = kCell.half_width_natural() * L;
  CHECK(solve_y0(p, 0.0, kCell) ==
        doctest::Approx(std::pow(2.0, 0.25) * std::sqrt(rl)).epsilon(1e-12));
  CHECK(bubble_line_integral(p, 0.0, kCell) ==
        doctest::Approx(vacuum_line_integral(p, kCell)).epsilon(1e-8));
  CHECK(ivanov_profile(p, kCell, 0.0) == doctest::Approx(L * solve_y0(p, 0.0, kCell)).epsilon(1e-12));
  CHECK(ivanov_profile(p, kCell, kCell.half_width) == 0.0);
  CHECK_THROWS_AS(ivanov_profile(p, kCell, 1.01 * kCell.half_width), ValidationError);

  for (int n = 1; n <= 6; ++n) {
    const ChameleonParams q(n, 1e9);
    const CellGeometry wide{2 * kCell.half_width, 0.0};
    CHECK(vacuum_line_integral(q, wide) / vacuum_line_integral(q, kCell) ==
          doctest::Approx(std::pow(2.0, (n + 4.0) / (n + 2.0))).epsilon(1e-12));
    // mean field is bounded by the maximum
    const double mean = vacuum_line_integral(q, kCell) / (2 * kCell.half_width_natural());
    CHECK(mean < L * solve_y0(q, 0.0, kCell));
    // beta does not enter without matter
    CHECK(solve_y0(q.with_beta(0.0), helium_rho(1.0), kCell) == solve_y0(q, 0.0, kCell));
  }
}

TEST_CASE("implicit equation residual") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lp(-6.0, 3.0), lb(6.0, 11.0), lr(-3.0, 0.0);
  for (int i = 0; i < 60; ++i) {
    const ChameleonParams p(1 + i % 6, std::pow(10.0, lb(rng)));
    const double rho = helium_rho(std::pow(10.0, lp(rng)));
    const CellGeometry g{std::pow(10.0, lr(rng)) * 1e-2, 0.0};
    const auto s = solve_bubble(p, rho, g);
    if (s.asymptotic) continue;
    const double lhs = std::sqrt(2.0) * g.half_width_natural() * L;
    const double rhs = std::pow(s.y0, 1 + 0.5 * p.n) * j_integral_log_gap(p.n, s.log_gap);
    CHECK(rhs == doctest::Approx(lhs).epsilon(1e-8));
    CHECK(s.alpha >= 0.0);
    CHECK(s.alpha <= 1.0);
    CHECK(s.log_gap < 0.0);
    const double alpha = matter_load(p, rho) * std::pow(s.y0, p.n + 1) / p.n;
    CHECK(s.alpha == doctest::Approx(alpha).epsilon(1e-9));
  }
}

TEST_CASE("pressure response") {
  for (int n = 1; n <= 6; ++n) {
    const ChameleonParams p(n, 1e9);
    double prev_y = INFINITY, prev_i = INFINITY;
    const double vac = vacuum_line_integral(p, kCell);
    for (double lp = -6.0; lp <= 3.0; lp += 0.25) {
      const double rho = helium_rho(std::pow(10.0, lp));
      const auto s = solve_bubble(p, rho, kCell);
      CHECK(s.y0 < prev_y);
      CHECK(s.line_integral < prev_i);
      // both limits bound the exact integral from above
      CHECK(s.line_integral <= vac);
      CHECK(s.line_integral <= high_pressure_line_integral(p, rho, kCell) * (1 + 1e-12));
      CHECK(s.y0 * L <= min_field(p, rho) * (1 + 1e-12));
      prev_y = s.y0;
      prev_i = s.line_integral;
    }
  }
}

TEST_CASE("dense-gas limit") {
  for (int n = 1; n <= 6; ++n) {
    const ChameleonParams p(n, 1e9);
    // pick R so that M R = 50 and 200 at 1 mbar
    const double rho = helium_rho(1.0);
    const double m = mass_at_min(p, rho);
    for (double mr : {50.0, 200.0, 900.0}) {
      const CellGeometry g{units::length_from_natural(mr / m), 0.0};
      const auto s = solve_bubble(p, rho, g);
      CHECK_FALSE(s.asymptotic);
      const double ratio = s.line_integral / high_pressure_line_integral(p, rho, g);
      CHECK(ratio > 0.98);
      CHECK(ratio < 1.0);
      CHECK(s.y0 * L / min_field(p, rho) > 0.98);
    }
    const CellGeometry huge{units::length_from_natural(5e3 / m), 0.0};
    CHECK(solve_bubble(p, rho, huge).asymptotic);
  }
}

TEST_CASE("sampled profiles") {
  SUBCASE("n = 2 vacuum is the analytic profile") {
    const ChameleonParams p(2, 1e9);
    const auto s = profile_samples(p, 0.0, kCell, 401);
    REQUIRE(s.size() == 801);
    CHECK(s.front().x == doctest::Approx(-kCell.half_width));
    CHECK(s.back().x == doctest::Approx(kCell.half_width));
    for (const auto& pt : s) {
      if (pt.phi == 0.0) continue;
      CHECK(pt.phi / ivanov_profile(p, kCell, pt.x) == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
  SUBCASE("the analytic form holds within 4% for n = 3..6") {
    for (int n = 3; n <= 6; ++n) {
      const ChameleonParams p(n, 1e9);
      double worst = 0.0;
      for (const auto& pt : profile_samples(p, 0.0, kCell, 401)) {
        if (pt.phi == 0.0) continue;
        worst = std::max(worst, std::abs(ivanov_profile(p, kCell, pt.x) / pt.phi - 1.0));
      }
      CHECK(worst < 0.04);
      CHECK(worst > 1e-3);
    }
  }
  SUBCASE("symmetry, ordering, boundary values, trapezoid") {
    for (int n = 1; n <= 6; ++n) {
      const ChameleonParams p(n, 1e9);
      for (double mbar : {0.0, 1e-3, 0.1, 1.0}) {
        const double rho = helium_rho(mbar);
        const auto s = profile_samples(p, rho, kCell, 2001);
        const double phi0 = L * solve_y0(p, rho, kCell);
        const std::size_t mid = s.size() / 2;
        CHECK(s[mid].phi == doctest::Approx(phi0).epsilon(1e-14));
        CHECK(s.front().phi <= 1e-6 * phi0);
        CHECK(std::abs(s.front().x + kCell.half_width) <= 1e-6 * kCell.half_width);
        for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i].x > s[i - 1].x);
        for (std::size_t i = 0; i < mid; ++i) {
          CHECK(s[i].phi == s[s.size() - 1 - i].phi);
          CHECK(s[i].x == -s[s.size() - 1 - i].x);
          CHECK(s[i].phi < s[i + 1].phi);
        }
        CHECK(trapezoid(s) ==
              doctest::Approx(bubble_line_integral(p, rho, kCell)).epsilon(1e-3));
      }
    }
  }
  CHECK_THROWS_AS(profile_samples(ChameleonParams(2, 1e9), 0.0, kCell, 2), ValidationError);
}

TEST_CASE("first integral is conserved along the profile") {
  for (int n = 1; n <= 6; ++n) {
    for (double mbar : {0.0, 1e-2, 1.0}) {
      const ChameleonParams p(n, 1e9);
      const double rho = helium_rho(mbar);
      const auto s = profile_samples(p, rho, kCell, 4001);
      const double phi0 = L * solve_y0(p, rho, kCell);
      const double e_ref = -effective_potential(p, phi0, rho);
      // phi ~ (x + R)^(2/(n+2)) at the wall: a difference stencil cannot
      // resolve the first few samples, so they are skipped
      constexpr std::size_t kWallLayer = 32;
      double worst = 0.0;
      for (std::size_t i = 2; i + 2 < s.size() / 2; ++i) {
        // five-point derivative in the sample index
        const double dphi = (-s[i + 2].phi + 8 * s[i + 1].phi - 8 * s[i - 1].phi + s[i - 2].phi);
        const double dx = units::length_to_natural(1.0) *
                          (-s[i + 2].x + 8 * s[i + 1].x - 8 * s[i - 1].x + s[i - 2].x);
        const double slope = dphi / dx;
        const double kin = 0.5 * slope * slope;
        const double pot = effective_potential(p, s[i].phi, rho);
        const double e = kin - pot;
        const double err = std::abs(e - e_ref) / (kin + pot);
        if (i >= kWallLayer) worst = std::max(worst, err);
      }
      CAPTURE(n);
      CAPTURE(mbar);
      CHECK(worst < 1e-5);
    }
  }
}

TEST_CASE("wall field shifts the lower limit") {
  const ChameleonParams p(2, 1e9);
  const double y_free = solve_y0(p, 0.0, kCell);
  const CellGeometry g{kCell.half_width, 0.1 * L * y_free};
  const double y = solve_y0(p, 0.0, g);
  CHECK(y > y_free);
  CHECK(bubble_line_integral(p, 0.0, g) > bubble_line_integral(p, 0.0, kCell));
  const auto s = profile_samples(p, 0.0, g, 101);
  CHECK(s.front().phi == doctest::Approx(g.boundary_field).epsilon(1e-12));
  CHECK_THROWS_AS(solve_y0(p, 0.0, CellGeometry{0.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(solve_y0(p, -1.0, kCell), ValidationError);
}
