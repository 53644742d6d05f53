#include <doctest.h>

#include <array>
#include <boost/math/special_functions/airy.hpp>
#include <cmath>

#include "chameleon/bouncer.hpp"
#include "chameleon/error.hpp"

using namespace chameleon;
using namespace chameleon::bouncer;

namespace {

// Independent oracle: zeros of Ai(-x) from Boost.
double airy_zero(int k) { return -boost::math::airy_ai_zero<double>(k); }

constexpr std::array<double, 6> kPaperZeros{2.338, 4.088, 5.521,
                                            6.787, 7.944, 9.023};

}  // namespace

TEST_CASE("gravitational scales") {
  const auto& s = scales();
  CHECK(std::abs(s.z0 / 5.87 - 1.0) < 5e-3);
  CHECK(std::abs(s.e0 / 0.6 - 1.0) < 2e-2);
}

TEST_CASE("potential spec") {
  const auto g = BouncerPotentialSpec::gravity();
  CHECK(g.strength() == 0.0);
  CHECK(g.value(scales().z0) == doctest::Approx(scales().e0));

  const ChameleonParams p(2, 1e9);
  const auto c = BouncerPotentialSpec::chameleon(p);
  CHECK(c.alpha_n == doctest::Approx(0.5));
  const double vn = 939.5654e6 / 2.44e27 * 2.4e-3 * std::pow(4.0 / std::sqrt(2.0), 0.5);
  CHECK(c.v_n == doctest::Approx(vn).epsilon(1e-14));
  CHECK(c.value(10.0) > g.value(10.0));
}

TEST_CASE("numerov traces near the ground state") {
  const auto g = BouncerPotentialSpec::gravity();
  const double e1 = find_level(g, 1, {.tol = 1e-12 * scales().e0});

  SUBCASE("at the level the tail converges after one extremum") {
    const auto tr = numerov_integrate(g, e1, {.step = 0.01, .z_max = 60.0});
    CHECK(tr.psi.front() == 0.0);
    CHECK(tr.extrema_count == 1);
    CHECK(tr.terminal == Terminal::converged);
    CHECK(tr.z[1] - tr.z[0] == doctest::Approx(0.01));
  }
  SUBCASE("slightly below: another extremum without sign change") {
    const auto tr = numerov_integrate(g, e1 * (1 - 1e-4));
    CHECK(tr.extrema_count == 2);
    CHECK(tr.terminal == Terminal::diverged_positive);
    CHECK(classify_trace(tr, 1) == LevelPosition::below);
    for (double v : tr.psi) CHECK(v >= 0.0);
  }
  SUBCASE("slightly above: sign change after the extremum") {
    const auto tr = numerov_integrate(g, e1 * (1 + 1e-4));
    CHECK(tr.terminal == Terminal::diverged_negative);
    CHECK(classify_trace(tr, 1) == LevelPosition::above);
  }
  SUBCASE("zero energy grows monotonically") {
    const auto tr = numerov_integrate(g, 0.0);
    CHECK(tr.extrema_count == 0);
    for (std::size_t i = 1; i < tr.psi.size(); ++i) CHECK(tr.psi[i] > tr.psi[i - 1]);
    CHECK(classify_trace(tr, 1) == LevelPosition::below);
  }
}

TEST_CASE("classification around the third level") {
  const auto g = BouncerPotentialSpec::gravity();
  const double e3 = find_level(g, 3);
  CHECK(classify_trace(numerov_integrate(g, e3 * (1 - 1e-3)), 3) == LevelPosition::below);
  CHECK(classify_trace(numerov_integrate(g, e3 * (1 + 1e-3)), 3) == LevelPosition::above);

  // just above E2 the trace has only two extrema
  const double e2 = find_level(g, 2);
  const auto tr = numerov_integrate(g, e2 * (1 + 1e-6));
  CHECK(tr.extrema_count == 2);
  CHECK(classify_trace(tr, 3) == LevelPosition::below);

  // a trace cut short after the k-th extremum cannot be classified
  const auto short_tr = numerov_integrate(g, e3, {.step = 0.01, .z_max = 40.0});
  CHECK(classify_trace(short_tr, 3) == LevelPosition::indeterminate);
  CHECK_THROWS_AS(classify_trace(tr, 0), ValidationError);
}

TEST_CASE("pure-gravity levels are the Airy zeros") {
  const auto g = BouncerPotentialSpec::gravity();
  const double e0 = scales().e0;
  for (int k = 1; k <= 6; ++k) {
    const double eps = find_level(g, k) / e0;
    CHECK(std::abs(eps / airy_zero(k) - 1.0) < 1e-5);
    CHECK(std::abs(eps - kPaperZeros[k - 1]) < 6e-4);
  }
}

TEST_CASE("find_level extends the range for high levels") {
  const auto g = BouncerPotentialSpec::gravity();
  // level 12 sits beyond the default 100 um window's resolving power
  const double eps = find_level(g, 12) / scales().e0;
  CHECK(std::abs(eps / airy_zero(12) - 1.0) < 1e-5);
}

TEST_CASE("chameleon raises every level") {
  const auto g = BouncerPotentialSpec::gravity();
  const auto c = BouncerPotentialSpec::chameleon(ChameleonParams(2, 1e9));
  const auto bare = exact_spectrum(g, 6);
  const auto shifted = exact_spectrum(c, 6);
  for (int k = 0; k < 6; ++k) {
    CHECK(shifted.levels[k].energy > bare.levels[k].energy);
    if (k > 0) CHECK(shifted.levels[k].energy > shifted.levels[k - 1].energy);
  }
}

TEST_CASE("overlaps") {
  for (int k = 1; k <= 3; ++k) CHECK(overlap(k, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  // <z>_k = (2/3) eps_k z0
  for (int k = 1; k <= 3; ++k) {
    CHECK(overlap(k, 1.0) == doctest::Approx(2.0 * airy_zero(k) / 3.0).epsilon(1e-6));
  }
  CHECK(std::abs(overlap(1, 2.0 / 3.0) - 1.31) <= 0.01);
  CHECK(std::abs(overlap(2, 0.5) - 1.59) <= 0.01);
  CHECK(std::abs(overlap(3, 0.4) - 1.62) <= 0.01);
  CHECK_THROWS_AS(overlap(1, 1.5), ValidationError);
  CHECK_THROWS_AS(overlap(0, 0.5), ValidationError);
}

TEST_CASE("perturbative shifts") {
  const ChameleonParams p(2, 1e9);
  CHECK(perturbative_shift(p.with_beta(0.0), 1) == 0.0);
  CHECK(perturbative_shift(p.with_beta(2e9), 2) ==
        doctest::Approx(2.0 * perturbative_shift(p, 2)).epsilon(1e-12));

  const auto g = BouncerPotentialSpec::gravity();
  const auto c = BouncerPotentialSpec::chameleon(p);
  for (int k = 1; k <= 4; ++k) {
    const double exact = find_level(c, k) - find_level(g, k);
    CHECK(std::abs(perturbative_shift(p, k) / exact - 1.0) < 0.05);
  }
}

TEST_CASE("perturbation theory fails at beta = 1e10 for n = 1") {
  const ChameleonParams p(1, 1e10);
  const double exact = transition_shift(p, 3, 1, true);
  const double pert = transition_shift(p, 3, 1, false);
  CHECK(std::abs(pert / exact - 1.0) > 0.05);
}

TEST_CASE("transition 3 -> 1") {
  const auto g = BouncerPotentialSpec::gravity();
  CHECK(std::abs(find_level(g, 3) - find_level(g, 1) - 1.91) <= 0.01);
  CHECK(transition_shift(ChameleonParams(2, 0.0), 3, 1, true) == 0.0);
  CHECK_THROWS_AS(transition_shift(ChameleonParams(2, 1e9), 1, 3, true), ValidationError);

  double prev = 0.0;
  for (double lb = 6; lb <= 10.01; lb += 0.5) {
    const double s = transition_shift(ChameleonParams(2, std::pow(10.0, lb)), 3, 1, true);
    CHECK(s > prev);
    prev = s;
  }
}

TEST_CASE("coupling bound") {
  for (int n = 1; n <= 4; ++n) {
    const double b = coupling_bound(n, 0.01);
    CHECK(b > 1e7);
    CHECK(b < 1e9);
  }
  CouplingBoundOptions pert;
  pert.exact = false;
  const double b1 = coupling_bound(2, 0.01, pert);
  const double b10 = coupling_bound(2, 0.1, pert);
  CHECK(b10 / b1 == doctest::Approx(10.0).epsilon(1e-3));
  CHECK_THROWS_AS(coupling_bound(2, 0.0), ValidationError);
  CouplingBoundOptions narrow;
  narrow.log10_beta_max = 4.0;
  CHECK_THROWS_AS(coupling_bound(2, 0.01, narrow), SolverError);
}

TEST_CASE("Numerov eigenvalues converge at fourth order") {
  const auto g = BouncerPotentialSpec::gravity();
  const double tol = 1e-13 * scales().e0;
  std::array<double, 3> e{};
  const std::array<double, 3> steps{0.2, 0.1, 0.05};
  for (int i = 0; i < 3; ++i) {
    e[i] = find_level(g, 3, {.grid = {.step = steps[i], .z_max = 100.0}, .tol = tol});
  }
  const double ratio = (e[0] - e[1]) / (e[1] - e[2]);
  CHECK(ratio > 10.0);
  CHECK(ratio < 22.0);
}

TEST_CASE("input validation") {
  const auto g = BouncerPotentialSpec::gravity();
  CHECK_THROWS_AS(numerov_integrate(g, 1.0, {.step = 0.0, .z_max = 100.0}), ValidationError);
  CHECK_THROWS_AS(find_level(g, 0), ValidationError);
}
