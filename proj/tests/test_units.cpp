#include <doctest.h>

#include <cmath>
#include <random>

#include "chameleon/error.hpp"
#include "chameleon/model.hpp"
#include "chameleon/units.hpp"

using namespace chameleon;
using namespace chameleon::units;

TEST_CASE("constants are positive and carry the fixed reference values") {
  const auto& c = kConstants;
  for (double v : {c.hbar_c, c.neutron_mass, c.reduced_planck_mass,
                   c.boltzmann_k, c.gravity_g, c.dark_energy_scale_default}) {
    CHECK(v > 0.0);
  }
  CHECK(c.gravity_g == 9.806);
  CHECK(c.reduced_planck_mass == 2.44e27);
  CHECK(c.dark_energy_scale_default == 2.4e-3);
  CHECK(c.neutron_mass == 939.5654e6);
}

TEST_CASE("length_to_natural") {
  CHECK(length_to_natural(197.3269804e-9) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(length_to_natural(0.0) == 0.0);
  // 82.2 um / (197.327 eV nm) * 2.4e-3 eV ~ 1
  const double z = length_to_natural(82.2e-6);
  CHECK(z == doctest::Approx(82.2e3 / 197.3269804).epsilon(1e-12));
  CHECK(z == doctest::Approx(416.6).epsilon(1e-3));
  CHECK(z * 2.4e-3 == doctest::Approx(1.0).epsilon(2e-3));
  CHECK_THROWS_AS(length_to_natural(-1e-9), ValidationError);
}

TEST_CASE("ideal-gas density of helium") {
  const auto gas = GasSpec::helium(1.0);
  const auto rho = pressure_to_mass_density(gas, 100.0, 293.0);
  // oracle: P m / (k_B T) with m = 4 x 1.6605e-27 kg, k_B = 1.380649e-23 J/K
  const double oracle = 100.0 * 4 * 1.6605e-27 / (1.380649e-23 * 293.0);
  CHECK(rho.si == doctest::Approx(oracle).epsilon(1e-4));
  CHECK(rho.si == doctest::Approx(1.64e-4).epsilon(5e-3));
  CHECK(pressure_to_mass_density(gas, 0.0, 293.0).si == 0.0);
  CHECK_THROWS_AS(pressure_to_mass_density(gas, 100.0, 0.0), ValidationError);
  CHECK_THROWS_AS(pressure_to_mass_density(gas, 100.0, -5.0), ValidationError);
}

TEST_CASE("natural mass density unit") {
  // 1 eV^4 = (1.78266e-36 kg) / (1.97327e-7 m)^3 = 2.3201e-16 kg/m^3
  const double ev_kg = 1.602176634e-19 / (299792458.0 * 299792458.0);
  const double ev_inv_m = 197.3269804e-9;
  const double oracle = ev_kg / (ev_inv_m * ev_inv_m * ev_inv_m);
  CHECK(mass_density_from_natural(1.0) == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(mass_density_from_natural(1.0) == doctest::Approx(2.32e-16).epsilon(2e-3));
}

TEST_CASE("helium matter load reproduces the coefficient 23 within 15%") {
  const ChameleonParams p(2, 1e9);
  const double rho = GasSpec::helium(1.0).mass_density_natural();
  const double load = matter_load(p, rho);
  CHECK(std::abs(load / 23.0 - 1.0) < 0.15);
}

TEST_CASE("round trip through natural units for every dimension") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> expo(-30.0, 30.0);
  for (auto d : {Dimension::energy, Dimension::length, Dimension::inverse_length,
                 Dimension::mass_density_natural, Dimension::mass_density_si,
                 Dimension::pressure, Dimension::angle}) {
    for (int i = 0; i < 200; ++i) {
      const Quantity q(std::pow(10.0, expo(rng)), d);
      const Quantity back = from_natural(to_natural(q), d);
      CHECK(back.dimension() == d);
      CHECK(std::abs(back.value() / q.value() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("density is linear in P and inverse in T") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> p(0.1, 1e4), t(50.0, 600.0),
      s(0.1, 10.0);
  const auto gas = GasSpec::helium(0.0);
  for (int i = 0; i < 100; ++i) {
    const double P = p(rng), T = t(rng), k = s(rng);
    const double base = pressure_to_mass_density(gas, P, T).natural;
    CHECK(pressure_to_mass_density(gas, k * P, T).natural ==
          doctest::Approx(k * base).epsilon(1e-12));
    CHECK(pressure_to_mass_density(gas, P, k * T).natural ==
          doctest::Approx(base / k).epsilon(1e-12));
  }
}

TEST_CASE("quantities reject mixed-dimension arithmetic") {
  const Quantity a(1.0, Dimension::length), b(2.0, Dimension::length);
  CHECK((a + b).value() == 3.0);
  CHECK((b - a).value() == 1.0);
  CHECK((2.0 * a).value() == 2.0);
  const Quantity e(1.0, Dimension::energy);
  CHECK_THROWS_AS(a + e, ValidationError);
  CHECK_THROWS_AS(a - e, ValidationError);
}
