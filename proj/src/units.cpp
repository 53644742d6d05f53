#include "chameleon/units.hpp"

#include <cmath>

#include "chameleon/error.hpp"

namespace chameleon::units {
namespace {

constexpr const PhysicalConstants& C = kConstants;

// hbar*c in eV m: one natural length unit (1/eV) in meters.
constexpr double kHbarCMeter = C.hbar_c * 1e-9;

// 1 kg in eV: c^2 / e.
constexpr double kEvPerKg =
    C.speed_of_light * C.speed_of_light / C.elementary_charge;

// 1 m^-3 in eV^3.
constexpr double kEv3PerInverseCubicMeter =
    kHbarCMeter * kHbarCMeter * kHbarCMeter;

}  // namespace

double length_to_natural(double meters) {
  detail::require(meters >= 0.0, "length_to_natural: negative length");
  return meters / kHbarCMeter;
}

double length_from_natural(double inverse_ev) { return inverse_ev * kHbarCMeter; }

double energy_joule_to_ev(double joule) { return joule / C.elementary_charge; }
double energy_ev_to_joule(double ev) { return ev * C.elementary_charge; }

double gravity_natural() {
  return C.gravity_g / (C.speed_of_light * C.speed_of_light) * kHbarCMeter;
}

double wavenumber_to_natural(double inverse_nm) { return inverse_nm * C.hbar_c; }

double mass_density_to_natural(double kg_per_m3) {
  return kg_per_m3 * kEvPerKg * kEv3PerInverseCubicMeter;
}

double mass_density_from_natural(double ev4) {
  return ev4 / (kEvPerKg * kEv3PerInverseCubicMeter);
}

double pressure_to_natural(double pascal) {
  return energy_joule_to_ev(pascal) * kEv3PerInverseCubicMeter;
}

double pressure_from_natural(double ev4) {
  return energy_ev_to_joule(ev4 / kEv3PerInverseCubicMeter);
}

std::string to_string(Dimension d) {
  switch (d) {
    case Dimension::energy: return "energy";
    case Dimension::length: return "length";
    case Dimension::inverse_length: return "inverse_length";
    case Dimension::mass_density_natural: return "mass_density_natural";
    case Dimension::mass_density_si: return "mass_density_si";
    case Dimension::pressure: return "pressure";
    case Dimension::angle: return "angle";
  }
  return "unknown";
}

Quantity& Quantity::operator+=(const Quantity& rhs) {
  detail::require(dim_ == rhs.dim_, "cannot add " + to_string(rhs.dim_) +
                                        " to " + to_string(dim_));
  value_ += rhs.value_;
  return *this;
}

Quantity& Quantity::operator-=(const Quantity& rhs) {
  detail::require(dim_ == rhs.dim_, "cannot subtract " + to_string(rhs.dim_) +
                                        " from " + to_string(dim_));
  value_ -= rhs.value_;
  return *this;
}

double to_natural(const Quantity& q) {
  const double v = q.value();
  switch (q.dimension()) {
    case Dimension::energy: return energy_joule_to_ev(v);
    case Dimension::length: return v / kHbarCMeter;
    case Dimension::inverse_length: return v * kHbarCMeter;
    case Dimension::mass_density_natural: return v;
    case Dimension::mass_density_si: return mass_density_to_natural(v);
    case Dimension::pressure: return pressure_to_natural(v);
    case Dimension::angle: return v;
  }
  return v;
}

Quantity from_natural(double x, Dimension dim) {
  switch (dim) {
    case Dimension::energy: return {energy_ev_to_joule(x), dim};
    case Dimension::length: return {x * kHbarCMeter, dim};
    case Dimension::inverse_length: return {x / kHbarCMeter, dim};
    case Dimension::mass_density_natural: return {x, dim};
    case Dimension::mass_density_si: return {mass_density_from_natural(x), dim};
    case Dimension::pressure: return {pressure_from_natural(x), dim};
    case Dimension::angle: return {x, dim};
  }
  return {x, dim};
}

GasSpec GasSpec::helium(double pressure_mbar, double temperature_k) {
  GasSpec g;
  g.pressure = pressure_mbar * kPascalPerMillibar;
  g.temperature = temperature_k;
  return g;
}

double GasSpec::atom_mass_kg() const { return mass_number * C.atomic_mass_unit; }

double GasSpec::number_density() const {
  detail::require(temperature > 0.0, "gas temperature must be positive");
  detail::require(pressure >= 0.0, "gas pressure must be nonnegative");
  const double kT = energy_ev_to_joule(C.boltzmann_k * temperature);
  return pressure / kT;
}

double GasSpec::mass_density_si() const {
  return pressure_to_mass_density(*this, pressure, temperature).si;
}

double GasSpec::mass_density_natural() const {
  return pressure_to_mass_density(*this, pressure, temperature).natural;
}

double GasSpec::interatomic_half_distance() const {
  const double nd = number_density();
  detail::require(nd > 0.0, "interatomic distance undefined in vacuum");
  return 0.5 * std::cbrt(1.0 / nd);
}

MassDensity pressure_to_mass_density(const GasSpec& gas, double pressure_pa,
                                     double temperature_k) {
  detail::require(temperature_k > 0.0, "temperature must be positive");
  detail::require(pressure_pa >= 0.0, "pressure must be nonnegative");
  const double kT = energy_ev_to_joule(C.boltzmann_k * temperature_k);
  MassDensity rho;
  rho.si = pressure_pa / kT * gas.atom_mass_kg();
  rho.natural = mass_density_to_natural(rho.si);
  return rho;
}

}  // namespace chameleon::units
