#pragma once

// Physical constants and the boundary between laboratory units and the
// internal natural-unit system (hbar = c = 1): energies in eV, lengths in
// 1/eV, mass densities and pressures in eV^4.

#include <string>

namespace chameleon::units {

struct PhysicalConstants {
  double hbar_c = 197.3269804;             // eV nm
  double neutron_mass = 939.5654e6;        // eV
  double reduced_planck_mass = 2.44e27;    // eV
  double boltzmann_k = 8.617333262e-5;     // eV / K
  double gravity_g = 9.806;                // m / s^2, Grenoble
  double dark_energy_scale_default = 2.4e-3;  // eV

  // SI anchors used only at the conversion boundary.
  double speed_of_light = 299792458.0;        // m / s
  double elementary_charge = 1.602176634e-19;  // J / eV
  double atomic_mass_unit = 1.66053906660e-27;  // kg
};

inline constexpr PhysicalConstants kConstants{};

// --- lengths -------------------------------------------------------------

/// Meters to natural length (1/eV). Rejects negative input.
double length_to_natural(double meters);
double length_from_natural(double inverse_ev);

// --- energies ------------------------------------------------------------

double energy_joule_to_ev(double joule);
double energy_ev_to_joule(double ev);

/// Standard gravity as an energy scale, g / c^2 expressed in eV.
double gravity_natural();

/// Wavenumber given in 1/nm, returned in eV.
double wavenumber_to_natural(double inverse_nm);

// --- densities and pressures --------------------------------------------

/// kg/m^3 to eV^4.
double mass_density_to_natural(double kg_per_m3);
double mass_density_from_natural(double ev4);

/// Pa to eV^4.
double pressure_to_natural(double pascal);
double pressure_from_natural(double ev4);

inline constexpr double kPascalPerMillibar = 100.0;

// --- tagged quantities ---------------------------------------------------

enum class Dimension {
  energy,                // lab: J, natural: eV
  length,                // lab: m, natural: 1/eV
  inverse_length,        // lab: 1/m, natural: eV
  mass_density_natural,  // eV^4 both sides
  mass_density_si,       // lab: kg/m^3, natural: eV^4
  pressure,              // lab: Pa, natural: eV^4
  angle,                 // rad both sides
};

std::string to_string(Dimension d);

/// A laboratory-unit value carrying its dimension. Adding or subtracting
/// quantities of different dimension throws ValidationError.
class Quantity {
 public:
  constexpr Quantity(double value, Dimension dim) : value_(value), dim_(dim) {}

  [[nodiscard]] constexpr double value() const { return value_; }
  [[nodiscard]] constexpr Dimension dimension() const { return dim_; }

  Quantity& operator+=(const Quantity& rhs);
  Quantity& operator-=(const Quantity& rhs);
  Quantity& operator*=(double s) {
    value_ *= s;
    return *this;
  }

  friend Quantity operator+(Quantity a, const Quantity& b) { return a += b; }
  friend Quantity operator-(Quantity a, const Quantity& b) { return a -= b; }
  friend Quantity operator*(Quantity a, double s) { return a *= s; }
  friend Quantity operator*(double s, Quantity a) { return a *= s; }

 private:
  double value_;
  Dimension dim_;
};

/// Lab value to natural units (see Dimension for the pairing).
double to_natural(const Quantity& q);
Quantity from_natural(double natural_value, Dimension dim);

// --- gas -----------------------------------------------------------------

/// Single-species ideal gas filling the sample cell.
struct GasSpec {
  std::string name = "helium";
  double mass_number = 4.0;             // atomic mass in u
  double nucleus_mass = 3.7274e9;       // eV
  double nucleus_radius = 1.9e-15;      // m
  double pressure = 0.0;                // Pa
  double temperature = 293.0;           // K

  static GasSpec helium(double pressure_mbar, double temperature_k = 293.0);

  [[nodiscard]] double atom_mass_kg() const;
  /// Atoms per m^3 from the ideal-gas law.
  [[nodiscard]] double number_density() const;
  [[nodiscard]] double mass_density_si() const;
  [[nodiscard]] double mass_density_natural() const;
  /// Half the mean interatomic spacing, 2D = n^(-1/3), in meters.
  [[nodiscard]] double interatomic_half_distance() const;
};

struct MassDensity {
  double si = 0.0;       // kg/m^3
  double natural = 0.0;  // eV^4
};

/// Ideal-gas mass density rho = P m_atom / (k_B T). P in Pa, T in K.
MassDensity pressure_to_mass_density(const GasSpec& gas, double pressure_pa,
                                     double temperature_k);

}  // namespace chameleon::units
