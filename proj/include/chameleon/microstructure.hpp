#pragma once

// Gas as a collection of point nuclei. Below rho_screen the nuclei carry an
// unscreened Coulomb-like chameleon tail and the gas acts as a homogeneous
// medium; above it the field collapses around each nucleus and bubbles of
// height phi_D form between neighbours. Above rho_pert the homogeneous
// minimum drops below Lambda and the self-coupling is no longer small.

#include <string_view>
#include <vector>

#include "chameleon/model.hpp"
#include "chameleon/units.hpp"

namespace chameleon::micro {

struct NucleusSpec {
  double mass = 3.7274e9;      // eV
  double radius = 1.9e-15;     // m
  double newtonian_surface_potential = 0.0;  // m / (8 pi M_Pl^2 R)

  static NucleusSpec make(double mass_ev, double radius_m);
  static NucleusSpec helium() { return make(3.7274e9, 1.9e-15); }
  static NucleusSpec of(const units::GasSpec& gas) {
    return make(gas.nucleus_mass, gas.nucleus_radius);
  }
  /// Stored potential agrees with the recomputed one to 1e-12.
  [[nodiscard]] bool consistent() const;
};

double newtonian_surface_potential(double mass_ev, double radius_m);

enum class Regime { homogeneous_perturbative, heterogeneous, strongly_self_coupled };

std::string_view to_string(Regime r);
/// 0, 1, 2 in declaration order; used in exported maps.
int regime_code(Regime r);

struct RegimeReport {
  Regime regime = Regime::homogeneous_perturbative;
  double rho = 0.0;         // eV^4
  double rho_pert = 0.0;    // eV^4
  double rho_screen = 0.0;  // eV^4
  double mass_times_spacing = 0.0;  // M(rho) D, should be << 1
  bool massless_cells = true;       // M(rho) D < 1
  [[nodiscard]] bool valid() const {
    return regime != Regime::strongly_self_coupled;
  }
};

/// Density where the homogeneous minimum equals Lambda.
double rho_pert(const ChameleonParams& p);

/// 2 beta M_Pl Phi_N: field deficit of the Coulomb tail at the nuclear
/// surface.
double screening_field(const ChameleonParams& p, const NucleusSpec& nuc);

/// Density where the homogeneous minimum equals screening_field.
double rho_screen(const ChameleonParams& p, const NucleusSpec& nuc);

/// Ideal-gas pressure in mbar that produces the natural density rho.
double density_to_pressure_mbar(const units::GasSpec& gas, double rho);

/// Threshold ordering: the gas becomes heterogeneous if the nuclei get
/// screened before the self-coupling turns on, otherwise it turns strongly
/// self-coupled. Ties go to the non-homogeneous side.
Regime classify_density(double rho, double rho_pert, double rho_screen);

RegimeReport classify(const ChameleonParams& p, const units::GasSpec& gas,
                      const NucleusSpec& nuc);
RegimeReport classify(const ChameleonParams& p, const units::GasSpec& gas);

/// Bubble height between nuclei a distance 2D apart. D in m, returns eV.
double phi_D(const ChameleonParams& p, double half_distance);

/// Mid-range profile around a screened nucleus, independent of D and of the
/// nucleus. r in m, returns eV.
double universal_profile(const ChameleonParams& p, double r);

struct StarShell {
  double r_star = 0.0;    // m
  double c = 0.0;         // Coulomb coefficient inside the shell, dimensionless
  double phi_star = 0.0;  // eV, c / R_nucl
};

/// Radius where the screened nucleus profile joins the bubble.
StarShell r_star(const ChameleonParams& p, const NucleusSpec& nuc,
                 double half_distance);

/// phi_G - beta m / (4 pi M_Pl r) for R_nucl < r. Throws OutOfValidity if the
/// nucleus is screened at this ambient field.
double coulomb_tail(const ChameleonParams& p, const NucleusSpec& nuc, double r,
                    double ambient);

struct RegimeCell {
  double beta;
  double pressure_mbar;
  Regime regime;
};

/// Regime on the grid betas x pressures (row = beta). Parallel over rows.
std::vector<RegimeCell> regime_map(int n, double lambda,
                                   const std::vector<double>& betas,
                                   const std::vector<double>& pressures_mbar,
                                   const units::GasSpec& gas);

}  // namespace chameleon::micro
