#pragma once

// Phase picked up by a neutron crossing a gas cell in which the chameleon
// forms a bubble: dphi = m^2 beta / (k M_Pl) * integral of phi dx, in natural
// units. The line integral comes from the plate-bubble solution when the gas
// is homogeneous and from the inter-nucleus bubbles when it is not.

#include <vector>

#include "chameleon/bubble.hpp"
#include "chameleon/microstructure.hpp"

namespace chameleon::interf {

struct BeamSpec {
  double wavenumber = 23.0;          // 1/nm
  double phase_sensitivity = 17e-3;  // rad
};

enum class PhaseRegime { homogeneous, heterogeneous };

struct PhaseResult {
  double delta_phi = 0.0;      // rad
  PhaseRegime regime_used = PhaseRegime::homogeneous;
  double suppression_factor = 1.0;  // heterogeneous / vacuum integral
  double line_integral = 0.0;  // dimensionless
};

/// Phase for a given line integral of the field (natural units).
double phase_from_line_integral(const ChameleonParams& p, double line_integral,
                                const BeamSpec& beam);

/// Same quantity through SI constants; used to cross-check the conversion.
double phase_from_line_integral_si(const ChameleonParams& p,
                                   double line_integral, const BeamSpec& beam);

/// 2 R phi_D. Throws ValidationError if D >= R.
double heterogeneous_line_integral(const ChameleonParams& p,
                                   double half_distance,
                                   const bubble::CellGeometry& geom);
double heterogeneous_line_integral(const ChameleonParams& p,
                                   const units::GasSpec& gas,
                                   const bubble::CellGeometry& geom);

/// Throws OutOfValidity when the gas is strongly self-coupled.
PhaseResult phase_shift(const ChameleonParams& p, const units::GasSpec& gas,
                        const bubble::CellGeometry& geom, const BeamSpec& beam);

struct SweepRow {
  double pressure_mbar;
  double delta_phi;  // rad; homogeneous estimate when !valid
  micro::Regime regime;
  bool valid;
};

/// Rows in the order of the (sorted, nonnegative) pressures. Parallel.
std::vector<SweepRow> pressure_sweep(const ChameleonParams& p,
                                     const units::GasSpec& gas,
                                     const bubble::CellGeometry& geom,
                                     const BeamSpec& beam,
                                     const std::vector<double>& pressures_mbar);

struct ReachOptions {
  double lambda = units::kConstants.dark_energy_scale_default;
  double log10_beta_min = 0.0;
  double log10_beta_max = 20.0;
  double log10_step = 0.05;
  double log10_tol = 1e-6;
};

/// Smallest beta whose phase reaches the beam sensitivity in a valid regime.
/// Closed form in vacuum; scan plus bisection otherwise. Throws SolverError
/// if the threshold is never reached in range.
double coupling_reach(int n, const units::GasSpec& gas,
                      const bubble::CellGeometry& geom, const BeamSpec& beam,
                      const ReachOptions& opts = {});

}  // namespace chameleon::interf
