#pragma once

// Ratra-Peebles chameleon: V(phi) = L^4 + L^(4+n) / phi^n, coupled to matter
// density rho through V_eff = V + beta phi rho / M_Pl. Fields in eV, densities
// in eV^4. Internally everything is evaluated in terms of y = phi / L so the
// high powers of L ~ 1e-3 eV never appear on their own.

#include "chameleon/units.hpp"

namespace chameleon {

struct ChameleonParams {
  int n = 1;        // Ratra-Peebles index
  double beta = 0;  // matter coupling
  double lambda = units::kConstants.dark_energy_scale_default;  // eV

  ChameleonParams() = default;
  ChameleonParams(int n_, double beta_,
                  double lambda_ = units::kConstants.dark_energy_scale_default);

  [[nodiscard]] double beta9() const { return beta * 1e-9; }
  [[nodiscard]] ChameleonParams with_beta(double b) const {
    return {n, b, lambda};
  }
};

/// beta rho / (M_Pl L^3): the dimensionless matter load entering every
/// density-dependent formula.
double matter_load(const ChameleonParams& p, double rho);

double potential(const ChameleonParams& p, double phi);
double potential_derivative(const ChameleonParams& p, double phi);
double effective_potential(const ChameleonParams& p, double phi, double rho);
double effective_potential_derivative(const ChameleonParams& p, double phi,
                                      double rho);
double effective_potential_curvature(const ChameleonParams& p, double phi);

/// Field value minimising V_eff at density rho > 0.
double min_field(const ChameleonParams& p, double rho);

/// Mass sqrt(V_eff'') at the density-dependent minimum.
double mass_at_min(const ChameleonParams& p, double rho);

}  // namespace chameleon
