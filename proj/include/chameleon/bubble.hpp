#pragma once

// Chameleon field between two parallel plates at x = -R and x = +R with the
// field pinned at the walls. The second-order boundary-value problem is
// reduced with its first integral to one-dimensional quadratures J_n, K_n;
// the bubble maximum y0 = phi0 / L then solves an implicit equation and the
// line integral of the field follows from K_n.

#include <vector>

#include "chameleon/model.hpp"

namespace chameleon::bubble {

struct CellGeometry {
  double half_width = 0.005;   // R in m
  double boundary_field = 0.0;  // eV, field value pinned at the walls

  static CellGeometry from_gap_cm(double two_r_cm) {
    return {0.5 * two_r_cm * 1e-2, 0.0};
  }
  /// R in natural units (1/eV).
  [[nodiscard]] double half_width_natural() const;
};

struct ProfileSample {
  double x;    // m, in [-R, R]
  double phi;  // eV
};

struct BubbleSolution {
  double y0 = 0.0;         // phi0 / L
  double alpha = 0.0;      // argument of J_n / K_n
  double log_gap = 0.0;    // ln(1 - alpha), kept separately for alpha ~ 1
  double line_integral = 0.0;  // integral of phi dx, dimensionless
  bool asymptotic = false;  // high-pressure closed form was used
  std::vector<ProfileSample> profile;
};

/// J_n(alpha) = int_0^1 u^(n/2) du / sqrt(1 - u^n + n alpha u^n (u - 1)).
double j_integral(int n, double alpha);
/// K_n(alpha) = int_0^1 u^(1+n/2) du / sqrt(1 - u^n + n alpha u^n (u - 1)).
double k_integral(int n, double alpha);

/// J_n and K_n parametrised by ln(1 - alpha), which stays representable when
/// alpha is within 1e-300 of one (dense gas).
double j_integral_log_gap(int n, double log_gap);
double k_integral_log_gap(int n, double log_gap);

/// int_{u_lo}^{u_hi} u^power du / sqrt(D(u)), the integrand shared by J_n and
/// K_n, with D written in terms of ln(1 - alpha).
double bubble_quadrature(int n, double power, double log_gap, double u_lo,
                         double u_hi);

/// M(rho) R: above this the line integral uses the dense-gas closed form.
inline constexpr double kAsymptoticMassRange = 1e3;

/// Solves the implicit equation for the bubble maximum.
BubbleSolution solve_bubble(const ChameleonParams& p, double rho,
                            const CellGeometry& geom);

double solve_y0(const ChameleonParams& p, double rho, const CellGeometry& geom);

/// Line integral of the field across the cell, dimensionless (eV x 1/eV).
double bubble_line_integral(const ChameleonParams& p, double rho,
                            const CellGeometry& geom);

/// Closed form at rho = 0.
double vacuum_line_integral(const ChameleonParams& p, const CellGeometry& geom);

/// Dense-gas limit 2 R phi_min(rho).
double high_pressure_line_integral(const ChameleonParams& p, double rho,
                                   const CellGeometry& geom);

/// Analytic vacuum profile, exact for n = 2. x in m, returns eV.
double ivanov_profile(const ChameleonParams& p, const CellGeometry& geom,
                      double x);

/// Profile from the quadrature x(phi), mirrored across the cell centre and
/// ordered by x. count is the number of field values on one side.
std::vector<ProfileSample> profile_samples(const ChameleonParams& p, double rho,
                                           const CellGeometry& geom, int count);

}  // namespace chameleon::bubble
