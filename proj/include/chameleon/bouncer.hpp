#pragma once

// Neutron quantum bouncer above a horizontal mirror: gravity plus the
// chameleon potential beta V_n (L z)^alpha_n. Eigenvalues come from Numerov
// shooting with a dichotomic search on the energy; first-order shifts come
// from overlaps of the pure-gravity states, which are themselves produced by
// the same shooting solver.
//
// Lab-facing units: heights in micrometres, energies in peV.

#include <optional>
#include <vector>

#include "chameleon/model.hpp"

namespace chameleon::bouncer {

/// Gravitational length and energy scales z0 = (hbar^2 / 2 m^2 g)^(1/3) and
/// E0 = m g z0.
struct BouncerScales {
  double z0 = 0.0;  // um
  double e0 = 0.0;  // peV
};

const BouncerScales& scales();

inline constexpr double kPeV = 1e-12;  // eV

/// Potential above the mirror. Without params this is pure gravity.
struct BouncerPotentialSpec {
  std::optional<ChameleonParams> params;
  double v_n = 0.0;      // eV
  double alpha_n = 0.0;

  static BouncerPotentialSpec gravity();
  static BouncerPotentialSpec chameleon(const ChameleonParams& p);

  /// Chameleon term at z = z0 in units of E0: beta V_n (L z0)^alpha / E0.
  [[nodiscard]] double strength() const;
  /// Potential energy at height z_um, in peV.
  [[nodiscard]] double value(double z_um) const;
};

enum class Terminal { converged, diverged_positive, diverged_negative };

struct WaveTrace {
  double step = 0.0;  // um
  std::vector<double> z;    // um
  std::vector<double> psi;  // normalised so psi'(0) = 1 per um
  double energy = 0.0;      // peV
  int extrema_count = 0;
  Terminal terminal = Terminal::converged;
};

struct Discretization {
  double step = 0.01;   // um
  double z_max = 100.0;  // um
};

/// Integrates psi'' = (2m / hbar^2)(Phi(z) - E) psi from psi(0) = 0,
/// psi'(0) = 1 with the Numerov stencil. Stops early once |psi| exceeds
/// 1e12 times its largest extremum; that is reported as divergence.
WaveTrace numerov_integrate(const BouncerPotentialSpec& pot, double energy_pev,
                            const Discretization& grid = {});

enum class LevelPosition { below, at, above, indeterminate };

/// Where the trial energy of `trace` sits relative to level k, from the
/// extrema / sign-change pattern of the wavefunction.
LevelPosition classify_trace(const WaveTrace& trace, int k);

struct LevelOptions {
  Discretization grid{};
  double tol = 0.0;  // peV; 0 selects 1e-6 E0
};

/// E*_k by bisection on the energy, in peV.
double find_level(const BouncerPotentialSpec& pot, int k,
                  const LevelOptions& opts = {});

struct BouncerSpectrum {
  enum class Method { exact_numerov, perturbative };
  struct Level {
    int k;
    double energy;  // peV
  };
  Method method = Method::exact_numerov;
  std::vector<Level> levels;
};

BouncerSpectrum exact_spectrum(const BouncerPotentialSpec& pot, int k_max,
                               const LevelOptions& opts = {});
BouncerSpectrum perturbative_spectrum(const ChameleonParams& p, int k_max,
                                      const LevelOptions& opts = {});

/// <psi_k| (z / z0)^alpha |psi_k> over pure-gravity states, 0 <= alpha <= 1.
double overlap(int k, double alpha, const LevelOptions& opts = {});

/// O_k(alpha_n) for k = 1..k_max (rows) and n = 1..n_max (columns).
std::vector<std::vector<double>> overlap_table(int k_max, int n_max,
                                               const LevelOptions& opts = {});

/// First-order level shift beta V_n (L z0)^alpha_n O_k(alpha_n), in peV.
double perturbative_shift(const ChameleonParams& p, int k,
                          const LevelOptions& opts = {});

/// Chameleon-induced shift of the k_hi -> k_lo transition energy, in peV.
double transition_shift(const ChameleonParams& p, int k_hi, int k_lo,
                        bool exact, const LevelOptions& opts = {});

struct CouplingBoundOptions {
  bool exact = true;
  int k_hi = 3;
  int k_lo = 1;
  double lambda = units::kConstants.dark_energy_scale_default;
  double log10_beta_min = 2.0;
  double log10_beta_max = 12.0;
  double log10_tol = 1e-4;
  Discretization grid{};
};

/// Coupling at which the transition shift equals `sensitivity_pev`.
double coupling_bound(int n, double sensitivity_pev,
                      const CouplingBoundOptions& opts = {});

}  // namespace chameleon::bouncer
