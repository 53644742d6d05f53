#include "chameleon/interferometry.hpp"

#include <cmath>

#include "chameleon/error.hpp"

namespace chameleon::interf {

namespace {

const auto& C = units::kConstants;

void validate(const BeamSpec& beam) {
  detail::require(beam.wavenumber > 0.0, "beam wavenumber must be positive");
  detail::require(beam.phase_sensitivity > 0.0,
                  "phase sensitivity must be positive");
}

double homogeneous_phase(const ChameleonParams& p, const units::GasSpec& gas,
                         const bubble::CellGeometry& geom, const BeamSpec& beam,
                         double* integral = nullptr) {
  const double i = bubble::bubble_line_integral(p, gas.mass_density_natural(), geom);
  if (integral) *integral = i;
  return phase_from_line_integral(p, i, beam);
}

}  // namespace

double phase_from_line_integral(const ChameleonParams& p, double line_integral,
                                const BeamSpec& beam) {
  validate(beam);
  const double k = units::wavenumber_to_natural(beam.wavenumber);
  const double m = C.neutron_mass;
  return m * m * p.beta * line_integral / (k * C.reduced_planck_mass);
}

double phase_from_line_integral_si(const ChameleonParams& p,
                                   double line_integral, const BeamSpec& beam) {
  validate(beam);
  const double hbar = 1.054571817e-34;  // J s
  const double e = C.elementary_charge;
  const double m_kg = C.neutron_mass * e / (C.speed_of_light * C.speed_of_light);
  const double k_si = beam.wavenumber * 1e9;
  const double hbar_c_ev_m = hbar * C.speed_of_light / e;
  // integral of the potential energy beta m phi / M_Pl along the path, J m
  const double v_dx = p.beta * C.neutron_mass / C.reduced_planck_mass * e *
                      line_integral * hbar_c_ev_m;
  return m_kg * v_dx / (hbar * hbar * k_si);
}

double heterogeneous_line_integral(const ChameleonParams& p,
                                   double half_distance,
                                   const bubble::CellGeometry& geom) {
  detail::require(half_distance < geom.half_width,
                  "heterogeneous_line_integral: need D < R");
  return 2.0 * geom.half_width_natural() * micro::phi_D(p, half_distance);
}

double heterogeneous_line_integral(const ChameleonParams& p,
                                   const units::GasSpec& gas,
                                   const bubble::CellGeometry& geom) {
  return heterogeneous_line_integral(p, gas.interatomic_half_distance(), geom);
}

PhaseResult phase_shift(const ChameleonParams& p, const units::GasSpec& gas,
                        const bubble::CellGeometry& geom, const BeamSpec& beam) {
  validate(beam);
  detail::require(gas.pressure >= 0.0, "phase_shift: pressure must be >= 0");
  PhaseResult r;
  if (p.beta == 0.0) return r;
  const auto report = micro::classify(p, gas);
  switch (report.regime) {
    case micro::Regime::homogeneous_perturbative:
      r.delta_phi = homogeneous_phase(p, gas, geom, beam, &r.line_integral);
      return r;
    case micro::Regime::heterogeneous:
      r.regime_used = PhaseRegime::heterogeneous;
      r.line_integral = heterogeneous_line_integral(p, gas, geom);
      r.suppression_factor = r.line_integral / bubble::vacuum_line_integral(p, geom);
      r.delta_phi = phase_from_line_integral(p, r.line_integral, beam);
      return r;
    case micro::Regime::strongly_self_coupled:
      break;
  }
  throw OutOfValidity("phase_shift: gas is strongly self-coupled at this beta and pressure");
}

std::vector<SweepRow> pressure_sweep(const ChameleonParams& p,
                                     const units::GasSpec& gas,
                                     const bubble::CellGeometry& geom,
                                     const BeamSpec& beam,
                                     const std::vector<double>& pressures_mbar) {
  validate(beam);
  for (std::size_t i = 0; i < pressures_mbar.size(); ++i) {
    detail::require(pressures_mbar[i] >= 0.0, "pressure_sweep: pressures must be >= 0");
    detail::require(i == 0 || pressures_mbar[i] >= pressures_mbar[i - 1],
                    "pressure_sweep: pressures must be sorted");
  }
  const auto np = static_cast<long>(pressures_mbar.size());
  std::vector<SweepRow> rows(pressures_mbar.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < np; ++i) {
    units::GasSpec g = gas;
    g.pressure = pressures_mbar[i] * units::kPascalPerMillibar;
    const auto regime = micro::classify(p, g).regime;
    SweepRow row{pressures_mbar[i], 0.0, regime, true};
    if (regime == micro::Regime::strongly_self_coupled) {
      row.valid = false;
      row.delta_phi = homogeneous_phase(p, g, geom, beam);
    } else {
      row.delta_phi = phase_shift(p, g, geom, beam).delta_phi;
    }
    rows[i] = row;
  }
  return rows;
}

double coupling_reach(int n, const units::GasSpec& gas,
                      const bubble::CellGeometry& geom, const BeamSpec& beam,
                      const ReachOptions& opts) {
  validate(beam);
  const ChameleonParams unit(n, 1.0, opts.lambda);
  if (gas.pressure == 0.0) {
    // vacuum profile does not depend on beta
    return beam.phase_sensitivity /
           phase_from_line_integral(unit, bubble::vacuum_line_integral(unit, geom), beam);
  }
  auto reaches = [&](double lb) {
    const ChameleonParams p = unit.with_beta(std::pow(10.0, lb));
    try {
      return phase_shift(p, gas, geom, beam).delta_phi >= beam.phase_sensitivity;
    } catch (const OutOfValidity&) {
      return false;
    }
  };
  double prev = opts.log10_beta_min;
  if (reaches(prev)) return std::pow(10.0, prev);
  for (double lb = prev + opts.log10_step; lb <= opts.log10_beta_max + 1e-12;
       lb += opts.log10_step) {
    if (reaches(lb)) {
      double lo = prev, hi = lb;
      while (hi - lo > opts.log10_tol) {
        const double mid = 0.5 * (lo + hi);
        (reaches(mid) ? hi : lo) = mid;
      }
      return std::pow(10.0, hi);
    }
    prev = lb;
  }
  throw SolverError("coupling_reach: sensitivity not reached for log10(beta) in [" +
                    std::to_string(opts.log10_beta_min) + ", " +
                    std::to_string(opts.log10_beta_max) + "]");
}

}  // namespace chameleon::interf
