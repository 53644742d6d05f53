#include "chameleon/microstructure.hpp"

#include <cmath>
#include <limits>

#include "chameleon/bubble.hpp"
#include "chameleon/error.hpp"

namespace chameleon::micro {

namespace {

const auto& C = units::kConstants;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double newtonian_surface_potential(double mass_ev, double radius_m) {
  detail::require(mass_ev > 0.0 && radius_m > 0.0,
                  "nucleus mass and radius must be positive");
  const double mpl = C.reduced_planck_mass;
  return mass_ev / (8.0 * M_PI * mpl * mpl * units::length_to_natural(radius_m));
}

NucleusSpec NucleusSpec::make(double mass_ev, double radius_m) {
  return {mass_ev, radius_m, micro::newtonian_surface_potential(mass_ev, radius_m)};
}

bool NucleusSpec::consistent() const {
  const double phi = micro::newtonian_surface_potential(mass, radius);
  return std::abs(newtonian_surface_potential / phi - 1.0) <= 1e-12;
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::homogeneous_perturbative: return "homogeneous_perturbative";
    case Regime::heterogeneous: return "heterogeneous";
    case Regime::strongly_self_coupled: return "strongly_self_coupled";
  }
  return "unknown";
}

int regime_code(Regime r) { return static_cast<int>(r); }

double rho_pert(const ChameleonParams& p) {
  if (p.beta == 0.0) return kInf;
  return p.n * std::pow(p.lambda, 3) * C.reduced_planck_mass / p.beta;
}

double screening_field(const ChameleonParams& p, const NucleusSpec& nuc) {
  return 2.0 * p.beta * C.reduced_planck_mass * nuc.newtonian_surface_potential;
}

double rho_screen(const ChameleonParams& p, const NucleusSpec& nuc) {
  detail::require(nuc.newtonian_surface_potential > 0.0,
                  "rho_screen: Phi_N must be positive");
  if (p.beta == 0.0) return kInf;
  const int n = p.n;
  // n L^(4+n) / M_Pl^n / (beta (2 beta Phi_N)^(n+1)), assembled in logs
  const double lg = std::log(n) + (4.0 + n) * std::log(p.lambda) -
                    n * std::log(C.reduced_planck_mass) - std::log(p.beta) -
                    (n + 1.0) * std::log(2.0 * p.beta * nuc.newtonian_surface_potential);
  return std::exp(lg);
}

double density_to_pressure_mbar(const units::GasSpec& gas, double rho) {
  detail::require(rho >= 0.0, "density must be >= 0");
  const double rho_si = units::mass_density_from_natural(rho);
  const double kT = units::energy_ev_to_joule(C.boltzmann_k * gas.temperature);
  return rho_si / gas.atom_mass_kg() * kT / units::kPascalPerMillibar;
}

Regime classify_density(double rho, double rp, double rs) {
  if (rho < rp && rho < rs) return Regime::homogeneous_perturbative;
  return rs <= rp ? Regime::heterogeneous : Regime::strongly_self_coupled;
}

RegimeReport classify(const ChameleonParams& p, const units::GasSpec& gas,
                      const NucleusSpec& nuc) {
  RegimeReport r;
  r.rho = gas.mass_density_natural();
  r.rho_pert = rho_pert(p);
  r.rho_screen = rho_screen(p, nuc);
  r.regime = classify_density(r.rho, r.rho_pert, r.rho_screen);
  if (r.rho > 0.0 && p.beta > 0.0) {
    const double d = units::length_to_natural(gas.interatomic_half_distance());
    r.mass_times_spacing = mass_at_min(p, r.rho) * d;
  }
  r.massless_cells = r.mass_times_spacing < 1.0;
  return r;
}

RegimeReport classify(const ChameleonParams& p, const units::GasSpec& gas) {
  return classify(p, gas, NucleusSpec::of(gas));
}

double phi_D(const ChameleonParams& p, double half_distance) {
  detail::require(half_distance > 0.0, "phi_D: D must be positive");
  const double dl = units::length_to_natural(half_distance) * p.lambda;
  return p.lambda *
         std::pow(std::sqrt(2.0) * dl / bubble::j_integral(p.n, 0.0),
                  2.0 / (p.n + 2));
}

double universal_profile(const ChameleonParams& p, double r) {
  detail::require(r >= 0.0, "universal_profile: r must be >= 0");
  const double rl = units::length_to_natural(r) * p.lambda;
  return p.lambda * std::pow((2.0 + p.n) * rl / std::sqrt(2.0), 2.0 / (2 + p.n));
}

StarShell r_star(const ChameleonParams& p, const NucleusSpec& nuc,
                 double half_distance) {
  detail::require(half_distance > nuc.radius, "r_star: need D > R_nucl");
  const int n = p.n;
  const double yd = phi_D(p, half_distance) / p.lambda;
  const double rn = units::length_to_natural(nuc.radius) * p.lambda;
  // (L R*)^(2n+1) = n (L R_nucl)^(n+1) / (2 (2 y_D^-n)^((n+2)/2))
  const double lg = std::log(n) + (n + 1.0) * std::log(rn) - std::log(2.0) -
                    0.5 * (n + 2.0) * (std::log(2.0) - n * std::log(yd));
  const double rs = std::exp(lg / (2.0 * n + 1.0));
  StarShell out;
  out.r_star = units::length_from_natural(rs / p.lambda);
  out.c = rs * rs * std::sqrt(2.0 * std::pow(yd, -n));
  out.phi_star = out.c * p.lambda / rn;
  return out;
}

double coulomb_tail(const ChameleonParams& p, const NucleusSpec& nuc, double r,
                    double ambient) {
  detail::require(r > nuc.radius, "coulomb_tail: need r > R_nucl");
  detail::require(ambient > 0.0, "coulomb_tail: ambient field must be positive");
  if (ambient <= screening_field(p, nuc)) {
    throw OutOfValidity("coulomb_tail: nucleus is screened at this ambient field");
  }
  const double rl = units::length_to_natural(r);
  return ambient - p.beta * nuc.mass / (4.0 * M_PI * C.reduced_planck_mass * rl);
}

std::vector<RegimeCell> regime_map(int n, double lambda,
                                   const std::vector<double>& betas,
                                   const std::vector<double>& pressures_mbar,
                                   const units::GasSpec& gas) {
  const auto nb = static_cast<long>(betas.size());
  const std::size_t np = pressures_mbar.size();
  std::vector<RegimeCell> out(betas.size() * np);
  const NucleusSpec nuc = NucleusSpec::of(gas);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < nb; ++i) {
    const ChameleonParams p(n, betas[i], lambda);
    const double rp = rho_pert(p), rs = rho_screen(p, nuc);
    for (std::size_t j = 0; j < np; ++j) {
      units::GasSpec g = gas;
      g.pressure = pressures_mbar[j] * units::kPascalPerMillibar;
      out[i * np + j] = {betas[i], pressures_mbar[j],
                         classify_density(g.mass_density_natural(), rp, rs)};
    }
  }
  return out;
}

}  // namespace chameleon::micro
