#include "chameleon/model.hpp"

#include <cmath>

#include "chameleon/error.hpp"

namespace chameleon {

using units::kConstants;

ChameleonParams::ChameleonParams(int n_, double beta_, double lambda_)
    : n(n_), beta(beta_), lambda(lambda_) {
  detail::require(n >= 1, "Ratra-Peebles index n must be >= 1");
  detail::require(beta >= 0.0 && std::isfinite(beta),
                  "coupling beta must be finite and >= 0");
  detail::require(lambda > 0.0, "energy scale lambda must be positive");
}

double matter_load(const ChameleonParams& p, double rho) {
  const double l3 = p.lambda * p.lambda * p.lambda;
  return p.beta * rho / (kConstants.reduced_planck_mass * l3);
}

double potential(const ChameleonParams& p, double phi) {
  detail::require(phi > 0.0, "potential: field must be positive");
  const double l4 = std::pow(p.lambda, 4);
  return l4 * (1.0 + std::pow(phi / p.lambda, -p.n));
}

double potential_derivative(const ChameleonParams& p, double phi) {
  detail::require(phi > 0.0, "potential: field must be positive");
  const double l3 = p.lambda * p.lambda * p.lambda;
  return -p.n * l3 * std::pow(phi / p.lambda, -(p.n + 1));
}

double effective_potential(const ChameleonParams& p, double phi, double rho) {
  detail::require(rho >= 0.0, "effective_potential: negative density");
  return potential(p, phi) +
         p.beta * phi * rho / kConstants.reduced_planck_mass;
}

double effective_potential_derivative(const ChameleonParams& p, double phi,
                                      double rho) {
  detail::require(rho >= 0.0, "effective_potential: negative density");
  return potential_derivative(p, phi) +
         p.beta * rho / kConstants.reduced_planck_mass;
}

double effective_potential_curvature(const ChameleonParams& p, double phi) {
  detail::require(phi > 0.0, "potential: field must be positive");
  return p.n * (p.n + 1) * p.lambda * p.lambda *
         std::pow(phi / p.lambda, -(p.n + 2));
}

double min_field(const ChameleonParams& p, double rho) {
  detail::require(rho > 0.0, "min_field: no minimum without matter (rho = 0)");
  detail::require(p.beta > 0.0, "min_field: no minimum when beta = 0");
  const double load = matter_load(p, rho);
  return p.lambda * std::pow(p.n / load, 1.0 / (p.n + 1));
}

double mass_at_min(const ChameleonParams& p, double rho) {
  return std::sqrt(effective_potential_curvature(p, min_field(p, rho)));
}

}  // namespace chameleon
