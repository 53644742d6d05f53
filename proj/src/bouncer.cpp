#include "chameleon/bouncer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "chameleon/error.hpp"

namespace chameleon::bouncer {
namespace {

using units::kConstants;

constexpr double kDivergenceFactor = 1e12;

BouncerScales compute_scales() {
  const double m = kConstants.neutron_mass;
  const double g = units::gravity_natural();
  const double z0 = std::cbrt(1.0 / (2.0 * m * m * g));  // 1/eV
  BouncerScales s;
  s.z0 = units::length_from_natural(z0) * 1e6;
  s.e0 = m * g * z0 / kPeV;
  return s;
}

double sign_of(double x) { return (x > 0.0) - (x < 0.0); }

// Asymptotic position of the k-th zero of Ai(-x); good to ~1e-3 for k = 1.
double airy_zero_estimate(int k) {
  const double t = 3.0 * std::numbers::pi * (4.0 * k - 1.0) / 8.0;
  return std::pow(t, 2.0 / 3.0) * (1.0 + 5.0 / (48.0 * t * t));
}

// Feeds samples of a shooting solution and applies the level rules:
//   fewer than k extrema                               -> below
//   k-th extremum, then another extremum               -> below
//   k-th extremum, then growth past every extremum
//   without a sign change (divergence)                 -> below
//   k-th extremum, then a sign change                  -> above
class ShootingClassifier {
 public:
  explicit ShootingClassifier(int k) : k_(k) {}

  // Returns true once the verdict is fixed.
  bool push(double psi) {
    if (have_prev_) {
      const double d = sign_of(psi - prev_);
      if (d != 0.0) {
        if (last_slope_ != 0.0 && d != last_slope_) on_extremum(prev_);
        last_slope_ = d;
      }
      if (!decided_ && extrema_ >= k_) {
        if (psi * kth_sign_ < 0.0) {
          decide(LevelPosition::above);
        } else if (std::abs(psi) > largest_) {
          decide(LevelPosition::below);
        }
      }
    }
    prev_ = psi;
    have_prev_ = true;
    return decided_;
  }

  [[nodiscard]] int extrema() const { return extrema_; }
  [[nodiscard]] double largest_extremum() const { return largest_; }

  [[nodiscard]] LevelPosition verdict() const {
    if (decided_) return verdict_;
    if (extrema_ < k_) return LevelPosition::below;
    return LevelPosition::indeterminate;
  }

 private:
  void on_extremum(double value) {
    ++extrema_;
    largest_ = std::max(largest_, std::abs(value));
    if (decided_) return;
    if (extrema_ == k_) {
      kth_sign_ = sign_of(value);
    } else if (extrema_ > k_) {
      decide(LevelPosition::below);
    }
  }

  void decide(LevelPosition v) {
    verdict_ = v;
    decided_ = true;
  }

  int k_;
  int extrema_ = 0;
  double prev_ = 0.0;
  bool have_prev_ = false;
  double last_slope_ = 0.0;
  double kth_sign_ = 0.0;
  double largest_ = 0.0;
  bool decided_ = false;
  LevelPosition verdict_ = LevelPosition::indeterminate;
};

struct Stepper {
  double h;       // step in units of z0
  double eps;     // energy in units of E0
  double c;       // chameleon strength
  double alpha;

  [[nodiscard]] double f(double xi) const {
    const double u = xi + (c != 0.0 ? c * std::pow(xi, alpha) : 0.0);
    return u - eps;
  }
};

// Runs the Numerov recursion. `visit(i, psi)` is called for every sample and
// may return true to stop. Returns the number of samples produced.
template <class Visit>
std::size_t run_numerov(const Stepper& s, std::size_t steps, Visit&& visit) {
  const double w = s.h * s.h / 12.0;
  double psi_prev = 0.0;
  double psi = s.h;  // psi'(0) = 1 in units of z0
  double f_prev = s.f(0.0);
  double f_cur = s.f(s.h);
  if (visit(0, psi_prev)) return 1;
  if (visit(1, psi)) return 2;
  for (std::size_t i = 2; i <= steps; ++i) {
    const double f_next = s.f(static_cast<double>(i) * s.h);
    const double next = (2.0 * psi * (1.0 + 5.0 * w * f_cur) -
                         psi_prev * (1.0 - w * f_prev)) /
                        (1.0 - w * f_next);
    psi_prev = psi;
    psi = next;
    f_prev = f_cur;
    f_cur = f_next;
    if (visit(i, psi)) return i + 1;
  }
  return steps + 1;
}

Stepper make_stepper(const BouncerPotentialSpec& pot, double energy_pev,
                     const Discretization& grid) {
  detail::require(grid.step > 0.0, "Numerov step must be positive");
  detail::require(grid.z_max > grid.step, "z_max must exceed the step");
  const auto& sc = scales();
  return {grid.step / sc.z0, energy_pev / sc.e0, pot.strength(), pot.alpha_n};
}

std::size_t step_count(const Discretization& grid) {
  return static_cast<std::size_t>(std::llround(grid.z_max / grid.step));
}

// Classifies without storing the trace; integration stops at the verdict.
LevelPosition shoot(const BouncerPotentialSpec& pot, double energy_pev, int k,
                    const Discretization& grid) {
  const Stepper s = make_stepper(pot, energy_pev, grid);
  ShootingClassifier cls(k);
  run_numerov(s, step_count(grid), [&](std::size_t, double psi) {
    if (cls.push(psi)) return true;
    const double ref = cls.extrema() > 0 ? cls.largest_extremum() : 1.0;
    return std::abs(psi) > kDivergenceFactor * ref;
  });
  return cls.verdict();
}

// e-folds of decay between the classical turning point and z_max.
double forbidden_efolds(const BouncerPotentialSpec& pot, double energy_pev,
                        const Discretization& grid) {
  const Stepper s = make_stepper(pot, energy_pev, grid);
  const double xi_max = grid.z_max / scales().z0;
  const int samples = 2000;
  const double dx = xi_max / samples;
  double acc = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double xi = (i + 0.5) * dx;
    const double f = s.f(xi);
    if (f > 0.0) acc += std::sqrt(f) * dx;
  }
  return acc;
}

double find_level_on_grid(const BouncerPotentialSpec& pot, int k, double tol,
                          Discretization& grid) {
  const auto& sc = scales();
  double lo = 0.0;
  if (shoot(pot, lo, k, grid) != LevelPosition::below) {
    throw SolverError("find_level: zero energy does not lie below level " +
                      std::to_string(k));
  }
  const double xi_max = grid.z_max / sc.z0;
  double hi = sc.e0 * (airy_zero_estimate(k) +
                       pot.strength() * std::pow(xi_max, pot.alpha_n) + 10.0);
  int expansions = 0;
  for (;;) {
    const auto r = shoot(pot, hi, k, grid);
    if (r == LevelPosition::above) break;
    if (r == LevelPosition::at) return hi;
    if (r == LevelPosition::indeterminate) {
      grid.z_max *= 1.5;
    } else {
      lo = hi;
      hi *= 2.0;
    }
    if (++expansions > 60) {
      std::ostringstream os;
      os << "find_level: could not bracket level " << k << " (last upper bound "
         << hi << " peV, z_max " << grid.z_max << " um)";
      throw SolverError(os.str());
    }
  }
  int extensions = 0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const auto r = shoot(pot, mid, k, grid);
    switch (r) {
      case LevelPosition::below: lo = mid; break;
      case LevelPosition::above: hi = mid; break;
      case LevelPosition::at: return mid;
      case LevelPosition::indeterminate:
        // Tail still decaying at z_max: extend the range, or accept the
        // midpoint once further extension stops helping.
        if (++extensions > 4) return mid;
        grid.z_max *= 1.5;
        break;
    }
  }
  return 0.5 * (lo + hi);
}

void check_level_index(int k) {
  detail::require(k >= 1, "level index k must be >= 1");
}

// Simpson weights on a uniform grid of `count` samples (trapezoid on the
// last interval if the interval count is odd).
double simpson(const std::vector<double>& y, std::size_t count, double h) {
  if (count < 2) return 0.0;
  std::size_t intervals = count - 1;
  double tail = 0.0;
  if (intervals % 2 == 1) {
    tail = 0.5 * h * (y[count - 2] + y[count - 1]);
    --intervals;
  }
  double acc = y[0] + y[intervals];
  for (std::size_t i = 1; i < intervals; ++i) acc += (i % 2 ? 4.0 : 2.0) * y[i];
  return acc * h / 3.0 + tail;
}

}  // namespace

const BouncerScales& scales() {
  static const BouncerScales s = compute_scales();
  return s;
}

BouncerPotentialSpec BouncerPotentialSpec::gravity() { return {}; }

BouncerPotentialSpec BouncerPotentialSpec::chameleon(const ChameleonParams& p) {
  BouncerPotentialSpec s;
  s.params = p;
  s.alpha_n = 2.0 / (2.0 + p.n);
  s.v_n = kConstants.neutron_mass / kConstants.reduced_planck_mass * p.lambda *
          std::pow((2.0 + p.n) / std::numbers::sqrt2, s.alpha_n);
  return s;
}

double BouncerPotentialSpec::strength() const {
  if (!params || params->beta == 0.0) return 0.0;
  const auto& sc = scales();
  const double z0 = units::length_to_natural(sc.z0 * 1e-6);
  return params->beta * v_n * std::pow(params->lambda * z0, alpha_n) /
         (sc.e0 * kPeV);
}

double BouncerPotentialSpec::value(double z_um) const {
  detail::require(z_um >= 0.0, "height must be nonnegative");
  const auto& sc = scales();
  const double xi = z_um / sc.z0;
  const double c = strength();
  return sc.e0 * (xi + (c != 0.0 ? c * std::pow(xi, alpha_n) : 0.0));
}

WaveTrace numerov_integrate(const BouncerPotentialSpec& pot, double energy_pev,
                            const Discretization& grid) {
  const Stepper s = make_stepper(pot, energy_pev, grid);
  const double z0 = scales().z0;
  const std::size_t steps = step_count(grid);

  WaveTrace tr;
  tr.step = grid.step;
  tr.energy = energy_pev;
  tr.z.reserve(steps + 1);
  tr.psi.reserve(steps + 1);

  // Only extrema bookkeeping is needed here; k is irrelevant.
  ShootingClassifier extrema(std::numeric_limits<int>::max());
  bool stopped = false;
  run_numerov(s, steps, [&](std::size_t i, double psi) {
    tr.z.push_back(static_cast<double>(i) * grid.step);
    tr.psi.push_back(psi * z0);
    extrema.push(psi);
    const double ref = extrema.extrema() > 0 ? extrema.largest_extremum() : 1.0;
    stopped = std::abs(psi) > kDivergenceFactor * ref;
    return stopped;
  });
  tr.extrema_count = extrema.extrema();

  const double last = tr.psi.back() / z0;
  const double ref = tr.extrema_count > 0 ? extrema.largest_extremum() : 0.0;
  if (stopped || std::abs(last) >= ref) {
    tr.terminal = last > 0.0 ? Terminal::diverged_positive
                             : Terminal::diverged_negative;
  } else {
    tr.terminal = Terminal::converged;
  }
  return tr;
}

LevelPosition classify_trace(const WaveTrace& trace, int k) {
  check_level_index(k);
  ShootingClassifier cls(k);
  for (double v : trace.psi) {
    if (cls.push(v)) break;
  }
  return cls.verdict();
}

double find_level(const BouncerPotentialSpec& pot, int k,
                  const LevelOptions& opts) {
  check_level_index(k);
  const double tol = opts.tol > 0.0 ? opts.tol : 1e-6 * scales().e0;
  Discretization grid = opts.grid;
  double level = find_level_on_grid(pot, k, tol, grid);
  // Make sure the forbidden region past the turning point is wide enough
  // for the tail to be resolved; widen and redo if not.
  for (int i = 0; i < 8 && forbidden_efolds(pot, level, grid) < 10.0; ++i) {
    grid.z_max *= 1.5;
    level = find_level_on_grid(pot, k, tol, grid);
  }
  return level;
}

BouncerSpectrum exact_spectrum(const BouncerPotentialSpec& pot, int k_max,
                               const LevelOptions& opts) {
  check_level_index(k_max);
  BouncerSpectrum out;
  out.method = BouncerSpectrum::Method::exact_numerov;
  out.levels.resize(static_cast<std::size_t>(k_max));
#pragma omp parallel for schedule(dynamic)
  for (int k = 1; k <= k_max; ++k) {
    out.levels[static_cast<std::size_t>(k - 1)] = {k, find_level(pot, k, opts)};
  }
  return out;
}

BouncerSpectrum perturbative_spectrum(const ChameleonParams& p, int k_max,
                                      const LevelOptions& opts) {
  check_level_index(k_max);
  BouncerSpectrum out;
  out.method = BouncerSpectrum::Method::perturbative;
  const auto gravity = BouncerPotentialSpec::gravity();
  for (int k = 1; k <= k_max; ++k) {
    out.levels.push_back(
        {k, find_level(gravity, k, opts) + perturbative_shift(p, k, opts)});
  }
  return out;
}

double overlap(int k, double alpha, const LevelOptions& opts) {
  check_level_index(k);
  detail::require(alpha >= 0.0 && alpha <= 1.0,
                  "overlap exponent must lie in [0, 1]");
  const auto gravity = BouncerPotentialSpec::gravity();
  LevelOptions tight = opts;
  if (tight.tol <= 0.0) tight.tol = 1e-10 * scales().e0;
  const double e = find_level(gravity, k, tight);
  const WaveTrace tr = numerov_integrate(gravity, e, tight.grid);

  // Cut the trace where |psi| is smallest after the k-th extremum; beyond
  // that the numerically growing solution takes over.
  ShootingClassifier cls(std::numeric_limits<int>::max());
  std::size_t start = tr.psi.size();
  for (std::size_t i = 0; i < tr.psi.size(); ++i) {
    cls.push(tr.psi[i]);
    if (cls.extrema() >= k) {
      start = i;
      break;
    }
  }
  if (start == tr.psi.size()) {
    throw SolverError("overlap: trace has fewer than k extrema");
  }
  std::size_t cut = start;
  for (std::size_t i = start; i < tr.psi.size(); ++i) {
    if (std::abs(tr.psi[i]) < std::abs(tr.psi[cut])) cut = i;
  }

  const double z0 = scales().z0;
  const std::size_t count = cut + 1;
  std::vector<double> weighted(count);
  std::vector<double> plain(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double p2 = tr.psi[i] * tr.psi[i];
    plain[i] = p2;
    weighted[i] = p2 * std::pow(tr.z[i] / z0, alpha);
  }
  return simpson(weighted, count, tr.step) / simpson(plain, count, tr.step);
}

std::vector<std::vector<double>> overlap_table(int k_max, int n_max,
                                               const LevelOptions& opts) {
  check_level_index(k_max);
  detail::require(n_max >= 1, "n_max must be >= 1");
  std::vector<std::vector<double>> table(
      static_cast<std::size_t>(k_max),
      std::vector<double>(static_cast<std::size_t>(n_max)));
  const int total = k_max * n_max;
#pragma omp parallel for schedule(dynamic)
  for (int idx = 0; idx < total; ++idx) {
    const int k = idx / n_max + 1;
    const int n = idx % n_max + 1;
    table[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(n - 1)] =
        overlap(k, 2.0 / (2.0 + n), opts);
  }
  return table;
}

double perturbative_shift(const ChameleonParams& p, int k,
                          const LevelOptions& opts) {
  check_level_index(k);
  if (p.beta == 0.0) return 0.0;
  const auto pot = BouncerPotentialSpec::chameleon(p);
  return scales().e0 * pot.strength() * overlap(k, pot.alpha_n, opts);
}

double transition_shift(const ChameleonParams& p, int k_hi, int k_lo,
                        bool exact, const LevelOptions& opts) {
  check_level_index(k_lo);
  detail::require(k_hi > k_lo, "transition requires k_hi > k_lo");
  if (p.beta == 0.0) return 0.0;
  if (!exact) {
    return perturbative_shift(p, k_hi, opts) - perturbative_shift(p, k_lo, opts);
  }
  const auto cham = BouncerPotentialSpec::chameleon(p);
  const auto grav = BouncerPotentialSpec::gravity();
  const double shifted = find_level(cham, k_hi, opts) - find_level(cham, k_lo, opts);
  const double bare = find_level(grav, k_hi, opts) - find_level(grav, k_lo, opts);
  return shifted - bare;
}

double coupling_bound(int n, double sensitivity_pev,
                      const CouplingBoundOptions& opts) {
  detail::require(sensitivity_pev > 0.0, "sensitivity must be positive");
  LevelOptions lv;
  lv.grid = opts.grid;
  lv.tol = std::min(1e-6 * scales().e0, 1e-4 * sensitivity_pev);

  // The pure-gravity transition energy is shared by every evaluation.
  const auto grav = BouncerPotentialSpec::gravity();
  const double bare = opts.exact ? find_level(grav, opts.k_hi, lv) -
                                       find_level(grav, opts.k_lo, lv)
                                 : 0.0;
  auto excess = [&](double log10_beta) {
    const ChameleonParams p(n, std::pow(10.0, log10_beta), opts.lambda);
    double shift;
    if (opts.exact) {
      const auto cham = BouncerPotentialSpec::chameleon(p);
      shift = find_level(cham, opts.k_hi, lv) - find_level(cham, opts.k_lo, lv) -
              bare;
    } else {
      shift = transition_shift(p, opts.k_hi, opts.k_lo, false, lv);
    }
    return shift - sensitivity_pev;
  };

  double lo = opts.log10_beta_min;
  double hi = opts.log10_beta_max;
  if (excess(lo) > 0.0 || excess(hi) < 0.0) {
    std::ostringstream os;
    os << "coupling_bound: no coupling in [1e" << lo << ", 1e" << hi
       << "] reaches a " << sensitivity_pev << " peV shift for n = " << n;
    throw SolverError(os.str());
  }
  while (hi - lo > opts.log10_tol) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) < 0.0 ? lo : hi) = mid;
  }
  return std::pow(10.0, 0.5 * (lo + hi));
}

}  // namespace chameleon::bouncer
