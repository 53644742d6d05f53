#include "cli_app.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <variant>

#include "chameleon/bouncer.hpp"
#include "chameleon/bubble.hpp"
#include "chameleon/error.hpp"
#include "chameleon/interferometry.hpp"
#include "chameleon/microstructure.hpp"
#include "chameleon/pde.hpp"

namespace chameleon::cli {

namespace {

struct RunConfig {
  int n = 2;
  double beta = 1e9;
  double lambda_ev = units::kConstants.dark_energy_scale_default;
  double pressure_mbar = 0.0;
  double temperature_k = 293.0;
  double cell_cm = 1.0;
  double wavenumber_inv_nm = 23.0;
  double sensitivity_mrad = 17.0;
  double step_um = 0.01;
  double zmax_um = 100.0;
  int grid = 0;  // 0: command default
  double tol = 1e-8;
  std::string format = "csv";
  std::string out = "-";
  bool beta_given = false;

  [[nodiscard]] ChameleonParams params() const { return {n, beta, lambda_ev}; }
  [[nodiscard]] units::GasSpec gas() const {
    return units::GasSpec::helium(pressure_mbar, temperature_k);
  }
  [[nodiscard]] bubble::CellGeometry cell() const {
    return bubble::CellGeometry::from_gap_cm(cell_cm);
  }
  [[nodiscard]] interf::BeamSpec beam() const {
    return {wavenumber_inv_nm, sensitivity_mrad * 1e-3};
  }
  [[nodiscard]] bouncer::LevelOptions levels() const {
    bouncer::LevelOptions o;
    o.grid = {step_um, zmax_um};
    return o;
  }
};

using Cell = std::variant<std::monostate, double, long, std::string, bool>;

struct Table {
  std::string command;
  std::vector<std::pair<std::string, Cell>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string format_cell(const Cell& c) {
  struct {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double d) const {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", d);
      return buf;
    }
    std::string operator()(long v) const { return std::to_string(v); }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  } visit;
  return std::visit(visit, c);
}

nlohmann::ordered_json json_cell(const Cell& c) {
  struct {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(double d) const {
      if (!std::isfinite(d)) return nullptr;
      return d;
    }
    nlohmann::ordered_json operator()(long v) const { return v; }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
    nlohmann::ordered_json operator()(bool b) const { return b; }
  } visit;
  return std::visit(visit, c);
}

void write_table(const Table& t, const std::string& format, std::ostream& out) {
  if (format == "json") {
    nlohmann::ordered_json j;
    j["schema"] = kSchema;
    j["version"] = kVersion;
    j["command"] = t.command;
    auto& meta = j["meta"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t.meta) meta[k] = json_cell(v);
    j["columns"] = t.columns;
    auto& rows = j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) {
      auto row = nlohmann::ordered_json::array();
      for (const auto& c : r) row.push_back(json_cell(c));
      rows.push_back(std::move(row));
    }
    out << j.dump() << '\n';
    return;
  }
  out << "# chameleon " << kVersion << " schema " << kSchema << " command " << t.command << '\n';
  if (!t.meta.empty()) {
    out << '#';
    for (const auto& [k, v] : t.meta) out << ' ' << k << '=' << format_cell(v);
    out << '\n';
  }
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_cell(r[i]);
    out << '\n';
  }
}

void add_model_meta(Table& t, const RunConfig& c) {
  t.meta.emplace_back("n", static_cast<long>(c.n));
  t.meta.emplace_back("beta", c.beta);
  t.meta.emplace_back("lambda_ev", c.lambda_ev);
}

std::vector<double> log_grid(double lo, double hi, int points) {
  detail::require(points >= 1, "--points must be >= 1");
  detail::require(lo > 0.0 && hi >= lo, "log grid needs 0 < min <= max");
  std::vector<double> g(static_cast<std::size_t>(points));
  const double a = std::log10(lo), b = std::log10(hi);
  for (int i = 0; i < points; ++i)
    g[static_cast<std::size_t>(i)] = points == 1 ? lo : std::pow(10.0, a + (b - a) * i / (points - 1));
  return g;
}

// --- commands ------------------------------------------------------------

struct BouncerArgs {
  int levels = 6;
  bool sweep = false;
  int trace = 0;
  double beta_min = 1e6;
  double beta_max = 1e11;
  int points = 26;
};

Table cmd_bouncer(const RunConfig& c, const BouncerArgs& a) {
  Table t;
  t.command = "bouncer";
  add_model_meta(t, c);
  t.meta.emplace_back("step_um", c.step_um);
  t.meta.emplace_back("zmax_um", c.zmax_um);
  const auto opts = c.levels();
  const auto p = c.params();
  const auto pot = bouncer::BouncerPotentialSpec::chameleon(p);
  if (a.sweep) {
    t.meta.emplace_back("transition", std::string("3->1"));
    t.columns = {"beta", "shift_exact_peV", "shift_perturbative_peV"};
    for (double b : log_grid(a.beta_min, a.beta_max, a.points)) {
      const auto q = p.with_beta(b);
      t.rows.push_back({b, bouncer::transition_shift(q, 3, 1, true, opts),
                        bouncer::transition_shift(q, 3, 1, false, opts)});
    }
    return t;
  }
  if (a.trace > 0) {
    const double e = bouncer::find_level(pot, a.trace, opts);
    const auto tr = bouncer::numerov_integrate(pot, e, opts.grid);
    t.meta.emplace_back("k", static_cast<long>(a.trace));
    t.meta.emplace_back("energy_peV", e);
    t.columns = {"z_um", "psi"};
    for (std::size_t i = 0; i < tr.z.size(); ++i) t.rows.push_back({tr.z[i], tr.psi[i]});
    return t;
  }
  const double e0 = bouncer::scales().e0;
  t.meta.emplace_back("E0_peV", e0);
  const auto exact = bouncer::exact_spectrum(pot, a.levels, opts);
  const auto pert = bouncer::perturbative_spectrum(p, a.levels, opts);
  t.columns = {"k", "epsilon", "E_exact_peV", "E_perturbative_peV", "delta_peV"};
  for (int k = 0; k < a.levels; ++k) {
    const double ex = exact.levels[static_cast<std::size_t>(k)].energy;
    const double pe = pert.levels[static_cast<std::size_t>(k)].energy;
    t.rows.push_back({static_cast<long>(k + 1), ex / e0, ex, pe, ex - pe});
  }
  return t;
}

struct BubbleArgs {
  int samples = 201;
  std::vector<double> pressures;
};

Table cmd_bubble(const RunConfig& c, const BubbleArgs& a) {
  Table t;
  t.command = "bubble";
  add_model_meta(t, c);
  t.meta.emplace_back("cell_cm", c.cell_cm);
  const auto p = c.params();
  const auto geom = c.cell();
  if (!a.pressures.empty()) {
    t.columns = {"pressure_mbar", "y0",        "line_integral", "vacuum_integral",
                 "high_pressure_integral", "regime", "valid"};
    const double vac = bubble::vacuum_line_integral(p, geom);
    for (double mb : a.pressures) {
      detail::require(mb >= 0.0, "--pressures must be >= 0");
      auto gas = c.gas();
      gas.pressure = mb * units::kPascalPerMillibar;
      const double rho = gas.mass_density_natural();
      const auto s = bubble::solve_bubble(p, rho, geom);
      Cell high;
      if (rho > 0.0 && p.beta > 0.0) high = bubble::high_pressure_line_integral(p, rho, geom);
      const auto regime = micro::classify(p, gas).regime;
      t.rows.push_back({mb, s.y0, s.line_integral, vac, high,
                        std::string(micro::to_string(regime)),
                        regime == micro::Regime::homogeneous_perturbative});
    }
    return t;
  }
  const auto gas = c.gas();
  const double rho = gas.mass_density_natural();
  const auto s = bubble::solve_bubble(p, rho, geom);
  const auto regime = micro::classify(p, gas).regime;
  t.meta.emplace_back("pressure_mbar", c.pressure_mbar);
  t.meta.emplace_back("y0", s.y0);
  t.meta.emplace_back("line_integral", s.line_integral);
  t.meta.emplace_back("regime", std::string(micro::to_string(regime)));
  t.meta.emplace_back("valid", regime == micro::Regime::homogeneous_perturbative);
  t.columns = {"x_m", "phi_eV", "phi_over_lambda"};
  for (const auto& q : bubble::profile_samples(p, rho, geom, a.samples))
    t.rows.push_back({q.x, q.phi, q.phi / p.lambda});
  return t;
}

struct PhaseArgs {
  double p_min = 1e-4;
  double p_max = 1e2;
  int points = 25;
  std::vector<double> pressures;
};

Table cmd_phase(const RunConfig& c, const PhaseArgs& a) {
  Table t;
  t.command = "phase";
  add_model_meta(t, c);
  t.meta.emplace_back("cell_cm", c.cell_cm);
  t.meta.emplace_back("wavenumber_inv_nm", c.wavenumber_inv_nm);
  std::vector<double> ps = a.pressures;
  if (ps.empty()) {
    ps.push_back(0.0);
    for (double v : log_grid(a.p_min, a.p_max, a.points)) ps.push_back(v);
  }
  const auto rows = interf::pressure_sweep(c.params(), c.gas(), c.cell(), c.beam(), ps);
  t.columns = {"pressure_mbar", "delta_phi_rad", "regime", "valid"};
  for (const auto& r : rows)
    t.rows.push_back({r.pressure_mbar, r.delta_phi, std::string(micro::to_string(r.regime)), r.valid});
  return t;
}

struct RegimeArgs {
  std::string gas = "helium";
  double beta_min = 1.0;
  double beta_max = 1e12;
  double p_min = 1e-6;
  double p_max = 1e3;
  int points = 50;
  bool curves = false;
};

Table cmd_regimes(const RunConfig& c, const RegimeArgs& a) {
  Table t;
  t.command = "regimes";
  t.meta.emplace_back("n", static_cast<long>(c.n));
  t.meta.emplace_back("lambda_ev", c.lambda_ev);
  t.meta.emplace_back("gas", a.gas);
  t.meta.emplace_back("temperature_k", c.temperature_k);
  const auto gas = c.gas();
  const auto betas = log_grid(a.beta_min, a.beta_max, a.points);
  if (a.curves) {
    const auto nuc = micro::NucleusSpec::of(gas);
    t.columns = {"beta", "p_pert_mbar", "p_screen_mbar"};
    for (double b : betas) {
      const ChameleonParams p(c.n, b, c.lambda_ev);
      t.rows.push_back({b, micro::density_to_pressure_mbar(gas, micro::rho_pert(p)),
                        micro::density_to_pressure_mbar(gas, micro::rho_screen(p, nuc))});
    }
    return t;
  }
  const auto cells =
      micro::regime_map(c.n, c.lambda_ev, betas, log_grid(a.p_min, a.p_max, a.points), gas);
  t.columns = {"beta", "pressure_mbar", "regime", "code"};
  for (const auto& cell : cells)
    t.rows.push_back({cell.beta, cell.pressure_mbar, std::string(micro::to_string(cell.regime)),
                      static_cast<long>(micro::regime_code(cell.regime))});
  return t;
}

struct PdeArgs {
  int nuclei = 0;
  std::string binary;
  long max_iter = 100000;
};

constexpr double kNucleusBeta = 1e19;

struct PdeOutcome {
  Table table;
  bool converged = true;
};

PdeOutcome cmd_pde(const RunConfig& c, const PdeArgs& a) {
  PdeOutcome o;
  Table& t = o.table;
  t.command = "pde";
  RunConfig cfg = c;
  if (a.nuclei > 0 && !c.beta_given) cfg.beta = kNucleusBeta;
  const int nodes = c.grid > 0 ? c.grid : (a.nuclei > 0 ? 257 : 129);
  const double side = c.cell_cm * 1e-2;
  const double h = side / (nodes - 1);
  const auto p = cfg.params();
  const auto gas = c.gas();
  auto grid = pde::initial_grid(p, nodes, nodes, h, gas.mass_density_natural());
  // centre first, then the corners of a quincunx
  static const double kLayout[5][2] = {{0.5, 0.5}, {0.3, 0.3}, {0.7, 0.3}, {0.3, 0.7}, {0.7, 0.7}};
  std::vector<std::array<double, 2>> pos;
  for (int i = 0; i < a.nuclei; ++i) pos.push_back({kLayout[i][0] * side, kLayout[i][1] * side});
  if (!pos.empty()) grid = pde::add_nuclei(std::move(grid), pos, gas.nucleus_mass);
  pde::SolveOptions so;
  so.tol = c.tol;
  so.max_iter = a.max_iter;
  const auto r = pde::solve_box(p, std::move(grid), so);
  o.converged = r.report.converged;

  add_model_meta(t, cfg);
  t.meta.emplace_back("nodes", static_cast<long>(nodes));
  t.meta.emplace_back("h_m", h);
  t.meta.emplace_back("nuclei", static_cast<long>(a.nuclei));
  t.meta.emplace_back("pressure_mbar", c.pressure_mbar);
  t.meta.emplace_back("iterations", r.report.iterations);
  t.meta.emplace_back("residual", r.report.final_residual);
  t.meta.emplace_back("converged", r.report.converged);
  t.columns = {"x_m", "y_m", "phi_over_lambda"};
  for (int j = 0; j < r.grid.ny; ++j)
    for (int i = 0; i < r.grid.nx; ++i) t.rows.push_back({i * h, j * h, r.grid.value(i, j)});
  if (!a.binary.empty()) {
    std::ofstream bin(a.binary, std::ios::binary);
    if (!bin) throw ValidationError("--binary: cannot open " + a.binary);
    pde::write_binary(r.grid, p.lambda, bin);
  }
  return o;
}

struct ExclusionArgs {
  int n_max = 6;
  double bouncer_sensitivity_pev = 0.01;
};

Table cmd_exclusion(const RunConfig& c, const ExclusionArgs& a) {
  Table t;
  t.command = "exclusion";
  t.meta.emplace_back("lambda_ev", c.lambda_ev);
  t.meta.emplace_back("bouncer_sensitivity_peV", a.bouncer_sensitivity_pev);
  t.meta.emplace_back("phase_sensitivity_rad", c.sensitivity_mrad * 1e-3);
  t.meta.emplace_back("pressure_mbar", c.pressure_mbar);
  t.meta.emplace_back("cell_cm", c.cell_cm);
  bouncer::CouplingBoundOptions bo;
  bo.lambda = c.lambda_ev;
  bo.grid = {c.step_um, c.zmax_um};
  interf::ReachOptions ro;
  ro.lambda = c.lambda_ev;
  t.columns = {"n", "beta_bouncer", "beta_interferometry"};
  for (int n = 1; n <= a.n_max; ++n) {
    t.rows.push_back({static_cast<long>(n), bouncer::coupling_bound(n, a.bouncer_sensitivity_pev, bo),
                      interf::coupling_reach(n, c.gas(), c.cell(), c.beam(), ro)});
  }
  return t;
}

// --- command line --------------------------------------------------------

void add_common(CLI::App& app, RunConfig& c) {
  app.add_option("--n", c.n, "Ratra-Peebles index")->check(CLI::Range(1, 12));
  app.add_option("--beta", c.beta, "matter coupling")->check(CLI::NonNegativeNumber);
  app.add_option("--lambda-ev", c.lambda_ev, "dark energy scale, eV")->check(CLI::PositiveNumber);
  app.add_option("--pressure-mbar", c.pressure_mbar, "helium pressure, mbar")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--temperature-k", c.temperature_k, "gas temperature, K")->check(CLI::PositiveNumber);
  app.add_option("--cell-cm", c.cell_cm, "cell gap 2R (box side for pde), cm")
      ->check(CLI::PositiveNumber);
  app.add_option("--wavenumber-inv-nm", c.wavenumber_inv_nm, "neutron wavenumber, 1/nm")
      ->check(CLI::PositiveNumber);
  app.add_option("--sensitivity-mrad", c.sensitivity_mrad, "interferometer phase sensitivity, mrad")
      ->check(CLI::PositiveNumber);
  app.add_option("--step-um", c.step_um, "Numerov step, um")->check(CLI::PositiveNumber);
  app.add_option("--zmax-um", c.zmax_um, "Numerov range, um")->check(CLI::PositiveNumber);
  app.add_option("--grid", c.grid, "pde nodes per side (default 129, 257 with nuclei)")
      ->check(CLI::Range(3, 8193));
  app.add_option("--tol", c.tol, "pde residual tolerance")->check(CLI::PositiveNumber);
  app.add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", c.out, "output file, - for stdout");
}

void validate(const RunConfig& c) {
  detail::require(c.zmax_um > 10 * c.step_um, "--zmax-um must exceed ten Numerov steps");
}

int emit(const Table& t, const RunConfig& c, std::ostream& out) {
  if (c.out == "-") {
    write_table(t, c.format, out);
    return kExitOk;
  }
  std::ofstream f(c.out);
  if (!f) throw ValidationError("--out: cannot open " + c.out);
  write_table(t, c.format, f);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chameleon dark energy probed with slow neutrons", "chameleon"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);

  RunConfig cfg;
  add_common(app, cfg);

  BouncerArgs ba;
  auto* bouncer = app.add_subcommand(
      "bouncer",
      "Quantum bouncer levels above a mirror.\n"
      "Plot data: level energies and shifts, wavefunctions (--trace), transition shift versus beta "
      "(--sweep).");
  bouncer->add_option("--levels", ba.levels, "number of levels")->check(CLI::Range(1, 30));
  bouncer->add_flag("--sweep", ba.sweep, "3->1 transition shift over a beta grid");
  bouncer->add_option("--trace", ba.trace, "emit the wavefunction of level k")->check(CLI::Range(1, 30));
  bouncer->add_option("--beta-min", ba.beta_min, "sweep start")->check(CLI::PositiveNumber);
  bouncer->add_option("--beta-max", ba.beta_max, "sweep end")->check(CLI::PositiveNumber);
  bouncer->add_option("--points", ba.points, "sweep points")->check(CLI::Range(1, 10000));

  BubbleArgs bb;
  auto* bubble = app.add_subcommand(
      "bubble",
      "Field bubble between the cell walls.\n"
      "Plot data: profile phi/Lambda across the cell; line integral versus pressure (--pressures).");
  bubble->add_option("--samples", bb.samples, "profile half-grid size")->check(CLI::Range(2, 1000000));
  bubble->add_option("--pressures", bb.pressures, "comma-separated pressures, mbar")->delimiter(',');

  PhaseArgs pa;
  auto* phase = app.add_subcommand(
      "phase",
      "Interferometer phase shift through the gas cell.\n"
      "Plot data: phase shift versus helium pressure.");
  phase->add_option("--p-min", pa.p_min, "lowest nonzero pressure, mbar")->check(CLI::PositiveNumber);
  phase->add_option("--p-max", pa.p_max, "highest pressure, mbar")->check(CLI::PositiveNumber);
  phase->add_option("--points", pa.points, "log-spaced pressures")->check(CLI::Range(1, 100000));
  phase->add_option("--pressures", pa.pressures, "explicit comma-separated pressures, mbar")
      ->delimiter(',');

  RegimeArgs ra;
  auto* regimes = app.add_subcommand(
      "regimes",
      "Gas regimes over the (beta, pressure) plane.\n"
      "Plot data: regime map with the perturbative and screening threshold curves (--curves).");
  regimes->add_option("--gas", ra.gas, "gas species")->check(CLI::IsMember({"helium"}));
  regimes->add_option("--beta-min", ra.beta_min)->check(CLI::PositiveNumber);
  regimes->add_option("--beta-max", ra.beta_max)->check(CLI::PositiveNumber);
  regimes->add_option("--p-min", ra.p_min, "mbar")->check(CLI::PositiveNumber);
  regimes->add_option("--p-max", ra.p_max, "mbar")->check(CLI::PositiveNumber);
  regimes->add_option("--points", ra.points, "grid points per axis")->check(CLI::Range(1, 10000));
  regimes->add_flag("--curves", ra.curves, "threshold pressures per beta instead of the map");

  PdeArgs da;
  auto* pde = app.add_subcommand(
      "pde",
      "Relaxed 2D field in a square box, optionally with point nuclei.\n"
      "Plot data: phi/Lambda map of the empty box; map with nuclei carving smaller bubbles "
      "(--nuclei).\n"
      "With nuclei and no explicit --beta, beta = 1e19 so the nuclei are visible on the grid.");
  pde->add_option("--nuclei", da.nuclei, "number of helium nuclei, 0..5")->check(CLI::Range(0, 5));
  pde->add_option("--binary", da.binary, "also write the little-endian binary grid here");
  pde->add_option("--max-iter", da.max_iter, "sweep limit")->check(CLI::PositiveNumber);

  ExclusionArgs ea;
  auto* exclusion = app.add_subcommand(
      "exclusion",
      "Coupling reach per n of the bouncer and the interferometer.\n"
      "Plot data: sensitivity curves in the (n, beta) plane.");
  exclusion->add_option("--n-max", ea.n_max, "largest n")->check(CLI::Range(1, 12));
  exclusion->add_option("--bouncer-sensitivity-pev", ea.bouncer_sensitivity_pev,
                        "transition shift resolution, peV")
      ->check(CLI::PositiveNumber);

  for (auto* sub : {bouncer, bubble, phase, regimes, pde, exclusion}) sub->fallthrough();

  std::vector<std::string> storage{"chameleon"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }
  cfg.beta_given = app.get_option("--beta")->count() > 0;

  try {
    validate(cfg);
    if (bouncer->parsed()) return emit(cmd_bouncer(cfg, ba), cfg, out);
    if (bubble->parsed()) return emit(cmd_bubble(cfg, bb), cfg, out);
    if (phase->parsed()) return emit(cmd_phase(cfg, pa), cfg, out);
    if (regimes->parsed()) return emit(cmd_regimes(cfg, ra), cfg, out);
    if (exclusion->parsed()) return emit(cmd_exclusion(cfg, ea), cfg, out);
    const auto r = cmd_pde(cfg, da);
    emit(r.table, cfg, out);
    if (!r.converged) {
      err << "error: pde relaxation did not converge\n";
      return kExitSolver;
    }
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const OutOfValidity& e) {
    err << "out of validity: " << e.what() << '\n';
    return kExitValidation;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << '\n';
    return kExitSolver;
  }
}

}  // namespace chameleon::cli
