#include "chameleon/pde.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>

#include "chameleon/bubble.hpp"
#include "chameleon/error.hpp"

namespace chameleon::pde {

namespace {

const auto& C = units::kConstants;
constexpr double kMaxLogStep = 0.5;

double int_pow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// Per-node data shared by both sweep orders.
struct Stencil {
  int n;
  double inv_h2;  // 1 / (h Lambda)^2
  double omega;

  // Newton step in log y (clamped), over-relaxed on y itself. For omega < 2
  // and a clamp of 0.5 the update factor stays above 0.2, so y stays positive.
  [[nodiscard]] double relax(double y, double s, double a) const {
    const double ip = int_pow(1.0 / y, n + 1);
    const double f = (s - 4.0 * y) * inv_h2 + n * ip - a;
    const double df = -4.0 * y * inv_h2 - n * (n + 1.0) * ip;
    const double step = std::clamp(-f / df, -kMaxLogStep, kMaxLogStep);
    return y * (1.0 + omega * std::expm1(step));
  }
};

double h_xi(const ChameleonParams& p, const Grid2D& g) {
  return units::length_to_natural(g.h) * p.lambda;
}

// Matter load per node, and the same load minus the near-wall correction.
// Close to a wall the field follows y = U(d + d_w), U(s) = ((n+2) s/sqrt 2)^p
// with p = 2/(n+2); the five-point stencil misses U'' there by O(1), which
// drags the whole solution to first order in h. The known defect
// U'' - Delta_h U is added back along each axis as long as the stencil stays
// below the local minimum, where U is the right local profile.
struct Loads {
  std::vector<double> load;
  std::vector<double> effective;
};

Loads loads(const ChameleonParams& p, const Grid2D& g) {
  Loads out;
  out.load.resize(g.source.size());
  const double scale = p.beta / (C.reduced_planck_mass * std::pow(p.lambda, 3));
  for (std::size_t k = 0; k < out.load.size(); ++k) out.load[k] = scale * g.source[k];
  out.effective = out.load;

  const int n = p.n;
  const double pw = 2.0 / (n + 2);
  const double amp = std::pow((n + 2) / std::sqrt(2.0), pw);
  auto u = [&](double s) { return amp * std::pow(s, pw); };
  const double d_wall = std::pow(g.boundary_value / amp, 1.0 / pw);
  const double h = h_xi(p, g);
  auto defect = [&](int steps) {
    const double s = steps * h + d_wall;
    const double exact = -n * int_pow(1.0 / u(s), n + 1);
    return exact - (u(s - h) - 2.0 * u(s) + u(s + h)) / (h * h);
  };
  auto reach = [&](int steps) { return u(steps * h + h + d_wall); };

  const int half = std::max(g.nx, g.ny) / 2 + 1;
  std::vector<double> tau(half), top(half);
  for (int m = 1; m < half; ++m) {
    tau[m] = defect(m);
    top[m] = reach(m);
  }
  for (int j = 1; j < g.ny - 1; ++j) {
    const int dj = std::min(j, g.ny - 1 - j);
    for (int i = 1; i < g.nx - 1; ++i) {
      const int di = std::min(i, g.nx - 1 - i);
      const std::size_t k = g.index(i, j);
      const double a = out.load[k];
      const double y_min = a > 0.0 ? std::pow(n / a, 1.0 / (n + 1)) : HUGE_VAL;
      double t = 0.0;
      if (top[di] < y_min) t += tau[di];
      if (top[dj] < y_min) t += tau[dj];
      out.effective[k] = a - t;
    }
  }
  return out;
}

void validate(const Grid2D& g) {
  detail::require(g.nx >= 3 && g.ny >= 3, "Grid2D: need at least 3 nodes per side");
  detail::require(g.h > 0.0, "Grid2D: spacing must be positive");
  detail::require(g.boundary_value > 0.0, "Grid2D: boundary value must be positive");
  const std::size_t size = static_cast<std::size_t>(g.nx) * g.ny;
  detail::require(g.values.size() == size && g.source.size() == size,
                  "Grid2D: storage does not match nx * ny");
  for (double v : g.values)
    detail::require(v > 0.0 && std::isfinite(v), "Grid2D: field values must be positive");
  for (double r : g.source)
    detail::require(r >= 0.0 && std::isfinite(r), "Grid2D: source must be >= 0");
}

double node_residual(const Grid2D& g, const Loads& a, int n, double inv_h2,
                     int i, int j) {
  const std::size_t k = g.index(i, j);
  const double y = g.values[k];
  const double s = g.values[k - 1] + g.values[k + 1] + g.values[k - g.nx] + g.values[k + g.nx];
  const double vp = n * int_pow(1.0 / y, n + 1);
  const double f = (s - 4.0 * y) * inv_h2 + vp - a.effective[k];
  const double scale = std::max({vp, a.load[k], 1e-300});
  return std::abs(f) / scale;
}

double residual_impl(const Grid2D& g, const Loads& a, int n,
                     double inv_h2) {
  double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (int j = 1; j < g.ny - 1; ++j) {
    for (int i = 1; i < g.nx - 1; ++i) {
      worst = std::max(worst, node_residual(g, a, n, inv_h2, i, j));
    }
  }
  return worst;
}

void sweep_lexicographic(Grid2D& g, const std::vector<double>& a, const Stencil& st) {
  auto& v = g.values;
  const int nx = g.nx;
  for (int j = 1; j < g.ny - 1; ++j) {
    for (int i = 1; i < nx - 1; ++i) {
      const std::size_t k = g.index(i, j);
      v[k] = st.relax(v[k], v[k - 1] + v[k + 1] + v[k - nx] + v[k + nx], a[k]);
    }
  }
}

void sweep_red_black(Grid2D& g, const std::vector<double>& a, const Stencil& st) {
  auto& v = g.values;
  const int nx = g.nx;
  for (int colour = 0; colour < 2; ++colour) {
#pragma omp parallel for schedule(static)
    for (int j = 1; j < g.ny - 1; ++j) {
      const int i0 = ((1 + j) % 2 == colour) ? 1 : 2;
      for (int i = i0; i < nx - 1; i += 2) {
        const std::size_t k = g.index(i, j);
        v[k] = st.relax(v[k], v[k - 1] + v[k + 1] + v[k - nx] + v[k + nx], a[k]);
      }
    }
  }
}

void put_u32(std::ostream& out, std::uint32_t x) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((x >> (8 * i)) & 0xff);
  out.write(b, 4);
}

void put_f64(std::ostream& out, double d) {
  const auto x = std::bit_cast<std::uint64_t>(d);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((x >> (8 * i)) & 0xff);
  out.write(b, 8);
}

std::uint64_t get_bytes(std::istream& in, int count) {
  unsigned char b[8] = {};
  in.read(reinterpret_cast<char*>(b), count);
  if (!in) throw ValidationError("read_binary: truncated grid file");
  std::uint64_t x = 0;
  for (int i = 0; i < count; ++i) x |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return x;
}

}  // namespace

Grid2D Grid2D::make(int nx, int ny, double h, double interior, double boundary) {
  detail::require(nx >= 3 && ny >= 3, "Grid2D: need at least 3 nodes per side");
  detail::require(h > 0.0, "Grid2D: spacing must be positive");
  detail::require(interior > 0.0 && boundary > 0.0,
                  "Grid2D: field values must be positive");
  Grid2D g;
  g.nx = nx;
  g.ny = ny;
  g.h = h;
  g.boundary_value = boundary;
  g.values.assign(static_cast<std::size_t>(nx) * ny, interior);
  g.source.assign(g.values.size(), 0.0);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (g.is_wall(i, j)) g.values[g.index(i, j)] = boundary;
  return g;
}

Grid2D initial_grid(const ChameleonParams& p, int nx, int ny, double h,
                    double rho, double boundary) {
  detail::require(rho >= 0.0, "initial_grid: density must be >= 0");
  double start = 0.0;
  if (rho > 0.0 && p.beta > 0.0) {
    start = min_field(p, rho) / p.lambda;
  } else {
    bubble::CellGeometry geom;
    geom.half_width = 0.5 * std::min(nx - 1, ny - 1) * h;
    geom.boundary_field = boundary * p.lambda;
    start = bubble::solve_y0(p, 0.0, geom);
  }
  Grid2D g = Grid2D::make(nx, ny, h, start, boundary);
  std::fill(g.source.begin(), g.source.end(), rho);
  return g;
}

Grid2D add_nuclei(Grid2D grid, const std::vector<std::array<double, 2>>& positions,
                  double m_nucl) {
  detail::require(m_nucl > 0.0, "add_nuclei: mass must be positive");
  const double hn = units::length_to_natural(grid.h);
  const double density = m_nucl / (hn * hn * hn);
  for (const auto& [x, y] : positions) {
    detail::require(x > 0.0 && y > 0.0 && x < grid.width() && y < grid.height(),
                    "add_nuclei: position must lie strictly inside the box");
    const int i = static_cast<int>(std::lround(x / grid.h));
    const int j = static_cast<int>(std::lround(y / grid.h));
    detail::require(!grid.is_wall(i, j), "add_nuclei: nucleus falls on a wall node");
    grid.source[grid.index(i, j)] += density;
  }
  return grid;
}

double total_source_mass(const Grid2D& grid) {
  const double hn = units::length_to_natural(grid.h);
  double sum = 0.0;
  for (double r : grid.source) sum += r;
  return sum * hn * hn * hn;
}

SolveResult solve_box(const ChameleonParams& p, Grid2D grid, const SolveOptions& opts) {
  validate(grid);
  detail::require(opts.tol > 0.0, "solve_box: tolerance must be positive");
  detail::require(opts.max_iter > 0, "solve_box: max_iter must be positive");
  detail::require(opts.check_every > 0, "solve_box: check_every must be positive");
  double omega = opts.omega;
  if (omega <= 0.0) {
    // optimal linear SOR factor for the Laplacian on this grid
    const double rj = 0.5 * (std::cos(M_PI / (grid.nx - 1)) + std::cos(M_PI / (grid.ny - 1)));
    omega = 2.0 / (1.0 + std::sqrt(1.0 - rj * rj));
  }
  detail::require(omega < 2.0, "solve_box: omega must be in (0, 2)");

  const auto a = loads(p, grid);
  const double hx = h_xi(p, grid);
  const Stencil st{p.n, 1.0 / (hx * hx), omega};

  SolveResult out;
  out.grid = std::move(grid);
  auto& g = out.grid;
  auto& rep = out.report;
  rep.final_residual = residual_impl(g, a, p.n, st.inv_h2);
  while (rep.final_residual > opts.tol && rep.iterations < opts.max_iter) {
    if (opts.sweep == Sweep::red_black) {
      sweep_red_black(g, a.effective, st);
    } else {
      sweep_lexicographic(g, a.effective, st);
    }
    ++rep.iterations;
    if (rep.iterations % opts.check_every == 0 || rep.iterations == opts.max_iter) {
      rep.final_residual = residual_impl(g, a, p.n, st.inv_h2);
      if (!std::isfinite(rep.final_residual)) break;
    }
  }
  rep.converged = rep.final_residual <= opts.tol;
  return out;
}

double residual(const ChameleonParams& p, const Grid2D& grid) {
  validate(grid);
  const double hx = h_xi(p, grid);
  return residual_impl(grid, loads(p, grid), p.n, 1.0 / (hx * hx));
}

void write_csv(const Grid2D& grid, std::ostream& out) {
  out << "x_m,y_m,phi_over_lambda\n";
  out.precision(17);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      out << i * grid.h << ',' << j * grid.h << ',' << grid.value(i, j) << '\n';
}

void write_binary(const Grid2D& grid, double lambda, std::ostream& out) {
  put_u32(out, static_cast<std::uint32_t>(grid.nx));
  put_u32(out, static_cast<std::uint32_t>(grid.ny));
  put_f64(out, grid.h);
  put_f64(out, lambda);
  for (double v : grid.values) put_f64(out, v);
}

Grid2D read_binary(std::istream& in, double* lambda) {
  const auto nx = static_cast<std::int32_t>(get_bytes(in, 4));
  const auto ny = static_cast<std::int32_t>(get_bytes(in, 4));
  const double h = std::bit_cast<double>(get_bytes(in, 8));
  const double l = std::bit_cast<double>(get_bytes(in, 8));
  detail::require(nx >= 3 && ny >= 3 && h > 0.0, "read_binary: bad header");
  Grid2D g = Grid2D::make(nx, ny, h, 1.0);
  for (double& v : g.values) v = std::bit_cast<double>(get_bytes(in, 8));
  g.boundary_value = g.values[0];
  if (lambda) *lambda = l;
  return g;
}

}  // namespace chameleon::pde
