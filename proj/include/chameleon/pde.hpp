#pragma once

// Chameleon equation Laplacian(phi) = V'(phi) + beta rho / M_Pl on a
// rectangular 2D grid with Dirichlet walls. Internally the unknown is
// y = phi / Lambda on lengths measured in 1/Lambda, so the equation reads
// Laplacian(y) = -n y^-(n+1) + beta rho / (M_Pl Lambda^3). Nodes are relaxed
// with one Newton step in log y per visit, over-relaxed and clamped.

#include <array>
#include <iosfwd>
#include <vector>

#include "chameleon/model.hpp"

namespace chameleon::pde {

struct Grid2D {
  int nx = 0;  // nodes along x, walls included
  int ny = 0;  // nodes along y, walls included
  double h = 0.0;                // node spacing, m
  double boundary_value = 1e-4;  // phi / Lambda on the walls
  std::vector<double> values;    // phi / Lambda, index j * nx + i
  std::vector<double> source;    // rho, eV^4

  /// Walls at boundary, interior at `interior`, zero source.
  static Grid2D make(int nx, int ny, double h, double interior,
                     double boundary = 1e-4);

  [[nodiscard]] std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * nx + i;
  }
  [[nodiscard]] double value(int i, int j) const { return values[index(i, j)]; }
  [[nodiscard]] bool is_wall(int i, int j) const {
    return i == 0 || j == 0 || i == nx - 1 || j == ny - 1;
  }
  [[nodiscard]] double width() const { return (nx - 1) * h; }
  [[nodiscard]] double height() const { return (ny - 1) * h; }
};

/// Box filled with a uniform density; the interior starts at the 1D vacuum
/// bubble maximum for the narrower side, or at min_field when rho > 0.
Grid2D initial_grid(const ChameleonParams& p, int nx, int ny, double h,
                    double rho = 0.0, double boundary = 1e-4);

/// Deposits m_nucl / h^3 at the node nearest to each (x, y) position (m,
/// measured from the lower-left corner). Positions must map to interior
/// nodes.
Grid2D add_nuclei(Grid2D grid, const std::vector<std::array<double, 2>>& positions,
                  double m_nucl);

/// Sum of source * h^3 over the grid, eV.
double total_source_mass(const Grid2D& grid);

enum class Sweep { red_black, lexicographic };

struct SolveOptions {
  double tol = 1e-8;
  long max_iter = 100000;
  double omega = 0.0;  // over-relaxation in (0, 2); 0 picks the linear optimum
  Sweep sweep = Sweep::red_black;
  int check_every = 10;
};

struct SolveReport {
  long iterations = 0;
  double final_residual = 0.0;
  bool converged = false;
};

struct SolveResult {
  Grid2D grid;
  SolveReport report;
};

/// Red-black sweeps run in parallel; lexicographic is the serial reference.
SolveResult solve_box(const ChameleonParams& p, Grid2D grid,
                      const SolveOptions& opts = {});

/// Max over interior nodes of |Laplacian - V' - beta rho / M_Pl| divided by
/// max(|V'|, beta rho / M_Pl) at that node.
double residual(const ChameleonParams& p, const Grid2D& grid);

/// Rows "x_m,y_m,phi_over_lambda" with a header line.
void write_csv(const Grid2D& grid, std::ostream& out);

/// Little-endian: int32 nx, int32 ny, float64 h (m), float64 Lambda (eV),
/// then nx * ny float64 phi / Lambda, x fastest.
void write_binary(const Grid2D& grid, double lambda, std::ostream& out);
Grid2D read_binary(std::istream& in, double* lambda = nullptr);

}  // namespace chameleon::pde
