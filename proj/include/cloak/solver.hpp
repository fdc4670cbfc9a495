#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "cloak/farfield.hpp"
#include "cloak/grid.hpp"
#include "cloak/scenario.hpp"

namespace cloak {

struct IncidentWave {
  double k = kPi;
  Vec d = vec2(1, 0);

  IncidentWave() = default;
  IncidentWave(double k_, Vec d_);
  static IncidentWave at_angle(double k, double theta);
  Complex at(const Vec& x) const;
};

enum class FieldKind { Scattered, Total, Incident };
std::string to_string(FieldKind k);

struct DiscreteField {
  std::shared_ptr<const Grid> grid;
  Eigen::VectorXcd values;  // cell (i, j) at grid->index(i, j)
  FieldKind kind = FieldKind::Scattered;
  double k = 0;

  Complex at(int i, int j) const { return values(grid->index(i, j)); }
};

// How sound-hard boundaries cut the grid. Staircase zeroes every link with
// exactly one cell centre inside; CutCell keeps the open fraction of each
// face and cell so curved boundaries converge at second order.
enum class HardTreatment { CutCell, Staircase };

struct SolveOptions {
  int subsamples = 4;  // per axis, for face and cell averages of the medium
  HardTreatment hard = HardTreatment::CutCell;
  double residual_tol = 1e-8;
};

// Rasterized coefficients. x-faces sit between cells (i, j) and (i+1, j),
// index j*(nx-1)+i; y-faces between (i, j) and (i, j+1), index j*nx+i;
// corners between the four cells (i..i+1, j..j+1), index j*(nx-1)+i.
struct Coefficients {
  int nx = 0, ny = 0;
  std::vector<double> sxx, syy, sxy;       // sigma components on faces / corners
  std::vector<double> apx, apy;            // open fraction of each face
  std::vector<Complex> q;                  // per cell
  std::vector<double> frac;                // open fraction of each cell
  std::vector<char> soft;                  // Dirichlet cells
  std::vector<Complex> source;             // -h V + flux of H, per cell
  bool anisotropic = false;

  long xf(int i, int j) const { return static_cast<long>(j) * (nx - 1) + i; }
  long yf(int i, int j) const { return static_cast<long>(j) * nx + i; }
  long cn(int i, int j) const { return static_cast<long>(j) * (nx - 1) + i; }
  long cell(int i, int j) const { return static_cast<long>(j) * nx + i; }
};

Coefficients rasterize(const Scenario& s, const Grid& g, const SolveOptions& opt = {});

struct SolveReport {
  long unknowns = 0;
  double residual = 0;
  double assemble_seconds = 0, factor_seconds = 0, solve_seconds = 0;
  std::vector<std::string> warnings;
};

// Assembles and factorizes once; each solve() reuses the factorization for
// another incident direction at the same wavenumber.
class HelmholtzSolver {
 public:
  HelmholtzSolver(const Scenario& s, std::shared_ptr<const Grid> grid, double k, const SolveOptions& opt = {});
  ~HelmholtzSolver();
  HelmholtzSolver(const HelmholtzSolver&) = delete;
  HelmholtzSolver& operator=(const HelmholtzSolver&) = delete;

  DiscreteField solve(const IncidentWave& inc);
  const SolveReport& report() const { return report_; }
  const Coefficients& coefficients() const { return coef_; }
  const Grid& grid() const { return *grid_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::shared_ptr<const Grid> grid_;
  Coefficients coef_;
  SolveReport report_;
  double k_;
  double residual_tol_ = 1e-8;
};

DiscreteField assemble_and_solve(const Scenario& s, const IncidentWave& inc, std::shared_ptr<const Grid> grid,
                                 SolveReport* report = nullptr, const SolveOptions& opt = {});

DiscreteField to_total(const DiscreteField& scattered, const IncidentWave& inc);

enum class Interpolation { Cubic, Bilinear };

// u^s and its radial derivative on a circle about the origin. The circle
// must clear the PML and the scatterer's contrast box by two cells.
CircleSamples extract_circle(const DiscreteField& field, double radius, int n_points,
                             const std::optional<BoundingBox>& scatterer = std::nullopt,
                             Interpolation interp = Interpolation::Cubic);

// Value and gradient at an arbitrary interior point.
struct PointSample {
  Complex u, dx, dy;
};
PointSample sample_field(const DiscreteField& field, const Vec& x, Interpolation interp = Interpolation::Cubic);

// Im sum q |u|^2 V over cells where Im q > 0.
double absorbed_power(const DiscreteField& total, const Coefficients& c);

}  // namespace cloak
