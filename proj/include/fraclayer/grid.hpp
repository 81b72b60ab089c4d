#pragma once

#include <Eigen/Core>

namespace fraclayer {

struct Grid1D {
  double a = 0.0;
  double b = 1.0;
  int n_cells = 1;

  Grid1D() = default;
  Grid1D(double a, double b, int n_cells);

  double h() const { return (b - a) / n_cells; }
  double node(int i) const { return a + i * h(); }
  int n_nodes() const { return n_cells + 1; }

  /// Symmetric window [-R, R] with spacing as close to h as an integer cell count allows.
  static Grid1D symmetric(double R, double h);
  Grid1D shifted(double t) const { return Grid1D(a + t, b + t, n_cells); }
};

/// P1 function on a uniform grid, constant outside [a, b].
struct Profile {
  Grid1D grid;
  Eigen::VectorXd values;
  double left = -1.0;
  double right = 1.0;

  int n_cells() const { return grid.n_cells; }
  bool is_layer() const;
};

Profile make_profile(const Grid1D& grid, Eigen::VectorXd values, double left, double right);

double interpolate(const Profile& p, double x);

/// Leftmost zero of the interpolant.
double zero_crossing(const Profile& p);

Profile clamp(const Profile& p);

}  // namespace fraclayer
