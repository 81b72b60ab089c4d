#include "fraclayer/grid.hpp"

#include <cmath>
#include <string>

#include "fraclayer/errors.hpp"

namespace fraclayer {

Grid1D::Grid1D(double a_, double b_, int n) : a(a_), b(b_), n_cells(n) {
  if (!(b > a) || n < 1 || !std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument("Grid1D: need b > a and n_cells >= 1");
}

Grid1D Grid1D::symmetric(double R, double h) {
  if (!(R > 0) || !(h > 0)) throw std::invalid_argument("Grid1D::symmetric: R and h must be positive");
  const int n = static_cast<int>(std::lround(2.0 * R / h));
  return Grid1D(-R, R, std::max(n, 1));
}

bool Profile::is_layer() const {
  return left == -1.0 && right == 1.0 && values.minCoeff() >= -1.0 && values.maxCoeff() <= 1.0;
}

Profile make_profile(const Grid1D& grid, Eigen::VectorXd values, double left, double right) {
  if (values.size() != grid.n_nodes())
    throw shape_error("make_profile: expected " + std::to_string(grid.n_nodes()) + " values, got " +
                      std::to_string(values.size()));
  return Profile{grid, std::move(values), left, right};
}

double interpolate(const Profile& p, double x) {
  const Grid1D& g = p.grid;
  if (x <= g.a) return x == g.a ? p.values[0] : p.left;
  if (x >= g.b) return x == g.b ? p.values[g.n_cells] : p.right;
  const double t = (x - g.a) / g.h();
  int i = static_cast<int>(std::floor(t));
  if (i >= g.n_cells) i = g.n_cells - 1;
  const double f = t - i;
  if (f == 0.0) return p.values[i];
  return (1.0 - f) * p.values[i] + f * p.values[i + 1];
}

double zero_crossing(const Profile& p) {
  const auto& v = p.values;
  const Grid1D& g = p.grid;
  for (int i = 0; i <= g.n_cells; ++i) {
    if (v[i] == 0.0) return g.node(i);
    if (i < g.n_cells && ((v[i] < 0.0 && v[i + 1] > 0.0) || (v[i] > 0.0 && v[i + 1] < 0.0))) {
      const double f = v[i] / (v[i] - v[i + 1]);
      return g.node(i) + f * g.h();
    }
  }
  throw not_a_layer_error("zero_crossing: profile has no sign change");
}

Profile clamp(const Profile& p) {
  Profile q = p;
  q.values = p.values.cwiseMax(-1.0).cwiseMin(1.0);
  return q;
}

}  // namespace fraclayer
