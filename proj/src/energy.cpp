#include "fraclayer/energy.hpp"

#include <cmath>

#include "fraclayer/errors.hpp"

namespace fraclayer {

double potential_term(const Grid1D& g, const Eigen::VectorXd& u, const PotentialSpec& W) {
  const int N = g.n_cells;
  double acc = 0.5 * (potential_eval(W, u[0], 0) + potential_eval(W, u[N], 0));
  for (int i = 1; i < N; ++i) acc += potential_eval(W, u[i], 0);
  return g.h() * acc;
}

EnergyBreakdown energy(const InteractionForm& form, const Eigen::VectorXd& u, const PotentialSpec& W) {
  EnergyBreakdown e;
  form.kinetic(u, e.k_in_in, e.k_in_out, nullptr);
  e.potential = potential_term(form.grid(), u, W);
  e.total = e.k_in_in + e.k_in_out + e.potential;
  return e;
}

EnergyBreakdown energy(const Profile& p, FracOrder order, const PotentialSpec& W) {
  InteractionForm form(p.grid, order, p.left, p.right);
  return energy(form, p.values, W);
}

Eigen::VectorXd energy_gradient(const InteractionForm& form, const Eigen::VectorXd& u,
                                const PotentialSpec& W) {
  Eigen::VectorXd g = form.kinetic_gradient(u);
  const int N = form.n();
  const double h = form.grid().h();
  for (int i = 0; i <= N; ++i) {
    const double w = (i == 0 || i == N) ? 0.5 : 1.0;
    g[i] += h * w * potential_eval(W, u[i], 1);
  }
  if (form.order().pinned()) {
    g[0] = 0.0;
    g[N] = 0.0;
  }
  return g;
}

Eigen::VectorXd energy_gradient(const Profile& p, FracOrder order, const PotentialSpec& W) {
  InteractionForm form(p.grid, order, p.left, p.right);
  return energy_gradient(form, p.values, W);
}

double regime_scale(double R, FracOrder order) {
  switch (order.regime()) {
    case Regime::sub: return std::pow(R, 2 * order.s - 1);
    case Regime::critical:
      if (!(R > 1)) throw std::domain_error("regime_scale: critical regime needs R > 1");
      return 1.0 / std::log(R);
    default: return 1.0;
  }
}

double scaled_energy_G(const Profile& p, FracOrder order, const PotentialSpec& W) {
  const double R = 0.5 * (p.grid.b - p.grid.a);
  if (std::abs(p.grid.a + p.grid.b) > 1e-12 * R)
    throw precondition_error("scaled_energy_G: grid must be symmetric around 0");
  const double scale = regime_scale(R, order);
  return energy(p, order, W).total * scale;
}

}  // namespace fraclayer
