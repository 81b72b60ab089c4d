#pragma once

#include <Eigen/Core>

#include "fraclayer/grid.hpp"
#include "fraclayer/kernel.hpp"
#include "fraclayer/potential.hpp"

namespace fraclayer {

struct EnergyBreakdown {
  double k_in_in = 0;
  double k_in_out = 0;
  double potential = 0;
  double total = 0;
};

/// Composite trapezoid of W over the nodes.
double potential_term(const Grid1D& g, const Eigen::VectorXd& u, const PotentialSpec& W);

EnergyBreakdown energy(const Profile& p, FracOrder order, const PotentialSpec& W);
/// Same, reusing an assembled form (grid and exterior taken from the form).
EnergyBreakdown energy(const InteractionForm& form, const Eigen::VectorXd& u, const PotentialSpec& W);

Eigen::VectorXd energy_gradient(const Profile& p, FracOrder order, const PotentialSpec& W);
Eigen::VectorXd energy_gradient(const InteractionForm& form, const Eigen::VectorXd& u,
                                const PotentialSpec& W);

/// F R^{2s-1}, F / log R or F, for a window [-R, R].
double scaled_energy_G(const Profile& p, FracOrder order,
                       const PotentialSpec& W = PotentialSpec::quartic());

/// R^{2s-1}, 1 / log R or 1.
double regime_scale(double R, FracOrder order);

}  // namespace fraclayer
