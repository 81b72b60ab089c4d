#pragma once

#include <utility>
#include <vector>

#include "fraclayer/grid.hpp"
#include "fraclayer/kernel.hpp"

namespace fraclayer {

struct ScalingFit {
  enum class Kind { power, log, constant };
  Kind regime = Kind::power;
  double exponent = 0;   // power: slope of log F against log R
  double prefactor = 0;  // power: C in C R^p; log: slope in log R; constant: F(R_max)
  double intercept = 0;  // log: F at R = 1
  std::vector<double> R_values;
  std::vector<double> energies;
  double residual = 0;        // max relative deviation of the model from the data
  double tail_increment = 0;  // constant: F(R_max) - F(R_max / 2)
};

/// Least squares per regime: log-log for s < 1/2, F against log R at s = 1/2,
/// saturation at the largest window for s > 1/2.
ScalingFit fit_scaling(const std::vector<double>& R_values, const std::vector<double>& energies,
                       FracOrder order);

enum class DecayQuantity { one_minus_u, one_plus_u, abs_du };

struct DecayFit {
  DecayQuantity quantity = DecayQuantity::one_minus_u;
  double slope = 0;
  double intercept = 0;
  std::pair<double, double> window{0, 0};
  double r_squared = 0;
  int points = 0;
};

/// Log-log fit of a tail quantity over |x| in [f_lo R, f_hi R], R the half width of the window.
DecayFit fit_decay(const Profile& p, DecayQuantity quantity, std::pair<double, double> window_fractions = {0.2, 0.6});

/// (int_{R^{n-1}} (1 + |z|^2)^{-(n+2s)/2} dz)^{-1/(2s)}.
double compute_varpi(int n, FracOrder order);

/// Bound on the energy picked up by widening [0, R] by ell on both sides.
double gamma_ell(double R, double ell, FracOrder order);

/// 1 + R^{1-2s}, 1 + log R or 1.
double lambda_shape(double R, FracOrder order);

/// measured_energy <= C_s lambda_shape(R).
bool lambda_bound_check(double R, FracOrder order, double measured_energy, double C_s);

/// C_s that makes the bound tight at (R, energy).
double calibrate_C_s(double R, FracOrder order, double energy);

}  // namespace fraclayer
