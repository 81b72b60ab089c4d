#pragma once

#include "fraclayer/grid.hpp"
#include "fraclayer/kernel.hpp"
#include "fraclayer/potential.hpp"

namespace fraclayer {

/// Data of the extension u*(x) = u(varpi x_n) of a 1-D layer to R^n.
struct ExtensionParams {
  int n = 2;
  FracOrder order;
  double varpi = 0;
  double omega_nm1 = 0;  // Lebesgue measure of the unit ball in R^{n-1}
};

ExtensionParams make_extension_params(int n, FracOrder order);

/// (omega/varpi) (1 - (1 - t^2 / (varpi R)^2)^{n-1}), saturating at omega/varpi for |t| >= varpi R.
double theta_weight(double t, double R, const ExtensionParams& params);

struct ThetaCorrections {
  double theta1 = 0;
  double theta2 = 0;
  double theta3 = 0;
  double cross = 0;  // int_{B_R} int_{C B_R} of the extension
  double scaled_theta4_proxy = 0;
};

/// theta_1, theta_3 and lambda_R (theta_2 + theta_3) with theta_2 = R^{1-n} cross / 2 + theta_1.
ThetaCorrections theta_corrections(double R, const ExtensionParams& params, const Profile& layer,
                                   const PotentialSpec& W = PotentialSpec::quartic());

/// int_{B_R} int_{C B_R} |u*(x) - u*(y)|^2 |x - y|^{-2-2s} dx dy in the plane.
double extension_cross_energy(double R, const ExtensionParams& params, const Profile& layer);

/// F(u*, B_R \ B_{(1-delta) R}) in the plane.
double shell_energy(double R, double delta, const ExtensionParams& params, const Profile& layer,
                    const PotentialSpec& W = PotentialSpec::quartic());

}  // namespace fraclayer
