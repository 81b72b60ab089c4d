#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <gtest/gtest.h>

#include "fraclayer/analysis.hpp"
#include "fraclayer/energy.hpp"
#include "fraclayer/extension.hpp"
#include "fraclayer/quadrature.hpp"

using namespace fraclayer;

namespace {

Profile tanh_layer(double half_width, double h) {
  const Grid1D g = Grid1D::symmetric(half_width, h);
  Eigen::VectorXd v(g.n_nodes());
  for (int i = 0; i <= g.n_cells; ++i) v[i] = std::tanh(g.node(i));
  v[0] = -1;
  v[g.n_cells] = 1;
  return make_profile(g, v, -1, 1);
}

Profile constant_layer(double half_width, double c) {
  const Grid1D g = Grid1D::symmetric(half_width, 0.1);
  return make_profile(g, Eigen::VectorXd::Constant(g.n_nodes(), c), c, c);
}

// int_{B_R} int_{C B_R} |u*(x) - u*(y)|^2 |x - y|^{-2-2s}, polar coordinates about each x.
double cross_oracle(double R, const ExtensionParams& P, const Profile& layer) {
  const double s = P.order.s, varpi = P.varpi;
  const GaussRule& gr = gauss_unit(24);
  const GaussRule& gt = gauss_unit(48);
  const int n_phi = 96;
  boost::math::quadrature::exp_sinh<double> es;
  double acc = 0;
  for (int a = 0; a < gr.x.size(); ++a) {
    const double r = R * gr.x[a];
    for (int b = 0; b < gt.x.size(); ++b) {
      const double th = 2 * std::numbers::pi * gt.x[b];
      const double x1 = r * std::cos(th), x2 = r * std::sin(th);
      const double ux = interpolate(layer, varpi * x2);
      double inner = 0;
      for (int k = 0; k < n_phi; ++k) {
        const double phi = 2 * std::numbers::pi * (k + 0.5) / n_phi;
        const double c = std::cos(phi), sn = std::sin(phi);
        const double xd = x1 * c + x2 * sn;
        const double e = -xd + std::sqrt(xd * xd + R * R - r * r);
        inner += es.integrate(
            [&](double t) {
              const double rho = e + t;
              const double d = ux - interpolate(layer, varpi * (x2 + rho * sn));
              return d * d * std::pow(rho, -1 - 2 * s);
            },
            0.0, INFINITY, 1e-10);
      }
      acc += gr.w[a] * gt.w[b] * R * r * 2 * std::numbers::pi * inner * 2 * std::numbers::pi / n_phi;
    }
  }
  return acc;
}

}  // namespace

TEST(ExtensionParams, Plane) {
  const ExtensionParams P = make_extension_params(2, FracOrder(0.5));
  EXPECT_DOUBLE_EQ(P.omega_nm1, 2.0);
  EXPECT_NEAR(P.varpi, 0.5, 1e-10);
  EXPECT_NEAR(make_extension_params(3, FracOrder(0.5)).omega_nm1, std::numbers::pi, 1e-14);
}

TEST(ThetaWeight, Anchors) {
  for (double s : {0.25, 0.5, 0.75}) {
    const ExtensionParams P = make_extension_params(2, FracOrder(s));
    const double full = P.omega_nm1 / P.varpi;
    for (double R : {8.0, 16.0, 32.0}) {
      EXPECT_EQ(theta_weight(0, R, P), 0.0);
      EXPECT_NEAR(theta_weight(P.varpi * R, R, P), full, 1e-14 * full);
      EXPECT_NEAR(theta_weight(3 * P.varpi * R, R, P), full, 1e-14 * full);
      EXPECT_NEAR(theta_weight(1.3, R, P) / theta_weight(1.3, 2 * R, P), 4.0, 1e-12);
    }
  }
}

TEST(ThetaWeight, SupOverFixedFractionIsScaleFree) {
  // sup over |t| <= eta varpi R equals (omega/varpi)(1 - (1 - eta^2)^{n-1}) for every R.
  const ExtensionParams P = make_extension_params(2, FracOrder(0.75));
  const double eta = 0.5;
  for (double R : {10.0, 20.0, 40.0})
    EXPECT_NEAR(theta_weight(eta * P.varpi * R, R, P), (P.omega_nm1 / P.varpi) * eta * eta, 1e-14);
}

TEST(CrossEnergy, ConstantExtensionVanishes) {
  const ExtensionParams P = make_extension_params(2, FracOrder(0.75));
  EXPECT_LT(std::abs(extension_cross_energy(4, P, constant_layer(12, 1.0))), 1e-10);
}

TEST(CrossEnergy, MatchesPolarQuadrature) {
  for (double s : {0.25, 0.75}) {
    const ExtensionParams P = make_extension_params(2, FracOrder(s));
    const Profile layer = tanh_layer(12, 0.02);
    const double R = 2;
    const double got = extension_cross_energy(R, P, layer);
    const double ref = cross_oracle(R, P, layer);
    EXPECT_NEAR(got, ref, 2e-3 * ref) << "s=" << s;
  }
}

TEST(CrossEnergy, CoverageRequired) {
  const ExtensionParams P = make_extension_params(2, FracOrder(0.75));
  EXPECT_THROW(extension_cross_energy(8, P, tanh_layer(10, 0.1)), std::domain_error);
  EXPECT_THROW(extension_cross_energy(8, make_extension_params(3, FracOrder(0.75)), tanh_layer(40, 0.1)),
               std::domain_error);
}

TEST(ThetaCorrections, Identities) {
  const ExtensionParams P = make_extension_params(2, FracOrder(0.75));
  const Profile layer = tanh_layer(25, 0.05);
  const double R = 8;
  const ThetaCorrections th = theta_corrections(R, P, layer);
  EXPECT_GT(th.theta1, 0);
  EXPECT_GT(th.theta3, 0);
  EXPECT_NEAR(th.theta2, 0.5 * th.cross / R + th.theta1, 1e-12 * th.theta2);
  EXPECT_NEAR(th.scaled_theta4_proxy, th.theta2 + th.theta3, 1e-12 * th.theta2);
  EXPECT_NEAR(th.cross, extension_cross_energy(R, P, layer), 1e-12 * th.cross);

  const ThetaCorrections flat = theta_corrections(R, P, constant_layer(25, 1.0));
  EXPECT_EQ(flat.theta1, 0.0);
  EXPECT_EQ(flat.theta3, 0.0);
}

TEST(ThetaCorrections, Theta3ByHand) {
  // theta_3 = int alpha(t) W(u(t)) dt with alpha = (omega/varpi) t^2 / (varpi R)^2 for n = 2.
  // The nodal rule is second order in h.
  const ExtensionParams P = make_extension_params(2, FracOrder(0.75));
  const double R = 10, T = P.varpi * R;
  const auto W = PotentialSpec::quartic();
  double prev_err = 0;
  for (double h : {0.05, 0.025}) {
    const Profile layer = tanh_layer(30, h);
    const double ref = integrate(
        [&](double t) { return theta_weight(t, R, P) * potential_eval(W, interpolate(layer, t), 0); }, -T, T, {0.0},
        1e-12);
    const double err = std::abs(theta_corrections(R, P, layer).theta3 - ref);
    EXPECT_LT(err, 2e-3 * ref) << "h=" << h;
    if (prev_err > 0) EXPECT_LT(err, 0.3 * prev_err);
    prev_err = err;
  }
}

TEST(ShellEnergy, ConstantAtWellVanishes) {
  const ExtensionParams P = make_extension_params(2, FracOrder(0.75));
  EXPECT_LT(std::abs(shell_energy(8, 0.1, P, constant_layer(12, 1.0))), 1e-10);
}

TEST(ShellEnergy, ThinShellVanishes) {
  const ExtensionParams P = make_extension_params(2, FracOrder(0.75));
  const Profile layer = tanh_layer(12, 0.05);
  double prev = shell_energy(8, 0.4, P, layer);
  for (double d : {0.1, 0.01, 0.001}) {
    const double v = shell_energy(8, d, P, layer);
    EXPECT_GT(v, 0);
    EXPECT_LT(v, prev);
    prev = v;
  }
  EXPECT_LT(prev, 0.01 * shell_energy(8, 0.4, P, layer));
}

TEST(ShellEnergy, LocalPartMatchesStripFormula) {
  // With s = 3/4 the cross part is positive, so the shell energy exceeds the local part computed by hand.
  const FracOrder order(0.75);
  const ExtensionParams P = make_extension_params(2, order);
  const Profile layer = tanh_layer(12, 0.05);
  const double R = 8, delta = 0.2, rho = (1 - delta) * R;
  Profile dens = layer;
  dens.values = seminorm_density_all(layer, order);
  const auto W = PotentialSpec::quartic();
  auto chord = [](double x2, double r) { return x2 * x2 < r * r ? 2 * std::sqrt(r * r - x2 * x2) : 0.0; };
  const double local = integrate(
      [&](double x2) {
        const double t = P.varpi * x2;
        const double f = 0.5 * interpolate(dens, t) + potential_eval(W, interpolate(layer, t), 0);
        return f * (chord(x2, R) - chord(x2, rho));
      },
      -R, R, {-rho, 0.0, rho}, 1e-10);
  const double F = shell_energy(R, delta, P, layer);
  EXPECT_GT(F, local);
  EXPECT_LT(F, 3 * local);
}

TEST(ShellEnergy, Errors) {
  const ExtensionParams P = make_extension_params(2, FracOrder(0.75));
  const Profile layer = tanh_layer(12, 0.1);
  EXPECT_THROW(shell_energy(1, 0.1, P, layer), std::domain_error);
  EXPECT_THROW(shell_energy(8, 0.5, P, layer), std::domain_error);
  EXPECT_THROW(shell_energy(40, 0.1, P, layer), std::domain_error);
}
