#include "fraclayer/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fraclayer/errors.hpp"
#include "fraclayer/quadrature.hpp"
#include "fraclayer/solver.hpp"

namespace fraclayer {

namespace {

struct Line {
  double slope = 0, intercept = 0, r_squared = 0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  Line l;
  l.slope = sxy / sxx;
  l.intercept = my - l.slope * mx;
  l.r_squared = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return l;
}

}  // namespace

ScalingFit fit_scaling(const std::vector<double>& R_values, const std::vector<double>& energies,
                       FracOrder order) {
  if (R_values.size() != energies.size()) throw fit_error("fit_scaling: length mismatch");
  if (R_values.size() < 3) throw fit_error("fit_scaling: need at least 3 points");
  for (size_t i = 1; i < R_values.size(); ++i)
    if (!(R_values[i] > R_values[i - 1])) throw fit_error("fit_scaling: R values must increase");

  ScalingFit f;
  f.R_values = R_values;
  f.energies = energies;
  const size_t m = R_values.size();
  std::vector<double> lr(m), y(m);
  for (size_t i = 0; i < m; ++i) lr[i] = std::log(R_values[i]);

  switch (order.regime()) {
    case Regime::sub: {
      f.regime = ScalingFit::Kind::power;
      for (size_t i = 0; i < m; ++i) {
        if (!(energies[i] > 0)) throw fit_error("fit_scaling: energies must be positive");
        y[i] = std::log(energies[i]);
      }
      const Line l = least_squares(lr, y);
      f.exponent = l.slope;
      f.prefactor = std::exp(l.intercept);
      for (size_t i = 0; i < m; ++i) {
        const double model = f.prefactor * std::pow(R_values[i], f.exponent);
        f.residual = std::max(f.residual, std::abs(model - energies[i]) / std::abs(energies[i]));
      }
      break;
    }
    case Regime::critical: {
      f.regime = ScalingFit::Kind::log;
      const Line l = least_squares(lr, energies);
      f.prefactor = l.slope;
      f.intercept = l.intercept;
      for (size_t i = 0; i < m; ++i) {
        const double model = l.intercept + l.slope * lr[i];
        f.residual = std::max(f.residual, std::abs(model - energies[i]) / std::abs(energies[i]));
      }
      break;
    }
    case Regime::super: {
      f.regime = ScalingFit::Kind::constant;
      const double Rmax = R_values.back();
      f.prefactor = energies.back();
      size_t half = 0;
      for (size_t i = 0; i + 1 < m; ++i)
        if (R_values[i] <= 0.5 * Rmax * (1 + 1e-12)) half = i;
      f.tail_increment = energies.back() - energies[half];
      for (size_t i = 0; i < m; ++i)
        f.residual = std::max(f.residual, std::abs(f.prefactor - energies[i]) / std::abs(energies[i]));
      break;
    }
  }
  return f;
}

DecayFit fit_decay(const Profile& p, DecayQuantity quantity, std::pair<double, double> window_fractions) {
  const auto [f_lo, f_hi] = window_fractions;
  if (!(f_lo > 0 && f_lo < f_hi && f_hi <= 1)) throw precondition_error("fit_decay: bad window fractions");
  if (!p.is_layer()) throw precondition_error("fit_decay: not an admissible layer");
  if (monotonicity_defect(p) < -1e-8) throw precondition_error("fit_decay: profile is not monotone");
  const double h = p.grid.h();
  if (std::abs(zero_crossing(p)) > 0.5 * h + 1e-12) throw precondition_error("fit_decay: profile is not normalized");

  const double R = 0.5 * (p.grid.b - p.grid.a);
  const double lo = f_lo * R, hi = f_hi * R;
  if (hi > std::min(-p.grid.a, p.grid.b)) throw precondition_error("fit_decay: window exceeds the grid");

  DecayFit out;
  out.quantity = quantity;
  out.window = {lo, hi};
  std::vector<double> lx, ly;
  const auto& u = p.values;
  for (int i = 1; i < p.n_cells(); ++i) {
    const double x = p.grid.node(i);
    const double ax = std::abs(x);
    if (ax < lo - 1e-9 * R || ax > hi + 1e-9 * R) continue;
    double q = 0;
    switch (quantity) {
      case DecayQuantity::one_minus_u:
        if (x < 0) continue;
        q = 1 - u[i];
        break;
      case DecayQuantity::one_plus_u:
        if (x > 0) continue;
        q = 1 + u[i];
        break;
      case DecayQuantity::abs_du:
        if (x < 0) continue;
        q = std::abs(u[i + 1] - u[i - 1]) / (2 * h);
        break;
    }
    if (!(q >= 1e-14)) continue;
    lx.push_back(std::log(ax));
    ly.push_back(std::log(q));
  }
  out.points = static_cast<int>(lx.size());
  if (out.points < 8) throw fit_error("fit_decay: fewer than 8 usable points");
  const Line l = least_squares(lx, ly);
  out.slope = l.slope;
  out.intercept = l.intercept;
  out.r_squared = l.r_squared;
  return out;
}

double compute_varpi(int n, FracOrder order) {
  if (n < 2) throw precondition_error("compute_varpi: n must be >= 2");
  const double s = order.s;
  const double q = 0.5 * (n + 2 * s);
  const double m = n - 1;
  const double sphere = 2 * std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m);
  const double L = 1e3;
  const double body = integrate([&](double r) { return std::pow(r, n - 2) * std::pow(1 + r * r, -q); }, 0.0, L,
                                {1.0, 10.0, 100.0}, 1e-14);
  // r^{n-2} (1 + r^2)^{-q} = sum_k binom(-q, k) r^{-2-2s-2k}
  double tail = 0, coef = 1;
  for (int k = 0; k < 6; ++k) {
    const double p = -2 - 2 * s - 2 * k;
    tail += coef * std::pow(L, p + 1) / (-p - 1);
    coef *= (-q - k) / (k + 1);
  }
  return std::pow(sphere * (body + tail), -1 / (2 * s));
}

double gamma_ell(double R, double ell, FracOrder order) {
  if (!(R > 0) || !(ell > 0)) throw precondition_error("gamma_ell: R and ell must be positive");
  const double s = order.s;
  if (order.critical()) return 4 * std::log1p(2 * ell / R);
  return (2 / (s * (1 - 2 * s))) * (std::pow(R + 2 * ell, 1 - 2 * s) - std::pow(R, 1 - 2 * s));
}

double lambda_shape(double R, FracOrder order) {
  switch (order.regime()) {
    case Regime::sub:
      return 1 + std::pow(R, 1 - 2 * order.s);
    case Regime::critical:
      return 1 + std::log(R);
    case Regime::super:
      break;
  }
  return 1.0;
}

bool lambda_bound_check(double R, FracOrder order, double measured_energy, double C_s) {
  return measured_energy <= C_s * lambda_shape(R, order);
}

double calibrate_C_s(double R, FracOrder order, double energy) { return energy / lambda_shape(R, order); }

}  // namespace fraclayer
