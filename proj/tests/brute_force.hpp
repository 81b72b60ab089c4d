// Independent quadrature of the continuous energy for small grids.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fraclayer/grid.hpp"
#include "fraclayer/kernel.hpp"
#include "fraclayer/potential.hpp"

namespace bf {

using boost::math::quadrature::gauss_kronrod;
using boost::math::quadrature::tanh_sinh;

// u(x+t) - u(x) for a <= x < x+t <= b, summed cell by cell so that small t keeps full precision.
inline double increment(const fraclayer::Profile& p, double x, double t) {
  const auto& g = p.grid;
  const double h = g.h();
  int c = std::min(static_cast<int>(std::floor((x - g.a) / h)), g.n_cells - 1);
  double left = t, acc = 0.0;
  while (left > 0 && c < g.n_cells) {
    const double slope = (p.values[c + 1] - p.values[c]) / h;
    const double room = g.node(c + 1) - std::max(x, g.node(c));
    const double step = std::min(left, std::max(room, 0.0));
    acc += slope * step;
    left -= step;
    ++c;
  }
  return acc;
}

// D(t) / t^2 with D(t) = int_a^{b-t} (u(x+t) - u(x))^2 dx, piecewise quadratic in x.
inline double diff_sq(const fraclayer::Profile& p, double t) {
  const auto& g = p.grid;
  std::vector<double> pts{g.a, g.b - t};
  for (int i = 0; i <= g.n_cells; ++i) {
    pts.push_back(g.node(i));
    pts.push_back(g.node(i) - t);
  }
  std::sort(pts.begin(), pts.end());
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double lo = std::max(pts[k], g.a), hi = std::min(pts[k + 1], g.b - t);
    if (!(hi > lo)) continue;
    acc += gauss_kronrod<double, 15>::integrate(
        [&](double x) {
          const double d = increment(p, x, t) / t;
          return d * d;
        },
        lo, hi, 0);
  }
  return acc;
}

// (1/2) int_{Omega x Omega} |u(x)-u(y)|^2 |x-y|^{-1-2s} = int_0^L t^{1-2s} (D(t)/t^2) dt.
inline double in_in(const fraclayer::Profile& p, double s) {
  const auto& g = p.grid;
  tanh_sinh<double> ts;
  double acc = 0.0;
  for (int k = 0; k < g.n_cells; ++k) {
    const double lo = k * g.h(), hi = (k + 1) * g.h();
    acc += ts.integrate(
        [&](double t) {
          const double D = t <= 0 ? 0.0 : diff_sq(p, t);
          return D == 0.0 ? 0.0 : D * std::pow(t, 1 - 2 * s);
        }, lo, hi,
        1e-12);
  }
  return acc;
}

// int_Omega (u-L)^2 (x-a)^{-2s}/(2s) + (u-R)^2 (b-x)^{-2s}/(2s).
inline double in_out(const fraclayer::Profile& p, double s) {
  const auto& g = p.grid;
  tanh_sinh<double> ts;
  double acc = 0.0;
  for (int k = 0; k < g.n_cells; ++k) {
    const double lo = g.node(k), hi = g.node(k + 1);
    acc += ts.integrate(
        [&](double x, double xc) {
          const double u = fraclayer::interpolate(p, x);
          double dl = x - g.a, dr = g.b - x;
          // Exact distances at the outer endpoints.
          if (k == 0 && xc < 0) dl = -xc;
          if (k == g.n_cells - 1 && xc > 0) dr = xc;
          double v = 0.0;
          if (u != p.left) v += (u - p.left) * (u - p.left) * std::pow(dl, -2 * s);
          if (u != p.right) v += (u - p.right) * (u - p.right) * std::pow(dr, -2 * s);
          return v / (2 * s);
        },
        lo, hi, 1e-12);
  }
  return acc;
}

inline double potential(const fraclayer::Profile& p, const fraclayer::PotentialSpec& W) {
  const auto& g = p.grid;
  double acc = 0.5 * (fraclayer::potential_eval(W, p.values[0], 0) +
                      fraclayer::potential_eval(W, p.values[g.n_cells], 0));
  for (int i = 1; i < g.n_cells; ++i) acc += fraclayer::potential_eval(W, p.values[i], 0);
  return acc * g.h();
}

// Both exterior strips [-l, 0] x [R, inf) and [R, R + l] x (-inf, -l] of 4 |x - y|^{-1-2s}.
inline double strips(double R, double ell, double s) {
  boost::math::quadrature::exp_sinh<double> es;
  auto inner = [&](double d) {
    return es.integrate([&](double t) { return 4 * std::pow(d + t, -1 - 2 * s); }, 0.0, INFINITY, 1e-14);
  };
  using GK = gauss_kronrod<double, 61>;
  const double first = GK::integrate([&](double x) { return inner(R - x); }, -ell, 0.0, 20, 1e-14);
  const double second = GK::integrate([&](double x) { return inner(x + ell); }, R, R + ell, 20, 1e-14);
  return first + second;
}

// Smooth layer-like profile on [-1.5, 1.5] with random width, center and a small bump.
inline fraclayer::Profile smooth_profile(std::mt19937_64& rng, int n, fraclayer::FracOrder order) {
  std::uniform_real_distribution<double> unif(0, 1);
  const double width = 0.3 + unif(rng), center = unif(rng) - 0.5, bump = 0.3 * unif(rng);
  const fraclayer::Grid1D g(-1.5, 1.5, n);
  Eigen::VectorXd v(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double x = g.node(i);
    v[i] = std::clamp(std::tanh((x - center) / width) + bump * std::exp(-x * x * 4), -1.0, 1.0);
  }
  if (order.pinned()) {
    v[0] = -1;
    v[n] = 1;
  }
  return fraclayer::make_profile(g, v, -1, 1);
}

}  // namespace bf
