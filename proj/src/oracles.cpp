#include "fraclayer/kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "fraclayer/parallel.hpp"
#include "fraclayer/quadrature.hpp"

namespace fraclayer {

namespace {

constexpr int kShifts = 16;

// |S^{n-1}|.
double sphere_measure(int n) { return n == 1 ? 2.0 : 2.0 * std::numbers::pi; }

double paper_bound(double R, int n, FracOrder order) {
  const double s = order.s;
  const double w2 = sphere_measure(n) * sphere_measure(n);
  switch (order.regime()) {
    case Regime::sub:
      return 3.0 * w2 * std::pow(R, n - 2 * s) / (2 * s * (1 - 2 * s));
    case Regime::critical:
      return w2 * std::pow(R, n - 1) * (std::pow(2.0, n) + std::log(3 * R));
    case Regime::super:
      break;
  }
  return w2 * std::pow(R, n - 1) / (2 * s - 1);
}

// Distance from a point at radius r along direction angle phi to the circle of radius rho.
double exit_distance(double r, double phi, double rho) {
  const double b = r * std::cos(phi);
  return -b + std::sqrt(std::max(0.0, b * b + rho * rho - r * r));
}

// int over the target set of |x - y|^{-2-2s} dy for |x| = r, by the angular trapezoid.
double inner_2d(double r, double R, FracOrder order) {
  const double s = order.s;
  const bool sub = order.regime() == Regime::sub;
  int n_ang = 128;
  if (sub) {
    const double d = std::max(R - r, 1e-12);
    const double want = 64.0 * std::sqrt(R / d);
    while (n_ang < want && n_ang < 8192) n_ang *= 2;
  }
  const double dphi = 2 * std::numbers::pi / n_ang;
  double acc = 0;
  for (int k = 0; k < n_ang; ++k) {
    const double phi = k * dphi;
    if (sub)
      acc += std::pow(exit_distance(r, phi, R), -2 * s) - std::pow(exit_distance(r, phi, 2 * R), -2 * s);
    else
      acc += std::pow(exit_distance(r, phi, R + 1), -2 * s);
  }
  return acc * dphi / (2 * s);
}

}  // namespace

ShellIntegral shell_kernel_integral(double R, int n, FracOrder order, long samples, unsigned seed) {
  if (!(R >= 1)) throw std::domain_error("shell_kernel_integral: R must be >= 1");
  if (n != 1 && n != 2) throw std::domain_error("shell_kernel_integral: n must be 1 or 2");
  const double s = order.s;
  ShellIntegral out;
  out.paper_bound = paper_bound(R, n, order);
  if (n == 1) {
    if (order.regime() == Regime::sub)
      out.value = 2 * (std::pow(2 * R, 1 - 2 * s) - std::pow(3 * R, 1 - 2 * s) + std::pow(R, 1 - 2 * s)) /
                  (2 * s * (1 - 2 * s));
    else
      out.value = 2 * powint(1 - 2 * s, 1.0, 2 * R + 1) / (2 * s);
    return out;
  }

  if (samples < kShifts) throw std::domain_error("shell_kernel_integral: too few samples");
  const long per_shift = samples / kShifts;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::array<double, 2>> shifts(kShifts);
  for (auto& sh : shifts) sh = {unif(rng), unif(rng)};

  const double area = std::numbers::pi * R * R;
  std::vector<double> means(kShifts);
  parallel_for(kShifts, [&](int k) {
    double acc = 0;
    for (long i = 1; i <= per_shift; ++i) {
      double u1 = halton(i, 2) + shifts[k][0];
      double u2 = halton(i, 3) + shifts[k][1];
      u1 -= std::floor(u1);
      u2 -= std::floor(u2);
      const double x1 = R * std::sqrt(u1) * std::cos(2 * std::numbers::pi * u2);
      const double x2 = R * std::sqrt(u1) * std::sin(2 * std::numbers::pi * u2);
      acc += inner_2d(std::hypot(x1, x2), R, order);
    }
    means[k] = area * acc / per_shift;
  });

  double mean = 0;
  for (double m : means) mean += m;
  mean /= kShifts;
  double var = 0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= (kShifts - 1);
  out.value = mean;
  out.error = 3 * std::sqrt(var / kShifts);
  return out;
}

double companion_integral(double ell, FracOrder order) {
  if (!(ell > 0)) throw std::domain_error("companion_integral: ell must be positive");
  const double s = order.s;
  if (order.critical()) return 8 * std::log(3.0);
  return (4 / s) * powint(1 - 2 * s, ell, 3 * ell);
}

}  // namespace fraclayer
