#include "fraclayer/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace fraclayer {

namespace {

// Golub-Welsch on the Legendre Jacobi matrix, then one Newton polish per node.
GaussRule build_rule(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = es.eigenvalues()[i];
    double dp = 1.0;
    for (int it = 0; it < 3; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double pn = n == 1 ? x : p1;
      double pm = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pm) / (x * x - 1.0);
      x -= pn / dp;
    }
    r.x[i] = 0.5 * (x + 1.0);
    r.w[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

}  // namespace

const GaussRule& gauss_unit(int order) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
  return it->second;
}

double pow2m1_over(double p) { return powint(p, 1.0, 2.0); }

double powint(double p, double t1, double t2) {
  const double L = std::log(t2 / t1);
  if (std::abs(p) < 1e-9) return std::pow(t1, p) * L * (1.0 + 0.5 * p * L);
  return std::pow(t1, p) * std::expm1(p * L) / p;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const std::vector<double>& breaks, double rel_tol) {
  std::vector<double> pts{a};
  for (double c : breaks)
    if (c > a && c < b) pts.push_back(c);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    if (pts[k + 1] <= pts[k]) continue;
    total += boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, pts[k], pts[k + 1], 25,
                                                                           rel_tol);
  }
  return total;
}

double integrate_graded(const std::function<double(double)>& f, double a, double b, int panels,
                        double q, int order) {
  const GaussRule& g = gauss_unit(order);
  // Panel edges a + (b-a) * q^(panels-k), first panel [a, a + (b-a) q^panels].
  std::vector<double> edges{a};
  for (int k = panels; k >= 0; --k) edges.push_back(a + (b - a) * std::pow(q, k));
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double lo = edges[k], len = edges[k + 1] - edges[k];
    double part = 0.0;
    for (int i = 0; i < g.x.size(); ++i) part += g.w[i] * f(lo + len * g.x[i]);
    total += part * len;
  }
  return total;
}

double halton(std::uint64_t index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

}  // namespace fraclayer
