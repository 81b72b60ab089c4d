#include "fraclayer/properties.hpp"

#include <algorithm>
#include <cmath>

#include "fraclayer/energy.hpp"
#include "fraclayer/solver.hpp"

namespace fraclayer {

namespace {

int draw_cells(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

void record(PropertyResult& r, double defect, double tol) {
  ++r.trials;
  r.worst = std::max(r.worst, defect);
  if (defect > tol) ++r.violations;
}

double total(const Profile& p, FracOrder order, const PotentialSpec& W) { return energy(p, order, W).total; }

}  // namespace

Profile random_profile(std::mt19937_64& rng, int n_cells, FracOrder order, double lo, double hi) {
  std::uniform_real_distribution<double> unif(lo, hi);
  Eigen::VectorXd v(n_cells + 1);
  for (auto& x : v) x = unif(rng);
  if (order.pinned()) {
    v[0] = -1.0;
    v[n_cells] = 1.0;
  }
  return make_profile(Grid1D(-2.0, 2.0, n_cells), v, -1.0, 1.0);
}

std::pair<Profile, Profile> random_crossing_pair(std::mt19937_64& rng, int n_cells, FracOrder order) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Profile u = random_profile(rng, n_cells, order);
  Eigen::VectorXd v = u.values;
  int sign = unif(rng) < 0.5 ? -1 : 1;
  for (int i = 0; i <= n_cells; ++i) {
    if (unif(rng) < 0.25) {
      sign = -sign;
      continue;
    }
    const double room = sign > 0 ? 1.0 - u.values[i] : u.values[i] + 1.0;
    v[i] = u.values[i] + sign * unif(rng) * room;
  }
  if (order.pinned()) {
    v[0] = -1.0;
    v[n_cells] = 1.0;
  }
  return {u, make_profile(u.grid, v, -1.0, 1.0)};
}

PropertyResult check_rearrangement(FracOrder order, const PotentialSpec& W, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PropertyResult r{"rearrangement_inequality"};
  for (int t = 0; t < trials; ++t) {
    const auto [u, v] = random_crossing_pair(rng, draw_cells(rng, 4, 32), order);
    const Profile lo = make_profile(u.grid, u.values.cwiseMin(v.values), -1.0, 1.0);
    const Profile hi = make_profile(u.grid, u.values.cwiseMax(v.values), -1.0, 1.0);
    const double rhs = total(u, order, W) + total(v, order, W);
    const double lhs = total(lo, order, W) + total(hi, order, W);
    record(r, (lhs - rhs) / std::abs(rhs), 1e-10);
  }
  return r;
}

PropertyResult check_rearrangement_equality(FracOrder order, const PotentialSpec& W, int trials,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  PropertyResult r{"rearrangement_equality"};
  for (int t = 0; t < trials; ++t) {
    const Profile u = random_profile(rng, draw_cells(rng, 4, 32), order);
    Eigen::VectorXd v = u.values;
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] += unif(rng) * (1.0 - v[i]);
    if (order.pinned()) {
      v[0] = -1.0;
      v[v.size() - 1] = 1.0;
    }
    const Profile pv = make_profile(u.grid, v, -1.0, 1.0);
    const Profile lo = make_profile(u.grid, u.values.cwiseMin(v), -1.0, 1.0);
    const Profile hi = make_profile(u.grid, u.values.cwiseMax(v), -1.0, 1.0);
    const double rhs = total(u, order, W) + total(pv, order, W);
    const double lhs = total(lo, order, W) + total(hi, order, W);
    record(r, std::abs(lhs - rhs) / std::abs(rhs), 1e-10);
  }
  return r;
}

PropertyResult check_clamp(FracOrder order, const PotentialSpec& W, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PropertyResult r{"clamp_decreases_energy"};
  for (int t = 0; t < trials; ++t) {
    const Profile u = random_profile(rng, draw_cells(rng, 4, 32), order, -2.0, 2.0);
    const double before = total(u, order, W);
    const double after = total(clamp(u), order, W);
    record(r, (after - before) / std::abs(before), 1e-12);
  }
  return r;
}

PropertyResult check_monotone_rearrange(FracOrder order, const PotentialSpec& W, int trials,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PropertyResult r{"monotone_rearrangement"};
  for (int t = 0; t < trials; ++t) {
    const Profile u = random_profile(rng, draw_cells(rng, 4, 32), order);
    const double before = total(u, order, W);
    const double after = total(monotone_rearrange(u), order, W);
    record(r, (after - before) / std::abs(before), 1e-10);
  }
  return r;
}

PropertyResult check_gradient(FracOrder order, const PotentialSpec& W, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PropertyResult r{"gradient_vs_central_differences"};
  for (int t = 0; t < trials; ++t) {
    const Profile p = random_profile(rng, draw_cells(rng, 2, 64), order);
    const InteractionForm form(p.grid, order, p.left, p.right);
    const Eigen::VectorXd g = energy_gradient(form, p.values, W);
    const double scale = g.cwiseAbs().maxCoeff();
    const int first = order.pinned() ? 1 : 0;
    const int last = order.pinned() ? p.n_cells() - 1 : p.n_cells();
    double worst = 0;
    for (int i = first; i <= last; ++i) {
      const double eps = 1e-5;
      Eigen::VectorXd up = p.values, dn = p.values;
      up[i] += eps;
      dn[i] -= eps;
      const double fd = (energy(form, up, W).total - energy(form, dn, W).total) / (2 * eps);
      worst = std::max(worst, std::abs(fd - g[i]) / std::max(std::abs(g[i]), 1e-3 * scale));
    }
    record(r, worst, 1e-6);
  }
  return r;
}

}  // namespace fraclayer
