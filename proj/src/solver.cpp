#include "fraclayer/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fraclayer/errors.hpp"

namespace fraclayer {

namespace {

struct State {
  Eigen::VectorXd u, gk, g;
  double kin = 0, kout = 0;
};

void evaluate(const InteractionForm& F, const PotentialSpec& W, State& st) {
  F.kinetic(st.u, st.kin, st.kout, &st.gk);
  const int N = F.n();
  const double h = F.grid().h();
  st.g = st.gk;
  for (int i = 0; i <= N; ++i) {
    const double w = (i == 0 || i == N) ? 0.5 : 1.0;
    st.g[i] += h * w * potential_eval(W, st.u[i], 1);
  }
  if (F.order().pinned()) {
    st.g[0] = 0.0;
    st.g[N] = 0.0;
  }
}

double projected_norm(const State& st, double h) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < st.u.size(); ++i) {
    const double gi = st.g[i];
    if ((st.u[i] <= -1.0 && gi > 0) || (st.u[i] >= 1.0 && gi < 0)) continue;
    m = std::max(m, std::abs(gi));
  }
  return m / h;
}

// E(b) - E(a) from the exact quadratic identity for K plus termwise W differences.
double energy_change(const State& a, const State& b, const PotentialSpec& W, double h) {
  const Eigen::VectorXd du = b.u - a.u;
  double dK = 0.5 * (a.gk + b.gk).dot(du);
  const Eigen::Index N = a.u.size() - 1;
  double dP = 0.0;
  for (Eigen::Index i = 0; i <= N; ++i) {
    if (du[i] == 0.0) continue;
    const double w = (i == 0 || i == N) ? 0.5 : 1.0;
    dP += w * potential_difference(W, b.u[i], a.u[i]);
  }
  return dK + h * dP;
}

}  // namespace

Profile make_seed(const Grid1D& g, SeedProfile kind, double left, double right) {
  Eigen::VectorXd v(g.n_nodes());
  for (int i = 0; i <= g.n_cells; ++i) {
    if (kind == SeedProfile::sign_step) {
      const int c = g.n_cells;
      v[i] = 2 * i < c ? left : (2 * i > c ? right : 0.5 * (left + right));
    } else {
      v[i] = left + (right - left) * (g.node(i) - g.a) / (g.b - g.a);
    }
  }
  v[0] = left;
  v[g.n_cells] = right;
  return make_profile(g, v, left, right);
}

std::pair<Profile, SolveReport> minimize(const Profile& p0, FracOrder order, const PotentialSpec& W,
                                         const SolveOptions& opts) {
  if (opts.max_iters <= 0 || !(opts.grad_tol > 0))
    throw std::invalid_argument("minimize: max_iters and grad_tol must be positive");
  Profile p = opts.seed_profile == SeedProfile::custom ? p0
                                                         : make_seed(p0.grid, opts.seed_profile, p0.left, p0.right);
  p = clamp(p);
  const double h = p.grid.h();
  InteractionForm F(p.grid, order, p.left, p.right);

  State cur;
  cur.u = p.values;
  evaluate(F, W, cur);
  const double E0 = cur.kin + cur.kout + potential_term(p.grid, cur.u, W);
  if (!std::isfinite(E0)) throw std::invalid_argument("minimize: initial energy is not finite");

  SolveReport rep;
  double E = E0;
  double gn = projected_norm(cur, h);
  if (opts.record_trace) rep.trace.push_back({0, E, gn});

  const double alpha0 = opts.initial_step > 0 ? opts.initial_step : std::pow(h, 2 * order.s);
  double alpha = alpha0;
  int it = 0;
  State trial;
  bool stalled = false;
  while (gn > opts.grad_tol && it < opts.max_iters) {
    // Descent direction in profile units: gradient over the lumped mass.
    const Eigen::VectorXd d = cur.g / h;
    double a = alpha;
    bool accepted = false;
    for (int halvings = 0; halvings < 60; ++halvings) {
      trial.u = (cur.u - a * d).cwiseMax(-1.0).cwiseMin(1.0);
      if (trial.u == cur.u) break;
      evaluate(F, W, trial);
      const double dE = energy_change(cur, trial, W, h);
      if (dE <= 0.0) {
        E += dE;
        accepted = true;
        break;
      }
      a *= 0.5;
    }
    ++it;
    if (!accepted) {
      stalled = true;
      break;
    }
    if (opts.step_rule == StepRule::barzilai_borwein) {
      const Eigen::VectorXd sk = trial.u - cur.u;
      const Eigen::VectorXd yk = (trial.g - cur.g) / h;
      const double sy = sk.dot(yk);
      alpha = sy > 0 ? sk.squaredNorm() / sy : 2.0 * a;
      alpha = std::clamp(alpha, 1e-3 * alpha0, 1e6 * alpha0);
    } else {
      alpha = alpha0;
    }
    std::swap(cur, trial);
    gn = projected_norm(cur, h);
    if (opts.record_trace) rep.trace.push_back({it, E, gn});
  }
  (void)stalled;

  p.values = cur.u;
  rep.iterations = it;
  rep.final_grad_norm = gn;
  rep.converged = gn <= opts.grad_tol;
  rep.energy = energy(F, cur.u, W).total;
  rep.monotonicity_defect = monotonicity_defect(p);
  const int margin = std::min(40, std::max(2, p.n_cells() / 4));
  rep.el_residual_max = p.n_cells() > 2 * margin ? el_residual(p, order, W, margin) : 0.0;
  rep.energy_history_monotone = true;
  for (std::size_t k = 1; k < rep.trace.size(); ++k)
    if (rep.trace[k].energy > rep.trace[k - 1].energy) rep.energy_history_monotone = false;
  return {p, rep};
}

double el_residual(const Profile& p, FracOrder order, const PotentialSpec& W, int margin_cells) {
  if (margin_cells < 2) throw std::domain_error("el_residual: margin_cells must be >= 2");
  const int N = p.n_cells();
  if (N <= 2 * margin_cells) throw std::domain_error("el_residual: grid too small for the margin");
  const Eigen::VectorXd L = frac_laplacian_all(p, order);
  double r = 0.0;
  for (int i = margin_cells; i <= N - margin_cells; ++i)
    r = std::max(r, std::abs(2.0 * L[i] + potential_eval(W, p.values[i], 1)));
  return r;
}

double monotonicity_defect(const Profile& p) {
  const Eigen::Index N = p.values.size() - 1;
  if (N < 1) return 0.0;
  const double m = (p.values.tail(N) - p.values.head(N)).minCoeff();
  return std::min(m, 0.0);
}

Profile monotone_rearrange(const Profile& p) {
  Profile q = p;
  std::sort(q.values.data(), q.values.data() + q.values.size());
  return q;
}

Profile normalize_translation(const Profile& p) {
  const double x0 = zero_crossing(p);
  const double h = p.grid.h();
  if (x0 - p.grid.a < 10 * h || p.grid.b - x0 < 10 * h)
    throw precondition_error("normalize_translation: crossing within 10 cells of the boundary");
  Profile q = p;
  // Whole-cell offsets are snapped so that lattice positions stay exact.
  const double k = std::round((x0 - p.grid.a) / h);
  if (std::abs((x0 - p.grid.a) - k * h) <= 1e-9 * h)
    q.grid = Grid1D(-k * h, -k * h + p.n_cells() * h, p.n_cells());
  else
    q.grid = Grid1D(p.grid.a - x0, p.grid.b - x0, p.n_cells());
  return q;
}

std::vector<std::pair<Profile, SolveReport>> continuation_solve(const std::vector<double>& R_schedule,
                                                                double h, FracOrder order,
                                                                const PotentialSpec& W,
                                                                const SolveOptions& opts) {
  if (R_schedule.empty()) throw std::invalid_argument("continuation_solve: empty schedule");
  for (std::size_t k = 1; k < R_schedule.size(); ++k)
    if (!(R_schedule[k] > R_schedule[k - 1]))
      throw std::invalid_argument("continuation_solve: schedule must be strictly increasing");

  std::vector<std::pair<Profile, SolveReport>> out;
  for (std::size_t k = 0; k < R_schedule.size(); ++k) {
    const Grid1D g = Grid1D::symmetric(R_schedule[k], h);
    Profile seed;
    SolveOptions o = opts;
    if (k == 0) {
      seed = make_seed(g, opts.seed_profile == SeedProfile::custom ? SeedProfile::linear_ramp
                                                                   : opts.seed_profile);
      o.seed_profile = SeedProfile::custom;
    } else {
      const Profile& prev = out.back().first;
      Eigen::VectorXd v(g.n_nodes());
      for (int i = 0; i <= g.n_cells; ++i) v[i] = interpolate(prev, g.node(i));
      seed = make_profile(g, v, -1.0, 1.0);
      o.seed_profile = SeedProfile::custom;
    }
    out.push_back(minimize(seed, order, W, o));
  }
  return out;
}

}  // namespace fraclayer
