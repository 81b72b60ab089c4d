#pragma once

#include <utility>
#include <vector>

#include "fraclayer/energy.hpp"
#include "fraclayer/grid.hpp"
#include "fraclayer/kernel.hpp"
#include "fraclayer/potential.hpp"

namespace fraclayer {

enum class StepRule { barzilai_borwein, fixed };
enum class SeedProfile { linear_ramp, sign_step, custom };

struct SolveOptions {
  int max_iters = 50000;
  double grad_tol = 1e-8;  // on max |grad| / h
  StepRule step_rule = StepRule::barzilai_borwein;
  double initial_step = 0.0;  // 0 means h^{2s}
  SeedProfile seed_profile = SeedProfile::custom;
  bool record_trace = false;
};

struct SolveTraceRow {
  int iteration = 0;
  double energy = 0;
  double grad_norm = 0;
};

struct SolveReport {
  int iterations = 0;
  bool converged = false;
  double final_grad_norm = 0;
  double el_residual_max = 0;
  double monotonicity_defect = 0;
  bool energy_history_monotone = true;
  double energy = 0;
  std::vector<SolveTraceRow> trace;
};

Profile make_seed(const Grid1D& g, SeedProfile kind, double left = -1.0, double right = 1.0);

std::pair<Profile, SolveReport> minimize(const Profile& p0, FracOrder order, const PotentialSpec& W,
                                         const SolveOptions& opts = {});

/// max |2 (-Delta)^s u + W'(u)| over nodes at least margin_cells from the ends.
double el_residual(const Profile& p, FracOrder order, const PotentialSpec& W, int margin_cells = 40);

/// Most negative forward difference, or 0.
double monotonicity_defect(const Profile& p);

Profile monotone_rearrange(const Profile& p);

/// Moves the grid so that the leftmost zero crossing sits at x = 0.
Profile normalize_translation(const Profile& p);

std::vector<std::pair<Profile, SolveReport>> continuation_solve(const std::vector<double>& R_schedule,
                                                                double h, FracOrder order,
                                                                const PotentialSpec& W,
                                                                const SolveOptions& opts = {});

}  // namespace fraclayer
