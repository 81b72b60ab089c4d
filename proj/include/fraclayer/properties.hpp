#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fraclayer/grid.hpp"
#include "fraclayer/kernel.hpp"
#include "fraclayer/potential.hpp"

namespace fraclayer {

struct PropertyResult {
  std::string name;
  int trials = 0;
  int violations = 0;
  double worst = 0;  // largest defect seen, relative
};

/// Random admissible profile on [-2, 2] with values in [lo, hi]; endpoints pinned when the order requires it.
Profile random_profile(std::mt19937_64& rng, int n_cells, FracOrder order, double lo = -1.0, double hi = 1.0);

/// Pair (u, v) whose difference changes sign only through nodes where it vanishes,
/// so that nodal min and max are the pointwise min and max of the interpolants.
std::pair<Profile, Profile> random_crossing_pair(std::mt19937_64& rng, int n_cells, FracOrder order);

/// F(min) + F(max) <= F(u) + F(v) on random pairs.
PropertyResult check_rearrangement(FracOrder order, const PotentialSpec& W, int trials, std::uint64_t seed);
/// F(min) + F(max) = F(u) + F(v) on ordered pairs u <= v.
PropertyResult check_rearrangement_equality(FracOrder order, const PotentialSpec& W, int trials,
                                            std::uint64_t seed);
/// F(clamp(u)) <= F(u) for values drawn in [-2, 2].
PropertyResult check_clamp(FracOrder order, const PotentialSpec& W, int trials, std::uint64_t seed);
/// F(sorted u) <= F(u).
PropertyResult check_monotone_rearrange(FracOrder order, const PotentialSpec& W, int trials, std::uint64_t seed);
/// energy_gradient against central differences at free nodes.
PropertyResult check_gradient(FracOrder order, const PotentialSpec& W, int trials, std::uint64_t seed);

}  // namespace fraclayer
