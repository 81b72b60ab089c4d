#pragma once

#include <memory>
#include <string>
#include <vector>

namespace fraclayer {

// Double-well potential W with wells at -1 and +1.
struct PotentialSpec {
  enum class Kind { quartic_default, tabulated };

  Kind kind = Kind::quartic_default;

  // Tabulated samples, ascending in u. Empty for the quartic.
  std::vector<double> u, W, dW, ddW;

  static PotentialSpec quartic();
  static PotentialSpec tabulated(std::vector<double> u, std::vector<double> W,
                                 std::vector<double> dW, std::vector<double> ddW);

  double lo() const;
  double hi() const;

  struct Interp;
  std::shared_ptr<const Interp> interp;
};

/// W(u), W'(u) or W''(u) for order 0, 1, 2.
double potential_eval(const PotentialSpec& spec, double u, int order);

/// W(a) - W(b) without cancellation for nearby arguments.
double potential_difference(const PotentialSpec& spec, double a, double b);

struct CheckResult {
  std::string name;
  bool pass = false;
  double margin = 0.0;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool all_pass() const;
};

ValidationReport validate_double_well(const PotentialSpec& spec, double tol = 1e-12);

/// CSV with header u,W,dW,ddW.
PotentialSpec load_potential_csv(const std::string& path);
void save_potential_csv(const PotentialSpec& spec, const std::string& path);

}  // namespace fraclayer
