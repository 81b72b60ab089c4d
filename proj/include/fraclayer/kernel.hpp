#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "fraclayer/grid.hpp"

namespace fraclayer {

enum class Regime { sub, critical, super };

std::string to_string(Regime r);

struct FracOrder {
  double s = 0.5;

  FracOrder() = default;
  explicit FracOrder(double s);

  Regime regime() const;
  bool critical() const { return regime() == Regime::critical; }
  /// Exterior tails are not integrable against a jump at a or b.
  bool pinned() const { return regime() != Regime::sub; }
};

/// Discrete Gagliardo form of a P1 profile with constant exterior data.
///
/// in_in:  u^T M u = (1/2) int_{Omega x Omega} |u(x)-u(y)|^2 |x-y|^{-1-2s}
/// in_out: int_{Omega x C Omega} |u(x)-u(y)|^2 |x-y|^{-1-2s}
///
/// M is never formed. Near pairs are closed form, far pairs come from
/// translation invariant tables applied with an FFT.
class InteractionForm {
 public:
  InteractionForm(const Grid1D& grid, FracOrder order, double left, double right);

  const Grid1D& grid() const { return grid_; }
  FracOrder order() const { return order_; }
  double left() const { return left_; }
  double right() const { return right_; }
  int n() const { return grid_.n_cells; }

  /// M v.
  Eigen::VectorXd apply_in_in(const Eigen::VectorXd& v) const;
  Eigen::MatrixXd dense_in_in() const;

  double in_in_value(const Eigen::VectorXd& u) const;
  /// +inf if the order is pinned and an endpoint differs from its exterior value.
  double in_out_value(const Eigen::VectorXd& u) const;

  /// Gradient of in_in + in_out. Pinned endpoint entries are 0.
  Eigen::VectorXd kinetic_gradient(const Eigen::VectorXd& u) const;
  /// Both parts of the kinetic energy and its gradient from a single apply.
  void kinetic(const Eigen::VectorXd& u, double& k_in_in, double& k_in_out,
               Eigen::VectorXd* grad) const;

  /// in_out(u) = u^T A u + b^T u + c over the free nodes.
  Eigen::SparseMatrix<double> in_out_matrix() const;
  Eigen::VectorXd in_out_linear() const;
  double in_out_constant() const;

  /// Raw dense dump of M, row-major, after a one-line JSON header.
  void save_cache(const std::string& path) const;
  static Eigen::MatrixXd load_cache(const std::string& path, std::string* header = nullptr);
  std::string cache_key() const;

 private:
  void build_near();
  void build_far();
  void build_tails();
  double x_entry(int p, int q) const;
  void in_out_apply(const Eigen::VectorXd& u, double& value, Eigen::VectorXd* grad) const;

  Grid1D grid_;
  FracOrder order_;
  double left_, right_;
  double hs_;  // h^{1-2s}

  double c_same_ = 0, a_adj_ = 0, b_adj_ = 0;

  // Per cell 2x2 self blocks of far pairs, already scaled.
  std::vector<Eigen::Matrix2d> self_;
  // Cross tables C^(m), m = 0..N-1 (entries below 2 unused), scaled.
  std::vector<Eigen::Matrix2d> cross_;
  // Toeplitz symbol and its boundary corrections.
  Eigen::VectorXd t_, e0_, eN_;
  int fft_len_ = 0;
  std::vector<std::complex<double>> t_hat_;

  std::vector<Eigen::Matrix2d> tail_l_, tail_r_;
};

/// Integral of |x-y|^{-1-2s} over the exterior half-line at distance d.
double tail_weight(double x, double boundary, bool left_side, FracOrder order);

/// Node averaged (Galerkin) fractional Laplacian: (1/2h) dK/du_i.
double frac_laplacian(const Profile& p, int node, FracOrder order);
Eigen::VectorXd frac_laplacian_all(const Profile& p, FracOrder order);

/// Pointwise principal value at a node. Infinite for s >= 1/2 at a kink.
double frac_laplacian_pointwise(const Profile& p, int node, FracOrder order);

/// int_R |u(x_i)-u(y)|^2 |x_i-y|^{-1-2s} dy.
double seminorm_density(const Profile& p, int node, FracOrder order);
Eigen::VectorXd seminorm_density_all(const Profile& p, FracOrder order);

struct ShellIntegral {
  double value = 0;
  double error = 0;  // 3 sigma for QMC, 0 for closed forms
  double paper_bound = 0;
};

/// B_R x (B_2R \ B_R) for s < 1/2, B_R x C B_{R+1} otherwise.
ShellIntegral shell_kernel_integral(double R, int n, FracOrder order,
                                    long samples = 1000000, unsigned seed = 0);

/// int_{[-l,l] x C[-2l,2l]} 4 |x-y|^{-1-2s}.
double companion_integral(double ell, FracOrder order);

}  // namespace fraclayer
