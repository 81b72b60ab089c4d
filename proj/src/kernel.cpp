#include "fraclayer/kernel.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>
#include <unsupported/Eigen/FFT>

#include "fraclayer/errors.hpp"
#include "fraclayer/io.hpp"
#include "fraclayer/quadrature.hpp"

namespace fraclayer {

namespace {

constexpr double kCriticalWindow = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::FFT<double>& local_fft() {
  thread_local Eigen::FFT<double> fft = [] {
    Eigen::FFT<double> f;
    f.SetFlag(Eigen::FFT<double>::HalfSpectrum);
    return f;
  }();
  return fft;
}

// int_0^1 phi_a phi_b (i + xi)^{-2s} dxi, phi_0 = 1 - xi, phi_1 = xi.
Eigen::Matrix2d tail_cell(int i, double s) {
  Eigen::Matrix2d G;
  if (i == 0) {
    G(0, 0) = 2.0 / ((1 - 2 * s) * (2 - 2 * s) * (3 - 2 * s));
    G(0, 1) = G(1, 0) = 1.0 / ((2 - 2 * s) * (3 - 2 * s));
    G(1, 1) = 1.0 / (3 - 2 * s);
    return G;
  }
  if (i <= 3) {
    const double t0 = i, t1 = i + 1.0;
    const double I0 = powint(1 - 2 * s, t0, t1);
    const double I1 = powint(2 - 2 * s, t0, t1);
    const double I2 = powint(3 - 2 * s, t0, t1);
    G(0, 0) = t1 * t1 * I0 - 2 * t1 * I1 + I2;
    G(0, 1) = G(1, 0) = -I2 + (2 * i + 1) * I1 - t0 * t1 * I0;
    G(1, 1) = I2 - 2 * t0 * I1 + t0 * t0 * I0;
    return G;
  }
  const GaussRule& g = gauss_unit(8);
  G.setZero();
  for (int k = 0; k < g.x.size(); ++k) {
    const double xi = g.x[k];
    const double w = g.w[k] * std::pow(i + xi, -2 * s);
    Eigen::Vector2d phi(1 - xi, xi);
    G += w * phi * phi.transpose();
  }
  return G;
}

}  // namespace

std::string to_string(Regime r) {
  switch (r) {
    case Regime::sub: return "sub";
    case Regime::critical: return "critical";
    default: return "super";
  }
}

FracOrder::FracOrder(double s_) : s(s_) {
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("FracOrder: s must lie in (0,1)");
}

Regime FracOrder::regime() const {
  if (std::abs(s - 0.5) < kCriticalWindow) return Regime::critical;
  return s < 0.5 ? Regime::sub : Regime::super;
}

InteractionForm::InteractionForm(const Grid1D& grid, FracOrder order, double left, double right)
    : grid_(grid), order_(order), left_(left), right_(right) {
  if (!std::isfinite(left) || !std::isfinite(right))
    throw std::invalid_argument("InteractionForm: exterior values must be finite");
  hs_ = std::pow(grid_.h(), 1 - 2 * order_.s);
  build_near();
  build_far();
  build_tails();
}

void InteractionForm::build_near() {
  const double s = order_.s;
  // Same cell: int int |xi - eta|^{1-2s}.
  c_same_ = 2.0 / ((2 - 2 * s) * (3 - 2 * s));
  // Adjacent cells: A = int int xi^2 (xi+eta)^q, J = int int (xi+eta)^{1-2s}, q = -1-2s.
  const double q = -1 - 2 * s;
  const double bracket = pow2m1_over(q + 4) - 2 * pow2m1_over(q + 3) + pow2m1_over(q + 2) - 1.0 / (q + 4);
  a_adj_ = bracket / (q + 1);
  const double J = 2.0 * pow2m1_over(2 - 2 * s) / (3 - 2 * s);
  b_adj_ = 0.5 * J - a_adj_;
}

void InteractionForm::build_far() {
  const int N = n();
  const double sigma = 1 + 2 * order_.s;
  const GaussRule& g = gauss_unit(5);

  std::vector<Eigen::Matrix2d> P(std::max(N, 2), Eigen::Matrix2d::Zero());
  std::vector<Eigen::Matrix2d> Pp = P;
  cross_.assign(std::max(N, 2), Eigen::Matrix2d::Zero());

  for (int m = 2; m <= N - 1; ++m) {
    // Split the unit square into k x k pieces for the closest pairs.
    const int k = m <= 9 ? static_cast<int>(std::ceil(8.0 / (m - 1))) : 1;
    Eigen::Matrix2d A = Eigen::Matrix2d::Zero(), B = A, C = A;
    for (int ia = 0; ia < k; ++ia)
      for (int ib = 0; ib < k; ++ib)
        for (int p = 0; p < g.x.size(); ++p)
          for (int r = 0; r < g.x.size(); ++r) {
            const double xi = (ia + g.x[p]) / k;
            const double eta = (ib + g.x[r]) / k;
            const double w = g.w[p] * g.w[r] / (k * k) * std::pow(m + eta - xi, -sigma);
            const Eigen::Vector2d fx(1 - xi, xi), fy(1 - eta, eta);
            A += w * fx * fx.transpose();
            B += w * fy * fy.transpose();
            C += w * fx * fy.transpose();
          }
    P[m] = hs_ * A;
    Pp[m] = hs_ * B;
    cross_[m] = hs_ * C;
  }

  // Self blocks: cell I against every cell two or more to the right (P) and left (Pp).
  std::vector<Eigen::Matrix2d> cumP(std::max(N, 2), Eigen::Matrix2d::Zero()), cumPp = cumP;
  for (int m = 2; m <= N - 1; ++m) {
    cumP[m] = cumP[m - 1] + P[m];
    cumPp[m] = cumPp[m - 1] + Pp[m];
  }
  self_.assign(N, Eigen::Matrix2d::Zero());
  for (int I = 0; I < N; ++I) {
    const int right = N - 1 - I;
    if (right >= 2) self_[I] += cumP[right];
    if (I >= 2) self_[I] += cumPp[I];
  }

  t_ = Eigen::VectorXd::Zero(N + 1);
  for (int k = 1; k <= N; ++k)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const int m = k - b + a;
        if (m >= 2 && m <= N - 1) t_[k] += cross_[m](a, b);
      }
  e0_.resize(N + 1);
  eN_.resize(N + 1);
  for (int q = 0; q <= N; ++q) {
    e0_[q] = x_entry(0, q) - t_[q];
    eN_[q] = x_entry(N, q) - t_[N - q];
  }

  if (N >= 3) {
    int L = 1;
    while (L < 2 * N + 2) L <<= 1;
    fft_len_ = L;
    std::vector<double> tc(L, 0.0);
    for (int k = 0; k <= N; ++k) tc[k] = t_[k];
    for (int k = 1; k <= N; ++k) tc[L - k] = t_[k];
    local_fft().fwd(t_hat_, tc);
  }
}

double InteractionForm::x_entry(int p, int q) const {
  if (p == q) return 0.0;
  if (p > q) std::swap(p, q);
  const int N = n();
  double v = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const int I = p - a, J = q - b;
      if (I < 0 || I > N - 1 || J < 0 || J > N - 1) continue;
      if (J - I >= 2) v += cross_[J - I](a, b);
    }
  return v;
}

void InteractionForm::build_tails() {
  const int N = n();
  const double s = order_.s;
  const double scale = hs_ / (2 * s);
  std::vector<Eigen::Matrix2d> G(N);
  for (int i = 0; i < N; ++i) G[i] = scale * tail_cell(i, s);
  if (order_.pinned()) {
    G[0](0, 0) = 0.0;
    G[0](0, 1) = G[0](1, 0) = 0.0;
  }
  tail_l_ = G;
  tail_r_.resize(N);
  for (int i = 0; i < N; ++i) {
    const Eigen::Matrix2d& F = G[N - 1 - i];
    tail_r_[i] << F(1, 1), F(1, 0), F(0, 1), F(0, 0);
  }
}

Eigen::VectorXd InteractionForm::apply_in_in(const Eigen::VectorXd& v) const {
  const int N = n();
  if (v.size() != N + 1) throw shape_error("apply_in_in: wrong vector length");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(N + 1);

  // Near pairs through the cell differences.
  Eigen::VectorXd d = v.tail(N) - v.head(N);
  Eigen::VectorXd e = (0.5 * c_same_) * d;
  for (int i = 0; i + 1 < N; ++i) {
    e[i] += a_adj_ * d[i] + b_adj_ * d[i + 1];
    e[i + 1] += a_adj_ * d[i + 1] + b_adj_ * d[i];
  }
  e *= hs_;
  y.head(N) -= e;
  y.tail(N) += e;

  if (N < 3) return y;

  for (int I = 0; I < N; ++I) {
    const Eigen::Vector2d w = self_[I] * v.segment<2>(I);
    y[I] += w[0];
    y[I + 1] += w[1];
  }

  // Toeplitz part by circular convolution.
  const int L = fft_len_;
  std::vector<double> buf(L, 0.0);
  for (int k = 0; k <= N; ++k) buf[k] = v[k];
  std::vector<std::complex<double>> spec;
  auto& fft = local_fft();
  fft.fwd(spec, buf);
  for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= t_hat_[k];
  fft.inv(buf, spec, L);

  y[0] -= e0_.dot(v);
  y[N] -= eN_.dot(v);
  for (int p = 0; p <= N; ++p) y[p] -= buf[p];
  for (int p = 1; p < N; ++p) y[p] -= e0_[p] * v[0] + eN_[p] * v[N];
  return y;
}

Eigen::MatrixXd InteractionForm::dense_in_in() const {
  const int N = n();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N + 1, N + 1);
  for (int j = 0; j <= N; ++j) {
    // Near part column by column keeps the formula in one place.
    Eigen::VectorXd ej = Eigen::VectorXd::Unit(N + 1, j);
    Eigen::VectorXd d = ej.tail(N) - ej.head(N);
    Eigen::VectorXd e = (0.5 * c_same_) * d;
    for (int i = 0; i + 1 < N; ++i) {
      e[i] += a_adj_ * d[i] + b_adj_ * d[i + 1];
      e[i + 1] += a_adj_ * d[i + 1] + b_adj_ * d[i];
    }
    e *= hs_;
    M.col(j).head(N) -= e;
    M.col(j).tail(N) += e;
  }
  if (N < 3) return M;
  for (int I = 0; I < N; ++I) M.block<2, 2>(I, I) += self_[I];
  for (int p = 0; p <= N; ++p)
    for (int q = 0; q <= N; ++q) M(p, q) -= x_entry(p, q);
  return M;
}

double InteractionForm::in_in_value(const Eigen::VectorXd& u) const {
  const Eigen::VectorXd v = u.array() - 0.5 * (left_ + right_);
  return v.dot(apply_in_in(v));
}

void InteractionForm::in_out_apply(const Eigen::VectorXd& u, double& value,
                                   Eigen::VectorXd* grad) const {
  const int N = n();
  if (order_.pinned() && (u[0] != left_ || u[N] != right_)) {
    value = kInf;
  } else {
    value = 0.0;
  }
  double acc = 0.0;
  for (int i = 0; i < N; ++i) {
    const Eigen::Vector2d vl = u.segment<2>(i).array() - left_;
    const Eigen::Vector2d vr = u.segment<2>(i).array() - right_;
    const Eigen::Vector2d gl = tail_l_[i] * vl, gr = tail_r_[i] * vr;
    acc += vl.dot(gl) + vr.dot(gr);
    if (grad) grad->segment<2>(i) += 2.0 * (gl + gr);
  }
  value += acc;
}

double InteractionForm::in_out_value(const Eigen::VectorXd& u) const {
  if (u.size() != n() + 1) throw shape_error("in_out_value: wrong vector length");
  double v;
  in_out_apply(u, v, nullptr);
  return v;
}

void InteractionForm::kinetic(const Eigen::VectorXd& u, double& k_in_in, double& k_in_out,
                              Eigen::VectorXd* grad) const {
  if (u.size() != n() + 1) throw shape_error("kinetic: wrong vector length");
  const Eigen::VectorXd v = u.array() - 0.5 * (left_ + right_);
  const Eigen::VectorXd Mv = apply_in_in(v);
  k_in_in = v.dot(Mv);
  if (grad) *grad = 2.0 * Mv;
  in_out_apply(u, k_in_out, grad);
  if (grad && order_.pinned()) {
    (*grad)[0] = 0.0;
    (*grad)[n()] = 0.0;
  }
}

Eigen::VectorXd InteractionForm::kinetic_gradient(const Eigen::VectorXd& u) const {
  double a, b;
  Eigen::VectorXd g;
  kinetic(u, a, b, &g);
  return g;
}

Eigen::SparseMatrix<double> InteractionForm::in_out_matrix() const {
  const int N = n();
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < N; ++i) {
    const Eigen::Matrix2d T = tail_l_[i] + tail_r_[i];
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) trip.emplace_back(i + a, i + b, T(a, b));
  }
  Eigen::SparseMatrix<double> A(N + 1, N + 1);
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

Eigen::VectorXd InteractionForm::in_out_linear() const {
  const int N = n();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(N + 1);
  for (int i = 0; i < N; ++i)
    b.segment<2>(i) -= 2.0 * (left_ * tail_l_[i].rowwise().sum() + right_ * tail_r_[i].rowwise().sum());
  return b;
}

double InteractionForm::in_out_constant() const {
  double c = 0.0;
  for (int i = 0; i < n(); ++i) c += left_ * left_ * tail_l_[i].sum() + right_ * right_ * tail_r_[i].sum();
  return c;
}

std::string InteractionForm::cache_key() const {
  nlohmann::json j = {{"a", grid_.a}, {"b", grid_.b}, {"n_cells", grid_.n_cells}, {"s", order_.s}};
  return sha1_hex(j.dump());
}

void InteractionForm::save_cache(const std::string& path) const {
  const Eigen::MatrixXd M = dense_in_in();
  nlohmann::json j = {{"a", grid_.a},          {"b", grid_.b},   {"n_cells", grid_.n_cells},
                      {"s", order_.s},          {"rows", M.rows()}, {"cols", M.cols()},
                      {"layout", "row-major f64 little-endian"}, {"key", cache_key()}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write cache: " + path);
  out << j.dump() << '\n';
  write_f64_le(out, M);
}

Eigen::MatrixXd InteractionForm::load_cache(const std::string& path, std::string* header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read cache: " + path);
  std::string line;
  std::getline(in, line);
  if (header) *header = line;
  const auto j = nlohmann::json::parse(line);
  return read_f64_le(in, j.at("rows").get<int>(), j.at("cols").get<int>());
}

double tail_weight(double x, double boundary, bool left_side, FracOrder order) {
  const double d = left_side ? x - boundary : boundary - x;
  if (!(d > 0)) throw std::domain_error("tail_weight: point must lie strictly inside");
  return std::pow(d, -2 * order.s) / (2 * order.s);
}

double frac_laplacian(const Profile& p, int node, FracOrder order) {
  if (node < 2 || node > p.n_cells() - 2)
    throw precondition_error("frac_laplacian: node within 2 cells of the boundary");
  return frac_laplacian_all(p, order)[node];
}

Eigen::VectorXd frac_laplacian_all(const Profile& p, FracOrder order) {
  InteractionForm F(p.grid, order, p.left, p.right);
  double kin, kout;
  Eigen::VectorXd g;
  F.kinetic(p.values, kin, kout, &g);
  return g / (2.0 * p.grid.h());
}

namespace {

// Integral over tau in [m, m+1] of (alpha - gamma tau)^k tau^{-1-2s}, k = 1 or 2.
double cell_moment(double alpha, double gamma, int m, double s, int k) {
  const double P0 = powint(-2 * s, m, m + 1.0);
  const double P1 = powint(1 - 2 * s, m, m + 1.0);
  if (k == 1) return alpha * P0 - gamma * P1;
  const double P2 = powint(2 - 2 * s, m, m + 1.0);
  return alpha * alpha * P0 - 2 * alpha * gamma * P1 + gamma * gamma * P2;
}

// Sum over the non-adjacent cells of the given moment of u_i - u(y), in units of h^{-2s}.
template <class Table>
double far_cells(const Eigen::VectorXd& u, int i, double s, int k, const Table& tab) {
  const int N = static_cast<int>(u.size()) - 1;
  const GaussRule& g = gauss_unit(8);
  double total = 0.0;
  auto cell = [&](double near, double far, int m) {
    const double D0 = u[i] - near, gam = far - near;
    if (m <= 3) return cell_moment(D0 + gam * m, gam, m, s, k);
    double acc = 0.0;
    for (int q = 0; q < g.x.size(); ++q) {
      const double diff = D0 - gam * g.x[q];
      acc += tab(m, q) * (k == 1 ? diff : diff * diff);
    }
    return acc;
  };
  for (int j = i + 1; j < N; ++j) total += cell(u[j], u[j + 1], j - i);
  for (int j = i - 2; j >= 0; --j) total += cell(u[j + 1], u[j], i - j - 1);
  return total;
}

struct PowTable {
  Eigen::MatrixXd w;  // (m + x_q)^{-1-2s} w_q
  PowTable(int N, double s) {
    const GaussRule& g = gauss_unit(8);
    w.resize(N + 1, g.x.size());
    for (int m = 0; m <= N; ++m)
      for (int q = 0; q < g.x.size(); ++q) w(m, q) = g.w[q] * std::pow(m + g.x[q], -1 - 2 * s);
  }
  double operator()(int m, int q) const { return w(m, q); }
};

double tail_term(double diff, double d, double s, int k) {
  if (diff == 0.0) return 0.0;
  if (d <= 0.0) return kInf;
  return (k == 1 ? diff : diff * diff) * std::pow(d, -2 * s) / (2 * s);
}

double density_at(const Profile& p, int i, double s, const PowTable& tab) {
  const Eigen::VectorXd& u = p.values;
  const int N = p.n_cells();
  const double h = p.grid.h();
  double acc = 0.0;
  if (i < N) {
    const double d = u[i + 1] - u[i];
    acc += d * d / (2 - 2 * s);
  }
  if (i > 0) {
    const double d = u[i] - u[i - 1];
    acc += d * d / (2 - 2 * s);
  }
  acc += far_cells(u, i, s, 2, tab);
  acc *= std::pow(h, -2 * s);
  acc += tail_term(u[i] - p.left, i * h, s, 2);
  acc += tail_term(u[i] - p.right, (N - i) * h, s, 2);
  return acc;
}

}  // namespace

double frac_laplacian_pointwise(const Profile& p, int node, FracOrder order) {
  const int N = p.n_cells();
  if (node < 2 || node > N - 2)
    throw precondition_error("frac_laplacian_pointwise: node within 2 cells of the boundary");
  const double s = order.s;
  const double h = p.grid.h();
  const Eigen::VectorXd& u = p.values;
  const double D2 = u[node + 1] - 2 * u[node] + u[node - 1];
  double near;
  if (D2 == 0.0) {
    near = 0.0;
  } else if (order.regime() != Regime::sub) {
    near = D2 > 0 ? -kInf : kInf;
  } else {
    near = -D2 / (1 - 2 * s);
  }
  PowTable tab(N, s);
  double acc = (near + far_cells(u, node, s, 1, tab)) * std::pow(h, -2 * s);
  acc += tail_term(u[node] - p.left, node * h, s, 1);
  acc += tail_term(u[node] - p.right, (N - node) * h, s, 1);
  return acc;
}

double seminorm_density(const Profile& p, int node, FracOrder order) {
  if (node < 0 || node > p.n_cells()) throw std::out_of_range("seminorm_density: node out of range");
  PowTable tab(p.n_cells(), order.s);
  return density_at(p, node, order.s, tab);
}

Eigen::VectorXd seminorm_density_all(const Profile& p, FracOrder order) {
  PowTable tab(p.n_cells(), order.s);
  Eigen::VectorXd D(p.n_cells() + 1);
  for (int i = 0; i <= p.n_cells(); ++i) D[i] = density_at(p, i, order.s, tab);
  return D;
}

}  // namespace fraclayer
