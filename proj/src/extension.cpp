#include "fraclayer/extension.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "fraclayer/analysis.hpp"
#include "fraclayer/energy.hpp"
#include "fraclayer/parallel.hpp"
#include "fraclayer/quadrature.hpp"

namespace fraclayer {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
  double lo, hi;
};
using Chords = std::vector<Interval>;

// Horizontal kernel g(d) = (r^2 + d^2)^{-1-s} and its integrals at fixed vertical offset r.
class Strip {
 public:
  explicit Strip(double s) : s_(s), total_(boost::math::beta(s + 0.5, 0.5)) {}

  double total() const { return total_; }

  void set_offset(double r) {
    r_ = r;
    rp_ = std::pow(r, -1 - 2 * s_);
  }

  // int over x in I, y in J of g(y - x); I finite, J possibly unbounded.
  double pair(const Interval& I, const Interval& J) const {
    if (J.lo == -kInf && J.hi == kInf) return (I.hi - I.lo) * total_ * rp_;
    if (J.hi == kInf) return upper(I, J.lo);
    if (J.lo == -kInf) return phi(I.lo - J.hi) - phi(I.hi - J.hi);
    return upper(I, J.lo) - upper(I, J.hi);
  }

 private:
  // int_g^inf (1 + tau^2)^{-1-s} dtau, g >= 0.
  double tail(double g) const {
    if (g >= 1) return 0.5 * boost::math::beta(s_ + 0.5, 0.5, 1 / (1 + g * g));
    return 0.5 * total_ - 0.5 * boost::math::beta(0.5, s_ + 0.5, g * g / (1 + g * g));
  }

  // int_c^inf (d - c) g(d) dd.
  double phi(double c) const {
    const double a = std::abs(c);
    const double psi = std::pow(r_ * r_ + c * c, -s_) / (2 * s_) - a * rp_ * tail(a / r_);
    return (c < 0 ? a * total_ * rp_ : 0.0) + psi;
  }

  double upper(const Interval& I, double q) const { return phi(q - I.hi) - phi(q - I.lo); }

  double s_, total_;
  double r_ = 1, rp_ = 1;
};

double root_or_zero(double v) { return v > 0 ? std::sqrt(v) : 0.0; }

// Horizontal section of the annulus rho <= |x| < R at height x2 (rho = 0 gives the disc).
Chords section(double x2, double R, double rho) {
  const double A = root_or_zero(R * R - x2 * x2);
  if (A == 0) return {};
  if (std::abs(x2) >= rho) return {{-A, A}};
  const double a = root_or_zero(rho * rho - x2 * x2);
  return {{-A, -a}, {a, A}};
}

Chords complement(const Chords& c) {
  if (c.empty()) return {{-kInf, kInf}};
  Chords out;
  double lo = -kInf;
  for (const auto& I : c) {
    if (I.lo > lo) out.push_back({lo, I.lo});
    lo = I.hi;
  }
  out.push_back({lo, kInf});
  return out;
}

double length(const Chords& c) {
  double l = 0;
  for (const auto& I : c) l += I.hi - I.lo;
  return l;
}

struct Node {
  double x, w;
};

// Composite Gauss nodes on sorted breakpoints.
std::vector<Node> gauss_nodes(const std::vector<double>& br, int order) {
  const GaussRule& g = gauss_unit(order);
  std::vector<Node> out;
  for (size_t k = 0; k + 1 < br.size(); ++k) {
    const double a = br[k], len = br[k + 1] - br[k];
    for (int j = 0; j < g.x.size(); ++j) out.push_back({a + len * g.x[j], len * g.w[j]});
  }
  return out;
}

void add_uniform(std::vector<double>& br, double a, double b, double w) {
  const int n = std::max(1, static_cast<int>(std::ceil((b - a) / w)));
  for (int i = 0; i <= n; ++i) br.push_back(a + (b - a) * i / n);
}

// Refinement toward p from both sides, clipped to [lo, hi].
void add_graded(std::vector<double>& br, double p, double w, double lo, double hi) {
  for (int k = 1; k <= 8; ++k) {
    const double d = w * std::pow(0.5, k);
    if (p - d > lo) br.push_back(p - d);
    if (p + d < hi) br.push_back(p + d);
  }
}

std::vector<double> finish(std::vector<double> br) {
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
           br.end());
  return br;
}

double half_width(const Profile& layer) { return std::min(-layer.grid.a, layer.grid.b); }

// int_{x in D} int_{y notin D} |u*(x) - u*(y)|^2 |x - y|^{-2-2s} for D the annulus rho <= |x| < R.
double cross_term(double R, double rho, const ExtensionParams& params, const Profile& layer) {
  const double s = params.order.s;
  const double varpi = params.varpi;
  const double w = std::min(1.0 / varpi, R / 8);
  const double Y = 8 * R;

  std::vector<double> bx;
  add_uniform(bx, -R, R, w);
  std::vector<double> special = {-R, R};
  if (rho > 0) {
    special.push_back(-rho);
    special.push_back(rho);
    bx.push_back(-rho);
    bx.push_back(rho);
  }
  for (double p : special) add_graded(bx, p, w, -R, R);
  bx = finish(bx);

  std::vector<double> by = bx;
  const double edge = std::min(Y, std::max(R, half_width(layer) / varpi));
  add_uniform(by, R, edge, w);
  add_uniform(by, -edge, -R, w);
  for (double d = w; edge + d < Y; d *= 1.5) {
    by.push_back(edge + d);
    by.push_back(-edge - d);
  }
  for (double e : {-edge, edge}) add_graded(by, e, w, -Y, Y);
  by.push_back(Y);
  by.push_back(-Y);
  by = finish(by);

  const std::vector<Node> xs = gauss_nodes(bx, 8);
  const std::vector<Node> ys = gauss_nodes(by, 8);
  std::vector<double> uy(ys.size());
  std::vector<Chords> cy(ys.size());
  for (size_t j = 0; j < ys.size(); ++j) {
    uy[j] = interpolate(layer, varpi * ys[j].x);
    cy[j] = complement(section(ys[j].x, R, rho));
  }

  std::vector<double> rows(xs.size());
  parallel_for(static_cast<int>(xs.size()), [&](int i) {
    Strip strip(s);
    const double x2 = xs[i].x;
    const double ux = interpolate(layer, varpi * x2);
    const Chords sx = section(x2, R, rho);
    double acc = 0;
    for (size_t j = 0; j < ys.size(); ++j) {
      const double du = ux - uy[j];
      if (du == 0) continue;
      strip.set_offset(std::abs(x2 - ys[j].x));
      double P = 0;
      for (const auto& I : sx)
        for (const auto& J : cy[j]) P += strip.pair(I, J);
      acc += ys[j].w * du * du * P;
    }
    const double far = length(sx) * strip.total() *
                       ((ux - layer.right) * (ux - layer.right) * std::pow(Y - x2, -2 * s) +
                        (ux - layer.left) * (ux - layer.left) * std::pow(Y + x2, -2 * s)) /
                       (2 * s);
    rows[i] = xs[i].w * (acc + far);
  });
  double total = 0;
  for (double r : rows) total += r;
  return total;
}

// int_{|x| < rho'} f(x_2) dx in the plane, written as int 2 rho'^2 cos^2(th) f(rho' sin th) dth.
double disc_integral(const std::function<double(double)>& f, double rho, double varpi) {
  if (rho <= 0) return 0;
  const int panels = std::max(32, static_cast<int>(std::ceil(4 * varpi * rho)));
  const GaussRule& g = gauss_unit(8);
  const double pi = std::numbers::pi;
  const double dth = pi / panels;
  double acc = 0;
  for (int k = 0; k < panels; ++k)
    for (int j = 0; j < g.x.size(); ++j) {
      const double th = -0.5 * pi + (k + g.x[j]) * dth;
      const double c = std::cos(th);
      acc += g.w[j] * dth * 2 * rho * rho * c * c * f(rho * std::sin(th));
    }
  return acc;
}

// Node trapezoid of f over [-T, T] on the layer grid.
double window_trapezoid(const Profile& layer, const std::function<double(double)>& f, double T) {
  std::vector<double> ts = {-T};
  for (int i = 0; i <= layer.n_cells(); ++i) {
    const double t = layer.grid.node(i);
    if (t > -T && t < T) ts.push_back(t);
  }
  ts.push_back(T);
  double acc = 0, prev = f(ts[0]);
  for (size_t k = 1; k < ts.size(); ++k) {
    const double cur = f(ts[k]);
    acc += 0.5 * (ts[k] - ts[k - 1]) * (prev + cur);
    prev = cur;
  }
  return acc;
}

Profile density_profile(const Profile& layer, FracOrder order) {
  Profile d = layer;
  d.values = seminorm_density_all(layer, order);
  d.left = d.values[0];
  d.right = d.values[d.values.size() - 1];
  return d;
}

void require_plane(const ExtensionParams& params) {
  if (params.n != 2) throw std::domain_error("extension: only n = 2 is supported");
  if (!(params.varpi > 0)) throw std::domain_error("extension: varpi must be positive");
}

}  // namespace

ExtensionParams make_extension_params(int n, FracOrder order) {
  ExtensionParams p;
  p.n = n;
  p.order = order;
  p.varpi = compute_varpi(n, order);
  const double m = n - 1;
  p.omega_nm1 = std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m + 1);
  return p;
}

double theta_weight(double t, double R, const ExtensionParams& params) {
  const double q = std::min(1.0, t * t / (params.varpi * params.varpi * R * R));
  return (params.omega_nm1 / params.varpi) * (1 - std::pow(1 - q, params.n - 1));
}

double extension_cross_energy(double R, const ExtensionParams& params, const Profile& layer) {
  require_plane(params);
  if (!(R > 0)) throw std::domain_error("extension_cross_energy: R must be positive");
  if (half_width(layer) < 4 * params.varpi * R)
    throw std::domain_error("extension_cross_energy: layer must cover [-4 varpi R, 4 varpi R]");
  return cross_term(R, 0.0, params, layer);
}

ThetaCorrections theta_corrections(double R, const ExtensionParams& params, const Profile& layer,
                                   const PotentialSpec& W) {
  require_plane(params);
  const double T = params.varpi * R;
  if (half_width(layer) < T) throw std::domain_error("theta_corrections: layer window smaller than varpi R");
  const Profile dens = density_profile(layer, params.order);

  ThetaCorrections out;
  out.theta1 = 0.5 * window_trapezoid(
                         layer, [&](double t) { return theta_weight(t, R, params) * interpolate(dens, t); }, T);
  out.theta3 = window_trapezoid(
      layer, [&](double t) { return theta_weight(t, R, params) * potential_eval(W, interpolate(layer, t), 0); },
      T);
  out.cross = extension_cross_energy(R, params, layer);
  out.theta2 = 0.5 * std::pow(R, 1 - params.n) * out.cross + out.theta1;
  out.scaled_theta4_proxy = regime_scale(R, params.order) * (out.theta2 + out.theta3);
  return out;
}

double shell_energy(double R, double delta, const ExtensionParams& params, const Profile& layer,
                    const PotentialSpec& W) {
  require_plane(params);
  if (!(R >= 2)) throw std::domain_error("shell_energy: R must be >= 2");
  if (!(delta > 0 && delta < 0.5)) throw std::domain_error("shell_energy: delta must lie in (0, 1/2)");
  if (half_width(layer) < params.varpi * R) throw std::domain_error("shell_energy: layer window smaller than varpi R");
  const double rho = (1 - delta) * R;
  const double varpi = params.varpi;
  const Profile dens = density_profile(layer, params.order);

  auto local = [&](double x2) {
    const double t = varpi * x2;
    return 0.5 * interpolate(dens, t) + potential_eval(W, interpolate(layer, t), 0);
  };
  const double body = disc_integral(local, R, varpi) - disc_integral(local, rho, varpi);
  return body + 0.5 * cross_term(R, rho, params, layer);
}

}  // namespace fraclayer
