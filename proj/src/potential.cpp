#include "fraclayer/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

// pchip.hpp calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

namespace fraclayer {

using boost::math::interpolators::pchip;

struct PotentialSpec::Interp {
  pchip<std::vector<double>> W, dW, ddW;
};

PotentialSpec PotentialSpec::quartic() { return PotentialSpec{}; }

PotentialSpec PotentialSpec::tabulated(std::vector<double> u, std::vector<double> W,
                                       std::vector<double> dW, std::vector<double> ddW) {
  const std::size_t n = u.size();
  if (n < 4 || W.size() != n || dW.size() != n || ddW.size() != n)
    throw std::invalid_argument("tabulated potential: need >= 4 rows of equal length");
  for (std::size_t i = 1; i < n; ++i)
    if (!(u[i] > u[i - 1]))
      throw std::invalid_argument("tabulated potential: abscissae must be strictly increasing");

  PotentialSpec p;
  p.kind = Kind::tabulated;
  p.u = u;
  p.W = W;
  p.dW = dW;
  p.ddW = ddW;
  auto x0 = u, x1 = u, x2 = u;
  p.interp = std::make_shared<const Interp>(Interp{
      pchip<std::vector<double>>(std::move(x0), std::move(W)),
      pchip<std::vector<double>>(std::move(x1), std::move(dW)),
      pchip<std::vector<double>>(std::move(x2), std::move(ddW))});
  return p;
}

double PotentialSpec::lo() const { return kind == Kind::tabulated ? u.front() : -HUGE_VAL; }
double PotentialSpec::hi() const { return kind == Kind::tabulated ? u.back() : HUGE_VAL; }

double potential_eval(const PotentialSpec& spec, double u, int order) {
  if (order < 0 || order > 2) throw std::invalid_argument("potential_eval: order must be 0, 1 or 2");
  if (spec.kind == PotentialSpec::Kind::quartic_default) {
    const double q = 1.0 - u * u;
    switch (order) {
      case 0: return 0.25 * q * q;
      case 1: return -u * q;
      default: return 3.0 * u * u - 1.0;
    }
  }
  if (!(u >= spec.lo() && u <= spec.hi()))
    throw std::out_of_range("potential_eval: u outside tabulated range");
  const auto& I = *spec.interp;
  switch (order) {
    case 0: return I.W(u);
    case 1: return I.dW(u);
    default: return I.ddW(u);
  }
}

double potential_difference(const PotentialSpec& spec, double a, double b) {
  if (spec.kind == PotentialSpec::Kind::quartic_default)
    return 0.25 * (b - a) * (b + a) * ((1.0 - a) * (1.0 + a) + (1.0 - b) * (1.0 + b));
  const double d = a - b;
  if (std::abs(d) > 1e-3) return potential_eval(spec, a, 0) - potential_eval(spec, b, 0);
  // Simpson on W'.
  const double m = 0.5 * (a + b);
  return d / 6.0 *
         (potential_eval(spec, a, 1) + 4.0 * potential_eval(spec, m, 1) + potential_eval(spec, b, 1));
}

bool ValidationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

ValidationReport validate_double_well(const PotentialSpec& spec, double tol) {
  ValidationReport r;
  auto eval = [&](double u, int k) {
    try {
      return potential_eval(spec, u, k);
    } catch (const std::out_of_range&) {
      return std::nan("");
    }
  };

  double wmin = HUGE_VAL;
  const int n = 10000;
  for (int i = 0; i <= n; ++i) wmin = std::min(wmin, eval(-1.0 + 2.0 * i / n, 0));
  r.checks.push_back({"W>=0 on [-1,1]", wmin >= -tol, wmin});

  auto zero_check = [&](const char* name, double v) {
    r.checks.push_back({name, std::abs(v) <= tol, std::abs(v)});
  };
  zero_check("W(-1)=0", eval(-1.0, 0));
  zero_check("W(+1)=0", eval(1.0, 0));
  zero_check("W'(-1)=0", eval(-1.0, 1));
  zero_check("W'(+1)=0", eval(1.0, 1));

  const double cm = eval(-1.0, 2), cp = eval(1.0, 2);
  r.checks.push_back({"W''(-1)>0", cm > 0.0, cm});
  r.checks.push_back({"W''(+1)>0", cp > 0.0, cp});
  return r;
}

PotentialSpec load_potential_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open potential file: " + path);
  std::string line;
  std::getline(in, line);
  std::vector<double> u, W, dW, ddW;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double a, b, c, d;
    if (!(ss >> a >> b >> c >> d)) throw std::invalid_argument("malformed potential row: " + line);
    u.push_back(a);
    W.push_back(b);
    dW.push_back(c);
    ddW.push_back(d);
  }
  return PotentialSpec::tabulated(std::move(u), std::move(W), std::move(dW), std::move(ddW));
}

void save_potential_csv(const PotentialSpec& spec, const std::string& path) {
  std::ofstream out(path);
  out.precision(17);
  out << "u,W,dW,ddW\n";
  for (std::size_t i = 0; i < spec.u.size(); ++i)
    out << spec.u[i] << ',' << spec.W[i] << ',' << spec.dW[i] << ',' << spec.ddW[i] << '\n';
}

}  // namespace fraclayer
