#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

namespace fraclayer {

/// Gauss-Legendre rule on [0, 1].
struct GaussRule {
  Eigen::VectorXd x, w;
};

const GaussRule& gauss_unit(int order);

/// (2^p - 1) / p, with the limit ln 2 at p = 0.
double pow2m1_over(double p);

/// Integral of t^(p-1) over [t1, t2], i.e. (t2^p - t1^p) / p, stable near p = 0.
double powint(double p, double t1, double t2);

/// Adaptive Gauss-Kronrod on [a, b]; the interval is split at the given breakpoints.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const std::vector<double>& breaks = {}, double rel_tol = 1e-12);

/// Composite Gauss-Legendre on [a, b] with panels graded geometrically toward a (ratio q).
double integrate_graded(const std::function<double(double)>& f, double a, double b, int panels,
                        double q, int order = 10);

/// Radical inverse of index in the given base.
double halton(std::uint64_t index, int base);

}  // namespace fraclayer
