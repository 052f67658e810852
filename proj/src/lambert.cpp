#include <frobkit/lambert.hpp>

#include <algorithm>
#include <cmath>

#include <frobkit/errors.hpp>

namespace frobkit {

namespace {

double seed_guess(double x) {
  if (x < -0.25) {
    // branch-point series in p = sqrt(2 (e x + 1))
    double p = std::sqrt(2.0 * (std::exp(1.0) * x + 1.0));
    return -1.0 + p - p * p / 3.0 + (11.0 / 72.0) * p * p * p;
  }
  if (x < 3.0) return std::log1p(x);
  double l1 = std::log(x);
  double l2 = std::log(l1);
  return l1 - l2 + l2 / l1;
}

}  // namespace

double lambert_w(double x) {
  const double branch = -std::exp(-1.0);
  if (!(x >= branch)) throw DomainError("lambert_w needs x >= -1/e");
  if (x == branch) return -1.0;

  double w = seed_guess(x);
  const double tol = 1e-14 * std::max(1.0, std::fabs(x));
  for (int it = 0; it < 64; ++it) {
    double ew = std::exp(w);
    double r = w * ew - x;
    if (std::fabs(r) <= tol) return w;
    double d1 = ew * (w + 1.0);
    double step;
    if (std::fabs(w + 1.0) < 1e-3) {
      step = r / d1;
    } else {
      step = r / (d1 - (w + 2.0) * r / (2.0 * (w + 1.0)));
    }
    w -= step;
    if (w < -1.0) w = -1.0 + 0.5 * std::fabs(w + 1.0);
  }
  throw NoConvergence("lambert_w did not converge");
}

Jet lambert_w(const Jet& a) {
  double w0 = lambert_w(a.value());
  if (a.constant_shape()) return Jet(w0);
  if (std::fabs(w0 + 1.0) < 1e-8)
    throw DomainError("lambert_w jet expansion at the branch point");

  Jet w(w0);
  int iters = 0;
  while ((1 << iters) - 1 < a.order()) ++iters;
  for (int k = 0; k < iters; ++k) {
    Jet ew = exp(w);
    w = w - (w * ew - a) * reciprocal(ew * (w + 1.0));
  }
  return w;
}

}  // namespace frobkit
