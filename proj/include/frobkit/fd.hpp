#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "frobkit/errors.hpp"

namespace frobkit {

// Finite-difference reference for jet partials: iterated central differences
// with one Richardson extrapolation level. The base step is rescaled as
// step^(1/k) for a total derivative order k, which keeps truncation and
// roundoff balanced through third order.
struct FdOracle {
  double step = 1e-5;

  using Fn = std::function<double(const std::vector<double>&)>;

  double partial(const Fn& f, const std::vector<double>& x,
                 const std::vector<int>& alpha) const {
    if (alpha.size() != x.size())
      throw std::invalid_argument("fd multi-index length does not match point");
    int total = 0;
    for (int e : alpha) {
      if (e < 0) throw std::invalid_argument("negative multi-index entry");
      total += e;
    }
    if (total == 0) return f(x);
    double h = std::pow(step, 1.0 / total);
    double coarse = stencil(f, x, alpha, h);
    double fine = stencil(f, x, alpha, h / 2.0);
    return (4.0 * fine - coarse) / 3.0;
  }

 private:
  static double stencil(const Fn& f, const std::vector<double>& x,
                        const std::vector<int>& alpha, double h) {
    int var = -1;
    for (std::size_t v = 0; v < alpha.size(); ++v)
      if (alpha[v] > 0) {
        var = static_cast<int>(v);
        break;
      }
    if (var < 0) return f(x);
    std::vector<int> rest = alpha;
    rest[var] -= 1;
    std::vector<double> xp = x, xm = x;
    xp[var] += h;
    xm[var] -= h;
    return (stencil(f, xp, rest, h) - stencil(f, xm, rest, h)) / (2.0 * h);
  }
};

}  // namespace frobkit
