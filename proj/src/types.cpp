#include "frobkit/types.hpp"

#include <cmath>

#include "frobkit/errors.hpp"

namespace frobkit {

std::vector<Jet> point_jets(const Vecd& point, int order) {
  int n = static_cast<int>(point.size());
  std::vector<Jet> seeds;
  seeds.reserve(n);
  for (int i = 0; i < n; ++i) seeds.push_back(Jet::variable(i, point[i], n, order));
  return seeds;
}

Matd value_of(const MatJ& a) {
  Matd r(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) r(i, j) = a(i, j).value();
  return r;
}

Vecd value_of(const VecJ& a) {
  Vecd r(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) r[i] = a[i].value();
  return r;
}

MatJ constant_jets(const Matd& a, int nvars, int order) {
  MatJ r(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) r(i, j) = Jet(nvars, order, a(i, j));
  return r;
}

Matd partial_of(const MatJ& a, int var) {
  Matd r(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const Jet& e = a(i, j);
      if (e.constant_shape()) {
        r(i, j) = 0.0;
        continue;
      }
      std::vector<int> alpha(e.nvars(), 0);
      alpha[var] = 1;
      r(i, j) = e.partial(alpha);
    }
  return r;
}

Matd inverse_values(const Matd& a) {
  Eigen::FullPivLU<Matd> lu(a);
  if (!lu.isInvertible()) throw SingularMetric("matrix not invertible");
  return lu.inverse();
}

MatJ inverse_jets(const MatJ& a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("inverse_jets: matrix must be square");

  int nvars = 0, order = 0;
  bool shaped = false;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const Jet& e = a(i, j);
      if (e.constant_shape()) continue;
      if (!shaped) {
        nvars = e.nvars();
        order = e.order();
        shaped = true;
      } else {
        if (e.nvars() != nvars) throw std::invalid_argument("inverse_jets: mixed nvars");
        order = std::min(order, e.order());
      }
    }

  Matd a0 = value_of(a);
  Eigen::FullPivLU<Matd> lu(a0);
  if (!lu.isInvertible()) throw SingularMetric("metric not invertible at evaluation point");
  Matd x0 = lu.inverse();
  if (!shaped) return constant_jets(x0, 0, 0);

  MatJ x = constant_jets(x0, nvars, order);
  int iters = 0;
  while ((1 << iters) - 1 < order) ++iters;
  for (int it = 0; it < iters; ++it) {
    MatJ t = -(a * x);
    for (Eigen::Index i = 0; i < n; ++i) t(i, i) += 2.0;
    x = x * t;
  }
  return x;
}

}  // namespace frobkit
