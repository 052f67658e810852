#include "frobkit/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "frobkit/errors.hpp"

namespace frobkit {

double AxiomResiduals::max_abs() const {
  return std::max({invariance, curvature, nabla_c_symmetry, unit_flat, lie_E_c, lie_E_e,
                   lie_E_eta, lie_e_eta});
}

Tensor3<Jet> christoffel_jets(const MatJ& metric) {
  const int n = static_cast<int>(metric.rows());
  MatJ inv = inverse_jets(metric);
  Tensor3<Jet> deta(n, n, n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) deta(k, i, j) = derivative(metric(i, j), k);
  Tensor3<Jet> gamma(n, n, n);
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int k = i; k < n; ++k) {
        Jet sum;
        for (int s = 0; s < n; ++s)
          sum += inv(m, s) * (deta(i, s, k) + deta(k, s, i) - deta(s, i, k));
        gamma(m, i, k) = 0.5 * sum;
        gamma(m, k, i) = gamma(m, i, k);
      }
  return gamma;
}

Tensor3<double> christoffel(const ChartFrame& frame) {
  const int n = frame.bs.total();
  Tensor3<double> gamma(n, n, n, 0.0);
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        double sum = 0.0;
        for (int s = 0; s < n; ++s)
          sum += frame.metric_inv(m, s) *
                 (frame.dmetric(i, s, k) + frame.dmetric(k, s, i) - frame.dmetric(s, i, k));
        gamma(m, i, k) = 0.5 * sum;
      }
  return gamma;
}

Tensor4<double> riemann_tensor_from_jets(const MatJ& metric) {
  const int n = static_cast<int>(metric.rows());
  Tensor3<Jet> gamma = christoffel_jets(metric);
  Tensor3<double> gval(n, n, n, 0.0);
  Tensor4<double> dgamma(n, n, n, n, 0.0);  // (l, m, i, k) = d_l Gamma^m_ik
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const Jet& g = gamma(m, i, k);
        gval(m, i, k) = g.value();
        std::vector<int> alpha(g.nvars(), 0);
        for (int l = 0; l < n; ++l) {
          std::fill(alpha.begin(), alpha.end(), 0);
          alpha[l] = 1;
          dgamma(l, m, i, k) = g.partial(alpha);
        }
      }
  Tensor4<double> riem(n, n, n, n, 0.0);
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double r = dgamma(j, m, i, k) - dgamma(i, m, j, k);
          for (int s = 0; s < n; ++s)
            r += gval(s, i, k) * gval(m, s, j) - gval(s, j, k) * gval(m, s, i);
          riem(m, i, j, k) = r;
        }
  return riem;
}

double riemann_residual_from_jets(const MatJ& metric) {
  Tensor4<double> riem = riemann_tensor_from_jets(metric);
  const int n = riem.dim0();
  double worst = 0.0;
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) worst = std::max(worst, std::abs(riem(m, i, j, k)));
  return worst;
}

double riemann_residual(const ChartFrame& frame) {
  return riemann_residual_from_jets(frame.metric_jets);
}

AxiomResiduals axiom_residuals(const ChartFrame& frame) {
  const int n = frame.bs.total();
  AxiomResiduals r;

  // eta(i, c(j,k)) symmetric in i <-> j
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double tij = 0.0, tji = 0.0;
        for (int l = 0; l < n; ++l) {
          tij += frame.metric(i, l) * frame.c(l, j, k);
          tji += frame.metric(j, l) * frame.c(l, i, k);
        }
        r.invariance = std::max(r.invariance, std::abs(tij - tji));
      }

  r.curvature = riemann_residual(frame);

  Tensor3<double> gamma = christoffel(frame);

  // covariant derivative of c antisymmetrized in the two outer slots
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k) {
          double nic = 0.0, njc = 0.0;
          for (int s = 0; s < n; ++s) {
            nic += gamma(l, i, s) * frame.c(s, j, k) - gamma(s, i, j) * frame.c(l, s, k) -
                   gamma(s, i, k) * frame.c(l, j, s);
            njc += gamma(l, j, s) * frame.c(s, i, k) - gamma(s, j, i) * frame.c(l, s, k) -
                   gamma(s, j, k) * frame.c(l, i, s);
          }
          r.nabla_c_symmetry = std::max(r.nabla_c_symmetry, std::abs(nic - njc));
        }

  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double v = 0.0;
      for (int s = 0; s < n; ++s) v += gamma(k, i, s) * frame.e[s];
      r.unit_flat = std::max(r.unit_flat, std::abs(v));
    }

  // E is the coordinate field, so dE^k/du^s is the identity and c is constant
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double lie = -frame.c(k, i, j) + frame.c(k, i, j) + frame.c(k, i, j);
        r.lie_E_c = std::max(r.lie_E_c, std::abs(lie - frame.c(k, i, j)));
      }
  for (int k = 0; k < n; ++k) {
    double lie = -frame.e[k];
    r.lie_E_e = std::max(r.lie_E_e, std::abs(lie + frame.e[k]));
  }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double adv = 0.0;
      for (int k = 0; k < n; ++k) adv += frame.E[k] * frame.dmetric(k, i, j);
      r.lie_E_eta = std::max(r.lie_E_eta, std::abs(adv + frame.d * frame.metric(i, j)));

      double unit = 0.0;
      for (int b = 0; b < frame.bs.blocks(); ++b) unit += frame.dmetric(frame.bs.first_index(b), i, j);
      r.lie_e_eta = std::max(r.lie_e_eta, std::abs(unit));
    }

  return r;
}

namespace {

Tensor3<double> third_partials(const ScalarField& F, const Vecd& x) {
  const int n = static_cast<int>(x.size());
  std::vector<Jet> xj = point_jets(x, 3);
  Jet Fx = F(xj);
  Tensor3<double> d3(n, n, n, 0.0);
  std::vector<int> alpha(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k) {
        std::fill(alpha.begin(), alpha.end(), 0);
        alpha[i] += 1;
        alpha[j] += 1;
        alpha[k] += 1;
        double v = Fx.partial(alpha);
        d3(i, j, k) = d3(i, k, j) = d3(j, i, k) = d3(j, k, i) = d3(k, i, j) = d3(k, j, i) = v;
      }
  return d3;
}

}  // namespace

double wdvv_residual(const ScalarField& F, const Matd& eta_flat, const Vecd& x) {
  const int n = static_cast<int>(x.size());
  Tensor3<double> d3 = third_partials(F, x);
  Matd inv = inverse_values(eta_flat);
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int e = 0; e < n; ++e) {
          double lhs = 0.0, rhs = 0.0;
          for (int s = 0; s < n; ++s)
            for (int t = 0; t < n; ++t) {
              lhs += d3(a, b, s) * inv(s, t) * d3(t, c, e);
              rhs += d3(c, b, s) * inv(s, t) * d3(t, a, e);
            }
          worst = std::max(worst, std::abs(lhs - rhs));
        }
  return worst;
}

Tensor3<double> product_from_prepotential(const ScalarField& F, const Matd& eta_flat,
                                          const Vecd& x) {
  const int n = static_cast<int>(x.size());
  Tensor3<double> d3 = third_partials(F, x);
  Matd inv = inverse_values(eta_flat);
  Tensor3<double> c(n, n, n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < n; ++k) {
        double v = 0.0;
        for (int s = 0; s < n; ++s) v += inv(a, s) * d3(s, b, k);
        c(a, b, k) = v;
      }
  return c;
}

Pushforward pushforward_frame(const CoordinateMap& map, const ChartFrame& frame) {
  const int n = frame.bs.total();
  std::vector<Jet> ujets = point_jets(frame.point, 1);
  std::vector<Jet> xjets = map(ujets);
  if (static_cast<int>(xjets.size()) != n)
    throw std::invalid_argument("coordinate map must preserve dimension");

  Pushforward out;
  out.x = Vecd(n);
  out.jacobian = Matd(n, n);
  std::vector<int> alpha(n, 0);
  for (int a = 0; a < n; ++a) {
    out.x[a] = xjets[a].value();
    for (int i = 0; i < n; ++i) {
      std::fill(alpha.begin(), alpha.end(), 0);
      alpha[i] = 1;
      out.jacobian(a, i) = xjets[a].partial(alpha);
    }
  }
  Eigen::FullPivLU<Matd> lu(out.jacobian);
  if (!lu.isInvertible()) throw SingularJacobian("coordinate map is singular at the point");
  Matd jinv = lu.inverse();

  out.eta_flat = jinv.transpose() * frame.metric * jinv;
  out.c_flat = Tensor3<double>(n, n, n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
              sum += out.jacobian(a, i) * frame.c(i, j, k) * jinv(j, b) * jinv(k, c);
        out.c_flat(a, b, c) = sum;
      }
  out.e_flat = out.jacobian * frame.e;
  out.E_flat = out.jacobian * frame.E;
  return out;
}

PencilResiduals flat_pencil_residual(const ChartFrame& frame) {
  const int n = frame.bs.total();

  Eigen::FullPivLU<Matd> lul(frame.L);
  if (!lul.isInvertible())
    throw SingularL("euler multiplication is singular at the point");

  MatJ etainv = inverse_jets(frame.metric_jets);
  MatJ Ljets = l_operator_jets(frame.bs, frame.point, frame.metric_jets(0, 0).order());
  MatJ g2 = Ljets * etainv;

  PencilResiduals out;
  out.curvature_g1 = riemann_residual_from_jets(frame.metric_jets);

  double asym = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet diff = g2(i, j) - g2(j, i);
      for (double c : diff.coeffs()) asym = std::max(asym, std::abs(c));
    }
  MatJ cov2 = inverse_jets(g2);
  out.curvature_g2 = std::max(riemann_residual_from_jets(cov2), asym);

  // contravariant symbols at pencil parameters 0, 1, 2
  std::vector<Tensor3<double>> sym;
  for (double lam : {0.0, 1.0, 2.0}) {
    MatJ glam = etainv;
    if (lam != 0.0)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) glam(i, j) = etainv(i, j) + lam * g2(i, j);
    MatJ cov = inverse_jets(glam);
    Tensor3<Jet> gamma = christoffel_jets(cov);
    Matd gval = value_of(glam);
    Tensor3<double> contra(n, n, n, 0.0);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double sum = 0.0;
          for (int s = 0; s < n; ++s) sum -= gval(i, s) * gamma(j, s, k).value();
          contra(k, i, j) = sum;
        }
    sym.push_back(contra);
  }
  double lin = 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        lin = std::max(lin,
                       std::abs(sym[0](k, i, j) - 2.0 * sym[1](k, i, j) + sym[2](k, i, j)));
  out.linearity = lin;
  return out;
}

}  // namespace frobkit
