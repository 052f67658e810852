#include <frobkit/painleve.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <utility>

#include <frobkit/errors.hpp>

namespace frobkit {

namespace {

double first_integral(const PainleveState& s) {
  return s.F12 * s.F12 + s.F13 * s.F13 + s.F23 * s.F23;
}

void require_regular(double z) {
  if (std::fabs(z) < 1e-12 || std::fabs(z - 1.0) < 1e-12)
    throw SingularPoint("painleve rhs at z in {0,1}");
}

std::array<double, 3> rhs(double z, double F12, double F13, double F23) {
  require_regular(z);
  return {F13 * F23 / (z * (z - 1.0)), -F12 * F23 / (z - 1.0),
          F12 * F13 / z};
}

}  // namespace

std::array<double, 3> ode_rhs(const PainleveState& s) {
  return rhs(s.z, s.F12, s.F13, s.F23);
}

Trajectory integrate(const PainleveState& s0, double z_end, double step) {
  const double lo = std::min(s0.z, z_end), hi = std::max(s0.z, z_end);
  if ((lo < 0.05 && hi > -0.05) || (lo < 1.05 && hi > 0.95))
    throw SingularPoint("integration interval violates the 0.05 margin");
  if (!(step > 0.0)) throw StepTooLarge("step must be positive");

  const double span = z_end - s0.z;
  const long long n = std::max(1LL, (long long)std::ceil(std::fabs(span) / step));
  const double h = span / (double)n;

  Trajectory out;
  out.states.reserve((size_t)n + 1);
  out.states.push_back(s0);
  out.R2 = first_integral(s0);
  out.step = h;

  double y[3] = {s0.F12, s0.F13, s0.F23};
  double drift = 0.0;
  for (long long k = 0; k < n; ++k) {
    const double z = s0.z + (double)k * h;
    auto k1 = rhs(z, y[0], y[1], y[2]);
    auto k2 = rhs(z + 0.5 * h, y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1],
                  y[2] + 0.5 * h * k1[2]);
    auto k3 = rhs(z + 0.5 * h, y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1],
                  y[2] + 0.5 * h * k2[2]);
    const double zn = s0.z + (double)(k + 1) * h;
    auto k4 = rhs(zn, y[0] + h * k3[0], y[1] + h * k3[1], y[2] + h * k3[2]);
    for (int i = 0; i < 3; ++i)
      y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    PainleveState s{zn, y[0], y[1], y[2]};
    drift = std::max(drift, std::fabs(first_integral(s) - out.R2));
    out.states.push_back(s);
  }
  if (drift > 1e-6)
    throw StepTooLarge("first-integral drift " + std::to_string(drift));
  return out;
}

std::vector<SigmaSample> sigma_eval(const Trajectory& t) {
  std::vector<SigmaSample> out;
  out.reserve(t.states.size());
  for (const PainleveState& s : t.states) {
    SigmaSample r;
    r.z = s.z;
    r.dsigma = s.F12 * s.F12;
    r.sigma = s.F13 * s.F13 + s.z * r.dsigma - 0.5 * t.R2;
    r.d2sigma = 2.0 * s.F12 * s.F13 * s.F23 / (s.z * (s.z - 1.0));
    r.consistency = std::fabs(-r.sigma + (s.z - 1.0) * r.dsigma +
                              0.5 * t.R2 - s.F23 * s.F23);
    out.push_back(r);
  }
  return out;
}

double sigma_pvi_residual(double z, double sigma, double dsigma,
                          double d2sigma, double R2) {
  const double zz1 = z * (z - 1.0);
  const double m = z * dsigma - sigma;
  const double lhs =
      zz1 * zz1 * d2sigma * d2sigma +
      4.0 * (dsigma * m * m - dsigma * dsigma * m);
  const double rhs = -2.0 * R2 * dsigma * dsigma + R2 * R2 * dsigma;
  return std::fabs(lhs - rhs);
}

std::array<ZCurve, 3> trajectory_curves(const Trajectory& t) {
  struct Node {
    double z;
    std::array<double, 3> f, df;
  };
  auto nodes = std::make_shared<std::vector<Node>>();
  nodes->reserve(t.states.size());
  for (const PainleveState& s : t.states)
    nodes->push_back({s.z, {s.F12, s.F13, s.F23}, ode_rhs(s)});
  if (nodes->size() < 2) throw DomainError("trajectory too short");
  if (nodes->front().z > nodes->back().z)
    std::reverse(nodes->begin(), nodes->end());

  std::array<ZCurve, 3> out;
  for (int c = 0; c < 3; ++c) {
    out[c] = [nodes, c](const Jet& z) {
      const double zv = z.value();
      const std::vector<Node>& nd = *nodes;
      if (zv < nd.front().z - 1e-12 || zv > nd.back().z + 1e-12)
        throw DomainError("query outside the trajectory range");
      auto it = std::upper_bound(
          nd.begin(), nd.end(), zv,
          [](double v, const Node& n) { return v < n.z; });
      size_t k = (size_t)std::clamp<long>(it - nd.begin() - 1, 0L,
                                          (long)nd.size() - 2);
      const Node& a = nd[k];
      const Node& b = nd[k + 1];
      const double h = b.z - a.z;
      const double c0 = a.f[c], c1 = a.df[c];
      const double c2 =
          (3.0 * (b.f[c] - a.f[c]) / h - 2.0 * a.df[c] - b.df[c]) / h;
      const double c3 =
          (2.0 * (a.f[c] - b.f[c]) / h + a.df[c] + b.df[c]) / (h * h);
      Jet dz = z - a.z;
      return c0 + dz * (c1 + dz * (c2 + dz * c3));
    };
  }
  return out;
}

namespace {

void require_distinct(const Vecd& u) {
  if (u.size() != 3) throw CoincidentCoordinates("three coordinates expected");
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (std::fabs(u[i] - u[j]) < 1e-12)
        throw CoincidentCoordinates("u" + std::to_string(i + 1) + " = u" +
                                    std::to_string(j + 1));
}

}  // namespace

BetaField beta_field_from_F(ZCurve F12, ZCurve F13, ZCurve F23) {
  return [F12 = std::move(F12), F13 = std::move(F13), F23 = std::move(F23)](
             int i, int j, const std::vector<Jet>& u) {
    if (i > j) std::swap(i, j);
    Jet z = (u[2] - u[0]) * reciprocal(u[1] - u[0]);
    if (i == 0 && j == 1) return F12(z) * reciprocal(u[1] - u[0]);
    if (i == 1 && j == 2) return F23(z) * reciprocal(u[2] - u[1]);
    return F13(z) * reciprocal(u[2] - u[0]);
  };
}

Matd beta_from_F(const ZCurve& F12, const ZCurve& F13, const ZCurve& F23,
                 const Vecd& u) {
  require_distinct(u);
  BetaField field = beta_field_from_F(F12, F13, F23);
  std::vector<Jet> uj;
  for (int i = 0; i < 3; ++i) uj.push_back(Jet(u[i]));
  Matd beta = Matd::Zero(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      beta(i, j) = field(i, j, uj).value();
      beta(j, i) = beta(i, j);
    }
  return beta;
}

std::array<double, 3> darboux_egorov_residual(const BetaField& beta,
                                              const Vecd& u) {
  require_distinct(u);
  std::vector<Jet> uj = point_jets(u, 1);

  Jet b[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      b[i][j] = beta(i, j, uj);
      b[j][i] = b[i][j];
    }

  auto d = [](const Jet& a, int k) {
    std::vector<int> alpha(3, 0);
    alpha[k] = 1;
    return extract_partial(a, alpha);
  };

  double r1 = 0.0, r2 = 0.0, r3 = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      const int k = 3 - i - j;
      r1 = std::max(r1, std::fabs(d(b[i][j], k) -
                                  b[i][k].value() * b[k][j].value()));
      double e = 0.0, s = 0.0;
      for (int l = 0; l < 3; ++l) {
        e += d(b[i][j], l);
        s += u[l] * d(b[i][j], l);
      }
      r2 = std::max(r2, std::fabs(e));
      r3 = std::max(r3, std::fabs(s + b[i][j].value()));
    }
  return {r1, r2, r3};
}

std::string trajectory_csv(const Trajectory& t) {
  std::string out = "z,F12,F13,F23,sigma,residual\n";
  std::vector<SigmaSample> sig = sigma_eval(t);
  char line[256];
  for (size_t k = 0; k < t.states.size(); ++k) {
    const PainleveState& s = t.states[k];
    const SigmaSample& g = sig[k];
    double res = sigma_pvi_residual(g.z, g.sigma, g.dsigma, g.d2sigma, t.R2);
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  s.z, s.F12, s.F13, s.F23, g.sigma, res);
    out += line;
  }
  return out;
}

}  // namespace frobkit
