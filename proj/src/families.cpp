#include <frobkit/families.hpp>

#include <algorithm>
#include <cmath>
#include <utility>

#include <json.hpp>

#include <frobkit/errors.hpp>
#include <frobkit/lambert.hpp>

namespace frobkit {

namespace {

using JV = std::vector<Jet>;

// Gives a constant-shape jet the shape of `like` so derivative() works on it.
Jet lift(const Jet& v, const Jet& like) {
  if (!v.constant_shape()) return v;
  return v + 0.0 * like;
}

// Values of j, j', j'', j''' in the single reduced variable.
std::array<double, 4> uni4(Jet j) {
  std::array<double, 4> out{j.value(), 0.0, 0.0, 0.0};
  for (int k = 1; k <= 3 && j.order() >= 1; ++k) {
    j = derivative(j, 0);
    out[static_cast<std::size_t>(k)] = j.value();
  }
  return out;
}

double max_coeff(const Jet& j) {
  double m = 0.0;
  for (double c : j.coeffs()) m = std::max(m, std::fabs(c));
  return m;
}

ConstantSet make_cs(std::initializer_list<std::pair<int, double>> vals) {
  ConstantSet cs;
  for (auto [i, v] : vals) cs.C(i) = v;
  return cs;
}

double jitter(SplitMix64& rng, double v) { return v * rng.uniform(0.75, 1.3); }

SampleBox box2() {
  SampleBox b;
  b.lo = Vecd(2);
  b.hi = Vecd(2);
  b.lo << 0.5, 0.75;
  b.hi << 2.0, 1.75;
  return b;
}

SampleBox box3(double u3lo, double u3hi) {
  SampleBox b;
  b.lo = Vecd(3);
  b.hi = Vecd(3);
  b.lo << 0.5, 0.75, u3lo;
  b.hi << 2.0, 1.75, u3hi;
  return b;
}

SampleBox box4(double u3lo, double u3hi, double u4lo, double u4hi) {
  SampleBox b;
  b.lo = Vecd(4);
  b.hi = Vecd(4);
  b.lo << 0.5, 0.75, u3lo, u4lo;
  b.hi << 2.0, 1.75, u3hi, u4hi;
  return b;
}

AffineField diag_field(std::initializer_list<double> diag) {
  AffineField f;
  int n = static_cast<int>(diag.size());
  f.M = Matd::Zero(n, n);
  f.t = Vecd::Zero(n);
  int i = 0;
  for (double v : diag) f.M(i, i) = v, ++i;
  return f;
}

// ---------------------------------------------------------------------------
// n = 2: constant entry pair, conformal weight d.
// ---------------------------------------------------------------------------

FamilySpec make_dim2(const std::string& id, double d, const ConstantSet& cs) {
  double C1 = cs.C(1), C2 = cs.C(2);
  FamilySpec fam;
  fam.id = id;
  fam.n = 2;
  fam.d = d;
  fam.constants = cs;
  fam.gdata.f = [](const JV&) { return Jet(0.0); };
  fam.gdata.C1 = C1;
  fam.gdata.C2 = C2;
  fam.gdata.d = d;
  fam.u_box = box2();

  if (d == 0.0) {
    fam.flat_map = [](const JV& u) { return u; };
  } else if (d == 1.0) {
    fam.flat_map = [](const JV& u) { return JV{u[0], log(u[1])}; };
  } else {
    fam.flat_map = [d](const JV& u) {
      return JV{u[0], pow(u[1], 1.0 - d) * (1.0 / (1.0 - d))};
    };
  }

  Matd eta(2, 2);
  eta << C1, C2, C2, 0.0;
  fam.eta_flat = eta;

  if (d == 1.0) {
    AffineField E = diag_field({1.0, 0.0});
    E.t << 0.0, 1.0;
    fam.euler_flat = E;
  } else {
    fam.euler_flat = diag_field({1.0, 1.0 - d});
  }

  fam.prepotential = [C1, C2](const JV& x) {
    return (C1 / 6.0) * x[0] * x[0] * x[0] + (C2 / 2.0) * x[0] * x[0] * x[1];
  };

  fam.alt_constants = {make_cs({{1, d == 0.0 ? 0.4 : 0.0}, {2, 1.0}}),
                       make_cs({{1, d == 0.0 ? 1.1 : 0.0}, {2, 0.8}})};
  fam.sample_constants = [d](SplitMix64& rng) {
    ConstantSet out;
    out.C(1) = d == 0.0 ? rng.uniform(0.3, 1.0) : 0.0;
    out.C(2) = rng.uniform(0.5, 1.5);
    return out;
  };
  fam.rebind = [id, d](const ConstantSet& ncs) { return make_dim2(id, d, ncs); };
  return fam;
}

// ---------------------------------------------------------------------------
// n = 3, affine entry branch: f = C3 z.
// ---------------------------------------------------------------------------

FamilySpec make_dim3_linear(const std::string& id, double d, const ConstantSet& cs) {
  double C1 = cs.C(1), C2 = cs.C(2), C3 = cs.C(3);
  FamilySpec fam;
  fam.id = id;
  fam.n = 3;
  fam.d = d;
  fam.constants = cs;
  fam.gdata.f = [C3](const JV& z) { return C3 * z[0]; };
  fam.gdata.C1 = C1;
  fam.gdata.C2 = C2;
  fam.gdata.d = d;
  fam.u_box = box3(-0.5, 0.5);

  if (d == 0.0) {
    fam.flat_map = [](const JV& u) { return u; };
  } else if (d == 1.0) {
    fam.flat_map = [C2, C3](const JV& u) {
      return JV{u[0], u[2] * reciprocal(u[1]) + (C2 / C3) * log(u[1]),
                2.0 * sqrt(u[1])};
    };
  } else if (d == 2.0) {
    fam.flat_map = [C2, C3](const JV& u) {
      return JV{u[0], u[2] * pow(u[1], -2.0) - (C2 / C3) * reciprocal(u[1]),
                log(u[1])};
    };
  } else {
    fam.flat_map = [d, C2, C3](const JV& u) {
      return JV{u[0],
                pow(u[1], -d) * u[2] + (C2 / (C3 * (1.0 - d))) * pow(u[1], 1.0 - d),
                (2.0 / (2.0 - d)) * pow(u[1], (2.0 - d) / 2.0)};
    };
  }

  Matd eta(3, 3);
  if (d == 0.0) {
    eta << C1, C2, C3, C2, C3, 0.0, C3, 0.0, 0.0;
  } else {
    eta << 0.0, C3, 0.0, C3, 0.0, 0.0, 0.0, 0.0, C3;
  }
  fam.eta_flat = eta;

  if (d == 1.0) {
    AffineField E = diag_field({1.0, 0.0, 0.5});
    E.t << 0.0, C2 / C3, 0.0;
    fam.euler_flat = E;
  } else if (d == 2.0) {
    AffineField E = diag_field({1.0, -1.0, 0.0});
    E.t << 0.0, 0.0, 1.0;
    fam.euler_flat = E;
  } else {
    fam.euler_flat = diag_field({1.0, 1.0 - d, (2.0 - d) / 2.0});
  }

  if (d == 0.0) {
    fam.prepotential = [C1, C2, C3](const JV& x) {
      return (C1 / 6.0) * x[0] * x[0] * x[0] + (C2 / 2.0) * x[0] * x[0] * x[1] +
             (C3 / 2.0) * x[0] * x[0] * x[2] + (C3 / 2.0) * x[0] * x[1] * x[1];
    };
  } else {
    fam.prepotential = [C3](const JV& x) {
      return (C3 / 2.0) * x[0] * x[0] * x[1] + (C3 / 2.0) * x[0] * x[2] * x[2];
    };
  }

  fam.ode = OdeKind::entries3;
  fam.entries3 = [d, C1, C2, C3](const Jet& z) {
    return std::array<Jet, 3>{Jet(C1), -C3 * d * z + C2, lift(Jet(C3), z)};
  };
  fam.z_window = {-0.6, 0.6};

  fam.alt_constants = {
      make_cs({{1, d == 0.0 ? 0.3 : 0.0}, {2, 0.5}, {3, 0.9}}),
      make_cs({{1, d == 0.0 ? 0.9 : 0.0}, {2, 1.1}, {3, 1.4}})};
  fam.sample_constants = [d](SplitMix64& rng) {
    ConstantSet out;
    out.C(1) = d == 0.0 ? rng.uniform(0.3, 1.0) : 0.0;
    out.C(2) = rng.uniform(0.3, 1.0);
    out.C(3) = rng.uniform(0.6, 1.4);
    return out;
  };
  fam.rebind = [id, d](const ConstantSet& ncs) { return make_dim3_linear(id, d, ncs); };
  return fam;
}

// ---------------------------------------------------------------------------
// n = 3, pole branch: f = -C4 / (z + C3), split into seven flat charts by
// the values of d and the constants.
// ---------------------------------------------------------------------------

enum class Rat3 { pos_c1, c1_zero, c1_eq, gen, gen_c3zero, d_one, d_two };

FamilySpec make_dim3_rational(const std::string& id, double d, Rat3 br,
                              const ConstantSet& cs) {
  double C1 = cs.C(1), C2 = cs.C(2), C3 = cs.C(3), C4 = cs.C(4);
  FamilySpec fam;
  fam.id = id;
  fam.n = 3;
  fam.d = d;
  fam.constants = cs;
  fam.gdata.f = [C3, C4](const JV& z) { return -C4 * reciprocal(z[0] + C3); };
  fam.gdata.C1 = C1;
  fam.gdata.C2 = C2;
  fam.gdata.d = d;
  fam.u_box = box3(0.2, 0.8);
  fam.u_box.accept = [C3](const Vecd& u) {
    return std::fabs(C3 * u[1] + u[2]) >= 0.15 &&
           std::fabs(u[2] / u[1] + C3) >= 0.1;
  };

  switch (br) {
    case Rat3::pos_c1: {
      double s = std::sqrt(C1 * C4);
      double den = C4 * (C1 - C4);
      fam.flat_map = [C1, C2, C3, C4, s, den](const JV& u) {
        Jet invq = reciprocal(C3 * u[1] + u[2]);
        Jet x1 = (C1 * C3 * u[0] * u[1] + C2 * C3 * u[1] * u[1] +
                  C1 * u[0] * u[2] + C2 * u[1] * u[2] - C4 * u[1] * u[1]) *
                 invq * (1.0 / C1);
        Jet x2 = ((-C2 * C3 * s - C4 * (C1 - C4 + C2 * C3)) *
                      pow(u[1], (2.0 * C4 - s) / C4) -
                  C2 * (C4 + s) * u[2] * pow(u[1], (C4 - s) / C4)) *
                 invq * (1.0 / den);
        Jet x3 = ((C2 * C3 * s - C4 * (C1 - C4 + C2 * C3)) *
                      pow(u[1], (2.0 * C4 + s) / C4) -
                  C2 * (C4 - s) * u[2] * pow(u[1], (C4 + s) / C4)) *
                 invq * (1.0 / den);
        return JV{x1, x2, x3};
      };
      break;
    }
    case Rat3::c1_zero: {
      fam.flat_map = [C2, C3, C4](const JV& u) {
        Jet invq = reciprocal(C3 * u[1] + u[2]);
        Jet lg = log(u[1]);
        Jet x1 = u[0] + 0.5 * u[1] * u[1] * lg * lg * invq +
                 (C2 / (2.0 * C4)) * u[1] * (2.0 * lg - lg * lg - 2.0);
        Jet x2 = -u[1] * u[1] * lg * invq + (C2 / C4) * u[1] * (lg - 1.0);
        Jet x3 = -u[1] * u[1] * invq + (C2 / C4) * u[1];
        return JV{x1, x2, x3};
      };
      break;
    }
    case Rat3::c1_eq: {
      fam.flat_map = [C2, C3, C4](const JV& u) {
        Jet invq = reciprocal(C3 * u[1] + u[2]);
        Jet x1 = u[0] - u[1] * u[1] * invq + (C2 / C4) * u[1];
        Jet x2 = -0.5 * u[1] * u[1] * u[1] * invq +
                 (C2 / (4.0 * C4)) * u[1] * u[1];
        Jet x3 = -u[1] * invq + (C2 / C4) * log(u[1]);
        return JV{x1, x2, x3};
      };
      break;
    }
    case Rat3::gen: {
      fam.flat_map = [d, C2, C3, C4](const JV& u) {
        Jet invq = reciprocal(C3 * u[1] + u[2]);
        double dd = d * d;
        Jet x1 =
            u[0] + (2.0 / dd) * u[1] * u[1] * invq - (2.0 * C2 / (C4 * dd)) * u[1];
        Jet x2 = ((C2 * C3 - C4 * (1.0 - d)) * pow(u[1], 2.0 - d) +
                  C2 * u[2] * pow(u[1], 1.0 - d)) *
                 invq * (1.0 / (C4 * (1.0 - d)));
        Jet x3 = (2.0 * C2 * u[2] * pow(u[1], (2.0 - d) / 2.0) -
                  (C4 * (2.0 - d) - 2.0 * C2 * C3) * pow(u[1], (4.0 - d) / 2.0)) *
                 invq * (1.0 / (C4 * (2.0 - d)));
        return JV{x1, x2, x3};
      };
      break;
    }
    case Rat3::gen_c3zero: {
      fam.flat_map = [d, C2, C4](const JV& u) {
        Jet invu3 = reciprocal(u[2]);
        double dd = d * d;
        Jet x1 = ((C4 * dd * u[0] - 2.0 * C2 * u[1]) * u[2] +
                  2.0 * C4 * u[1] * u[1]) *
                 invu3 * (1.0 / (C4 * dd));
        Jet x2 = (2.0 * C2 * u[2] * pow(u[1], (2.0 - d) / 2.0) -
                  C4 * (2.0 - d) * pow(u[1], (4.0 - d) / 2.0)) *
                 invu3 * (1.0 / (C4 * (2.0 - d)));
        Jet x3 = (C2 * u[2] * pow(u[1], 1.0 - d) -
                  C4 * (1.0 - d) * pow(u[1], 2.0 - d)) *
                 invu3 * (1.0 / (C4 * (1.0 - d)));
        return JV{x1, x2, x3};
      };
      break;
    }
    case Rat3::d_one: {
      fam.flat_map = [C2, C3, C4](const JV& u) {
        Jet invq = reciprocal(C3 * u[1] + u[2]);
        Jet x1 = u[0] + 2.0 * u[1] * u[1] * invq - (2.0 * C2 / C4) * u[1];
        Jet x2 = -u[1] * invq + (C2 / C4) * log(u[1]);
        Jet x3 = -pow(u[1], 1.5) * invq + (2.0 * C2 / C4) * sqrt(u[1]);
        return JV{x1, x2, x3};
      };
      break;
    }
    case Rat3::d_two: {
      fam.flat_map = [C2, C3, C4](const JV& u) {
        Jet invq = reciprocal(C3 * u[1] + u[2]);
        Jet x1 = u[0] + 0.5 * u[1] * u[1] * invq - (C2 / (2.0 * C4)) * u[1];
        Jet x2 = -u[1] * invq + (C2 / C4) * log(u[1]);
        Jet x3 = -invq - (C2 / C4) * reciprocal(u[1]);
        return JV{x1, x2, x3};
      };
      break;
    }
  }

  fam.ode = OdeKind::entries3;
  fam.entries3 = [d, C1, C2, C3, C4](const Jet& z) {
    Jet r = reciprocal(z + C3);
    return std::array<Jet, 3>{Jet(C1),
                              C3 * C4 * r * r - (2.0 - d) * C4 * r + C2,
                              C4 * r * r};
  };
  // residual magnitudes in the branch check blow up near z = -C3; keep the
  // grid where double precision resolves the stated tolerance
  if (br == Rat3::gen_c3zero)
    fam.z_window = {0.5, 1.2};
  else
    fam.z_window = {0.35, 1.05};

  switch (br) {
    case Rat3::pos_c1:
      fam.alt_constants = {make_cs({{1, 1.2}, {2, 0.3}, {3, 0.4}, {4, 0.5}}),
                           make_cs({{1, 1.8}, {2, 0.6}, {3, 0.25}, {4, 0.7}})};
      fam.sample_constants = [](SplitMix64& rng) {
        ConstantSet out;
        out.C(2) = rng.uniform(0.3, 0.6);
        out.C(3) = rng.uniform(0.2, 0.45);
        do {
          out.C(1) = rng.uniform(1.1, 2.0);
          out.C(4) = rng.uniform(0.4, 0.8);
        } while (std::fabs(out.C(1) - out.C(4)) < 0.2);
        return out;
      };
      break;
    case Rat3::c1_eq:
      fam.alt_constants = {make_cs({{1, 0.5}, {2, 0.3}, {3, 0.3}, {4, 0.5}}),
                           make_cs({{1, 0.9}, {2, 0.55}, {3, 0.15}, {4, 0.9}})};
      fam.sample_constants = [](SplitMix64& rng) {
        ConstantSet out;
        out.C(2) = rng.uniform(0.3, 0.6);
        out.C(3) = rng.uniform(0.15, 0.4);
        out.C(4) = rng.uniform(0.4, 1.0);
        out.C(1) = out.C(4);
        return out;
      };
      break;
    default:
      fam.alt_constants = {
          make_cs({{2, 0.4}, {3, br == Rat3::gen_c3zero ? 0.0 : 0.3}, {4, 0.6}}),
          make_cs({{2, 0.65}, {3, br == Rat3::gen_c3zero ? 0.0 : 0.2}, {4, 1.0}})};
      fam.sample_constants = [br](SplitMix64& rng) {
        ConstantSet out;
        out.C(2) = rng.uniform(0.3, 0.7);
        out.C(3) = br == Rat3::gen_c3zero ? 0.0 : rng.uniform(0.15, 0.45);
        out.C(4) = rng.uniform(0.5, 1.1);
        return out;
      };
      break;
  }
  fam.rebind = [id, d, br](const ConstantSet& ncs) {
    return make_dim3_rational(id, d, br, ncs);
  };
  return fam;
}

// Pole-branch chart with d = 0 and matched leading constants; the target
// metric is anti-diagonal in the last two coordinates.
void attach_example_d0(FamilySpec& fam) {
  double C4 = fam.constants.C(4);
  Matd eta(3, 3);
  eta << C4, 0.0, 0.0, 0.0, 0.0, -C4, 0.0, -C4, 0.0;
  fam.eta_flat = eta;
  fam.euler_flat = diag_field({1.0, 2.0, 0.0});
  fam.prepotential = [C4](const JV& x) {
    return (2.0 * std::sqrt(2.0) / 3.0) * C4 *
               pow(x[1], 1.5) * pow(x[2], 1.5) +
           (C4 / 6.0) * x[0] * x[0] * x[0] - C4 * x[0] * x[1] * x[2];
  };
  double C3 = fam.constants.C(3);
  fam.u_box = box3(-2.5, -1.5);
  fam.u_box.lo[1] = 1.0;
  fam.u_box.hi[1] = 2.0;
  fam.u_box.accept = [C3](const Vecd& u) {
    return C3 * u[1] + u[2] <= -0.3;
  };
  fam.z_window = {-2.5, -0.9};
}

void attach_example_d2(FamilySpec& fam, bool with_w) {
  double C2 = fam.constants.C(2), C3 = fam.constants.C(3),
         C4 = fam.constants.C(4);
  Matd eta(3, 3);
  eta << 0.0, 0.0, C4, 0.0, C4, 0.0, C4, 0.0, 0.0;
  fam.eta_flat = eta;
  AffineField E = diag_field({1.0, 0.0, -1.0});
  if (with_w) E.t << 0.0, 1.0 / C4, 0.0;
  fam.euler_flat = E;
  if (!with_w) {
    fam.prepotential = [C4](const JV& x) {
      return (C4 / 2.0) * x[0] * x[0] * x[2] + (C4 / 2.0) * x[0] * x[1] * x[1] +
             (C4 / 8.0) * x[1] * x[1] * x[1] * x[1] * reciprocal(x[2]);
    };
    fam.u_box = box3(0.5, 1.5);
    fam.u_box.accept = [C3](const Vecd& u) {
      return std::fabs(C3 * u[1] + u[2]) >= 0.3;
    };
    fam.z_window = {0.5 / 1.75, 1.5 / 0.75};
  } else {
    fam.prepotential = [C4](const JV& x) {
      Jet W = lambert_w(C4 * x[2] * exp(C4 * x[1] - 1.0));
      Jet W2 = W * W;
      return (3.0 * W2 * W2 + 22.0 * W2 * W + 63.0 * W2 + 72.0 * W) *
                 reciprocal(24.0 * C4 * C4 * C4 * x[2]) +
             (C4 / 2.0) * x[0] * x[0] * x[2] + (C4 / 2.0) * x[0] * x[1] * x[1];
    };
    // principal-branch W inverts the chart only where C3 u^2 + u^3 < 0
    fam.u_box = box3(-1.5, -0.8);
    fam.u_box.lo[1] = 1.0;
    fam.u_box.hi[1] = 1.6;
    const double guard = -std::exp(-1.0) + 0.06;
    fam.u_box.accept = [C2, C3, C4, guard](const Vecd& u) {
      double q = C3 * u[1] + u[2];
      if (q > -0.3) return false;
      double x2 = -u[1] / q + (C2 / C4) * std::log(u[1]);
      double x3 = -1.0 / q - C2 / (C4 * u[1]);
      if (std::fabs(x3) < 0.1) return false;
      double arg = C4 * x3 * std::exp(C4 * x2 - 1.0);
      return arg >= guard;
    };
    fam.z_window = {-1.5, -0.85};
  }
}

// ---------------------------------------------------------------------------
// n = 4, separable branch: f = w h1(z) + h2(z) with h1 = C3 e^{C4 z}.
// ---------------------------------------------------------------------------

FamilySpec make_dim4_exp(const std::string& id, double d, const ConstantSet& cs,
                         SampleBox ubox, std::pair<double, double> zw,
                         std::pair<double, double> ww) {
  double C3 = cs.C(3), C4 = cs.C(4), C5 = cs.C(5), C6 = cs.C(6), C7 = cs.C(7);
  FamilySpec fam;
  fam.id = id;
  fam.n = 4;
  fam.d = d;
  fam.constants = cs;

  std::function<Jet(const Jet&)> h1, h2;
  if (C4 == 0.0) {
    h1 = [C3](const Jet&) { return Jet(C3); };
    h2 = [C5, C6, C7](const Jet& z) { return C5 * z * z + C6 * z + C7; };
  } else {
    h1 = [C3, C4](const Jet& z) { return C3 * exp(C4 * z); };
    h2 = [C3, C4, C5, C6, C7](const Jet& z) {
      return C7 - exp(C4 * z) *
                      (C3 * C4 * C4 * z * z - C4 * (2.0 * C3 + C5) * z -
                       C4 * C6 + 2.0 * C3 + C5) *
                      (1.0 / (C4 * C4));
    };
  }
  fam.h1 = h1;
  fam.h2 = h2;
  fam.gdata.f = [h1, h2](const JV& zw_) { return zw_[1] * h1(zw_[0]) + h2(zw_[0]); };
  fam.gdata.C1 = 0.0;
  fam.gdata.C2 = cs.C(2);
  fam.gdata.d = d;
  fam.u_box = std::move(ubox);
  fam.ode = OdeKind::exp4;
  fam.z_window = zw;
  fam.w_window = ww;
  return fam;
}

// f = z + w instance, where the flat chart and the target data are explicit.
FamilySpec make_dim4_exp_zw(const std::string& id, double d, double C2) {
  ConstantSet cs = make_cs({{2, C2}, {3, 1.0}, {6, 1.0}});
  FamilySpec fam = make_dim4_exp(id, d, cs, box4(-0.5, 0.5, -0.5, 0.5),
                                 {-0.6, 0.6}, {-0.6, 0.6});

  if (d == 1.0) {
    fam.flat_map = [](const JV& u) {
      return JV{u[0], (u[2] + u[3]) * reciprocal(u[1]), 0.5 * u[1] + u[2],
                log(u[1])};
    };
  } else {
    fam.flat_map = [d](const JV& u) {
      return JV{u[0], pow(u[1], -d) * (u[2] + u[3]), 0.5 * u[1] + u[2],
                pow(u[1], 1.0 - d) * (1.0 / (1.0 - d))};
    };
  }

  Matd eta(4, 4);
  eta << 0.0, 1.0, 0.0, C2, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, C2, 0.0,
      1.0, 0.0;
  fam.eta_flat = eta;

  if (d == 1.0) {
    AffineField E = diag_field({1.0, 0.0, 1.0, 0.0});
    E.t << 0.0, 0.0, 0.0, 1.0;
    fam.euler_flat = E;
  } else {
    fam.euler_flat = diag_field({1.0, 1.0 - d, 1.0, 1.0 - d});
  }

  if (d == -2.0) {
    fam.prepotential = [C2](const JV& x) {
      return (C2 / 2.0) * x[0] * x[0] * x[3] + x[0] * x[2] * x[3] -
             0.3 * std::cbrt(9.0) * pow(x[3], 5.0 / 3.0) +
             0.5 * x[0] * x[0] * x[1];
    };
  } else if (d == -1.0) {
    fam.prepotential = [C2](const JV& x) {
      return 0.25 * x[3] * x[3] * log(x[3]) +
             (C2 / 2.0) * x[0] * x[0] * x[3] + x[0] * x[2] * x[3] +
             0.5 * x[0] * x[0] * x[1];
    };
  } else if (d == 1.0) {
    fam.prepotential = [C2](const JV& x) {
      return 0.125 * exp(2.0 * x[3]) + (C2 / 2.0) * x[0] * x[0] * x[3] +
             x[0] * x[2] * x[3] + 0.5 * x[0] * x[0] * x[1];
    };
  } else if (d == 2.0) {
    fam.prepotential = [C2](const JV& x) {
      return (C2 / 2.0) * x[0] * x[0] * x[3] + x[0] * x[2] * x[3] +
             0.5 * x[0] * x[0] * x[1] - reciprocal(6.0 * x[3]);
    };
  }

  fam.alt_constants = {make_cs({{2, 0.35}, {3, 1.0}, {6, 1.0}}),
                       make_cs({{2, 1.2}, {3, 1.0}, {6, 1.0}})};
  fam.sample_constants = [](SplitMix64& rng) {
    ConstantSet out = make_cs({{3, 1.0}, {6, 1.0}});
    out.C(2) = rng.uniform(0.3, 1.2);
    return out;
  };
  fam.rebind = [id, d](const ConstantSet& ncs) {
    return make_dim4_exp_zw(id, d, ncs.C(2));
  };
  return fam;
}

// f = (w - z^2) e^z instance.
FamilySpec make_dim4_exp_wz2(const std::string& id, double d, double C2) {
  ConstantSet cs = make_cs({{2, C2}, {3, 1.0}, {4, 1.0}, {5, -2.0}});
  FamilySpec fam = make_dim4_exp(id, d, cs, box4(-0.4, 0.4, 0.5, 1.5),
                                 {-0.5, 0.5}, {0.35, 1.9});

  if (d == 1.0) {
    fam.flat_map = [C2](const JV& u) {
      Jet lg = log(u[1]);
      Jet core = (u[1] * u[3] - u[2] * u[2]) * pow(u[1], -2.0);
      Jet ez = exp(u[2] * reciprocal(u[1]));
      return JV{u[0] + 0.5 * u[1] - 0.5 * u[1] * lg, core * ez + C2 * lg,
                (core * lg + 2.0) * ez + (C2 / 2.0) * lg * lg, u[1]};
    };
  } else if (d == 2.0) {
    fam.flat_map = [C2](const JV& u) {
      Jet ez = exp(u[2] * reciprocal(u[1]));
      Jet x2 = (2.0 * u[1] * u[1] + u[1] * u[3] - u[2] * u[2]) *
               pow(u[1], -2.0) * ez;
      Jet x3 = (u[1] * u[3] - u[2] * u[2]) * pow(u[1], -3.0) * ez -
               C2 * reciprocal(u[1]);
      return JV{u[0] - 0.5 * u[1], x2, x3, log(u[1])};
    };
  } else {
    fam.flat_map = [d, C2](const JV& u) {
      Jet ez = exp(u[2] * reciprocal(u[1]));
      Jet x1 = u[0] + u[1] * (1.0 / (2.0 * (1.0 - d)));
      Jet x2 = C2 * log(u[1]) -
               (2.0 * (1.0 - d) * u[1] * u[1] + u[2] * u[2] - u[1] * u[3]) *
                   pow(u[1], -2.0) * ez;
      Jet x3 = pow(u[1], -d - 1.0) * (u[1] * u[3] - u[2] * u[2]) * ez +
               (C2 / (1.0 - d)) * pow(u[1], 1.0 - d);
      Jet x4 = pow(u[1], 2.0 - d) * (1.0 / (2.0 - d));
      return JV{x1, x2, x3, x4};
    };
  }

  if (d == -1.0) {
    Matd eta(4, 4);
    eta << 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, -0.25, 1.0, 0.0, 0.0, 0.0, 0.0,
        -0.25, 0.0, 0.0;
    fam.eta_flat = eta;
    AffineField E = diag_field({1.0, 0.0, 2.0, 3.0});
    E.t << 0.0, C2, 0.0, 0.0;
    fam.euler_flat = E;
    fam.prepotential = [C2](const JV& x) {
      double c3 = std::cbrt(3.0);
      double c9 = std::cbrt(9.0);
      return -(1.0 / 32.0) * c3 * C2 * pow(x[3], 4.0 / 3.0) * log(3.0 * x[3]) +
             (15.0 / 128.0) * c3 * C2 * pow(x[3], 4.0 / 3.0) +
             (1.0 / 32.0) * c9 * pow(x[3], 2.0 / 3.0) * x[2] +
             (3.0 / 32.0) * c3 * pow(x[3], 4.0 / 3.0) * x[1] +
             0.5 * x[0] * x[0] * x[2] - 0.25 * x[0] * x[1] * x[3];
    };
  } else if (d == -2.0) {
    Matd eta(4, 4);
    double s = -1.0 / 6.0;
    eta << 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, s, 1.0, 0.0, 0.0, 0.0, 0.0, s,
        0.0, 0.0;
    fam.eta_flat = eta;
    AffineField E = diag_field({1.0, 0.0, 3.0, 4.0});
    E.t << 0.0, C2, 0.0, 0.0;
    fam.euler_flat = E;
    fam.prepotential = [C2](const JV& x) {
      double r2 = std::sqrt(2.0);
      return -(1.0 / 45.0) * r2 * C2 * pow(x[3], 1.25) * log(2.0 * sqrt(x[3])) +
             (4.0 / 75.0) * r2 * C2 * pow(x[3], 1.25) +
             (2.0 / 45.0) * r2 * pow(x[3], 1.25) * x[1] +
             (1.0 / 72.0) * sqrt(x[3]) * x[2] + 0.5 * x[0] * x[0] * x[2] -
             (1.0 / 6.0) * x[0] * x[1] * x[3];
    };
  } else if (d == 2.0) {
    Matd eta(4, 4);
    eta << 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.5, 1.0, 0.0, 0.0, 0.0, 0.0,
        0.5, 0.0, C2;
    fam.eta_flat = eta;
    AffineField E = diag_field({1.0, 0.0, -1.0, 0.0});
    E.t << 0.0, 0.0, 0.0, 1.0;
    fam.euler_flat = E;
    fam.prepotential = [C2](const JV& x) {
      return -(1.0 / 16.0) * x[2] * exp(2.0 * x[3]) +
             (C2 + 0.5 * x[1]) * exp(x[3]) +
             (C2 / 2.0) * x[0] * x[3] * x[3] + 0.5 * x[0] * x[1] * x[3] +
             0.5 * x[0] * x[0] * x[2];
    };
  } else if (d == 1.0) {
    Matd eta(4, 4);
    eta << 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 0.0,
        0.0, 0.5, 0.0;
    fam.eta_flat = eta;
    AffineField E;
    E.M = Matd::Zero(4, 4);
    E.t = Vecd::Zero(4);
    E.M(0, 0) = 1.0;
    E.M(0, 3) = -0.5;
    E.M(2, 1) = 1.0;
    E.M(3, 3) = 1.0;
    E.t[1] = C2;
    fam.euler_flat = E;
    fam.prepotential = [C2](const JV& x) {
      Jet lg = log(x[3]);
      Jet q = x[3] * x[3];
      return (C2 / 24.0) * q * lg * lg * lg -
             (3.0 / 16.0) * (C2 + (2.0 / 3.0) * x[1]) * q * lg * lg +
             (7.0 / 16.0) * (C2 + (6.0 / 7.0) * x[1] + (4.0 / 7.0) * x[2]) * q *
                 lg +
             0.5 * x[0] * x[2] * x[3] + 0.5 * x[0] * x[0] * x[1] -
             ((7.0 * x[1] + 6.0 * x[2]) / 16.0) * q;
    };
  }

  fam.alt_constants = {make_cs({{2, 0.3}, {3, 1.0}, {4, 1.0}, {5, -2.0}}),
                       make_cs({{2, 0.9}, {3, 1.0}, {4, 1.0}, {5, -2.0}})};
  fam.sample_constants = [](SplitMix64& rng) {
    ConstantSet out = make_cs({{3, 1.0}, {4, 1.0}, {5, -2.0}});
    out.C(2) = rng.uniform(0.3, 1.0);
    return out;
  };
  fam.rebind = [id, d](const ConstantSet& ncs) {
    return make_dim4_exp_wz2(id, d, ncs.C(2));
  };
  return fam;
}

FamilySpec make_dim4_exp_free(const std::string& id, double d,
                              const ConstantSet& cs) {
  FamilySpec fam = make_dim4_exp(id, d, cs, box4(-0.5, 0.5, 0.5, 1.5),
                                 {-0.5, 0.5}, {0.35, 1.9});
  fam.alt_constants = {
      make_cs({{2, 0.4}, {3, 0.6}, {4, 0.7}, {5, 0.2}, {6, 0.5}, {7, -0.1}}),
      make_cs({{2, 0.7}, {3, 1.1}, {4, 1.2}, {5, -0.3}, {6, 0.3}, {7, 0.4}})};
  bool quad = cs.C(4) == 0.0;
  fam.sample_constants = [quad](SplitMix64& rng) {
    ConstantSet out;
    out.C(2) = rng.uniform(0.3, 0.9);
    out.C(3) = rng.uniform(0.5, 1.2);
    out.C(4) = quad ? 0.0 : rng.uniform(0.5, 1.2);
    out.C(5) = rng.uniform(-0.5, 0.5);
    out.C(6) = rng.uniform(-0.5, 0.5);
    out.C(7) = rng.uniform(-0.5, 0.5);
    return out;
  };
  fam.rebind = [id, d](const ConstantSet& ncs) {
    return make_dim4_exp_free(id, d, ncs);
  };
  if (quad) {
    fam.alt_constants = {
        make_cs({{2, 0.4}, {3, 0.6}, {5, 0.2}, {6, 0.5}, {7, -0.1}}),
        make_cs({{2, 0.7}, {3, 1.1}, {5, -0.3}, {6, 0.3}, {7, 0.4}})};
  }
  return fam;
}

// ---------------------------------------------------------------------------
// n = 4, pole branch: f = C3 - A(z) / (2 B(z) + w).
// ---------------------------------------------------------------------------

FamilySpec make_dim4_rational(const std::string& id, double d,
                              const ConstantSet& cs) {
  double C1 = cs.C(1), C2 = cs.C(2), C3 = cs.C(3), C4 = cs.C(4), C5 = cs.C(5),
         C6 = cs.C(6), C7 = cs.C(7), C8 = cs.C(8);
  double kappa = C2 + (1.0 - d) * C3;

  auto A = [kappa, C4, C5](const Jet& z) {
    Jet s = sinh(C4 * (z + C5));
    return (kappa / (C4 * C4)) * s * s;
  };
  auto B = [C1, kappa, C4, C5, C6, C7, C8](const Jet& z) {
    Jet a = 2.0 * C4 * (z + C5);
    return C6 * cosh(a) + C7 * sinh(a) -
           0.5 * z * (C1 / kappa + 4.0 * C4 * C7) - 0.5 * z * z + C8;
  };

  FamilySpec fam;
  fam.id = id;
  fam.n = 4;
  fam.d = d;
  fam.constants = cs;
  fam.poleA = A;
  fam.poleB = B;
  fam.gdata.f = [C3, A, B](const JV& zw) {
    return C3 - A(zw[0]) * reciprocal(2.0 * B(zw[0]) + zw[1]);
  };
  fam.gdata.C1 = C1;
  fam.gdata.C2 = C2;
  fam.gdata.d = d;

  fam.u_box = box4(0.6, 1.2, 0.8, 1.3);
  fam.u_box.accept = [A, B, C5](const Vecd& u) {
    double z = u[2] / u[1];
    double w = u[3] / u[1];
    if (std::fabs(z + C5) < 0.1) return false;
    double den = 2.0 * B(Jet(z)).value() + w;
    if (std::fabs(den) < 0.2) return false;
    // The anti-diagonal metric entry is A/(2B+w)^2; eta degenerates as it
    // vanishes, so keep it bounded below.
    return std::fabs(A(Jet(z)).value()) >= 0.06 * den * den;
  };
  fam.ode = OdeKind::rational4;
  fam.z_window = {0.05, 0.9};
  fam.w_window = {0.5, 2.0};

  fam.alt_constants = {
      make_cs({{1, d == 0.0 ? 0.3 : 0.0},
               {2, 0.7},
               {3, 0.4},
               {4, 0.6},
               {5, 0.25},
               {6, 0.5},
               {7, 0.2},
               {8, 0.15}}),
      make_cs({{1, d == 0.0 ? 0.55 : 0.0},
               {2, 1.1},
               {3, 0.6},
               {4, 0.85},
               {5, 0.15},
               {6, 0.7},
               {7, 0.35},
               {8, 0.05}})};
  fam.sample_constants = [d](SplitMix64& rng) {
    ConstantSet out;
    out.C(1) = d == 0.0 ? rng.uniform(0.2, 0.6) : 0.0;
    out.C(2) = rng.uniform(0.6, 1.2);
    out.C(3) = rng.uniform(0.3, 0.7);
    out.C(4) = rng.uniform(0.5, 0.8);
    out.C(5) = rng.uniform(0.15, 0.3);
    out.C(6) = rng.uniform(0.4, 0.8);
    out.C(7) = rng.uniform(0.15, 0.4);
    out.C(8) = rng.uniform(0.05, 0.2);
    return out;
  };
  fam.rebind = [id, d](const ConstantSet& ncs) {
    return make_dim4_rational(id, d, ncs);
  };
  return fam;
}

std::vector<FamilySpec> build_registry() {
  std::vector<FamilySpec> r;

  r.push_back(make_dim2("dim2-d0", 0.0, make_cs({{1, 0.7}, {2, 1.3}})));
  r.push_back(make_dim2("dim2-d1", 1.0, make_cs({{2, 1.1}})));
  r.push_back(make_dim2("dim2-generic", 0.65, make_cs({{2, 0.9}})));

  r.push_back(make_dim3_linear("dim3-linear-d0", 0.0,
                               make_cs({{1, 0.5}, {2, 0.8}, {3, 1.2}})));
  r.push_back(make_dim3_linear("dim3-linear-d1", 1.0,
                               make_cs({{2, 0.6}, {3, 1.0}})));
  r.push_back(make_dim3_linear("dim3-linear-d2", 2.0,
                               make_cs({{2, 0.9}, {3, 0.8}})));
  r.push_back(make_dim3_linear("dim3-linear-generic", 0.5,
                               make_cs({{2, 0.7}, {3, 1.1}})));

  r.push_back(make_dim3_rational(
      "dim3-rational-d0", 0.0, Rat3::pos_c1,
      make_cs({{1, 1.5}, {2, 0.4}, {3, 0.3}, {4, 0.6}})));
  r.push_back(make_dim3_rational("dim3-rational-d0-C1zero", 0.0, Rat3::c1_zero,
                                 make_cs({{2, 0.5}, {3, 0.3}, {4, 0.8}})));
  r.push_back(make_dim3_rational(
      "dim3-rational-d0-C1eqC4", 0.0, Rat3::c1_eq,
      make_cs({{1, 0.7}, {2, 0.4}, {3, 0.2}, {4, 0.7}})));
  r.push_back(make_dim3_rational("dim3-rational-generic", 0.5, Rat3::gen,
                                 make_cs({{2, 0.6}, {3, 0.4}, {4, 0.9}})));
  r.push_back(make_dim3_rational("dim3-rational-generic-C3zero", 0.5,
                                 Rat3::gen_c3zero,
                                 make_cs({{2, 0.55}, {4, 0.75}})));
  r.push_back(make_dim3_rational("dim3-rational-d1", 1.0, Rat3::d_one,
                                 make_cs({{2, 0.5}, {3, 0.35}, {4, 0.65}})));
  r.push_back(make_dim3_rational("dim3-rational-d2", 2.0, Rat3::d_two,
                                 make_cs({{2, 0.45}, {3, 0.25}, {4, 0.85}})));

  {
    FamilySpec fam = make_dim3_rational(
        "dim3-example-d0", 0.0, Rat3::c1_eq,
        make_cs({{1, 0.7}, {3, 0.3}, {4, 0.7}}));
    attach_example_d0(fam);
    fam.alt_constants = {make_cs({{1, 0.5}, {3, 0.25}, {4, 0.5}}),
                         make_cs({{1, 1.0}, {3, 0.35}, {4, 1.0}})};
    fam.sample_constants = [](SplitMix64& rng) {
      ConstantSet out;
      out.C(3) = rng.uniform(0.2, 0.4);
      out.C(4) = rng.uniform(0.5, 1.0);
      out.C(1) = out.C(4);
      return out;
    };
    fam.rebind = [](const ConstantSet& ncs) {
      FamilySpec f2 = make_dim3_rational("dim3-example-d0", 0.0, Rat3::c1_eq, ncs);
      attach_example_d0(f2);
      return f2;
    };
    r.push_back(std::move(fam));
  }
  {
    FamilySpec fam = make_dim3_rational("dim3-example-d2-C2zero", 2.0,
                                        Rat3::d_two,
                                        make_cs({{3, 0.25}, {4, 0.9}}));
    attach_example_d2(fam, false);
    fam.alt_constants = {make_cs({{3, 0.2}, {4, 0.6}}),
                         make_cs({{3, 0.35}, {4, 1.2}})};
    fam.sample_constants = [](SplitMix64& rng) {
      ConstantSet out;
      out.C(3) = rng.uniform(0.15, 0.4);
      out.C(4) = rng.uniform(0.5, 1.2);
      return out;
    };
    fam.rebind = [](const ConstantSet& ncs) {
      FamilySpec f2 = make_dim3_rational("dim3-example-d2-C2zero", 2.0,
                                         Rat3::d_two, ncs);
      attach_example_d2(f2, false);
      return f2;
    };
    r.push_back(std::move(fam));
  }
  {
    FamilySpec fam = make_dim3_rational(
        "dim3-example-d2-C2one", 2.0, Rat3::d_two,
        make_cs({{2, 1.0}, {3, 0.3}, {4, 0.8}}));
    attach_example_d2(fam, true);
    fam.alt_constants = {make_cs({{2, 1.0}, {3, 0.25}, {4, 0.7}}),
                         make_cs({{2, 1.0}, {3, 0.35}, {4, 0.9}})};
    fam.sample_constants = [](SplitMix64& rng) {
      ConstantSet out;
      out.C(2) = 1.0;
      out.C(3) = rng.uniform(0.25, 0.35);
      out.C(4) = rng.uniform(0.65, 0.95);
      return out;
    };
    fam.rebind = [](const ConstantSet& ncs) {
      FamilySpec f2 = make_dim3_rational("dim3-example-d2-C2one", 2.0,
                                         Rat3::d_two, ncs);
      attach_example_d2(f2, true);
      return f2;
    };
    r.push_back(std::move(fam));
  }

  r.push_back(make_dim4_exp_zw("dim4-exp-C4zero-dm2", -2.0, 0.7));
  r.push_back(make_dim4_exp_zw("dim4-exp-C4zero-dm1", -1.0, 0.6));
  r.push_back(make_dim4_exp_zw("dim4-exp-C4zero-d1", 1.0, 0.5));
  r.push_back(make_dim4_exp_zw("dim4-exp-C4zero-d2", 2.0, 0.8));
  r.push_back(make_dim4_exp_zw("dim4-exp-C4zero-generic", 0.5, 0.4));
  r.push_back(make_dim4_exp_free(
      "dim4-exp-C4zero-quadratic", 0.5,
      make_cs({{2, 0.3}, {3, 0.7}, {5, 0.4}, {6, 0.25}, {7, -0.3}})));

  r.push_back(make_dim4_exp_wz2("dim4-exp-C4one-dm1", -1.0, 0.5));
  r.push_back(make_dim4_exp_wz2("dim4-exp-C4one-dm2", -2.0, 0.6));
  r.push_back(make_dim4_exp_wz2("dim4-exp-C4one-d1", 1.0, 0.4));
  r.push_back(make_dim4_exp_wz2("dim4-exp-C4one-d2", 2.0, 0.7));
  r.push_back(make_dim4_exp_wz2("dim4-exp-C4one-generic", 0.5, 0.45));

  r.push_back(make_dim4_exp_free(
      "dim4-exp-general", 0.5,
      make_cs({{2, 0.55}, {3, 0.8}, {4, 0.9}, {5, 0.3}, {6, -0.4}, {7, 0.2}})));

  r.push_back(make_dim4_rational(
      "dim4-rational-d0", 0.0,
      make_cs({{1, 0.4}, {2, 0.9}, {3, 0.5}, {4, 0.7}, {5, 0.2}, {6, 0.6},
               {7, 0.3}, {8, 0.1}})));
  r.push_back(make_dim4_rational(
      "dim4-rational-generic", 0.5,
      make_cs({{2, 0.9}, {3, 0.5}, {4, 0.7}, {5, 0.2}, {6, 0.6}, {7, 0.3},
               {8, 0.1}})));

  return r;
}

}  // namespace

const std::vector<FamilySpec>& registry() {
  static const std::vector<FamilySpec> reg = build_registry();
  return reg;
}

const FamilySpec& find_family(const std::string& id) {
  for (const auto& fam : registry())
    if (fam.id == id) return fam;
  throw UnknownFamily("no catalog entry named " + id);
}

std::vector<const FamilySpec*> select_families(const std::vector<std::string>& ids) {
  std::vector<const FamilySpec*> out;
  for (const auto& id : ids) {
    if (id == "all") {
      for (const auto& fam : registry()) out.push_back(&fam);
      continue;
    }
    out.push_back(&find_family(id));
  }
  return out;
}

FamilySpec perturbed(const FamilySpec& fam) {
  FamilySpec p = fam;
  p.id += "-perturbed";
  p.flat_map.reset();
  p.eta_flat.reset();
  p.euler_flat.reset();
  p.prepotential.reset();
  p.ode = OdeKind::none;
  p.entries3 = nullptr;
  p.h1 = p.h2 = p.poleA = p.poleB = nullptr;
  p.alt_constants.clear();
  p.sample_constants = nullptr;
  p.rebind = nullptr;
  if (fam.n == 2) {
    p.gdata.eta11_shift = [](const JV& u) { return 0.1 * u[1] * u[1] * u[1]; };
  } else {
    ZFunction base = fam.gdata.f;
    p.gdata.f = [base](const JV& z) {
      return base(z) + 0.1 * z[0] * z[0] * z[0];
    };
  }
  return p;
}

Vecd sample_point(const SampleBox& box, SplitMix64& rng) {
  int n = static_cast<int>(box.lo.size());
  for (int tries = 0; tries < 10000; ++tries) {
    Vecd u(n);
    for (int i = 0; i < n; ++i) u[i] = rng.uniform(box.lo[i], box.hi[i]);
    if (!box.accept || box.accept(u)) return u;
  }
  throw NoConvergence("sample window predicate kept rejecting");
}

namespace {

double separating_residual(const FamilySpec& fam, double z, double w) {
  Jet zj = jet_var(0, z, 2, 3);
  Jet wj = jet_var(1, w, 2, 3);
  Jet f = fam.gdata.f({zj, wj});
  Jet fw = derivative(f, 1);
  Jet fww = derivative(fw, 1);
  Jet fwww = derivative(fww, 1);
  return std::fabs(2.0 * fw.value() * fwww.value() -
                   3.0 * fww.value() * fww.value());
}

}  // namespace

double ode_residual(const FamilySpec& fam, double z, double w) {
  switch (fam.ode) {
    case OdeKind::none:
      return 0.0;
    case OdeKind::entries3: {
      Jet zj = jet_var(0, z, 1, 3);
      auto e3 = fam.entries3(zj);
      Jet F2 = lift(e3[1], zj);
      Jet F3 = lift(e3[2], zj);
      double r1 =
          (derivative(F2, 0) + zj * derivative(F3, 0) + fam.d * F3).value();
      Jet F3p = derivative(F3, 0);
      double r2 = (2.0 * F3 * derivative(F3p, 0) - 3.0 * F3p * F3p).value();

      Jet f = fam.gdata.f({zj});
      Jet df = derivative(f, 0);
      Jet F2f = -zj * df - (fam.d - 1.0) * f + fam.gdata.C2;
      double agree = std::max(max_coeff(F2 - F2f), max_coeff(F3 - df));
      agree = std::max(agree, std::fabs(e3[0].value() - fam.gdata.C1));
      return std::max({std::fabs(r1), std::fabs(r2), agree});
    }
    case OdeKind::exp4: {
      double C3 = fam.constants.C(3), C4 = fam.constants.C(4);
      Jet zj = jet_var(0, z, 1, 3);
      auto h1v = uni4(lift(fam.h1(zj), zj));
      auto h2v = uni4(lift(fam.h2(zj), zj));
      double eqh = h2v[3] - 2.0 * C4 * h2v[2] + C4 * C4 * h2v[1] +
                   2.0 * C3 * C4 * std::exp(C4 * z);
      double h1s = h1v[0] * h1v[2] - h1v[1] * h1v[1];
      return std::max({std::fabs(eqh), std::fabs(h1s),
                       separating_residual(fam, z, w)});
    }
    case OdeKind::rational4: {
      double C1 = fam.constants.C(1);
      double kappa =
          fam.constants.C(2) + (1.0 - fam.d) * fam.constants.C(3);
      Jet zj = jet_var(0, z, 1, 3);
      auto Av = uni4(lift(fam.poleA(zj), zj));
      auto Bv = uni4(lift(fam.poleB(zj), zj));
      double eqA = Av[2] * Av[0] - Av[1] * Av[1] + 2.0 * kappa * Av[0];
      double eqB = Av[0] * Bv[3] - Av[1] * (Bv[2] + 1.0) +
                   2.0 * kappa * (Bv[1] + z) + C1;
      return std::max({std::fabs(eqA), std::fabs(eqB),
                       separating_residual(fam, z, w)});
    }
  }
  return 0.0;
}

Vecd eval_flat_map(const FamilySpec& fam, const Vecd& u) {
  if (!fam.flat_map) throw BranchError(fam.id + " has no flat chart");
  auto uj = point_jets(u, 1);
  auto xj = (*fam.flat_map)(uj);
  Vecd x(static_cast<int>(xj.size()));
  for (int i = 0; i < x.size(); ++i) x[i] = xj[static_cast<std::size_t>(i)].value();
  return x;
}

double eval_prepotential(const FamilySpec& fam, const Vecd& x) {
  if (!fam.prepotential) throw BranchError(fam.id + " has no prepotential");
  auto xj = point_jets(x, 1);
  return (*fam.prepotential)(xj).value();
}

std::string registry_json() {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& fam : registry()) {
    nlohmann::json j;
    j["id"] = fam.id;
    j["n"] = fam.n;
    j["d"] = fam.d;
    j["constants"] = fam.constants.v;
    j["flat_map"] = fam.flat_map.has_value();
    j["eta_flat"] = fam.eta_flat.has_value();
    j["euler_flat"] = fam.euler_flat.has_value();
    j["prepotential"] = fam.prepotential.has_value();
    switch (fam.ode) {
      case OdeKind::none: j["ode"] = "none"; break;
      case OdeKind::entries3: j["ode"] = "entries3"; break;
      case OdeKind::exp4: j["ode"] = "exp4"; break;
      case OdeKind::rational4: j["ode"] = "rational4"; break;
    }
    std::vector<double> lo(fam.u_box.lo.data(), fam.u_box.lo.data() + fam.n);
    std::vector<double> hi(fam.u_box.hi.data(), fam.u_box.hi.data() + fam.n);
    j["u_lo"] = lo;
    j["u_hi"] = hi;
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

}  // namespace frobkit
