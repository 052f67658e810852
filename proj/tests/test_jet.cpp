#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "frobkit/fd.hpp"
#include "frobkit/jet.hpp"
#include "frobkit/rng.hpp"

using namespace frobkit;

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("product jet carries cross partials") {
  Jet a = jet_var(0, 2.0, 2, 2);
  Jet b = jet_var(1, 3.0, 2, 2);
  Jet p = a * b;
  CHECK(p.value() == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(extract_partial(p, {1, 0}) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(extract_partial(p, {0, 1}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(extract_partial(p, {1, 1}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(extract_partial(p, {2, 0}) == 0.0);
}

TEST_CASE("exp matches its Taylor series at zero") {
  Jet x = jet_var(0, 0.0, 1, 3);
  Jet e = exp(x);
  CHECK(e.value() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(extract_partial(e, {1}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(extract_partial(e, {2}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(extract_partial(e, {3}) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("log at one has alternating partials") {
  Jet x = jet_var(0, 1.0, 1, 3);
  Jet l = log(x);
  CHECK(l.value() == 0.0);
  CHECK(extract_partial(l, {1}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(extract_partial(l, {2}) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(extract_partial(l, {3}) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("fractional power at four") {
  Jet x = jet_var(0, 4.0, 1, 2);
  Jet p = pow(x, -0.5);
  CHECK(p.value() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(extract_partial(p, {1}) == doctest::Approx(-1.0 / 16.0).epsilon(1e-15));
  CHECK(extract_partial(p, {2}) == doctest::Approx(3.0 / 128.0).epsilon(1e-15));
}

TEST_CASE("sqrt partials at four") {
  Jet x = jet_var(0, 4.0, 1, 2);
  Jet s = sqrt(x);
  CHECK(s.value() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(extract_partial(s, {1}) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(extract_partial(s, {2}) == doctest::Approx(-1.0 / 32.0).epsilon(1e-15));
}

TEST_CASE("chain rule through scaling") {
  Jet x = jet_var(0, 0.0, 1, 3);
  Jet s = sinh(2.0 * x);
  CHECK(extract_partial(s, {1}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(extract_partial(s, {2}) == 0.0);
  CHECK(extract_partial(s, {3}) == doctest::Approx(8.0).epsilon(1e-15));
  Jet c = cosh(2.0 * x);
  CHECK(c.value() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(extract_partial(c, {2}) == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("reciprocal is the geometric series") {
  Jet x = jet_var(0, 0.0, 1, 3);
  Jet r = reciprocal(1.0 + x);
  CHECK(r.value() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(extract_partial(r, {1}) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(extract_partial(r, {2}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(extract_partial(r, {3}) == doctest::Approx(-6.0).epsilon(1e-15));
}

TEST_CASE("derivative drops one order and shifts coefficients") {
  Jet u0 = jet_var(0, 2.0, 2, 3);
  Jet u1 = jet_var(1, 1.0, 2, 3);
  Jet f = pow(u0, 3.0) * u1;
  Jet df = derivative(f, 0);
  CHECK(df.order() == 2);
  CHECK(df.value() == doctest::Approx(12.0).epsilon(1e-15));
  CHECK(extract_partial(df, {1, 0}) == doctest::Approx(12.0).epsilon(1e-15));
  CHECK(extract_partial(df, {0, 1}) == doctest::Approx(12.0).epsilon(1e-15));
  CHECK(extract_partial(df, {2, 0}) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(extract_partial(df, {1, 1}) == doctest::Approx(12.0).epsilon(1e-15));
}

TEST_CASE("compose agrees with direct evaluation") {
  // outer(y0, y1) = y0^2 y1 expanded at (2, 3); inner images of (u0, u1) = (1, 1)
  Jet y0 = jet_var(0, 2.0, 2, 3);
  Jet y1 = jet_var(1, 3.0, 2, 3);
  Jet outer = y0 * y0 * y1;

  Jet u0 = jet_var(0, 1.0, 2, 3);
  Jet u1 = jet_var(1, 1.0, 2, 3);
  Jet in0 = u0 + u1;
  Jet in1 = u0 * u1 + 2.0;
  Jet composed = compose(outer, {in0, in1});
  Jet direct = (u0 + u1) * (u0 + u1) * (u0 * u1 + 2.0);

  REQUIRE(composed.order() == direct.order());
  for (int p = 0; p < composed.table().size; ++p)
    CHECK(composed.coeff(p) == doctest::Approx(direct.coeff(p)).epsilon(1e-14));
}

TEST_CASE("univariate application reproduces exp") {
  Jet x = jet_var(0, 0.3, 1, 3);
  double e = std::exp(0.3);
  std::vector<double> d{e, e, e, e};
  Jet a = apply_univariate(x * 1.0, d);
  Jet b = exp(x);
  for (int p = 0; p < a.table().size; ++p)
    CHECK(a.coeff(p) == doctest::Approx(b.coeff(p)).epsilon(1e-15));
}

TEST_CASE("leibniz identity on random jets") {
  SplitMix64 rng(101);
  const JetTable& t = JetTable::get(3, 3);
  for (int rep = 0; rep < 50; ++rep) {
    Jet a(3, 3, 0.0), b(3, 3, 0.0);
    std::vector<double> ca(t.size), cb(t.size);
    for (int p = 0; p < t.size; ++p) {
      ca[p] = rng.uniform(-2.0, 2.0);
      cb[p] = rng.uniform(-2.0, 2.0);
    }
    a = make_jet(&t, ca);
    b = make_jet(&t, cb);
    Jet ab = a * b;
    for (int p = 0; p < t.size; ++p) {
      const std::vector<int>& alpha = t.exps[p];
      double expected = 0.0;
      // binomial expansion over sub-indices
      for (int q = 0; q < t.size; ++q) {
        const std::vector<int>& beta = t.exps[q];
        bool le = true;
        for (int v = 0; v < 3; ++v)
          if (beta[v] > alpha[v]) {
            le = false;
            break;
          }
        if (!le) continue;
        std::vector<int> gamma(3);
        double weight = 1.0;
        for (int v = 0; v < 3; ++v) {
          gamma[v] = alpha[v] - beta[v];
          weight *= binom(alpha[v], beta[v]);
        }
        expected += weight * a.partial(beta) * b.partial(gamma);
      }
      CHECK(ab.partial(alpha) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("shape errors are reported") {
  Jet a = jet_var(0, 1.0, 2, 3);
  Jet b = jet_var(0, 1.0, 3, 3);
  CHECK_THROWS_AS(a + b, std::invalid_argument);
  CHECK_THROWS_AS(jet_var(5, 1.0, 3, 2), std::out_of_range);
  CHECK_THROWS_AS(extract_partial(a, {4, 0}), DomainError);
  CHECK_THROWS_AS(extract_partial(a, {1, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(log(jet_var(0, -1.0, 1, 2)), DomainError);
  CHECK_THROWS_AS(sqrt(jet_var(0, -4.0, 1, 2)), DomainError);
  CHECK_THROWS_AS(reciprocal(jet_var(0, 0.0, 1, 2)), DomainError);
  CHECK_THROWS_AS(pow(jet_var(0, -1.0, 1, 2), 0.5), DomainError);
}

TEST_CASE("mixed order operands resolve to the smaller order") {
  Jet a = jet_var(0, 1.5, 2, 3);
  Jet b = truncated(jet_var(1, 0.5, 2, 3), 2);
  Jet p = a * b;
  CHECK(p.order() == 2);
  CHECK(p.value() == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(extract_partial(p, {1, 1}) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("integer powers accept negative bases") {
  Jet x = jet_var(0, -2.0, 1, 2);
  Jet p = pow(x, 3.0);
  CHECK(p.value() == doctest::Approx(-8.0).epsilon(1e-15));
  CHECK(extract_partial(p, {1}) == doctest::Approx(12.0).epsilon(1e-15));
  Jet q = pow(x, -2.0);
  CHECK(q.value() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(extract_partial(q, {1}) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("random polynomials differentiate exactly") {
  SplitMix64 rng(202);
  int checked = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    int nv = 1 + static_cast<int>(rng.next() % 4);
    const JetTable& t = JetTable::get(nv, 3);
    std::vector<double> coef(t.size);
    for (int p = 0; p < t.size; ++p)
      coef[p] = (rng.uniform() < 0.5) ? 0.0 : rng.uniform(-2.0, 2.0);

    std::vector<double> x(nv);
    for (int v = 0; v < nv; ++v) x[v] = rng.uniform(-1.5, 1.5);

    // polynomial evaluated through jet arithmetic
    std::vector<Jet> vars;
    for (int v = 0; v < nv; ++v) vars.push_back(jet_var(v, x[v], nv, 3));
    Jet value(nv, 3, 0.0);
    for (int p = 0; p < t.size; ++p) {
      if (coef[p] == 0.0) continue;
      Jet mono(nv, 3, coef[p]);
      for (int v = 0; v < nv; ++v)
        for (int e = 0; e < t.exps[p][v]; ++e) mono *= vars[v];
      value += mono;
    }

    // analytic partials of the monomial sum
    for (int ap = 0; ap < t.size; ++ap) {
      const std::vector<int>& alpha = t.exps[ap];
      double exact = 0.0;
      for (int p = 0; p < t.size; ++p) {
        if (coef[p] == 0.0) continue;
        const std::vector<int>& beta = t.exps[p];
        double term = coef[p];
        bool drop = false;
        for (int v = 0; v < nv; ++v) {
          if (beta[v] < alpha[v]) {
            drop = true;
            break;
          }
          for (int k = 0; k < alpha[v]; ++k) term *= (beta[v] - k);
          term *= std::pow(x[v], beta[v] - alpha[v]);
        }
        if (!drop) exact += term;
      }
      double got = value.partial(alpha);
      CHECK(std::abs(got - exact) <= 1e-13 * std::max(1.0, std::abs(exact)));
      ++checked;
    }
  }
  CHECK(checked > 10000);
}

TEST_CASE("transcendental partials agree with finite differences") {
  SplitMix64 rng(303);
  FdOracle fd;
  auto host = [](const std::vector<double>& u) {
    return std::exp(u[0] * u[1]) * std::sqrt(u[0] + 2.0) +
           std::log(1.0 + u[1] * u[1]) * std::cosh(u[2]) +
           std::sinh(u[0]) / (2.0 + u[2]) + std::pow(u[1] + 3.0, 1.7);
  };
  const JetTable& t = JetTable::get(3, 3);
  int evals = 0;
  for (int rep = 0; rep < 60; ++rep) {
    std::vector<double> u(3);
    for (int v = 0; v < 3; ++v) u[v] = rng.uniform(-0.8, 0.8);
    Jet j0 = jet_var(0, u[0], 3, 3);
    Jet j1 = jet_var(1, u[1], 3, 3);
    Jet j2 = jet_var(2, u[2], 3, 3);
    Jet f = exp(j0 * j1) * sqrt(j0 + 2.0) + log(1.0 + j1 * j1) * cosh(j2) +
            sinh(j0) / (2.0 + j2) + pow(j1 + 3.0, 1.7);
    for (int p = 0; p < t.size; ++p) {
      double got = f.partial(t.exps[p]);
      double ref = fd.partial(host, u, t.exps[p]);
      CHECK(std::abs(got - ref) <= 1e-5 * std::max(1.0, std::abs(ref)));
      ++evals;
    }
  }
  CHECK(evals >= 1000);
}
