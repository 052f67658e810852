#include "frobkit/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace frobkit {

namespace {

std::uint64_t pack(std::span<const int> alpha) {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    key |= static_cast<std::uint64_t>(alpha[i] & 0xFF) << (8 * i);
  }
  return key;
}

void enumerate(int nvars, int degree, int var, std::vector<int>& cur,
               std::vector<std::vector<int>>& out) {
  if (var == nvars - 1) {
    cur[var] = degree;
    out.push_back(cur);
    return;
  }
  for (int e = degree; e >= 0; --e) {
    cur[var] = e;
    enumerate(nvars, degree - e, var + 1, cur, out);
  }
}

}  // namespace

JetTable::JetTable(int nvars_, int order_) : nvars(nvars_), order(order_) {
  if (nvars < 0 || nvars > kMaxVars) throw std::invalid_argument("jet nvars out of range");
  if (order < 0 || order > kMaxOrder) throw std::invalid_argument("jet order out of range");
  if (nvars == 0) {
    exps.push_back({});
    deg.push_back(0);
  } else {
    std::vector<int> cur(nvars, 0);
    for (int g = 0; g <= order; ++g) enumerate(nvars, g, 0, cur, exps);
    for (const auto& a : exps) {
      int s = 0;
      for (int e : a) s += e;
      deg.push_back(s);
    }
  }
  size = static_cast<int>(exps.size());
  fact.resize(size);
  for (int p = 0; p < size; ++p) {
    double f = 1.0;
    for (int e : exps[p])
      for (int k = 2; k <= e; ++k) f *= k;
    fact[p] = f;
  }
  lookup_.reserve(size * 2);
  for (int p = 0; p < size; ++p) lookup_.emplace(pack(exps[p]), p);
  prod.assign(static_cast<std::size_t>(size) * size, -1);
  std::vector<int> sum(nvars);
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      if (deg[i] + deg[j] > order) continue;
      for (int v = 0; v < nvars; ++v) sum[v] = exps[i][v] + exps[j][v];
      prod[static_cast<std::size_t>(i) * size + j] = lookup_.at(pack(sum));
    }
  }
}

const JetTable& JetTable::get(int nvars, int order) {
  struct Key {
    int nvars, order;
    bool operator<(const Key& o) const {
      return nvars != o.nvars ? nvars < o.nvars : order < o.order;
    }
  };
  static auto* cache = new std::map<Key, std::unique_ptr<JetTable>>();
  static auto* mutex = new std::mutex();
  std::lock_guard<std::mutex> lock(*mutex);
  auto& slot = (*cache)[Key{nvars, order}];
  if (!slot) slot.reset(new JetTable(nvars, order));
  return *slot;
}

int JetTable::position(std::span<const int> alpha) const {
  if (static_cast<int>(alpha.size()) != nvars)
    throw std::invalid_argument("multi-index length does not match jet nvars");
  int total = 0;
  for (int e : alpha) {
    if (e < 0) throw std::invalid_argument("negative multi-index entry");
    total += e;
  }
  if (total > order) return -1;
  return lookup_.at(pack(alpha));
}

Jet::Jet(int nvars, int order, double v)
    : table_(&JetTable::get(nvars, order)), c_(table_->size, 0.0) {
  c_[0] = v;
}

Jet Jet::variable(int i, double v, int nvars, int order) {
  if (i < 0 || i >= nvars) throw std::out_of_range("jet variable index out of range");
  Jet j(nvars, order, v);
  if (order >= 1) {
    std::vector<int> alpha(nvars, 0);
    alpha[i] = 1;
    j.c_[j.table_->position(alpha)] = 1.0;
  }
  return j;
}

double Jet::partial(std::span<const int> alpha) const {
  if (constant_shape()) {
    int total = 0;
    for (int e : alpha) total += e;
    return total == 0 ? c_[0] : 0.0;
  }
  int pos = table_->position(alpha);
  if (pos < 0) throw DomainError("partial order exceeds jet order");
  return c_[pos] * table_->fact[pos];
}

double extract_partial(const Jet& a, const std::vector<int>& alpha) {
  return a.partial(alpha);
}

namespace {

// Shape of a binary result: constants broadcast, shaped operands must share
// nvars, mixed orders resolve to the smaller.
const JetTable* result_table(const Jet& a, const Jet& b) {
  if (a.constant_shape()) return &b.table();
  if (b.constant_shape()) return &a.table();
  if (a.nvars() != b.nvars()) throw std::invalid_argument("jet nvars mismatch");
  return a.order() <= b.order() ? &a.table() : &b.table();
}

}  // namespace

Jet Jet::operator-() const {
  Jet r = *this;
  for (double& x : r.c_) x = -x;
  return r;
}

Jet operator+(const Jet& a, const Jet& b) {
  const JetTable* t = result_table(a, b);
  std::vector<double> r(t->size, 0.0);
  int na = std::min<int>(t->size, static_cast<int>(a.c_.size()));
  int nb = std::min<int>(t->size, static_cast<int>(b.c_.size()));
  for (int i = 0; i < na; ++i) r[i] = a.c_[i];
  for (int i = 0; i < nb; ++i) r[i] += b.c_[i];
  return make_jet(t, std::move(r));
}

Jet operator-(const Jet& a, const Jet& b) {
  const JetTable* t = result_table(a, b);
  std::vector<double> r(t->size, 0.0);
  int na = std::min<int>(t->size, static_cast<int>(a.c_.size()));
  int nb = std::min<int>(t->size, static_cast<int>(b.c_.size()));
  for (int i = 0; i < na; ++i) r[i] = a.c_[i];
  for (int i = 0; i < nb; ++i) r[i] -= b.c_[i];
  return make_jet(t, std::move(r));
}

Jet operator*(const Jet& a, const Jet& b) {
  if (a.constant_shape() || b.constant_shape()) {
    const Jet& shaped = a.constant_shape() ? b : a;
    double s = a.constant_shape() ? a.value() : b.value();
    Jet r = shaped;
    for (double& x : r.c_) x *= s;
    return r;
  }
  const JetTable* t = result_table(a, b);
  int n = t->size;
  std::vector<double> r(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double ai = a.c_[i];
    if (ai == 0.0) continue;
    const std::int32_t* row = &t->prod[static_cast<std::size_t>(i) * n];
    for (int j = 0; j < n; ++j) {
      std::int32_t k = row[j];
      if (k >= 0) r[k] += ai * b.c_[j];
    }
  }
  return make_jet(t, std::move(r));
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet& Jet::operator+=(const Jet& b) { return *this = *this + b; }
Jet& Jet::operator-=(const Jet& b) { return *this = *this - b; }
Jet& Jet::operator*=(const Jet& b) { return *this = *this * b; }
Jet& Jet::operator/=(const Jet& b) { return *this = *this / b; }

Jet truncated(const Jet& a, int order) {
  if (a.constant_shape() || order >= a.order()) return a;
  if (order < 0) throw std::invalid_argument("negative truncation order");
  const JetTable& t = JetTable::get(a.nvars(), order);
  std::vector<double> r(a.coeffs().begin(), a.coeffs().begin() + t.size);
  return make_jet(&t, std::move(r));
}

Jet derivative(const Jet& a, int var) {
  if (a.constant_shape()) return Jet(0.0);
  if (var < 0 || var >= a.nvars()) throw std::out_of_range("jet variable index out of range");
  if (a.order() == 0) throw std::invalid_argument("cannot differentiate an order-0 jet");
  const JetTable& t = JetTable::get(a.nvars(), a.order() - 1);
  const JetTable& src = a.table();
  std::vector<double> r(t.size, 0.0);
  std::vector<int> alpha;
  for (int p = 0; p < t.size; ++p) {
    alpha = t.exps[p];
    alpha[var] += 1;
    int q = src.position(alpha);
    r[p] = a.coeff(q) * alpha[var];
  }
  return make_jet(&t, std::move(r));
}

Jet compose(const Jet& outer, const std::vector<Jet>& inner) {
  if (static_cast<int>(inner.size()) != outer.nvars())
    throw std::invalid_argument("compose: inner count does not match outer nvars");
  if (outer.constant_shape()) return Jet(outer.value());

  const Jet* shaped = nullptr;
  for (const Jet& j : inner)
    if (!j.constant_shape()) {
      if (shaped && (j.nvars() != shaped->nvars() || j.order() != shaped->order()))
        throw std::invalid_argument("compose: inner jets must share one shape");
      shaped = &j;
    }
  if (!shaped) return Jet(outer.value());
  int ro = std::min(outer.order(), shaped->order());

  // Powers of centered arguments; delta^k vanishes below degree k.
  std::vector<std::vector<Jet>> dpow(inner.size());
  for (std::size_t v = 0; v < inner.size(); ++v) {
    dpow[v].reserve(ro + 1);
    dpow[v].push_back(Jet(shaped->nvars(), shaped->order(), 1.0));
    Jet delta = inner[v] - inner[v].value();
    for (int k = 1; k <= ro; ++k) dpow[v].push_back(dpow[v][k - 1] * delta);
  }

  const JetTable& ot = outer.table();
  Jet result(shaped->nvars(), shaped->order(), outer.value());
  for (int p = 1; p < ot.size; ++p) {
    if (ot.deg[p] > ro) continue;
    double cp = outer.coeff(p);
    if (cp == 0.0) continue;
    Jet term = Jet(shaped->nvars(), shaped->order(), cp);
    for (int v = 0; v < ot.nvars; ++v) {
      int e = ot.exps[p][v];
      if (e > 0) term *= dpow[v][e];
    }
    result += term;
  }
  return result;
}

Jet apply_univariate(const Jet& a, std::span<const double> derivs) {
  if (static_cast<int>(derivs.size()) < a.order() + 1)
    throw std::invalid_argument("apply_univariate: need derivatives through jet order");
  if (a.constant_shape()) return Jet(derivs[0]);
  Jet p = a - a.value();
  Jet result(a.nvars(), a.order(), derivs[0]);
  Jet pk(a.nvars(), a.order(), 1.0);
  double kfact = 1.0;
  for (int k = 1; k <= a.order(); ++k) {
    pk *= p;
    kfact *= k;
    result += pk * (derivs[k] / kfact);
  }
  return result;
}

Jet exp(const Jet& a) {
  std::vector<double> d(a.order() + 1, std::exp(a.value()));
  return apply_univariate(a, d);
}

Jet log(const Jet& a) {
  double v = a.value();
  if (!(v > 0.0)) throw DomainError("log requires positive constant term");
  std::vector<double> d(a.order() + 1);
  d[0] = std::log(v);
  double pw = 1.0, sign = 1.0, fact = 1.0;
  for (int k = 1; k <= a.order(); ++k) {
    pw *= v;
    if (k >= 2) fact *= (k - 1);
    d[k] = sign * fact / pw;
    sign = -sign;
  }
  return apply_univariate(a, d);
}

Jet sinh(const Jet& a) {
  double s = std::sinh(a.value()), c = std::cosh(a.value());
  std::vector<double> d(a.order() + 1);
  for (int k = 0; k <= a.order(); ++k) d[k] = (k % 2 == 0) ? s : c;
  return apply_univariate(a, d);
}

Jet cosh(const Jet& a) {
  double s = std::sinh(a.value()), c = std::cosh(a.value());
  std::vector<double> d(a.order() + 1);
  for (int k = 0; k <= a.order(); ++k) d[k] = (k % 2 == 0) ? c : s;
  return apply_univariate(a, d);
}

Jet reciprocal(const Jet& a) {
  double v = a.value();
  if (v == 0.0) throw DomainError("reciprocal of jet with zero constant term");
  std::vector<double> d(a.order() + 1);
  double pw = 1.0 / v, sign = 1.0, fact = 1.0;
  d[0] = pw;
  for (int k = 1; k <= a.order(); ++k) {
    pw /= v;
    fact *= k;
    sign = -sign;
    d[k] = sign * fact * pw;
  }
  return apply_univariate(a, d);
}

namespace {

Jet int_pow(const Jet& a, long n) {
  // n >= 1, square and multiply
  long bit = 1;
  while ((bit << 1) <= n) bit <<= 1;
  Jet acc = a;
  bit >>= 1;
  for (; bit > 0; bit >>= 1) {
    acc *= acc;
    if (n & bit) acc *= a;
  }
  return acc;
}

}  // namespace

Jet pow(const Jet& a, double e) {
  double r = std::round(e);
  if (r == e && std::abs(e) <= 64.0) {
    long n = static_cast<long>(r);
    if (n == 0) return a.constant_shape() ? Jet(1.0) : Jet(a.nvars(), a.order(), 1.0);
    if (n > 0) return int_pow(a, n);
    return reciprocal(int_pow(a, -n));
  }
  double v = a.value();
  if (!(v > 0.0)) throw DomainError("fractional power requires positive constant term");
  std::vector<double> d(a.order() + 1);
  double coef = 1.0;
  for (int k = 0; k <= a.order(); ++k) {
    d[k] = coef * std::pow(v, e - k);
    coef *= (e - k);
  }
  return apply_univariate(a, d);
}

Jet sqrt(const Jet& a) {
  if (!(a.value() > 0.0)) throw DomainError("sqrt requires positive constant term");
  return pow(a, 0.5);
}

}  // namespace frobkit
