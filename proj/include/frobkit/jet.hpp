#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "frobkit/errors.hpp"

namespace frobkit {

// Shared coefficient layout for one (nvars, order) truncated polynomial ring.
// Multi-indices are enumerated by total degree, then lexicographically, so the
// layout of any lower order is a prefix of every higher order with the same
// nvars. Tables are built once and cached for the life of the process.
class JetTable {
 public:
  static const JetTable& get(int nvars, int order);

  int nvars;
  int order;
  int size;
  std::vector<std::vector<int>> exps;  // exps[pos] = multi-index, length nvars
  std::vector<int> deg;                // total degree per position
  std::vector<double> fact;            // multi-index factorial per position
  std::vector<std::int32_t> prod;      // prod[i*size+j] = position of exps[i]+exps[j], -1 if truncated

  // Position of a multi-index, -1 if degree exceeds order.
  int position(std::span<const int> alpha) const;

  static constexpr int kMaxVars = 8;
  static constexpr int kMaxOrder = 8;

 private:
  JetTable(int nvars_, int order_);
  std::unordered_map<std::uint64_t, int> lookup_;
};

// Truncated multivariate Taylor expansion: value plus all partial derivatives
// through total degree `order` at a point. Coefficients are stored in the
// JetTable layout (coefficient = partial / multi-index factorial).
//
// A default or double-constructed Jet is a shapeless constant (nvars = 0); it
// combines with any shaped operand. Two shaped operands must agree on nvars;
// mixed orders resolve to the smaller order, which is the exactly-known part.
class Jet {
 public:
  Jet() : Jet(0.0) {}
  Jet(double v) : table_(&JetTable::get(0, 0)), c_(1, v) {}
  Jet(int nvars, int order, double v);

  // Coordinate seed: value v, unit first derivative in slot i.
  static Jet variable(int i, double v, int nvars, int order);

  int nvars() const { return table_->nvars; }
  int order() const { return table_->order; }
  bool constant_shape() const { return table_->nvars == 0; }
  double value() const { return c_[0]; }
  const JetTable& table() const { return *table_; }
  std::span<const double> coeffs() const { return c_; }
  double coeff(int pos) const { return c_[pos]; }

  // Partial derivative named by multi-index (factorial restored).
  double partial(std::span<const int> alpha) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& b);
  Jet& operator-=(const Jet& b);
  Jet& operator*=(const Jet& b);
  Jet& operator/=(const Jet& b);

  friend Jet operator+(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a, const Jet& b);
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);

  friend bool operator==(const Jet& a, const Jet& b) { return a.value() == b.value(); }
  friend bool operator!=(const Jet& a, const Jet& b) { return a.value() != b.value(); }
  friend bool operator<(const Jet& a, const Jet& b) { return a.value() < b.value(); }
  friend bool operator>(const Jet& a, const Jet& b) { return a.value() > b.value(); }
  friend bool operator<=(const Jet& a, const Jet& b) { return a.value() <= b.value(); }
  friend bool operator>=(const Jet& a, const Jet& b) { return a.value() >= b.value(); }

 private:
  const JetTable* table_;
  std::vector<double> c_;

  Jet(const JetTable* t, std::vector<double> c) : table_(t), c_(std::move(c)) {}
  friend Jet make_jet(const JetTable* t, std::vector<double> c);
};

inline Jet make_jet(const JetTable* t, std::vector<double> c) { return Jet(t, std::move(c)); }

inline Jet jet_var(int i, double v, int nvars, int order) {
  return Jet::variable(i, v, nvars, order);
}

// Convenience: partial derivative by multi-index given as a vector.
double extract_partial(const Jet& a, const std::vector<int>& alpha);

// Copy truncated to a lower order (identity if `order` >= a.order()).
Jet truncated(const Jet& a, int order);

// Partial derivative as a jet of order a.order()-1.
Jet derivative(const Jet& a, int var);

// Taylor composition. inner[i] supplies the i-th argument of `outer`; each
// inner value must be the coordinate of the point `outer` was expanded at.
Jet compose(const Jet& outer, const std::vector<Jet>& inner);

// Univariate analytic g applied to a jet, from the derivative list
// derivs[k] = g^(k)(a.value()) for k = 0..a.order().
Jet apply_univariate(const Jet& a, std::span<const double> derivs);

Jet exp(const Jet& a);
Jet log(const Jet& a);        // requires value > 0
Jet sinh(const Jet& a);
Jet cosh(const Jet& a);
Jet sqrt(const Jet& a);       // requires value > 0
Jet reciprocal(const Jet& a); // requires value != 0
// Integer exponents reduce to repeated multiplication (any nonzero base for
// negative powers); fractional exponents require value > 0.
Jet pow(const Jet& a, double e);

inline Jet operator+(const Jet& a, double s) { return a + Jet(s); }
inline Jet operator+(double s, const Jet& a) { return Jet(s) + a; }
inline Jet operator-(const Jet& a, double s) { return a - Jet(s); }
inline Jet operator-(double s, const Jet& a) { return Jet(s) - a; }
inline Jet operator*(const Jet& a, double s) { return a * Jet(s); }
inline Jet operator*(double s, const Jet& a) { return Jet(s) * a; }
inline Jet operator/(const Jet& a, double s) { return a / Jet(s); }
inline Jet operator/(double s, const Jet& a) { return Jet(s) / a; }

}  // namespace frobkit
