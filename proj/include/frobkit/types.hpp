#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "frobkit/jet.hpp"

namespace Eigen {

template <>
struct NumTraits<frobkit::Jet> {
  using Real = frobkit::Jet;
  using NonInteger = frobkit::Jet;
  using Nested = frobkit::Jet;
  using Literal = frobkit::Jet;

  static frobkit::Jet dummy_precision() { return frobkit::Jet(1e-12); }
  static frobkit::Jet epsilon() { return frobkit::Jet(std::numeric_limits<double>::epsilon()); }
  static frobkit::Jet highest() { return frobkit::Jet(std::numeric_limits<double>::max()); }
  static frobkit::Jet lowest() { return frobkit::Jet(-std::numeric_limits<double>::max()); }
  static int digits10() { return std::numeric_limits<double>::digits10; }
  static int max_digits10() { return std::numeric_limits<double>::max_digits10; }

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 16,
    MulCost = 64,
  };
};

}  // namespace Eigen

namespace frobkit {

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using Matd = Mat<double>;
using Vecd = Vec<double>;
using MatJ = Mat<Jet>;
using VecJ = Vec<Jet>;

template <class T>
class Tensor3 {
 public:
  Tensor3() : d0_(0), d1_(0), d2_(0) {}
  Tensor3(int d0, int d1, int d2, T init = T())
      : d0_(d0), d1_(d1), d2_(d2), v_(static_cast<std::size_t>(d0) * d1 * d2, init) {}

  T& operator()(int i, int j, int k) { return v_[(static_cast<std::size_t>(i) * d1_ + j) * d2_ + k]; }
  const T& operator()(int i, int j, int k) const {
    return v_[(static_cast<std::size_t>(i) * d1_ + j) * d2_ + k];
  }
  int dim0() const { return d0_; }
  int dim1() const { return d1_; }
  int dim2() const { return d2_; }

 private:
  int d0_, d1_, d2_;
  std::vector<T> v_;
};

template <class T>
class Tensor4 {
 public:
  Tensor4() : d0_(0), d1_(0), d2_(0), d3_(0) {}
  Tensor4(int d0, int d1, int d2, int d3, T init = T())
      : d0_(d0), d1_(d1), d2_(d2), d3_(d3),
        v_(static_cast<std::size_t>(d0) * d1 * d2 * d3, init) {}

  T& operator()(int i, int j, int k, int l) {
    return v_[((static_cast<std::size_t>(i) * d1_ + j) * d2_ + k) * d3_ + l];
  }
  const T& operator()(int i, int j, int k, int l) const {
    return v_[((static_cast<std::size_t>(i) * d1_ + j) * d2_ + k) * d3_ + l];
  }
  int dim0() const { return d0_; }
  int dim1() const { return d1_; }
  int dim2() const { return d2_; }
  int dim3() const { return d3_; }

 private:
  int d0_, d1_, d2_, d3_;
  std::vector<T> v_;
};

// Coordinate seeds at a point: one first-order-unit jet per coordinate.
std::vector<Jet> point_jets(const Vecd& point, int order);

Matd value_of(const MatJ& a);
Vecd value_of(const VecJ& a);
MatJ constant_jets(const Matd& a, int nvars, int order);

// Entry-wise first partial with respect to one coordinate.
Matd partial_of(const MatJ& a, int var);

// Inverse in the truncated jet ring by Newton-Schulz iteration seeded with the
// inverse of the value part; exact at the ring's order because the residual is
// nilpotent. Throws SingularMetric when the value part is not invertible.
MatJ inverse_jets(const MatJ& a);

// Plain inverse with an invertibility guard.
Matd inverse_values(const Matd& a);

}  // namespace frobkit
