#pragma once

#include <functional>
#include <vector>

#include "frobkit/jet.hpp"
#include "frobkit/types.hpp"

namespace frobkit {

// Partition of the coordinates into Jordan blocks. Coordinates are indexed
// globally from 0; block `b` occupies [first_index(b), first_index(b)+size).
class BlockStructure {
 public:
  explicit BlockStructure(std::vector<int> sizes);
  static BlockStructure single(int n) { return BlockStructure({n}); }

  const std::vector<int>& sizes() const { return sizes_; }
  int total() const { return total_; }
  int blocks() const { return static_cast<int>(sizes_.size()); }
  int first_index(int block) const { return first_[block]; }
  int block_of(int index) const;
  int offset_in_block(int index) const { return index - first_[block_of(index)]; }

 private:
  std::vector<int> sizes_;
  std::vector<int> first_;
  int total_;
};

// Structure constants of the canonical product: within a block, a shifted
// convolution truncated at the block size; zero across blocks.
Tensor3<double> product_constants(const BlockStructure& bs);

// Multiplication by the Euler field: block lower-triangular Toeplitz in the
// block's own coordinates.
Matd l_operator(const BlockStructure& bs, const Vecd& point);
MatJ l_operator_jets(const BlockStructure& bs, const Vecd& point, int order);

// Sum of the first coordinate direction of every block.
Vecd unit_field(const BlockStructure& bs);

using ZFunction = std::function<Jet(const std::vector<Jet>&)>;

// Generating data of a metric in canonical coordinates: one scalar function f
// of the reduced variables plus two integration constants and the conformal
// weight d. C1 must vanish when d != 0.
struct GeneratingData {
  ZFunction f;
  double C1 = 0.0;
  double C2 = 0.0;
  double d = 0.0;
  // Optional additive shift of the (0,0) metric entry, evaluated on the
  // coordinate jets. Negative controls use it; leave empty otherwise.
  ZFunction eta11_shift;
};

// Reduced variables z^j as jets in the coordinates: u^{j+2} shifted by u^1
// when coordinate j+2 opens a later block, all divided by u^2.
std::vector<Jet> reduced_jets(const BlockStructure& bs, const std::vector<Jet>& ujets);

// Hankel entry functions F_1..F_n produced by f: differential-polynomial
// expressions in f evaluated at the reduced variables.
VecJ f_to_metric_entries(const GeneratingData& gd, const BlockStructure& bs, const Vecd& point,
                         int order);

// Block-Hankel metric with the (u^2)^{-d} conformal factor.
MatJ assemble_metric(const BlockStructure& bs, const VecJ& F, double d, const Vecd& point,
                     int order);

// Metric potential H; its coordinate partials are the scaled Hankel entries.
Jet potential_from_f(const GeneratingData& gd, const BlockStructure& bs, const Vecd& point,
                     int order);

// Everything geometry checks need at one point of one chart.
struct ChartFrame {
  BlockStructure bs;
  Vecd point;
  double d = 0.0;
  MatJ metric_jets;
  Matd metric;
  Matd metric_inv;
  Tensor3<double> dmetric;   // (k, i, j) = d_k eta_ij
  Tensor4<double> d2metric;  // (k, l, i, j)
  Tensor3<double> c;         // (k, i, j) = c^k_ij
  Matd L;
  Vecd e;
  Vecd E;

  ChartFrame() : bs({2}) {}
};

ChartFrame build_frame(const BlockStructure& bs, const GeneratingData& gd, const Vecd& point,
                       int order = 3);

}  // namespace frobkit
