#include "frobkit/structures.hpp"

#include <cmath>

#include "frobkit/errors.hpp"

namespace frobkit {

BlockStructure::BlockStructure(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw std::invalid_argument("block structure needs at least one block");
  total_ = 0;
  for (int m : sizes_) {
    if (m < 1) throw std::invalid_argument("block sizes must be positive");
    first_.push_back(total_);
    total_ += m;
  }
}

int BlockStructure::block_of(int index) const {
  if (index < 0 || index >= total_) throw std::out_of_range("coordinate index out of range");
  int b = 0;
  while (b + 1 < blocks() && index >= first_[b + 1]) ++b;
  return b;
}

Tensor3<double> product_constants(const BlockStructure& bs) {
  int n = bs.total();
  Tensor3<double> c(n, n, n, 0.0);
  for (int b = 0; b < bs.blocks(); ++b) {
    int f = bs.first_index(b), m = bs.sizes()[b];
    for (int a = 0; a < m; ++a)
      for (int a2 = 0; a2 < m; ++a2)
        if (a + a2 <= m - 1) c(f + a + a2, f + a, f + a2) = 1.0;
  }
  return c;
}

Matd l_operator(const BlockStructure& bs, const Vecd& point) {
  int n = bs.total();
  if (point.size() != n) throw std::invalid_argument("point dimension mismatch");
  Matd L = Matd::Zero(n, n);
  for (int b = 0; b < bs.blocks(); ++b) {
    int f = bs.first_index(b), m = bs.sizes()[b];
    for (int i = 0; i < m; ++i)
      for (int j = 0; j <= i; ++j) L(f + i, f + j) = point[f + i - j];
  }
  return L;
}

MatJ l_operator_jets(const BlockStructure& bs, const Vecd& point, int order) {
  int n = bs.total();
  if (point.size() != n) throw std::invalid_argument("point dimension mismatch");
  MatJ L(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) L(i, j) = Jet(n, order, 0.0);
  for (int b = 0; b < bs.blocks(); ++b) {
    int f = bs.first_index(b), m = bs.sizes()[b];
    for (int i = 0; i < m; ++i)
      for (int j = 0; j <= i; ++j)
        L(f + i, f + j) = Jet::variable(f + i - j, point[f + i - j], n, order);
  }
  return L;
}

Vecd unit_field(const BlockStructure& bs) {
  Vecd e = Vecd::Zero(bs.total());
  for (int b = 0; b < bs.blocks(); ++b) e[bs.first_index(b)] = 1.0;
  return e;
}

std::vector<Jet> reduced_jets(const BlockStructure& bs, const std::vector<Jet>& ujets) {
  int n = bs.total();
  if (static_cast<int>(ujets.size()) != n) throw std::invalid_argument("coordinate jet count mismatch");
  if (bs.sizes()[0] < 2) throw DomainError("first block must have size at least 2");
  if (ujets[1].value() == 0.0) throw DomainError("second coordinate must be nonzero");
  std::vector<Jet> z;
  z.reserve(n - 2);
  Jet inv_u2 = reciprocal(ujets[1]);
  for (int c = 2; c < n; ++c) {
    bool opens_block = bs.offset_in_block(c) == 0;
    Jet num = opens_block ? ujets[c] - ujets[0] : ujets[c];
    z.push_back(num * inv_u2);
  }
  return z;
}

VecJ f_to_metric_entries(const GeneratingData& gd, const BlockStructure& bs, const Vecd& point,
                         int order) {
  int n = bs.total(), m = n - 2;
  if (n < 2) throw std::invalid_argument("need at least two coordinates");
  if (!gd.f) throw std::invalid_argument("generating function is empty");

  std::vector<Jet> ujets = point_jets(point, order);
  std::vector<Jet> zu = reduced_jets(bs, ujets);

  // f expanded one order deeper in the reduced variables, so first partials
  // of f keep full order after composition.
  std::vector<Jet> zseeds;
  zseeds.reserve(m);
  for (int j = 0; j < m; ++j) zseeds.push_back(Jet::variable(j, zu[j].value(), m, order + 1));
  Jet fz = gd.f(zseeds);

  Jet f_at_u = m == 0 ? Jet(n, order, fz.value()) : compose(fz, zu);
  std::vector<Jet> g;
  g.reserve(m);
  for (int j = 0; j < m; ++j) g.push_back(compose(derivative(fz, j), zu));

  VecJ F(n);
  Jet f1(n, order, gd.C1);
  for (int b = 1; b < bs.blocks(); ++b) f1 -= g[bs.first_index(b) - 2];
  F[0] = f1;

  Jet f2(n, order, gd.C2);
  f2 -= (gd.d - 1.0) * f_at_u;
  for (int j = 0; j < m; ++j) f2 -= zu[j] * g[j];
  F[1] = f2;

  for (int i = 2; i < n; ++i) F[i] = g[i - 2];
  return F;
}

MatJ assemble_metric(const BlockStructure& bs, const VecJ& F, double d, const Vecd& point,
                     int order) {
  int n = bs.total();
  if (F.size() != n) throw std::invalid_argument("entry count does not match dimension");
  if (point.size() != n) throw std::invalid_argument("point dimension mismatch");
  Jet u2 = Jet::variable(1, point[1], n, order);
  Jet w = pow(u2, -d);
  MatJ eta(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) eta(i, j) = Jet(n, order, 0.0);
  for (int b = 0; b < bs.blocks(); ++b) {
    int f = bs.first_index(b), m = bs.sizes()[b];
    for (int a = 0; a < m; ++a)
      for (int a2 = 0; a2 < m; ++a2)
        if (a + a2 <= m - 1) eta(f + a, f + a2) = w * F[f + a + a2];
  }
  return eta;
}

Jet potential_from_f(const GeneratingData& gd, const BlockStructure& bs, const Vecd& point,
                     int order) {
  int n = bs.total(), m = n - 2;
  if (point.size() != n) throw std::invalid_argument("point dimension mismatch");
  if (!(point[1] > 0.0)) throw DomainError("metric potential requires positive second coordinate");

  std::vector<Jet> ujets = point_jets(point, order);
  std::vector<Jet> zu = reduced_jets(bs, ujets);
  std::vector<Jet> zseeds;
  zseeds.reserve(m);
  for (int j = 0; j < m; ++j) zseeds.push_back(Jet::variable(j, zu[j].value(), m, order));
  Jet fz = gd.f(zseeds);
  Jet f_at_u = m == 0 ? Jet(n, order, fz.value()) : compose(fz, zu);

  Jet phi = gd.d == 1.0 ? log(ujets[1]) : pow(ujets[1], 1.0 - gd.d) / (1.0 - gd.d);
  return pow(ujets[1], 1.0 - gd.d) * f_at_u + gd.C2 * phi + gd.C1 * ujets[0];
}

ChartFrame build_frame(const BlockStructure& bs, const GeneratingData& gd, const Vecd& point,
                       int order) {
  if (order < 2) throw std::invalid_argument("frame jets need order at least 2");
  ChartFrame fr;
  fr.bs = bs;
  fr.point = point;
  fr.d = gd.d;

  VecJ F = f_to_metric_entries(gd, bs, point, order);
  fr.metric_jets = assemble_metric(bs, F, gd.d, point, order);
  if (gd.eta11_shift) fr.metric_jets(0, 0) += gd.eta11_shift(point_jets(point, order));

  fr.metric = value_of(fr.metric_jets);
  fr.metric_inv = inverse_values(fr.metric);

  int n = bs.total();
  fr.dmetric = Tensor3<double>(n, n, n, 0.0);
  fr.d2metric = Tensor4<double>(n, n, n, n, 0.0);
  std::vector<int> alpha(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Jet& entry = fr.metric_jets(i, j);
      for (int k = 0; k < n; ++k) {
        std::fill(alpha.begin(), alpha.end(), 0);
        alpha[k] = 1;
        fr.dmetric(k, i, j) = entry.partial(alpha);
        for (int l = 0; l < n; ++l) {
          std::fill(alpha.begin(), alpha.end(), 0);
          alpha[k] += 1;
          alpha[l] += 1;
          fr.d2metric(k, l, i, j) = entry.partial(alpha);
        }
      }
    }

  fr.c = product_constants(bs);
  fr.L = l_operator(bs, point);
  fr.e = unit_field(bs);
  fr.E = point;
  return fr;
}

}  // namespace frobkit
