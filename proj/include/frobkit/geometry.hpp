#pragma once

#include <functional>

#include "frobkit/structures.hpp"
#include "frobkit/types.hpp"

namespace frobkit {

// Worst absolute defect of each manifold axiom at one point.
struct AxiomResiduals {
  double invariance = 0.0;       // eta-compatibility of the product
  double curvature = 0.0;        // Riemann tensor of the metric
  double nabla_c_symmetry = 0.0; // covariant derivative of c, antisymmetrized
  double unit_flat = 0.0;        // covariant constancy of e
  double lie_E_c = 0.0;          // scaling of the product along E
  double lie_E_e = 0.0;          // scaling of e along E
  double lie_E_eta = 0.0;        // conformal scaling of eta along E
  double lie_e_eta = 0.0;        // invariance of eta along e

  double max_abs() const;
};

struct PencilResiduals {
  double curvature_g1 = 0.0;
  // Includes the symmetry defect of the second pencil metric.
  double curvature_g2 = 0.0;
  double linearity = 0.0;
};

// Levi-Civita symbols of a jet-valued metric, one order below the metric.
Tensor3<Jet> christoffel_jets(const MatJ& metric);

// Symbol values at the frame's point.
Tensor3<double> christoffel(const ChartFrame& frame);

// Riemann components R^m_ijk of a jet-valued metric (needs order >= 2),
// indexed (m, i, j, k).
Tensor4<double> riemann_tensor_from_jets(const MatJ& metric);

// Worst Riemann component.
double riemann_residual_from_jets(const MatJ& metric);
double riemann_residual(const ChartFrame& frame);

AxiomResiduals axiom_residuals(const ChartFrame& frame);

using ScalarField = std::function<Jet(const std::vector<Jet>&)>;
using CoordinateMap = std::function<std::vector<Jet>(const std::vector<Jet>&)>;

// Associativity defect of the product defined by third partials of F
// against the constant metric eta_flat.
double wdvv_residual(const ScalarField& F, const Matd& eta_flat, const Vecd& x);

// Product constants read off the third partials of F against eta_flat.
Tensor3<double> product_from_prepotential(const ScalarField& F, const Matd& eta_flat,
                                          const Vecd& x);

// Frame data transported through a coordinate change given by jets of the
// target coordinates.
struct Pushforward {
  Vecd x;
  Matd jacobian;
  Matd eta_flat;
  Tensor3<double> c_flat;
  Vecd e_flat;
  Vecd E_flat;
};

Pushforward pushforward_frame(const CoordinateMap& map, const ChartFrame& frame);

// Compatibility of the metric's inverse with its deformation by the Euler
// multiplication operator: both members flat, symbols affine in the pencil
// parameter.
PencilResiduals flat_pencil_residual(const ChartFrame& frame);

}  // namespace frobkit
