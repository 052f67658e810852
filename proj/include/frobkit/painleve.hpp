#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include <frobkit/jet.hpp>
#include <frobkit/types.hpp>

namespace frobkit {

// State of the reduced three-wave system at a single z; z must stay away
// from the critical points 0 and 1.
struct PainleveState {
  double z = 0.0;
  double F12 = 0.0;
  double F13 = 0.0;
  double F23 = 0.0;
};

struct Trajectory {
  std::vector<PainleveState> states;
  double R2 = 0.0;    // first integral F12^2 + F13^2 + F23^2 at the start
  double step = 0.0;  // signed step actually used
};

// Right-hand side (dF12, dF13, dF23) of the reduced system.
// Throws SingularPoint at z in {0, 1}.
std::array<double, 3> ode_rhs(const PainleveState& s);

// Fixed-step classical RK4 from s0.z to z_end; the step count is chosen so
// the grid lands exactly on z_end. The whole z interval must keep a 0.05
// margin from {0, 1}. Throws StepTooLarge when the first-integral drift
// along the trajectory exceeds 1e-6.
Trajectory integrate(const PainleveState& s0, double z_end, double step);

struct SigmaSample {
  double z = 0.0;
  double sigma = 0.0;
  double dsigma = 0.0;
  double d2sigma = 0.0;
  double consistency = 0.0;  // defect of the third reconstruction relation
};

// Algebraic reconstruction of sigma and its derivatives from the squares of
// the F entries; no quadrature is involved.
std::vector<SigmaSample> sigma_eval(const Trajectory& t);

// Absolute defect of the sigma form of the Painleve VI equation at one
// state; R2 is the conserved value of the first integral.
double sigma_pvi_residual(double z, double sigma, double dsigma,
                          double d2sigma, double R2);

// Profile of one off-diagonal entry as a function of the cross-ratio z.
using ZCurve = std::function<Jet(const Jet&)>;

// Rotation coefficients at a point from the three profiles; symmetric with
// zero diagonal. Throws CoincidentCoordinates when two coordinates collide.
Matd beta_from_F(const ZCurve& F12, const ZCurve& F13, const ZCurve& F23,
                 const Vecd& u);

// Piecewise-cubic Hermite view of the three entries along an integrated
// trajectory, ordered (F12, F13, F23); node slopes come from the vector
// field, so first derivatives are accurate to O(step^3). Queries outside
// the z range of the trajectory throw DomainError.
std::array<ZCurve, 3> trajectory_curves(const Trajectory& t);

// Entry (i, j), i != j, of the rotation-coefficient field evaluated on jets
// of the coordinates, so caller-side derivatives see the chain rule.
using BetaField = std::function<Jet(int i, int j, const std::vector<Jet>&)>;

BetaField beta_field_from_F(ZCurve F12, ZCurve F13, ZCurve F23);

// Max-abs residuals of the three defining conditions of the field at u:
// closure under partial derivatives, unit-field invariance, Euler scaling.
std::array<double, 3> darboux_egorov_residual(const BetaField& beta,
                                              const Vecd& u);

// Header "z,F12,F13,F23,sigma,residual"; one row per state, %.17g, where
// residual is the sigma-equation defect at that state.
std::string trajectory_csv(const Trajectory& t);

}  // namespace frobkit
