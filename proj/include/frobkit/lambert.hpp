#pragma once

#include <frobkit/jet.hpp>

namespace frobkit {

// Principal branch of w e^w = x, defined for x >= -1/e.
double lambert_w(double x);

// Jet extension by Newton iteration in the truncated ring. The expansion
// point must stay away from the branch point where 1 + w vanishes.
Jet lambert_w(const Jet& a);

}  // namespace frobkit
