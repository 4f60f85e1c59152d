#pragma once

#include <cmath>

#include "optolattice/cavity.hpp"
#include "optolattice/units.hpp"

namespace optolattice::lattice {

// V(x) = depth * sin^2(k (L - x)) + offset. Well positions are not shifted by
// the mirror displacement; `displacement` is carried for the size check only.
struct LatticeSpec {
  double depth = 0.0;         // V_osc, J (sign of alpha)
  double offset = 0.0;        // V_L, J
  double k = 0.0;             // 1 / m
  double recoil = 0.0;        // E_re, J
  double s = 0.0;             // depth / recoil
  double spacing = 0.0;       // pi / k
  double displacement = 0.0;  // xi, m

  double magnitude() const { return std::abs(s); }
};

// V_osc = (4F/pi) alpha I_trans, V_L = ((1 - r)/(1 + r)) alpha I_trans.
LatticeSpec lattice_from_branch(double transmitted, double displacement, const cavity::MirrorSpec& mirror,
                                const units::DerivedScales& scales, double k);

// xi / (pi / k).
double displacement_check(const LatticeSpec& spec);

} // namespace optolattice::lattice
