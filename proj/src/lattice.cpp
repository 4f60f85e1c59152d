#include "optolattice/lattice.hpp"

#include "optolattice/errors.hpp"

namespace optolattice::lattice {

LatticeSpec lattice_from_branch(double transmitted, double displacement, const cavity::MirrorSpec& mirror,
                                const units::DerivedScales& scales, double k) {
  if (!(k > 0.0)) throw ConfigError("lattice wavenumber must be positive");
  if (!(scales.recoil > 0.0)) throw ConfigError("recoil energy must be positive");
  const double r = mirror.reflectivity();
  LatticeSpec spec;
  spec.depth = 4.0 * mirror.finesse() / units::pi * scales.alpha * transmitted;
  spec.offset = (1.0 - r) / (1.0 + r) * scales.alpha * transmitted;
  spec.k = k;
  spec.recoil = scales.recoil;
  spec.s = spec.depth / scales.recoil;
  spec.spacing = units::pi / k;
  spec.displacement = displacement;
  return spec;
}

double displacement_check(const LatticeSpec& spec) { return spec.displacement / spec.spacing; }

} // namespace optolattice::lattice
