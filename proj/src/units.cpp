#include "optolattice/units.hpp"

#include <cmath>
#include <string>

#include "optolattice/errors.hpp"

namespace optolattice::units {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError(std::string(name) + " must be finite and strictly positive");
  }
}

} // namespace

AtomSpec AtomSpec::from_wavelength(double mass, double resonance_wavelength, double linewidth,
                                   double coupling_g) {
  require_positive(resonance_wavelength, "atom resonance wavelength");
  AtomSpec atom{mass, 2.0 * pi * speed_of_light / resonance_wavelength, linewidth, coupling_g};
  atom.validate();
  return atom;
}

void AtomSpec::validate() const {
  require_positive(mass, "atom mass");
  require_positive(omega_a, "atom resonance frequency");
  require_positive(linewidth, "atom linewidth");
  if (!(coupling_g >= 0.0)) throw ConfigError("atom coupling g must be non-negative");
}

DriveSpec DriveSpec::from_wavelength(double wavelength, double input) {
  require_positive(wavelength, "drive wavelength");
  DriveSpec drive;
  drive.wavelength = wavelength;
  drive.k = 2.0 * pi / wavelength;
  drive.omega = speed_of_light * drive.k;
  drive.input = input;
  drive.validate();
  return drive;
}

void DriveSpec::validate() const {
  require_positive(wavelength, "drive wavelength");
  require_positive(k, "drive wavenumber");
  if (std::abs(omega / speed_of_light - k) > 1e-12 * k ||
      std::abs(2.0 * pi / wavelength - k) > 1e-12 * k) {
    throw ConfigError("drive omega, k and wavelength are inconsistent");
  }
  if (!(input >= 0.0)) throw ConfigError("input intensity must be non-negative");
}

double recoil_energy(const AtomSpec& atom, const DriveSpec& drive) {
  return hbar * hbar * drive.k * drive.k / (2.0 * atom.mass);
}

double stark_coefficient(double linewidth, double omega_a, double detuning) {
  if (detuning == 0.0) throw DomainError("Stark coefficient is singular at zero detuning");
  const double c = speed_of_light;
  return 3.0 * pi * c * c * linewidth / (2.0 * omega_a * omega_a * omega_a * detuning);
}

double stark_coefficient(const AtomSpec& atom, const DriveSpec& drive) {
  return stark_coefficient(atom.linewidth, atom.omega_a, drive.omega - atom.omega_a);
}

DerivedScales derive_scales(const AtomSpec& atom, const DriveSpec& drive,
                            std::optional<double> detuning_override) {
  DerivedScales scales;
  scales.detuning = detuning_override.value_or(drive.omega - atom.omega_a);
  scales.recoil = recoil_energy(atom, drive);
  scales.alpha = stark_coefficient(atom.linewidth, atom.omega_a, scales.detuning);
  return scales;
}

} // namespace optolattice::units
