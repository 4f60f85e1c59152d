#pragma once

#include <numbers>
#include <optional>

namespace optolattice::units {

// CODATA 2018.
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double speed_of_light = 299792458.0;  // m / s
inline constexpr double pi = std::numbers::pi;

struct AtomSpec {
  double mass = 0.0;        // kg
  double omega_a = 0.0;     // rad / s
  double linewidth = 0.0;   // Gamma, rad / s
  double coupling_g = 0.0;  // effective 1D two-body coupling, J m

  static AtomSpec from_wavelength(double mass, double resonance_wavelength, double linewidth,
                                  double coupling_g = 0.0);
  void validate() const;
};

// Intensities are beam powers throughout (W); the beam area only enters the
// mirror compliance.
struct DriveSpec {
  double wavelength = 0.0;  // m
  double omega = 0.0;       // rad / s
  double k = 0.0;           // 1 / m
  double input = 0.0;       // W

  static DriveSpec from_wavelength(double wavelength, double input = 0.0);
  void validate() const;
};

struct DerivedScales {
  double recoil = 0.0;    // E_re, J
  double alpha = 0.0;     // Stark-shift coefficient, J per W
  double detuning = 0.0;  // omega - omega_a, rad / s
};

double recoil_energy(const AtomSpec& atom, const DriveSpec& drive);

// alpha = 3 pi c^2 Gamma / (2 omega_a^3 Delta). Throws DomainError at Delta == 0.
double stark_coefficient(double linewidth, double omega_a, double detuning);
double stark_coefficient(const AtomSpec& atom, const DriveSpec& drive);

// Detuning defaults to omega - omega_a; an override replaces it (the atomic
// line and the drive wavelength then stop being tied together).
DerivedScales derive_scales(const AtomSpec& atom, const DriveSpec& drive,
                            std::optional<double> detuning_override = std::nullopt);

} // namespace optolattice::units
