#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "optolattice/units.hpp"

namespace optolattice::cavity {

// Both mirrors share r. r is the positive amplitude reflectivity; the pi phase
// of internal reflections is already absorbed into the sign convention.
class MirrorSpec {
public:
  static MirrorSpec from_reflectance(double r2);

  double reflectance() const { return r2_; }
  double reflectivity() const { return r_; }
  double transmittance() const { return t2_; }  // |t|^2 = 1 - r^2
  double finesse() const { return finesse_; }   // pi r / (1 - r^2)

private:
  MirrorSpec() = default;
  double r2_ = 0.0;
  double r_ = 0.0;
  double t2_ = 0.0;
  double finesse_ = 0.0;
};

struct MechanicalSpec {
  double mass = 0.0;   // kg
  double omega = 0.0;  // rad / s
  double area = 0.0;   // m^2

  // eta = (A / (M Omega^2 c)) (2 r / pi) F, mirror displacement per unit transmitted intensity.
  double compliance(const MirrorSpec& mirror) const;
  void validate() const;
};

// Cavity in a single intensity unit: phase(y) = phi0 + beta * y.
struct DimensionlessCavity {
  double finesse = 0.0;
  double phi0 = 0.0;
  double beta = 0.0;          // round-trip phase shift per intensity unit
  double window = units::pi;  // largest allowed beta * y

  void validate() const;
};

struct CavityConfig {
  MirrorSpec mirror = MirrorSpec::from_reflectance(0.99);
  MechanicalSpec mech;
  double rest_length = 0.0;  // L0, m
  double phi0 = 0.0;         // mod_pi(k L0), in (-pi/2, pi/2]
  double k = 0.0;            // drive wavenumber, 1 / m
  double window = units::pi;

  void validate() const;
  double compliance() const { return mech.compliance(mirror); }
  // `intensity_unit` is the size of one solver intensity unit in W.
  DimensionlessCavity reduce(double intensity_unit = 1.0) const;
};

// Maps any phase onto (-pi/2, pi/2] modulo pi.
double wrap_offset(double phase);

double airy_transmission(double input, double phase, double finesse);

struct Root {
  double transmitted = 0.0;  // I_trans
  double phase_shift = 0.0;  // beta * I_trans = k xi
  double slope = 0.0;        // dh/dy at the root
  bool stable = false;
  bool marginal = false;     // sits on a fold (double root)
  int branch = 0;            // index of the monotone piece of the response curve

  double displacement(double k) const { return phase_shift / k; }
};

struct BranchSolution {
  double input = 0.0;
  std::vector<Root> roots;  // ascending in transmitted
  bool truncated = false;   // a root sits on the window edge

  std::size_t stable_count() const;
  const Root* on_branch(int branch) const;
};

// Input intensities of the fold pair of the resonance at phase 0 (both fold
// phases inside (-pi/2, pi/2)), with the transmitted intensity at each fold.
// lower < upper.
struct Knees {
  double lower = 0.0;
  double upper = 0.0;
  double lower_fold = 0.0;  // transmitted at the lower knee (upper branch ends)
  double upper_fold = 0.0;  // transmitted at the upper knee (lower branch ends)
};

enum class Start { lower, upper };

struct SweepStep {
  double input = 0.0;
  double transmitted = 0.0;
  int branch = 0;
  bool jumped = false;
};

// A jump is recorded as an extra step placed at the exact fold intensity,
// carrying the landing root.
struct SweepTrajectory {
  std::vector<SweepStep> steps;
  std::vector<std::string> notes;

  std::vector<double> jump_inputs() const;
};

class SteadyStateSolver {
public:
  explicit SteadyStateSolver(const DimensionlessCavity& config);

  const DimensionlessCavity& config() const { return config_; }

  // Input intensity that produces transmitted intensity y.
  double response(double y) const;
  double slope(double y) const;
  double residual(double y, double input) const { return response(y) - input; }

  double window_end() const { return segments_.back(); }
  // Zeros of the slope inside the window, ascending.
  std::span<const double> folds() const;
  int branch_count() const { return static_cast<int>(segments_.size()) - 1; }
  bool branch_increasing(int branch) const { return branch % 2 == 0; }
  std::string branch_name(int branch) const;

  BranchSolution solve(double input) const;
  std::optional<Knees> knees() const;
  Knees turning_points() const;  // throws NoBistabilityError
  SweepTrajectory sweep(std::span<const double> schedule, Start start) const;

private:
  double refine(double lo, double hi, double input, double tol) const;

  DimensionlessCavity config_;
  double coupling_;               // 4 F^2 / pi^2
  std::vector<double> segments_;  // 0, folds..., window end
};

BranchSolution steady_states(const DimensionlessCavity& config, double input);
Knees turning_points(const DimensionlessCavity& config);
SweepTrajectory hysteresis_sweep(const DimensionlessCavity& config, std::span<const double> schedule,
                                 Start start);

// Closed-path integral of I_in dI_trans along a trajectory that returns to its
// starting point, i.e. minus the integral of I_trans dI_in. Positive for an
// up-then-down loop across the bistable window.
double hysteresis_area(const SweepTrajectory& trajectory);

// kappa = c |t|^2 / L0.
double cavity_decay_rate(const CavityConfig& config);

} // namespace optolattice::cavity
