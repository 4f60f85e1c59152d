#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "optolattice/bands.hpp"
#include "optolattice/cavity.hpp"
#include "optolattice/config.hpp"
#include "optolattice/hubbard.hpp"
#include "optolattice/lattice.hpp"
#include "optolattice/units.hpp"

namespace optolattice::pipeline {

inline constexpr const char* version = "0.1.0";

// dimensionless: intensities are alpha I / E_re and the cavity is given by
// (F, phi0, beta) directly. physical: SI inputs, intensities in W.
enum class Mode { dimensionless, physical };

struct SweepGrid {
  double min = 0.0;
  double max = 0.0;
  int steps = 0;

  std::vector<double> points() const;
};

struct ScenarioConfig {
  Mode mode = Mode::dimensionless;

  double reflectance = 0.99;
  double phi0 = 0.0;
  double window = units::pi;
  double beta = 0.0;  // dimensionless mode only

  units::AtomSpec atom;
  units::DriveSpec drive;
  cavity::MechanicalSpec mech;
  double rest_length = 1e-3;
  std::optional<double> detuning;  // rad / s
  std::optional<double> alpha;     // J / W

  std::optional<double> g;         // E_re / k
  std::optional<double> s_ref;
  std::optional<double> u_ref;

  double mu = 0.0;
  int z = 2;
  SweepGrid sweep;

  int atoms = 1000;
  double g0 = 0.0;  // atom-field coupling, rad / s
  int active_sites = 1000;

  bands::BandOptions bands;
  bands::WannierOptions wannier;

  config::KeyValueConfig source;

  static ScenarioConfig from(const config::KeyValueConfig& cfg);
  void validate() const;
};

// A configured scenario with the cavity solved in "solver units": W in
// physical mode, alpha I / E_re in dimensionless mode.
class Scenario {
public:
  explicit Scenario(ScenarioConfig config);

  const ScenarioConfig& config() const { return config_; }
  const cavity::SteadyStateSolver& solver() const { return solver_; }
  const cavity::MirrorSpec& mirror() const { return mirror_; }
  const units::DerivedScales& scales() const { return scales_; }
  double k() const { return k_; }
  double beta() const { return solver_.config().beta; }

  // alpha I / E_re for a solver-unit intensity (magnitude of alpha).
  double dimensionless_intensity(double input) const { return input * intensity_scale_; }
  lattice::LatticeSpec lattice_at(const cavity::Root& root) const;
  std::optional<cavity::Knees> knees() const { return solver_.knees(); }

  cavity::CavityConfig cavity_config() const;  // physical mode only

private:
  ScenarioConfig config_;
  cavity::MirrorSpec mirror_;
  units::DerivedScales scales_;
  double k_ = 1.0;
  double intensity_scale_ = 1.0;
  cavity::SteadyStateSolver solver_;
};

struct Fig2Row {
  double input = 0.0;  // alpha I_in / E_re
  std::string branch;
  double depth = 0.0;  // |V_osc| / E_re
  bool stable = false;
  bool knee = false;
};

// All branches at every grid intensity plus one marked row at each knee.
std::vector<Fig2Row> fig2_curve(const Scenario& scenario);

struct BranchRecord {
  std::string branch;
  double transmitted = 0.0;
  double depth = 0.0;  // |s|
  double J = 0.0;
  double U = 0.0;
  double log10_ratio = 0.0;
  std::string phase;
  bool stable = false;
  bool shallow = false;
};

struct OverlayRow {
  double input = 0.0;  // solver units
  std::vector<BranchRecord> branches;
};

struct Overlay {
  std::vector<OverlayRow> rows;
  hubbard::MottLobe lobe;
  double g = 0.0;
  std::size_t shallow_rows = 0;
};

// g so that U(s_ref) = U_ref.
double calibrate_g(const Scenario& scenario, double s_ref, double u_ref);
// g placing the lobe boundary at the configured mu between the deepest lower-branch
// depth (upper knee) and the shallowest upper-branch depth (lower knee), at their
// geometric mean in zJ/U.
double default_g(const Scenario& scenario);
// Explicit g, else the calibration pair, else default_g.
double resolve_g(const Scenario& scenario);

Overlay fig3_overlay(const Scenario& scenario);

enum class Branch { lower, upper };

struct TimescalePoint {
  std::string label;
  double input = 0.0;  // W
  double depth = 0.0;
  double J = 0.0;      // E_re
  double tau = 0.0;    // s
};

struct TimescaleReport {
  double kappa = 0.0;  // 1 / s
  std::vector<TimescalePoint> points;
  double rho = 0.0;    // N g0^2 / (|Delta| kappa)
  bool weak_coupling_ok = false;
};

// Tunnelling times at both ends of a branch across the bistable window.
TimescaleReport timescales(const Scenario& scenario, Branch branch);

// Text renderers; '.' decimal separator, 17 significant digits.
std::string format_number(double value);
std::string fig2_csv(const std::vector<Fig2Row>& rows);
std::string overlay_csv(const Overlay& overlay);
std::string lobe_csv(const hubbard::MottLobe& lobe);
std::string trajectory_csv(const cavity::SweepTrajectory& trajectory, const cavity::SteadyStateSolver& solver,
                           double intensity_scale = 1.0);

nlohmann::json timescale_json(const TimescaleReport& report, Branch branch);
nlohmann::json band_report(double s, std::optional<double> g, const bands::BandOptions& options = {},
                           const bands::WannierOptions& wannier = {});
nlohmann::json manifest(const Scenario& scenario, const std::string& command);

} // namespace optolattice::pipeline
