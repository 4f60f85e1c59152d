#include "optolattice/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <utility>

#include "optolattice/errors.hpp"

namespace optolattice::pipeline {

using units::pi;

std::vector<double> SweepGrid::points() const {
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    out[static_cast<std::size_t>(i)] = i + 1 == steps ? max : min + (max - min) * i / (steps - 1);
  }
  return out;
}

namespace {

const std::set<std::string> known_keys = {
    "scenario.mode",
    "mirror.reflectance",
    "cavity.phi0_over_pi",
    "cavity.window_over_pi",
    "cavity.beta_over_pi",
    "cavity.length",
    "mechanics.mass",
    "mechanics.frequency_hz",
    "mechanics.beam_area",
    "drive.wavelength",
    "atom.mass",
    "atom.resonance_wavelength",
    "atom.linewidth_hz",
    "atom.detuning",
    "atom.stark_coefficient",
    "atom.count",
    "atom.coupling_g0",
    "interaction.g",
    "interaction.s_ref",
    "interaction.U_ref",
    "hubbard.mu_over_U",
    "hubbard.z",
    "sweep.min",
    "sweep.max",
    "sweep.steps",
    "bands.cutoff",
    "bands.quasimomenta",
    "bands.count",
    "wannier.points_per_site",
    "lattice.active_sites",
};

int as_int(long v, const char* name) {
  if (v < -1000000000L || v > 1000000000L) throw ConfigError(std::string(name) + " out of range");
  return static_cast<int>(v);
}

} // namespace

ScenarioConfig ScenarioConfig::from(const config::KeyValueConfig& cfg) {
  cfg.reject_unknown(known_keys);
  ScenarioConfig sc;
  sc.source = cfg;

  const std::string mode = cfg.text("scenario.mode").value_or("dimensionless");
  if (mode == "dimensionless") {
    sc.mode = Mode::dimensionless;
  } else if (mode == "physical") {
    sc.mode = Mode::physical;
  } else {
    throw ConfigError("scenario.mode must be 'dimensionless' or 'physical'");
  }

  sc.reflectance = cfg.number_or("mirror.reflectance", 0.99);
  sc.window = pi * cfg.number_or("cavity.window_over_pi", 1.0);

  if (sc.mode == Mode::dimensionless) {
    sc.phi0 = pi * cfg.require_number("cavity.phi0_over_pi");
    sc.beta = pi * cfg.require_number("cavity.beta_over_pi");
    sc.sweep = {cfg.number_or("sweep.min", 0.0), cfg.number_or("sweep.max", 0.15),
                as_int(cfg.integer_or("sweep.steps", 400), "sweep.steps")};
  } else {
    if (cfg.has("cavity.beta_over_pi")) throw ConfigError("cavity.beta_over_pi applies to dimensionless mode only");
    sc.drive = units::DriveSpec::from_wavelength(cfg.require_number("drive.wavelength"));
    sc.atom = units::AtomSpec::from_wavelength(cfg.require_number("atom.mass"),
                                               cfg.require_number("atom.resonance_wavelength"),
                                               2.0 * pi * cfg.require_number("atom.linewidth_hz"));
    sc.mech.mass = cfg.require_number("mechanics.mass");
    sc.mech.omega = 2.0 * pi * cfg.require_number("mechanics.frequency_hz");
    sc.mech.area = cfg.require_number("mechanics.beam_area");
    sc.rest_length = cfg.require_number("cavity.length");
    sc.detuning = cfg.number("atom.detuning");
    sc.alpha = cfg.number("atom.stark_coefficient");
    if (!sc.detuning && !sc.alpha) {
      throw ConfigError("physical mode needs atom.detuning or atom.stark_coefficient");
    }
    if (const auto p = cfg.number("cavity.phi0_over_pi")) {
      sc.phi0 = pi * *p;
    } else {
      sc.phi0 = cavity::wrap_offset(sc.drive.k * sc.rest_length);
    }
    sc.sweep = {cfg.number_or("sweep.min", 0.0), cfg.number_or("sweep.max", 2.5e-3),
                as_int(cfg.integer_or("sweep.steps", 400), "sweep.steps")};
  }

  sc.g = cfg.number("interaction.g");
  sc.s_ref = cfg.number("interaction.s_ref");
  sc.u_ref = cfg.number("interaction.U_ref");
  sc.mu = cfg.number_or("hubbard.mu_over_U", std::sqrt(2.0) - 1.0);
  sc.z = as_int(cfg.integer_or("hubbard.z", 2), "hubbard.z");
  sc.atoms = as_int(cfg.integer_or("atom.count", 1000), "atom.count");
  sc.g0 = cfg.number_or("atom.coupling_g0", 0.0);
  sc.active_sites = as_int(cfg.integer_or("lattice.active_sites", 1000), "lattice.active_sites");
  sc.bands.cutoff = as_int(cfg.integer_or("bands.cutoff", 16), "bands.cutoff");
  sc.bands.quasimomenta = as_int(cfg.integer_or("bands.quasimomenta", 64), "bands.quasimomenta");
  sc.bands.bands = as_int(cfg.integer_or("bands.count", 3), "bands.count");
  sc.wannier.points_per_site = as_int(cfg.integer_or("wannier.points_per_site", 32), "wannier.points_per_site");
  sc.validate();
  return sc;
}

void ScenarioConfig::validate() const {
  if (!(sweep.min >= 0.0) || !(sweep.min < sweep.max)) throw ConfigError("sweep needs 0 <= sweep.min < sweep.max");
  if (sweep.steps < 2) throw ConfigError("sweep.steps must be >= 2");
  if (!(mu > 0.0)) throw ConfigError("hubbard.mu_over_U must be positive");
  if (z < 2) throw ConfigError("hubbard.z must be >= 2");
  if (g && !(*g >= 0.0)) throw ConfigError("interaction.g must be >= 0");
  if (s_ref.has_value() != u_ref.has_value()) throw ConfigError("interaction.s_ref and interaction.U_ref go together");
  if (g && s_ref) throw ConfigError("give either interaction.g or the (s_ref, U_ref) calibration pair");
  if (u_ref && !(*u_ref > 0.0)) throw ConfigError("interaction.U_ref must be positive");
  if (s_ref && !(*s_ref > 0.0)) throw ConfigError("interaction.s_ref must be positive");
  if (!(g0 >= 0.0)) throw ConfigError("atom.coupling_g0 must be >= 0");
  if (atoms < 0 || active_sites < 1) throw ConfigError("atom.count must be >= 0 and lattice.active_sites >= 1");
  if (detuning && alpha) throw ConfigError("give either atom.detuning or atom.stark_coefficient");
}

namespace {

units::DerivedScales make_scales(const ScenarioConfig& c) {
  if (c.mode == Mode::dimensionless) return {1.0, 1.0, 0.0};
  auto scales = units::derive_scales(c.atom, c.drive, c.detuning);
  if (c.alpha) {
    if (*c.alpha == 0.0) throw ConfigError("atom.stark_coefficient must be nonzero");
    scales.alpha = *c.alpha;
  }
  return scales;
}

cavity::CavityConfig physical_cavity(const ScenarioConfig& c, const cavity::MirrorSpec& mirror) {
  cavity::CavityConfig cc;
  cc.mirror = mirror;
  cc.mech = c.mech;
  cc.rest_length = c.rest_length;
  cc.phi0 = c.phi0;
  cc.k = c.drive.k;
  cc.window = c.window;
  cc.validate();
  return cc;
}

cavity::DimensionlessCavity make_cavity(const ScenarioConfig& c, const cavity::MirrorSpec& mirror) {
  if (c.mode == Mode::physical) return physical_cavity(c, mirror).reduce(1.0);
  cavity::DimensionlessCavity d{mirror.finesse(), c.phi0, c.beta, c.window};
  d.validate();
  return d;
}

} // namespace

Scenario::Scenario(ScenarioConfig config)
    : config_(std::move(config)),
      mirror_(cavity::MirrorSpec::from_reflectance(config_.reflectance)),
      scales_(make_scales(config_)),
      k_(config_.mode == Mode::physical ? config_.drive.k : 1.0),
      intensity_scale_(std::abs(scales_.alpha) / scales_.recoil),
      solver_(make_cavity(config_, mirror_)) {}

lattice::LatticeSpec Scenario::lattice_at(const cavity::Root& root) const {
  return lattice::lattice_from_branch(root.transmitted, root.displacement(k_), mirror_, scales_, k_);
}

cavity::CavityConfig Scenario::cavity_config() const {
  if (config_.mode != Mode::physical) throw ConfigError("this report needs scenario.mode = physical");
  return physical_cavity(config_, mirror_);
}

namespace {

cavity::Root fold_root(const Scenario& sc, double y) {
  cavity::Root r;
  r.transmitted = y;
  r.phase_shift = sc.beta() * y;
  r.marginal = true;
  return r;
}

double depth_of(const Scenario& sc, const cavity::Root& r) { return sc.lattice_at(r).magnitude(); }

} // namespace

std::vector<Fig2Row> fig2_curve(const Scenario& sc) {
  const auto& solver = sc.solver();
  std::vector<Fig2Row> rows;
  const auto knees = sc.knees();
  // Knee rows are merged into the grid in input order.
  std::vector<std::pair<double, double>> knee_rows;  // (input, fold y)
  if (knees) {
    knee_rows.emplace_back(knees->lower, knees->lower_fold);
    knee_rows.emplace_back(knees->upper, knees->upper_fold);
  }
  const auto& grid = sc.config().sweep;
  std::erase_if(knee_rows, [&](const auto& kr) { return kr.first < grid.min || kr.first > grid.max; });
  std::size_t next_knee = 0;
  auto emit_knee = [&](std::size_t i) {
    const auto [input, y] = knee_rows[i];
    // A knee closes the stable piece adjacent to the fold.
    const int ends = input == knees->lower ? 2 : 0;
    rows.push_back({sc.dimensionless_intensity(input), solver.branch_name(ends), depth_of(sc, fold_root(sc, y)), false,
                    true});
  };
  for (double input : grid.points()) {
    while (next_knee < knee_rows.size() && knee_rows[next_knee].first < input) emit_knee(next_knee++);
    const auto sol = solver.solve(input);
    for (const auto& r : sol.roots) {
      rows.push_back({sc.dimensionless_intensity(input), solver.branch_name(r.branch), depth_of(sc, r), r.stable, false});
    }
  }
  while (next_knee < knee_rows.size()) emit_knee(next_knee++);
  return rows;
}

double calibrate_g(const Scenario& sc, double s_ref, double u_ref) {
  if (!(u_ref > 0.0)) throw ConfigError("U_ref must be positive");
  if (std::abs(s_ref) < bands::tight_binding_depth) throw ConfigError("s_ref must be in the tight-binding range (>= 3)");
  const auto hp = bands::hubbard_from_depth(s_ref, 1.0, sc.config().bands, sc.config().wannier);
  return u_ref / hp.quartic;
}

double default_g(const Scenario& sc) {
  const auto knees = sc.knees();
  if (!knees) throw ConfigError("default g calibration needs a bistable cavity; set interaction.g");
  const auto& c = sc.config();
  const double mu = c.mu;
  if (std::ceil(mu) == mu) throw ConfigError("default g calibration needs a non-integer hubbard.mu_over_U");
  const double edge = hubbard::boundary(static_cast<int>(std::ceil(mu)), mu);
  auto reduced_hopping = [&](double y) {
    const auto hp = bands::hubbard_from_depth(depth_of(sc, fold_root(sc, y)), 1.0, c.bands, c.wannier);
    return c.z * hp.J / hp.quartic;  // zJ/U at g = 1
  };
  const double deepest_lower = reduced_hopping(knees->upper_fold);
  const double shallowest_upper = reduced_hopping(knees->lower_fold);
  return std::sqrt(deepest_lower * shallowest_upper) / edge;
}

double resolve_g(const Scenario& sc) {
  const auto& c = sc.config();
  if (c.g) return *c.g;
  if (c.s_ref) return calibrate_g(sc, *c.s_ref, *c.u_ref);
  return default_g(sc);
}

Overlay fig3_overlay(const Scenario& sc) {
  const auto& c = sc.config();
  const auto& solver = sc.solver();
  Overlay out;
  out.g = resolve_g(sc);
  out.lobe = hubbard::sample_lobe(std::max(1, static_cast<int>(std::ceil(c.mu))), 400);
  // Knee intensities join the grid so branch records start and stop exactly at the folds.
  auto inputs = c.sweep.points();
  if (const auto knees = sc.knees()) {
    for (double k : {knees->lower, knees->upper}) {
      if (k >= c.sweep.min && k <= c.sweep.max) inputs.push_back(k);
    }
    std::sort(inputs.begin(), inputs.end());
    inputs.erase(std::unique(inputs.begin(), inputs.end()), inputs.end());
  }
  for (double input : inputs) {
    OverlayRow row;
    row.input = input;
    bool shallow = false;
    for (const auto& r : solver.solve(input).roots) {
      const double s = depth_of(sc, r);
      const auto hp = bands::hubbard_from_depth(s, out.g, c.bands, c.wannier);
      const auto phase = hubbard::classify(hp, c.mu, c.z);
      row.branches.push_back({solver.branch_name(r.branch), r.transmitted, s, hp.J, hp.U, hp.log10_ratio,
                              phase.label(), r.stable, hp.shallow});
      shallow = shallow || hp.shallow;
    }
    if (shallow) ++out.shallow_rows;
    out.rows.push_back(std::move(row));
  }
  return out;
}

TimescaleReport timescales(const Scenario& sc, Branch branch) {
  const auto cc = sc.cavity_config();
  const auto& c = sc.config();
  const auto& solver = sc.solver();
  TimescaleReport rep;
  rep.kappa = cavity::cavity_decay_rate(cc);
  rep.rho = c.atoms * c.g0 * c.g0 / (std::abs(sc.scales().detuning) * rep.kappa);
  rep.weak_coupling_ok = rep.rho < 0.1;

  struct Site {
    std::string label;
    double input;
    cavity::Root root;
  };
  std::vector<Site> sites;
  if (const auto knees = sc.knees()) {
    const int stable_piece = branch == Branch::lower ? 0 : 2;
    const double far_input = branch == Branch::lower ? knees->lower : knees->upper;
    const auto far = solver.solve(far_input);
    const cavity::Root* end = far.on_branch(stable_piece);
    if (!end) throw NumericalError("branch has no root at the opposite knee");
    if (branch == Branch::lower) {
      sites.push_back({"A", knees->lower, *end});
      sites.push_back({"B", knees->upper, fold_root(sc, knees->upper_fold)});
    } else {
      sites.push_back({"D", knees->lower, fold_root(sc, knees->lower_fold)});
      sites.push_back({"C", knees->upper, *end});
    }
  } else {
    for (double input : {c.sweep.min, c.sweep.max}) {
      const auto sol = solver.solve(input);
      sites.push_back({input == c.sweep.min ? "sweep_min" : "sweep_max", input, sol.roots.front()});
    }
  }

  for (const auto& site : sites) {
    const double s = depth_of(sc, site.root);
    const auto b = bands::bloch_bands(s, c.bands);
    const double J = bands::tunneling_J(b);
    if (!(J > 0.0)) throw NumericalError("tunnelling time needs J > 0 (s = " + std::to_string(s) + ")");
    rep.points.push_back({site.label, site.input, s, J, units::hbar / (J * sc.scales().recoil)});
  }
  return rep;
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string fig2_csv(const std::vector<Fig2Row>& rows) {
  std::ostringstream out;
  out << "I_in_dimensionless,branch,V_osc_over_Ere,stable,knee_flag\n";
  for (const auto& r : rows) {
    out << format_number(r.input) << ',' << r.branch << ',' << format_number(r.depth) << ',' << (r.stable ? 1 : 0)
        << ',' << (r.knee ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string overlay_csv(const Overlay& overlay) {
  std::ostringstream out;
  out << "I_in,branch,s,J_over_Ere,U_over_Ere,log10_2JoverU,phase,stable\n";
  for (const auto& row : overlay.rows) {
    for (const auto& b : row.branches) {
      out << format_number(row.input) << ',' << b.branch << ',' << format_number(b.depth) << ',' << format_number(b.J)
          << ',' << format_number(b.U) << ',' << format_number(b.log10_ratio) << ',' << b.phase << ','
          << (b.stable ? 1 : 0) << '\n';
    }
  }
  return out.str();
}

std::string lobe_csv(const hubbard::MottLobe& lobe) {
  std::ostringstream out;
  out << "mu_over_U,zJc_over_U\n";
  for (std::size_t i = 0; i < lobe.mu.size(); ++i) {
    out << format_number(lobe.mu[i]) << ',' << format_number(lobe.hopping[i]) << '\n';
  }
  return out.str();
}

std::string trajectory_csv(const cavity::SweepTrajectory& trajectory, const cavity::SteadyStateSolver& solver,
                           double intensity_scale) {
  std::ostringstream out;
  out << "step,I_in,I_trans,branch,jumped\n";
  for (std::size_t i = 0; i < trajectory.steps.size(); ++i) {
    const auto& s = trajectory.steps[i];
    out << i << ',' << format_number(s.input * intensity_scale) << ',' << format_number(s.transmitted * intensity_scale)
        << ',' << solver.branch_name(s.branch) << ',' << (s.jumped ? 1 : 0) << '\n';
  }
  return out.str();
}

nlohmann::json timescale_json(const TimescaleReport& report, Branch branch) {
  nlohmann::json j;
  j["branch"] = branch == Branch::lower ? "lower" : "upper";
  j["kappa"] = report.kappa;
  j["rho"] = report.rho;
  j["weak_coupling_ok"] = report.weak_coupling_ok;
  j["points"] = nlohmann::json::array();
  for (const auto& p : report.points) {
    j["points"].push_back({{"label", p.label}, {"I_in", p.input}, {"s", p.depth}, {"J_over_Ere", p.J}, {"tau", p.tau}});
  }
  return j;
}

nlohmann::json band_report(double s, std::optional<double> g, const bands::BandOptions& options,
                           const bands::WannierOptions& wannier_options) {
  const auto b = bands::bloch_bands(std::abs(s), options);
  const auto w = bands::wannier(b, wannier_options);
  nlohmann::json j;
  j["s"] = std::abs(s);
  j["J_over_Ere"] = bands::tunneling_J(b);
  nlohmann::json table = nlohmann::json::array();
  const auto q = b.quasimomenta();
  for (int i = 0; i < b.quasimomentum_count(); ++i) {
    table.push_back({{"q_over_k", q[static_cast<std::size_t>(i)]}, {"E0_over_Ere", b.energy(0, i)}});
  }
  j["E0"] = table;
  if (g) {
    const double U = bands::interaction_U(w, *g);
    j["g"] = *g;
    j["U_over_Ere"] = U;
    j["ratio_2J_over_U"] = 2.0 * bands::tunneling_J(b) / U;
  } else {
    j["g"] = nullptr;
    j["U_over_Ere"] = nullptr;
    j["ratio_2J_over_U"] = nullptr;
  }
  j["diagnostics"] = {
      {"next_hopping_over_Ere", bands::next_hopping(b)},
      {"bandwidth_over_Ere", bands::bandwidth(b, 0)},
      {"cutoff_residual", bands::cutoff_residual(std::abs(s), options)},
      {"eigen_residual", b.max_residual()},
      {"wannier_norm", w.norm()},
      {"wannier_symmetry_error", w.symmetry_error()},
      {"wannier_overlap_1", w.overlap(1)},
      {"wannier_overlap_2", w.overlap(2)},
      {"J_wannier_over_Ere", w.hopping_integral()},
      {"quartic_integral", w.quartic_integral()},
      {"shallow", std::abs(s) < bands::tight_binding_depth},
  };
  return j;
}

nlohmann::json manifest(const Scenario& sc, const std::string& command) {
  const auto& c = sc.config();
  nlohmann::json j;
  j["version"] = version;
  j["command"] = command;
  j["config"] = c.source.entries();
  j["mode"] = c.mode == Mode::physical ? "physical" : "dimensionless";
  j["tolerances"] = {
      {"root_residual_relative", 1e-12},
      {"scan_samples_per_airy_width", 64},
      {"plane_wave_cutoff", c.bands.cutoff},
      {"quasimomenta", c.bands.quasimomenta},
      {"wannier_points_per_site", c.wannier.points_per_site},
      {"tight_binding_depth", bands::tight_binding_depth},
  };
  j["cavity"] = {{"finesse", sc.mirror().finesse()}, {"phi0", sc.solver().config().phi0}, {"beta", sc.beta()},
                 {"window", sc.solver().config().window}};
  j["user_supplied"] = {{"beam_area", c.source.has("mechanics.beam_area")},
                        {"detuning", c.source.has("atom.detuning")},
                        {"stark_coefficient", c.source.has("atom.stark_coefficient")}};
  if (const auto k = sc.knees()) {
    j["knees"] = {{"lower", k->lower},
                  {"upper", k->upper},
                  {"lower_dimensionless", sc.dimensionless_intensity(k->lower)},
                  {"upper_dimensionless", sc.dimensionless_intensity(k->upper)}};
    if (c.mode == Mode::physical) {
      j["knees"]["lower_mW"] = k->lower * 1e3;
      j["knees"]["upper_mW"] = k->upper * 1e3;
    }
  } else {
    j["knees"] = nullptr;
  }
  if (c.mode == Mode::physical) {
    j["scales"] = {{"recoil_energy", sc.scales().recoil},
                   {"stark_coefficient", sc.scales().alpha},
                   {"detuning", sc.scales().detuning},
                   {"alpha_over_Ere", sc.scales().alpha / sc.scales().recoil}};
  }
  j["active_sites"] = c.active_sites;
  j["mean_filling"] = static_cast<double>(c.atoms) / c.active_sites;
  return j;
}

} // namespace optolattice::pipeline
