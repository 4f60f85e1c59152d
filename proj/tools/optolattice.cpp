// optolattice: bistable cavity lattice -> Bose-Hubbard phase command-line driver.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "optolattice/errors.hpp"
#include "optolattice/pipeline.hpp"

namespace fs = std::filesystem;
using namespace optolattice;

namespace {

constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

struct ScenarioArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<double> mu;
  std::optional<int> z;
  std::optional<double> g;
  std::optional<int> steps;
  std::optional<double> sweep_min;
  std::optional<double> sweep_max;
  std::string out;
};

void add_scenario_options(CLI::App* cmd, ScenarioArgs& args) {
  cmd->add_option("--config", args.config_path, "scenario config file (section.key = value)")->required();
  cmd->add_option("--set", args.overrides, "override a config key: section.key=value (repeatable)");
  cmd->add_option("--mu", args.mu, "hubbard.mu_over_U");
  cmd->add_option("--z", args.z, "hubbard.z");
  cmd->add_option("--g", args.g, "interaction.g, in E_re/k");
  cmd->add_option("--steps", args.steps, "sweep.steps");
  cmd->add_option("--min", args.sweep_min, "sweep.min");
  cmd->add_option("--max", args.sweep_max, "sweep.max");
}

template <class T>
void apply(config::KeyValueConfig& cfg, const char* key, const std::optional<T>& v) {
  if (v) cfg.set(key, pipeline::format_number(static_cast<double>(*v)));
}

pipeline::Scenario load_scenario(const ScenarioArgs& args) {
  auto cfg = config::KeyValueConfig::load(args.config_path);
  for (const auto& kv : args.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects section.key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  apply(cfg, "hubbard.mu_over_U", args.mu);
  apply(cfg, "hubbard.z", args.z);
  apply(cfg, "interaction.g", args.g);
  apply(cfg, "sweep.steps", args.steps);
  apply(cfg, "sweep.min", args.sweep_min);
  apply(cfg, "sweep.max", args.sweep_max);
  return pipeline::Scenario(pipeline::ScenarioConfig::from(cfg));
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

fs::path sibling(const std::string& out, const std::string& suffix) {
  fs::path p(out);
  p.replace_extension();
  p += suffix;
  return p;
}

void write_manifest(const pipeline::Scenario& sc, const std::string& command, const std::string& out,
                    nlohmann::json extra = {}) {
  if (out.empty()) return;
  auto m = pipeline::manifest(sc, command);
  for (auto& [k, v] : extra.items()) m[k] = v;
  write_text(sibling(out, ".manifest.json").string(), m.dump(2) + "\n");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bistable optomechanical lattice: cavity branches, Bose-Hubbard parameters and phases"};
  app.require_subcommand(1);

  ScenarioArgs sweep_args;
  auto* cavity_sweep = app.add_subcommand("cavity-sweep", "lattice depth of every cavity branch vs input");
  add_scenario_options(cavity_sweep, sweep_args);
  cavity_sweep->add_option("--out", sweep_args.out, "CSV path (stdout if omitted)");

  ScenarioArgs hyst_args;
  std::string direction = "loop";
  auto* hysteresis = app.add_subcommand("hysteresis", "follow one branch through an intensity schedule");
  add_scenario_options(hysteresis, hyst_args);
  hysteresis->add_option("--direction", direction, "up, down or loop")
      ->check(CLI::IsMember({"up", "down", "loop"}))
      ->required();
  hysteresis->add_option("--out", hyst_args.out, "CSV path (stdout if omitted)");

  double depth = 0.0;
  std::optional<double> band_g;
  bands::BandOptions band_opts;
  bands::WannierOptions wannier_opts;
  std::string band_out;
  auto* band_cmd = app.add_subcommand("bands", "band structure, Wannier diagnostics, J and U at one depth");
  band_cmd->add_option("--s", depth, "lattice depth in recoil energies")->required();
  band_cmd->add_option("--g", band_g, "1D interaction strength in E_re/k");
  band_cmd->add_option("--cutoff", band_opts.cutoff, "plane-wave cutoff M");
  band_cmd->add_option("--quasimomenta", band_opts.quasimomenta, "quasimomentum samples N_q");
  band_cmd->add_option("--points-per-site", wannier_opts.points_per_site, "Wannier grid points per site");
  band_cmd->add_option("--out", band_out, "JSON path (stdout if omitted)");

  int filling = 1;
  int samples = 400;
  std::string lobe_out;
  auto* lobe_cmd = app.add_subcommand("phase-boundary", "mean-field Mott lobe boundary");
  lobe_cmd->add_option("--n", filling, "lobe filling")->required();
  lobe_cmd->add_option("--samples", samples, "interior samples");
  lobe_cmd->add_option("--out", lobe_out, "CSV path (stdout if omitted)");

  ScenarioArgs overlay_args;
  auto* overlay = app.add_subcommand("overlay", "2J/U and phase label per branch, with the Mott lobe");
  add_scenario_options(overlay, overlay_args);
  overlay->add_option("--out", overlay_args.out, "CSV path (stdout if omitted)");

  ScenarioArgs time_args;
  std::string branch_name;
  auto* times = app.add_subcommand("timescales", "cavity decay rate, tunnelling times, weak-coupling check");
  add_scenario_options(times, time_args);
  times->add_option("--branch", branch_name, "upper or lower")->check(CLI::IsMember({"upper", "lower"}))->required();
  times->add_option("--out", time_args.out, "JSON path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_config;
  }

  try {
    if (cavity_sweep->parsed()) {
      const auto sc = load_scenario(sweep_args);
      write_text(sweep_args.out, pipeline::fig2_csv(pipeline::fig2_curve(sc)));
      write_manifest(sc, "cavity-sweep", sweep_args.out);
    } else if (hysteresis->parsed()) {
      const auto sc = load_scenario(hyst_args);
      auto schedule = sc.config().sweep.points();
      cavity::Start start = cavity::Start::lower;
      if (direction == "down") {
        std::reverse(schedule.begin(), schedule.end());
        start = cavity::Start::upper;
      } else if (direction == "loop") {
        const auto up = schedule;
        schedule.insert(schedule.end(), up.rbegin() + 1, up.rend());
      }
      const auto traj = sc.solver().sweep(schedule, start);
      for (const auto& note : traj.notes) std::cerr << "note: " << note << '\n';
      write_text(hyst_args.out, pipeline::trajectory_csv(traj, sc.solver()));
      nlohmann::json extra;
      extra["jumps"] = traj.jump_inputs();
      extra["hysteresis_area"] = cavity::hysteresis_area(traj);
      write_manifest(sc, "hysteresis --direction " + direction, hyst_args.out, extra);
    } else if (band_cmd->parsed()) {
      write_text(band_out, pipeline::band_report(depth, band_g, band_opts, wannier_opts).dump(2) + "\n");
    } else if (lobe_cmd->parsed()) {
      write_text(lobe_out, pipeline::lobe_csv(hubbard::sample_lobe(filling, samples)));
    } else if (overlay->parsed()) {
      const auto sc = load_scenario(overlay_args);
      const auto result = pipeline::fig3_overlay(sc);
      write_text(overlay_args.out, pipeline::overlay_csv(result));
      if (!overlay_args.out.empty()) {
        write_text(sibling(overlay_args.out, ".lobe.csv").string(), pipeline::lobe_csv(result.lobe));
      }
      nlohmann::json extra;
      extra["interaction_g"] = result.g;
      extra["shallow_rows"] = result.shallow_rows;
      write_manifest(sc, "overlay", overlay_args.out, extra);
    } else if (times->parsed()) {
      const auto sc = load_scenario(time_args);
      const auto branch = branch_name == "upper" ? pipeline::Branch::upper : pipeline::Branch::lower;
      write_text(time_args.out, pipeline::timescale_json(pipeline::timescales(sc, branch), branch).dump(2) + "\n");
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return exit_numerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_numerical;
  }
  return 0;
}
