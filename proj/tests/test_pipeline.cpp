#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "optolattice/errors.hpp"
#include "optolattice/pipeline.hpp"
#include "oracles.hpp"

using namespace optolattice;
using namespace optolattice::pipeline;

namespace {

config::KeyValueConfig shipped(const std::string& name) {
  return config::KeyValueConfig::load(std::string(OPTOLATTICE_CONFIG_DIR) + "/" + name);
}

Scenario scenario(config::KeyValueConfig cfg, const std::map<std::string, std::string>& overrides = {}) {
  for (const auto& [k, v] : overrides) cfg.set(k, v);
  return Scenario(ScenarioConfig::from(cfg));
}

} // namespace

TEST(ScenarioConfig, RequiredKeys) {
  EXPECT_THROW(ScenarioConfig::from(config::KeyValueConfig::parse("cavity.phi0_over_pi = -0.005\n")), ConfigError);
  EXPECT_THROW(ScenarioConfig::from(config::KeyValueConfig::parse("scenario.mode = other\n")), ConfigError);
  auto phys = shipped("physical.conf");
  phys.set("atom.stark_coefficient", "-1e-28");
  EXPECT_THROW(ScenarioConfig::from(phys), ConfigError);  // both detuning and alpha
  auto cfg = shipped("fig2.conf");
  cfg.set("cavity.unknown", "1");
  EXPECT_THROW(ScenarioConfig::from(cfg), ConfigError);
}

TEST(ScenarioConfig, PhysicalNeedsDetuningOrAlpha) {
  const auto base = shipped("physical.conf");
  config::KeyValueConfig stripped;
  for (const auto& [k, v] : base.entries()) {
    if (k != "atom.detuning") stripped.set(k, v);
  }
  EXPECT_THROW(ScenarioConfig::from(stripped), ConfigError);
  stripped.set("atom.stark_coefficient", "-3.2212842886172983e-28");
  EXPECT_NO_THROW(ScenarioConfig::from(stripped));
}

TEST(ScenarioConfig, SweepValidation) {
  auto cfg = shipped("fig2.conf");
  cfg.set("sweep.steps", "1");
  EXPECT_THROW(ScenarioConfig::from(cfg), ConfigError);
  cfg.set("sweep.steps", "10");
  cfg.set("sweep.min", "0.2");
  EXPECT_THROW(ScenarioConfig::from(cfg), ConfigError);
}

TEST(ScenarioConfig, OffsetFromRestLength) {
  const auto base = shipped("physical.conf");
  config::KeyValueConfig cfg;
  for (const auto& [k, v] : base.entries()) {
    if (k != "cavity.phi0_over_pi") cfg.set(k, v);
  }
  const auto sc = ScenarioConfig::from(cfg);
  EXPECT_NEAR(std::sin(sc.phi0), std::sin(cavity::wrap_offset(sc.drive.k * 1e-3)), 1e-15);
  EXPECT_GT(sc.phi0, -oracle::pi / 2);
  EXPECT_LE(sc.phi0, oracle::pi / 2);
}

TEST(Fig2, TwoKneesAndPeak) {
  const auto sc = scenario(shipped("fig2.conf"));
  const auto rows = fig2_curve(sc);
  std::vector<Fig2Row> knees;
  std::copy_if(rows.begin(), rows.end(), std::back_inserter(knees), [](const Fig2Row& r) { return r.knee; });
  ASSERT_EQ(knees.size(), 2u);
  EXPECT_NEAR(knees[0].input, oracle::fig2_lower_knee, 1e-12);
  EXPECT_NEAR(knees[1].input, oracle::fig2_upper_knee, 1e-12);
  EXPECT_FALSE(knees[0].stable);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(rows[i - 1].input, rows[i].input);
  // resonant root of the upper branch
  const auto sol = sc.solver().solve(0.05);
  EXPECT_NEAR(sc.lattice_at(sol.roots.back()).magnitude(), 19.90, 0.01);
}

TEST(Fig2, GridRefinementLeavesKneesFixed) {
  const auto coarse = fig2_curve(scenario(shipped("fig2.conf")));
  const auto fine = fig2_curve(scenario(shipped("fig2.conf"), {{"sweep.steps", "800"}}));
  std::vector<double> a, b;
  for (const auto& r : coarse) if (r.knee) a.push_back(r.input);
  for (const auto& r : fine) if (r.knee) b.push_back(r.input);
  ASSERT_EQ(a.size(), 2u);
  ASSERT_EQ(b.size(), 2u);
  for (int i = 0; i < 2; ++i) EXPECT_NEAR(a[i], b[i], 1e-6 * a[i]);
}

TEST(Fig2, DetuningSignLeavesDepthColumn) {
  const auto red = fig2_csv(fig2_curve(scenario(shipped("physical.conf"))));
  const auto blue = fig2_csv(fig2_curve(scenario(shipped("physical.conf"), {{"atom.detuning", "2472636.1473513367"}})));
  EXPECT_EQ(red, blue);
}

TEST(Fig2, CsvHeader) {
  const auto csv = fig2_csv({});
  EXPECT_EQ(csv, "I_in_dimensionless,branch,V_osc_over_Ere,stable,knee_flag\n");
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(-0.0), "-0");
}

TEST(Physical, KneesNearQuotedMilliwatts) {
  const auto sc = scenario(shipped("physical.conf"));
  const auto k = sc.knees();
  ASSERT_TRUE(k.has_value());
  EXPECT_NEAR(k->lower * 1e3, 0.86, 0.15 * 0.86);
  EXPECT_NEAR(k->upper * 1e3, 1.62, 0.15 * 1.62);
  // beta = k eta in rad / W
  EXPECT_NEAR(sc.beta(), 17.0745147915935, 1e-9);
  const auto m = manifest(sc, "test");
  EXPECT_TRUE(m["user_supplied"]["beam_area"].get<bool>());
  EXPECT_TRUE(m["user_supplied"]["detuning"].get<bool>());
  EXPECT_EQ(m["config"]["mechanics.beam_area"], "1.0");
  EXPECT_NEAR(m["knees"]["lower_mW"].get<double>(), k->lower * 1e3, 1e-15);
}

TEST(Physical, DisplacementSmallOnUpperBranch) {
  const auto sc = scenario(shipped("physical.conf"));
  const auto k = *sc.knees();
  const auto sol = sc.solver().solve(0.5 * (k.lower + k.upper));
  ASSERT_EQ(sol.roots.size(), 3u);
  const double ratio = lattice::displacement_check(sc.lattice_at(sol.roots.back()));
  EXPECT_GT(ratio, 1e-4);
  EXPECT_LT(ratio, 1e-2);
}

TEST(Calibration, CalibrateG) {
  const auto sc = scenario(shipped("fig2.conf"));
  const double g = calibrate_g(sc, 10.0, 0.2);
  const auto w = bands::wannier(bands::bloch_bands(10.0));
  EXPECT_NEAR(g, 0.2 / w.quartic_integral(), 1e-12);
  EXPECT_NEAR(calibrate_g(sc, 10.0, 0.4), 2.0 * g, 1e-12);
  EXPECT_NEAR(bands::hubbard_from_depth(10.0, g).U / 0.2, 1.0, 1e-10);
  EXPECT_THROW(calibrate_g(sc, 2.0, 0.2), ConfigError);
}

TEST(Calibration, ResolveOrder) {
  EXPECT_DOUBLE_EQ(resolve_g(scenario(shipped("fig2.conf"), {{"interaction.g", "0.3"}})), 0.3);
  const auto pair = scenario(shipped("fig2.conf"), {{"interaction.s_ref", "10"}, {"interaction.U_ref", "0.2"}});
  EXPECT_NEAR(resolve_g(pair), calibrate_g(pair, 10.0, 0.2), 1e-15);
  const auto def = scenario(shipped("fig2.conf"));
  EXPECT_DOUBLE_EQ(resolve_g(def), default_g(def));
}

TEST(Calibration, DefaultPlacesBoundaryBetweenBranches) {
  const auto sc = scenario(shipped("fig2.conf"));
  const double g = default_g(sc);
  const auto k = *sc.knees();
  const double edge = hubbard::boundary(1, std::sqrt(2.0) - 1.0);
  auto x_at = [&](double y) {
    const double s = 4.0 * sc.mirror().finesse() / oracle::pi * y;
    const auto hp = bands::hubbard_from_depth(s, g);
    return 2.0 * hp.J / hp.U;
  };
  EXPECT_GT(x_at(k.upper_fold), edge);  // deepest lower-branch point: superfluid
  EXPECT_LT(x_at(k.lower_fold), edge);  // shallowest upper-branch point: Mott
  EXPECT_NEAR(std::sqrt(x_at(k.upper_fold) * x_at(k.lower_fold)), edge, 1e-12);
  EXPECT_THROW(default_g(scenario(shipped("fig2.conf"), {{"hubbard.mu_over_U", "1"}})), ConfigError);
  EXPECT_THROW(default_g(scenario(shipped("fig2.conf"), {{"cavity.phi0_over_pi", "0"}})), ConfigError);
}

TEST(Overlay, StructureAndBranchEnds) {
  const auto sc = scenario(shipped("fig2.conf"), {{"sweep.steps", "120"}});
  const auto ov = fig3_overlay(sc);
  const auto k = *sc.knees();
  EXPECT_GE(ov.lobe.mu.size(), 200u);
  double first_upper = -1.0, last_lower = -1.0;
  for (std::size_t i = 0; i < ov.rows.size(); ++i) {
    const auto& row = ov.rows[i];
    if (i > 0) EXPECT_LT(ov.rows[i - 1].input, row.input);
    const auto stable = std::count_if(row.branches.begin(), row.branches.end(), [](const auto& b) { return b.stable; });
    if (row.input > k.lower && row.input < k.upper) EXPECT_EQ(stable, 2) << row.input;
    for (const auto& b : row.branches) {
      if (b.branch == "upper" && first_upper < 0) first_upper = row.input;
      if (b.branch == "lower") last_lower = row.input;
    }
  }
  EXPECT_NEAR(first_upper, k.lower, 1e-12 * k.lower);
  EXPECT_NEAR(last_lower, k.upper, 1e-12 * k.upper);
}

TEST(Overlay, MonotoneAlongStableBranches) {
  const auto ov = fig3_overlay(scenario(shipped("fig2.conf"), {{"sweep.steps", "150"}}));
  std::map<std::string, std::pair<double, double>> prev;  // branch -> (s, log ratio)
  for (const auto& row : ov.rows) {
    for (const auto& b : row.branches) {
      if (!b.stable || row.input == 0.0) continue;
      if (auto it = prev.find(b.branch); it != prev.end()) {
        EXPECT_GT(b.depth, it->second.first) << b.branch << ' ' << row.input;
        EXPECT_LT(b.log10_ratio, it->second.second) << b.branch << ' ' << row.input;
      }
      prev[b.branch] = {b.depth, b.log10_ratio};
    }
  }
  EXPECT_EQ(prev.size(), 2u);
}

TEST(Overlay, MonostableCavity) {
  const auto sc = scenario(shipped("fig2.conf"), {{"cavity.phi0_over_pi", "0"}, {"interaction.g", "0.2"}, {"sweep.steps", "60"}});
  const auto ov = fig3_overlay(sc);
  for (const auto& row : ov.rows) ASSERT_EQ(row.branches.size(), 1u);
  std::vector<double> sched = sc.config().sweep.points();
  EXPECT_TRUE(sc.solver().sweep(sched, cavity::Start::lower).jump_inputs().empty());
}

TEST(Overlay, DeepLatticeIsMott) {
  for (double mu : {0.1, 0.41, 0.9}) {
    EXPECT_EQ(hubbard::classify(bands::hubbard_from_depth(200.0, 0.2), mu).label(), "MI(1)");
  }
}

TEST(Overlay, CsvHeaderAndDeterminism) {
  const auto sc = scenario(shipped("fig2.conf"), {{"sweep.steps", "40"}});
  const auto a = overlay_csv(fig3_overlay(sc));
  const auto b = overlay_csv(fig3_overlay(sc));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.substr(0, a.find('\n')), "I_in,branch,s,J_over_Ere,U_over_Ere,log10_2JoverU,phase,stable");
  EXPECT_EQ(lobe_csv(hubbard::sample_lobe(1, 2)).substr(0, 21), "mu_over_U,zJc_over_U\n");
}

TEST(Timescales, PhysicalScenario) {
  const auto sc = scenario(shipped("physical.conf"));
  const auto rep = timescales(sc, Branch::upper);
  EXPECT_NEAR(rep.kappa / 2.99792458e9, 1.0, 1e-12);
  ASSERT_EQ(rep.points.size(), 2u);
  EXPECT_EQ(rep.points[0].label, "D");
  EXPECT_EQ(rep.points[1].label, "C");
  for (const auto& p : rep.points) {
    EXPECT_NEAR(p.tau, units::hbar / (p.J * sc.scales().recoil), 1e-12 * p.tau);
    EXPECT_GT(p.tau, 0.0);
  }
  const double rho = 1000.0 * 314159.26535897932 * 314159.26535897932 / (2472636.1473513367 * rep.kappa);
  EXPECT_NEAR(rep.rho, rho, 1e-12 * rho);
  EXPECT_TRUE(rep.weak_coupling_ok);
  const auto lower = timescales(sc, Branch::lower);
  EXPECT_EQ(lower.points[0].label, "A");
  EXPECT_EQ(lower.points[1].label, "B");
  EXPECT_GT(lower.points[0].J, lower.points[1].J);
}

TEST(Timescales, DirectTauAndUncoupled) {
  // J = 0.02 E_re for sodium at 985 nm
  const double ere = 5.926869236504506e-30;
  EXPECT_NEAR(units::hbar / (0.02 * ere), 8.896533523e-4, 1e-12);
  const auto sc = scenario(shipped("physical.conf"), {{"atom.coupling_g0", "0"}});
  const auto rep = timescales(sc, Branch::lower);
  EXPECT_EQ(rep.rho, 0.0);
  EXPECT_TRUE(rep.weak_coupling_ok);
  EXPECT_THROW(timescales(scenario(shipped("fig2.conf")), Branch::lower), ConfigError);
}

TEST(BandReport, Fields) {
  const auto j = band_report(10.0, 0.2);
  EXPECT_EQ(j["E0"].size(), 64u);
  EXPECT_GT(j["J_over_Ere"].get<double>(), 0.0);
  EXPECT_NEAR(j["ratio_2J_over_U"].get<double>(), 2.0 * j["J_over_Ere"].get<double>() / j["U_over_Ere"].get<double>(),
              1e-15);
  EXPECT_LT(j["diagnostics"]["cutoff_residual"].get<double>(), 1e-10);
  EXPECT_TRUE(band_report(10.0, std::nullopt)["U_over_Ere"].is_null());
}
