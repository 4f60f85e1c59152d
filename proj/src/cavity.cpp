#include "optolattice/cavity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "optolattice/errors.hpp"

namespace optolattice::cavity {

using units::pi;

MirrorSpec MirrorSpec::from_reflectance(double r2) {
  if (!(r2 > 0.0 && r2 < 1.0)) throw ConfigError("mirror reflectance r^2 must lie in (0, 1)");
  MirrorSpec m;
  m.r2_ = r2;
  m.r_ = std::sqrt(r2);
  m.t2_ = 1.0 - r2;
  m.finesse_ = pi * m.r_ / (1.0 - r2);
  return m;
}

double MechanicalSpec::compliance(const MirrorSpec& mirror) const {
  return area / (mass * omega * omega * units::speed_of_light) * (2.0 * mirror.reflectivity() / pi) *
         mirror.finesse();
}

void MechanicalSpec::validate() const {
  if (!(mass > 0.0) || !(omega > 0.0) || !(area > 0.0)) {
    throw ConfigError("mirror mass, oscillation frequency and beam area must be positive");
  }
}

void DimensionlessCavity::validate() const {
  if (!(finesse > 0.0) || !std::isfinite(finesse)) throw ConfigError("finesse must be positive");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("phase-per-intensity scale must be positive");
  if (!(window > 0.0) || !std::isfinite(window)) throw ConfigError("search window must be positive");
  if (!(phi0 > -pi / 2 && phi0 <= pi / 2)) throw ConfigError("phi0 must lie in (-pi/2, pi/2]");
}

void CavityConfig::validate() const {
  mech.validate();
  if (!(rest_length > 0.0)) throw ConfigError("cavity rest length must be positive");
  if (!(k > 0.0)) throw ConfigError("drive wavenumber must be positive");
  if (!(window > 0.0)) throw ConfigError("search window must be positive");
  if (!(phi0 > -pi / 2 && phi0 <= pi / 2)) throw ConfigError("phi0 must lie in (-pi/2, pi/2]");
}

DimensionlessCavity CavityConfig::reduce(double intensity_unit) const {
  DimensionlessCavity d{mirror.finesse(), phi0, k * compliance() * intensity_unit, window};
  d.validate();
  return d;
}

double wrap_offset(double phase) {
  double w = std::remainder(phase, pi);  // [-pi/2, pi/2]
  if (w <= -pi / 2) w += pi;
  return w;
}

double airy_transmission(double input, double phase, double finesse) {
  const double s = std::sin(phase);
  return input / (1.0 + 4.0 * finesse * finesse / (pi * pi) * s * s);
}

std::size_t BranchSolution::stable_count() const {
  return static_cast<std::size_t>(std::count_if(roots.begin(), roots.end(), [](const Root& r) { return r.stable; }));
}

const Root* BranchSolution::on_branch(int branch) const {
  for (const auto& r : roots) {
    if (r.branch == branch) return &r;
  }
  return nullptr;
}

std::vector<double> SweepTrajectory::jump_inputs() const {
  std::vector<double> out;
  for (const auto& s : steps) {
    if (s.jumped) out.push_back(s.input);
  }
  return out;
}

namespace {

// Scan resolution: samples per Airy peak width pi/F in phase.
constexpr double samples_per_width = 64.0;
constexpr int max_iterations = 200;

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

} // namespace

SteadyStateSolver::SteadyStateSolver(const DimensionlessCavity& config)
    : config_(config), coupling_(4.0 * config.finesse * config.finesse / (pi * pi)) {
  config_.validate();
  const double y_end = config_.window / config_.beta;
  const auto n = static_cast<std::size_t>(
      std::max(64.0, std::ceil(samples_per_width * config_.finesse * config_.window / pi)));
  segments_.push_back(0.0);
  double prev_y = 0.0;
  double prev_s = slope(0.0);
  // prev_s is never zero: zero samples are skipped and slope(0) = 1 + K sin^2(phi0) > 0.
  for (std::size_t i = 1; i <= n; ++i) {
    const double y = y_end * static_cast<double>(i) / static_cast<double>(n);
    const double s = slope(y);
    if (sign_of(s) == 0) continue;
    if (sign_of(s) != sign_of(prev_s)) {
      double lo = prev_y, hi = y;
      const int s_lo = sign_of(prev_s);
      for (int it = 0; it < max_iterations && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const int sm = sign_of(slope(mid));
        if (sm == 0) {
          lo = hi = mid;
          break;
        }
        (sm == s_lo ? lo : hi) = mid;
      }
      const double fold = 0.5 * (lo + hi);
      if (fold > segments_.back() && fold < y_end) segments_.push_back(fold);
    }
    prev_s = s;
    prev_y = y;
  }
  segments_.push_back(y_end);
}

double SteadyStateSolver::response(double y) const {
  const double s = std::sin(config_.phi0 + config_.beta * y);
  return y * (1.0 + coupling_ * s * s);
}

double SteadyStateSolver::slope(double y) const {
  const double phase = config_.phi0 + config_.beta * y;
  const double s = std::sin(phase);
  return 1.0 + coupling_ * s * s + y * coupling_ * config_.beta * std::sin(2.0 * phase);
}

std::span<const double> SteadyStateSolver::folds() const {
  return std::span<const double>(segments_).subspan(1, segments_.size() - 2);
}

std::string SteadyStateSolver::branch_name(int branch) const {
  if (branch_count() == 1) return "single";
  switch (branch) {
    case 0: return "lower";
    case 1: return "middle";
    case 2: return "upper";
    default: return "branch" + std::to_string(branch);
  }
}

double SteadyStateSolver::refine(double lo, double hi, double input, double tol) const {
  // Illinois false position with a bisection safeguard; h is monotone on [lo, hi].
  double f_lo = residual(lo, input);
  double f_hi = residual(hi, input);
  int side = 0;
  double width = hi - lo;
  for (int it = 0; it < max_iterations; ++it) {
    double x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    if (!(x > lo && x < hi) || it % 4 == 3) x = 0.5 * (lo + hi);
    const double fx = residual(x, input);
    if (fx == 0.0) return x;
    if (sign_of(fx) == sign_of(f_lo)) {
      lo = x;
      f_lo = fx;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    } else {
      hi = x;
      f_hi = fx;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    }
    const double new_width = hi - lo;
    if (new_width <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(hi), 1e-300)) break;
    if (std::abs(fx) <= 1e-4 * tol && new_width < 0.5 * width) break;
    width = new_width;
  }
  const double a = residual(lo, input);
  const double b = residual(hi, input);
  const double best = std::abs(a) <= std::abs(b) ? lo : hi;
  if (std::abs(residual(best, input)) > tol) {
    throw NumericalError("steady-state root did not reach tolerance at I_in = " + std::to_string(input));
  }
  return best;
}

BranchSolution SteadyStateSolver::solve(double input) const {
  if (!(input >= 0.0) || !std::isfinite(input)) throw ConfigError("input intensity must be finite and >= 0");
  BranchSolution out;
  out.input = input;
  const double tol = 1e-12 * std::max(input, 1.0);
  const double y_end = window_end();
  const int nb = branch_count();

  auto make_root = [&](double y, int branch, bool marginal) {
    Root r;
    r.transmitted = y;
    r.phase_shift = config_.beta * y;
    r.slope = slope(y);
    r.marginal = marginal;
    r.stable = !marginal && r.slope > 0.0;
    r.branch = branch;
    if (y == y_end) out.truncated = true;
    return r;
  };

  for (int b = 0; b < nb; ++b) {
    const double lo = segments_[b];
    const double hi = segments_[b + 1];
    const double f_lo = residual(lo, input);
    const double f_hi = residual(hi, input);
    std::optional<double> y;
    if (std::abs(f_lo) <= tol) {
      y = lo;
    } else if (std::abs(f_hi) <= tol) {
      y = hi;
    } else if (sign_of(f_lo) != sign_of(f_hi)) {
      y = refine(lo, hi, input, tol);
    }
    if (!y) continue;
    const bool on_fold = (*y == lo && b > 0) || (*y == hi && b + 1 < nb);
    if (!out.roots.empty() && out.roots.back().transmitted == *y) {
      // Shared fold endpoint: keep it once, owned by the stable (increasing) piece.
      if (branch_increasing(b)) out.roots.back().branch = b;
      continue;
    }
    out.roots.push_back(make_root(*y, b, on_fold));
  }
  return out;
}

std::optional<Knees> SteadyStateSolver::knees() const {
  // Only the fold pair around the resonance at phase 0 counts; folds further up
  // the window are the approach to the next fringe.
  const auto f = folds();
  if (f.size() < 2 || config_.phi0 + config_.beta * f[1] >= pi / 2) return std::nullopt;
  Knees k;
  k.upper_fold = f[0];
  k.lower_fold = f[1];
  k.upper = response(f[0]);
  k.lower = response(f[1]);
  return k;
}

Knees SteadyStateSolver::turning_points() const {
  auto k = knees();
  if (!k) throw NoBistabilityError();
  return *k;
}

SweepTrajectory SteadyStateSolver::sweep(std::span<const double> schedule, Start start) const {
  if (schedule.empty()) throw ConfigError("hysteresis sweep needs a nonempty schedule");
  SweepTrajectory traj;

  const auto first = solve(schedule.front());
  const Root* seed = nullptr;
  for (const auto& r : first.roots) {
    if (!r.stable && !r.marginal) continue;
    if (!seed || start == Start::upper) seed = &r;
    if (start == Start::lower) break;
  }
  if (!seed) throw NumericalError("no stable steady state at the first sweep intensity");
  int branch = seed->branch;
  traj.steps.push_back({schedule.front(), seed->transmitted, branch, false});

  for (std::size_t i = 1; i < schedule.size(); ++i) {
    const double input = schedule[i];
    for (int guard = 0;; ++guard) {
      if (guard > branch_count()) throw NumericalError("sweep continuation did not settle");
      const auto sol = solve(input);
      if (const Root* r = sol.on_branch(branch)) {
        traj.steps.push_back({input, r->transmitted, branch, false});
        break;
      }
      // The followed piece no longer carries a root; it ended at one of its folds.
      const double lo = segments_[branch];
      const double hi = segments_[branch + 1];
      const bool past_hi = branch_increasing(branch) ? input > response(hi) : input < response(hi);
      const double fold_y = past_hi ? hi : lo;
      const int neighbour = past_hi ? branch + 1 : branch - 1;
      if (fold_y == window_end() || neighbour < 0 || neighbour >= branch_count()) {
        throw NumericalError("followed branch left the search window at I_in = " + std::to_string(input));
      }
      const double fold_input = response(fold_y);
      const auto at_fold = solve(fold_input);
      const Root* landing = nullptr;
      double best = std::numeric_limits<double>::infinity();
      bool tie = false;
      for (const auto& r : at_fold.roots) {
        if (!r.stable || r.branch == branch || r.branch == neighbour) continue;
        const double d = std::abs(r.transmitted - fold_y);
        if (d < best) {
          best = d;
          landing = &r;
          tie = false;
        } else if (d == best) {
          tie = true;  // ascending order keeps the smaller y
        }
      }
      if (!landing) throw NumericalError("no stable branch to jump to at I_in = " + std::to_string(fold_input));
      if (tie) traj.notes.push_back("equidistant jump targets at I_in = " + std::to_string(fold_input) +
                                    "; took the smaller transmitted intensity");
      branch = landing->branch;
      traj.steps.push_back({fold_input, landing->transmitted, branch, true});
    }
  }
  return traj;
}

BranchSolution steady_states(const DimensionlessCavity& config, double input) {
  return SteadyStateSolver(config).solve(input);
}

Knees turning_points(const DimensionlessCavity& config) { return SteadyStateSolver(config).turning_points(); }

SweepTrajectory hysteresis_sweep(const DimensionlessCavity& config, std::span<const double> schedule, Start start) {
  return SteadyStateSolver(config).sweep(schedule, start);
}

double hysteresis_area(const SweepTrajectory& trajectory) {
  double area = 0.0;
  const auto& s = trajectory.steps;
  for (std::size_t i = 1; i < s.size(); ++i) {
    area += 0.5 * (s[i].transmitted + s[i - 1].transmitted) * (s[i].input - s[i - 1].input);
  }
  return -area;
}

double cavity_decay_rate(const CavityConfig& config) {
  return units::speed_of_light * config.mirror.transmittance() / config.rest_length;
}

} // namespace optolattice::cavity
