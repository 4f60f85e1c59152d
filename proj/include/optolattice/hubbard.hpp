#pragma once

#include <string>
#include <vector>

#include "optolattice/bands.hpp"

namespace optolattice::hubbard {

// Mean-field (single-site decoupling) Mott lobes in reduced variables
// mu/U and zJ/U.

// zJ_c/U = [ (n+1)/(n - mu) + n/(mu - (n-1)) ]^-1 for n-1 < mu < n.
double boundary(int filling, double mu);

struct LobeTip {
  double mu = 0.0;
  double hopping = 0.0;  // zJ/U at the tip
};

// mu* = sqrt(n(n+1)) - 1, x* = (sqrt(n+1) - sqrt(n))^2.
LobeTip lobe_tip(int filling);

struct MottLobe {
  int filling = 1;
  std::vector<double> mu;
  std::vector<double> hopping;
  LobeTip tip;
};

// `samples` interior points plus the two zero-width edges.
MottLobe sample_lobe(int filling, int samples = 400);

struct PhasePoint {
  double mu = 0.0;
  double hopping = 0.0;  // zJ/U
  int z = 2;
  int filling = 0;       // 0 means superfluid

  bool mott() const { return filling > 0; }
  std::string label() const;  // "MI(n)" or "SF"
};

// Points on the boundary are superfluid, as is any integer mu with J > 0.
PhasePoint classify(double J, double U, double mu, int z = 2);
PhasePoint classify(const bands::HubbardParams& params, double mu, int z = 2);

} // namespace optolattice::hubbard
