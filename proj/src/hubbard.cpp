#include "optolattice/hubbard.hpp"

#include <cmath>
#include <limits>

#include "optolattice/errors.hpp"

namespace optolattice::hubbard {

double boundary(int filling, double mu) {
  if (filling < 1) throw DomainError("Mott lobe filling must be >= 1");
  const double n = filling;
  if (!(mu > n - 1.0 && mu < n)) throw DomainError("mu/U outside the open lobe interval (n-1, n)");
  return 1.0 / ((n + 1.0) / (n - mu) + n / (mu - (n - 1.0)));
}

LobeTip lobe_tip(int filling) {
  if (filling < 1) throw DomainError("Mott lobe filling must be >= 1");
  const double n = filling;
  const double gap = std::sqrt(n + 1.0) - std::sqrt(n);
  return {std::sqrt(n * (n + 1.0)) - 1.0, gap * gap};
}

MottLobe sample_lobe(int filling, int samples) {
  if (samples < 1) throw ConfigError("lobe needs at least one interior sample");
  MottLobe lobe;
  lobe.filling = filling;
  lobe.tip = lobe_tip(filling);
  const double lo = filling - 1.0;
  lobe.mu.push_back(lo);
  lobe.hopping.push_back(0.0);
  for (int i = 1; i <= samples; ++i) {
    const double mu = lo + static_cast<double>(i) / (samples + 1);
    lobe.mu.push_back(mu);
    lobe.hopping.push_back(boundary(filling, mu));
  }
  lobe.mu.push_back(static_cast<double>(filling));
  lobe.hopping.push_back(0.0);
  return lobe;
}

std::string PhasePoint::label() const { return filling > 0 ? "MI(" + std::to_string(filling) + ")" : "SF"; }

PhasePoint classify(double J, double U, double mu, int z) {
  if (!(mu > 0.0)) throw DomainError("classification needs mu/U > 0");
  if (z < 2) throw DomainError("coordination number must be >= 2");
  PhasePoint p;
  p.mu = mu;
  p.z = z;
  p.hopping = U > 0.0 ? z * J / U : (J == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  const double n = std::ceil(mu);
  if (n != mu) {
    const int filling = static_cast<int>(n);
    if (p.hopping < boundary(filling, mu)) p.filling = filling;
  }
  return p;
}

PhasePoint classify(const bands::HubbardParams& params, double mu, int z) {
  return classify(params.J, params.U, mu, z);
}

} // namespace optolattice::hubbard
