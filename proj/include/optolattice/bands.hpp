#pragma once

#include <span>
#include <vector>

namespace optolattice::bands {

// Everything here is dimensionless: lengths in 1/k, energies in E_re,
// quasimomenta in k. The lattice is V(x) = s sin^2(x) with period pi and a
// well centred at x = 0.

struct BandOptions {
  int cutoff = 16;        // plane waves m = -cutoff..cutoff
  int quasimomenta = 64;  // N_q
  int bands = 3;          // N_b
};

class BandData {
public:
  double depth() const { return depth_; }
  int cutoff() const { return cutoff_; }
  int band_count() const { return bands_; }
  int quasimomentum_count() const { return static_cast<int>(q_.size()); }
  std::span<const double> quasimomenta() const { return q_; }

  double energy(int band, int j) const { return energies_[static_cast<std::size_t>(j * bands_ + band)]; }
  // c_m for m = -cutoff..cutoff, unit norm.
  std::span<const double> coefficients(int band, int j) const;
  // Largest ||H v - E v|| over all returned pairs.
  double max_residual() const { return residual_; }

private:
  friend BandData bloch_bands(double s, const BandOptions& options);
  double depth_ = 0.0;
  int cutoff_ = 0;
  int bands_ = 0;
  std::vector<double> q_;  // (-1, 1]
  std::vector<double> energies_;
  std::vector<double> coefficients_;
  double residual_ = 0.0;
};

// Diagonalises H_mm = (q + 2m)^2 + s/2, H_m,m+1 = -s/4 at q_j = -1 + 2j/N_q.
BandData bloch_bands(double s, const BandOptions& options = {});

// max_q |E_0(q; cutoff) - E_0(q; cutoff + extra)|.
double cutoff_residual(double s, const BandOptions& options = {}, int extra = 5);

// Width of band n across the quasimomentum grid.
double bandwidth(const BandData& bands, int band = 0);

// J = -(1/N_q) sum_q E_0(q) cos(q pi).
double tunneling_J(const BandData& bands);
// Next-nearest-neighbour coefficient, -(1/N_q) sum_q E_0(q) cos(2 q pi).
double next_hopping(const BandData& bands);

struct WannierOptions {
  int sites = 0;             // window [-sites pi/2, sites pi/2]; 0 selects N_q (one full period)
  int points_per_site = 32;  // must be even
};

struct WannierData {
  double depth = 0.0;
  double step = 0.0;
  int points_per_site = 0;
  int sites = 0;
  bool periodic = false;          // window spans the full Born-von Karman period
  std::vector<double> x;
  std::vector<double> w;
  std::vector<double> curvature;  // d^2 w / dx^2
  double imaginary_max = 0.0;     // largest |Im w| before it was dropped
  double raw_norm = 0.0;          // grid norm before the final rescale

  double integrate(std::span<const double> f) const;
  // Sample of w(x_i - j pi), zero outside a non-periodic window.
  double shifted(std::size_t i, int j) const;
  double norm() const;
  double overlap(int j) const;
  double symmetry_error() const;
  double quartic_integral() const;
  // J from the real-space matrix element -<w_0| -d^2/dx^2 + V |w_1>.
  double hopping_integral() const;
};

// Lowest-band Wannier function with each Bloch state made real and positive at
// the well centre. Throws NumericalError when that gauge cannot be fixed.
WannierData wannier(const BandData& bands, const WannierOptions& options = {});

// U = g * integral w^4, with g in units of E_re / k.
double interaction_U(const WannierData& w, double g);

struct HubbardParams {
  double depth = 0.0;
  double J = 0.0;
  double U = 0.0;
  double ratio = 0.0;        // 2J/U
  double log10_ratio = 0.0;
  double next_hopping = 0.0; // diagnostic only
  double quartic = 0.0;      // integral w^4
  bool shallow = false;      // below the tight-binding guide depth s = 3
};

inline constexpr double tight_binding_depth = 3.0;

// bloch_bands -> wannier -> J, U at |s|.
HubbardParams hubbard_from_depth(double s, double g, const BandOptions& bands = {},
                                 const WannierOptions& wannier_options = {});

} // namespace optolattice::bands
