#include "optolattice/bands.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "optolattice/errors.hpp"
#include "optolattice/tridiagonal.hpp"
#include "optolattice/units.hpp"

namespace optolattice::bands {

using units::pi;

std::span<const double> BandData::coefficients(int band, int j) const {
  const auto width = static_cast<std::size_t>(2 * cutoff_ + 1);
  return std::span<const double>(coefficients_).subspan(static_cast<std::size_t>(j * bands_ + band) * width, width);
}

BandData bloch_bands(double s, const BandOptions& options) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("lattice depth must be finite and >= 0");
  if (options.cutoff < 1 || options.quasimomenta < 2 || options.bands < 1 ||
      options.bands > 2 * options.cutoff + 1) {
    throw ConfigError("band options out of range");
  }
  const int width = 2 * options.cutoff + 1;
  const int nq = options.quasimomenta;

  BandData out;
  out.depth_ = s;
  out.cutoff_ = options.cutoff;
  out.bands_ = options.bands;
  out.q_.resize(static_cast<std::size_t>(nq));
  out.energies_.resize(static_cast<std::size_t>(nq * options.bands));
  out.coefficients_.resize(static_cast<std::size_t>(nq * options.bands * width));

  std::vector<double> diag(static_cast<std::size_t>(width));
  const std::vector<double> off(static_cast<std::size_t>(width - 1), -s / 4.0);
  for (int j = 0; j < nq; ++j) {
    const double q = -1.0 + 2.0 * (j + 1) / nq;
    out.q_[static_cast<std::size_t>(j)] = q;
    for (int i = 0; i < width; ++i) {
      const double kx = q + 2.0 * (i - options.cutoff);
      diag[static_cast<std::size_t>(i)] = kx * kx + s / 2.0;
    }
    linalg::TridiagonalEigen eig;
    try {
      eig = linalg::eigen_tridiagonal(diag, off);
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " (s = " + std::to_string(s) + ", q = " + std::to_string(q) + ")");
    }
    out.residual_ = std::max(out.residual_, linalg::max_residual(diag, off, eig));
    for (int n = 0; n < options.bands; ++n) {
      out.energies_[static_cast<std::size_t>(j * options.bands + n)] = eig.values[static_cast<std::size_t>(n)];
      const auto v = eig.vector(static_cast<std::size_t>(n));
      std::copy(v.begin(), v.end(),
                out.coefficients_.begin() + static_cast<std::ptrdiff_t>((j * options.bands + n) * width));
    }
  }
  return out;
}

double cutoff_residual(double s, const BandOptions& options, int extra) {
  const auto base = bloch_bands(s, options);
  BandOptions wider = options;
  wider.cutoff += extra;
  const auto fine = bloch_bands(s, wider);
  double worst = 0.0;
  for (int j = 0; j < base.quasimomentum_count(); ++j) {
    worst = std::max(worst, std::abs(base.energy(0, j) - fine.energy(0, j)));
  }
  return worst;
}

double bandwidth(const BandData& bands, int band) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int j = 0; j < bands.quasimomentum_count(); ++j) {
    lo = std::min(lo, bands.energy(band, j));
    hi = std::max(hi, bands.energy(band, j));
  }
  return hi - lo;
}

namespace {

double band_fourier(const BandData& bands, double distance) {
  double sum = 0.0;
  const auto q = bands.quasimomenta();
  for (int j = 0; j < bands.quasimomentum_count(); ++j) {
    sum += bands.energy(0, j) * std::cos(q[static_cast<std::size_t>(j)] * pi * distance);
  }
  return -sum / bands.quasimomentum_count();
}

} // namespace

double tunneling_J(const BandData& bands) { return band_fourier(bands, 1.0); }

double next_hopping(const BandData& bands) { return band_fourier(bands, 2.0); }

double WannierData::integrate(std::span<const double> f) const {
  const std::size_t n = f.size();
  double sum = 0.0;
  if (periodic) {
    // Last sample duplicates the first one period later.
    for (std::size_t i = 0; i + 1 < n; ++i) sum += f[i];
  } else {
    for (std::size_t i = 0; i < n; ++i) sum += (i == 0 || i + 1 == n) ? 0.5 * f[i] : f[i];
  }
  return sum * step;
}

namespace {

double sample_shifted(const WannierData& wd, std::span<const double> f, std::size_t i, int j) {
  const auto period = static_cast<long>(f.size()) - 1;
  long idx = static_cast<long>(i) - static_cast<long>(j) * wd.points_per_site;
  if (wd.periodic) {
    idx %= period;
    if (idx < 0) idx += period;
  } else if (idx < 0 || idx > period) {
    return 0.0;
  }
  return f[static_cast<std::size_t>(idx)];
}

} // namespace

double WannierData::shifted(std::size_t i, int j) const { return sample_shifted(*this, w, i, j); }

double WannierData::norm() const {
  std::vector<double> f(w.size());
  std::transform(w.begin(), w.end(), f.begin(), [](double v) { return v * v; });
  return integrate(f);
}

double WannierData::overlap(int j) const {
  std::vector<double> f(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) f[i] = w[i] * shifted(i, j);
  return integrate(f);
}

double WannierData::symmetry_error() const {
  double peak = 0.0, worst = 0.0;
  const std::size_t n = w.size();
  for (std::size_t i = 0; i < n; ++i) {
    peak = std::max(peak, std::abs(w[i]));
    worst = std::max(worst, std::abs(w[i] - w[n - 1 - i]));
  }
  return worst / peak;
}

double WannierData::quartic_integral() const {
  std::vector<double> f(w.size());
  std::transform(w.begin(), w.end(), f.begin(), [](double v) { return v * v * v * v; });
  return integrate(f);
}

double WannierData::hopping_integral() const {
  std::vector<double> f(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double sn = std::sin(x[i]);
    const double h_w1 = -sample_shifted(*this, curvature, i, 1) + depth * sn * sn * shifted(i, 1);
    f[i] = w[i] * h_w1;
  }
  return -integrate(f);
}

WannierData wannier(const BandData& bands, const WannierOptions& options) {
  const int nq = bands.quasimomentum_count();
  const int sites = options.sites == 0 ? nq : options.sites;
  const int pps = options.points_per_site;
  if (sites < 1 || sites > nq) throw ConfigError("Wannier window must cover 1..N_q sites");
  if (pps < 2 || pps % 2 != 0) throw ConfigError("Wannier points per site must be even and >= 2");
  if ((sites * pps) % 2 != 0) throw ConfigError("Wannier grid must be symmetric about the well centre");

  WannierData out;
  out.depth = bands.depth();
  out.points_per_site = pps;
  out.sites = sites;
  out.periodic = sites == nq;
  out.step = pi / pps;
  const int half = sites * pps / 2;
  const auto npts = static_cast<std::size_t>(2 * half + 1);
  out.x.resize(npts);
  for (std::size_t i = 0; i < npts; ++i) out.x[i] = (static_cast<int>(i) - half) * out.step;

  using cplx = std::complex<double>;
  std::vector<cplx> sum_w(npts), sum_c(npts);
  std::vector<cplx> cell_w(static_cast<std::size_t>(pps)), cell_c(static_cast<std::size_t>(pps));
  const int cutoff = bands.cutoff();
  const auto q = bands.quasimomenta();

  for (int j = 0; j < nq; ++j) {
    const auto c = bands.coefficients(0, j);
    const double qj = q[static_cast<std::size_t>(j)];
    double at_centre = 0.0;
    for (double cm : c) at_centre += cm;
    if (std::abs(at_centre) < 1e-10) {
      throw NumericalError("Wannier gauge failure: Bloch state vanishes at the well centre (q = " +
                           std::to_string(qj) + ")");
    }
    const double sign = at_centre > 0.0 ? 1.0 : -1.0;
    // Periodic part u(x) = sum_m c_m e^{2imx} on one cell, then e^{iqx} u(x).
    for (int p = 0; p < pps; ++p) {
      const double xi = p * out.step;
      cplx uw{}, uc{};
      for (int m = -cutoff; m <= cutoff; ++m) {
        const double cm = sign * c[static_cast<std::size_t>(m + cutoff)];
        const double kx = qj + 2.0 * m;
        const cplx e = std::polar(1.0, 2.0 * m * xi);
        uw += cm * e;
        uc -= cm * kx * kx * e;
      }
      cell_w[static_cast<std::size_t>(p)] = uw;
      cell_c[static_cast<std::size_t>(p)] = uc;
    }
    for (std::size_t i = 0; i < npts; ++i) {
      int p = (static_cast<int>(i) - half) % pps;
      if (p < 0) p += pps;
      const cplx phase = std::polar(1.0, qj * out.x[i]);
      sum_w[i] += phase * cell_w[static_cast<std::size_t>(p)];
      sum_c[i] += phase * cell_c[static_cast<std::size_t>(p)];
    }
  }

  // Unit-norm c_m give a Bloch state of norm pi per cell, hence N_q pi over the period.
  const double scale = 1.0 / (std::sqrt(static_cast<double>(nq)) * std::sqrt(nq * pi));
  out.w.resize(npts);
  out.curvature.resize(npts);
  for (std::size_t i = 0; i < npts; ++i) {
    out.w[i] = scale * sum_w[i].real();
    out.curvature[i] = scale * sum_c[i].real();
    out.imaginary_max = std::max(out.imaginary_max, scale * std::abs(sum_w[i].imag()));
  }
  out.raw_norm = out.norm();
  const double renorm = 1.0 / std::sqrt(out.raw_norm);
  for (std::size_t i = 0; i < npts; ++i) {
    out.w[i] *= renorm;
    out.curvature[i] *= renorm;
  }
  return out;
}

double interaction_U(const WannierData& w, double g) {
  if (!(g >= 0.0)) throw DomainError("interaction strength g must be >= 0");
  return g * w.quartic_integral();
}

HubbardParams hubbard_from_depth(double s, double g, const BandOptions& band_options,
                                 const WannierOptions& wannier_options) {
  const double depth = std::abs(s);
  const auto b = bloch_bands(depth, band_options);
  const auto w = wannier(b, wannier_options);
  HubbardParams hp;
  hp.depth = depth;
  hp.J = tunneling_J(b);
  hp.next_hopping = next_hopping(b);
  hp.quartic = w.quartic_integral();
  hp.U = interaction_U(w, g);
  hp.ratio = 2.0 * hp.J / hp.U;
  hp.log10_ratio = std::log10(hp.ratio);
  hp.shallow = depth < tight_binding_depth;
  return hp;
}

} // namespace optolattice::bands
