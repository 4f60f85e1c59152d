#pragma once

// Reference computations used only by the tests. None of these call into the
// library; they are deliberately slow, brute-force or textbook versions.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

// Frozen reference values, computed independently (scipy.special.mathieu_a,
// numpy scan) and checked against the C++ oracles below in test_oracles.cpp.
inline constexpr double fig2_finesse = 312.5845222828291;
inline constexpr double fig2_upper_knee = 0.09039531582242553;
inline constexpr double fig2_lower_knee = 0.04864627268785899;
inline constexpr double mathieu_a0_q1 = -0.45513860410741364;
inline constexpr double airy_half_fringe_fig2 = 2.5251887578596547e-05;

inline double finesse(double r2) {
  const double r = std::sqrt(r2);
  return pi * r / (1.0 - r2);
}

inline double response(double y, double finesse, double phi0, double beta) {
  const double s = std::sin(phi0 + beta * y);
  return y * (1.0 + 4.0 * finesse * finesse / (pi * pi) * s * s);
}

struct Extremum {
  double y = 0.0;
  double value = 0.0;
  bool maximum = false;
};

// Local extrema of the response on a uniform grid of `points` samples in
// [0, y_max]; each refined by a parabola through the three nearest samples.
inline std::vector<Extremum> dense_scan_extrema(double finesse, double phi0, double beta, double y_max,
                                                int points = 1'000'000) {
  const double h = y_max / (points - 1);
  std::vector<double> p(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) p[static_cast<std::size_t>(i)] = response(i * h, finesse, phi0, beta);
  std::vector<Extremum> out;
  for (int i = 1; i + 1 < points; ++i) {
    const double a = p[i - 1], b = p[i], c = p[i + 1];
    const bool max = b > a && b >= c;
    const bool min = b < a && b <= c;
    if (!max && !min) continue;
    const double off = 0.5 * (a - c) / (a - 2.0 * b + c);
    out.push_back({(i + off) * h, b - 0.25 * (a - c) * off, max});
  }
  return out;
}

// Number of roots of response(y) = input on [0, y_max] by sign changes on a fine grid.
inline int count_roots_scan(double input, double finesse, double phi0, double beta, double y_max,
                            int points = 200'000) {
  const double h = y_max / points;
  int count = 0;
  double prev = response(0.0, finesse, phi0, beta) - input;
  if (prev == 0.0) ++count;
  for (int i = 1; i <= points; ++i) {
    const double cur = response(i * h, finesse, phi0, beta) - input;
    if (cur == 0.0 || (prev != 0.0 && (prev < 0.0) != (cur < 0.0))) ++count;
    prev = cur;
  }
  return count;
}

// Near-resonance cubic: with theta = phi0 + beta y small, sin theta ~ theta and
// the folds of y (1 + K theta^2) solve 3K theta^2 - 2K phi0 theta + 1 = 0.
inline std::vector<double> cubic_fold_phases(double finesse, double phi0) {
  const double K = 4.0 * finesse * finesse / (pi * pi);
  const double disc = phi0 * phi0 / 9.0 - 1.0 / (3.0 * K);
  if (disc <= 0.0) return {};
  const double r = std::sqrt(disc);
  return {phi0 / 3.0 - r, phi0 / 3.0 + r};
}

// Characteristic value a_0(q) of the Mathieu equation from the continued
// fraction of the even pi-periodic recurrence, solved by bisection.
inline double mathieu_a0(double q, int depth = 60) {
  auto fraction = [&](double a) {
    double tail = 0.0;
    for (int r = depth; r >= 2; --r) tail = q * q / (a - 4.0 * r * r - tail);
    return 2.0 * q * q / (a - 4.0 - tail);
  };
  double lo = -2.0 * q * q - 1.0, hi = 0.5;
  auto f = [&](double a) { return a - fraction(a); };
  double flo = f(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Power series a_0(q) = -q^2/2 + 7q^4/128 - 29q^6/2304 + 68687q^8/18874368.
inline double mathieu_a0_series(double q) {
  const double q2 = q * q;
  return -q2 / 2.0 + 7.0 * q2 * q2 / 128.0 - 29.0 * q2 * q2 * q2 / 2304.0 +
         68687.0 * q2 * q2 * q2 * q2 / 18874368.0;
}

inline double golden_max(const std::function<double(double)>& f, double a, double b, double tol = 1e-13) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

inline double bisect(const std::function<double(double)>& f, double a, double b) {
  double fa = f(a);
  for (int it = 0; it < 200 && b - a > 0.0; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
    if (m == a && m == b) break;
  }
  return 0.5 * (a + b);
}

// Eigenvalue count below x for a symmetric tridiagonal matrix (Sturm sequence).
inline int sturm_count(std::span<const double> d, std::span<const double> e, double x) {
  int count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double off = i == 0 ? 0.0 : e[i - 1] * e[i - 1];
    q = d[i] - x - (i == 0 ? 0.0 : off / q);
    if (q == 0.0) q = 1e-300;
    if (q < 0.0) ++count;
  }
  return count;
}

// j-th smallest eigenvalue (0-based) by bisection on the Sturm count.
inline double sturm_eigenvalue(std::span<const double> d, std::span<const double> e, int j) {
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double r = (i > 0 ? std::abs(e[i - 1]) : 0.0) + (i < e.size() ? std::abs(e[i]) : 0.0);
    lo = std::min(lo, d[i] - r);
    hi = std::max(hi, d[i] + r);
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(d, e, mid) > j) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Harmonic ground state of -d^2/dx^2 + s x^2 (units 1/k, E_re).
inline double harmonic_ground(double x, double s) {
  const double w = std::sqrt(s);
  return std::pow(w / pi, 0.25) * std::exp(-0.5 * w * x * x);
}

inline double asymptotic_J(double s) { return 4.0 / std::sqrt(pi) * std::pow(s, 0.75) * std::exp(-2.0 * std::sqrt(s)); }

// Composite Simpson on uniform samples (odd count).
inline double simpson(std::span<const double> f, double h) {
  double s = f.front() + f.back();
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += (i % 2 ? 4.0 : 2.0) * f[i];
  return s * h / 3.0;
}

} // namespace oracle
