#include "optolattice/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "optolattice/errors.hpp"

namespace optolattice::linalg {

TridiagonalEigen eigen_tridiagonal(std::span<const double> diagonal, std::span<const double> off_diagonal) {
  const std::size_t n = diagonal.size();
  if (n == 0) return {};
  if (off_diagonal.size() + 1 != n) throw DomainError("tridiagonal off-diagonal must have n - 1 entries");

  std::vector<double> d(diagonal.begin(), diagonal.end());
  std::vector<double> e(n, 0.0);
  std::copy(off_diagonal.begin(), off_diagonal.end(), e.begin());
  // z is row-major here: z[i * n + j] is component i of vector j.
  std::vector<double> z(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) z[i * n + i] = 1.0;

  const double eps = std::numeric_limits<double>::epsilon();
  double f = 0.0;
  double tst1 = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n - 1 && std::abs(e[m]) > eps * tst1) ++m;

    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 30) throw NumericalError("tridiagonal QL failed to converge");

        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        // Implicit QL sweep from m back to l.
        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          for (std::size_t k = 0; k < n; ++k) {
            double* row = &z[k * n];
            h = row[ii + 1];
            row[ii + 1] = s * row[ii] + c * h;
            row[ii] = c * row[ii] - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  TridiagonalEigen out;
  out.size = n;
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = d[order[j]];
    for (std::size_t i = 0; i < n; ++i) out.vectors[j * n + i] = z[i * n + order[j]];
  }
  return out;
}

double max_residual(std::span<const double> diagonal, std::span<const double> off_diagonal,
                    const TridiagonalEigen& eig) {
  const std::size_t n = diagonal.size();
  double worst = 0.0;
  for (std::size_t j = 0; j < eig.values.size(); ++j) {
    const auto v = eig.vector(j);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double tv = diagonal[i] * v[i];
      if (i > 0) tv += off_diagonal[i - 1] * v[i - 1];
      if (i + 1 < n) tv += off_diagonal[i] * v[i + 1];
      const double r = tv - eig.values[j] * v[i];
      sum += r * r;
    }
    worst = std::max(worst, std::sqrt(sum));
  }
  return worst;
}

} // namespace optolattice::linalg
