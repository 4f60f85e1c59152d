#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace optolattice::linalg {

// Eigenpairs of a real symmetric tridiagonal matrix, ascending. Eigenvector j
// occupies vectors[j * size .. (j + 1) * size).
struct TridiagonalEigen {
  std::size_t size = 0;
  std::vector<double> values;
  std::vector<double> vectors;

  std::span<const double> vector(std::size_t j) const {
    return std::span<const double>(vectors).subspan(j * size, size);
  }
};

// Implicit-shift QL (tql2). `off_diagonal[i]` couples rows i and i + 1, so it
// has one fewer entry than `diagonal`. Throws NumericalError if an eigenvalue
// fails to converge within 30 sweeps.
TridiagonalEigen eigen_tridiagonal(std::span<const double> diagonal, std::span<const double> off_diagonal);

// Largest ||T v - lambda v||_2 over the returned pairs.
double max_residual(std::span<const double> diagonal, std::span<const double> off_diagonal,
                    const TridiagonalEigen& eig);

} // namespace optolattice::linalg
