#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace grpd {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Default tolerances. Bundle dimensions stay in the low hundreds, so double
// precision leaves ample headroom below these.
struct Tolerances {
  double unitary = 1e-9;   // hermiticity / unitarity, absolute, max-entry norm
  double rank = 1e-9;      // singular value cutoff relative to the largest
  double cluster = 1e-6;   // eigenvalue gap relative to spectral diameter
};

// Largest absolute entry. This is the "∞-norm" used by every tolerance check.
double max_abs(const ComplexMatrix& m);
// ‖M − M*‖ in max_abs.
double hermiticity_defect(const ComplexMatrix& m);
// ‖U*U − I‖ and ‖UU* − I‖, whichever is larger; +inf for non-square input.
double unitarity_defect(const ComplexMatrix& u);

struct EigenDecomposition {
  Eigen::VectorXd values;  // ascending
  ComplexMatrix vectors;   // orthonormal columns, first nonzero entry real positive
};

// Throws NotHermitian when hermiticity_defect(m) > tol.
EigenDecomposition hermitian_eig(const ComplexMatrix& m, double tol = 1e-9);

// Orthonormal basis (columns) of ker(m). Singular values <= rel_tol * max(σ_max, 1)
// count as zero, so a numerically zero matrix has the full space as kernel.
ComplexMatrix null_space(const ComplexMatrix& m, double rel_tol = 1e-9);

// Orthonormal basis of the column span, same cutoff convention.
ComplexMatrix range_basis(const ComplexMatrix& m, double rel_tol = 1e-9);

std::size_t numerical_rank(const ComplexMatrix& m, double rel_tol = 1e-9);

// U = T (T*T)^{-1/2}. Throws RankDeficient when T is not square or has a
// singular value below rel_tol * σ_max.
ComplexMatrix polar_unitary(const ComplexMatrix& t, double rel_tol = 1e-9);

struct ValueCluster {
  double mean = 0.0;
  std::vector<std::size_t> members;  // indices into the input, ascending by value
};

// Single-linkage clustering: neighbours in sorted order closer than gap_tol
// share a class. Classes come out in ascending order of value.
std::vector<ValueCluster> cluster_values(const std::vector<double>& values, double gap_tol);

// Kronecker product a ⊗ b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix random_gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng);
// Haar-distributed unitary (QR of a Gaussian matrix with the R-diagonal phases removed).
ComplexMatrix random_unitary(std::size_t n, std::mt19937_64& rng);
ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64& rng);

}  // namespace grpd
