#include "grpd/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "grpd/error.hpp"

namespace grpd {

namespace {

// Entries below this (relative to the column norm, which is 1) are treated as
// zero when fixing the phase of an eigenvector.
constexpr double kPhaseCutoff = 1e-10;

void normalize_phase(ComplexMatrix& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      const double mag = std::abs(vectors(r, c));
      if (mag > kPhaseCutoff) {
        vectors.col(c) *= std::conj(vectors(r, c)) / mag;
        vectors(r, c) = Complex(mag, 0.0);
        break;
      }
    }
  }
}

}  // namespace

double max_abs(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return max_abs(m - m.adjoint());
}

double unitarity_defect(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  const auto id = ComplexMatrix::Identity(u.rows(), u.cols());
  return std::max(max_abs(u.adjoint() * u - id), max_abs(u * u.adjoint() - id));
}

EigenDecomposition hermitian_eig(const ComplexMatrix& m, double tol) {
  const double defect = hermiticity_defect(m);
  if (defect > tol) {
    throw Error(ErrorCode::NotHermitian, "‖M − M*‖ = " + std::to_string(defect) + " exceeds " + std::to_string(tol));
  }
  EigenDecomposition out;
  if (m.size() == 0) {
    out.values.resize(0);
    out.vectors.resize(0, 0);
    return out;
  }
  // Symmetrize so the solver sees an exactly Hermitian input.
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  normalize_phase(out.vectors);
  return out;
}

namespace {

// Singular structure on the column side of m, from the eigenvectors of the
// Gram matrix m*m. Each σ is re-measured as ‖m v‖, so round-off stays at
// eps·‖m‖ rather than the √eps·‖m‖ that the eigenvalues of m*m would give.
struct ColumnSingular {
  Eigen::VectorXd sigma;
  ComplexMatrix v;
};

ColumnSingular column_singular(const ComplexMatrix& m) {
  const ComplexMatrix gram = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (gram + gram.adjoint()));
  ColumnSingular out{Eigen::VectorXd(m.cols()), solver.eigenvectors()};
  for (Eigen::Index i = 0; i < m.cols(); ++i) out.sigma(i) = (m * out.v.col(i)).norm();
  return out;
}

double rank_cutoff(const Eigen::VectorXd& sigma, double rel_tol) {
  return rel_tol * std::max(sigma.size() == 0 ? 0.0 : sigma.maxCoeff(), 1.0);
}

ComplexMatrix columns_where(const ColumnSingular& s, double cutoff, bool above) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < s.sigma.size(); ++i) {
    if ((s.sigma(i) > cutoff) == above) keep.push_back(i);
  }
  // Largest σ first for ranges.
  if (above) std::reverse(keep.begin(), keep.end());
  ComplexMatrix out(s.v.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = s.v.col(keep[k]);
  return out;
}

}  // namespace

ComplexMatrix null_space(const ComplexMatrix& m, double rel_tol) {
  if (m.cols() == 0) return ComplexMatrix(0, 0);
  if (m.rows() == 0) return ComplexMatrix::Identity(m.cols(), m.cols());
  const ColumnSingular s = column_singular(m);
  ComplexMatrix basis = columns_where(s, rank_cutoff(s.sigma, rel_tol), false);
  normalize_phase(basis);
  return basis;
}

ComplexMatrix range_basis(const ComplexMatrix& m, double rel_tol) {
  if (m.rows() == 0 || m.cols() == 0) return ComplexMatrix(m.rows(), 0);
  const ColumnSingular s = column_singular(m.adjoint());
  ComplexMatrix basis = columns_where(s, rank_cutoff(s.sigma, rel_tol), true);
  normalize_phase(basis);
  return basis;
}

std::size_t numerical_rank(const ComplexMatrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  const ColumnSingular s = column_singular(m.rows() < m.cols() ? ComplexMatrix(m.adjoint()) : m);
  const double cutoff = rank_cutoff(s.sigma, rel_tol);
  return static_cast<std::size_t>((s.sigma.array() > cutoff).count());
}

ComplexMatrix polar_unitary(const ComplexMatrix& t, double rel_tol) {
  if (t.rows() != t.cols()) {
    throw Error(ErrorCode::RankDeficient, "polar factor of a non-square " + std::to_string(t.rows()) + "x" +
                                              std::to_string(t.cols()) + " matrix");
  }
  if (t.size() == 0) return t;
  const Eigen::JacobiSVD<ComplexMatrix> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const double smax = sigma(0);
  const double smin = sigma(sigma.size() - 1);
  if (smax == 0.0 || smin <= rel_tol * smax) {
    throw Error(ErrorCode::RankDeficient, "σ_min/σ_max = " + std::to_string(smax == 0.0 ? 0.0 : smin / smax));
  }
  return svd.matrixU() * svd.matrixV().adjoint();
}

std::vector<ValueCluster> cluster_values(const std::vector<double>& values, double gap_tol) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<ValueCluster> out;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k == 0 || values[order[k]] - values[order[k - 1]] > gap_tol) out.emplace_back();
    out.back().members.push_back(order[k]);
  }
  for (auto& c : out) {
    double sum = 0.0;
    for (auto i : c.members) sum += values[i];
    c.mean = sum / static_cast<double>(c.members.size());
  }
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix random_gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

ComplexMatrix random_unitary(std::size_t n, std::mt19937_64& rng) {
  const ComplexMatrix g = random_gaussian(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (std::size_t j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
  const ComplexMatrix g = random_gaussian(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

}  // namespace grpd
