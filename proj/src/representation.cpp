#include "grpd/representation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "grpd/error.hpp"

namespace grpd {

Representation::Representation(GroupoidPtr groupoid, std::vector<int> dims, std::vector<ComplexMatrix> matrices)
    : groupoid_(std::move(groupoid)), dims_(std::move(dims)), matrices_(std::move(matrices)) {
  const auto& g = *groupoid_;
  if (dims_.size() != g.unit_count()) {
    throw Error(ErrorCode::ShapeMismatch, "expected " + std::to_string(g.unit_count()) + " fibre dimensions, got " +
                                              std::to_string(dims_.size()));
  }
  for (std::size_t u = 0; u < dims_.size(); ++u) {
    if (dims_[u] <= 0) throw Error(ErrorCode::ZeroFibre, "fibre at unit '" + g.unit_name(static_cast<int>(u)) + "'");
  }
  if (matrices_.size() != g.morphism_count()) {
    throw Error(ErrorCode::ShapeMismatch, "expected " + std::to_string(g.morphism_count()) + " matrices, got " +
                                              std::to_string(matrices_.size()));
  }
  for (std::size_t x = 0; x < matrices_.size(); ++x) {
    const int xi = static_cast<int>(x);
    if (matrices_[x].rows() != dims_[g.target(xi)] || matrices_[x].cols() != dims_[g.source(xi)]) {
      throw Error(ErrorCode::ShapeMismatch, "matrix of '" + g.morphism_name(xi) + "' is " +
                                                std::to_string(matrices_[x].rows()) + "x" +
                                                std::to_string(matrices_[x].cols()) + ", expected " +
                                                std::to_string(dims_[g.target(xi)]) + "x" +
                                                std::to_string(dims_[g.source(xi)]));
    }
  }
}

int Representation::total_dim() const { return std::accumulate(dims_.begin(), dims_.end(), 0); }

double ValidationReport::max_violation() const { return std::max({identity, composition, unitarity}); }

ValidationReport validate_representation(const Representation& rep, double tol) {
  const auto& g = *rep.groupoid();
  ValidationReport report;
  double worst = -1.0;
  auto note = [&](double value, int x) {
    if (value > worst) {
      worst = value;
      report.worst_morphism = x;
    }
  };
  for (std::size_t u = 0; u < g.unit_count(); ++u) {
    const int e = g.unit_morphism(static_cast<int>(u));
    const double d = max_abs(rep.matrix(e) - ComplexMatrix::Identity(rep.dim(static_cast<int>(u)), rep.dim(static_cast<int>(u))));
    report.identity = std::max(report.identity, d);
    note(d, e);
  }
  const int n = static_cast<int>(g.morphism_count());
  for (int x = 0; x < n; ++x) {
    if (rep.dim(g.source(x)) != rep.dim(g.target(x))) report.orbit_dims_consistent = false;
    double d = unitarity_defect(rep.matrix(x));
    if (rep.matrix(g.inverse(x)).rows() == rep.matrix(x).cols() &&
        rep.matrix(g.inverse(x)).cols() == rep.matrix(x).rows()) {
      d = std::max(d, max_abs(rep.matrix(g.inverse(x)) - rep.matrix(x).adjoint()));
    }
    report.unitarity = std::max(report.unitarity, d);
    note(d, x);
  }
  for (int x = 0; x < n; ++x) {
    for (int y : g.range_fibre(g.source(x))) {
      const double d = max_abs(rep.matrix(g.compose(x, y)) - rep.matrix(x) * rep.matrix(y));
      report.composition = std::max(report.composition, d);
      note(d, x);
    }
  }
  report.passes = report.orbit_dims_consistent && report.max_violation() <= tol;
  return report;
}

Representation trivial_rep(const GroupoidPtr& g) {
  std::vector<ComplexMatrix> mats(g->morphism_count(), ComplexMatrix::Ones(1, 1));
  return Representation(g, std::vector<int>(g->unit_count(), 1), std::move(mats));
}

namespace {

// Position of each morphism inside a list of morphisms.
std::vector<int> positions(std::size_t morphism_count, const std::vector<int>& list) {
  std::vector<int> pos(morphism_count, -1);
  for (std::size_t i = 0; i < list.size(); ++i) pos[list[i]] = static_cast<int>(i);
  return pos;
}

}  // namespace

Representation right_regular_rep(const GroupoidPtr& gp) {
  const auto& g = *gp;
  const HaarSystem haar = normalized_haar(g);
  std::vector<int> dims;
  std::vector<std::vector<int>> pos;
  for (std::size_t u = 0; u < g.unit_count(); ++u) {
    dims.push_back(static_cast<int>(g.source_fibre(static_cast<int>(u)).size()));
    pos.push_back(positions(g.morphism_count(), g.source_fibre(static_cast<int>(u))));
  }
  std::vector<ComplexMatrix> mats;
  for (std::size_t xs = 0; xs < g.morphism_count(); ++xs) {
    const int x = static_cast<int>(xs);
    const int s = g.source(x);
    const int r = g.target(x);
    ComplexMatrix m = ComplexMatrix::Zero(dims[r], dims[s]);
    // π(x) e_z = √(λ_r(zx⁻¹)/λ_s(z)) e_{zx⁻¹}
    for (int z : g.source_fibre(s)) {
      const int zx = g.compose(z, g.inverse(x));
      m(pos[r][zx], pos[s][z]) = std::sqrt(haar.source_weight(g, zx) / haar.source_weight(g, z));
    }
    mats.push_back(std::move(m));
  }
  return Representation(gp, std::move(dims), std::move(mats));
}

Representation left_regular_rep(const GroupoidPtr& gp) {
  const auto& g = *gp;
  const HaarSystem haar = normalized_haar(g);
  std::vector<int> dims;
  std::vector<std::vector<int>> pos;
  for (std::size_t u = 0; u < g.unit_count(); ++u) {
    dims.push_back(static_cast<int>(g.range_fibre(static_cast<int>(u)).size()));
    pos.push_back(positions(g.morphism_count(), g.range_fibre(static_cast<int>(u))));
  }
  std::vector<ComplexMatrix> mats;
  for (std::size_t xs = 0; xs < g.morphism_count(); ++xs) {
    const int x = static_cast<int>(xs);
    const int s = g.source(x);
    const int r = g.target(x);
    ComplexMatrix m = ComplexMatrix::Zero(dims[r], dims[s]);
    // L_x e_z = √(λ^r(xz)/λ^s(z)) e_{xz}
    for (int z : g.range_fibre(s)) {
      const int xz = g.compose(x, z);
      m(pos[r][xz], pos[s][z]) = std::sqrt(haar.range_weight(xz) / haar.range_weight(z));
    }
    mats.push_back(std::move(m));
  }
  return Representation(gp, std::move(dims), std::move(mats));
}

Representation right_regular_rep_to(const GroupoidPtr& gp, int v) {
  const auto& g = *gp;
  if (!g.is_transitive()) throw Error(ErrorCode::NotTransitive, "hom-set regular representation needs one orbit");
  if (v < 0 || v >= static_cast<int>(g.unit_count())) throw Error(ErrorCode::UnknownUnit, "unit index " + std::to_string(v));
  std::vector<int> dims;
  std::vector<std::vector<int>> pos;
  for (std::size_t w = 0; w < g.unit_count(); ++w) {
    const auto& hs = g.hom_set(static_cast<int>(w), v);
    dims.push_back(static_cast<int>(hs.size()));
    pos.push_back(positions(g.morphism_count(), hs));
  }
  std::vector<ComplexMatrix> mats;
  for (std::size_t xs = 0; xs < g.morphism_count(); ++xs) {
    const int x = static_cast<int>(xs);
    const int s = g.source(x);
    const int r = g.target(x);
    // Uniform weights on equal-size hom sets: a permutation.
    ComplexMatrix m = ComplexMatrix::Zero(dims[r], dims[s]);
    for (int z : g.hom_set(s, v)) m(pos[r][g.compose(z, g.inverse(x))], pos[s][z]) = 1.0;
    mats.push_back(std::move(m));
  }
  return Representation(gp, std::move(dims), std::move(mats));
}

Representation left_regular_rep_from(const GroupoidPtr& gp, int u) {
  const auto& g = *gp;
  if (!g.is_transitive()) throw Error(ErrorCode::NotTransitive, "hom-set regular representation needs one orbit");
  if (u < 0 || u >= static_cast<int>(g.unit_count())) throw Error(ErrorCode::UnknownUnit, "unit index " + std::to_string(u));
  std::vector<int> dims;
  std::vector<std::vector<int>> pos;
  for (std::size_t w = 0; w < g.unit_count(); ++w) {
    const auto& hs = g.hom_set(u, static_cast<int>(w));
    dims.push_back(static_cast<int>(hs.size()));
    pos.push_back(positions(g.morphism_count(), hs));
  }
  std::vector<ComplexMatrix> mats;
  for (std::size_t xs = 0; xs < g.morphism_count(); ++xs) {
    const int x = static_cast<int>(xs);
    const int s = g.source(x);
    const int r = g.target(x);
    ComplexMatrix m = ComplexMatrix::Zero(dims[r], dims[s]);
    for (int z : g.hom_set(u, s)) m(pos[r][g.compose(x, z)], pos[s][z]) = 1.0;
    mats.push_back(std::move(m));
  }
  return Representation(gp, std::move(dims), std::move(mats));
}

namespace {

void require_same_groupoid(const Representation& a, const Representation& b) {
  if (!same_groupoid(a.groupoid(), b.groupoid())) {
    throw Error(ErrorCode::GroupoidMismatch, "representations live on different groupoids");
  }
}

}  // namespace

Representation direct_sum(const Representation& a, const Representation& b) {
  require_same_groupoid(a, b);
  const auto& g = *a.groupoid();
  std::vector<int> dims(g.unit_count());
  for (std::size_t u = 0; u < dims.size(); ++u) dims[u] = a.dim(static_cast<int>(u)) + b.dim(static_cast<int>(u));
  std::vector<ComplexMatrix> mats;
  for (std::size_t x = 0; x < g.morphism_count(); ++x) {
    const auto& ma = a.matrix(static_cast<int>(x));
    const auto& mb = b.matrix(static_cast<int>(x));
    ComplexMatrix m = ComplexMatrix::Zero(ma.rows() + mb.rows(), ma.cols() + mb.cols());
    m.topLeftCorner(ma.rows(), ma.cols()) = ma;
    m.bottomRightCorner(mb.rows(), mb.cols()) = mb;
    mats.push_back(std::move(m));
  }
  return Representation(a.groupoid(), std::move(dims), std::move(mats));
}

Representation direct_sum(const std::vector<Representation>& parts) {
  if (parts.empty()) throw Error(ErrorCode::ShapeMismatch, "direct sum of no representations");
  Representation out = parts.front();
  for (std::size_t k = 1; k < parts.size(); ++k) out = direct_sum(out, parts[k]);
  return out;
}

Representation tensor_product(const Representation& a, const Representation& b) {
  require_same_groupoid(a, b);
  const auto& g = *a.groupoid();
  std::vector<int> dims(g.unit_count());
  for (std::size_t u = 0; u < dims.size(); ++u) dims[u] = a.dim(static_cast<int>(u)) * b.dim(static_cast<int>(u));
  std::vector<ComplexMatrix> mats;
  for (std::size_t x = 0; x < g.morphism_count(); ++x) {
    mats.push_back(kron(a.matrix(static_cast<int>(x)), b.matrix(static_cast<int>(x))));
  }
  return Representation(a.groupoid(), std::move(dims), std::move(mats));
}

Representation conjugate_rep(const Representation& rep) {
  std::vector<ComplexMatrix> mats;
  for (const auto& m : rep.matrices()) mats.push_back(m.conjugate());
  return Representation(rep.groupoid(), rep.dims(), std::move(mats));
}

namespace {

void check_basis_shape(const Representation& rep, const SubbundleBasis& basis) {
  const auto& g = *rep.groupoid();
  if (basis.size() != g.unit_count()) {
    throw Error(ErrorCode::ShapeMismatch, "subbundle basis has " + std::to_string(basis.size()) + " fibres, expected " +
                                              std::to_string(g.unit_count()));
  }
  for (std::size_t u = 0; u < basis.size(); ++u) {
    if (basis[u].rows() != rep.dim(static_cast<int>(u))) {
      throw Error(ErrorCode::ShapeMismatch, "subbundle fibre at '" + g.unit_name(static_cast<int>(u)) + "' has " +
                                                std::to_string(basis[u].rows()) + " rows, expected " +
                                                std::to_string(rep.dim(static_cast<int>(u))));
    }
  }
}

}  // namespace

InvarianceCheck invariance_leakage(const Representation& rep, const SubbundleBasis& basis) {
  check_basis_shape(rep, basis);
  const auto& g = *rep.groupoid();
  InvarianceCheck check;
  for (std::size_t xs = 0; xs < g.morphism_count(); ++xs) {
    const int x = static_cast<int>(xs);
    const ComplexMatrix image = rep.matrix(x) * basis[g.source(x)];
    const auto& br = basis[g.target(x)];
    const double leak = max_abs(image - br * (br.adjoint() * image));
    if (check.worst_morphism < 0 || leak > check.leakage) {
      check.leakage = leak;
      check.worst_morphism = x;
    }
  }
  return check;
}

Representation restrict_rep(const Representation& rep, const SubbundleBasis& basis, double tol) {
  check_basis_shape(rep, basis);
  const auto& g = *rep.groupoid();
  for (std::size_t u = 0; u < basis.size(); ++u) {
    if (basis[u].cols() == 0) throw Error(ErrorCode::ZeroFibre, "subbundle fibre at '" + g.unit_name(static_cast<int>(u)) + "'");
  }
  const InvarianceCheck check = invariance_leakage(rep, basis);
  if (check.leakage > tol) {
    throw Error(ErrorCode::NotInvariant, "leakage " + std::to_string(check.leakage) + " at morphism '" +
                                             g.morphism_name(check.worst_morphism) + "'");
  }
  std::vector<int> dims;
  for (const auto& b : basis.fibres) dims.push_back(static_cast<int>(b.cols()));
  std::vector<ComplexMatrix> mats;
  for (std::size_t xs = 0; xs < g.morphism_count(); ++xs) {
    const int x = static_cast<int>(xs);
    mats.push_back(basis[g.target(x)].adjoint() * rep.matrix(x) * basis[g.source(x)]);
  }
  return Representation(rep.groupoid(), std::move(dims), std::move(mats));
}

Representation restrict_to_orbit(const Representation& rep, std::size_t orbit) {
  const Subgroupoid sub = orbit_subgroupoid(rep.groupoid(), orbit);
  std::vector<int> dims;
  for (int u : sub.units) dims.push_back(rep.dim(u));
  std::vector<ComplexMatrix> mats;
  for (int x : sub.morphisms) mats.push_back(rep.matrix(x));
  return Representation(sub.groupoid, std::move(dims), std::move(mats));
}

ScrambledRep scramble_with_unitaries(const Representation& rep, std::uint64_t seed) {
  const auto& g = *rep.groupoid();
  std::mt19937_64 rng(seed);
  OperatorBundle unitaries;
  for (std::size_t u = 0; u < g.unit_count(); ++u) {
    unitaries.fibres.push_back(random_unitary(rep.dim(static_cast<int>(u)), rng));
  }
  std::vector<ComplexMatrix> mats;
  for (std::size_t xs = 0; xs < g.morphism_count(); ++xs) {
    const int x = static_cast<int>(xs);
    mats.push_back(unitaries[g.target(x)] * rep.matrix(x) * unitaries[g.source(x)].adjoint());
  }
  return {Representation(rep.groupoid(), rep.dims(), std::move(mats)), std::move(unitaries)};
}

Representation scramble(const Representation& rep, std::uint64_t seed) {
  return scramble_with_unitaries(rep, seed).rep;
}

Representation group_rep(const GroupoidPtr& g, const std::vector<ComplexMatrix>& matrices) {
  if (g->unit_count() != 1) throw Error(ErrorCode::ShapeMismatch, "group_rep needs a one-unit groupoid");
  if (matrices.empty()) throw Error(ErrorCode::ShapeMismatch, "no matrices given");
  return Representation(g, {static_cast<int>(matrices.front().rows())}, matrices);
}

}  // namespace grpd
