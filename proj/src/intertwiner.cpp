#include "grpd/intertwiner.hpp"

#include <algorithm>
#include <cmath>

#include "grpd/error.hpp"

namespace grpd {

namespace {

void require_same_groupoid(const Representation& a, const Representation& b) {
  if (!same_groupoid(a.groupoid(), b.groupoid())) {
    throw Error(ErrorCode::GroupoidMismatch, "representations live on different groupoids");
  }
}

void require_bundle_shape(const OperatorBundle& a, const Representation& from, const Representation& to) {
  const auto& g = *from.groupoid();
  if (a.size() != g.unit_count()) throw Error(ErrorCode::ShapeMismatch, "operator bundle has wrong number of fibres");
  for (std::size_t u = 0; u < a.size(); ++u) {
    if (a[u].rows() != to.dim(static_cast<int>(u)) || a[u].cols() != from.dim(static_cast<int>(u))) {
      throw Error(ErrorCode::ShapeMismatch, "operator at unit '" + g.unit_name(static_cast<int>(u)) + "' is " +
                                                std::to_string(a[u].rows()) + "x" + std::to_string(a[u].cols()));
    }
  }
}

// Column offsets of each fibre block h_u (column-major vec) in the unknown vector.
std::vector<Eigen::Index> unknown_offsets(const Representation& from, const Representation& to) {
  std::vector<Eigen::Index> off(from.dims().size() + 1, 0);
  for (std::size_t u = 0; u < from.dims().size(); ++u) {
    off[u + 1] = off[u] + static_cast<Eigen::Index>(to.dim(static_cast<int>(u))) * from.dim(static_cast<int>(u));
  }
  return off;
}

OperatorBundle unpack(const ComplexVector& v, const Representation& from, const Representation& to,
                      const std::vector<Eigen::Index>& off) {
  OperatorBundle h;
  for (std::size_t u = 0; u < from.dims().size(); ++u) {
    const int rows = to.dim(static_cast<int>(u));
    const int cols = from.dim(static_cast<int>(u));
    h.fibres.push_back(Eigen::Map<const ComplexMatrix>(v.data() + off[u], rows, cols));
  }
  return h;
}

ComplexVector pack(const OperatorBundle& h, const std::vector<Eigen::Index>& off) {
  ComplexVector v(off.back());
  for (std::size_t u = 0; u < h.size(); ++u) {
    v.segment(off[u], h[u].size()) = Eigen::Map<const ComplexVector>(h[u].data(), h[u].size());
  }
  return v;
}

}  // namespace

Complex trace_inner(const OperatorBundle& a, const OperatorBundle& b) {
  Complex sum = 0.0;
  for (std::size_t u = 0; u < a.size(); ++u) sum += (a[u].adjoint() * b[u]).trace();
  return sum;
}

double intertwining_residual(const OperatorBundle& h, const Representation& from, const Representation& to) {
  const auto& g = *from.groupoid();
  double worst = 0.0;
  for (std::size_t xs = 0; xs < g.morphism_count(); ++xs) {
    const int x = static_cast<int>(xs);
    worst = std::max(worst, max_abs(to.matrix(x) * h[g.source(x)] - h[g.target(x)] * from.matrix(x)));
  }
  return worst;
}

OperatorBundle identity_bundle(const Representation& rep) {
  OperatorBundle id;
  for (int d : rep.dims()) id.fibres.push_back(ComplexMatrix::Identity(d, d));
  return id;
}

IntertwinerSpace intertwiner_space(const Representation& from, const Representation& to, double rank_tol) {
  require_same_groupoid(from, to);
  const auto& g = *from.groupoid();
  const auto off = unknown_offsets(from, to);

  Eigen::Index rows = 0;
  for (std::size_t xs = 0; xs < g.morphism_count(); ++xs) {
    const int x = static_cast<int>(xs);
    rows += static_cast<Eigen::Index>(to.dim(g.target(x))) * from.dim(g.source(x));
  }
  ComplexMatrix system = ComplexMatrix::Zero(rows, off.back());

  // vec(π2(x) h_s) = (I ⊗ π2(x)) vec h_s and vec(h_r π1(x)) = (π1(x)ᵀ ⊗ I) vec h_r.
  Eigen::Index row = 0;
  for (std::size_t xs = 0; xs < g.morphism_count(); ++xs) {
    const int x = static_cast<int>(xs);
    const int s = g.source(x);
    const int r = g.target(x);
    const Eigen::Index h = static_cast<Eigen::Index>(to.dim(r)) * from.dim(s);
    const ComplexMatrix lhs = kron(ComplexMatrix::Identity(from.dim(s), from.dim(s)), to.matrix(x));
    const ComplexMatrix rhs = kron(from.matrix(x).transpose(), ComplexMatrix::Identity(to.dim(r), to.dim(r)));
    system.block(row, off[s], h, lhs.cols()) += lhs;
    system.block(row, off[r], h, rhs.cols()) -= rhs;
    row += h;
  }

  const ComplexMatrix kernel = null_space(system, rank_tol);
  IntertwinerSpace space;
  for (Eigen::Index k = 0; k < kernel.cols(); ++k) space.basis.push_back(unpack(kernel.col(k), from, to, off));
  return space;
}

OperatorBundle project_to_intertwiner(const OperatorBundle& a, const Representation& from, const Representation& to) {
  require_same_groupoid(from, to);
  require_bundle_shape(a, from, to);
  const auto& g = *from.groupoid();
  const HaarSystem haar = normalized_haar(g);
  OperatorBundle out;
  for (std::size_t us = 0; us < g.unit_count(); ++us) {
    const int u = static_cast<int>(us);
    ComplexMatrix acc = ComplexMatrix::Zero(to.dim(u), from.dim(u));
    for (int x : g.source_fibre(u)) {
      acc += haar.source_weight(g, x) * to.matrix(g.inverse(x)) * a[g.target(x)] * from.matrix(x);
    }
    out.fibres.push_back(std::move(acc));
  }
  return out;
}

std::size_t averaged_intertwiner_dimension(const Representation& from, const Representation& to, double rank_tol) {
  require_same_groupoid(from, to);
  const auto& g = *from.groupoid();
  const auto off = unknown_offsets(from, to);
  ComplexMatrix images(off.back(), off.back());
  OperatorBundle probe;
  for (std::size_t u = 0; u < g.unit_count(); ++u) {
    probe.fibres.push_back(ComplexMatrix::Zero(to.dim(static_cast<int>(u)), from.dim(static_cast<int>(u))));
  }
  Eigen::Index col = 0;
  for (std::size_t u = 0; u < g.unit_count(); ++u) {
    for (Eigen::Index k = 0; k < probe[u].size(); ++k) {
      probe[u](k) = 1.0;
      images.col(col++) = pack(project_to_intertwiner(probe, from, to), off);
      probe[u](k) = 0.0;
    }
  }
  return numerical_rank(images, rank_tol);
}

std::vector<std::size_t> self_intertwiner_dimensions(const Representation& rep, double rank_tol) {
  const auto& g = *rep.groupoid();
  if (g.is_transitive()) return {intertwiner_space(rep, rep, rank_tol).dimension()};
  std::vector<std::size_t> dims;
  for (std::size_t k = 0; k < g.orbits().size(); ++k) {
    const Representation part = restrict_to_orbit(rep, k);
    dims.push_back(intertwiner_space(part, part, rank_tol).dimension());
  }
  return dims;
}

bool is_irreducible(const Representation& rep, double rank_tol) {
  const auto dims = self_intertwiner_dimensions(rep, rank_tol);
  return std::all_of(dims.begin(), dims.end(), [](std::size_t d) { return d == 1; });
}

std::optional<OperatorBundle> are_equivalent(const Representation& from, const Representation& to,
                                             const Tolerances& tol) {
  if (!same_groupoid(from.groupoid(), to.groupoid()) || from.dims() != to.dims()) return std::nullopt;
  const IntertwinerSpace mor = intertwiner_space(from, to, tol.rank);
  if (mor.dimension() == 0) return std::nullopt;

  auto try_polar = [&](const OperatorBundle& t) -> std::optional<OperatorBundle> {
    OperatorBundle u;
    try {
      for (const auto& f : t.fibres) u.fibres.push_back(polar_unitary(f, tol.rank));
    } catch (const Error&) {
      return std::nullopt;
    }
    return u;
  };

  if (auto u = try_polar(mor.basis.front())) return u;
  std::mt19937_64 rng(0x5eed);
  for (int attempt = 0; attempt < 4; ++attempt) {
    const ComplexMatrix c = random_gaussian(mor.dimension(), 1, rng);
    OperatorBundle t = mor.basis.front();
    for (auto& f : t.fibres) f.setZero();
    for (std::size_t k = 0; k < mor.dimension(); ++k) {
      for (std::size_t u = 0; u < t.size(); ++u) t[u] += c(static_cast<Eigen::Index>(k), 0) * mor.basis[k][u];
    }
    if (auto u = try_polar(t)) return u;
  }
  return std::nullopt;
}

std::size_t multiplicity(const Representation& irrep, const Representation& rep, double rank_tol) {
  if (!is_irreducible(irrep, rank_tol)) throw Error(ErrorCode::NotIrreducible, "multiplicity needs an irreducible");
  if (same_groupoid(irrep.groupoid(), rep.groupoid())) return intertwiner_space(irrep, rep, rank_tol).dimension();
  const auto& g = rep.groupoid();
  for (std::size_t k = 0; k < g->orbits().size(); ++k) {
    const Subgroupoid sub = orbit_subgroupoid(g, k);
    if (same_groupoid(sub.groupoid, irrep.groupoid())) {
      return intertwiner_space(irrep, restrict_to_orbit(rep, k), rank_tol).dimension();
    }
  }
  throw Error(ErrorCode::GroupoidMismatch, "irrep lives neither on the groupoid nor on one of its orbits");
}

SubbundleBasis cyclic_subbundle(const Representation& rep, const VectorBundle& xi, double rank_tol) {
  const auto& g = *rep.groupoid();
  if (xi.size() != g.unit_count()) throw Error(ErrorCode::ShapeMismatch, "vector bundle has wrong number of fibres");
  for (std::size_t u = 0; u < xi.size(); ++u) {
    if (xi[u].size() != rep.dim(static_cast<int>(u))) {
      throw Error(ErrorCode::ShapeMismatch, "vector at unit '" + g.unit_name(static_cast<int>(u)) + "' has wrong size");
    }
  }
  for (std::size_t k = 0; k < g.orbits().size(); ++k) {
    const auto& orbit = g.orbits()[k];
    const bool nonzero = std::any_of(orbit.begin(), orbit.end(), [&](int u) { return xi[u].norm() > 0.0; });
    if (!nonzero) throw Error(ErrorCode::ZeroVectorOnOrbit, "ξ vanishes on orbit " + std::to_string(k));
  }
  SubbundleBasis out;
  for (std::size_t us = 0; us < g.unit_count(); ++us) {
    const int u = static_cast<int>(us);
    const auto& fibre = g.range_fibre(u);
    ComplexMatrix span(rep.dim(u), static_cast<Eigen::Index>(fibre.size()));
    for (std::size_t k = 0; k < fibre.size(); ++k) {
      span.col(static_cast<Eigen::Index>(k)) = rep.matrix(fibre[k]) * xi[g.source(fibre[k])];
    }
    out.fibres.push_back(range_basis(span, rank_tol));
  }
  return out;
}

OperatorBundle averaging_operator(const Representation& rep, const VectorBundle& xi, double tol) {
  const auto& g = *rep.groupoid();
  if (xi.size() != g.unit_count()) throw Error(ErrorCode::ShapeMismatch, "vector bundle has wrong number of fibres");
  for (std::size_t u = 0; u < xi.size(); ++u) {
    if (xi[u].size() != rep.dim(static_cast<int>(u))) {
      throw Error(ErrorCode::ShapeMismatch, "vector at unit '" + g.unit_name(static_cast<int>(u)) + "' has wrong size");
    }
    if (std::abs(xi[u].norm() - 1.0) > tol) {
      throw Error(ErrorCode::NotUnitVector, "‖ξ‖ = " + std::to_string(xi[u].norm()) + " at unit '" +
                                                g.unit_name(static_cast<int>(u)) + "'");
    }
  }
  const HaarSystem haar = normalized_haar(g);
  OperatorBundle t;
  for (std::size_t us = 0; us < g.unit_count(); ++us) {
    const int u = static_cast<int>(us);
    ComplexMatrix acc = ComplexMatrix::Zero(rep.dim(u), rep.dim(u));
    for (int x : g.range_fibre(u)) {
      const ComplexVector v = rep.matrix(x) * xi[g.source(x)];
      acc += haar.range_weight(x) * v * v.adjoint();
    }
    t.fibres.push_back(std::move(acc));
  }
  return t;
}

double projection_residual(const Representation& rep, const SubbundleBasis& basis) {
  const auto& g = *rep.groupoid();
  if (basis.size() != g.unit_count()) throw Error(ErrorCode::ShapeMismatch, "subbundle basis has wrong number of fibres");
  OperatorBundle p;
  for (std::size_t u = 0; u < basis.size(); ++u) {
    if (basis[u].rows() != rep.dim(static_cast<int>(u))) throw Error(ErrorCode::ShapeMismatch, "subbundle fibre shape");
    p.fibres.push_back(basis[u] * basis[u].adjoint());
  }
  return intertwining_residual(p, rep, rep);
}

bool projection_is_morphism(const Representation& rep, const SubbundleBasis& basis, double tol) {
  return projection_residual(rep, basis) <= tol;
}

SubbundleBasis invariant_complement(const Representation& rep, const SubbundleBasis& basis, double tol) {
  const auto& g = *rep.groupoid();
  const InvarianceCheck check = invariance_leakage(rep, basis);
  if (check.leakage > tol) {
    throw Error(ErrorCode::NotInvariant, "leakage " + std::to_string(check.leakage) + " at morphism '" +
                                             g.morphism_name(check.worst_morphism) + "'");
  }
  SubbundleBasis out;
  for (std::size_t u = 0; u < basis.size(); ++u) {
    ComplexMatrix comp = basis[u].cols() == 0 ? ComplexMatrix(ComplexMatrix::Identity(rep.dim(static_cast<int>(u)),
                                                                                      rep.dim(static_cast<int>(u))))
                                              : null_space(basis[u].adjoint());
    if (comp.cols() == 0) {
      throw Error(ErrorCode::ZeroFibre, "complement is zero at unit '" + g.unit_name(static_cast<int>(u)) + "'");
    }
    out.fibres.push_back(std::move(comp));
  }
  return out;
}

}  // namespace grpd
