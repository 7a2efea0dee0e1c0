#pragma once

#include <cstdint>
#include <vector>

#include "grpd/groupoid.hpp"
#include "grpd/numerics.hpp"

namespace grpd {

/// One vector per unit: ξ = {ξ_u}.
using VectorBundle = std::vector<ComplexVector>;

/// One operator per unit, e.g. an intertwiner h = {h_u}: H_u^{π1} -> H_u^{π2}.
struct OperatorBundle {
  std::vector<ComplexMatrix> fibres;

  std::size_t size() const { return fibres.size(); }
  const ComplexMatrix& operator[](std::size_t u) const { return fibres[u]; }
  ComplexMatrix& operator[](std::size_t u) { return fibres[u]; }
};

/// Per unit, a matrix whose orthonormal columns span M_u ⊆ H_u.
struct SubbundleBasis {
  std::vector<ComplexMatrix> fibres;

  std::size_t size() const { return fibres.size(); }
  const ComplexMatrix& operator[](std::size_t u) const { return fibres[u]; }
};

/// A unitary representation of a finite groupoid on a Hilbert bundle.
/// `matrix(x)` maps H_{s(x)} to H_{r(x)}, so its shape is dim(r(x)) x dim(s(x)).
///
/// Construction checks shapes and rejects zero-dimensional fibres; the
/// functor and unitarity laws are checked by validate_representation.
class Representation {
 public:
  Representation(GroupoidPtr groupoid, std::vector<int> dims, std::vector<ComplexMatrix> matrices);

  const GroupoidPtr& groupoid() const { return groupoid_; }
  int dim(int u) const { return dims_[u]; }
  const std::vector<int>& dims() const { return dims_; }
  int total_dim() const;
  const ComplexMatrix& matrix(int x) const { return matrices_[x]; }
  const std::vector<ComplexMatrix>& matrices() const { return matrices_; }

 private:
  GroupoidPtr groupoid_;
  std::vector<int> dims_;
  std::vector<ComplexMatrix> matrices_;
};

struct ValidationReport {
  double identity = 0.0;     // max ‖π(unit_u) − I‖
  double composition = 0.0;  // max ‖π(xy) − π(x)π(y)‖
  double unitarity = 0.0;    // max ‖π(x)*π(x) − I‖, ‖π(x)π(x)* − I‖, ‖π(x⁻¹) − π(x)*‖
  bool orbit_dims_consistent = true;
  int worst_morphism = -1;
  bool passes = false;

  double max_violation() const;
};

ValidationReport validate_representation(const Representation& rep, double tol = 1e-9);

Representation trivial_rep(const GroupoidPtr& g);

/// Right regular representation on H_u = L²(G_u, λ_u): (π(x)φ)(y) = φ(yx).
/// Fibre basis is {1_z / √λ_u(z)} for z in G_u, in morphism order.
Representation right_regular_rep(const GroupoidPtr& g);

/// Left regular representation on H_u = L²(G^u, λ^u): (π(x)φ)(y) = φ(x⁻¹y).
Representation left_regular_rep(const GroupoidPtr& g);

/// Right translation restricted to functions with range v: fibres
/// L²(G_w^v, λ_w^v) for the units w of v's orbit. `g` must be transitive
/// (take an orbit subgroupoid first); throws NotTransitive otherwise.
Representation right_regular_rep_to(const GroupoidPtr& g, int v);

/// Left translation on functions with source u: fibres L²(G_u^w, λ^w_u).
Representation left_regular_rep_from(const GroupoidPtr& g, int u);

Representation direct_sum(const Representation& a, const Representation& b);
Representation direct_sum(const std::vector<Representation>& parts);
Representation tensor_product(const Representation& a, const Representation& b);
Representation conjugate_rep(const Representation& rep);

/// Worst leakage ‖(I − B_r B_r*) π(x) B_s‖ over all morphisms.
struct InvarianceCheck {
  double leakage = 0.0;
  int worst_morphism = -1;
};

InvarianceCheck invariance_leakage(const Representation& rep, const SubbundleBasis& basis);

/// Subrepresentation x ↦ B_{r(x)}* π(x) B_{s(x)}. Throws NotInvariant when the
/// leakage exceeds tol, ZeroFibre for empty fibres and ShapeMismatch.
Representation restrict_rep(const Representation& rep, const SubbundleBasis& basis, double tol = 1e-9);

/// The restriction of `rep` to one orbit, as a representation of the orbit
/// subgroupoid.
Representation restrict_to_orbit(const Representation& rep, std::size_t orbit);

struct ScrambledRep {
  Representation rep;
  OperatorBundle unitaries;  // π'(x) = U_{r(x)} π(x) U_{s(x)}*
};

/// Unitarily equivalent copy of `rep` with pseudo-random fibre unitaries.
Representation scramble(const Representation& rep, std::uint64_t seed);
ScrambledRep scramble_with_unitaries(const Representation& rep, std::uint64_t seed);

/// Representation from explicit matrices of a one-unit groupoid (a group).
Representation group_rep(const GroupoidPtr& g, const std::vector<ComplexMatrix>& matrices);

}  // namespace grpd
