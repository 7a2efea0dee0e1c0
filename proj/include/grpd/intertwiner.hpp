#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "grpd/representation.hpp"

namespace grpd {

/// Σ_u Tr(A_u* B_u).
Complex trace_inner(const OperatorBundle& a, const OperatorBundle& b);

/// max_x ‖π2(x) h_{s(x)} − h_{r(x)} π1(x)‖.
double intertwining_residual(const OperatorBundle& h, const Representation& from, const Representation& to);

/// Orthonormal (trace inner product) basis of Mor(from, to).
struct IntertwinerSpace {
  std::vector<OperatorBundle> basis;

  std::size_t dimension() const { return basis.size(); }
};

/// Solves π2(x) h_{s(x)} = h_{r(x)} π1(x) for every morphism x as one linear
/// system and returns its null space. Throws GroupoidMismatch.
IntertwinerSpace intertwiner_space(const Representation& from, const Representation& to, double rank_tol = 1e-9);

/// Ã_u = Σ_{x ∈ G_u} λ_u(x) π2(x⁻¹) A_{r(x)} π1(x). Lands in Mor(from, to) and
/// fixes every element already there. Throws ShapeMismatch.
OperatorBundle project_to_intertwiner(const OperatorBundle& a, const Representation& from, const Representation& to);

/// dim Mor computed as the rank of project_to_intertwiner over the elementary
/// operator bundles; an independent route to intertwiner_space().dimension().
std::size_t averaged_intertwiner_dimension(const Representation& from, const Representation& to,
                                           double rank_tol = 1e-9);

/// dim Mor(π|O, π|O) for each orbit O, in orbit order.
std::vector<std::size_t> self_intertwiner_dimensions(const Representation& rep, double rank_tol = 1e-9);

/// Irreducible iff the self-intertwiners restricted to every orbit are the scalars.
bool is_irreducible(const Representation& rep, double rank_tol = 1e-9);

/// A unitary U ∈ Mor(from, to) when the representations are equivalent.
/// The witness is the fibrewise polar factor of the first basis element of
/// Mor with invertible fibres; random combinations (fixed seed) are tried when
/// the first element is singular, which only happens for reducible inputs.
std::optional<OperatorBundle> are_equivalent(const Representation& from, const Representation& to,
                                             const Tolerances& tol = {});

/// mult(ρ, π) = dim Mor(ρ, π). ρ may live on π's groupoid or on one of its
/// orbit subgroupoids, in which case π is restricted to that orbit first.
/// Throws NotIrreducible, GroupoidMismatch.
std::size_t multiplicity(const Representation& irrep, const Representation& rep, double rank_tol = 1e-9);

/// Fibre u spanned by {π(x) ξ_{s(x)} : x ∈ G^u}. Throws ZeroVectorOnOrbit when
/// ξ vanishes on a whole orbit.
SubbundleBasis cyclic_subbundle(const Representation& rep, const VectorBundle& xi, double rank_tol = 1e-9);

/// T_u = Σ_{x ∈ G^u} λ^u(x) (π(x)ξ_{s(x)})(π(x)ξ_{s(x)})*. Positive, nonzero,
/// and in Mor(π, π). Throws NotUnitVector unless every ‖ξ_u‖ = 1.
OperatorBundle averaging_operator(const Representation& rep, const VectorBundle& xi, double tol = 1e-9);

/// Fibrewise orthogonal complement of an invariant subbundle. Throws
/// NotInvariant, and ZeroFibre when some fibre of the complement is empty.
SubbundleBasis invariant_complement(const Representation& rep, const SubbundleBasis& basis, double tol = 1e-9);

/// Whether P = BB* satisfies the intertwiner equations (equivalently, whether
/// the subbundle is invariant).
bool projection_is_morphism(const Representation& rep, const SubbundleBasis& basis, double tol = 1e-9);
double projection_residual(const Representation& rep, const SubbundleBasis& basis);

OperatorBundle identity_bundle(const Representation& rep);

}  // namespace grpd
