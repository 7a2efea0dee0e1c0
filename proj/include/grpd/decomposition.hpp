#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grpd/intertwiner.hpp"

namespace grpd {

/// Splits a representation of a transitive groupoid along the eigenspaces of
/// a self-adjoint, non-scalar self-intertwiner. An irreducible input (on
/// every orbit) comes back as the single full bundle. Reducible inputs on a
/// groupoid with several orbits throw NotTransitive; decompose() handles
/// those orbit by orbit.
///
/// Choice of intertwiner: for each basis element B of Mor(π, π) in order, try
/// B + B* then i(B − B*); fall back to a random combination drawn from `seed`.
/// Eigenvalues of all fibres are clustered jointly.
std::vector<SubbundleBasis> split_once(const Representation& rep, const Tolerances& tol, std::uint64_t seed,
                                       std::vector<std::string>* log = nullptr);

struct DecompositionComponent {
  std::size_t orbit = 0;
  Representation irrep;        // a representation of the orbit subgroupoid
  std::size_t multiplicity = 0;
  std::size_t mor_dimension = 0;  // dim Mor(irrep, π|orbit), must equal multiplicity
  /// Per orbit unit, d_π × (multiplicity·d_irrep) with orthonormal columns.
  /// The copies are aligned so that V* π(x) V = I_m ⊗ irrep(x).
  OperatorBundle isometry;
};

struct Decomposition {
  std::vector<DecompositionComponent> components;
  /// max over morphisms of ‖U* π(x) U − ⊕ components‖ and of ‖U*U − I‖,
  /// U being the isometries concatenated per unit.
  double residual = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> log;
};

/// Recursive split_once until every leaf is irreducible, then leaves grouped
/// by equivalence into isotypic components. Components are ordered by
/// orbit, then by irrep_order(). Throws MaxDepthExceeded on numerical failure.
Decomposition decompose(const Representation& rep, const Tolerances& tol = {}, std::uint64_t seed = 0);

/// Canonical ordering of inequivalent irreducibles of one transitive
/// groupoid: by fibre dimension, then by the character on the isotropy group
/// of the first unit (larger real parts first, so the trivial rep leads).
bool irrep_order(const Representation& a, const Representation& b);

struct Irrep {
  std::string label;
  Representation rep;
  std::size_t regular_multiplicity = 0;
};

struct OrbitIrreps {
  std::size_t orbit = 0;
  Subgroupoid sub;
  std::vector<Irrep> irreps;
};

/// The unitary dual, stored orbit by orbit.
struct IrrepTable {
  GroupoidPtr groupoid;
  std::uint64_t seed = 0;
  std::vector<OrbitIrreps> orbits;

  /// Orbit entry holding unit u of the parent groupoid.
  const OrbitIrreps& orbit_of_unit(int u) const;
};

/// Per orbit, decomposes the right regular representation on L²(G_w^v) for
/// the orbit's first unit v. Verifies Σ_π d_u^π d_v^π = |G_u^v| for all
/// co-orbital u, v and that each π occurs with multiplicity d^π; throws
/// CompletenessFailure otherwise.
IrrepTable enumerate_irreps(const GroupoidPtr& g, const Tolerances& tol = {}, std::uint64_t seed = 0);

/// Σ_π d_u^π d_v^π − |G_u^v|, maximised in absolute value over co-orbital pairs.
long completeness_deficit(const IrrepTable& table);

struct IsotypicComponent {
  std::size_t orbit = 0;
  std::string label;
  std::size_t multiplicity = 0;
  SubbundleBasis basis;  // over the orbit's units
};

/// M_ρ = span of the images of all intertwiners ρ -> π. Independent of any
/// splitting choice. `rep` lives on the table's groupoid or on one of its
/// orbit subgroupoids. Irreps with multiplicity zero are omitted.
std::vector<IsotypicComponent> isotypic_components(const Representation& rep, const IrrepTable& table,
                                                   double rank_tol = 1e-9);

}  // namespace grpd
