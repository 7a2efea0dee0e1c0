#pragma once

#include <string>
#include <utility>
#include <vector>

#include "grpd/decomposition.hpp"

namespace grpd {

/// A complex function on the morphisms, dense in morphism order.
struct GroupoidFunction {
  GroupoidPtr groupoid;
  std::vector<Complex> values;

  static GroupoidFunction zero(const GroupoidPtr& g) { return {g, std::vector<Complex>(g->morphism_count())}; }
};

/// A function on one hom set G_u^v (source u, range v).
struct HomSetFunction {
  int source = 0;
  int target = 0;
  std::vector<int> morphisms;  // G_u^v in morphism order
  std::vector<Complex> values;
};

/// Measure on G_u^v used by inner products. Renormalized is λ_u restricted
/// to G_u^v and rescaled to total mass one (the default everywhere);
/// Restricted keeps the raw restriction of λ_u, with mass λ_u(G_u^v).
enum class HomSetMeasure { Renormalized, Restricted };

/// ⟨f, h⟩ = Σ f(x) conj(h(x)) μ(x).
Complex hom_inner(const FiniteGroupoid& g, const HomSetFunction& f, const HomSetFunction& h,
                  HomSetMeasure measure = HomSetMeasure::Renormalized);

/// π_{u,v}^{ij}(x) = ⟨π(x) e_u^j, e_v^i⟩ on G_u^v; rows index H_v, columns H_u.
struct MatrixElements {
  int rows = 0;
  int cols = 0;
  std::vector<HomSetFunction> entries;  // row-major

  const HomSetFunction& at(int i, int j) const { return entries[static_cast<std::size_t>(i) * cols + j]; }
};

/// Empty when u and v lie in different orbits.
MatrixElements matrix_elements(const Representation& rep, int u, int v);

/// f(x) = Tr(A π(x)) on G_u^v, with A: H_v -> H_u (shape d_u × d_v).
HomSetFunction trace_form(const ComplexMatrix& a, const Representation& rep, int u, int v);

/// The A with f = Tr(A π(·)) in the least-squares sense. Throws NotInSpan
/// when the fit residual (L² under the renormalized measure) exceeds
/// tol·max(1, ‖f‖), ShapeMismatch when f is not a function on G_u^v.
ComplexMatrix expand_in_matrix_elements(const HomSetFunction& f, const Representation& rep, int u, int v,
                                        double tol = 1e-9);

/// dim E_{u,v}^π, the numerical rank of the matrix elements on G_u^v.
std::size_t matrix_element_span_dimension(const Representation& rep, int u, int v, double rank_tol = 1e-9);

/// (f * g)(x) = Σ_{y ∈ G_{s(x)}} f(xy⁻¹) g(y) λ_{s(x)}(y).
GroupoidFunction convolve(const GroupoidFunction& f, const GroupoidFunction& g);
/// f*(x) = conj(f(x⁻¹)).
GroupoidFunction involution(const GroupoidFunction& f);
/// f̌(x) = f(x⁻¹).
GroupoidFunction inversion(const GroupoidFunction& f);
/// Pointwise conjugate f̄.
GroupoidFunction conjugate(const GroupoidFunction& f);
/// L_x f(y) = f(x⁻¹y) on G^{r(x)}; zero off that fibre.
GroupoidFunction left_translate(int x, const GroupoidFunction& f);
/// R_x f(y) = f(yx) on G_{r(x)}; zero off that fibre.
GroupoidFunction right_translate(int x, const GroupoidFunction& f);

/// π_{ξ,η}(x) = ⟨π(x) ξ_{s(x)}, η_{r(x)}⟩.
GroupoidFunction matrix_coefficient(const Representation& rep, const VectorBundle& xi, const VectorBundle& eta);

/// The vector π(x)ξ: π(x)ξ_{s(x)} at r(x), zero elsewhere.
VectorBundle translate_vector(const Representation& rep, int x, const VectorBundle& xi);

/// π(f) on the direct sum ⊕_u H_u (uniform measure on units):
/// (π(f)ξ)_u = Σ_{x ∈ G^u} λ^u(x) f(x) π(x) ξ_{s(x)}.
struct IntegratedOperator {
  std::vector<Eigen::Index> offsets;  // fibre u occupies [offsets[u], offsets[u+1])
  ComplexMatrix matrix;

  VectorBundle apply(const VectorBundle& xi) const;
};

IntegratedOperator integrated_rep(const Representation& rep, const GroupoidFunction& f);

/// Gram matrix ⟨π^{ij}, π'^{i'j'}⟩ on G_u^v. Row index i·d_u^π + j, column
/// index i'·d_u^{π'} + j'. Throws NotCoOrbital.
ComplexMatrix schur_gram(const Representation& a, const Representation& b, int u, int v,
                         HomSetMeasure measure = HomSetMeasure::Renormalized);

/// {√(d_u^π) π_{u,v}^{ij}} over every irrep of the orbit, with morphisms
/// indexed in the table's groupoid.
struct PeterWeylBasis {
  int u = 0;
  int v = 0;
  std::size_t hom_set_size = 0;
  std::vector<HomSetFunction> functions;
  std::vector<std::string> labels;               // irrep label per function
  std::vector<std::pair<int, int>> indices;      // (i, j) per function
  double gram_error = 0.0;                       // ‖Gram − I‖

  ComplexVector coefficients(const FiniteGroupoid& g, const HomSetFunction& f) const;
  HomSetFunction synthesize(const ComplexVector& coefficients) const;
};

/// Throws EmptyHomSet when G_u^v is empty and IncompleteTable when the
/// family is smaller than |G_u^v|.
PeterWeylBasis peter_weyl_basis(const IrrepTable& table, int u, int v);

struct SeparationWitness {
  int x = 0;
  int y = 0;
  std::string witness;  // irrep label, or "source/target"
  double gap = 0.0;     // ‖π(x) − π(y)‖ for the witnessing irrep
};

struct SeparationReport {
  bool separates = true;
  std::vector<SeparationWitness> witnesses;
  std::vector<std::pair<int, int>> failures;
};

/// For every pair of distinct morphisms, the first irrep (table order)
/// telling them apart, or their differing source/range.
SeparationReport separates_points(const IrrepTable& table, double tol = 1e-9);

/// U_w c = √d (y ↦ (π(y)c)_i) from H_w^π into L²(G_w^v): an isometry
/// intertwining π with right_regular_rep_to(g, v) when π is irreducible. Its
/// image at w = u is the row space span_j π_{u,v}^{ij}. Needs a transitive
/// groupoid; throws IndexOutOfRange unless 0 <= i < d_v.
OperatorBundle regular_embedding(const Representation& rep, int v, int i);

/// V_w c = √d (y ↦ Σ_i c_i π(y)_{ij}) from H_w^{π̄} into L²(G_u^w): intertwines
/// conjugate_rep(π) with left_regular_rep_from(g, u). Image at w = v is the
/// column space span_i π_{u,v}^{ij}.
OperatorBundle column_embedding(const Representation& rep, int u, int j);

/// T_ψ f = ψ * f on L²(G_u, λ_u), in the basis {1_z/√λ_u(z)}.
ComplexMatrix convolution_operator(const GroupoidFunction& psi, int u);

}  // namespace grpd
