#include "grpd/harmonic.hpp"

#include <algorithm>
#include <cmath>

#include "grpd/error.hpp"

namespace grpd {

namespace {

double measure_weight(const FiniteGroupoid& g, int u, int v, HomSetMeasure measure) {
  const double hom = static_cast<double>(g.hom_set(u, v).size());
  if (measure == HomSetMeasure::Renormalized) return 1.0 / hom;
  // λ_u is uniform on G_u.
  return 1.0 / static_cast<double>(g.source_fibre(u).size());
}

void require_function_on(const FiniteGroupoid& g, const GroupoidFunction& f) {
  if (f.values.size() != g.morphism_count()) {
    throw Error(ErrorCode::ShapeMismatch, "function has " + std::to_string(f.values.size()) + " values, expected " +
                                              std::to_string(g.morphism_count()));
  }
}

}  // namespace

Complex hom_inner(const FiniteGroupoid& g, const HomSetFunction& f, const HomSetFunction& h, HomSetMeasure measure) {
  if (f.source != h.source || f.target != h.target || f.values.size() != h.values.size()) {
    throw Error(ErrorCode::ShapeMismatch, "functions live on different hom sets");
  }
  Complex sum = 0.0;
  for (std::size_t k = 0; k < f.values.size(); ++k) sum += f.values[k] * std::conj(h.values[k]);
  return sum * measure_weight(g, f.source, f.target, measure);
}

MatrixElements matrix_elements(const Representation& rep, int u, int v) {
  const auto& g = *rep.groupoid();
  const auto& hom = g.hom_set(u, v);
  MatrixElements out;
  if (hom.empty()) return out;
  out.rows = rep.dim(v);
  out.cols = rep.dim(u);
  for (int i = 0; i < out.rows; ++i) {
    for (int j = 0; j < out.cols; ++j) {
      HomSetFunction f{u, v, hom, {}};
      for (int x : hom) f.values.push_back(rep.matrix(x)(i, j));
      out.entries.push_back(std::move(f));
    }
  }
  return out;
}

HomSetFunction trace_form(const ComplexMatrix& a, const Representation& rep, int u, int v) {
  const auto& g = *rep.groupoid();
  if (a.rows() != rep.dim(u) || a.cols() != rep.dim(v)) {
    throw Error(ErrorCode::ShapeMismatch, "A must be " + std::to_string(rep.dim(u)) + "x" + std::to_string(rep.dim(v)));
  }
  const auto& hom = g.hom_set(u, v);
  HomSetFunction f{u, v, hom, {}};
  for (int x : hom) f.values.push_back((a * rep.matrix(x)).trace());
  return f;
}

namespace {

// Columns: the matrix elements π^{ij} evaluated on G_u^v, index i·d_u + j.
ComplexMatrix element_matrix(const Representation& rep, int u, int v) {
  const auto& hom = rep.groupoid()->hom_set(u, v);
  const int du = rep.dim(u);
  const int dv = rep.dim(v);
  ComplexMatrix m(static_cast<Eigen::Index>(hom.size()), static_cast<Eigen::Index>(du) * dv);
  for (std::size_t k = 0; k < hom.size(); ++k) {
    const auto& px = rep.matrix(hom[k]);
    for (int i = 0; i < dv; ++i)
      for (int j = 0; j < du; ++j) m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i) * du + j) = px(i, j);
  }
  return m;
}

}  // namespace

ComplexMatrix expand_in_matrix_elements(const HomSetFunction& f, const Representation& rep, int u, int v, double tol) {
  const auto& g = *rep.groupoid();
  const auto& hom = g.hom_set(u, v);
  if (f.source != u || f.target != v || f.values.size() != hom.size()) {
    throw Error(ErrorCode::ShapeMismatch, "function is not defined on the requested hom set");
  }
  if (hom.empty()) throw Error(ErrorCode::EmptyHomSet, "G_u^v is empty");
  const ComplexMatrix phi = element_matrix(rep, u, v);
  const ComplexVector target = Eigen::Map<const ComplexVector>(f.values.data(), static_cast<Eigen::Index>(f.values.size()));
  const ComplexVector c = phi.completeOrthogonalDecomposition().solve(target);
  const double n = static_cast<double>(hom.size());
  const double residual = (phi * c - target).norm() / std::sqrt(n);
  const double scale = std::max(1.0, target.norm() / std::sqrt(n));
  if (residual > tol * scale) {
    throw Error(ErrorCode::NotInSpan, "expansion residual " + std::to_string(residual));
  }
  // f = Σ c_{ij} π^{ij} = Tr(A π) with A(j, i) = c_{ij}.
  const int du = rep.dim(u);
  const int dv = rep.dim(v);
  ComplexMatrix a(du, dv);
  for (int i = 0; i < dv; ++i)
    for (int j = 0; j < du; ++j) a(j, i) = c(static_cast<Eigen::Index>(i) * du + j);
  return a;
}

std::size_t matrix_element_span_dimension(const Representation& rep, int u, int v, double rank_tol) {
  if (rep.groupoid()->hom_set(u, v).empty()) return 0;
  return numerical_rank(element_matrix(rep, u, v), rank_tol);
}

GroupoidFunction convolve(const GroupoidFunction& f, const GroupoidFunction& h) {
  if (!same_groupoid(f.groupoid, h.groupoid)) throw Error(ErrorCode::GroupoidMismatch, "convolution operands");
  const auto& g = *f.groupoid;
  require_function_on(g, f);
  require_function_on(g, h);
  GroupoidFunction out = GroupoidFunction::zero(f.groupoid);
  for (std::size_t xs = 0; xs < g.morphism_count(); ++xs) {
    const int x = static_cast<int>(xs);
    const auto& fibre = g.source_fibre(g.source(x));
    const double w = 1.0 / static_cast<double>(fibre.size());
    Complex sum = 0.0;
    for (int y : fibre) sum += f.values[g.compose(x, g.inverse(y))] * h.values[y];
    out.values[xs] = sum * w;
  }
  return out;
}

GroupoidFunction involution(const GroupoidFunction& f) {
  const auto& g = *f.groupoid;
  require_function_on(g, f);
  GroupoidFunction out = GroupoidFunction::zero(f.groupoid);
  for (std::size_t x = 0; x < g.morphism_count(); ++x) out.values[x] = std::conj(f.values[g.inverse(static_cast<int>(x))]);
  return out;
}

GroupoidFunction inversion(const GroupoidFunction& f) {
  const auto& g = *f.groupoid;
  require_function_on(g, f);
  GroupoidFunction out = GroupoidFunction::zero(f.groupoid);
  for (std::size_t x = 0; x < g.morphism_count(); ++x) out.values[x] = f.values[g.inverse(static_cast<int>(x))];
  return out;
}

GroupoidFunction conjugate(const GroupoidFunction& f) {
  GroupoidFunction out = f;
  for (auto& v : out.values) v = std::conj(v);
  return out;
}

GroupoidFunction left_translate(int x, const GroupoidFunction& f) {
  const auto& g = *f.groupoid;
  require_function_on(g, f);
  GroupoidFunction out = GroupoidFunction::zero(f.groupoid);
  for (int y : g.range_fibre(g.target(x))) out.values[y] = f.values[g.compose(g.inverse(x), y)];
  return out;
}

GroupoidFunction right_translate(int x, const GroupoidFunction& f) {
  const auto& g = *f.groupoid;
  require_function_on(g, f);
  GroupoidFunction out = GroupoidFunction::zero(f.groupoid);
  for (int y : g.source_fibre(g.target(x))) out.values[y] = f.values[g.compose(y, x)];
  return out;
}

GroupoidFunction matrix_coefficient(const Representation& rep, const VectorBundle& xi, const VectorBundle& eta) {
  const auto& g = *rep.groupoid();
  GroupoidFunction out = GroupoidFunction::zero(rep.groupoid());
  for (std::size_t xs = 0; xs < g.morphism_count(); ++xs) {
    const int x = static_cast<int>(xs);
    out.values[xs] = eta[g.target(x)].dot(rep.matrix(x) * xi[g.source(x)]);
  }
  return out;
}

VectorBundle translate_vector(const Representation& rep, int x, const VectorBundle& xi) {
  const auto& g = *rep.groupoid();
  VectorBundle out;
  for (int d : rep.dims()) out.push_back(ComplexVector::Zero(d));
  out[g.target(x)] = rep.matrix(x) * xi[g.source(x)];
  return out;
}

VectorBundle IntegratedOperator::apply(const VectorBundle& xi) const {
  ComplexVector flat(offsets.back());
  for (std::size_t u = 0; u + 1 < offsets.size(); ++u) flat.segment(offsets[u], offsets[u + 1] - offsets[u]) = xi[u];
  const ComplexVector image = matrix * flat;
  VectorBundle out;
  for (std::size_t u = 0; u + 1 < offsets.size(); ++u) out.push_back(image.segment(offsets[u], offsets[u + 1] - offsets[u]));
  return out;
}

IntegratedOperator integrated_rep(const Representation& rep, const GroupoidFunction& f) {
  const auto& g = *rep.groupoid();
  require_function_on(g, f);
  IntegratedOperator op;
  op.offsets.assign(g.unit_count() + 1, 0);
  for (std::size_t u = 0; u < g.unit_count(); ++u) op.offsets[u + 1] = op.offsets[u] + rep.dim(static_cast<int>(u));
  op.matrix = ComplexMatrix::Zero(op.offsets.back(), op.offsets.back());
  const HaarSystem haar = normalized_haar(g);
  for (std::size_t xs = 0; xs < g.morphism_count(); ++xs) {
    const int x = static_cast<int>(xs);
    const int r = g.target(x);
    const int s = g.source(x);
    op.matrix.block(op.offsets[r], op.offsets[s], rep.dim(r), rep.dim(s)) +=
        (haar.range_weight(x) * f.values[xs]) * rep.matrix(x);
  }
  return op;
}

ComplexMatrix schur_gram(const Representation& a, const Representation& b, int u, int v, HomSetMeasure measure) {
  if (!same_groupoid(a.groupoid(), b.groupoid())) throw Error(ErrorCode::GroupoidMismatch, "schur_gram operands");
  const auto& g = *a.groupoid();
  if (!g.co_orbital(u, v)) {
    throw Error(ErrorCode::NotCoOrbital, "'" + g.unit_name(u) + "' and '" + g.unit_name(v) + "'");
  }
  const ComplexMatrix ea = element_matrix(a, u, v);
  const ComplexMatrix eb = element_matrix(b, u, v);
  // ⟨f, h⟩ = Σ f conj(h) μ, so Gram = Eaᵀ conj(Eb) μ.
  return ea.transpose() * eb.conjugate() * measure_weight(g, u, v, measure);
}

ComplexVector PeterWeylBasis::coefficients(const FiniteGroupoid& g, const HomSetFunction& f) const {
  ComplexVector c(static_cast<Eigen::Index>(functions.size()));
  for (std::size_t k = 0; k < functions.size(); ++k) c(static_cast<Eigen::Index>(k)) = hom_inner(g, f, functions[k]);
  return c;
}

HomSetFunction PeterWeylBasis::synthesize(const ComplexVector& coefficients) const {
  HomSetFunction f{u, v, functions.empty() ? std::vector<int>{} : functions.front().morphisms, {}};
  f.values.assign(f.morphisms.size(), Complex(0.0));
  for (std::size_t k = 0; k < functions.size(); ++k) {
    for (std::size_t m = 0; m < f.values.size(); ++m) {
      f.values[m] += coefficients(static_cast<Eigen::Index>(k)) * functions[k].values[m];
    }
  }
  return f;
}

PeterWeylBasis peter_weyl_basis(const IrrepTable& table, int u, int v) {
  const auto& g = *table.groupoid;
  const auto& hom = g.hom_set(u, v);
  if (hom.empty()) {
    throw Error(ErrorCode::EmptyHomSet, "no morphism from '" + g.unit_name(u) + "' to '" + g.unit_name(v) + "'");
  }
  const OrbitIrreps& orbit = table.orbit_of_unit(u);
  const auto local = [&](int w) {
    return static_cast<int>(std::find(orbit.sub.units.begin(), orbit.sub.units.end(), w) - orbit.sub.units.begin());
  };
  const int lu = local(u);
  const int lv = local(v);

  PeterWeylBasis basis;
  basis.u = u;
  basis.v = v;
  basis.hom_set_size = hom.size();
  for (const auto& irrep : orbit.irreps) {
    const MatrixElements me = matrix_elements(irrep.rep, lu, lv);
    const double scale = std::sqrt(static_cast<double>(irrep.rep.dim(lu)));
    for (int i = 0; i < me.rows; ++i) {
      for (int j = 0; j < me.cols; ++j) {
        const HomSetFunction& e = me.at(i, j);
        HomSetFunction f{u, v, {}, {}};
        for (std::size_t k = 0; k < e.morphisms.size(); ++k) {
          f.morphisms.push_back(orbit.sub.morphisms[e.morphisms[k]]);
          f.values.push_back(scale * e.values[k]);
        }
        basis.functions.push_back(std::move(f));
        basis.labels.push_back(irrep.label);
        basis.indices.emplace_back(i, j);
      }
    }
  }
  if (basis.functions.size() < hom.size()) {
    throw Error(ErrorCode::IncompleteTable, std::to_string(basis.functions.size()) + " basis functions for |G_u^v| = " +
                                                std::to_string(hom.size()));
  }
  const std::size_t n = basis.functions.size();
  ComplexMatrix gram(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      gram(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = hom_inner(g, basis.functions[a], basis.functions[b]);
  basis.gram_error = max_abs(gram - ComplexMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
  return basis;
}

SeparationReport separates_points(const IrrepTable& table, double tol) {
  const auto& g = *table.groupoid;
  // Parent morphism index -> local index inside its orbit subgroupoid.
  std::vector<int> local(g.morphism_count(), -1);
  for (const auto& o : table.orbits) {
    for (std::size_t k = 0; k < o.sub.morphisms.size(); ++k) local[o.sub.morphisms[k]] = static_cast<int>(k);
  }
  SeparationReport report;
  for (std::size_t xs = 0; xs < g.morphism_count(); ++xs) {
    for (std::size_t ys = xs + 1; ys < g.morphism_count(); ++ys) {
      const int x = static_cast<int>(xs);
      const int y = static_cast<int>(ys);
      if (g.source(x) != g.source(y) || g.target(x) != g.target(y)) {
        report.witnesses.push_back({x, y, "source/target", 1.0});
        continue;
      }
      bool found = false;
      const int k = g.orbit_of(g.source(x));
      for (const auto& o : table.orbits) {
        if (static_cast<int>(o.orbit) != k || local[x] < 0 || local[y] < 0) continue;
        for (const auto& irrep : o.irreps) {
          const double gap = max_abs(irrep.rep.matrix(local[x]) - irrep.rep.matrix(local[y]));
          if (gap > tol) {
            report.witnesses.push_back({x, y, irrep.label, gap});
            found = true;
            break;
          }
        }
      }
      if (!found) {
        report.separates = false;
        report.failures.emplace_back(x, y);
      }
    }
  }
  return report;
}

OperatorBundle regular_embedding(const Representation& rep, int v, int i) {
  const auto& g = *rep.groupoid();
  if (!g.is_transitive()) throw Error(ErrorCode::NotTransitive, "regular embedding needs one orbit");
  if (i < 0 || i >= rep.dim(v)) {
    throw Error(ErrorCode::IndexOutOfRange, "row " + std::to_string(i) + " of a " + std::to_string(rep.dim(v)) +
                                                "-dimensional fibre");
  }
  const double scale = std::sqrt(static_cast<double>(rep.dim(v)));
  OperatorBundle u;
  for (std::size_t ws = 0; ws < g.unit_count(); ++ws) {
    const int w = static_cast<int>(ws);
    const auto& hom = g.hom_set(w, v);
    // Orthonormal basis of L²(G_w^v, renormalized): 1_y √|G_w^v|.
    const double norm = 1.0 / std::sqrt(static_cast<double>(hom.size()));
    ComplexMatrix m(static_cast<Eigen::Index>(hom.size()), rep.dim(w));
    for (std::size_t k = 0; k < hom.size(); ++k) m.row(static_cast<Eigen::Index>(k)) = scale * norm * rep.matrix(hom[k]).row(i);
    u.fibres.push_back(std::move(m));
  }
  return u;
}

OperatorBundle column_embedding(const Representation& rep, int u, int j) {
  const auto& g = *rep.groupoid();
  if (!g.is_transitive()) throw Error(ErrorCode::NotTransitive, "column embedding needs one orbit");
  if (j < 0 || j >= rep.dim(u)) {
    throw Error(ErrorCode::IndexOutOfRange, "column " + std::to_string(j) + " of a " + std::to_string(rep.dim(u)) +
                                                "-dimensional fibre");
  }
  const double scale = std::sqrt(static_cast<double>(rep.dim(u)));
  OperatorBundle out;
  for (std::size_t ws = 0; ws < g.unit_count(); ++ws) {
    const int w = static_cast<int>(ws);
    const auto& hom = g.hom_set(u, w);
    const double norm = 1.0 / std::sqrt(static_cast<double>(hom.size()));
    ComplexMatrix m(static_cast<Eigen::Index>(hom.size()), rep.dim(w));
    for (std::size_t k = 0; k < hom.size(); ++k) {
      m.row(static_cast<Eigen::Index>(k)) = scale * norm * rep.matrix(hom[k]).col(j).transpose();
    }
    out.fibres.push_back(std::move(m));
  }
  return out;
}

ComplexMatrix convolution_operator(const GroupoidFunction& psi, int u) {
  const auto& g = *psi.groupoid;
  require_function_on(g, psi);
  const auto& fibre = g.source_fibre(u);
  const double w = 1.0 / static_cast<double>(fibre.size());
  ComplexMatrix m(static_cast<Eigen::Index>(fibre.size()), static_cast<Eigen::Index>(fibre.size()));
  for (std::size_t a = 0; a < fibre.size(); ++a)
    for (std::size_t b = 0; b < fibre.size(); ++b)
      m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = psi.values[g.compose(fibre[a], g.inverse(fibre[b]))] * w;
  return m;
}

}  // namespace grpd
