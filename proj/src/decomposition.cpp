#include "grpd/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "grpd/error.hpp"

namespace grpd {

namespace {

// A self-intertwiner whose joint spectrum is narrower than this is treated
// as scalar. Basis elements have unit trace norm, so genuine splittings sit
// orders of magnitude above it.
constexpr double kScalarSpread = 1e-6;
// Fresh eigenspaces leak at round-off level only.
constexpr double kLeakFactor = 10.0;

struct FibreSpectra {
  std::vector<EigenDecomposition> fibres;
  double diameter = 0.0;
};

FibreSpectra spectra_of(const OperatorBundle& a) {
  FibreSpectra out;
  double lo = 0.0;
  double hi = 0.0;
  bool first = true;
  for (const auto& f : a.fibres) {
    out.fibres.push_back(hermitian_eig(f, 1e-6));
    const auto& v = out.fibres.back().values;
    if (v.size() == 0) continue;
    lo = first ? v(0) : std::min(lo, v(0));
    hi = first ? v(v.size() - 1) : std::max(hi, v(v.size() - 1));
    first = false;
  }
  out.diameter = hi - lo;
  return out;
}

OperatorBundle hermitian_part(const OperatorBundle& b, bool imaginary) {
  OperatorBundle a;
  for (const auto& f : b.fibres) {
    if (imaginary) {
      a.fibres.push_back(Complex(0.0, 1.0) * (f - f.adjoint()));
    } else {
      a.fibres.push_back(f + f.adjoint());
    }
  }
  return a;
}

SubbundleBasis full_bundle(const Representation& rep) {
  SubbundleBasis b;
  for (int d : rep.dims()) b.fibres.push_back(ComplexMatrix::Identity(d, d));
  return b;
}

}  // namespace

std::vector<SubbundleBasis> split_once(const Representation& rep, const Tolerances& tol, std::uint64_t seed,
                                       std::vector<std::string>* log) {
  if (is_irreducible(rep, tol.rank)) return {full_bundle(rep)};
  const auto& g = *rep.groupoid();
  if (!g.is_transitive()) {
    throw Error(ErrorCode::NotTransitive, "split_once on a reducible representation of a groupoid with " +
                                              std::to_string(g.orbits().size()) + " orbits");
  }

  const IntertwinerSpace mor = intertwiner_space(rep, rep, tol.rank);
  std::optional<FibreSpectra> chosen;
  for (std::size_t k = 0; k < mor.dimension() && !chosen; ++k) {
    for (bool imaginary : {false, true}) {
      FibreSpectra s = spectra_of(hermitian_part(mor.basis[k], imaginary));
      if (s.diameter > kScalarSpread) {
        if (log) log->push_back("split: basis element " + std::to_string(k) + (imaginary ? " i(B-B*)" : " B+B*"));
        chosen = std::move(s);
        break;
      }
    }
  }
  if (!chosen) {
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 16 && !chosen; ++attempt) {
      const ComplexMatrix c = random_gaussian(mor.dimension(), 1, rng);
      OperatorBundle b = mor.basis.front();
      for (auto& f : b.fibres) f.setZero();
      for (std::size_t k = 0; k < mor.dimension(); ++k) {
        for (std::size_t u = 0; u < b.size(); ++u) b[u] += c(static_cast<Eigen::Index>(k), 0) * mor.basis[k][u];
      }
      FibreSpectra s = spectra_of(hermitian_part(b, false));
      if (s.diameter > kScalarSpread) {
        if (log) log->push_back("split: random combination, seed " + std::to_string(seed) + " attempt " +
                                std::to_string(attempt));
        chosen = std::move(s);
      }
    }
  }
  if (!chosen) throw Error(ErrorCode::MaxDepthExceeded, "no non-scalar self-intertwiner found for a reducible rep");

  // Joint clustering across fibres; an intertwiner has the same spectrum on
  // every fibre of an orbit.
  std::vector<double> values;
  std::vector<std::pair<std::size_t, Eigen::Index>> where;
  for (std::size_t u = 0; u < chosen->fibres.size(); ++u) {
    const auto& v = chosen->fibres[u].values;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      values.push_back(v(i));
      where.emplace_back(u, i);
    }
  }
  const auto clusters = cluster_values(values, tol.cluster * chosen->diameter);

  std::vector<SubbundleBasis> parts;
  for (const auto& cluster : clusters) {
    std::vector<std::vector<Eigen::Index>> columns(g.unit_count());
    for (auto m : cluster.members) columns[where[m].first].push_back(where[m].second);
    SubbundleBasis part;
    for (std::size_t u = 0; u < g.unit_count(); ++u) {
      if (columns[u].empty()) {
        throw Error(ErrorCode::NotInvariant, "eigenvalue cluster " + std::to_string(cluster.mean) +
                                                 " missing from fibre '" + g.unit_name(static_cast<int>(u)) + "'");
      }
      ComplexMatrix b(rep.dim(static_cast<int>(u)), static_cast<Eigen::Index>(columns[u].size()));
      for (std::size_t c = 0; c < columns[u].size(); ++c) {
        b.col(static_cast<Eigen::Index>(c)) = chosen->fibres[u].vectors.col(columns[u][c]);
      }
      part.fibres.push_back(std::move(b));
    }
    parts.push_back(std::move(part));
  }
  if (log) log->push_back("split: " + std::to_string(parts.size()) + " eigenspace subbundles");
  return parts;
}

bool irrep_order(const Representation& a, const Representation& b) {
  if (a.dim(0) != b.dim(0)) return a.dim(0) < b.dim(0);
  const auto& g = *a.groupoid();
  constexpr double eps = 1e-6;
  for (int x : g.hom_set(0, 0)) {
    const Complex ca = a.matrix(x).trace();
    const Complex cb = b.matrix(x).trace();
    if (std::abs(ca.real() - cb.real()) > eps) return ca.real() > cb.real();
    if (std::abs(ca.imag() - cb.imag()) > eps) return ca.imag() > cb.imag();
  }
  return false;
}

namespace {

struct Leaf {
  Representation rep;
  OperatorBundle isometry;
};

struct IsotypicClass {
  Representation rep;
  std::vector<OperatorBundle> copies;
};

OperatorBundle compose_fibres(const OperatorBundle& a, const SubbundleBasis& b) {
  OperatorBundle out;
  for (std::size_t u = 0; u < a.size(); ++u) out.fibres.push_back(a[u] * b[u]);
  return out;
}

std::vector<DecompositionComponent> decompose_transitive(const Representation& rep, std::size_t orbit,
                                                          const Tolerances& tol, std::mt19937_64& seeds,
                                                          std::vector<std::string>& log) {
  std::vector<Leaf> leaves;
  const int max_depth = rep.total_dim() + 1;

  std::function<void(const Leaf&, int)> descend = [&](const Leaf& node, int depth) {
    if (depth > max_depth) {
      throw Error(ErrorCode::MaxDepthExceeded, "splitting did not terminate within depth " + std::to_string(max_depth));
    }
    const auto parts = split_once(node.rep, tol, seeds(), &log);
    if (parts.size() == 1) {
      leaves.push_back(node);
      return;
    }
    for (const auto& part : parts) {
      Leaf child{restrict_rep(node.rep, part, kLeakFactor * tol.unitary), compose_fibres(node.isometry, part)};
      descend(child, depth + 1);
    }
  };
  descend(Leaf{rep, identity_bundle(rep)}, 0);

  std::vector<IsotypicClass> classes;
  for (const auto& leaf : leaves) {
    bool placed = false;
    for (auto& c : classes) {
      if (c.rep.dims() != leaf.rep.dims()) continue;
      if (auto w = are_equivalent(leaf.rep, c.rep, tol)) {
        OperatorBundle aligned;
        for (std::size_t u = 0; u < leaf.isometry.size(); ++u) {
          aligned.fibres.push_back(leaf.isometry[u] * (*w)[u].adjoint());
        }
        c.copies.push_back(std::move(aligned));
        placed = true;
        break;
      }
    }
    if (!placed) classes.push_back({leaf.rep, {leaf.isometry}});
  }
  std::stable_sort(classes.begin(), classes.end(),
                   [](const IsotypicClass& a, const IsotypicClass& b) { return irrep_order(a.rep, b.rep); });

  std::vector<DecompositionComponent> out;
  for (auto& c : classes) {
    DecompositionComponent comp{orbit, c.rep, c.copies.size(), 0, {}};
    for (std::size_t u = 0; u < rep.dims().size(); ++u) {
      ComplexMatrix v(rep.dim(static_cast<int>(u)), static_cast<Eigen::Index>(c.copies.size()) * c.rep.dim(static_cast<int>(u)));
      Eigen::Index col = 0;
      for (const auto& copy : c.copies) {
        v.middleCols(col, copy[u].cols()) = copy[u];
        col += copy[u].cols();
      }
      comp.isometry.fibres.push_back(std::move(v));
    }
    comp.mor_dimension = intertwiner_space(c.rep, rep, tol.rank).dimension();
    out.push_back(std::move(comp));
  }
  return out;
}

double reassembly_residual(const Representation& rep, const std::vector<const DecompositionComponent*>& comps) {
  const auto& g = *rep.groupoid();
  std::vector<ComplexMatrix> u_fibres;
  for (std::size_t u = 0; u < g.unit_count(); ++u) {
    Eigen::Index cols = 0;
    for (const auto* c : comps) cols += c->isometry[u].cols();
    ComplexMatrix m(rep.dim(static_cast<int>(u)), cols);
    Eigen::Index at = 0;
    for (const auto* c : comps) {
      m.middleCols(at, c->isometry[u].cols()) = c->isometry[u];
      at += c->isometry[u].cols();
    }
    u_fibres.push_back(std::move(m));
  }
  double residual = 0.0;
  for (const auto& m : u_fibres) residual = std::max(residual, unitarity_defect(m));
  for (std::size_t xs = 0; xs < g.morphism_count(); ++xs) {
    const int x = static_cast<int>(xs);
    ComplexMatrix expected = ComplexMatrix::Zero(u_fibres[g.target(x)].cols(), u_fibres[g.source(x)].cols());
    Eigen::Index r0 = 0;
    Eigen::Index c0 = 0;
    for (const auto* c : comps) {
      const ComplexMatrix block =
          kron(ComplexMatrix::Identity(static_cast<Eigen::Index>(c->multiplicity), static_cast<Eigen::Index>(c->multiplicity)),
               c->irrep.matrix(x));
      if (r0 + block.rows() > expected.rows() || c0 + block.cols() > expected.cols()) {
        return std::numeric_limits<double>::infinity();
      }
      expected.block(r0, c0, block.rows(), block.cols()) = block;
      r0 += block.rows();
      c0 += block.cols();
    }
    if (u_fibres[g.target(x)].rows() != rep.matrix(x).rows()) return std::numeric_limits<double>::infinity();
    const ComplexMatrix actual = u_fibres[g.target(x)].adjoint() * rep.matrix(x) * u_fibres[g.source(x)];
    residual = std::max(residual, max_abs(actual - expected));
  }
  return residual;
}

}  // namespace

Decomposition decompose(const Representation& rep, const Tolerances& tol, std::uint64_t seed) {
  Decomposition out;
  out.seed = seed;
  std::mt19937_64 seeds(seed);
  const auto& g = rep.groupoid();
  if (g->is_transitive()) {
    out.components = decompose_transitive(rep, 0, tol, seeds, out.log);
    std::vector<const DecompositionComponent*> all;
    for (const auto& c : out.components) all.push_back(&c);
    out.residual = reassembly_residual(rep, all);
    return out;
  }
  for (std::size_t k = 0; k < g->orbits().size(); ++k) {
    const Representation part = restrict_to_orbit(rep, k);
    auto comps = decompose_transitive(part, k, tol, seeds, out.log);
    std::vector<const DecompositionComponent*> ptrs;
    for (const auto& c : comps) ptrs.push_back(&c);
    out.residual = std::max(out.residual, reassembly_residual(part, ptrs));
    for (auto& c : comps) out.components.push_back(std::move(c));
  }
  return out;
}

const OrbitIrreps& IrrepTable::orbit_of_unit(int u) const {
  const int k = groupoid->orbit_of(u);
  for (const auto& o : orbits) {
    if (static_cast<int>(o.orbit) == k) return o;
  }
  throw Error(ErrorCode::IncompleteTable, "no entry for the orbit of unit '" + groupoid->unit_name(u) + "'");
}

long completeness_deficit(const IrrepTable& table) {
  long worst = 0;
  for (const auto& o : table.orbits) {
    const auto& sub = *o.sub.groupoid;
    for (std::size_t u = 0; u < sub.unit_count(); ++u) {
      for (std::size_t v = 0; v < sub.unit_count(); ++v) {
        long sum = 0;
        for (const auto& irrep : o.irreps) {
          sum += static_cast<long>(irrep.rep.dim(static_cast<int>(u))) * irrep.rep.dim(static_cast<int>(v));
        }
        const long deficit = sum - static_cast<long>(sub.hom_set(static_cast<int>(u), static_cast<int>(v)).size());
        if (std::abs(deficit) > std::abs(worst)) worst = deficit;
      }
    }
  }
  return worst;
}

IrrepTable enumerate_irreps(const GroupoidPtr& g, const Tolerances& tol, std::uint64_t seed) {
  IrrepTable table;
  table.groupoid = g;
  table.seed = seed;
  for (std::size_t k = 0; k < g->orbits().size(); ++k) {
    OrbitIrreps entry;
    entry.orbit = k;
    entry.sub = orbit_subgroupoid(g, k);
    const Representation regular = right_regular_rep_to(entry.sub.groupoid, 0);
    const Decomposition dec = decompose(regular, tol, seed);
    std::size_t j = 0;
    for (const auto& c : dec.components) {
      if (c.multiplicity != static_cast<std::size_t>(c.irrep.dim(0))) {
        throw Error(ErrorCode::CompletenessFailure, "orbit " + std::to_string(k) + ": irrep of dimension " +
                                                        std::to_string(c.irrep.dim(0)) + " occurs " +
                                                        std::to_string(c.multiplicity) + " times in the regular rep");
      }
      entry.irreps.push_back({"o" + std::to_string(k) + ".r" + std::to_string(j++), c.irrep, c.multiplicity});
    }
    table.orbits.push_back(std::move(entry));
  }
  const long deficit = completeness_deficit(table);
  if (deficit != 0) {
    throw Error(ErrorCode::CompletenessFailure, "Σ d_u d_v − |G_u^v| = " + std::to_string(deficit));
  }
  return table;
}

std::vector<IsotypicComponent> isotypic_components(const Representation& rep, const IrrepTable& table,
                                                   double rank_tol) {
  std::vector<std::pair<const OrbitIrreps*, Representation>> work;
  if (same_groupoid(rep.groupoid(), table.groupoid)) {
    for (const auto& o : table.orbits) {
      work.emplace_back(&o, table.groupoid->is_transitive() ? rep : restrict_to_orbit(rep, o.orbit));
    }
  } else {
    for (const auto& o : table.orbits) {
      if (same_groupoid(rep.groupoid(), o.sub.groupoid)) work.emplace_back(&o, rep);
    }
    if (work.empty()) throw Error(ErrorCode::GroupoidMismatch, "representation does not match the irrep table");
  }

  std::vector<IsotypicComponent> out;
  for (const auto& [orbit, part] : work) {
    for (const auto& irrep : orbit->irreps) {
      const IntertwinerSpace mor = intertwiner_space(irrep.rep, part, rank_tol);
      if (mor.dimension() == 0) continue;
      IsotypicComponent comp{orbit->orbit, irrep.label, mor.dimension(), {}};
      for (std::size_t u = 0; u < part.dims().size(); ++u) {
        ComplexMatrix images(part.dim(static_cast<int>(u)),
                             static_cast<Eigen::Index>(mor.dimension()) * irrep.rep.dim(static_cast<int>(u)));
        Eigen::Index col = 0;
        for (const auto& t : mor.basis) {
          images.middleCols(col, t[u].cols()) = t[u];
          col += t[u].cols();
        }
        comp.basis.fibres.push_back(range_basis(images, rank_tol));
      }
      out.push_back(std::move(comp));
    }
  }
  return out;
}

}  // namespace grpd
