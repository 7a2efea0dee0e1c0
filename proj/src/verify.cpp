#include "grpd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Core>

#include "grpd/error.hpp"

namespace grpd {

namespace {

ComplexVector random_vector(int n, std::mt19937_64& rng) {
  return random_gaussian(static_cast<std::size_t>(n), 1, rng).col(0);
}

VectorBundle random_bundle(const Representation& rep, std::mt19937_64& rng, bool unit = false) {
  VectorBundle xi;
  for (int d : rep.dims()) {
    ComplexVector v = random_vector(d, rng);
    if (unit) v.normalize();
    xi.push_back(std::move(v));
  }
  return xi;
}

GroupoidFunction random_function(const GroupoidPtr& g, std::mt19937_64& rng) {
  GroupoidFunction f = GroupoidFunction::zero(g);
  const ComplexMatrix v = random_gaussian(g->morphism_count(), 1, rng);
  for (std::size_t x = 0; x < f.values.size(); ++x) f.values[x] = v(static_cast<Eigen::Index>(x), 0);
  return f;
}

double function_distance(const GroupoidFunction& a, const GroupoidFunction& b) {
  double worst = 0.0;
  for (std::size_t x = 0; x < a.values.size(); ++x) worst = std::max(worst, std::abs(a.values[x] - b.values[x]));
  return worst;
}

struct Context {
  const GroupoidPtr& g;
  const IrrepTable& table;
  const VerifyOptions& options;
};

class Entry {
 public:
  Entry(std::string name, double tolerance) {
    entry_.name = std::move(name);
    entry_.tolerance = tolerance;
  }

  void observe(double residual, const std::string& where) {
    if (!(residual <= entry_.residual)) {
      entry_.residual = residual;
      worst_ = where;
    }
  }
  void note(std::string witness) { entry_.witnesses.push_back(std::move(witness)); }

  VerificationEntry finish() {
    entry_.passed = entry_.residual <= entry_.tolerance;
    if (!worst_.empty()) entry_.witnesses.insert(entry_.witnesses.begin(), "worst: " + worst_);
    return entry_;
  }

 private:
  VerificationEntry entry_;
  std::string worst_;
};

VerificationEntry check_haar_entry(const Context& c, const std::optional<HaarSystem>& haar) {
  Entry e("haar_system", c.options.identity_tol);
  const HaarSystem h = haar ? *haar : normalized_haar(*c.g);
  const HaarCheck check = check_haar(*c.g, h);
  e.observe(check.normalization_error, "normalization");
  e.observe(check.invariance_error,
            "invariance at " + (check.worst_morphism >= 0 ? c.g->morphism_name(check.worst_morphism) : std::string("-")));
  return e.finish();
}

VerificationEntry check_convolution(const Context& c, std::mt19937_64& rng) {
  Entry e("convolution_identities", c.options.identity_tol);
  const GroupoidPtr& g = c.g;
  const Representation rep = right_regular_rep(g);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(g->morphism_count()) - 1);
  for (int n = 0; n < c.options.random_instances; ++n) {
    const VectorBundle xi = random_bundle(rep, rng);
    const VectorBundle eta = random_bundle(rep, rng);
    const GroupoidFunction f = random_function(g, rng);
    const GroupoidFunction h = random_function(g, rng);
    const GroupoidFunction k = random_function(g, rng);
    const int x = pick(rng);
    const GroupoidFunction coeff = matrix_coefficient(rep, xi, eta);

    e.observe(function_distance(left_translate(x, coeff), matrix_coefficient(rep, xi, translate_vector(rep, x, eta))),
              "left translation, x=" + g->morphism_name(x));
    e.observe(function_distance(right_translate(x, coeff), matrix_coefficient(rep, translate_vector(rep, x, xi), eta)),
              "right translation, x=" + g->morphism_name(x));
    const VectorBundle fbar_eta = integrated_rep(rep, conjugate(f)).apply(eta);
    e.observe(function_distance(convolve(f, coeff), matrix_coefficient(rep, xi, fbar_eta)), "left ideal");
    e.observe(function_distance(convolve(convolve(f, h), k), convolve(f, convolve(h, k))), "associativity");
    e.observe(function_distance(involution(convolve(f, h)), convolve(involution(h), involution(f))), "involution");
  }
  return e.finish();
}

VerificationEntry check_integrated(const Context& c, std::mt19937_64& rng) {
  Entry e("integrated_homomorphism", c.options.identity_tol);
  const Representation rep = scramble(right_regular_rep(c.g), c.options.seed);
  for (int n = 0; n < c.options.random_instances; ++n) {
    const GroupoidFunction f = random_function(c.g, rng);
    const GroupoidFunction h = random_function(c.g, rng);
    const ComplexMatrix pf = integrated_rep(rep, f).matrix;
    const ComplexMatrix ph = integrated_rep(rep, h).matrix;
    e.observe(max_abs(integrated_rep(rep, convolve(f, h)).matrix - pf * ph), "product");
    e.observe(max_abs(integrated_rep(rep, involution(f)).matrix - pf.adjoint()), "adjoint");
  }
  // f = |G^u| on unit morphisms integrates to the identity.
  GroupoidFunction one = GroupoidFunction::zero(c.g);
  for (std::size_t u = 0; u < c.g->unit_count(); ++u) {
    one.values[c.g->unit_morphism(static_cast<int>(u))] = static_cast<double>(c.g->range_fibre(static_cast<int>(u)).size());
  }
  const ComplexMatrix id = integrated_rep(rep, one).matrix;
  e.observe(max_abs(id - ComplexMatrix::Identity(id.rows(), id.cols())), "unit indicator");
  return e.finish();
}

Representation random_sum(const OrbitIrreps& orbit, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, orbit.irreps.size() - 1);
  std::uniform_int_distribution<int> count(1, 2);
  std::vector<Representation> parts;
  const int n = count(rng);
  for (int k = 0; k < n; ++k) parts.push_back(orbit.irreps[pick(rng)].rep);
  return scramble(direct_sum(parts), rng());
}

VerificationEntry check_averaging(const Context& c, std::mt19937_64& rng) {
  Entry e("averaging_projection", c.options.theorem_tol);
  const int per_orbit = std::max(1, c.options.random_instances / static_cast<int>(c.table.orbits.size()));
  for (const auto& orbit : c.table.orbits) {
    for (int n = 0; n < per_orbit; ++n) {
      const Representation a = random_sum(orbit, rng);
      const Representation b = random_sum(orbit, rng);
      const std::size_t by_null = intertwiner_space(a, b, c.options.tol.rank).dimension();
      const std::size_t by_avg = averaged_intertwiner_dimension(a, b, c.options.tol.rank);
      if (by_null != by_avg) {
        e.observe(1.0, "dimension " + std::to_string(by_null) + " vs " + std::to_string(by_avg));
      }
      OperatorBundle r;
      for (std::size_t u = 0; u < a.dims().size(); ++u) {
        r.fibres.push_back(random_gaussian(static_cast<std::size_t>(b.dim(static_cast<int>(u))),
                                           static_cast<std::size_t>(a.dim(static_cast<int>(u))), rng));
      }
      const OperatorBundle p = project_to_intertwiner(r, a, b);
      const OperatorBundle pp = project_to_intertwiner(p, a, b);
      e.observe(intertwining_residual(p, a, b), "projection lands outside Mor");
      double idem = 0.0;
      for (std::size_t u = 0; u < p.size(); ++u) idem = std::max(idem, max_abs(pp[u] - p[u]));
      e.observe(idem, "projection not idempotent");
    }
  }
  return e.finish();
}

VerificationEntry check_dichotomy(const Context& c) {
  Entry e("schur_dichotomy", 0.0);
  double violations = 0.0;
  for (const auto& orbit : c.table.orbits) {
    for (std::size_t a = 0; a < orbit.irreps.size(); ++a) {
      for (std::size_t b = 0; b < orbit.irreps.size(); ++b) {
        const auto& ra = orbit.irreps[a];
        const auto& rb = orbit.irreps[b];
        const std::size_t dim = intertwiner_space(ra.rep, rb.rep, c.options.tol.rank).dimension();
        const bool equivalent = are_equivalent(ra.rep, rb.rep, c.options.tol).has_value();
        if (dim != (a == b ? 1u : 0u) || equivalent != (a == b)) {
          violations += 1.0;
          e.note(ra.label + "/" + rb.label + ": dim Mor " + std::to_string(dim));
        }
      }
      const auto& ra = orbit.irreps[a];
      if (!are_equivalent(ra.rep, scramble(ra.rep, c.options.seed + a), c.options.tol)) {
        violations += 1.0;
        e.note(ra.label + " not equivalent to a scrambled copy");
      }
    }
  }
  e.observe(violations, "violations");
  return e.finish();
}

VerificationEntry check_isotypic(const Context& c) {
  Entry e("isotypic_orthogonality", c.options.theorem_tol);
  for (const auto& orbit : c.table.orbits) {
    const Representation rep = scramble(right_regular_rep_to(orbit.sub.groupoid, 0), c.options.seed);
    const auto comps = isotypic_components(rep, c.table, c.options.tol.rank);
    for (std::size_t a = 0; a < comps.size(); ++a) {
      for (std::size_t b = a + 1; b < comps.size(); ++b) {
        for (std::size_t u = 0; u < comps[a].basis.size(); ++u) {
          e.observe(max_abs(comps[a].basis[u].adjoint() * comps[b].basis[u]), comps[a].label + " vs " + comps[b].label);
        }
      }
    }
    for (std::size_t u = 0; u < rep.dims().size(); ++u) {
      Eigen::Index total = 0;
      for (const auto& comp : comps) total += comp.basis[u].cols();
      if (total != rep.dim(static_cast<int>(u))) e.observe(1.0, "components do not fill the fibre");
    }
    for (const auto& comp : comps) {
      const Irrep* irrep = nullptr;
      for (const auto& i : orbit.irreps)
        if (i.label == comp.label) irrep = &i;
      if (irrep == nullptr || comp.multiplicity != static_cast<std::size_t>(irrep->rep.dim(0))) {
        e.observe(1.0, comp.label + " multiplicity " + std::to_string(comp.multiplicity));
      }
      e.observe(projection_residual(rep, comp.basis), comp.label + " not invariant");
    }
  }
  return e.finish();
}

VerificationEntry check_gram(const Context& c) {
  Entry e("schur_orthogonality", c.options.theorem_tol);
  const auto& g = *c.g;
  for (const auto& orbit : c.table.orbits) {
    for (std::size_t lu = 0; lu < orbit.sub.units.size(); ++lu) {
      for (std::size_t lv = 0; lv < orbit.sub.units.size(); ++lv) {
        const int u = static_cast<int>(lu);
        const int v = static_cast<int>(lv);
        const auto& sub = *orbit.sub.groupoid;
        const double mass = static_cast<double>(sub.hom_set(u, v).size()) / static_cast<double>(sub.source_fibre(u).size());
        for (std::size_t a = 0; a < orbit.irreps.size(); ++a) {
          for (std::size_t b = 0; b < orbit.irreps.size(); ++b) {
            const auto& ra = orbit.irreps[a].rep;
            const auto& rb = orbit.irreps[b].rep;
            const ComplexMatrix renorm = schur_gram(ra, rb, u, v, HomSetMeasure::Renormalized);
            const ComplexMatrix restricted = schur_gram(ra, rb, u, v, HomSetMeasure::Restricted);
            ComplexMatrix expected = ComplexMatrix::Zero(renorm.rows(), renorm.cols());
            if (a == b) expected.setIdentity() /= static_cast<double>(ra.dim(u));
            const std::string where = orbit.irreps[a].label + "/" + orbit.irreps[b].label + " on " +
                                      g.unit_name(orbit.sub.units[lu]) + ">" + g.unit_name(orbit.sub.units[lv]);
            e.observe(max_abs(renorm - expected), where);
            e.observe(max_abs(restricted - expected * mass), where + " (restricted)");
          }
        }
      }
    }
  }
  return e.finish();
}

VerificationEntry check_tensor(const Context& c) {
  Entry e("tensor_matrix_elements", c.options.identity_tol);
  for (const auto& orbit : c.table.orbits) {
    const auto& sub = *orbit.sub.groupoid;
    for (const auto& a : orbit.irreps) {
      for (const auto& b : orbit.irreps) {
        const Representation t = tensor_product(a.rep, b.rep);
        e.observe(validate_representation(t, c.options.tol.unitary).max_violation(), a.label + "x" + b.label + " axioms");
        for (std::size_t x = 0; x < sub.morphism_count(); ++x) {
          const int xi = static_cast<int>(x);
          const ComplexMatrix& pa = a.rep.matrix(xi);
          const ComplexMatrix& pb = b.rep.matrix(xi);
          const ComplexMatrix& pt = t.matrix(xi);
          double worst = 0.0;
          for (Eigen::Index i = 0; i < pa.rows(); ++i)
            for (Eigen::Index j = 0; j < pa.cols(); ++j)
              for (Eigen::Index k = 0; k < pb.rows(); ++k)
                for (Eigen::Index l = 0; l < pb.cols(); ++l)
                  worst = std::max(worst, std::abs(pt(i * pb.rows() + k, j * pb.cols() + l) - pa(i, j) * pb(k, l)));
          e.observe(worst, a.label + "x" + b.label + " at " + sub.morphism_name(xi));
        }
      }
    }
  }
  return e.finish();
}

double isometry_defect(const OperatorBundle& u) {
  double worst = 0.0;
  for (const auto& m : u.fibres) worst = std::max(worst, max_abs(m.adjoint() * m - ComplexMatrix::Identity(m.cols(), m.cols())));
  return worst;
}

VerificationEntry check_embeddings(const Context& c) {
  Entry e("regular_embeddings", c.options.theorem_tol);
  for (const auto& orbit : c.table.orbits) {
    const auto& sub = orbit.sub.groupoid;
    for (std::size_t lv = 0; lv < orbit.sub.units.size(); ++lv) {
      const int v = static_cast<int>(lv);
      const Representation right = right_regular_rep_to(sub, v);
      const Representation left = left_regular_rep_from(sub, v);
      for (const auto& irrep : orbit.irreps) {
        const Representation conj = conjugate_rep(irrep.rep);
        const int d = irrep.rep.dim(v);
        std::vector<OperatorBundle> rows;
        for (int i = 0; i < d; ++i) {
          const OperatorBundle row = regular_embedding(irrep.rep, v, i);
          const OperatorBundle col = column_embedding(irrep.rep, v, i);
          const std::string where = irrep.label + " at " + sub->unit_name(v) + ", index " + std::to_string(i);
          e.observe(intertwining_residual(row, irrep.rep, right), where + " row intertwining");
          e.observe(isometry_defect(row), where + " row isometry");
          e.observe(intertwining_residual(col, conj, left), where + " column intertwining");
          e.observe(isometry_defect(col), where + " column isometry");
          for (const auto& other : rows) {
            for (std::size_t w = 0; w < row.size(); ++w) e.observe(max_abs(other[w].adjoint() * row[w]), where + " overlap");
          }
          rows.push_back(row);
        }
      }
    }
  }
  return e.finish();
}

VerificationEntry check_separation(const Context& c) {
  Entry e("separation", 0.0);
  const SeparationReport report = separates_points(c.table, c.options.tol.unitary);
  e.observe(static_cast<double>(report.failures.size()), "unseparated pairs");
  for (const auto& [x, y] : report.failures) e.note(c.g->morphism_name(x) + " ~ " + c.g->morphism_name(y));
  e.note(std::to_string(report.witnesses.size()) + " pairs separated");
  return e.finish();
}

VerificationEntry check_completeness(const Context& c, std::mt19937_64& rng) {
  Entry e("completeness", c.options.theorem_tol);
  const auto& g = *c.g;
  e.observe(static_cast<double>(std::labs(completeness_deficit(c.table))), "dimension count");
  for (const auto& orbit : c.table.orbits) {
    for (const auto& irrep : orbit.irreps) {
      if (irrep.regular_multiplicity != static_cast<std::size_t>(irrep.rep.dim(0))) {
        e.observe(1.0, irrep.label + " regular multiplicity " + std::to_string(irrep.regular_multiplicity));
      }
    }
    for (int u : orbit.sub.units) {
      for (int v : orbit.sub.units) {
        const PeterWeylBasis basis = peter_weyl_basis(c.table, u, v);
        const std::string where = g.unit_name(u) + ">" + g.unit_name(v);
        e.observe(basis.gram_error, where + " basis Gram");
        if (basis.functions.size() != basis.hom_set_size) e.observe(1.0, where + " basis size");
        for (int n = 0; n < c.options.parseval_samples; ++n) {
          HomSetFunction f{u, v, g.hom_set(u, v), {}};
          const ComplexVector values = random_vector(static_cast<int>(f.morphisms.size()), rng);
          f.values.assign(values.data(), values.data() + values.size());
          const ComplexVector coeff = basis.coefficients(g, f);
          const double norm2 = hom_inner(g, f, f).real();
          e.observe(std::abs(norm2 - coeff.squaredNorm()), where + " Parseval");
          const HomSetFunction back = basis.synthesize(coeff);
          double worst = 0.0;
          for (std::size_t k = 0; k < f.values.size(); ++k) worst = std::max(worst, std::abs(back.values[k] - f.values[k]));
          e.observe(worst, where + " reconstruction");
        }
      }
    }
  }
  return e.finish();
}

VerificationEntry check_averaging_operator(const Context& c, std::mt19937_64& rng) {
  Entry e("averaging_operator", c.options.identity_tol);
  const auto inspect = [&](const Representation& rep, bool irreducible, const std::string& name) {
    const VectorBundle xi = random_bundle(rep, rng, true);
    const OperatorBundle t = averaging_operator(rep, xi, c.options.tol.unitary);
    e.observe(intertwining_residual(t, rep, rep), name + " intertwining");
    for (std::size_t u = 0; u < t.size(); ++u) {
      const EigenDecomposition eig = hermitian_eig(t[u], c.options.tol.unitary);
      e.observe(std::max(0.0, -eig.values.minCoeff()), name + " positivity");
      e.observe(std::abs(t[u].trace() - 1.0), name + " trace");
      if (irreducible) {
        const Complex scalar = t[u].trace() / static_cast<double>(t[u].rows());
        e.observe(max_abs(t[u] - scalar * ComplexMatrix::Identity(t[u].rows(), t[u].cols())), name + " scalar");
        if (!(scalar.real() > 0.0)) e.observe(1.0, name + " scalar not positive");
      }
    }
  };
  for (const auto& orbit : c.table.orbits) {
    for (const auto& irrep : orbit.irreps) inspect(irrep.rep, true, irrep.label);
    inspect(scramble(right_regular_rep_to(orbit.sub.groupoid, 0), c.options.seed), false,
            "regular o" + std::to_string(orbit.orbit));
  }
  return e.finish();
}

}  // namespace

const std::vector<std::string>& verification_entry_names() {
  static const std::vector<std::string> names = {
      "haar_system",         "convolution_identities", "integrated_homomorphism", "averaging_projection",
      "schur_dichotomy",     "isotypic_orthogonality", "schur_orthogonality",     "tensor_matrix_elements",
      "regular_embeddings",  "separation",             "completeness",            "averaging_operator"};
  return names;
}

std::string version_string() {
  return "grpd 1.0.0; eigen " + std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
         std::to_string(EIGEN_MINOR_VERSION);
}

bool VerificationReport::passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const VerificationEntry& e) { return e.passed; });
}

Json VerificationReport::to_json() const {
  Json doc = Json::object();
  doc["version"] = version_string();
  doc["seed"] = seed;
  doc["tolerances"] = Json{{"unitary", tol.unitary}, {"rank", tol.rank}, {"cluster", tol.cluster}};
  Json list = Json::array();
  for (const auto& e : entries) {
    list.push_back(Json{{"name", e.name},
                        {"status", e.passed ? "pass" : "fail"},
                        {"residual", e.residual},
                        {"tolerance", e.tolerance},
                        {"witnesses", e.witnesses}});
  }
  doc["entries"] = std::move(list);
  doc["result"] = passed() ? "pass" : "fail";
  return doc;
}

std::string VerificationReport::to_text() const {
  std::string out = "version: " + version_string() + "\n";
  out += "seed: " + std::to_string(seed) + "\n";
  out += "tolerances: unitary=" + format_double(tol.unitary) + " rank=" + format_double(tol.rank) +
         " cluster=" + format_double(tol.cluster) + "\n";
  for (const auto& e : entries) {
    std::string name = e.name;
    name.resize(std::max<std::size_t>(name.size(), 24), ' ');
    out += name + (e.passed ? " PASS" : " FAIL") + "  residual=" + format_double(e.residual) +
           " tol=" + format_double(e.tolerance) + "\n";
    for (const auto& w : e.witnesses) out += "    " + w + "\n";
  }
  out += std::string("result: ") + (passed() ? "PASS" : "FAIL") + "\n";
  return out;
}

VerificationReport verify_groupoid(const GroupoidPtr& g, const VerifyOptions& options,
                                   const std::optional<HaarSystem>& haar) {
  const IrrepTable table = enumerate_irreps(g, options.tol, options.seed);
  const Context c{g, table, options};
  VerificationReport report;
  report.seed = options.seed;
  report.tol = options.tol;
  // Each entry draws from its own stream so entries stay independent of order.
  const auto stream = [&](std::uint64_t k) { return std::mt19937_64(options.seed * 0x9e3779b97f4a7c15ULL + k); };
  auto r1 = stream(1), r2 = stream(2), r3 = stream(3), r4 = stream(4), r5 = stream(5);
  report.entries.push_back(check_haar_entry(c, haar));
  report.entries.push_back(check_convolution(c, r1));
  report.entries.push_back(check_integrated(c, r2));
  report.entries.push_back(check_averaging(c, r3));
  report.entries.push_back(check_dichotomy(c));
  report.entries.push_back(check_isotypic(c));
  report.entries.push_back(check_gram(c));
  report.entries.push_back(check_tensor(c));
  report.entries.push_back(check_embeddings(c));
  report.entries.push_back(check_separation(c));
  report.entries.push_back(check_completeness(c, r4));
  report.entries.push_back(check_averaging_operator(c, r5));
  return report;
}

}  // namespace grpd
