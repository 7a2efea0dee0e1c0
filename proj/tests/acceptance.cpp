// Acceptance suite: one PASS/FAIL line per criterion. Expected values come
// from the brute-force routines in oracles.hpp, not from the library.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "grpd/error.hpp"
#include "grpd/io.hpp"
#include "grpd/verify.hpp"
#include "oracles.hpp"

using namespace grpd;
namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kFixtures = {"trivial", "z2",        "z3",        "s3",       "pair3",
                                            "pair2xz2", "union_z2_z3", "action_s3", "action_z2"};

GroupoidPtr load(const std::string& name) {
  return load_groupoid(std::string(GRPD_FIXTURE_DIR) + "/" + name + ".json").groupoid;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

struct Result {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

// Orbit subgroupoids of every fixture, each a transitive groupoid with its
// own enumerated irreps.
struct TransitiveCase {
  std::string name;
  GroupoidPtr groupoid;
  std::vector<Representation> irreps;
};

std::vector<TransitiveCase> transitive_cases() {
  std::vector<TransitiveCase> out;
  for (const auto& name : kFixtures) {
    const auto table = enumerate_irreps(load(name));
    for (const auto& orbit : table.orbits) {
      TransitiveCase c{name + (table.orbits.size() > 1 ? "/o" + std::to_string(orbit.orbit) : ""), orbit.sub.groupoid, {}};
      for (const auto& ir : orbit.irreps) c.irreps.push_back(ir.rep);
      out.push_back(c);
    }
  }
  return out;
}

std::vector<int> brute_hom_set(const FiniteGroupoid& g, int u, int v) {
  std::vector<int> out;
  for (std::size_t x = 0; x < g.morphism_count(); ++x)
    if (g.source(static_cast<int>(x)) == u && g.target(static_cast<int>(x)) == v) out.push_back(static_cast<int>(x));
  return out;
}

int local_index(const std::vector<int>& parent_ids, int id) {
  return static_cast<int>(std::find(parent_ids.begin(), parent_ids.end(), id) - parent_ids.begin());
}

ComplexVector unit_vector(int d, std::mt19937_64& rng) {
  ComplexVector v = random_gaussian(static_cast<std::size_t>(d), 1, rng).col(0);
  return v / v.norm();
}

VectorBundle random_bundle(const Representation& rep, std::mt19937_64& rng) {
  VectorBundle out;
  for (int d : rep.dims()) out.push_back(random_gaussian(static_cast<std::size_t>(d), 1, rng).col(0));
  return out;
}

GroupoidFunction random_function(const GroupoidPtr& g, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  auto f = GroupoidFunction::zero(g);
  for (auto& v : f.values) v = Complex(n(rng), n(rng));
  return f;
}

// ⟨π(y)ξ_{s(y)}, η_{r(y)}⟩ for every y.
std::vector<Complex> coefficient_oracle(const Representation& rep, const VectorBundle& xi, const VectorBundle& eta) {
  const auto& g = *rep.groupoid();
  std::vector<Complex> out(g.morphism_count());
  for (std::size_t y = 0; y < g.morphism_count(); ++y) {
    const int yi = static_cast<int>(y);
    out[y] = eta[g.target(yi)].dot(rep.matrix(yi) * xi[g.source(yi)]);
  }
  return out;
}

double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

Representation random_sum(const TransitiveCase& c, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, c.irreps.size() - 1);
  std::vector<Representation> parts;
  const int n = std::uniform_int_distribution<int>(1, 3)(rng);
  for (int k = 0; k < n; ++k) parts.push_back(c.irreps[pick(rng)]);
  return scramble(direct_sum(parts), rng());
}

// 1. Group duals: counts from conjugacy classes, Σd² = |G|.
Result criterion1() {
  Result r;
  std::ostringstream d;
  for (const auto& name : {"z3", "s3"}) {
    const auto g = load(name);
    const auto t0 = std::chrono::steady_clock::now();
    const auto table = enumerate_irreps(g);
    const double secs = seconds_since(t0);
    const auto& irreps = table.orbits.at(0).irreps;
    std::vector<int> dims;
    std::size_t sum_sq = 0;
    for (const auto& ir : irreps) {
      dims.push_back(ir.rep.dim(0));
      sum_sq += static_cast<std::size_t>(ir.rep.dim(0) * ir.rep.dim(0));
      r.require(oracle::burnside_irreducible(ir.rep), std::string(name) + ": reducible entry");
    }
    std::sort(dims.begin(), dims.end());
    r.require(irreps.size() == oracle::isotropy_class_count(*g, 0), std::string(name) + ": irrep count != class count");
    r.require(sum_sq == g->morphism_count(), std::string(name) + ": sum d^2 != |G|");
    r.require(secs < 1.0, std::string(name) + ": runtime " + fmt(secs) + " s");
    if (std::string(name) == "z3") r.require(dims == std::vector<int>{1, 1, 1}, "z3 dims");
    if (std::string(name) == "s3") r.require(dims == std::vector<int>{1, 1, 2}, "s3 dims");
    d << name << " dims";
    for (int x : dims) d << " " << x;
    d << " (" << fmt(secs) << " s); ";
  }
  if (r.pass) r.detail = d.str();
  return r;
}

// 2. pair(n): one irrep, all fibres one-dimensional.
Result criterion2() {
  Result r;
  std::ostringstream d;
  for (std::size_t n : {2u, 3u, 5u}) {
    const auto g = pair_groupoid(n);
    const auto t0 = std::chrono::steady_clock::now();
    const auto table = enumerate_irreps(g);
    const double secs = seconds_since(t0);
    const std::string tag = "pair(" + std::to_string(n) + ")";
    r.require(table.orbits.size() == 1 && table.orbits[0].irreps.size() == 1, tag + ": irrep count");
    if (!r.pass) break;
    const auto& rep = table.orbits[0].irreps[0].rep;
    for (int dim : rep.dims()) r.require(dim == 1, tag + ": fibre dim != 1");
    r.require(oracle::mor_dimension(rep, rep) == 1, tag + ": not irreducible");
    // |G_u^v| = 1 for every pair, so one irrep of dim 1 exhausts the dual.
    r.require(brute_hom_set(*g, 0, 1).size() == 1, tag + ": hom set size");
    r.require(secs < 1.0, tag + ": runtime " + fmt(secs) + " s");
    d << tag << " " << fmt(secs) << " s; ";
  }
  if (r.pass) r.detail = d.str();
  return r;
}

// 3. Schur dichotomy and two routes to dim Mor.
Result criterion3(const std::vector<TransitiveCase>& cases) {
  Result r;
  std::size_t pairs = 0;
  for (const auto& c : cases) {
    for (std::size_t a = 0; a < c.irreps.size(); ++a)
      for (std::size_t b = 0; b < c.irreps.size(); ++b) {
        const std::size_t lib = intertwiner_space(c.irreps[a], c.irreps[b]).dimension();
        const std::size_t brute = oracle::mor_dimension(c.irreps[a], c.irreps[b]);
        const bool equivalent = oracle::same_character(c.irreps[a], c.irreps[b]);
        const std::string tag = c.name + " (" + std::to_string(a) + "," + std::to_string(b) + ")";
        r.require(lib == brute, tag + ": dim Mor " + std::to_string(lib) + " vs oracle " + std::to_string(brute));
        r.require(lib <= 1, tag + ": dim Mor > 1");
        r.require((lib == 1) == equivalent, tag + ": dim Mor disagrees with equivalence");
        ++pairs;
      }
  }
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, cases.size() - 1);
  for (int k = 0; k < 100; ++k) {
    const auto& c = cases[pick(rng)];
    const auto a = random_sum(c, rng);
    const auto b = random_sum(c, rng);
    const std::size_t null_space_dim = intertwiner_space(a, b).dimension();
    const std::size_t averaged = averaged_intertwiner_dimension(a, b);
    const std::size_t brute = oracle::mor_dimension(a, b);
    r.require(null_space_dim == averaged && averaged == brute,
              c.name + " random pair " + std::to_string(k) + ": " + std::to_string(null_space_dim) + "/" +
                  std::to_string(averaged) + "/" + std::to_string(brute));
  }
  if (r.pass) r.detail = std::to_string(pairs) + " irrep pairs, 100 random pairs agree";
  return r;
}

// 4. Gram matrices against δδ′/d and δδ′·λ_u(G_u^v)/d.
Result criterion4() {
  Result r;
  double worst = 0.0;
  for (const auto& name : {"pair2xz2", "s3"}) {
    const auto g = load(name);
    const auto table = enumerate_irreps(g);
    const auto& irreps = table.orbits[0].irreps;
    for (std::size_t a = 0; a < irreps.size(); ++a)
      for (std::size_t b = 0; b < irreps.size(); ++b)
        for (std::size_t us = 0; us < g->unit_count(); ++us)
          for (std::size_t vs = 0; vs < g->unit_count(); ++vs) {
            const int u = static_cast<int>(us);
            const int v = static_cast<int>(vs);
            const auto& pa = irreps[a].rep;
            const auto& pb = irreps[b].rep;
            const double mass = static_cast<double>(brute_hom_set(*g, u, v).size()) /
                                static_cast<double>(g->source_fibre(u).size());
            for (bool renorm : {true, false}) {
              const int du = pa.dim(u);
              const int dv = pa.dim(v);
              ComplexMatrix expected = ComplexMatrix::Zero(dv * du, pb.dim(v) * pb.dim(u));
              if (a == b) {
                for (int i = 0; i < dv; ++i)
                  for (int j = 0; j < du; ++j) expected(i * du + j, i * du + j) = (renorm ? 1.0 : mass) / du;
              }
              const auto m = renorm ? HomSetMeasure::Renormalized : HomSetMeasure::Restricted;
              worst = std::max(worst, oracle::max_abs_diff(schur_gram(pa, pb, u, v, m), expected));
              worst = std::max(worst, oracle::max_abs_diff(oracle::gram_by_sums(pa, pb, u, v, renorm), expected));
            }
          }
  }
  r.require(worst <= 1e-9, "max deviation " + fmt(worst));
  if (r.pass) r.detail = "max deviation " + fmt(worst);
  return r;
}

// 5. Completeness, orthonormal Peter-Weyl basis, Parseval, regular multiplicities.
Result criterion5() {
  Result r;
  double gram_worst = 0.0;
  double parseval_worst = 0.0;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  for (const auto& name : kFixtures) {
    const auto g = load(name);
    const auto table = enumerate_irreps(g);
    for (std::size_t us = 0; us < g->unit_count(); ++us)
      for (std::size_t vs = 0; vs < g->unit_count(); ++vs) {
        const int u = static_cast<int>(us);
        const int v = static_cast<int>(vs);
        if (!g->co_orbital(u, v)) continue;
        const auto hom = brute_hom_set(*g, u, v);
        const auto& orbit = table.orbit_of_unit(u);
        const int lu = local_index(orbit.sub.units, u);
        const int lv = local_index(orbit.sub.units, v);
        long sum = 0;
        for (const auto& ir : orbit.irreps) sum += ir.rep.dim(lu) * ir.rep.dim(lv);
        const std::string tag = name + " (" + std::to_string(u) + "," + std::to_string(v) + ")";
        r.require(sum == static_cast<long>(hom.size()), tag + ": sum d_u d_v != |G_u^v|");

        const auto basis = peter_weyl_basis(table, u, v);
        r.require(basis.functions.size() == hom.size(), tag + ": basis size");
        if (!r.pass) return r;
        const double mu = 1.0 / static_cast<double>(hom.size());
        const auto inner = [&](const std::vector<Complex>& f, const std::vector<Complex>& h) {
          Complex s = 0.0;
          for (std::size_t k = 0; k < hom.size(); ++k) s += f[k] * std::conj(h[k]) * mu;
          return s;
        };
        for (std::size_t a = 0; a < basis.functions.size(); ++a) {
          r.require(basis.functions[a].morphisms == hom, tag + ": basis function on wrong hom set");
          for (std::size_t b = 0; b < basis.functions.size(); ++b) {
            const Complex e = inner(basis.functions[a].values, basis.functions[b].values);
            gram_worst = std::max(gram_worst, std::abs(e - Complex(a == b ? 1.0 : 0.0)));
          }
        }
        for (int s = 0; s < 50; ++s) {
          std::vector<Complex> f(hom.size());
          for (auto& z : f) z = Complex(n(rng), n(rng));
          const double norm2 = inner(f, f).real();
          double coeff2 = 0.0;
          for (const auto& phi : basis.functions) coeff2 += std::norm(inner(f, phi.values));
          parseval_worst = std::max(parseval_worst, std::abs(coeff2 - norm2) / std::max(1.0, norm2));
        }
      }
    for (const auto& orbit : table.orbits) {
      const auto regular = right_regular_rep_to(orbit.sub.groupoid, 0);
      for (const auto& ir : orbit.irreps) {
        const double m = oracle::character_multiplicity(ir.rep, regular);
        r.require(std::abs(m - ir.rep.dim(0)) < 1e-9, name + " " + ir.label + ": regular multiplicity " + fmt(m));
        r.require(ir.regular_multiplicity == static_cast<std::size_t>(ir.rep.dim(0)),
                  name + " " + ir.label + ": recorded regular multiplicity");
      }
    }
  }
  r.require(gram_worst <= 1e-9, "basis Gram deviation " + fmt(gram_worst));
  r.require(parseval_worst <= 1e-9, "Parseval residual " + fmt(parseval_worst));
  if (r.pass) r.detail = "Gram deviation " + fmt(gram_worst) + ", Parseval residual " + fmt(parseval_worst);
  return r;
}

// 6. Decomposition of scrambled sums with known multiplicities.
Result criterion6(const std::vector<TransitiveCase>& cases) {
  Result r;
  double worst_residual = 0.0;
  double slowest = 0.0;
  for (const auto& c : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      std::mt19937_64 rng(seed);
      std::vector<std::size_t> order(c.irreps.size());
      for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
      std::vector<std::pair<std::size_t, int>> chosen;
      int total = 0;
      do {
        std::shuffle(order.begin(), order.end(), rng);
        const std::size_t count = std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>(3, order.size()))(rng);
        chosen.clear();
        total = 0;
        for (std::size_t k = 0; k < count; ++k) {
          const int m = std::uniform_int_distribution<int>(1, 3)(rng);
          chosen.push_back({order[k], m});
        }
        for (const auto& [k, m] : chosen) total += m * c.irreps[k].dim(0);
      } while (total > 24);

      std::vector<Representation> parts;
      for (const auto& [k, m] : chosen)
        for (int j = 0; j < m; ++j) parts.push_back(c.irreps[k]);
      const auto pi = scramble(direct_sum(parts), seed);
      const std::string tag = c.name + " seed " + std::to_string(seed);
      Decomposition dec;
      try {
        dec = decompose(pi, {}, seed);
      } catch (const Error& e) {
        r.require(false, tag + ": " + e.what());
        continue;
      }
      r.require(dec.components.size() == chosen.size(), tag + ": component count");
      for (const auto& comp : dec.components) {
        std::size_t expect = 0;
        for (const auto& [k, m] : chosen)
          if (oracle::same_character(comp.irrep, c.irreps[k])) expect = static_cast<std::size_t>(m);
        r.require(comp.multiplicity == expect, tag + ": multiplicity " + std::to_string(comp.multiplicity) +
                                                   " expected " + std::to_string(expect));
        r.require(comp.mor_dimension == comp.multiplicity, tag + ": dim Mor != multiplicity");
        r.require(oracle::mor_dimension(comp.irrep, pi) == comp.multiplicity, tag + ": oracle dim Mor");
      }
      // Residual recomputed from the isometries.
      double residual = 0.0;
      const auto& g = *pi.groupoid();
      std::vector<ComplexMatrix> u(g.unit_count());
      for (std::size_t w = 0; w < g.unit_count(); ++w) {
        u[w].resize(pi.dim(static_cast<int>(w)), 0);
        for (const auto& comp : dec.components) {
          ComplexMatrix next(u[w].rows(), u[w].cols() + comp.isometry[w].cols());
          next << u[w], comp.isometry[w];
          u[w] = next;
        }
        residual = std::max(residual, oracle::max_abs_diff(u[w].adjoint() * u[w],
                                                           ComplexMatrix::Identity(u[w].cols(), u[w].cols())));
      }
      for (std::size_t xs = 0; xs < g.morphism_count(); ++xs) {
        const int x = static_cast<int>(xs);
        std::vector<ComplexMatrix> blocks;
        Eigen::Index rows = 0;
        for (const auto& comp : dec.components) {
          const int m = static_cast<int>(comp.multiplicity);
          blocks.push_back(kron(ComplexMatrix::Identity(m, m), comp.irrep.matrix(x)));
          rows += blocks.back().rows();
        }
        ComplexMatrix expected = ComplexMatrix::Zero(rows, rows);
        Eigen::Index r0 = 0, c0 = 0;
        for (const auto& b : blocks) {
          expected.block(r0, c0, b.rows(), b.cols()) = b;
          r0 += b.rows();
          c0 += b.cols();
        }
        const ComplexMatrix got = u[g.target(x)].adjoint() * pi.matrix(x) * u[g.source(x)];
        residual = std::max(residual, oracle::max_abs_diff(got, expected));
      }
      r.require(residual <= 1e-8, tag + ": residual " + fmt(residual));
      r.require(dec.residual <= 1e-8, tag + ": reported residual " + fmt(dec.residual));
      worst_residual = std::max(worst_residual, residual);
    }
    const double secs = seconds_since(t0);
    slowest = std::max(slowest, secs);
    r.require(secs < 10.0, c.name + ": runtime " + fmt(secs) + " s");
  }
  if (r.pass) r.detail = "max residual " + fmt(worst_residual) + ", slowest fixture " + fmt(slowest) + " s";
  return r;
}

// 7. Convolution-algebra identities.
Result criterion7() {
  Result r;
  double worst = 0.0;
  for (const auto& name : {"s3", "pair2xz2"}) {
    const auto g = load(name);
    const auto table = enumerate_irreps(g);
    std::vector<Representation> pool = {right_regular_rep(g), left_regular_rep(g)};
    for (const auto& ir : table.orbits[0].irreps) pool.push_back(ir.rep);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::uniform_int_distribution<int> morph(0, static_cast<int>(g->morphism_count()) - 1);
    for (int k = 0; k < 100; ++k) {
      const auto rep = scramble(pool[pick(rng)], rng());
      const auto other = scramble(pool[pick(rng)], rng());
      const auto xi = random_bundle(rep, rng);
      const auto eta = random_bundle(rep, rng);
      const auto f = random_function(g, rng);
      const auto h = random_function(g, rng);
      const int x = morph(rng);
      const auto c = matrix_coefficient(rep, xi, eta);
      const auto base = coefficient_oracle(rep, xi, eta);
      worst = std::max(worst, max_diff(c.values, base));

      // L_x π_{ξ,η} = π_{ξ,π(x)η}
      VectorBundle px_eta(eta.size());
      VectorBundle px_xi(xi.size());
      for (std::size_t w = 0; w < eta.size(); ++w) {
        px_eta[w] = ComplexVector::Zero(eta[w].size());
        px_xi[w] = ComplexVector::Zero(xi[w].size());
      }
      px_eta[g->target(x)] = rep.matrix(x) * eta[g->source(x)];
      px_xi[g->target(x)] = rep.matrix(x) * xi[g->source(x)];
      worst = std::max(worst, max_diff(left_translate(x, c).values, coefficient_oracle(rep, xi, px_eta)));
      // R_x π_{ξ,η} = π_{π(x)ξ,η}
      worst = std::max(worst, max_diff(right_translate(x, c).values, coefficient_oracle(rep, px_xi, eta)));
      // f * π_{ξ,η} = π_{ξ,π(f̄)η}
      auto fbar = f;
      for (auto& z : fbar.values) z = std::conj(z);
      const ComplexMatrix pf_bar = oracle::integrated(rep, fbar);
      ComplexVector flat(pf_bar.cols());
      Eigen::Index off = 0;
      for (const auto& e : eta) {
        flat.segment(off, e.size()) = e;
        off += e.size();
      }
      const ComplexVector image = pf_bar * flat;
      VectorBundle moved;
      off = 0;
      for (const auto& e : eta) {
        moved.push_back(image.segment(off, e.size()));
        off += e.size();
      }
      worst = std::max(worst, max_diff(convolve(f, c).values, coefficient_oracle(rep, xi, moved)));
      // (π⊗π′)^{(ik),(jl)} = π^{ij} π′^{kl}
      const auto t = tensor_product(rep, other);
      for (std::size_t ys = 0; ys < g->morphism_count(); ++ys) {
        const int y = static_cast<int>(ys);
        const auto& a = rep.matrix(y);
        const auto& b = other.matrix(y);
        for (Eigen::Index i = 0; i < a.rows(); ++i)
          for (Eigen::Index j = 0; j < a.cols(); ++j)
            for (Eigen::Index p = 0; p < b.rows(); ++p)
              for (Eigen::Index q = 0; q < b.cols(); ++q)
                worst = std::max(worst, std::abs(t.matrix(y)(i * b.rows() + p, j * b.cols() + q) - a(i, j) * b(p, q)));
      }
      // π(f*h) = π(f)π(h), π(f*) = π(f)*
      const ComplexMatrix pf = oracle::integrated(rep, f);
      worst = std::max(worst, oracle::max_abs_diff(integrated_rep(rep, convolve(f, h)).matrix, pf * oracle::integrated(rep, h)));
      worst = std::max(worst, oracle::max_abs_diff(integrated_rep(rep, involution(f)).matrix, pf.adjoint()));
      worst = std::max(worst, max_diff(convolve(f, h).values, oracle::convolve(f, h).values));
    }
  }
  r.require(worst <= 1e-10, "max residual " + fmt(worst));
  if (r.pass) r.detail = "200 instances, max residual " + fmt(worst);
  return r;
}

// Whether irreps of the table tell x and y apart, checked entrywise.
bool separated_by(const IrrepTable& table, const FiniteGroupoid& g, int x, int y, const std::string& label) {
  if (label == "source/target") return g.source(x) != g.source(y) || g.target(x) != g.target(y);
  for (const auto& orbit : table.orbits)
    for (const auto& ir : orbit.irreps) {
      if (ir.label != label) continue;
      const int lx = local_index(orbit.sub.morphisms, x);
      const int ly = local_index(orbit.sub.morphisms, y);
      return oracle::max_abs_diff(ir.rep.matrix(lx), ir.rep.matrix(ly)) > 1e-9;
    }
  return false;
}

// 8. Separation of morphisms, with a truncated table as negative control.
Result criterion8() {
  Result r;
  std::size_t pairs = 0;
  for (const auto& name : kFixtures) {
    const auto g = load(name);
    const auto table = enumerate_irreps(g);
    const auto report = separates_points(table);
    r.require(report.separates && report.failures.empty(), name + ": not separated");
    std::set<std::pair<int, int>> seen;
    for (const auto& w : report.witnesses) {
      seen.insert({std::min(w.x, w.y), std::max(w.x, w.y)});
      r.require(w.x != w.y && separated_by(table, *g, w.x, w.y, w.witness),
                name + ": bad witness " + w.witness + " for " + g->morphism_name(w.x) + "," + g->morphism_name(w.y));
    }
    const std::size_t n = g->morphism_count();
    r.require(seen.size() == n * (n - 1) / 2, name + ": witnesses do not cover every pair");
    pairs += seen.size();
  }
  const auto g = load("s3");
  auto truncated = enumerate_irreps(g);
  truncated.orbits[0].irreps.pop_back();
  const auto report = separates_points(truncated);
  r.require(!report.separates && !report.failures.empty(), "truncated table still separates");
  for (const auto& [x, y] : report.failures) {
    bool split = false;
    for (const auto& ir : truncated.orbits[0].irreps) split = split || separated_by(truncated, *g, x, y, ir.label);
    r.require(!split, "reported failure is separated by the truncated table");
  }
  if (r.pass) {
    r.detail = std::to_string(pairs) + " pairs witnessed; truncated s3 table fails on " +
               std::to_string(report.failures.size()) + " pairs";
  }
  return r;
}

// 9. The averaging operator T from unit vectors.
Result criterion9() {
  Result r;
  double worst_intertwining = 0.0;
  double worst_scalar = 0.0;
  double min_eig = 0.0;
  std::mt19937_64 rng(9);
  for (const auto& name : kFixtures) {
    const auto g = load(name);
    const auto table = enumerate_irreps(g);
    std::vector<std::pair<Representation, bool>> reps = {{right_regular_rep(g), false}, {left_regular_rep(g), false}};
    for (const auto& orbit : table.orbits)
      for (const auto& ir : orbit.irreps) reps.push_back({scramble(ir.rep, rng()), true});
    for (const auto& [rep, irreducible] : reps) {
      const auto& h = *rep.groupoid();
      VectorBundle xi;
      for (int d : rep.dims()) xi.push_back(unit_vector(d, rng));
      const auto t = averaging_operator(rep, xi);
      double norm = 0.0;
      for (std::size_t u = 0; u < h.unit_count(); ++u) {
        // T_u = Σ_{x ∈ G^u} (π(x)ξ)(π(x)ξ)* / |G^u|
        const int ui = static_cast<int>(u);
        ComplexMatrix expect = ComplexMatrix::Zero(rep.dim(ui), rep.dim(ui));
        std::size_t fibre = 0;
        for (std::size_t x = 0; x < h.morphism_count(); ++x)
          if (h.target(static_cast<int>(x)) == ui) ++fibre;
        for (std::size_t xs = 0; xs < h.morphism_count(); ++xs) {
          const int x = static_cast<int>(xs);
          if (h.target(x) != ui) continue;
          const ComplexVector v = rep.matrix(x) * xi[h.source(x)];
          expect += v * v.adjoint() / static_cast<double>(fibre);
        }
        worst_intertwining = std::max(worst_intertwining, oracle::max_abs_diff(t[u], expect));
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(t[u]);
        min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
        norm = std::max(norm, t[u].cwiseAbs().maxCoeff());
      }
      r.require(norm > 1e-10, name + ": T = 0");
      for (std::size_t xs = 0; xs < h.morphism_count(); ++xs) {
        const int x = static_cast<int>(xs);
        worst_intertwining = std::max(worst_intertwining, oracle::max_abs_diff(rep.matrix(x) * t[h.source(x)],
                                                                               t[h.target(x)] * rep.matrix(x)));
      }
      if (irreducible) {
        const Complex c = t[0].trace() / static_cast<double>(rep.dim(0));
        r.require(c.real() > 0.0, name + ": c <= 0");
        for (std::size_t u = 0; u < h.unit_count(); ++u) {
          const int d = rep.dim(static_cast<int>(u));
          worst_scalar = std::max(worst_scalar, oracle::max_abs_diff(t[u], c * ComplexMatrix::Identity(d, d)));
        }
      }
    }
  }
  r.require(min_eig >= -1e-10, "negative eigenvalue " + fmt(min_eig));
  r.require(worst_intertwining <= 1e-10, "intertwining residual " + fmt(worst_intertwining));
  r.require(worst_scalar <= 1e-10, "deviation from cI " + fmt(worst_scalar));
  if (r.pass) {
    r.detail = "min eigenvalue " + fmt(min_eig) + ", intertwining " + fmt(worst_intertwining) + ", cI deviation " +
               fmt(worst_scalar);
  }
  return r;
}

std::string slurp(const fs::path& p) { return read_file(p.string()); }

// Runs every report-producing CLI command into `dir`, stdout included.
void run_cli(const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cli = GRPD_CLI_PATH;
  const std::string fx = GRPD_FIXTURE_DIR;
  std::vector<std::string> commands;
  for (const auto& name : kFixtures) {
    commands.push_back("irreps " + fx + "/" + name + ".json");
    commands.push_back("verify " + fx + "/" + name + ".json");
  }
  commands.push_back("verify " + fx + "/pair3_skewed_haar.json");
  commands.push_back("decompose " + fx + "/s3.json " + fx + "/s3_mixed.json");
  commands.push_back("decompose " + fx + "/s3.json " + fx + "/s3_regular.json");
  commands.push_back("decompose " + fx + "/z3.json " + fx + "/z3_regular.json");
  for (const auto& what : {"matrix-elements", "gram", "peter-weyl"})
    commands.push_back(std::string("export ") + fx + "/s3.json --format csv --what " + what);
  int k = 0;
  for (const auto& c : commands) {
    const std::string line = cli + " " + c + " --out " + dir.string() + " > " + (dir / ("stdout." + std::to_string(k++))).string() + " 2>&1";
    [[maybe_unused]] const int status = std::system(line.c_str());
  }
}

// 10. Determinism of reports and of the dual across seeds.
Result criterion10() {
  Result r;
  const fs::path base = fs::temp_directory_path() / ("grpd_acceptance_" + std::to_string(::getpid()));
  run_cli(base / "a");
  run_cli(base / "b");
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(base / "a")) {
    const fs::path other = base / "b" / entry.path().filename();
    r.require(fs::exists(other) && slurp(entry.path()) == slurp(other), entry.path().filename().string() + " differs");
    ++files;
  }
  std::size_t files_b = static_cast<std::size_t>(std::distance(fs::directory_iterator(base / "b"), fs::directory_iterator()));
  r.require(files == files_b && files > 0, "file sets differ");
  fs::remove_all(base);

  for (const auto& name : kFixtures) {
    const auto g = load(name);
    const auto ref = enumerate_irreps(g, {}, 0);
    for (std::uint64_t seed = 1; seed < 5; ++seed) {
      const auto t = enumerate_irreps(g, {}, seed);
      r.require(t.orbits.size() == ref.orbits.size(), name + ": orbit count varies with seed");
      for (std::size_t o = 0; o < t.orbits.size() && r.pass; ++o) {
        r.require(t.orbits[o].irreps.size() == ref.orbits[o].irreps.size(), name + ": irrep count varies with seed");
        for (std::size_t k = 0; k < t.orbits[o].irreps.size() && r.pass; ++k) {
          const auto& a = t.orbits[o].irreps[k];
          const auto& b = ref.orbits[o].irreps[k];
          r.require(a.label == b.label && a.regular_multiplicity == b.regular_multiplicity &&
                        oracle::same_character(a.rep, b.rep),
                    name + ": class " + a.label + " varies with seed " + std::to_string(seed));
        }
      }
    }
  }
  const auto s3 = load("s3");
  const auto mixed = load_representation(std::string(GRPD_FIXTURE_DIR) + "/s3_mixed.json", s3);
  const auto ref = decompose(mixed, {}, 0);
  for (std::uint64_t seed = 1; seed < 5; ++seed) {
    const auto d = decompose(mixed, {}, seed);
    r.require(d.components.size() == ref.components.size(), "decomposition varies with seed");
    for (std::size_t k = 0; k < d.components.size() && r.pass; ++k) {
      r.require(d.components[k].multiplicity == ref.components[k].multiplicity &&
                    oracle::same_character(d.components[k].irrep, ref.components[k].irrep),
                "decomposition class varies with seed " + std::to_string(seed));
    }
  }
  if (r.pass) r.detail = std::to_string(files) + " output files identical across runs; seeds 0..4 agree";
  return r;
}

}  // namespace

int main() {
  const auto cases = transitive_cases();
  const std::vector<std::function<Result()>> criteria = {
      criterion1,
      criterion2,
      [&] { return criterion3(cases); },
      criterion4,
      criterion5,
      [&] { return criterion6(cases); },
      criterion7,
      criterion8,
      criterion9,
      criterion10,
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Result r;
    try {
      r = criteria[k]();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    if (!r.pass) ++failures;
    std::cout << "criterion " << (k + 1) << ": " << (r.pass ? "PASS" : "FAIL") << "  " << r.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
