#include <gtest/gtest.h>

#include <random>

#include "grpd/decomposition.hpp"
#include "grpd/error.hpp"
#include "oracles.hpp"

using namespace grpd;

namespace {

GroupoidPtr z3() { return group_groupoid(cyclic_group(3)); }
GroupoidPtr s3() { return group_groupoid(symmetric_group(3)); }

Representation s3_standard(const GroupoidPtr& g) {
  std::vector<ComplexMatrix> mats;
  for (const auto& name : g->morphism_names()) mats.push_back(oracle::s3_standard(oracle::s3_perm(name)));
  return group_rep(g, mats);
}

Representation s3_sign(const GroupoidPtr& g) {
  std::vector<ComplexMatrix> mats;
  for (const auto& name : g->morphism_names()) {
    mats.push_back(ComplexMatrix::Constant(1, 1, static_cast<double>(oracle::s3_sign(oracle::s3_perm(name)))));
  }
  return group_rep(g, mats);
}

std::vector<std::size_t> multiplicities(const Decomposition& d) {
  std::vector<std::size_t> out;
  for (const auto& c : d.components) out.push_back(c.multiplicity);
  return out;
}

std::vector<int> dims(const Decomposition& d) {
  std::vector<int> out;
  for (const auto& c : d.components) out.push_back(c.irrep.dim(0));
  return out;
}

}  // namespace

TEST(Split, IrreducibleComesBackWhole) {
  const auto sigma = scramble(s3_standard(s3()), 3);
  const auto parts = split_once(sigma, {}, 0);
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0][0].cols(), 2);
}

TEST(Split, PartsAreInvariantAndOrthogonal) {
  const auto g = s3();
  const auto pi = scramble(direct_sum({s3_sign(g), s3_standard(g), trivial_rep(g)}), 11);
  const auto parts = split_once(pi, {}, 0);
  ASSERT_GE(parts.size(), 2u);
  Eigen::Index total = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    total += parts[i][0].cols();
    EXPECT_TRUE(projection_is_morphism(pi, parts[i]));
    for (std::size_t j = i + 1; j < parts.size(); ++j) EXPECT_LT((parts[i][0].adjoint() * parts[j][0]).norm(), 1e-10);
  }
  EXPECT_EQ(total, 4);
}

TEST(Split, ReducibleOnSeveralOrbitsThrows) {
  const auto d = disjoint_union({group_groupoid(cyclic_group(2)), z3()});
  try {
    split_once(right_regular_rep(d), {}, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotTransitive);
  }
  EXPECT_EQ(split_once(trivial_rep(d), {}, 0).size(), 1u);
}

TEST(Decompose, RegularCyclic) {
  const auto d = decompose(right_regular_rep(z3()));
  EXPECT_EQ(multiplicities(d), (std::vector<std::size_t>{1, 1, 1}));
  EXPECT_LE(d.residual, 1e-8);
  for (const auto& c : d.components) EXPECT_EQ(c.mor_dimension, c.multiplicity);
}

TEST(Decompose, RegularS3) {
  const auto d = decompose(right_regular_rep(s3()));
  EXPECT_EQ(dims(d), (std::vector<int>{1, 1, 2}));
  EXPECT_EQ(multiplicities(d), (std::vector<std::size_t>{1, 1, 2}));
  EXPECT_LE(d.residual, 1e-8);
}

TEST(Decompose, ScrambledSum) {
  const auto g = s3();
  const auto rho = s3_sign(g);
  const auto sigma = s3_standard(g);
  const auto pi = scramble(direct_sum({rho, rho, sigma}), 7);
  const auto d = decompose(pi, {}, 5);
  ASSERT_EQ(d.components.size(), 2u);
  EXPECT_EQ(d.components[0].multiplicity, 2u);
  EXPECT_EQ(d.components[1].multiplicity, 1u);
  EXPECT_TRUE(are_equivalent(d.components[0].irrep, rho).has_value());
  EXPECT_TRUE(are_equivalent(d.components[1].irrep, sigma).has_value());
  EXPECT_LE(d.residual, 1e-8);

  // Independent check of the isometries: V* π(x) V = I_m ⊗ irrep(x).
  for (const auto& c : d.components) {
    const auto& v = c.isometry[0];
    const int m = static_cast<int>(c.multiplicity);
    for (std::size_t x = 0; x < g->morphism_count(); ++x) {
      const ComplexMatrix block = v.adjoint() * pi.matrix(static_cast<int>(x)) * v;
      const ComplexMatrix expect = kron(ComplexMatrix::Identity(m, m), c.irrep.matrix(static_cast<int>(x)));
      EXPECT_LT(oracle::max_abs_diff(block, expect), 1e-8);
    }
  }
}

TEST(Decompose, MultiOrbit) {
  const auto d = disjoint_union({group_groupoid(cyclic_group(2)), z3()});
  const auto dec = decompose(right_regular_rep(d));
  ASSERT_EQ(dec.components.size(), 5u);
  EXPECT_EQ(dec.components[0].orbit, 0u);
  EXPECT_EQ(dec.components[4].orbit, 1u);
  EXPECT_LE(dec.residual, 1e-8);
}

TEST(Decompose, RandomSumsMatchCharacterOracle) {
  const auto g = s3();
  const std::vector<Representation> irreps = {trivial_rep(g), s3_sign(g), s3_standard(g)};
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> mult(0, 3);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    std::vector<Representation> parts;
    std::vector<int> n(3);
    for (int k = 0; k < 3; ++k) {
      n[k] = mult(rng);
      for (int c = 0; c < n[k]; ++c) parts.push_back(irreps[k]);
    }
    if (parts.empty()) continue;
    const auto pi = scramble(direct_sum(parts), rng());
    const auto d = decompose(pi, {}, seed);
    EXPECT_LE(d.residual, 1e-8);
    for (int k = 0; k < 3; ++k) {
      const long expect = std::lround(oracle::character_multiplicity(irreps[k], pi));
      EXPECT_EQ(expect, n[k]);
      std::size_t got = 0;
      for (const auto& c : d.components)
        if (are_equivalent(c.irrep, irreps[k]).has_value()) got = c.multiplicity;
      EXPECT_EQ(got, static_cast<std::size_t>(n[k]));
    }
  }
}

TEST(Enumerate, CyclicAndS3) {
  const auto t3 = enumerate_irreps(z3());
  ASSERT_EQ(t3.orbits.size(), 1u);
  EXPECT_EQ(t3.orbits[0].irreps.size(), 3u);
  EXPECT_EQ(completeness_deficit(t3), 0);

  const auto g = s3();
  const auto t = enumerate_irreps(g);
  ASSERT_EQ(t.orbits[0].irreps.size(), 3u);
  const auto& ir = t.orbits[0].irreps;
  EXPECT_EQ(ir[0].label, "o0.r0");
  EXPECT_EQ(ir[2].label, "o0.r2");
  EXPECT_EQ(ir[0].rep.dim(0), 1);
  EXPECT_EQ(ir[1].rep.dim(0), 1);
  EXPECT_EQ(ir[2].rep.dim(0), 2);
  EXPECT_EQ(ir[2].regular_multiplicity, 2u);
  // Trivial first, sign second, standard last; checked against hand-built irreps.
  EXPECT_TRUE(are_equivalent(ir[0].rep, trivial_rep(ir[0].rep.groupoid())).has_value());
  const auto sub = t.orbits[0].sub.groupoid;
  EXPECT_TRUE(are_equivalent(ir[1].rep, s3_sign(sub)).has_value());
  EXPECT_TRUE(are_equivalent(ir[2].rep, s3_standard(sub)).has_value());
  for (const auto& r : ir) EXPECT_TRUE(oracle::burnside_irreducible(r.rep));
}

TEST(Enumerate, PairGroupoids) {
  for (std::size_t n : {2u, 3u, 5u}) {
    const auto t = enumerate_irreps(pair_groupoid(n));
    ASSERT_EQ(t.orbits.size(), 1u);
    ASSERT_EQ(t.orbits[0].irreps.size(), 1u);
    for (int d : t.orbits[0].irreps[0].rep.dims()) EXPECT_EQ(d, 1);
  }
}

TEST(Enumerate, ProductAndUnion) {
  const auto p = enumerate_irreps(product_groupoid(pair_groupoid(2), group_groupoid(cyclic_group(2))));
  ASSERT_EQ(p.orbits.size(), 1u);
  EXPECT_EQ(p.orbits[0].irreps.size(), 2u);
  EXPECT_EQ(completeness_deficit(p), 0);

  const auto d = enumerate_irreps(disjoint_union({group_groupoid(cyclic_group(2)), z3()}));
  ASSERT_EQ(d.orbits.size(), 2u);
  EXPECT_EQ(d.orbits[0].irreps.size(), 2u);
  EXPECT_EQ(d.orbits[1].irreps.size(), 3u);
  EXPECT_EQ(d.orbits[1].irreps[0].label, "o1.r0");
  EXPECT_EQ(&d.orbit_of_unit(1), &d.orbits[1]);
}

TEST(Enumerate, SeedIndependentClasses) {
  const auto g = s3();
  const auto base = enumerate_irreps(g, {}, 0);
  for (std::uint64_t seed = 1; seed < 5; ++seed) {
    const auto t = enumerate_irreps(g, {}, seed);
    ASSERT_EQ(t.orbits[0].irreps.size(), base.orbits[0].irreps.size());
    for (std::size_t k = 0; k < t.orbits[0].irreps.size(); ++k) {
      EXPECT_EQ(t.orbits[0].irreps[k].regular_multiplicity, base.orbits[0].irreps[k].regular_multiplicity);
      EXPECT_TRUE(are_equivalent(t.orbits[0].irreps[k].rep, base.orbits[0].irreps[k].rep).has_value());
    }
  }
}

TEST(Isotypic, DimensionsAndOrthogonality) {
  const auto g = s3();
  const auto table = enumerate_irreps(g);
  const auto pi = scramble(direct_sum({s3_sign(g), s3_sign(g), s3_standard(g)}), 13);
  const auto comps = isotypic_components(pi, table);
  ASSERT_EQ(comps.size(), 2u);
  EXPECT_EQ(comps[0].label, "o0.r1");
  EXPECT_EQ(comps[0].multiplicity, 2u);
  EXPECT_EQ(comps[0].basis[0].cols(), 2);
  EXPECT_EQ(comps[1].label, "o0.r2");
  EXPECT_EQ(comps[1].basis[0].cols(), 2);
  EXPECT_LT(oracle::max_abs_diff(comps[0].basis[0].adjoint() * comps[1].basis[0], ComplexMatrix::Zero(2, 2)), 1e-10);
  for (const auto& c : comps) EXPECT_TRUE(projection_is_morphism(pi, c.basis));
}

TEST(Isotypic, IndependentOfTableSeed) {
  const auto g = s3();
  const auto pi = scramble(right_regular_rep(g), 2);
  const auto a = isotypic_components(pi, enumerate_irreps(g, {}, 0));
  const auto b = isotypic_components(pi, enumerate_irreps(g, {}, 3));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    const ComplexMatrix pa = a[k].basis[0] * a[k].basis[0].adjoint();
    const ComplexMatrix pb = b[k].basis[0] * b[k].basis[0].adjoint();
    EXPECT_LT(oracle::max_abs_diff(pa, pb), 1e-10);
  }
}
