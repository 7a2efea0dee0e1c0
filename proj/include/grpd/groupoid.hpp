#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace grpd {

class FiniteGroupoid;
using GroupoidPtr = std::shared_ptr<const FiniteGroupoid>;

struct MorphismDecl {
  std::string id;
  std::string src;
  std::string dst;
};

struct CompositionTriple {
  std::string left;    // x
  std::string right;   // y
  std::string result;  // x∘y, defined when src(x) == dst(y)
};

struct InversePair {
  std::string morphism;
  std::string inverse;
};

// A finite groupoid with a dense composition table.
//
// Units and morphisms are addressed by index; indices follow declaration
// order, which is the deterministic total order used for every basis and
// report. Names are kept for interchange and diagnostics.
//
// Fibre notation: range_fibre(u) is G^u (target u), source_fibre(u) is G_u
// (source u) and hom_set(u, v) is G_u^v (source u, target v).
class FiniteGroupoid {
 public:
  // Validates every axiom and throws grpd::Error naming the offending
  // element(s) on failure.
  static GroupoidPtr build(const std::vector<std::string>& units,
                           const std::vector<MorphismDecl>& morphisms,
                           const std::vector<CompositionTriple>& composition,
                           const std::vector<InversePair>& inverses);

  std::size_t unit_count() const { return unit_names_.size(); }
  std::size_t morphism_count() const { return morphism_names_.size(); }

  const std::string& unit_name(int u) const { return unit_names_[u]; }
  const std::string& morphism_name(int x) const { return morphism_names_[x]; }
  const std::vector<std::string>& unit_names() const { return unit_names_; }
  const std::vector<std::string>& morphism_names() const { return morphism_names_; }

  std::optional<int> find_unit(const std::string& name) const;
  std::optional<int> find_morphism(const std::string& name) const;
  // Throws UnknownUnit.
  int unit_index(const std::string& name) const;

  int source(int x) const { return source_[x]; }
  int target(int x) const { return target_[x]; }
  int inverse(int x) const { return inverse_[x]; }
  int unit_morphism(int u) const { return unit_morphism_[u]; }
  bool is_unit_morphism(int x) const { return unit_morphism_[source_[x]] == x; }

  bool composable(int x, int y) const { return source_[x] == target_[y]; }
  // x∘y; -1 when not composable.
  int compose(int x, int y) const { return table_[static_cast<std::size_t>(x) * morphism_count() + y]; }

  const std::vector<int>& range_fibre(int u) const { return range_fibre_[u]; }
  const std::vector<int>& source_fibre(int u) const { return source_fibre_[u]; }
  // Throws UnknownUnit for out-of-range indices.
  const std::vector<int>& hom_set(int u, int v) const;

  const std::vector<std::vector<int>>& orbits() const { return orbits_; }
  int orbit_of(int u) const { return orbit_of_[u]; }
  bool co_orbital(int u, int v) const { return orbit_of_[u] == orbit_of_[v]; }
  bool is_transitive() const { return orbits_.size() == 1; }

  // The composition table as explicit triples, in (x, y) morphism order.
  std::vector<CompositionTriple> composition_triples() const;

  friend bool operator==(const FiniteGroupoid& a, const FiniteGroupoid& b);

 private:
  FiniteGroupoid() = default;
  void index_fibres();

  std::vector<std::string> unit_names_;
  std::vector<std::string> morphism_names_;
  std::unordered_map<std::string, int> unit_lookup_;
  std::unordered_map<std::string, int> morphism_lookup_;
  std::vector<int> source_;
  std::vector<int> target_;
  std::vector<int> inverse_;
  std::vector<int> unit_morphism_;
  std::vector<int> table_;
  std::vector<std::vector<int>> range_fibre_;
  std::vector<std::vector<int>> source_fibre_;
  std::vector<std::vector<int>> hom_sets_;  // [u * units + v]
  std::vector<std::vector<int>> orbits_;
  std::vector<int> orbit_of_;
};

bool same_groupoid(const GroupoidPtr& a, const GroupoidPtr& b);

// Full subgroupoid on one orbit. `units[i]` and `morphisms[k]` give the parent
// index of the subgroupoid's i-th unit and k-th morphism.
struct Subgroupoid {
  GroupoidPtr groupoid;
  std::vector<int> units;
  std::vector<int> morphisms;
};

Subgroupoid orbit_subgroupoid(const GroupoidPtr& g, std::size_t orbit);

// Group given by its Cayley table: table[a][b] = a·b.
struct CayleyTable {
  std::vector<std::vector<int>> table;
  std::vector<std::string> names;  // optional; defaults to "g0", "g1", ...
};

CayleyTable cyclic_group(int n);
// Permutations of {0..n-1} in lexicographic order; product is composition
// (a·b)(i) = a(b(i)).
CayleyTable symmetric_group(int n);

GroupoidPtr pair_groupoid(int n);
GroupoidPtr group_groupoid(const CayleyTable& group);
GroupoidPtr product_groupoid(const GroupoidPtr& a, const GroupoidPtr& b);
GroupoidPtr disjoint_union(const std::vector<GroupoidPtr>& parts);
// action[g][p] = g·p. Morphisms (g, p): p -> g·p.
GroupoidPtr action_groupoid(const CayleyTable& group, int points,
                            const std::vector<std::vector<int>>& action);

// Uniform normalized Haar system. weight[x] is λ^{r(x)}(x); the source-side
// weight is λ_{s(x)}(x) = λ^{s(x)}(x⁻¹).
struct HaarSystem {
  std::vector<double> weight;

  double range_weight(int x) const { return weight[x]; }
  double source_weight(const FiniteGroupoid& g, int x) const { return weight[g.inverse(x)]; }
};

HaarSystem normalized_haar(const FiniteGroupoid& g);

struct HaarCheck {
  double normalization_error = 0.0;  // max over u of |Σ λ^u − 1|, |Σ λ_u − 1|
  double invariance_error = 0.0;     // max |λ^{r(x)}(xy) − λ^{s(x)}(y)|
  int worst_morphism = -1;
};

HaarCheck check_haar(const FiniteGroupoid& g, const HaarSystem& haar);

}  // namespace grpd
