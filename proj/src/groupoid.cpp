#include "grpd/groupoid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "grpd/error.hpp"

namespace grpd {

namespace {

std::unordered_map<std::string, int> index_names(const std::vector<std::string>& names, const char* what) {
  std::unordered_map<std::string, int> lookup;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!lookup.emplace(names[i], static_cast<int>(i)).second) {
      throw Error(ErrorCode::DuplicateIdentifier, std::string(what) + " '" + names[i] + "' declared twice");
    }
  }
  return lookup;
}

int lookup_or_throw(const std::unordered_map<std::string, int>& lookup, const std::string& name,
                    const std::string& context) {
  auto it = lookup.find(name);
  if (it == lookup.end()) {
    throw Error(ErrorCode::DanglingIdentifier, "'" + name + "' in " + context + " is not declared");
  }
  return it->second;
}

std::string triple_text(const std::string& x, const std::string& y, const std::string& xy) {
  return "(" + x + ", " + y + ", " + xy + ")";
}

}  // namespace

GroupoidPtr FiniteGroupoid::build(const std::vector<std::string>& units,
                                  const std::vector<MorphismDecl>& morphisms,
                                  const std::vector<CompositionTriple>& composition,
                                  const std::vector<InversePair>& inverses) {
  if (units.empty()) throw Error(ErrorCode::EmptyUnitSpace, "groupoid has no units");

  auto g = std::shared_ptr<FiniteGroupoid>(new FiniteGroupoid());
  g->unit_names_ = units;
  g->unit_lookup_ = index_names(units, "unit");

  std::vector<std::string> names;
  names.reserve(morphisms.size());
  for (const auto& m : morphisms) names.push_back(m.id);
  g->morphism_names_ = names;
  g->morphism_lookup_ = index_names(names, "morphism");

  const std::size_t n = morphisms.size();
  g->source_.resize(n);
  g->target_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    g->source_[i] = lookup_or_throw(g->unit_lookup_, morphisms[i].src, "src of morphism '" + morphisms[i].id + "'");
    g->target_[i] = lookup_or_throw(g->unit_lookup_, morphisms[i].dst, "dst of morphism '" + morphisms[i].id + "'");
  }

  g->table_.assign(n * n, -1);
  for (const auto& t : composition) {
    const std::string ctx = "composition triple " + triple_text(t.left, t.right, t.result);
    const int x = lookup_or_throw(g->morphism_lookup_, t.left, ctx);
    const int y = lookup_or_throw(g->morphism_lookup_, t.right, ctx);
    const int xy = lookup_or_throw(g->morphism_lookup_, t.result, ctx);
    if (g->source_[x] != g->target_[y]) {
      throw Error(ErrorCode::InconsistentComposite, ctx + ": src(" + t.left + ") != dst(" + t.right + ")");
    }
    if (g->source_[xy] != g->source_[y] || g->target_[xy] != g->target_[x]) {
      throw Error(ErrorCode::InconsistentComposite, ctx + ": result has wrong source or target");
    }
    int& slot = g->table_[static_cast<std::size_t>(x) * n + y];
    if (slot != -1 && slot != xy) {
      throw Error(ErrorCode::InconsistentComposite, ctx + " conflicts with earlier result '" + names[slot] + "'");
    }
    slot = xy;
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (g->source_[x] == g->target_[y] && g->table_[x * n + y] == -1) {
        throw Error(ErrorCode::MissingComposite, "no composition triple for (" + names[x] + ", " + names[y] + ")");
      }
    }
  }

  // Identities: every idempotent at u must be a two-sided identity, and one must exist.
  g->unit_morphism_.assign(units.size(), -1);
  for (std::size_t x = 0; x < n; ++x) {
    const int u = g->source_[x];
    if (u != g->target_[x] || g->table_[x * n + x] != static_cast<int>(x)) continue;
    for (std::size_t y = 0; y < n; ++y) {
      if (g->target_[y] == u && g->table_[x * n + y] != static_cast<int>(y)) {
        throw Error(ErrorCode::UnitViolation, "idempotent '" + names[x] + "' at unit '" + units[u] +
                                                  "' is not a left identity: " + names[x] + "∘" + names[y] +
                                                  " = " + names[g->table_[x * n + y]]);
      }
      if (g->source_[y] == u && g->table_[y * n + x] != static_cast<int>(y)) {
        throw Error(ErrorCode::UnitViolation, "idempotent '" + names[x] + "' at unit '" + units[u] +
                                                  "' is not a right identity: " + names[y] + "∘" + names[x] +
                                                  " = " + names[g->table_[y * n + x]]);
      }
    }
    g->unit_morphism_[u] = static_cast<int>(x);
  }
  for (std::size_t u = 0; u < units.size(); ++u) {
    if (g->unit_morphism_[u] == -1) {
      throw Error(ErrorCode::UnitViolation, "no identity morphism at unit '" + units[u] + "'");
    }
  }

  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      const int xy = g->table_[x * n + y];
      if (xy < 0) continue;
      for (std::size_t z = 0; z < n; ++z) {
        const int yz = g->table_[y * n + z];
        if (yz < 0) continue;
        const int left = g->table_[static_cast<std::size_t>(xy) * n + z];
        const int right = g->table_[x * n + yz];
        if (left != right) {
          throw Error(ErrorCode::AssociativityViolation,
                      "(" + names[x] + "∘" + names[y] + ")∘" + names[z] + " = " + names[left] + " but " + names[x] +
                          "∘(" + names[y] + "∘" + names[z] + ") = " + names[right] + "; check triples " +
                          triple_text(names[x], names[y], names[xy]) + " and " +
                          triple_text(names[y], names[z], names[yz]));
        }
      }
    }
  }

  g->inverse_.assign(n, -1);
  for (const auto& p : inverses) {
    const std::string ctx = "inverse pair [" + p.morphism + ", " + p.inverse + "]";
    const int x = lookup_or_throw(g->morphism_lookup_, p.morphism, ctx);
    const int xi = lookup_or_throw(g->morphism_lookup_, p.inverse, ctx);
    if (g->inverse_[x] != -1 && g->inverse_[x] != xi) {
      throw Error(ErrorCode::InverseViolation, ctx + " conflicts with earlier inverse '" + names[g->inverse_[x]] + "'");
    }
    g->inverse_[x] = xi;
  }
  for (std::size_t x = 0; x < n; ++x) {
    const int xi = g->inverse_[x];
    if (xi == -1) throw Error(ErrorCode::InverseViolation, "no inverse declared for '" + names[x] + "'");
    const bool right_ok = g->source_[x] == g->target_[xi] &&
                          g->table_[x * n + xi] == g->unit_morphism_[g->target_[x]];
    const bool left_ok = g->source_[xi] == g->target_[x] &&
                         g->table_[static_cast<std::size_t>(xi) * n + x] == g->unit_morphism_[g->source_[x]];
    if (!right_ok || !left_ok) {
      throw Error(ErrorCode::InverseViolation, "'" + names[xi] + "' is not an inverse of '" + names[x] + "'");
    }
  }

  g->index_fibres();
  return g;
}

void FiniteGroupoid::index_fibres() {
  const std::size_t nu = unit_count();
  range_fibre_.assign(nu, {});
  source_fibre_.assign(nu, {});
  hom_sets_.assign(nu * nu, {});
  for (std::size_t x = 0; x < morphism_count(); ++x) {
    range_fibre_[target_[x]].push_back(static_cast<int>(x));
    source_fibre_[source_[x]].push_back(static_cast<int>(x));
    hom_sets_[static_cast<std::size_t>(source_[x]) * nu + target_[x]].push_back(static_cast<int>(x));
  }

  // Reachability classes; ordered by their smallest unit.
  orbit_of_.assign(nu, -1);
  orbits_.clear();
  for (std::size_t u = 0; u < nu; ++u) {
    if (orbit_of_[u] != -1) continue;
    const int id = static_cast<int>(orbits_.size());
    std::vector<int> cell;
    for (int x : source_fibre_[u]) {
      const int v = target_[x];
      if (orbit_of_[v] == -1) {
        orbit_of_[v] = id;
        cell.push_back(v);
      }
    }
    std::sort(cell.begin(), cell.end());
    orbits_.push_back(std::move(cell));
  }
}

std::optional<int> FiniteGroupoid::find_unit(const std::string& name) const {
  auto it = unit_lookup_.find(name);
  if (it == unit_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> FiniteGroupoid::find_morphism(const std::string& name) const {
  auto it = morphism_lookup_.find(name);
  if (it == morphism_lookup_.end()) return std::nullopt;
  return it->second;
}

int FiniteGroupoid::unit_index(const std::string& name) const {
  auto u = find_unit(name);
  if (!u) throw Error(ErrorCode::UnknownUnit, "'" + name + "'");
  return *u;
}

const std::vector<int>& FiniteGroupoid::hom_set(int u, int v) const {
  const int nu = static_cast<int>(unit_count());
  if (u < 0 || u >= nu) throw Error(ErrorCode::UnknownUnit, "unit index " + std::to_string(u));
  if (v < 0 || v >= nu) throw Error(ErrorCode::UnknownUnit, "unit index " + std::to_string(v));
  return hom_sets_[static_cast<std::size_t>(u) * unit_count() + v];
}

std::vector<CompositionTriple> FiniteGroupoid::composition_triples() const {
  std::vector<CompositionTriple> out;
  const std::size_t n = morphism_count();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      const int xy = table_[x * n + y];
      if (xy >= 0) out.push_back({morphism_names_[x], morphism_names_[y], morphism_names_[xy]});
    }
  }
  return out;
}

bool operator==(const FiniteGroupoid& a, const FiniteGroupoid& b) {
  return a.unit_names_ == b.unit_names_ && a.morphism_names_ == b.morphism_names_ && a.source_ == b.source_ &&
         a.target_ == b.target_ && a.inverse_ == b.inverse_ && a.table_ == b.table_;
}

bool same_groupoid(const GroupoidPtr& a, const GroupoidPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

Subgroupoid orbit_subgroupoid(const GroupoidPtr& g, std::size_t orbit) {
  if (orbit >= g->orbits().size()) {
    throw Error(ErrorCode::IndexOutOfRange, "orbit " + std::to_string(orbit));
  }
  Subgroupoid sub;
  sub.units = g->orbits()[orbit];
  std::vector<std::string> units;
  for (int u : sub.units) units.push_back(g->unit_name(u));

  std::vector<MorphismDecl> morphisms;
  for (std::size_t x = 0; x < g->morphism_count(); ++x) {
    if (g->orbit_of(g->source(static_cast<int>(x))) == static_cast<int>(orbit)) {
      sub.morphisms.push_back(static_cast<int>(x));
      morphisms.push_back({g->morphism_name(static_cast<int>(x)), g->unit_name(g->source(static_cast<int>(x))),
                           g->unit_name(g->target(static_cast<int>(x)))});
    }
  }
  std::vector<CompositionTriple> triples;
  for (int x : sub.morphisms) {
    for (int y : sub.morphisms) {
      const int xy = g->compose(x, y);
      if (xy >= 0) triples.push_back({g->morphism_name(x), g->morphism_name(y), g->morphism_name(xy)});
    }
  }
  std::vector<InversePair> inverses;
  for (int x : sub.morphisms) inverses.push_back({g->morphism_name(x), g->morphism_name(g->inverse(x))});
  sub.groupoid = FiniteGroupoid::build(units, morphisms, triples, inverses);
  return sub;
}

// ---------------------------------------------------------------------------
// Constructions

namespace {

std::vector<std::string> group_names(const CayleyTable& group) {
  if (!group.names.empty()) return group.names;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < group.table.size(); ++i) names.push_back("g" + std::to_string(i));
  return names;
}

// Returns the identity index; throws NotAGroup.
int check_group(const CayleyTable& group) {
  const int n = static_cast<int>(group.table.size());
  if (n == 0) throw Error(ErrorCode::NotAGroup, "empty Cayley table");
  if (!group.names.empty() && static_cast<int>(group.names.size()) != n) {
    throw Error(ErrorCode::NotAGroup, "name count does not match table size");
  }
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(group.table[a].size()) != n) {
      throw Error(ErrorCode::NotAGroup, "row " + std::to_string(a) + " has wrong length");
    }
    for (int b = 0; b < n; ++b) {
      if (group.table[a][b] < 0 || group.table[a][b] >= n) {
        throw Error(ErrorCode::NotAGroup, "entry (" + std::to_string(a) + "," + std::to_string(b) + ") out of range");
      }
    }
  }
  int identity = -1;
  for (int e = 0; e < n && identity < 0; ++e) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a) ok = group.table[e][a] == a && group.table[a][e] == a;
    if (ok) identity = e;
  }
  if (identity < 0) throw Error(ErrorCode::NotAGroup, "no identity element");
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        if (group.table[group.table[a][b]][c] != group.table[a][group.table[b][c]]) {
          throw Error(ErrorCode::NotAGroup, "not associative at (" + std::to_string(a) + "," + std::to_string(b) +
                                                "," + std::to_string(c) + ")");
        }
      }
    }
  }
  for (int a = 0; a < n; ++a) {
    bool has = false;
    for (int b = 0; b < n && !has; ++b) has = group.table[a][b] == identity && group.table[b][a] == identity;
    if (!has) throw Error(ErrorCode::NotAGroup, "element " + std::to_string(a) + " has no inverse");
  }
  return identity;
}

int group_inverse(const CayleyTable& group, int a, int identity) {
  for (std::size_t b = 0; b < group.table.size(); ++b) {
    if (group.table[a][b] == identity) return static_cast<int>(b);
  }
  return -1;
}

}  // namespace

CayleyTable cyclic_group(int n) {
  CayleyTable g;
  g.table.assign(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) g.table[a][b] = (a + b) % n;
    g.names.push_back("r" + std::to_string(a));
  }
  return g;
}

CayleyTable symmetric_group(int n) {
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));

  CayleyTable g;
  const int m = static_cast<int>(perms.size());
  g.table.assign(m, std::vector<int>(m));
  for (int a = 0; a < m; ++a) {
    std::string name = "s";
    for (int v : perms[a]) name += std::to_string(v);
    g.names.push_back(name);
    for (int b = 0; b < m; ++b) {
      std::vector<int> c(n);
      for (int i = 0; i < n; ++i) c[i] = perms[a][perms[b][i]];
      g.table[a][b] = static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  }
  return g;
}

GroupoidPtr pair_groupoid(int n) {
  if (n <= 0) throw Error(ErrorCode::EmptyUnitSpace, "pair groupoid needs n >= 1");
  std::vector<std::string> units;
  for (int i = 0; i < n; ++i) units.push_back(std::to_string(i));
  auto name = [](int i, int j) { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; };
  std::vector<MorphismDecl> morphisms;
  std::vector<CompositionTriple> triples;
  std::vector<InversePair> inverses;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      morphisms.push_back({name(i, j), units[j], units[i]});
      inverses.push_back({name(i, j), name(j, i)});
      for (int k = 0; k < n; ++k) triples.push_back({name(i, j), name(j, k), name(i, k)});
    }
  }
  return FiniteGroupoid::build(units, morphisms, triples, inverses);
}

GroupoidPtr group_groupoid(const CayleyTable& group) {
  const int identity = check_group(group);
  const auto names = group_names(group);
  const int n = static_cast<int>(group.table.size());
  const std::vector<std::string> units{"u"};
  std::vector<MorphismDecl> morphisms;
  std::vector<CompositionTriple> triples;
  std::vector<InversePair> inverses;
  for (int a = 0; a < n; ++a) {
    morphisms.push_back({names[a], "u", "u"});
    inverses.push_back({names[a], names[group_inverse(group, a, identity)]});
    for (int b = 0; b < n; ++b) triples.push_back({names[a], names[b], names[group.table[a][b]]});
  }
  return FiniteGroupoid::build(units, morphisms, triples, inverses);
}

GroupoidPtr product_groupoid(const GroupoidPtr& a, const GroupoidPtr& b) {
  auto pair_name = [](const std::string& l, const std::string& r) { return "(" + l + "," + r + ")"; };
  std::vector<std::string> units;
  for (const auto& ua : a->unit_names())
    for (const auto& ub : b->unit_names()) units.push_back(pair_name(ua, ub));

  const int na = static_cast<int>(a->morphism_count());
  const int nb = static_cast<int>(b->morphism_count());
  std::vector<MorphismDecl> morphisms;
  std::vector<InversePair> inverses;
  std::vector<CompositionTriple> triples;
  for (int x = 0; x < na; ++x) {
    for (int y = 0; y < nb; ++y) {
      const auto id = pair_name(a->morphism_name(x), b->morphism_name(y));
      morphisms.push_back({id, pair_name(a->unit_name(a->source(x)), b->unit_name(b->source(y))),
                           pair_name(a->unit_name(a->target(x)), b->unit_name(b->target(y)))});
      inverses.push_back({id, pair_name(a->morphism_name(a->inverse(x)), b->morphism_name(b->inverse(y)))});
    }
  }
  for (int x1 = 0; x1 < na; ++x1)
    for (int y1 = 0; y1 < nb; ++y1)
      for (int x2 = 0; x2 < na; ++x2) {
        const int x = a->compose(x1, x2);
        if (x < 0) continue;
        for (int y2 = 0; y2 < nb; ++y2) {
          const int y = b->compose(y1, y2);
          if (y < 0) continue;
          triples.push_back({pair_name(a->morphism_name(x1), b->morphism_name(y1)),
                             pair_name(a->morphism_name(x2), b->morphism_name(y2)),
                             pair_name(a->morphism_name(x), b->morphism_name(y))});
        }
      }
  return FiniteGroupoid::build(units, morphisms, triples, inverses);
}

GroupoidPtr disjoint_union(const std::vector<GroupoidPtr>& parts) {
  if (parts.empty()) throw Error(ErrorCode::EmptyUnitSpace, "disjoint union of nothing");
  std::vector<std::string> units;
  std::vector<MorphismDecl> morphisms;
  std::vector<CompositionTriple> triples;
  std::vector<InversePair> inverses;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto& p = *parts[k];
    const std::string prefix = std::to_string(k) + ".";
    for (const auto& u : p.unit_names()) units.push_back(prefix + u);
    for (std::size_t x = 0; x < p.morphism_count(); ++x) {
      const int xi = static_cast<int>(x);
      morphisms.push_back({prefix + p.morphism_name(xi), prefix + p.unit_name(p.source(xi)),
                           prefix + p.unit_name(p.target(xi))});
      inverses.push_back({prefix + p.morphism_name(xi), prefix + p.morphism_name(p.inverse(xi))});
    }
    for (const auto& t : p.composition_triples()) {
      triples.push_back({prefix + t.left, prefix + t.right, prefix + t.result});
    }
  }
  return FiniteGroupoid::build(units, morphisms, triples, inverses);
}

GroupoidPtr action_groupoid(const CayleyTable& group, int points, const std::vector<std::vector<int>>& action) {
  const int identity = check_group(group);
  const int n = static_cast<int>(group.table.size());
  if (points <= 0) throw Error(ErrorCode::EmptyUnitSpace, "action on an empty set");
  if (static_cast<int>(action.size()) != n) throw Error(ErrorCode::NotAnAction, "action table has wrong row count");
  for (int g = 0; g < n; ++g) {
    if (static_cast<int>(action[g].size()) != points) {
      throw Error(ErrorCode::NotAnAction, "action row " + std::to_string(g) + " has wrong length");
    }
    for (int p = 0; p < points; ++p) {
      if (action[g][p] < 0 || action[g][p] >= points) {
        throw Error(ErrorCode::NotAnAction, "g" + std::to_string(g) + " sends point " + std::to_string(p) +
                                                " out of range");
      }
    }
  }
  for (int p = 0; p < points; ++p) {
    if (action[identity][p] != p) throw Error(ErrorCode::NotAnAction, "identity moves point " + std::to_string(p));
  }
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int p = 0; p < points; ++p)
        if (action[group.table[g][h]][p] != action[g][action[h][p]]) {
          throw Error(ErrorCode::NotAnAction, "(g" + std::to_string(g) + "·g" + std::to_string(h) + ")·p" +
                                                  std::to_string(p) + " != g" + std::to_string(g) + "·(g" +
                                                  std::to_string(h) + "·p" + std::to_string(p) + ")");
        }

  const auto names = group_names(group);
  std::vector<std::string> units;
  for (int p = 0; p < points; ++p) units.push_back("p" + std::to_string(p));
  auto name = [&](int g, int p) { return "(" + names[g] + "," + units[p] + ")"; };
  std::vector<MorphismDecl> morphisms;
  std::vector<InversePair> inverses;
  std::vector<CompositionTriple> triples;
  for (int g = 0; g < n; ++g) {
    for (int p = 0; p < points; ++p) {
      morphisms.push_back({name(g, p), units[p], units[action[g][p]]});
      inverses.push_back({name(g, p), name(group_inverse(group, g, identity), action[g][p])});
      // (h, g·p) ∘ (g, p) = (hg, p)
      for (int h = 0; h < n; ++h) triples.push_back({name(h, action[g][p]), name(g, p), name(group.table[h][g], p)});
    }
  }
  return FiniteGroupoid::build(units, morphisms, triples, inverses);
}

// ---------------------------------------------------------------------------
// Haar system

HaarSystem normalized_haar(const FiniteGroupoid& g) {
  HaarSystem h;
  h.weight.resize(g.morphism_count());
  for (std::size_t x = 0; x < g.morphism_count(); ++x) {
    h.weight[x] = 1.0 / static_cast<double>(g.range_fibre(g.target(static_cast<int>(x))).size());
  }
  return h;
}

HaarCheck check_haar(const FiniteGroupoid& g, const HaarSystem& haar) {
  HaarCheck check;
  for (std::size_t u = 0; u < g.unit_count(); ++u) {
    double range_mass = 0.0;
    double source_mass = 0.0;
    for (int x : g.range_fibre(static_cast<int>(u))) range_mass += haar.range_weight(x);
    for (int x : g.source_fibre(static_cast<int>(u))) source_mass += haar.source_weight(g, x);
    check.normalization_error =
        std::max({check.normalization_error, std::abs(range_mass - 1.0), std::abs(source_mass - 1.0)});
  }
  // y ↦ xy maps G^{s(x)} onto G^{r(x)}.
  for (std::size_t x = 0; x < g.morphism_count(); ++x) {
    const int xi = static_cast<int>(x);
    for (int y : g.range_fibre(g.source(xi))) {
      const double err = std::abs(haar.range_weight(g.compose(xi, y)) - haar.range_weight(y));
      if (err > check.invariance_error) {
        check.invariance_error = err;
        check.worst_morphism = xi;
      }
    }
  }
  return check;
}

}  // namespace grpd
