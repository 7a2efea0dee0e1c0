#include "grpd/io.hpp"

#include <fstream>
#include <sstream>

#include "grpd/error.hpp"

namespace grpd {

namespace {

void append_indented(std::string& out, const Json& value) {
  if (value.is_array() && !value.empty()) {
    out += "[\n";
    for (std::size_t k = 0; k < value.size(); ++k) {
      out += "  ";
      out += value[k].dump();
      out += k + 1 < value.size() ? ",\n" : "\n";
    }
    out += "]";
  } else if (value.is_object() && !value.empty()) {
    out += "{\n";
    std::size_t k = 0;
    for (const auto& [key, item] : value.items()) {
      out += "  ";
      out += Json(key).dump();
      out += ":";
      out += item.dump();
      out += ++k < value.size() ? ",\n" : "\n";
    }
    out += "}";
  } else {
    out += value.dump();
  }
}

const Json& field(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw Error(ErrorCode::ParseError, "missing field '" + where + key + "'");
  return obj.at(key);
}

std::string as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) throw Error(ErrorCode::ParseError, "field '" + where + "' must be a string");
  return j.get<std::string>();
}

const Json& as_array(const Json& j, const std::string& where) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "field '" + where + "' must be an array");
  return j;
}

const Json& as_object(const Json& j, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "field '" + where + "' must be an object");
  return j;
}

double as_number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw Error(ErrorCode::ParseError, "field '" + where + "' must be a number");
  return j.get<double>();
}

std::string at(const std::string& where, std::size_t k) { return where + "[" + std::to_string(k) + "]"; }

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

std::string csv_row(const std::string& label, int i, int j, const std::string& morphism, Complex z) {
  return label + "," + std::to_string(i) + "," + std::to_string(j) + "," + morphism + "," + format_double(z.real()) +
         "," + format_double(z.imag()) + "\n";
}

constexpr const char* kCsvHeader = "pi_label,i,j,morphism,re,im\n";

std::vector<int> local_units(const Subgroupoid& sub, const FiniteGroupoid& g, int u, int v) {
  const auto find = [&](int w) {
    for (std::size_t k = 0; k < sub.units.size(); ++k)
      if (sub.units[k] == w) return static_cast<int>(k);
    throw Error(ErrorCode::UnknownUnit, g.unit_name(w));
  };
  return {find(u), find(v)};
}

}  // namespace

std::string format_double(double x) { return Json(x).dump(); }

std::string canonical_text(const Json& doc) {
  if (!doc.is_object()) {
    std::string out;
    append_indented(out, doc);
    return out + "\n";
  }
  std::string out = "{\n";
  std::size_t k = 0;
  for (const auto& [key, value] : doc.items()) {
    out += Json(key).dump();
    out += ": ";
    append_indented(out, value);
    out += ++k < doc.size() ? ",\n" : "\n";
  }
  out += "}\n";
  return out;
}

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(column));
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write '" + path + "'");
  out << text;
}

Json groupoid_to_json(const FiniteGroupoid& g, const HaarSystem* haar) {
  Json doc = Json::object();
  doc["units"] = g.unit_names();
  Json morphisms = Json::array();
  for (std::size_t x = 0; x < g.morphism_count(); ++x) {
    const int xi = static_cast<int>(x);
    Json m = Json::object();
    m["id"] = g.morphism_name(xi);
    m["src"] = g.unit_name(g.source(xi));
    m["dst"] = g.unit_name(g.target(xi));
    morphisms.push_back(std::move(m));
  }
  doc["morphisms"] = std::move(morphisms);
  Json compose = Json::array();
  for (const auto& t : g.composition_triples()) compose.push_back(Json::array({t.left, t.right, t.result}));
  doc["compose"] = std::move(compose);
  Json inverse = Json::array();
  for (std::size_t x = 0; x < g.morphism_count(); ++x) {
    inverse.push_back(Json::array({g.morphism_name(static_cast<int>(x)), g.morphism_name(g.inverse(static_cast<int>(x)))}));
  }
  doc["inverse"] = std::move(inverse);
  if (haar != nullptr) {
    Json weights = Json::object();
    for (std::size_t x = 0; x < g.morphism_count(); ++x) weights[g.morphism_name(static_cast<int>(x))] = haar->weight[x];
    doc["haar"] = std::move(weights);
  }
  return doc;
}

GroupoidFile groupoid_from_json(const Json& doc) {
  as_object(doc, "<root>");
  std::vector<std::string> units;
  const Json& ju = as_array(field(doc, "units", ""), "units");
  for (std::size_t k = 0; k < ju.size(); ++k) units.push_back(as_string(ju[k], at("units", k)));

  std::vector<MorphismDecl> morphisms;
  const Json& jm = as_array(field(doc, "morphisms", ""), "morphisms");
  for (std::size_t k = 0; k < jm.size(); ++k) {
    const std::string where = at("morphisms", k);
    as_object(jm[k], where);
    morphisms.push_back({as_string(field(jm[k], "id", where + "."), where + ".id"),
                         as_string(field(jm[k], "src", where + "."), where + ".src"),
                         as_string(field(jm[k], "dst", where + "."), where + ".dst")});
  }

  std::vector<CompositionTriple> compose;
  const Json& jc = as_array(field(doc, "compose", ""), "compose");
  for (std::size_t k = 0; k < jc.size(); ++k) {
    const std::string where = at("compose", k);
    if (!jc[k].is_array() || jc[k].size() != 3) throw Error(ErrorCode::ParseError, "field '" + where + "' must be [x, y, xy]");
    compose.push_back({as_string(jc[k][0], where + "[0]"), as_string(jc[k][1], where + "[1]"),
                       as_string(jc[k][2], where + "[2]")});
  }

  std::vector<InversePair> inverses;
  const Json& ji = as_array(field(doc, "inverse", ""), "inverse");
  for (std::size_t k = 0; k < ji.size(); ++k) {
    const std::string where = at("inverse", k);
    if (!ji[k].is_array() || ji[k].size() != 2) throw Error(ErrorCode::ParseError, "field '" + where + "' must be [x, xinv]");
    inverses.push_back({as_string(ji[k][0], where + "[0]"), as_string(ji[k][1], where + "[1]")});
  }

  GroupoidFile file;
  file.groupoid = FiniteGroupoid::build(units, morphisms, compose, inverses);
  if (doc.contains("haar")) {
    const Json& jh = as_object(doc.at("haar"), "haar");
    HaarSystem haar;
    haar.weight.assign(file.groupoid->morphism_count(), 0.0);
    for (const auto& [key, value] : jh.items()) {
      const auto x = file.groupoid->find_morphism(key);
      if (!x) throw Error(ErrorCode::DanglingIdentifier, "haar weight for unknown morphism '" + key + "'");
      haar.weight[*x] = as_number(value, "haar." + key);
    }
    if (jh.size() != file.groupoid->morphism_count()) {
      throw Error(ErrorCode::ParseError, "field 'haar' must give a weight for every morphism");
    }
    file.haar = std::move(haar);
  }
  return file;
}

GroupoidFile load_groupoid(const std::string& path) { return groupoid_from_json(parse_text(read_file(path))); }

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& where) {
  as_array(j, where);
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(as_array(j[0], where + "[0]").size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::string wr = at(where, static_cast<std::size_t>(r));
    const Json& row = as_array(j[r], wr);
    if (static_cast<Eigen::Index>(row.size()) != cols) throw Error(ErrorCode::ParseError, "field '" + wr + "' has ragged length");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const std::string wc = at(wr, static_cast<std::size_t>(c));
      const Json& z = row[c];
      if (!z.is_array() || z.size() != 2) throw Error(ErrorCode::ParseError, "field '" + wc + "' must be [re, im]");
      m(r, c) = Complex(as_number(z[0], wc + "[0]"), as_number(z[1], wc + "[1]"));
    }
  }
  return m;
}

namespace {

Json dims_json(const Representation& rep) {
  const auto& g = *rep.groupoid();
  Json dims = Json::object();
  for (std::size_t u = 0; u < g.unit_count(); ++u) dims[g.unit_name(static_cast<int>(u))] = rep.dim(static_cast<int>(u));
  return dims;
}

Json matrices_json(const Representation& rep) {
  const auto& g = *rep.groupoid();
  Json mats = Json::object();
  for (std::size_t x = 0; x < g.morphism_count(); ++x) {
    mats[g.morphism_name(static_cast<int>(x))] = matrix_to_json(rep.matrix(static_cast<int>(x)));
  }
  return mats;
}

Representation rep_from_fields(const Json& jd, const Json& jmats, const GroupoidPtr& g, const std::string& where) {
  as_object(jd, where + "dims");
  as_object(jmats, where + "matrices");
  std::vector<int> dims(g->unit_count(), -1);
  for (const auto& [key, value] : jd.items()) {
    const auto u = g->find_unit(key);
    if (!u) throw Error(ErrorCode::DanglingIdentifier, "field '" + where + "dims." + key + "' names no unit");
    if (!value.is_number_integer()) throw Error(ErrorCode::ParseError, "field '" + where + "dims." + key + "' must be an integer");
    dims[*u] = value.get<int>();
  }
  for (std::size_t u = 0; u < dims.size(); ++u) {
    if (dims[u] < 0) throw Error(ErrorCode::ParseError, "missing field '" + where + "dims." + g->unit_name(static_cast<int>(u)) + "'");
  }
  std::vector<ComplexMatrix> mats(g->morphism_count());
  std::vector<bool> seen(g->morphism_count(), false);
  for (const auto& [key, value] : jmats.items()) {
    const auto x = g->find_morphism(key);
    if (!x) throw Error(ErrorCode::DanglingIdentifier, "field '" + where + "matrices." + key + "' names no morphism");
    mats[*x] = matrix_from_json(value, where + "matrices." + key);
    // An empty row list still carries the column count of the source fibre.
    if (mats[*x].rows() == 0) mats[*x].resize(0, dims[g->source(*x)]);
    seen[*x] = true;
  }
  for (std::size_t x = 0; x < seen.size(); ++x) {
    if (!seen[x]) {
      throw Error(ErrorCode::ParseError,
                  "missing field '" + where + "matrices." + g->morphism_name(static_cast<int>(x)) + "'");
    }
  }
  return Representation(g, std::move(dims), std::move(mats));
}

}  // namespace

Json representation_to_json(const Representation& rep, const std::string& groupoid_id) {
  Json doc = Json::object();
  doc["groupoid"] = groupoid_id;
  doc["dims"] = dims_json(rep);
  doc["matrices"] = matrices_json(rep);
  return doc;
}

Representation representation_from_json(const Json& doc, const GroupoidPtr& g) {
  as_object(doc, "<root>");
  as_string(field(doc, "groupoid", ""), "groupoid");
  return rep_from_fields(field(doc, "dims", ""), field(doc, "matrices", ""), g, "");
}

Representation load_representation(const std::string& path, const GroupoidPtr& g) {
  return representation_from_json(parse_text(read_file(path)), g);
}

Json irrep_table_to_json(const IrrepTable& table, const std::string& groupoid_id) {
  const auto& g = *table.groupoid;
  Json doc = Json::object();
  doc["groupoid"] = groupoid_id;
  doc["seed"] = table.seed;
  Json orbits = Json::array();
  for (const auto& o : table.orbits) {
    Json jo = Json::object();
    Json units = Json::array();
    for (int u : o.sub.units) units.push_back(g.unit_name(u));
    jo["units"] = std::move(units);
    Json irreps = Json::array();
    for (const auto& irrep : o.irreps) {
      Json ji = Json::object();
      ji["label"] = irrep.label;
      ji["multiplicity"] = irrep.regular_multiplicity;
      ji["dims"] = dims_json(irrep.rep);
      ji["matrices"] = matrices_json(irrep.rep);
      irreps.push_back(std::move(ji));
    }
    jo["irreps"] = std::move(irreps);
    orbits.push_back(std::move(jo));
  }
  doc["orbits"] = std::move(orbits);
  return doc;
}

IrrepTable irrep_table_from_json(const Json& doc, const GroupoidPtr& g) {
  as_object(doc, "<root>");
  as_string(field(doc, "groupoid", ""), "groupoid");
  IrrepTable table;
  table.groupoid = g;
  const Json& seed = field(doc, "seed", "");
  if (!seed.is_number_unsigned() && !seed.is_number_integer()) throw Error(ErrorCode::ParseError, "field 'seed' must be an integer");
  table.seed = seed.get<std::uint64_t>();
  const Json& jo = as_array(field(doc, "orbits", ""), "orbits");
  for (std::size_t k = 0; k < jo.size(); ++k) {
    const std::string where = at("orbits", k);
    const Json& ju = as_array(field(jo[k], "units", where + "."), where + ".units");
    if (ju.empty()) throw Error(ErrorCode::ParseError, "field '" + where + ".units' is empty");
    const auto first = g->find_unit(as_string(ju[0], where + ".units[0]"));
    if (!first) throw Error(ErrorCode::DanglingIdentifier, "field '" + where + ".units[0]' names no unit");
    OrbitIrreps orbit;
    orbit.orbit = static_cast<std::size_t>(g->orbit_of(*first));
    orbit.sub = orbit_subgroupoid(g, orbit.orbit);
    if (ju.size() != orbit.sub.units.size()) {
      throw Error(ErrorCode::ParseError, "field '" + where + ".units' does not list a whole orbit");
    }
    const Json& ji = as_array(field(jo[k], "irreps", where + "."), where + ".irreps");
    for (std::size_t m = 0; m < ji.size(); ++m) {
      const std::string wi = at(where + ".irreps", m) + ".";
      Irrep irrep{as_string(field(ji[m], "label", wi), wi + "label"),
                  rep_from_fields(field(ji[m], "dims", wi), field(ji[m], "matrices", wi), orbit.sub.groupoid, wi), 0};
      const Json& mult = field(ji[m], "multiplicity", wi);
      if (!mult.is_number_integer()) throw Error(ErrorCode::ParseError, "field '" + wi + "multiplicity' must be an integer");
      irrep.regular_multiplicity = mult.get<std::size_t>();
      orbit.irreps.push_back(std::move(irrep));
    }
    table.orbits.push_back(std::move(orbit));
  }
  return table;
}

std::string matrix_elements_csv(const IrrepTable& table, int u, int v) {
  const auto& g = *table.groupoid;
  const OrbitIrreps& orbit = table.orbit_of_unit(u);
  if (!g.co_orbital(u, v)) throw Error(ErrorCode::NotCoOrbital, "'" + g.unit_name(u) + "' and '" + g.unit_name(v) + "'");
  const auto local = local_units(orbit.sub, g, u, v);
  std::string out = kCsvHeader;
  for (const auto& irrep : orbit.irreps) {
    const MatrixElements me = matrix_elements(irrep.rep, local[0], local[1]);
    for (int i = 0; i < me.rows; ++i) {
      for (int j = 0; j < me.cols; ++j) {
        const HomSetFunction& f = me.at(i, j);
        for (std::size_t k = 0; k < f.morphisms.size(); ++k) {
          out += csv_row(irrep.label, i, j, g.morphism_name(orbit.sub.morphisms[f.morphisms[k]]), f.values[k]);
        }
      }
    }
  }
  return out;
}

Json matrix_elements_json(const IrrepTable& table, int u, int v) {
  const auto& g = *table.groupoid;
  const OrbitIrreps& orbit = table.orbit_of_unit(u);
  if (!g.co_orbital(u, v)) throw Error(ErrorCode::NotCoOrbital, "'" + g.unit_name(u) + "' and '" + g.unit_name(v) + "'");
  const auto local = local_units(orbit.sub, g, u, v);
  Json doc = Json::object();
  doc["u"] = g.unit_name(u);
  doc["v"] = g.unit_name(v);
  Json elements = Json::array();
  for (const auto& irrep : orbit.irreps) {
    const MatrixElements me = matrix_elements(irrep.rep, local[0], local[1]);
    for (int i = 0; i < me.rows; ++i) {
      for (int j = 0; j < me.cols; ++j) {
        const HomSetFunction& f = me.at(i, j);
        Json values = Json::object();
        for (std::size_t k = 0; k < f.morphisms.size(); ++k) {
          values[g.morphism_name(orbit.sub.morphisms[f.morphisms[k]])] = complex_json(f.values[k]);
        }
        elements.push_back(Json{{"label", irrep.label}, {"i", i}, {"j", j}, {"values", std::move(values)}});
      }
    }
  }
  doc["elements"] = std::move(elements);
  return doc;
}

std::string gram_csv(const IrrepTable& table, int u, int v) {
  const auto& g = *table.groupoid;
  const OrbitIrreps& orbit = table.orbit_of_unit(u);
  const auto local = local_units(orbit.sub, g, u, v);
  const std::string hom = g.unit_name(u) + ">" + g.unit_name(v);
  std::string out = kCsvHeader;
  for (const auto& a : orbit.irreps) {
    for (const auto& b : orbit.irreps) {
      const ComplexMatrix gram = schur_gram(a.rep, b.rep, local[0], local[1]);
      for (Eigen::Index i = 0; i < gram.rows(); ++i)
        for (Eigen::Index j = 0; j < gram.cols(); ++j)
          out += csv_row(a.label + "|" + b.label, static_cast<int>(i), static_cast<int>(j), hom, gram(i, j));
    }
  }
  return out;
}

Json gram_json(const IrrepTable& table, int u, int v) {
  const auto& g = *table.groupoid;
  const OrbitIrreps& orbit = table.orbit_of_unit(u);
  const auto local = local_units(orbit.sub, g, u, v);
  Json doc = Json::object();
  doc["u"] = g.unit_name(u);
  doc["v"] = g.unit_name(v);
  Json grams = Json::array();
  for (const auto& a : orbit.irreps) {
    for (const auto& b : orbit.irreps) {
      grams.push_back(Json{{"left", a.label}, {"right", b.label}, {"gram", matrix_to_json(schur_gram(a.rep, b.rep, local[0], local[1]))}});
    }
  }
  doc["grams"] = std::move(grams);
  return doc;
}

std::string peter_weyl_csv(const PeterWeylBasis& basis, const FiniteGroupoid& g) {
  std::string out = kCsvHeader;
  for (std::size_t k = 0; k < basis.functions.size(); ++k) {
    const auto& f = basis.functions[k];
    for (std::size_t m = 0; m < f.morphisms.size(); ++m) {
      out += csv_row(basis.labels[k], basis.indices[k].first, basis.indices[k].second, g.morphism_name(f.morphisms[m]),
                     f.values[m]);
    }
  }
  return out;
}

Json peter_weyl_json(const PeterWeylBasis& basis, const FiniteGroupoid& g) {
  Json doc = Json::object();
  doc["u"] = g.unit_name(basis.u);
  doc["v"] = g.unit_name(basis.v);
  doc["hom_set_size"] = basis.hom_set_size;
  doc["gram_error"] = basis.gram_error;
  Json functions = Json::array();
  for (std::size_t k = 0; k < basis.functions.size(); ++k) {
    const auto& f = basis.functions[k];
    Json values = Json::object();
    for (std::size_t m = 0; m < f.morphisms.size(); ++m) values[g.morphism_name(f.morphisms[m])] = complex_json(f.values[m]);
    functions.push_back(Json{{"label", basis.labels[k]}, {"i", basis.indices[k].first}, {"j", basis.indices[k].second},
                             {"values", std::move(values)}});
  }
  doc["functions"] = std::move(functions);
  return doc;
}

}  // namespace grpd
