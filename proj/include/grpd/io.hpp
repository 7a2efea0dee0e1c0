#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "grpd/harmonic.hpp"

namespace grpd {

using Json = nlohmann::ordered_json;

/// Canonical text: one top-level key per line, containers below the top
/// level written compactly one element per line, LF endings, trailing LF.
std::string canonical_text(const Json& doc);

/// Parses JSON text; syntax errors become ParseError naming line and column.
Json parse_text(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

struct GroupoidFile {
  GroupoidPtr groupoid;
  std::optional<HaarSystem> haar;  // only when the file carries explicit weights
};

Json groupoid_to_json(const FiniteGroupoid& g, const HaarSystem* haar = nullptr);
GroupoidFile groupoid_from_json(const Json& doc);
GroupoidFile load_groupoid(const std::string& path);

/// [[ [re, im], ... ], ...] row by row.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j, const std::string& field);

Json representation_to_json(const Representation& rep, const std::string& groupoid_id);
Representation representation_from_json(const Json& doc, const GroupoidPtr& g);
Representation load_representation(const std::string& path, const GroupoidPtr& g);

Json irrep_table_to_json(const IrrepTable& table, const std::string& groupoid_id);
IrrepTable irrep_table_from_json(const Json& doc, const GroupoidPtr& g);

/// Rows pi_label,i,j,morphism,re,im for every irrep of the orbit on G_u^v.
std::string matrix_elements_csv(const IrrepTable& table, int u, int v);
Json matrix_elements_json(const IrrepTable& table, int u, int v);

/// Gram of every ordered irrep pair of the orbit on G_u^v. pi_label is
/// "a|b", i and j index the Gram, morphism names the hom set "u>v".
std::string gram_csv(const IrrepTable& table, int u, int v);
Json gram_json(const IrrepTable& table, int u, int v);

/// Scaled basis functions; i and j are the matrix-element indices.
std::string peter_weyl_csv(const PeterWeylBasis& basis, const FiniteGroupoid& g);
Json peter_weyl_json(const PeterWeylBasis& basis, const FiniteGroupoid& g);

/// Shortest round-trip decimal form of a double, as used in every output.
std::string format_double(double x);

}  // namespace grpd
