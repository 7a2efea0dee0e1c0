#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "grpd/error.hpp"
#include "grpd/verify.hpp"

namespace fs = std::filesystem;
using namespace grpd;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kInvalid = 2;
constexpr int kVerifyFailed = 3;

struct RunConfig {
  Tolerances tol;
  std::uint64_t seed = 0;
  std::string out;
  int instances = 100;
};

std::string output_dir(const RunConfig& cfg) {
  if (!cfg.out.empty()) return cfg.out;
  if (const char* env = std::getenv("GRPD_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return ".";
}

std::string write_output(const RunConfig& cfg, const std::string& name, const std::string& text) {
  const fs::path dir = output_dir(cfg);
  fs::create_directories(dir);
  const fs::path path = dir / name;
  write_file(path.string(), text);
  return path.string();
}

std::string stem(const std::string& path) { return fs::path(path).stem().string(); }

std::string settings_line(const RunConfig& cfg) {
  return "seed: " + std::to_string(cfg.seed) + "\ntolerances: unitary=" + format_double(cfg.tol.unitary) +
         " rank=" + format_double(cfg.tol.rank) + " cluster=" + format_double(cfg.tol.cluster) + "\n";
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ParseError:
    case ErrorCode::UnknownArtifact:
    case ErrorCode::UnsupportedFormat:
      return kUsage;
    default:
      return kInvalid;
  }
}

// ---------------------------------------------------------------------------
// Fixtures

CayleyTable s3_table() { return symmetric_group(3); }

std::vector<std::vector<int>> permutation_action(const CayleyTable& group, int points) {
  std::vector<std::vector<int>> action;
  for (const auto& name : group.names) {
    std::vector<int> row;
    for (int p = 0; p < points; ++p) row.push_back(name[1 + p] - '0');
    action.push_back(row);
  }
  return action;
}

GroupoidPtr fixture_groupoid(const std::string& name) {
  if (name == "trivial") return group_groupoid(cyclic_group(1));
  if (name == "z2") return group_groupoid(cyclic_group(2));
  if (name == "z3") return group_groupoid(cyclic_group(3));
  if (name == "s3") return group_groupoid(s3_table());
  if (name == "pair3") return pair_groupoid(3);
  if (name == "pair2xz2") return product_groupoid(pair_groupoid(2), group_groupoid(cyclic_group(2)));
  if (name == "union_z2_z3") return disjoint_union({group_groupoid(cyclic_group(2)), group_groupoid(cyclic_group(3))});
  if (name == "action_s3") return action_groupoid(s3_table(), 3, permutation_action(s3_table(), 3));
  if (name == "action_z2") return action_groupoid(cyclic_group(2), 2, {{0, 1}, {1, 0}});
  throw Error(ErrorCode::UnknownArtifact, "no fixture named '" + name + "'");
}

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = {"trivial", "z2",          "z3",        "s3",       "pair3",
                                                 "pair2xz2", "union_z2_z3", "action_s3", "action_z2"};
  return names;
}

// Normalized but not left invariant: the unit morphism of each range fibre
// carries half the mass.
HaarSystem skewed_haar(const FiniteGroupoid& g) {
  HaarSystem h;
  h.weight.assign(g.morphism_count(), 0.0);
  for (std::size_t u = 0; u < g.unit_count(); ++u) {
    const auto& fibre = g.range_fibre(static_cast<int>(u));
    for (int x : fibre) h.weight[x] = g.is_unit_morphism(x) ? 0.5 : 0.5 / static_cast<double>(fibre.size() - 1);
  }
  return h;
}

struct RepFixture {
  std::string groupoid;
  Representation rep;
};

RepFixture fixture_rep(const std::string& name, const RunConfig& cfg) {
  if (name == "z3_regular") return {"z3", right_regular_rep(fixture_groupoid("z3"))};
  if (name == "s3_regular") return {"s3", right_regular_rep(fixture_groupoid("s3"))};
  if (name == "s3_mixed") {
    const GroupoidPtr g = fixture_groupoid("s3");
    const IrrepTable table = enumerate_irreps(g, cfg.tol, cfg.seed);
    const auto& irreps = table.orbits.front().irreps;
    // Irreps live on the orbit subgroupoid; s3 has one orbit with identical labels.
    const Representation rho(g, irreps[1].rep.dims(), irreps[1].rep.matrices());
    const Representation sigma(g, irreps[2].rep.dims(), irreps[2].rep.matrices());
    return {"s3", scramble(direct_sum({rho, rho, sigma}), 7)};
  }
  throw Error(ErrorCode::UnknownArtifact, "no representation fixture named '" + name + "'");
}

const std::vector<std::string>& rep_fixture_names() {
  static const std::vector<std::string> names = {"z3_regular", "s3_regular", "s3_mixed"};
  return names;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_validate(const std::string& path, const std::optional<std::string>& rep_path, const RunConfig& cfg) {
  const GroupoidFile file = load_groupoid(path);
  const auto& g = *file.groupoid;
  std::cout << "groupoid: " << stem(path) << "\n";
  std::cout << "units: " << g.unit_count() << "\nmorphisms: " << g.morphism_count() << "\norbits: " << g.orbits().size()
            << "\n";
  int code = kOk;
  if (file.haar) {
    const HaarCheck check = check_haar(g, *file.haar);
    std::cout << "haar: normalization=" << format_double(check.normalization_error)
              << " invariance=" << format_double(check.invariance_error) << "\n";
  }
  if (rep_path) {
    const Representation rep = load_representation(*rep_path, file.groupoid);
    const ValidationReport report = validate_representation(rep, cfg.tol.unitary);
    std::cout << "representation: " << stem(*rep_path) << "\n";
    std::cout << "  identity=" << format_double(report.identity) << " composition=" << format_double(report.composition)
              << " unitarity=" << format_double(report.unitarity) << "\n";
    if (!report.passes) {
      std::cout << "  worst morphism: " << (report.worst_morphism >= 0 ? g.morphism_name(report.worst_morphism) : "-")
                << "\n";
      code = kInvalid;
    }
  }
  std::cout << (code == kOk ? "valid" : "invalid") << "\n";
  return code;
}

int cmd_irreps(const std::string& path, const RunConfig& cfg) {
  const GroupoidFile file = load_groupoid(path);
  const auto& g = *file.groupoid;
  const IrrepTable table = enumerate_irreps(file.groupoid, cfg.tol, cfg.seed);
  const std::string id = stem(path);
  std::cout << "groupoid: " << id << "\n" << settings_line(cfg);
  std::cout << table.orbits.size() << (table.orbits.size() == 1 ? " orbit" : " orbits") << "\n";
  for (const auto& o : table.orbits) {
    std::cout << "orbit " << o.orbit << ": units";
    for (int u : o.sub.units) std::cout << " " << g.unit_name(u);
    std::cout << "; " << o.irreps.size() << (o.irreps.size() == 1 ? " irrep" : " irreps") << "; dims";
    for (std::size_t k = 0; k < o.irreps.size(); ++k) std::cout << (k == 0 ? " " : ",") << o.irreps[k].rep.dim(0);
    std::cout << "\n";
    for (const auto& irrep : o.irreps) {
      std::cout << "  " << irrep.label << " d=" << irrep.rep.dim(0) << " regular multiplicity=" << irrep.regular_multiplicity
                << "\n";
    }
  }
  std::cout << "completeness: sum d_u d_v - |G_u^v| = " << completeness_deficit(table) << "\n";
  const std::string out = write_output(cfg, id + ".irreps.json", canonical_text(irrep_table_to_json(table, id)));
  std::cout << "wrote " << fs::path(out).filename().string() << "\n";
  return kOk;
}

std::string match_label(const DecompositionComponent& c, const IrrepTable& table, const Tolerances& tol) {
  for (const auto& o : table.orbits) {
    if (o.orbit != c.orbit) continue;
    for (const auto& irrep : o.irreps) {
      if (irrep.rep.dims() == c.irrep.dims() && are_equivalent(irrep.rep, c.irrep, tol)) return irrep.label;
    }
  }
  return "?";
}

int cmd_decompose(const std::string& path, const std::string& rep_path, const RunConfig& cfg) {
  const GroupoidFile file = load_groupoid(path);
  const auto& g = *file.groupoid;
  const Representation rep = load_representation(rep_path, file.groupoid);
  const ValidationReport check = validate_representation(rep, cfg.tol.unitary);
  if (!check.passes) {
    std::cout << "invalid representation: max violation " << format_double(check.max_violation()) << "\n";
    return kInvalid;
  }
  const Decomposition dec = decompose(rep, cfg.tol, cfg.seed);
  const IrrepTable table = enumerate_irreps(file.groupoid, cfg.tol, cfg.seed);
  const std::string id = stem(rep_path);
  std::cout << "representation: " << id << "\n" << settings_line(cfg);
  Json components = Json::array();
  std::vector<ComplexMatrix> unitary(g.unit_count());
  for (const auto& c : dec.components) {
    const std::string label = match_label(c, table, cfg.tol);
    std::cout << label << " d=" << c.irrep.dim(0) << " multiplicity=" << c.multiplicity << " dim Mor=" << c.mor_dimension
              << "\n";
    components.push_back(Json{{"orbit", c.orbit},
                              {"label", label},
                              {"dimension", c.irrep.dim(0)},
                              {"multiplicity", c.multiplicity},
                              {"mor_dimension", c.mor_dimension}});
    const auto& units = g.orbits()[c.orbit];
    for (std::size_t k = 0; k < units.size(); ++k) {
      ComplexMatrix& u = unitary[units[k]];
      const ComplexMatrix& block = c.isometry[k];
      ComplexMatrix grown(block.rows(), u.cols() + block.cols());
      if (u.cols() > 0) grown.leftCols(u.cols()) = u;
      grown.rightCols(block.cols()) = block;
      u = std::move(grown);
    }
  }
  const bool ok = dec.residual <= 1e-8;
  std::cout << "residual: " << (ok ? "<= 1e-8" : format_double(dec.residual)) << "\n";
  Json doc = Json::object();
  doc["representation"] = id;
  doc["seed"] = cfg.seed;
  doc["components"] = std::move(components);
  Json jun = Json::object();
  for (std::size_t u = 0; u < g.unit_count(); ++u) jun[g.unit_name(static_cast<int>(u))] = matrix_to_json(unitary[u]);
  doc["unitary"] = std::move(jun);
  doc["log"] = dec.log;
  const std::string out = write_output(cfg, id + ".decomposition.json", canonical_text(doc));
  std::cout << "wrote " << fs::path(out).filename().string() << "\n";
  return ok ? kOk : kVerifyFailed;
}

int cmd_verify(const std::string& path, const RunConfig& cfg) {
  const GroupoidFile file = load_groupoid(path);
  VerifyOptions options;
  options.tol = cfg.tol;
  options.seed = cfg.seed;
  options.random_instances = cfg.instances;
  const VerificationReport report = verify_groupoid(file.groupoid, options, file.haar);
  const std::string id = stem(path);
  std::cout << "groupoid: " << id << "\n" << report.to_text();
  write_output(cfg, id + ".verify.json", canonical_text(report.to_json()));
  return report.passed() ? kOk : kVerifyFailed;
}

int unit_arg(const FiniteGroupoid& g, const std::string& name, const char* flag) {
  if (name.empty()) throw Error(ErrorCode::ParseError, std::string("missing ") + flag);
  return g.unit_index(name);
}

int cmd_export(const std::string& path, const std::string& what, const std::string& format, const std::string& u_name,
               const std::string& v_name, const std::string& table_path, const RunConfig& cfg) {
  static const std::vector<std::string> artifacts = {"groupoid", "irreps", "matrix-elements", "gram", "peter-weyl",
                                                     "regular-rep"};
  if (std::find(artifacts.begin(), artifacts.end(), what) == artifacts.end()) {
    throw Error(ErrorCode::UnknownArtifact, "'" + what + "'");
  }
  if (format != "csv" && format != "canonical") throw Error(ErrorCode::UnsupportedFormat, "'" + format + "'");
  const bool csv = format == "csv";
  const GroupoidFile file = load_groupoid(path);
  const auto& g = *file.groupoid;
  const std::string id = stem(path);
  const auto table = [&] {
    return table_path.empty() ? enumerate_irreps(file.groupoid, cfg.tol, cfg.seed)
                              : irrep_table_from_json(parse_text(read_file(table_path)), file.groupoid);
  };

  std::string name;
  std::string text;
  if (what == "groupoid" || what == "irreps" || what == "regular-rep") {
    if (csv) throw Error(ErrorCode::UnsupportedFormat, "'" + what + "' has no csv form");
    if (what == "groupoid") {
      text = canonical_text(groupoid_to_json(g, file.haar ? &*file.haar : nullptr));
      name = id + ".json";
    } else if (what == "irreps") {
      text = canonical_text(irrep_table_to_json(table(), id));
      name = id + ".irreps.json";
    } else {
      text = canonical_text(representation_to_json(right_regular_rep(file.groupoid), id));
      name = id + ".regular.json";
    }
  } else {
    const int u = unit_arg(g, u_name, "--u");
    const int v = unit_arg(g, v_name, "--v");
    const std::string suffix = "." + g.unit_name(u) + "." + g.unit_name(v) + (csv ? ".csv" : ".json");
    if (what == "peter-weyl") {
      const PeterWeylBasis basis = peter_weyl_basis(table(), u, v);
      text = csv ? peter_weyl_csv(basis, g) : canonical_text(peter_weyl_json(basis, g));
      name = id + ".peter-weyl" + suffix;
    } else {
      if (!g.co_orbital(u, v)) throw Error(ErrorCode::NotCoOrbital, "'" + u_name + "' and '" + v_name + "'");
      const IrrepTable t = table();
      if (what == "matrix-elements") {
        text = csv ? matrix_elements_csv(t, u, v) : canonical_text(matrix_elements_json(t, u, v));
        name = id + ".matrix-elements" + suffix;
      } else {
        text = csv ? gram_csv(t, u, v) : canonical_text(gram_json(t, u, v));
        name = id + ".gram" + suffix;
      }
    }
  }
  const std::string out = write_output(cfg, name, text);
  std::cout << "wrote " << fs::path(out).filename().string() << "\n";
  return kOk;
}

int cmd_make(const std::vector<std::string>& names, const RunConfig& cfg) {
  for (const auto& name : names) {
    std::string text;
    if (std::find(fixture_names().begin(), fixture_names().end(), name) != fixture_names().end()) {
      text = canonical_text(groupoid_to_json(*fixture_groupoid(name)));
    } else if (name == "pair3_skewed_haar") {
      const GroupoidPtr g = fixture_groupoid("pair3");
      const HaarSystem h = skewed_haar(*g);
      text = canonical_text(groupoid_to_json(*g, &h));
    } else {
      const RepFixture f = fixture_rep(name, cfg);
      text = canonical_text(representation_to_json(f.rep, f.groupoid));
    }
    const std::string out = write_output(cfg, name + ".json", text);
    std::cout << "wrote " << fs::path(out).filename().string() << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite groupoid representations: irreducibles, decompositions, harmonic analysis."};
  app.require_subcommand(1);
  RunConfig cfg;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol-unitary", cfg.tol.unitary, "unitarity and residual tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--tol-rank", cfg.tol.rank, "relative rank cutoff")->check(CLI::PositiveNumber);
    sub->add_option("--tol-cluster", cfg.tol.cluster, "relative eigenvalue gap")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "seed for randomized choices");
    sub->add_option("--out", cfg.out, "output directory (default $GRPD_OUT_DIR, then .)");
  };

  std::string groupoid_path;
  std::string rep_path;
  std::optional<std::string> validate_rep;

  auto* validate = app.add_subcommand("validate", "check groupoid (and representation) axioms");
  validate->add_option("groupoid", groupoid_path)->required();
  validate->add_option("--rep", validate_rep, "representation file");
  add_common(validate);

  auto* irreps = app.add_subcommand("irreps", "enumerate the irreducible representations");
  irreps->add_option("groupoid", groupoid_path)->required();
  add_common(irreps);

  auto* decomp = app.add_subcommand("decompose", "decompose a representation into irreducibles");
  decomp->add_option("groupoid", groupoid_path)->required();
  decomp->add_option("rep", rep_path)->required();
  add_common(decomp);

  auto* verify = app.add_subcommand("verify", "run the verification suite");
  verify->add_option("groupoid", groupoid_path)->required();
  verify->add_option("--instances", cfg.instances, "random instances per identity")->check(CLI::PositiveNumber);
  add_common(verify);

  std::string what;
  std::string format = "canonical";
  std::string u_name;
  std::string v_name;
  std::string table_path;
  auto* exp = app.add_subcommand("export", "write matrix elements, Gram matrices, bases or tables");
  exp->add_option("groupoid", groupoid_path)->required();
  exp->add_option("--what", what, "groupoid, irreps, matrix-elements, gram, peter-weyl, regular-rep")->required();
  exp->add_option("--format", format, "csv or canonical");
  exp->add_option("--u", u_name, "source unit");
  exp->add_option("--v", v_name, "range unit");
  exp->add_option("--table", table_path, "irrep table file to use instead of enumerating");
  add_common(exp);

  std::vector<std::string> make_names;
  bool list = false;
  auto* make = app.add_subcommand("make", "write bundled fixture files");
  make->add_option("names", make_names, "fixture names");
  make->add_flag("--list", list, "list fixture names");
  add_common(make);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(groupoid_path, validate_rep, cfg);
    if (*irreps) return cmd_irreps(groupoid_path, cfg);
    if (*decomp) return cmd_decompose(groupoid_path, rep_path, cfg);
    if (*verify) return cmd_verify(groupoid_path, cfg);
    if (*exp) return cmd_export(groupoid_path, what, format, u_name, v_name, table_path, cfg);
    if (*make) {
      if (list) {
        for (const auto& n : fixture_names()) std::cout << n << "\n";
        std::cout << "pair3_skewed_haar\n";
        for (const auto& n : rep_fixture_names()) std::cout << n << "\n";
        return kOk;
      }
      return cmd_make(make_names, cfg);
    }
  } catch (const Error& e) {
    std::cout << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cout << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
