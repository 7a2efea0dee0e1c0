#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "grpd/io.hpp"

namespace grpd {

struct VerifyOptions {
  Tolerances tol;
  std::uint64_t seed = 0;
  int random_instances = 100;
  int parseval_samples = 50;
  double identity_tol = 1e-10;  // exact algebraic identities
  double theorem_tol = 1e-9;    // orthogonality, completeness, embeddings
};

struct VerificationEntry {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  double tolerance = 0.0;
  std::vector<std::string> witnesses;
};

struct VerificationReport {
  std::uint64_t seed = 0;
  Tolerances tol;
  std::vector<VerificationEntry> entries;

  bool passed() const;
  Json to_json() const;
  std::string to_text() const;
};

/// One entry per property, in a fixed order. `haar` overrides the uniform
/// system for the Haar entry only.
VerificationReport verify_groupoid(const GroupoidPtr& g, const VerifyOptions& options = {},
                                   const std::optional<HaarSystem>& haar = std::nullopt);

/// Entry names in report order.
const std::vector<std::string>& verification_entry_names();

std::string version_string();

}  // namespace grpd
