#pragma once

// Machine-readable pass/fail records with witnesses, shared by every
// verification routine and serialized by the command-line front end.

#include "json.hpp"

#include <string>
#include <vector>

namespace casas {

using Json = nlohmann::ordered_json;

struct CheckResult {
  std::string name;
  bool passed = true;
  /// How the verdict was produced (e.g. "colon-ideal", "per-degree").
  std::string method;
  Json detail = Json::object();
  /// Present on failure: offending tuple, prime, graded degree, vector.
  Json witness;
};

struct VerificationReport {
  std::string title;
  std::vector<CheckResult> checks;

  bool passed() const;
  void add(CheckResult c) { checks.push_back(std::move(c)); }
  void merge(const VerificationReport& other, const std::string& prefix = "");
  const CheckResult* find(const std::string& name) const;
  Json to_json() const;
};

}  // namespace casas
