#include "casas/report.hpp"

namespace casas {

bool VerificationReport::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

void VerificationReport::merge(const VerificationReport& other, const std::string& prefix) {
  for (auto c : other.checks) {
    if (!prefix.empty()) c.name = prefix + "/" + c.name;
    checks.push_back(std::move(c));
  }
}

const CheckResult* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

Json VerificationReport::to_json() const {
  Json out = Json::object();
  out["title"] = title;
  out["passed"] = passed();
  Json arr = Json::array();
  for (const auto& c : checks) {
    Json j = Json::object();
    j["name"] = c.name;
    j["passed"] = c.passed;
    if (!c.method.empty()) j["method"] = c.method;
    if (!c.detail.empty()) j["detail"] = c.detail;
    if (!c.witness.is_null()) j["witness"] = c.witness;
    arr.push_back(std::move(j));
  }
  out["checks"] = std::move(arr);
  return out;
}

}  // namespace casas
