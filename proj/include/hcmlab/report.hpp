#pragma once

// JSON run reports (schema 1).

#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"

#include "hcmlab/monotone.hpp"

namespace hcmlab {

inline constexpr int kReportSchema = 1;

inline nlohmann::json to_json(const Verdict& v) {
  nlohmann::json j;
  j["status"] = to_string(v.status);
  j["tolerance"] = v.tolerance;
  j["detail"] = v.detail;
  j["grid"] = v.grid;
  if (v.extremum) j["extremum"] = *v.extremum;
  if (v.witness) {
    j["witness"] = {{"point", v.witness->point}, {"value", v.witness->value}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

struct RunReport {
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  std::vector<nlohmann::json> verdicts;  // Verdict JSON, optionally with a "name"
  std::vector<std::string> artifacts;
  nlohmann::json results = nlohmann::json::object();  // command-specific numbers
  double wall_time = 0.0;

  void add(const std::string& name, const Verdict& v) {
    nlohmann::json j = hcmlab::to_json(v);
    j["name"] = name;
    verdicts.push_back(std::move(j));
  }

  /// 1 if any verdict failed, else 2 if any was inconclusive, else 0.
  int exit_code() const {
    bool inconclusive = false;
    for (const auto& v : verdicts) {
      if (v["status"] == "FAIL") return 1;
      if (v["status"] == "INCONCLUSIVE") inconclusive = true;
    }
    return inconclusive ? 2 : 0;
  }

  std::string overall() const {
    switch (exit_code()) {
      case 0: return "PASS";
      case 1: return "FAIL";
      default: return "INCONCLUSIVE";
    }
  }

  nlohmann::json to_json() const {
    return {{"schema", kReportSchema}, {"command", command}, {"params", params},
            {"status", overall()},     {"verdicts", verdicts}, {"results", results},
            {"artifacts", artifacts},  {"wall_time", wall_time}};
  }
};

}  // namespace hcmlab
