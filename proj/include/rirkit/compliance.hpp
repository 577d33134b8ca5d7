#pragma once

// Standards compliance engine: ten built-in room-type rules with RT60 and/or
// minimum-STI thresholds, checked inclusively (a value equal to the
// threshold passes).

#include <optional>
#include <string>
#include <vector>

#include "rirkit/types.hpp"

namespace rirkit {

struct ComplianceRule {
  std::string space_type;
  std::optional<double> rt60_min_s;
  std::optional<double> rt60_max_s;
  std::optional<double> sti_min;
};

enum class ComplianceStatus { pass, fail, not_applicable };

inline const char* to_string(ComplianceStatus s) {
  switch (s) {
    case ComplianceStatus::pass: return "pass";
    case ComplianceStatus::fail: return "fail";
    default: return "not-applicable";
  }
}

struct ComplianceOutcome {
  ComplianceRule rule;
  std::optional<bool> rt60_pass;
  std::optional<bool> sti_pass;
  ComplianceStatus overall = ComplianceStatus::not_applicable;
  std::vector<std::string> advisory_flags;
};

struct ComplianceMetrics {
  double rt60_s = 0.0;
  std::optional<double> sti;
};

inline std::vector<ComplianceRule> builtin_rules() {
  return {
      {"Classroom (ANSI S12.60)", std::nullopt, 0.6, 0.60},
      {"Open Office (ISO 3382-3)", std::nullopt, 0.8, 0.50},
      {"Private Office", std::nullopt, 0.6, 0.55},
      {"Hospital Ward", std::nullopt, 0.8, 0.60},
      {"Concert Hall", 1.5, 2.5, std::nullopt},
      {"Lecture Hall", std::nullopt, 1.0, 0.55},
      {"Recording Studio", std::nullopt, 0.4, std::nullopt},
      {"Worship Space", 1.2, 3.0, std::nullopt},
      {"Restaurant", std::nullopt, 0.9, std::nullopt},
      {"Conference Room", std::nullopt, 0.7, 0.55},
  };
}

inline ComplianceOutcome check(const ComplianceMetrics& metrics, const ComplianceRule& rule) {
  ComplianceOutcome out;
  out.rule = rule;

  if (rule.rt60_min_s || rule.rt60_max_s) {
    bool ok = true;
    if (rule.rt60_min_s && metrics.rt60_s < *rule.rt60_min_s) ok = false;
    if (rule.rt60_max_s && metrics.rt60_s > *rule.rt60_max_s) ok = false;
    out.rt60_pass = ok;
  }

  bool sti_missing = false;
  if (rule.sti_min) {
    // The measured STI comes from the RT60/SNR proxy, not the full IEC
    // 60268-16 procedure, so these rows are advisory.
    out.advisory_flags.push_back("STI threshold checked against proxy STI; advisory only");
    if (metrics.sti)
      out.sti_pass = *metrics.sti >= *rule.sti_min;
    else
      sti_missing = true;
  }

  const bool any_fail = (out.rt60_pass && !*out.rt60_pass) || (out.sti_pass && !*out.sti_pass);
  if (any_fail)
    out.overall = ComplianceStatus::fail;
  else if (sti_missing)
    out.overall = ComplianceStatus::not_applicable;
  else
    out.overall = ComplianceStatus::pass;
  return out;
}

inline std::vector<ComplianceOutcome> check_all(const ComplianceMetrics& metrics) {
  std::vector<ComplianceOutcome> outcomes;
  for (const ComplianceRule& rule : builtin_rules()) outcomes.push_back(check(metrics, rule));
  return outcomes;
}

}  // namespace rirkit
