#ifndef PADML_PROBLEM_HPP
#define PADML_PROBLEM_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "padml/dml.hpp"
#include "padml/heights.hpp"

namespace padml {

// Parsed problem file. Polynomial strings stay in the dynsys grammar; points
// and target values are exact rationals written as "a/b" or "a".
struct ProblemFile {
  long prime = 5;
  long precision = 64;
  std::vector<std::string> variables;
  std::vector<std::string> map_text;
  std::vector<std::string> point_text;
  std::vector<std::string> observable_text;  // one (A^1) or two (P^1) strings
  nlohmann::json targets = nlohmann::json::array();
  long horizon = 10000;
  long mahler_coefficients = 24;
  long holdouts = 8;

  PolyMap parsed_map() const;
  RationalPoint parsed_point() const;
  Polynomial observable_numerator() const;
  Polynomial observable_denominator() const;
  std::vector<TargetSpec> parsed_targets() const;
  DmlOptions dml_options() const;

  static ProblemFile from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

mpq_class parse_rational_text(const std::string& text);
std::string rational_to_text(const mpq_class& q);

// Deterministic envelope: nlohmann objects serialize with sorted keys, and
// all numeric payload entries are integers or exact strings except measured
// ratios, which are doubles formatted by the shortest round-trip rule.
struct ReportEnvelope {
  std::string command;
  std::string input_digest;
  nlohmann::json parameters = nlohmann::json::object();
  nlohmann::json payload = nlohmann::json::object();
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
  std::string serialize() const;  // 2-space indent, trailing newline
};

std::string fnv1a_digest(const std::string& bytes);

nlohmann::json solution_to_json(const DmlSolution& s);
nlohmann::json gap_report_to_json(const GapReport& r, bool include_records = true);
nlohmann::json return_set_to_json(const ReturnSet& s);

// Command dispatch shared by the C API and anything in-process. `options`
// may override prime/precision/horizon and carries per-command arguments
// (n, n_max). Throws padml::Error; the caller maps codes to statuses.
std::string run_command(const std::string& command,
                        const std::optional<std::string>& problem_json,
                        const std::optional<std::string>& options_json);

}  // namespace padml

#endif
