#include "padml/padml.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "padml/problem.hpp"

namespace {

thread_local std::string g_error_message;
thread_local int g_error_code = 0;

pdml_status status_for(padml::ErrorCode code) {
  switch (code) {
    case padml::ErrorCode::SyntaxError:
    case padml::ErrorCode::UnknownVariable:
      return PDML_ERR_PARSE;
    case padml::ErrorCode::PrecisionExhausted:
      return PDML_ERR_PRECISION;
    case padml::ErrorCode::ResourceLimit:
      return PDML_ERR_RESOURCE;
    default:
      return PDML_ERR_INVALID;
  }
}

pdml_status record_error(pdml_status status, const std::string& message) {
  g_error_code = static_cast<int>(status);
  g_error_message = message;
  return status;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct pdml_problem {
  std::string json_text;  // validated on creation, re-parsed per command
};

extern "C" {

pdml_status pdml_problem_create(const char* json_text, pdml_problem** out) {
  if (!json_text || !out)
    return record_error(PDML_ERR_INVALID, "null argument");
  *out = nullptr;
  try {
    auto parsed = nlohmann::json::parse(json_text);
    padml::ProblemFile::from_json(parsed);  // validate now, fail early
  } catch (const padml::Error& e) {
    return record_error(status_for(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return record_error(PDML_ERR_PARSE, e.what());
  } catch (const std::exception& e) {
    return record_error(PDML_ERR_INTERNAL, e.what());
  }
  *out = new pdml_problem{json_text};
  g_error_code = 0;
  g_error_message.clear();
  return PDML_OK;
}

void pdml_problem_destroy(pdml_problem* problem) { delete problem; }

pdml_status pdml_command(const pdml_problem* problem, const char* command,
                         const char* options_json, char** report_json_out) {
  if (!command || !report_json_out)
    return record_error(PDML_ERR_INVALID, "null argument");
  *report_json_out = nullptr;
  try {
    std::optional<std::string> problem_text;
    if (problem) problem_text = problem->json_text;
    std::optional<std::string> options;
    if (options_json) options = std::string(options_json);
    std::string report = padml::run_command(command, problem_text, options);
    *report_json_out = dup_string(report);
    if (!*report_json_out)
      return record_error(PDML_ERR_INTERNAL, "allocation failed");
    g_error_code = 0;
    g_error_message.clear();
    return PDML_OK;
  } catch (const padml::Error& e) {
    return record_error(status_for(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return record_error(PDML_ERR_PARSE, e.what());
  } catch (const std::exception& e) {
    return record_error(PDML_ERR_INTERNAL, e.what());
  }
}

void pdml_free(char* s) { std::free(s); }

const char* pdml_error_message(void) { return g_error_message.c_str(); }

int pdml_error_code(void) { return g_error_code; }

unsigned pdml_abi_version(void) { return 1; }

}  // extern "C"
