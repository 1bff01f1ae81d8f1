// Command-line front end. Talks to the library exclusively through the C
// API; all report shaping happens in the library so scripted runs and API
// users see identical bytes.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "padml/padml.h"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CLI::ValidationError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int emit_error(pdml_status status) {
  nlohmann::json err;
  err["error"] = pdml_error_message();
  err["status"] = static_cast<int>(status);
  std::cerr << err.dump() << "\n";
  switch (status) {
    case PDML_ERR_PARSE: return 2;
    case PDML_ERR_PRECISION: return 3;
    case PDML_ERR_RESOURCE: return 4;
    default: return 1;
  }
}

int write_report(const std::string& report, const std::string& out_path,
                 const std::string& csv_path) {
  if (!csv_path.empty()) {
    // (n, height, ratio) rows for external plotting.
    auto j = nlohmann::json::parse(report);
    if (!j["payload"].contains("records")) {
      std::cerr << "--csv needs per-n records (drop --no-records)\n";
      return 1;
    }
    std::ofstream csv(csv_path);
    if (!csv) {
      std::cerr << "cannot open '" << csv_path << "'\n";
      return 1;
    }
    csv << "n,height,ratio\n";
    for (const auto& rec : j["payload"]["records"]) {
      if (!rec.value("defined", false)) continue;
      csv << rec["n"].get<long>() << "," << rec["height"].get<double>() << ",";
      if (rec.contains("ratio")) csv << rec["ratio"].get<double>();
      csv << "\n";
    }
  }
  if (out_path.empty()) {
    std::cout << report;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot open '" << out_path << "'\n";
      return 1;
    }
    out << report;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-adic orbit interpolation, Mordell-Lang solving, and height-gap experiments"};
  app.require_subcommand(1);

  std::string problem_path, out_path, csv_path;
  long prime = 0, precision = 0, horizon = -1, n_arg = 0, n_max = -1;
  bool no_records = false;

  auto add_common = [&](CLI::App* cmd, bool needs_problem) {
    if (needs_problem)
      cmd->add_option("problem", problem_path, "problem file (JSON)")->required();
    cmd->add_option("--prime", prime, "override prime");
    cmd->add_option("--precision", precision, "override precision");
    cmd->add_option("--horizon", horizon, "override horizon");
    cmd->add_option("--out", out_path, "write the report here instead of stdout");
  };

  CLI::App* orbit = app.add_subcommand("orbit", "exact orbit points");
  add_common(orbit, true);
  orbit->add_option("--n-max", n_max, "last iterate to report");

  CLI::App* period = app.add_subcommand("period", "residue preperiod and period");
  add_common(period, true);

  CLI::App* mahler = app.add_subcommand("mahler-fit",
                                        "finite-difference interpolation with decay certificate");
  add_common(mahler, true);

  CLI::App* diag = app.add_subcommand("series-diag",
                                      "Strassman/Weierstrass diagnostics of the composed observable");
  add_common(diag, true);

  CLI::App* solve = app.add_subcommand("dml-solve", "orbit-target intersection structure");
  add_common(solve, true);

  CLI::App* rset = app.add_subcommand("return-set", "chart membership along the orbit");
  add_common(rset, true);

  CLI::App* gap = app.add_subcommand("gap-ratio", "height growth against log n");
  add_common(gap, true);
  gap->add_option("--n-max", n_max, "last iterate to report");
  gap->add_option("--csv", csv_path, "also write (n, height, ratio) rows as CSV");
  gap->add_flag("--no-records", no_records, "omit per-n records from the report");

  CLI::App* count = app.add_subcommand("count-heights",
                                       "count rationals of height <= log N");
  count->add_option("--n", n_arg, "bound N")->required();
  count->add_option("--out", out_path, "write the report here instead of stdout");

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();
  std::string command = sub->get_name();

  nlohmann::json options = nlohmann::json::object();
  if (prime > 0) options["prime"] = prime;
  if (precision > 0) options["precision"] = precision;
  if (horizon >= 0) options["horizon"] = horizon;
  if (n_max >= 0) options["n_max"] = n_max;
  if (command == "count-heights") options["n"] = n_arg;
  if (no_records) options["include_records"] = false;

  pdml_problem* problem = nullptr;
  if (!problem_path.empty()) {
    std::string text;
    try {
      text = read_file(problem_path);
    } catch (const CLI::Error& e) {
      std::cerr << e.what() << "\n";
      return 2;
    }
    pdml_status st = pdml_problem_create(text.c_str(), &problem);
    if (st != PDML_OK) return emit_error(st);
  }

  std::string options_text = options.dump();
  char* report = nullptr;
  pdml_status st = pdml_command(problem, command.c_str(), options_text.c_str(), &report);
  if (problem) pdml_problem_destroy(problem);
  if (st != PDML_OK) return emit_error(st);

  std::string report_str(report);
  pdml_free(report);
  return write_report(report_str, out_path, csv_path);
}
