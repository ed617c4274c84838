#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "bft/expr.hpp"
#include "bft/scenario.hpp"
#include "bft/table.hpp"

namespace {

constexpr int exit_usage = 1;
constexpr int exit_parse = 2;
constexpr int exit_validation = 3;
constexpr int exit_numeric = 4;

int exit_code_for(bft::errc c) {
  switch (c) {
    case bft::errc::syntax_error:
    case bft::errc::unknown_label:
    case bft::errc::format_error:
      return exit_parse;
    case bft::errc::numeric_error:
      return exit_numeric;
    default:
      return exit_validation;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write '" << out_path << "'\n";
    return exit_usage;
  }
  out << text;
  return 0;
}

std::string list_elements(const bft::Scenario& scenario) {
  std::string out = "element,mask,dsm_cardinal\n";
  for (const auto& e : bft::reachable_elements(scenario)) {
    out += bft::render_element(scenario.frame, e);
    out += ',' + bft::to_hex(e);
    out += ',' + std::to_string(scenario.model.dsm_cardinal(e));
    out += '\n';
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Combine basic belief assignments over a frame of discernment"};
  app.name("fuse");

  std::string scenario_path;
  std::string rule_override;
  std::string format = "table";
  std::string out_path;
  bool validate_only = false;
  bool list_only = false;

  app.add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  app.add_option("--rule", rule_override,
                 "Override the scenario's rule (conjunctive|dsmc|wo|dwo|cprim)");
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  app.add_option("--out", out_path, "Write output to a file instead of stdout");
  app.add_flag("--validate", validate_only, "Parse and validate the scenario, then exit");
  app.add_flag("--list-elements", list_only,
               "Print the reachable elements with their DSm cardinals");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_usage;
  }

  std::string text;
  try {
    text = read_file(scenario_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }

  try {
    const bft::Scenario scenario = bft::parse_scenario(text);
    if (validate_only) {
      std::cout << "ok: " << scenario.sources.size() << " sources over frame of "
                << scenario.frame.size() << "\n";
      return 0;
    }
    if (list_only) return write_output(list_elements(scenario), out_path);

    bft::RuleKind kind = scenario.rule.kind;
    if (!rule_override.empty()) {
      bool known = false;
      for (bft::RuleKind k : {bft::RuleKind::conjunctive, bft::RuleKind::dsmc, bft::RuleKind::wo,
                              bft::RuleKind::dwo, bft::RuleKind::cprim}) {
        if (rule_override == bft::rule_name(k)) {
          kind = k;
          known = true;
        }
      }
      if (!known) {
        std::cerr << "error: unknown rule '" << rule_override << "'\n";
        return exit_usage;
      }
    }

    const bft::FusedMass fused = bft::run_rule(scenario, kind);
    const bft::ResultTable table = bft::make_result_table(
        fused, bft::rule_name(kind), bft::describe_model(scenario.frame, scenario.model));

    std::string rendered;
    if (format == "csv")
      rendered = bft::format_csv(table);
    else if (format == "json")
      rendered = bft::format_json(table);
    else
      rendered = bft::format_table(table);
    return write_output(rendered, out_path);
  } catch (const bft::error& e) {
    std::cerr << "error [" << bft::errc_name(e.code()) << "]: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_validation;
  }
}
