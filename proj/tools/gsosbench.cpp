#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gsos/parser.hpp"
#include "gsos/report.hpp"

namespace {

constexpr int kErrorExit = 3;

void print_warnings(const gsos::SpecFile& spec, const std::string& path) {
  for (const auto& w : spec.warnings) std::cerr << path << ": warning: " << w << '\n';
}

int cmd_check(const std::vector<std::string>& paths, const gsos::RunOptions& options,
              const std::string& format) {
  std::vector<gsos::CheckOutcome> all;
  bool error = false;
  for (const auto& path : paths) {
    try {
      gsos::SpecFile spec = gsos::parse_spec_file(path);
      print_warnings(spec, path);
      gsos::Runner runner(spec, options);
      for (const auto& request : spec.checks) {
        gsos::CheckOutcome out = runner.run(request);
        if (format == "structured")
          std::cout << out.document.dump() << '\n';
        else
          std::cout << out.text;
        all.push_back(std::move(out));
      }
    } catch (const std::exception& e) {
      std::cerr << path << ": error: " << e.what() << '\n';
      error = true;
    }
  }
  return error ? kErrorExit : gsos::exit_code(all);
}

int cmd_ruloids(const std::string& path, const std::string& context) {
  gsos::SpecFile spec = gsos::parse_spec_file(path);
  print_warnings(spec, path);
  gsos::RuloidEngine engine(spec.language);
  std::cout << gsos::format_ruloid_set(engine.ruloids(spec.context(context)));
  return 0;
}

int cmd_junk(const std::string& path) {
  gsos::SpecFile spec = gsos::parse_spec_file(path);
  print_warnings(spec, path);
  gsos::InitUniverse universe = gsos::init_universe(spec.language);
  std::cout << gsos::format_junk_scan(gsos::junk_scan(spec.language, universe));
  return 0;
}

int cmd_lts(const std::string& path, const std::string& term_text, std::size_t max_states) {
  gsos::SpecFile spec = gsos::parse_spec_file(path);
  print_warnings(spec, path);
  gsos::Term t = gsos::parse_term(term_text, spec.language.signature());
  if (!t.is_closed()) {
    std::string why = gsos::init_universe(spec.language).empty()
                          ? "no closed terms can be built in this language"
                          : "term is not closed";
    throw gsos::NotClosed(why + ": " + gsos::to_string(t));
  }
  gsos::Lts lts = gsos::build_lts(spec.language, t, max_states);
  std::cout << gsos::export_lts(lts);
  return lts.truncated ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ruloid derivation and rule-matching bisimulation checks for GSOS languages"};
  app.require_subcommand(1);

  std::vector<std::string> check_paths;
  std::string mode_text;
  std::size_t budget_pairs = 0;
  std::size_t budget_states = 0;
  std::string format = "text";
  bool stability = false;
  auto* check = app.add_subcommand("check", "run the checks in one or more spec files");
  check->add_option("files", check_paths, "spec files")->required()->check(CLI::ExistingFile);
  check->add_option("--mode", mode_text, "override the mode of every check")
      ->check(CLI::IsMember({"rm", "closed", "ruloids", "junk", "lts", "entail"}));
  check->add_option("--budget-pairs", budget_pairs, "relation pattern budget")
      ->check(CLI::PositiveNumber);
  check->add_option("--budget-states", budget_states, "LTS state budget")
      ->check(CLI::PositiveNumber);
  check->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"text", "structured"}));
  check->add_flag("--stability", stability, "report extension stability");

  std::string ruloids_path, context_name;
  auto* ruloids = app.add_subcommand("ruloids", "list the ruloids of a named context");
  ruloids->add_option("file", ruloids_path, "spec file")->required()->check(CLI::ExistingFile);
  ruloids->add_option("context", context_name, "context name")->required();

  std::string junk_path;
  auto* junk = app.add_subcommand("junk", "list junk rules");
  junk->add_option("file", junk_path, "spec file")->required()->check(CLI::ExistingFile);

  std::string lts_path, lts_term;
  std::size_t lts_states = 4096;
  auto* lts = app.add_subcommand("lts", "export the LTS of a closed term");
  lts->add_option("file", lts_path, "spec file")->required()->check(CLI::ExistingFile);
  lts->add_option("term", lts_term, "closed term")->required();
  lts->add_option("--budget-states", lts_states, "state budget")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kErrorExit;
  }

  try {
    if (*check) {
      gsos::RunOptions options;
      if (!mode_text.empty()) options.mode = gsos::parse_run_mode(mode_text);
      if (budget_pairs) options.budget_pairs = budget_pairs;
      if (budget_states) options.budget_states = budget_states;
      options.stability = stability;
      return cmd_check(check_paths, options, format);
    }
    if (*ruloids) return cmd_ruloids(ruloids_path, context_name);
    if (*junk) return cmd_junk(junk_path);
    if (*lts) return cmd_lts(lts_path, lts_term, lts_states);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kErrorExit;
  }
  return kErrorExit;
}
