#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gsos/parser.hpp"
#include "gsos/rmb.hpp"
#include "gsos/ruloids.hpp"

namespace gsos {

enum class RunMode { rm, closed, ruloids, junk, lts, entail };

std::optional<RunMode> parse_run_mode(std::string_view s);

struct RunOptions {
  std::optional<RunMode> mode;
  std::optional<std::size_t> budget_pairs;
  std::optional<std::size_t> budget_states;
  bool stability = false;
};

enum class Status { pass, fail, inconclusive, skipped };

struct CheckOutcome {
  Status status = Status::pass;
  std::string verdict;
  /// Exactly verdict, relation, evidence, stability, caveat.
  nlohmann::json document;
  std::string text;
};

/// Runs the checks of one spec file. Output depends only on the inputs.
class Runner {
 public:
  Runner(const SpecFile& spec, RunOptions options);

  CheckOutcome run(const CheckRequest& request) const;
  std::vector<CheckOutcome> run_all() const;

  const RuloidEngine& engine() const noexcept { return engine_; }

 private:
  CheckOutcome run_rm(const CheckRequest& r, const Budgets& b) const;
  CheckOutcome run_closed(const CheckRequest& r, const Budgets& b) const;
  CheckOutcome run_ruloids(const CheckRequest& r) const;
  CheckOutcome run_junk() const;
  CheckOutcome run_lts(const CheckRequest& r, const Budgets& b) const;
  CheckOutcome run_entail(const CheckRequest& r) const;
  void finish(CheckOutcome& out, const std::string& header) const;

  const SpecFile* spec_;
  RunOptions options_;
  RuloidEngine engine_;
  StabilityReport stability_;
};

/// 3 for errors (handled by callers), then 1 on any failure, 2 on any
/// inconclusive result, else 0.
int exit_code(const std::vector<CheckOutcome>& outcomes);

nlohmann::json to_json(const Verdict& v, const ActionAlphabet& alphabet);
nlohmann::json to_json(const StabilityReport& s, const ActionAlphabet& alphabet);
std::string describe(const Refutation& r, const InitUniverse& universe);

struct JunkEntry {
  std::string rule;
  bool junk = false;
  std::string evidence;
};
std::vector<JunkEntry> junk_scan(const Language& language, const InitUniverse& universe);
std::string format_junk_scan(const std::vector<JunkEntry>& entries);

}  // namespace gsos
