#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gsos/formula.hpp"
#include "gsos/language.hpp"
#include "gsos/rmb.hpp"

namespace gsos {

enum class CheckMode { rm, closed, ruloids, junk, entail };

std::string to_string(CheckMode m);
/// Accepts rm, closed, ruloids, junk, entail.
std::optional<CheckMode> parse_mode(std::string_view s);

struct BudgetOverrides {
  std::optional<std::size_t> pairs;
  std::optional<std::size_t> states;
  std::optional<std::size_t> size;

  friend bool operator==(const BudgetOverrides&, const BudgetOverrides&) = default;
};

/// A `check` statement (left/right set) or an `entail` statement
/// (premise/conclusion set, mode entail).
struct CheckRequest {
  std::optional<Term> left;
  std::optional<Term> right;
  CheckMode mode = CheckMode::rm;
  std::optional<std::vector<TermPair>> relation;
  BudgetOverrides budgets;
  std::optional<Formula> premise;
  std::optional<Formula> conclusion;
  std::size_t line = 0;
};

struct SyncEntry {
  Action left;
  Action right;
  Action result;

  friend auto operator<=>(const SyncEntry&, const SyncEntry&) = default;
};

struct SpecFile {
  Language language;
  /// Declaration order.
  std::vector<std::pair<std::string, Term>> contexts;
  /// Both orientations of every declared pair.
  std::vector<SyncEntry> sync;
  std::vector<CheckRequest> checks;
  std::vector<std::string> warnings;

  const Term& context(const std::string& name) const;
};

/// Parses and validates. Includes resolve against `base_dir`.
SpecFile parse_spec(std::string_view text, const std::filesystem::path& base_dir = ".");
SpecFile parse_spec_file(const std::filesystem::path& path);

/// Declared operations parse as applications, everything else as variables.
Term parse_term(std::string_view text, const Signature& sig);
Formula parse_formula(std::string_view text);

/// Source text that parses back to an equal SpecFile. Rule families are
/// printed expanded.
std::string print_spec(const SpecFile& spec);

}  // namespace gsos
