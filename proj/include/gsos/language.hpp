#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gsos/errors.hpp"
#include "gsos/term.hpp"

namespace gsos {

struct OpDecl {
  std::string name;
  std::size_t arity = 0;

  friend bool operator==(const OpDecl&, const OpDecl&) = default;
};

/// Operation symbols in declaration order.
class Signature {
 public:
  /// Throws Error on a duplicate symbol.
  void add(std::string name, std::size_t arity);
  std::optional<std::size_t> arity(const std::string& name) const;
  bool contains(const std::string& name) const { return index_.count(name) != 0; }
  const std::vector<OpDecl>& ops() const noexcept { return ops_; }
  std::size_t size() const noexcept { return ops_.size(); }

  friend bool operator==(const Signature& a, const Signature& b) { return a.ops_ == b.ops_; }

 private:
  std::vector<OpDecl> ops_;
  std::map<std::string, std::size_t> index_;
};

/// Positive `x -a-> y` when target is set, negative `x -a-/>` otherwise.
struct Premise {
  Variable subject;
  Action action;
  std::optional<Variable> target;

  static Premise positive(Variable x, Action a, Variable y) {
    return Premise{std::move(x), std::move(a), std::move(y)};
  }
  static Premise negative(Variable x, Action a) {
    return Premise{std::move(x), std::move(a), std::nullopt};
  }
  bool is_positive() const noexcept { return target.has_value(); }

  friend auto operator<=>(const Premise&, const Premise&) = default;
};

using PremiseSet = std::set<Premise>;

/// Derived rule `premises |- source -action-> target`. A GSOS rule is the
/// special case whose source is f(x1, ..., xl).
struct Ruloid {
  PremiseSet premises;
  Term source;
  Action action;
  Term target;

  VarSet sourcevars() const { return vars(source); }
  VarSet targetvars() const;
  /// All variables of premises, source and target.
  VarSet all_vars() const;

  friend auto operator<=>(const Ruloid&, const Ruloid&) = default;
  friend bool operator==(const Ruloid&, const Ruloid&) = default;
};

struct Rule {
  std::string name;
  Ruloid body;

  const std::string& principal() const noexcept { return body.source.symbol(); }
};

/// Sorted, duplicate-free action alphabet with bit indices.
class ActionAlphabet {
 public:
  ActionAlphabet() = default;
  explicit ActionAlphabet(std::vector<Action> acts);

  const std::vector<Action>& actions() const noexcept { return acts_; }
  std::size_t size() const noexcept { return acts_.size(); }
  bool contains(const Action& a) const { return index_.count(a) != 0; }
  /// Throws Error for an undeclared action.
  std::size_t index(const Action& a) const;

  friend bool operator==(const ActionAlphabet& a, const ActionAlphabet& b) {
    return a.acts_ == b.acts_;
  }

 private:
  std::vector<Action> acts_;
  std::map<Action, std::size_t> index_;
};

/// A subset of Act as a bitmask over ActionAlphabet indices.
struct ActionSet {
  std::uint64_t bits = 0;

  bool contains(std::size_t i) const noexcept { return (bits >> i) & 1U; }
  void insert(std::size_t i) noexcept { bits |= std::uint64_t{1} << i; }
  std::size_t count() const noexcept { return static_cast<std::size_t>(__builtin_popcountll(bits)); }

  friend auto operator<=>(const ActionSet&, const ActionSet&) = default;
};

std::string format_action_set(const ActionAlphabet& alphabet, ActionSet s);

class Language {
 public:
  Language() = default;
  Language(std::vector<Action> acts, Signature sig, std::vector<Rule> rules);

  const ActionAlphabet& alphabet() const noexcept { return alphabet_; }
  const std::vector<Action>& acts() const noexcept { return alphabet_.actions(); }
  const Signature& signature() const noexcept { return sig_; }
  const std::vector<Rule>& rules() const noexcept { return rules_; }
  /// Indices into rules() of the rules with principal operation `op`.
  const std::vector<std::size_t>& rules_for(const std::string& op) const;
  /// Operation symbols as variables; fresh names must avoid these.
  const VarSet& reserved_names() const noexcept { return reserved_; }

 private:
  ActionAlphabet alphabet_;
  Signature sig_;
  std::vector<Rule> rules_;
  std::map<std::string, std::vector<std::size_t>> by_principal_;
  VarSet reserved_;
};

/// Shape diagnostics; empty iff every rule is a well-formed GSOS rule.
std::vector<Diagnostic> validate(const Language& language);
/// Throws ValidationError when validate() reports anything.
void require_valid(const Language& language);

/// Union of base and ext. Throws OverlapError if ext redeclares a base symbol
/// or adds a rule for a base operation, ActionMismatch if the action sets differ.
Language disjoint_extend(const Language& base, const Language& ext);

enum class BccspFragment { full, zero_and_prefix };

/// Constant 0, prefixes pre_<a>, and (for the full fragment) binary choice plus.
Language bccsp_prelude(const std::vector<Action>& acts,
                       BccspFragment fragment = BccspFragment::full);

/// Name of the prefix operation for action `a` in bccsp_prelude.
std::string prefix_op(const Action& a);

bool is_non_inheriting(const Rule& rule);
bool is_non_inheriting(const Language& language);

/// Checks that every operation in t is declared with a matching arity.
/// Throws ArityError / Error.
void check_well_sorted(const Signature& sig, const Term& t);

std::string to_string(const Premise& p);
/// `{premises} |- source -a-> target`, premises sorted lexicographically.
std::string to_string(const Ruloid& r);
std::string to_string(const PremiseSet& premises);

}  // namespace gsos
