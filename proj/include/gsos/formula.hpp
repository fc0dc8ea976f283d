#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gsos/language.hpp"
#include "gsos/semantics.hpp"

namespace gsos {

/// Initial transition formula: True | x -a-> | !F | F & F.
/// False and disjunction are derived (!True, !(!F & !G)).
class Formula {
 public:
  enum class Kind { truth, atom, negation, conjunction };

  static Formula top();
  static Formula bottom();
  static Formula atom(Variable x, Action a);
  static Formula negate(Formula f);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula conj_all(const std::vector<Formula>& parts);
  static Formula disj_all(const std::vector<Formula>& parts);

  Kind kind() const noexcept;
  /// Atom accessors.
  const Variable& subject() const;
  const Action& action() const;
  /// Operands of negation (one) or conjunction (two).
  const Formula& operand(std::size_t i = 0) const;

  VarSet vars() const;
  std::size_t atom_count() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Atoms as `x -a->`, `!`, `&`, `|`, `true`, `false`.
std::string to_string(const Formula& f);

/// Total on the variables it is applied to; every value should be realizable.
using InitAssignment = std::map<Variable, ActionSet>;

std::string to_string(const InitAssignment& a, const ActionAlphabet& alphabet);

/// Conjunction of the premises' initial formulae, duplicate literals
/// collapsed; True for the empty set.
Formula hyps_of_premises(const PremiseSet& premises);
/// Disjunction of hyps over the ruloids' antecedents; False for none.
Formula hyps_of_ruloid_set(const std::vector<Ruloid>& ruloids);

/// Throws UnboundVariable when a variable of f is missing from the assignment.
bool eval(const Formula& f, const InitAssignment& assignment, const ActionAlphabet& alphabet);

struct EntailmentResult {
  bool holds = true;
  /// First falsifying assignment in the enumeration order, with a closed
  /// substitution realizing it.
  std::optional<InitAssignment> counterexample;
  Substitution witness;
};

/// |=_G lhs => rhs, quantifying over assignments of realizable init sets to
/// vars(lhs) ∪ vars(rhs). Vacuously true when nothing is realizable.
EntailmentResult entails(const InitUniverse& universe, const Formula& lhs, const Formula& rhs);

bool satisfiable(const InitUniverse& universe, const Formula& f);
bool is_junk(const InitUniverse& universe, const Ruloid& ruloid);

}  // namespace gsos
