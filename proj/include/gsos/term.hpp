#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace gsos {

/// A process variable. Names are a base identifier plus an optional numeric
/// suffix (x, x1, x'2, ...).
struct Variable {
  std::string name;

  friend auto operator<=>(const Variable&, const Variable&) = default;
};

/// An action label, interned against the enclosing language's action set.
struct Action {
  std::string label;

  friend auto operator<=>(const Action&, const Action&) = default;
};

using VarSet = std::set<Variable>;

/// Immutable open term: either a variable or an operation applied to an
/// ordered list of subterms. Copies share structure; equality is structural.
class Term {
 public:
  static Term var(Variable v);
  static Term var(std::string name) { return var(Variable{std::move(name)}); }
  static Term app(std::string op, std::vector<Term> args = {});

  bool is_var() const noexcept;
  bool is_closed() const noexcept;
  /// Variable name for variables, operation symbol for applications.
  const std::string& symbol() const noexcept;
  Variable variable() const;
  const std::vector<Term>& args() const noexcept;
  std::size_t arity() const noexcept { return args().size(); }

  /// Number of nodes.
  std::size_t size() const noexcept;
  /// Height of the syntax tree; variables and constants have depth 0.
  std::size_t depth() const noexcept;
  std::size_t hash() const noexcept;

  friend bool operator==(const Term& lhs, const Term& rhs) noexcept;
  friend std::strong_ordering operator<=>(const Term& lhs,
                                          const Term& rhs) noexcept;

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept { return t.hash(); }
};

std::string to_string(const Term& t);
std::ostream& operator<<(std::ostream& os, const Term& t);

/// vars(t): the variables occurring in t.
VarSet vars(const Term& t);
void collect_vars(const Term& t, VarSet& out);
/// Variables in left-to-right first-occurrence order.
std::vector<Variable> vars_in_order(const Term& t);

/// Finite-support substitution; identity outside its support.
class Substitution {
 public:
  Substitution() = default;
  explicit Substitution(std::map<Variable, Term> mapping)
      : mapping_(std::move(mapping)) {}

  void bind(const Variable& v, Term t) { mapping_.insert_or_assign(v, std::move(t)); }
  const Term* find(const Variable& v) const;
  bool empty() const noexcept { return mapping_.empty(); }
  const std::map<Variable, Term>& mapping() const noexcept { return mapping_; }

 private:
  std::map<Variable, Term> mapping_;
};

/// Simultaneous substitution.
Term apply_subst(const Term& t, const Substitution& s);

/// Injective variable-to-variable map. Variables outside the support are
/// left unchanged.
class Renaming {
 public:
  Renaming() = default;
  /// Returns nullopt when `mapping` is not injective.
  static std::optional<Renaming> make(std::map<Variable, Variable> mapping);

  const std::map<Variable, Variable>& mapping() const noexcept { return mapping_; }
  Variable apply(const Variable& v) const;
  Term apply(const Term& t) const;
  /// (this ∘ first): apply `first`, then this.
  Renaming after(const Renaming& first) const;
  /// Inverse on the image. Throws std::logic_error if injectivity was lost.
  Renaming inverse() const;

 private:
  explicit Renaming(std::map<Variable, Variable> mapping) : mapping_(std::move(mapping)) {}
  std::map<Variable, Variable> mapping_;
};

/// Lowest-index fresh variable for `hint`: the hint's base name (trailing
/// digits stripped) followed by no suffix, then 1, 2, ... Pure function of
/// its arguments.
Variable fresh(const VarSet& exclude, const std::string& hint);

/// Injective renaming σ of the pattern's variables with
/// (pattern.first σ, pattern.second σ) ≡ instance, if one exists.
std::optional<Renaming> match_modulo_renaming(const std::pair<Term, Term>& pattern,
                                              const std::pair<Term, Term>& instance);

/// Renames variables to v1, v2, ... in left-to-right first-occurrence order
/// across both components.
std::pair<Term, Term> canonical_pair(const std::pair<Term, Term>& p);
/// Same as canonical_pair for a single term; also returns the renaming used.
Term canonical_term(const Term& t, Renaming* used = nullptr);

}  // namespace gsos
