#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gsos/language.hpp"

namespace gsos {

using Transition = std::pair<Action, Term>;

/// Memoizing evaluator for the supported transition relation over closed
/// terms. Not thread-safe; use one per task.
class Stepper {
 public:
  explicit Stepper(const Language& language) : language_(&language) {}

  /// Sorted, duplicate-free outgoing transitions of p. Throws NotClosed.
  const std::vector<Transition>& step(const Term& p);
  ActionSet init(const Term& p);

 private:
  // A rule with premise subjects resolved to argument positions.
  struct Compiled {
    struct Probe {
      std::size_t position;
      Action action;
      std::optional<Variable> target;
    };
    std::vector<Variable> source_vars;
    std::vector<Probe> positive, negative;
  };

  const Compiled& compiled(std::size_t rule_index);
  std::vector<Transition> compute(const Term& p);

  const Language* language_;
  std::vector<std::optional<Compiled>> compiled_;
  std::unordered_map<Term, std::vector<Transition>, TermHash> cache_;
};

std::vector<Transition> step(const Language& language, const Term& p);

struct LtsTransition {
  std::size_t from;
  Action action;
  std::size_t to;
};

struct Lts {
  /// BFS discovery order; roots first.
  std::vector<Term> states;
  std::vector<LtsTransition> transitions;
  std::size_t initial = 0;
  /// Set when max_states was reached before the closure completed.
  bool truncated = false;
};

/// Reachable fragment from p. Throws NotClosed.
Lts build_lts(const Language& language, const Term& p, std::size_t max_states = 4096);
/// Shared reachable fragment from several roots; roots occupy the first
/// state ids (duplicates collapse).
Lts build_lts(const Language& language, std::span<const Term> roots,
              std::size_t max_states = 4096);

/// `state <id> <term>` and `trans <id> <action> <id>` lines.
std::string export_lts(const Lts& lts);

/// Block index per state for strong bisimilarity (signature-based partition
/// refinement). Only meaningful on complete (non-truncated) LTSs.
std::vector<std::size_t> bisimulation_blocks(const Lts& lts);

enum class BisimVerdict { yes, no, inconclusive };
std::string to_string(BisimVerdict v);

BisimVerdict bisimilar_closed(const Language& language, const Term& p, const Term& q,
                              std::size_t max_states = 4096);

/// The realizable init sets init(T(Σ)) with one witness closed term each.
struct InitUniverse {
  ActionAlphabet alphabet;
  /// Sorted by bitmask.
  std::vector<ActionSet> realizable;
  std::map<ActionSet, Term> witness;

  bool empty() const noexcept { return realizable.empty(); }
  bool contains(ActionSet s) const { return witness.count(s) != 0; }
  const Term& witness_for(ActionSet s) const { return witness.at(s); }
};

InitUniverse init_universe(const Language& language);

/// All closed terms of depth <= max_depth, in order of increasing depth then
/// declaration order. Stops adding once `limit` terms exist.
std::vector<Term> closed_terms_up_to_depth(const Language& language, std::size_t max_depth,
                                           std::size_t limit = 1u << 20);

}  // namespace gsos
