#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gsos/formula.hpp"
#include "gsos/ruloids.hpp"

namespace gsos {

using TermPair = std::pair<Term, Term>;

inline constexpr const char* kRefutationCaveat = "method incomplete; equation may still hold";

/// Finite set of pair patterns, read modulo injective renaming applied to
/// both components at once.
struct OpenRelation {
  std::vector<TermPair> pairs;
  bool symmetric = true;
  bool identity = true;

  bool contains(const Term& p, const Term& q) const;
};

/// One valid renaming of a ruloid of Q, with conditions 1a-1d.
struct CandidateCheck {
  Ruloid ruloid;
  bool same_action = false;  // 1a
  bool related = false;      // 1b
  bool hygienic = false;     // 1c
  bool shared_ok = false;    // 1d

  bool admissible() const { return same_action && related && hygienic && shared_ok; }
};

struct RuloidMatch {
  Ruloid ruloid;
  std::vector<CandidateCheck> candidates;
  Formula hyps;
  /// hyps of the admissible candidates (J*).
  Formula hyps_j = Formula::bottom();
  EntailmentResult entailment;
  bool matched = false;
  /// Target pairs of candidates that failed only 1b.
  std::vector<TermPair> blocked_targets;
  /// Entailment fails even with every candidate passing 1a, 1c, 1d.
  bool unrepairable = false;
  std::optional<InitAssignment> unrepairable_counterexample;
};

struct PairResult {
  TermPair pair;
  std::vector<RuloidMatch> matches;
  bool passed = true;
};

struct Budgets {
  std::size_t max_pairs = 64;
  std::size_t max_states = 4096;
  std::size_t max_term_size = 32;
};

struct Refutation {
  TermPair pair;
  Ruloid ruloid;
  std::optional<InitAssignment> counterexample;
  std::string reason;
};

struct Verdict {
  enum class Kind { proven, refuted, inconclusive };
  Kind kind = Kind::proven;
  OpenRelation relation;
  /// Both orientations of every pair checked in the final round.
  std::vector<PairResult> evidence;
  std::optional<Refutation> refutation;
  /// Pairs that could not be explored within the budget.
  std::vector<TermPair> frontier;
  std::string note;
};

std::string to_string(Verdict::Kind k);

struct StabilityReport {
  bool stable = false;
  std::size_t realizable = 0;
  std::size_t total = 0;
  /// Listed only for alphabets of at most 16 actions.
  std::vector<ActionSet> missing;
};

class RmbChecker {
 public:
  explicit RmbChecker(const RuloidEngine& engine) : engine_(&engine) {}

  /// One orientation: every ruloid of P must be matched by ruloids of Q.
  PairResult check_pair(const OpenRelation& r, const TermPair& pq) const;
  /// Symmetric closure of r, every pair in both orientations.
  Verdict check_relation(const OpenRelation& r) const;
  /// Builds a relation from (P,Q) by exploring target pairs.
  Verdict search(const TermPair& pq, const Budgets& budgets = {}) const;

 private:
  const RuloidEngine* engine_;
};

StabilityReport certify_extension_stability(const InitUniverse& universe);

/// Pair renamed to v1, v2, ... with the lexicographically smaller
/// orientation first.
TermPair normalize_pattern(const TermPair& p);

}  // namespace gsos
