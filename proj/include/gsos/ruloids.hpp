#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "gsos/formula.hpp"
#include "gsos/language.hpp"
#include "gsos/semantics.hpp"

namespace gsos {

/// The junk-filtered ruloids of a context. Every member has `context` as its
/// source; target variables avoid `excluded` and vars(context).
struct RuloidSet {
  Term context;
  std::vector<Ruloid> ruloids;
  VarSet excluded;
  /// Candidates dropped by the top-level junk filter.
  std::size_t junk_removed = 0;
};

/// Premise sets over vars(context), one of which holds exactly when the
/// context cannot perform `action`. Positive premises in an alternative use
/// throwaway targets (names starting with '_').
struct DenialSet {
  Term context;
  Action action;
  std::vector<PremiseSet> alternatives;
};

bool is_throwaway(const Variable& v);

/// Derives ruloid sets for open contexts of one language. Results are
/// memoized per context modulo variable renaming; the cache may be filled
/// concurrently.
class RuloidEngine {
 public:
  explicit RuloidEngine(Language language);
  RuloidEngine(Language language, InitUniverse universe);

  const Language& language() const noexcept { return language_; }
  const InitUniverse& universe() const noexcept { return universe_; }

  RuloidSet ruloids(const Term& context, const VarSet& exclude = {}) const;
  DenialSet denial(const Term& context, const Action& action) const;

  /// Every ruloid of p has p itself as target.
  bool is_persistent(const Term& p) const;
  /// At most one ruloid of p per action. A per-term certificate only.
  bool unique_action_ruloids(const Term& p) const;

 private:
  struct Derived {
    std::vector<Ruloid> ruloids;
    std::size_t junk_removed = 0;
  };

  const Derived& derived_for(const Term& canonical) const;
  Derived derive(const Term& canonical) const;

  Language language_;
  InitUniverse universe_;
  mutable std::mutex mutex_;
  mutable std::map<Term, std::unique_ptr<Derived>> memo_;
};

/// All ruloids candidate·σ where σ injectively maps each target variable of
/// `candidate` either to a target y of `reference` that both ruloids reach
/// through the same premise subject and action, or to a fresh variable
/// avoiding `forbidden`, the variables of `reference`, and the source
/// variables of `candidate`.
std::vector<Ruloid> valid_renamings(const Ruloid& candidate, const Ruloid& reference,
                                    const VarSet& forbidden);

/// One ruloid per line, then a count line.
std::string format_ruloid_set(const RuloidSet& set);

}  // namespace gsos
