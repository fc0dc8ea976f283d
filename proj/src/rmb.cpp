#include "gsos/rmb.hpp"

#include <algorithm>
#include <set>

namespace gsos {

bool OpenRelation::contains(const Term& p, const Term& q) const {
  if (identity && p == q) return true;
  const TermPair inst{p, q};
  const TermPair flipped{q, p};
  for (const auto& pattern : pairs) {
    if (match_modulo_renaming(pattern, inst)) return true;
    if (symmetric && match_modulo_renaming(pattern, flipped)) return true;
  }
  return false;
}

std::string to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::proven: return "proven";
    case Verdict::Kind::refuted: return "refuted";
    case Verdict::Kind::inconclusive: return "inconclusive";
  }
  return "?";
}

TermPair normalize_pattern(const TermPair& p) {
  auto a = canonical_pair(p);
  auto b = canonical_pair({p.second, p.first});
  return std::min(a, b);
}

namespace {

bool has_premise(const PremiseSet& h, const Variable& x, const Action& b, const Variable& y) {
  return h.count(Premise::positive(x, b, y)) != 0;
}

// 1d: a shared target y must be reached by the same x -b-> y on both sides.
bool shared_targets_ok(const Ruloid& rho, const Ruloid& cand) {
  const VarSet src_rho = rho.sourcevars();
  const VarSet src_cand = cand.sourcevars();
  const VarSet tv_rho = rho.targetvars();
  for (const auto& y : cand.targetvars()) {
    if (!tv_rho.count(y)) continue;
    bool ok = false;
    for (const auto& p : rho.premises) {
      if (p.target == y && src_cand.count(p.subject) && src_rho.count(p.subject) &&
          has_premise(cand.premises, p.subject, p.action, y)) {
        ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  return true;
}

bool hygienic(const Ruloid& rho, const Ruloid& cand) {
  VarSet targets = rho.targetvars();
  for (const auto& v : cand.targetvars()) targets.insert(v);
  VarSet sources = rho.sourcevars();
  for (const auto& v : cand.sourcevars()) sources.insert(v);
  return std::none_of(targets.begin(), targets.end(),
                      [&](const Variable& v) { return sources.count(v) != 0; });
}

std::size_t pair_size(const TermPair& p) { return std::max(p.first.size(), p.second.size()); }

// Prefers a ruloid that fails even with every hygienic candidate.
std::optional<Refutation> pick_refutation(const std::vector<PairResult>& results) {
  std::optional<Refutation> fallback;
  for (const auto& pr : results) {
    for (const auto& m : pr.matches) {
      if (m.matched) continue;
      if (m.unrepairable) {
        return Refutation{pr.pair, m.ruloid, m.unrepairable_counterexample,
                          "antecedent does not entail the antecedents of any matching set"};
      }
      if (!fallback) {
        fallback = Refutation{pr.pair, m.ruloid, m.entailment.counterexample,
                              m.candidates.empty() ? "no ruloid with the same action"
                                                   : "no candidate with a related target"};
      }
    }
  }
  return fallback;
}

}  // namespace

PairResult RmbChecker::check_pair(const OpenRelation& r, const TermPair& pq) const {
  const auto& [p, q] = pq;
  const InitUniverse& universe = engine_->universe();
  VarSet exclude = vars(p);
  collect_vars(q, exclude);

  PairResult out{pq, {}, true};
  const RuloidSet left = engine_->ruloids(p, exclude);
  const RuloidSet right = engine_->ruloids(q, exclude);

  for (const auto& rho : left.ruloids) {
    RuloidMatch m{rho, {}, hyps_of_premises(rho.premises), Formula::bottom(), {}, false, {}, false, {}};
    std::vector<Formula> admissible;
    std::vector<Formula> hygienic_only;
    for (const auto& base : right.ruloids) {
      if (base.action != rho.action) continue;
      for (auto& cand : valid_renamings(base, rho, exclude)) {
        CandidateCheck c{cand};
        c.same_action = true;
        c.hygienic = hygienic(rho, cand);
        c.shared_ok = shared_targets_ok(rho, cand);
        c.related = r.contains(rho.target, cand.target);
        if (c.hygienic && c.shared_ok) {
          hygienic_only.push_back(hyps_of_premises(cand.premises));
          if (c.related)
            admissible.push_back(hyps_of_premises(cand.premises));
          else
            m.blocked_targets.emplace_back(rho.target, cand.target);
        }
        m.candidates.push_back(std::move(c));
      }
    }
    m.hyps_j = Formula::disj_all(admissible);
    m.entailment = entails(universe, m.hyps, m.hyps_j);
    m.matched = m.entailment.holds;
    if (!m.matched) {
      auto best = entails(universe, m.hyps, Formula::disj_all(hygienic_only));
      m.unrepairable = !best.holds;
      m.unrepairable_counterexample = best.counterexample;
      out.passed = false;
    }
    out.matches.push_back(std::move(m));
  }
  return out;
}

Verdict RmbChecker::check_relation(const OpenRelation& r) const {
  Verdict v;
  v.relation = r;
  OpenRelation closed = r;
  closed.symmetric = true;
  bool all = true;
  for (const auto& pq : r.pairs) {
    for (const auto& oriented : {pq, TermPair{pq.second, pq.first}}) {
      auto res = check_pair(closed, oriented);
      all = all && res.passed;
      v.evidence.push_back(std::move(res));
    }
  }
  v.kind = all ? Verdict::Kind::proven : Verdict::Kind::refuted;
  if (!all) {
    v.refutation = pick_refutation(v.evidence);
    v.note = kRefutationCaveat;
  }
  return v;
}

Verdict RmbChecker::search(const TermPair& pq, const Budgets& budgets) const {
  Verdict v;
  if (pq.first == pq.second) {
    v.note = "identical terms";
    return v;
  }

  // Representatives keep the variable names they were discovered with;
  // keys dedupe them modulo renaming and orientation.
  std::vector<TermPair> explored{pq};
  std::set<TermPair> keys{normalize_pattern(pq)};
  std::set<TermPair> frontier_keys;
  bool truncated = false;

  while (true) {
    std::vector<bool> alive(explored.size(), true);
    std::vector<PairResult> round;
    bool changed = true;
    while (changed) {
      changed = false;
      round.clear();
      OpenRelation rel;
      for (std::size_t i = 0; i < explored.size(); ++i)
        if (alive[i]) rel.pairs.push_back(explored[i]);
      for (std::size_t i = 0; i < explored.size(); ++i) {
        if (!alive[i]) continue;
        auto fwd = check_pair(rel, explored[i]);
        auto bwd = check_pair(rel, {explored[i].second, explored[i].first});
        if (!fwd.passed || !bwd.passed) {
          alive[i] = false;
          changed = true;
        }
        round.push_back(std::move(fwd));
        round.push_back(std::move(bwd));
      }
    }

    OpenRelation rel;
    for (std::size_t i = 0; i < explored.size(); ++i)
      if (alive[i]) rel.pairs.push_back(explored[i]);

    if (alive[0]) {
      v.kind = Verdict::Kind::proven;
      v.relation = rel;
      v.evidence = std::move(round);
      return v;
    }

    // Failed pairs against the surviving relation; their blocked targets
    // are the next candidates.
    std::vector<PairResult> failures;
    std::vector<TermPair> added;
    for (std::size_t i = 0; i < explored.size(); ++i) {
      if (alive[i]) continue;
      for (const auto& oriented : {explored[i], TermPair{explored[i].second, explored[i].first}}) {
        auto res = check_pair(rel, oriented);
        for (const auto& m : res.matches) {
          if (m.matched) continue;
          for (const auto& t : m.blocked_targets) {
            if (t.first == t.second) continue;
            auto key = normalize_pattern(t);
            if (keys.count(key)) continue;
            if (pair_size(t) > budgets.max_term_size ||
                explored.size() + added.size() >= budgets.max_pairs) {
              truncated = true;
              if (frontier_keys.insert(key).second) v.frontier.push_back(t);
              continue;
            }
            keys.insert(key);
            added.push_back(t);
          }
        }
        failures.push_back(std::move(res));
      }
    }

    if (added.empty()) {
      v.relation = rel;
      v.evidence = std::move(failures);
      v.refutation = pick_refutation(v.evidence);
      if (truncated) {
        v.kind = Verdict::Kind::inconclusive;
        v.note = "budget exhausted before the relation closed";
      } else {
        v.kind = Verdict::Kind::refuted;
        v.note = kRefutationCaveat;
      }
      return v;
    }
    explored.insert(explored.end(), added.begin(), added.end());
  }
}

StabilityReport certify_extension_stability(const InitUniverse& universe) {
  StabilityReport s;
  const std::size_t n = universe.alphabet.size();
  s.realizable = universe.realizable.size();
  s.total = n >= 63 ? SIZE_MAX : (std::size_t{1} << n);
  s.stable = s.realizable == s.total;
  if (!s.stable && n <= 16) {
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
      ActionSet a{bits};
      if (!universe.contains(a)) s.missing.push_back(a);
    }
  }
  return s;
}

}  // namespace gsos
