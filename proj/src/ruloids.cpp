#include "gsos/ruloids.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace gsos {

bool is_throwaway(const Variable& v) { return !v.name.empty() && v.name.front() == '_'; }

namespace {

Premise rename_premise(const Premise& p, const std::map<Variable, Variable>& m) {
  auto map_var = [&](const Variable& v) {
    auto it = m.find(v);
    return it == m.end() ? v : it->second;
  };
  Premise out{map_var(p.subject), p.action, std::nullopt};
  if (p.target) out.target = map_var(*p.target);
  return out;
}

Ruloid rename_ruloid(const Ruloid& r, const std::map<Variable, Variable>& m) {
  Ruloid out{{}, r.source, r.action, r.target};
  for (const auto& p : r.premises) out.premises.insert(rename_premise(p, m));
  Substitution s;
  for (const auto& [from, to] : m) s.bind(from, Term::var(to));
  out.source = apply_subst(r.source, s);
  out.target = apply_subst(r.target, s);
  return out;
}

// Drops throwaway positives implied by another positive on the same
// subject and action.
PremiseSet drop_redundant_throwaways(const PremiseSet& premises) {
  std::map<std::pair<Variable, Action>, bool> has_real;
  for (const auto& p : premises) {
    if (!p.target) continue;
    auto& flag = has_real[{p.subject, p.action}];
    flag = flag || !is_throwaway(*p.target);
  }
  PremiseSet out;
  std::set<std::pair<Variable, Action>> kept;
  for (const auto& p : premises) {
    if (p.target && is_throwaway(*p.target)) {
      std::pair<Variable, Action> key{p.subject, p.action};
      if (has_real[key] || !kept.insert(key).second) continue;
    }
    out.insert(p);
  }
  return out;
}

bool syntactically_contradictory(const PremiseSet& premises) {
  std::set<std::pair<Variable, Action>> pos;
  std::set<std::pair<Variable, Action>> neg;
  for (const auto& p : premises) (p.target ? pos : neg).emplace(p.subject, p.action);
  return std::any_of(neg.begin(), neg.end(), [&](const auto& k) { return pos.count(k); });
}

// Keeps only inclusion-minimal premise sets.
std::vector<PremiseSet> minimal_sets(const std::set<PremiseSet>& sets) {
  std::vector<PremiseSet> out;
  for (const auto& s : sets) {
    bool redundant = false;
    for (const auto& t : sets) {
      if (t.size() < s.size() && std::includes(s.begin(), s.end(), t.begin(), t.end())) {
        redundant = true;
        break;
      }
    }
    if (!redundant) out.push_back(s);
  }
  return out;
}

// Positive throwaway targets renamed _1, _2, ... in premise order.
PremiseSet number_throwaways(const PremiseSet& premises) {
  PremiseSet out;
  std::size_t n = 0;
  for (const auto& p : premises) {
    if (p.target && is_throwaway(*p.target))
      out.insert(Premise::positive(p.subject, p.action, Variable{"_" + std::to_string(++n)}));
    else
      out.insert(p);
  }
  return out;
}

}  // namespace

RuloidEngine::RuloidEngine(Language language)
    : language_(std::move(language)), universe_(init_universe(language_)) {}

RuloidEngine::RuloidEngine(Language language, InitUniverse universe)
    : language_(std::move(language)), universe_(std::move(universe)) {}

const RuloidEngine::Derived& RuloidEngine::derived_for(const Term& canonical) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (auto it = memo_.find(canonical); it != memo_.end()) return *it->second;
  }
  auto value = std::make_unique<Derived>(derive(canonical));
  std::lock_guard<std::mutex> lock(mutex_);
  // A concurrent fill of the same key computed an identical value.
  return *memo_.emplace(canonical, std::move(value)).first->second;
}

RuloidEngine::Derived RuloidEngine::derive(const Term& context) const {
  const VarSet context_vars = vars(context);
  VarSet base_used = context_vars;
  base_used.insert(language_.reserved_names().begin(), language_.reserved_names().end());

  std::set<Ruloid> candidates;

  if (context.is_var()) {
    const Variable x = context.variable();
    for (const auto& a : language_.acts()) {
      Variable y = fresh(base_used, x.name + "'");
      candidates.insert(Ruloid{{Premise::positive(x, a, y)}, context, a, Term::var(y)});
    }
  } else {
    const auto& args = context.args();
    std::vector<RuloidSet> sub;
    sub.reserve(args.size());
    for (const auto& a : args) sub.push_back(ruloids(a));
    std::map<std::pair<std::size_t, Action>, DenialSet> denials;

    for (std::size_t idx : language_.rules_for(context.symbol())) {
      const Ruloid& rule = language_.rules()[idx].body;
      std::map<Variable, std::size_t> position;
      for (std::size_t i = 0; i < args.size(); ++i)
        position.emplace(rule.source.args()[i].variable(), i);

      // One option list per premise: sub-ruloids for positives, denial
      // alternatives for negatives.
      std::vector<const Premise*> premises;
      std::vector<std::vector<const Ruloid*>> pos_options;
      std::vector<std::vector<const PremiseSet*>> neg_options;
      std::vector<const Premise*> positives;
      bool impossible = false;
      for (const auto& p : rule.premises) {
        const std::size_t i = position.at(p.subject);
        if (p.target) {
          std::vector<const Ruloid*> opts;
          for (const auto& r : sub[i].ruloids)
            if (r.action == p.action) opts.push_back(&r);
          impossible = impossible || opts.empty();
          positives.push_back(&p);
          pos_options.push_back(std::move(opts));
        } else {
          auto key = std::make_pair(i, p.action);
          auto it = denials.find(key);
          if (it == denials.end()) it = denials.emplace(key, denial(args[i], p.action)).first;
          std::vector<const PremiseSet*> opts;
          for (const auto& alt : it->second.alternatives) opts.push_back(&alt);
          impossible = impossible || opts.empty();
          neg_options.push_back(std::move(opts));
        }
      }
      if (impossible) continue;

      const std::size_t np = pos_options.size();
      std::vector<std::size_t> pick(np + neg_options.size(), 0);
      auto option_count = [&](std::size_t k) {
        return k < np ? pos_options[k].size() : neg_options[k - np].size();
      };
      while (true) {
        VarSet used = base_used;
        PremiseSet combined;
        Substitution sigma;
        for (std::size_t i = 0; i < args.size(); ++i)
          sigma.bind(rule.source.args()[i].variable(), args[i]);

        for (std::size_t k = 0; k < np; ++k) {
          const Ruloid& chosen = *pos_options[k][pick[k]];
          std::map<Variable, Variable> apart;
          for (const auto& t : chosen.targetvars()) {
            Variable nt = fresh(used, is_throwaway(t) ? "_" : t.name);
            used.insert(nt);
            apart.emplace(t, nt);
          }
          Ruloid renamed = rename_ruloid(chosen, apart);
          combined.insert(renamed.premises.begin(), renamed.premises.end());
          sigma.bind(*positives[k]->target, renamed.target);
        }
        for (std::size_t k = 0; k < neg_options.size(); ++k) {
          for (const auto& p : *neg_options[k][pick[np + k]]) {
            if (p.target) {
              Variable nt = fresh(used, "_");
              used.insert(nt);
              combined.insert(Premise::positive(p.subject, p.action, nt));
            } else {
              combined.insert(p);
            }
          }
        }
        candidates.insert(Ruloid{drop_redundant_throwaways(combined), context, rule.action,
                                 apply_subst(rule.target, sigma)});

        std::size_t k = 0;
        for (; k < pick.size(); ++k) {
          if (++pick[k] < option_count(k)) break;
          pick[k] = 0;
        }
        if (k == pick.size()) break;
      }
    }
  }

  Derived out;
  for (const auto& r : candidates) {
    if (is_junk(universe_, r))
      ++out.junk_removed;
    else
      out.ruloids.push_back(r);
  }
  return out;
}

RuloidSet RuloidEngine::ruloids(const Term& context, const VarSet& exclude) const {
  Renaming canon;
  const Term canonical = canonical_term(context, &canon);
  const Derived& d = derived_for(canonical);
  const Renaming back = canon.inverse();

  VarSet avoid = exclude;
  collect_vars(context, avoid);
  avoid.insert(language_.reserved_names().begin(), language_.reserved_names().end());

  RuloidSet out{context, {}, exclude, d.junk_removed};
  std::set<Ruloid> unique;
  for (const auto& r : d.ruloids) {
    // Canonical target names: ordered by (subject, action, kind, old name).
    std::vector<std::tuple<Variable, Action, bool, Variable>> order;
    for (const auto& p : r.premises) {
      if (p.target)
        order.emplace_back(back.apply(p.subject), p.action, is_throwaway(*p.target), *p.target);
    }
    std::sort(order.begin(), order.end());
    std::map<Variable, Variable> m = back.mapping();
    VarSet assigned = avoid;
    for (const auto& [subject, action, throwaway, old] : order) {
      Variable nt = fresh(assigned, throwaway ? "_" : subject.name + "'");
      assigned.insert(nt);
      m.emplace(old, nt);
    }
    unique.insert(rename_ruloid(r, m));
  }
  out.ruloids.assign(unique.begin(), unique.end());
  return out;
}

DenialSet RuloidEngine::denial(const Term& context, const Action& action) const {
  DenialSet out{context, action, {}};
  std::set<PremiseSet> alternatives{PremiseSet{}};
  for (const auto& r : ruloids(context).ruloids) {
    if (r.action != action) continue;
    std::set<PremiseSet> next;
    for (const auto& alt : alternatives) {
      for (const auto& p : r.premises) {
        PremiseSet cand = alt;
        if (p.target)
          cand.insert(Premise::negative(p.subject, p.action));
        else
          cand.insert(Premise::positive(p.subject, p.action, Variable{"_"}));
        if (syntactically_contradictory(cand)) continue;
        if (!satisfiable(universe_, hyps_of_premises(cand))) continue;
        next.insert(std::move(cand));
      }
    }
    auto minimal = minimal_sets(next);
    alternatives = std::set<PremiseSet>(minimal.begin(), minimal.end());
    if (alternatives.empty()) break;
  }
  for (const auto& alt : alternatives) out.alternatives.push_back(number_throwaways(alt));
  return out;
}

bool RuloidEngine::is_persistent(const Term& p) const {
  auto set = ruloids(p);
  return std::all_of(set.ruloids.begin(), set.ruloids.end(),
                     [&](const Ruloid& r) { return r.target == p; });
}

bool RuloidEngine::unique_action_ruloids(const Term& p) const {
  std::map<Action, std::size_t> count;
  for (const auto& r : ruloids(p).ruloids)
    if (++count[r.action] > 1) return false;
  return true;
}

std::vector<Ruloid> valid_renamings(const Ruloid& candidate, const Ruloid& reference,
                                    const VarSet& forbidden) {
  const VarSet targets = candidate.targetvars();
  if (targets.empty()) return {candidate};

  VarSet avoid = forbidden;
  for (const auto& v : reference.all_vars()) avoid.insert(v);
  for (const auto& v : candidate.sourcevars()) avoid.insert(v);

  std::vector<Variable> order(targets.begin(), targets.end());
  std::vector<std::vector<Variable>> options;
  for (const auto& t : order) {
    std::vector<Variable> opts;
    for (const auto& p : candidate.premises) {
      if (p.target != t) continue;
      for (const auto& q : reference.premises) {
        if (q.target && q.subject == p.subject && q.action == p.action) opts.push_back(*q.target);
      }
    }
    std::sort(opts.begin(), opts.end());
    opts.erase(std::unique(opts.begin(), opts.end()), opts.end());
    Variable f = fresh(avoid, t.name);
    avoid.insert(f);
    opts.push_back(f);
    options.push_back(std::move(opts));
  }

  std::set<Ruloid> out;
  std::vector<std::size_t> pick(order.size(), 0);
  while (true) {
    std::map<Variable, Variable> m;
    VarSet images;
    bool injective = true;
    for (std::size_t i = 0; i < order.size(); ++i) {
      const Variable& img = options[i][pick[i]];
      injective = injective && images.insert(img).second;
      m.emplace(order[i], img);
    }
    if (injective) out.insert(rename_ruloid(candidate, m));

    std::size_t k = 0;
    for (; k < pick.size(); ++k) {
      if (++pick[k] < options[k].size()) break;
      pick[k] = 0;
    }
    if (k == pick.size()) break;
  }
  return {out.begin(), out.end()};
}

std::string format_ruloid_set(const RuloidSet& set) {
  std::vector<std::string> lines;
  for (const auto& r : set.ruloids) lines.push_back(to_string(r));
  std::sort(lines.begin(), lines.end());
  std::ostringstream os;
  for (const auto& l : lines) os << l << '\n';
  os << set.ruloids.size() << " ruloid" << (set.ruloids.size() == 1 ? "" : "s") << " for "
     << set.context;
  if (set.junk_removed)
    os << " (" << set.junk_removed << " junk ruloid" << (set.junk_removed == 1 ? "" : "s")
       << " removed)";
  os << '\n';
  return os.str();
}

}  // namespace gsos
