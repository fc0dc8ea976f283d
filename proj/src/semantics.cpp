#include "gsos/semantics.hpp"

#include <algorithm>
#include <optional>
#include <tuple>
#include <sstream>

namespace gsos {

const std::vector<Transition>& Stepper::step(const Term& p) {
  if (auto it = cache_.find(p); it != cache_.end()) return it->second;
  auto result = compute(p);
  return cache_.emplace(p, std::move(result)).first->second;
}

ActionSet Stepper::init(const Term& p) {
  ActionSet s;
  for (const auto& [a, q] : step(p)) s.insert(language_->alphabet().index(a));
  return s;
}

const Stepper::Compiled& Stepper::compiled(std::size_t idx) {
  if (compiled_.empty()) compiled_.resize(language_->rules().size());
  auto& c = compiled_[idx];
  if (c) return *c;
  const Ruloid& rule = language_->rules()[idx].body;
  Compiled out;
  std::map<Variable, std::size_t> position;
  for (std::size_t i = 0; i < rule.source.args().size(); ++i) {
    position.emplace(rule.source.args()[i].variable(), i);
    out.source_vars.push_back(rule.source.args()[i].variable());
  }
  for (const auto& prem : rule.premises) {
    Compiled::Probe probe{position.at(prem.subject), prem.action, prem.target};
    (prem.target ? out.positive : out.negative).push_back(std::move(probe));
  }
  c = std::move(out);
  return *c;
}

std::vector<Transition> Stepper::compute(const Term& p) {
  if (!p.is_closed()) throw NotClosed("term is not closed: " + to_string(p));
  const auto& args = p.args();
  // Elements of an unordered_map keep their address across rehashing.
  std::vector<const std::vector<Transition>*> children;
  children.reserve(args.size());
  for (const auto& a : args) children.push_back(&step(a));

  auto has = [&](std::size_t pos, const Action& act) {
    return std::any_of(children[pos]->begin(), children[pos]->end(),
                       [&](const Transition& t) { return t.first == act; });
  };

  std::vector<Transition> out;
  for (std::size_t idx : language_->rules_for(p.symbol())) {
    if (language_->rules()[idx].body.source.args().size() != args.size()) continue;
    const Compiled& rule = compiled(idx);
    const Ruloid& body = language_->rules()[idx].body;

    if (std::any_of(rule.negative.begin(), rule.negative.end(),
                    [&](const Compiled::Probe& n) { return has(n.position, n.action); }))
      continue;

    bool blocked = false;
    std::vector<std::vector<const Term*>> options(rule.positive.size());
    for (std::size_t k = 0; k < rule.positive.size(); ++k) {
      for (const auto& [a, q] : *children[rule.positive[k].position])
        if (a == rule.positive[k].action) options[k].push_back(&q);
      if (options[k].empty()) blocked = true;
    }
    if (blocked) continue;

    Substitution sigma;
    for (std::size_t i = 0; i < args.size(); ++i) sigma.bind(rule.source_vars[i], args[i]);
    std::vector<std::size_t> pick(options.size(), 0);
    while (true) {
      // Premise targets are distinct from the source variables; rebinding
      // them in place is enough.
      for (std::size_t k = 0; k < options.size(); ++k)
        sigma.bind(*rule.positive[k].target, *options[k][pick[k]]);
      out.emplace_back(body.action, apply_subst(body.target, sigma));

      std::size_t k = 0;
      for (; k < pick.size(); ++k) {
        if (++pick[k] < options[k].size()) break;
        pick[k] = 0;
      }
      if (k == pick.size()) break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Transition> step(const Language& language, const Term& p) {
  Stepper s(language);
  return s.step(p);
}

Lts build_lts(const Language& language, const Term& p, std::size_t max_states) {
  return build_lts(language, std::span<const Term>(&p, 1), max_states);
}

Lts build_lts(const Language& language, std::span<const Term> roots, std::size_t max_states) {
  for (const auto& r : roots)
    if (!r.is_closed()) throw NotClosed("term is not closed: " + to_string(r));
  Stepper stepper(language);
  Lts lts;
  std::unordered_map<Term, std::size_t, TermHash> ids;
  auto intern = [&](const Term& t) -> std::optional<std::size_t> {
    if (auto it = ids.find(t); it != ids.end()) return it->second;
    if (lts.states.size() >= max_states) {
      lts.truncated = true;
      return std::nullopt;
    }
    ids.emplace(t, lts.states.size());
    lts.states.push_back(t);
    return lts.states.size() - 1;
  };
  for (const auto& r : roots) intern(r);
  for (std::size_t i = 0; i < lts.states.size(); ++i) {
    Term s = lts.states[i];
    for (const auto& [a, q] : stepper.step(s)) {
      if (auto id = intern(q)) lts.transitions.push_back({i, a, *id});
    }
  }
  return lts;
}

std::string export_lts(const Lts& lts) {
  std::ostringstream os;
  for (std::size_t i = 0; i < lts.states.size(); ++i) os << "state " << i << ' ' << lts.states[i] << '\n';
  for (const auto& t : lts.transitions)
    os << "trans " << t.from << ' ' << t.action.label << ' ' << t.to << '\n';
  if (lts.truncated) os << "# budget exceeded: state limit reached\n";
  return os.str();
}

std::vector<std::size_t> bisimulation_blocks(const Lts& lts) {
  const std::size_t n = lts.states.size();
  // Integer action ids keep signature comparisons cheap.
  std::map<Action, std::size_t> act_id;
  for (const auto& t : lts.transitions) act_id.emplace(t.action, act_id.size());
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> succ(n);
  for (const auto& t : lts.transitions) succ[t.from].emplace_back(act_id.at(t.action), t.to);

  struct VecHash {
    std::size_t operator()(const std::vector<std::size_t>& v) const noexcept {
      std::size_t h = v.size();
      for (auto x : v) h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      return h;
    }
  };

  std::vector<std::size_t> block(n, 0);
  std::size_t blocks = n ? 1 : 0;
  std::vector<std::pair<std::size_t, std::size_t>> moves;
  while (true) {
    // Signature: own block, then sorted distinct (action, target block).
    std::unordered_map<std::vector<std::size_t>, std::size_t, VecHash> numbering;
    numbering.reserve(blocks * 2);
    std::vector<std::size_t> next(n);
    std::vector<std::size_t> sig;
    for (std::size_t s = 0; s < n; ++s) {
      moves.clear();
      for (const auto& [a, t] : succ[s]) moves.emplace_back(a, block[t]);
      std::sort(moves.begin(), moves.end());
      moves.erase(std::unique(moves.begin(), moves.end()), moves.end());
      sig.clear();
      sig.push_back(block[s]);
      for (const auto& [a, t] : moves) {
        sig.push_back(a);
        sig.push_back(t);
      }
      next[s] = numbering.emplace(sig, numbering.size()).first->second;
    }
    block = std::move(next);
    if (numbering.size() == blocks) break;
    blocks = numbering.size();
  }
  return block;
}

std::string to_string(BisimVerdict v) {
  switch (v) {
    case BisimVerdict::yes: return "yes";
    case BisimVerdict::no: return "no";
    case BisimVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

BisimVerdict bisimilar_closed(const Language& language, const Term& p, const Term& q,
                              std::size_t max_states) {
  const Term roots[] = {p, q};
  Lts lts = build_lts(language, roots, max_states);
  if (lts.truncated) return BisimVerdict::inconclusive;
  auto block = bisimulation_blocks(lts);
  const std::size_t qi = (p == q) ? 0 : 1;
  return block[0] == block[qi] ? BisimVerdict::yes : BisimVerdict::no;
}

InitUniverse init_universe(const Language& language) {
  InitUniverse u;
  u.alphabet = language.alphabet();
  std::vector<ActionSet> found;

  struct CompiledRule {
    std::size_t action;
    // (argument position, action index, positive?)
    std::vector<std::tuple<std::size_t, std::size_t, bool>> tests;
  };
  std::map<std::string, std::vector<CompiledRule>> compiled;
  for (const auto& op : language.signature().ops()) {
    auto& list = compiled[op.name];
    for (std::size_t idx : language.rules_for(op.name)) {
      const Ruloid& r = language.rules()[idx].body;
      std::map<Variable, std::size_t> position;
      for (std::size_t i = 0; i < r.source.args().size(); ++i)
        position.emplace(r.source.args()[i].variable(), i);
      CompiledRule c{language.alphabet().index(r.action), {}};
      for (const auto& p : r.premises)
        c.tests.emplace_back(position.at(p.subject), language.alphabet().index(p.action),
                             p.is_positive());
      list.push_back(std::move(c));
    }
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& op : language.signature().ops()) {
      const auto& rules = compiled[op.name];
      const std::size_t l = op.arity;
      if (l > 0 && found.empty()) continue;
      const std::size_t snapshot = found.size();
      std::vector<std::size_t> pick(l, 0);
      while (true) {
        ActionSet enabled;
        for (const auto& r : rules) {
          bool fires = true;
          for (const auto& [pos, act, positive] : r.tests) {
            if (found[pick[pos]].contains(act) != positive) {
              fires = false;
              break;
            }
          }
          if (fires) enabled.insert(r.action);
        }
        if (!u.witness.count(enabled)) {
          std::vector<Term> args;
          for (std::size_t i = 0; i < l; ++i) args.push_back(u.witness.at(found[pick[i]]));
          u.witness.emplace(enabled, Term::app(op.name, std::move(args)));
          found.push_back(enabled);
          changed = true;
        }
        std::size_t k = 0;
        for (; k < l; ++k) {
          if (++pick[k] < snapshot) break;
          pick[k] = 0;
        }
        if (k == l) break;
      }
    }
  }
  u.realizable = std::move(found);
  std::sort(u.realizable.begin(), u.realizable.end());
  return u;
}

std::vector<Term> closed_terms_up_to_depth(const Language& language, std::size_t max_depth,
                                           std::size_t limit) {
  std::vector<Term> all;
  std::vector<std::size_t> depth_end;  // all[0, depth_end[d]) has depth <= d
  for (std::size_t d = 0; d <= max_depth; ++d) {
    const std::size_t prev_end = d == 0 ? 0 : depth_end[d - 1];
    const std::size_t pool = prev_end;
    for (const auto& op : language.signature().ops()) {
      if (all.size() >= limit) break;
      if (op.arity == 0) {
        if (d == 0) all.push_back(Term::app(op.name));
        continue;
      }
      if (d == 0 || pool == 0) continue;
      // Tuples over terms of depth < d with at least one of depth exactly d-1.
      const std::size_t exact_begin = d >= 2 ? depth_end[d - 2] : 0;
      std::vector<std::size_t> pick(op.arity, 0);
      while (all.size() < limit) {
        bool has_deep = std::any_of(pick.begin(), pick.end(),
                                    [&](std::size_t i) { return i >= exact_begin; });
        if (has_deep) {
          std::vector<Term> args;
          for (auto i : pick) args.push_back(all[i]);
          all.push_back(Term::app(op.name, std::move(args)));
        }
        std::size_t k = 0;
        for (; k < pick.size(); ++k) {
          if (++pick[k] < pool) break;
          pick[k] = 0;
        }
        if (k == pick.size()) break;
      }
    }
    depth_end.push_back(all.size());
  }
  return all;
}

}  // namespace gsos
