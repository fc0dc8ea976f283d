#pragma once

// Independent reference implementations used as test oracles. None of them
// share code paths with the library beyond the plain data types.

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gsos/formula.hpp"
#include "gsos/language.hpp"
#include "gsos/parser.hpp"
#include "gsos/term.hpp"

#ifndef GSOS_CORPUS_DIR
#error "GSOS_CORPUS_DIR must point at the shipped corpus"
#endif

namespace oracle {

using gsos::Action;
using gsos::Language;
using gsos::Term;
using gsos::Variable;

inline std::string corpus_path(const std::string& name) {
  return std::string(GSOS_CORPUS_DIR) + "/" + name;
}

inline gsos::SpecFile load(const std::string& name) {
  return gsos::parse_spec_file(corpus_path(name));
}

/// Replaces variables one node at a time; no sharing with apply_subst.
inline Term replace(const Term& t, const std::map<Variable, Term>& m) {
  if (t.is_var()) {
    auto it = m.find(t.variable());
    return it == m.end() ? t : it->second;
  }
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(replace(a, m));
  return Term::app(t.symbol(), args);
}

using Moves = std::vector<std::pair<Action, Term>>;

/// Rule firing by brute force: every premise-target assignment drawn from
/// the children's transitions is tried, then checked against all premises.
inline Moves naive_step(const Language& lang, const Term& p) {
  std::vector<Moves> kids;
  for (const auto& a : p.args()) kids.push_back(naive_step(lang, a));
  std::set<std::pair<Action, Term>> out;
  for (const auto& rule : lang.rules()) {
    const auto& r = rule.body;
    if (r.source.symbol() != p.symbol() || r.source.args().size() != p.args().size()) continue;
    std::map<Variable, std::size_t> pos;
    std::map<Variable, Term> sigma;
    for (std::size_t i = 0; i < p.args().size(); ++i) {
      pos[r.source.args()[i].variable()] = i;
      sigma.emplace(r.source.args()[i].variable(), p.args()[i]);
    }
    std::vector<gsos::Premise> prems(r.premises.begin(), r.premises.end());
    std::function<void(std::size_t, std::map<Variable, Term>&)> go =
        [&](std::size_t k, std::map<Variable, Term>& s) {
          if (k == prems.size()) {
            out.emplace(r.action, replace(r.target, s));
            return;
          }
          const auto& pr = prems[k];
          const Moves& m = kids[pos.at(pr.subject)];
          if (!pr.target) {
            for (const auto& [a, q] : m)
              if (a == pr.action) return;
            go(k + 1, s);
            return;
          }
          for (const auto& [a, q] : m) {
            if (a != pr.action) continue;
            s.insert_or_assign(*pr.target, q);
            go(k + 1, s);
            s.erase(*pr.target);
          }
        };
    go(0, sigma);
  }
  return {out.begin(), out.end()};
}

inline std::set<Action> naive_init(const Language& lang, const Term& p) {
  std::set<Action> s;
  for (const auto& [a, q] : naive_step(lang, p)) s.insert(a);
  return s;
}

/// All closed terms of depth <= d, built level by level.
inline std::vector<Term> closed_terms(const Language& lang, std::size_t d) {
  std::set<Term> all;
  for (std::size_t level = 0; level <= d; ++level) {
    std::vector<Term> prev(all.begin(), all.end());
    for (const auto& op : lang.signature().ops()) {
      if (op.arity == 0) {
        all.insert(Term::app(op.name));
        continue;
      }
      std::vector<std::size_t> idx(op.arity, 0);
      if (prev.empty()) continue;
      while (true) {
        std::vector<Term> args;
        for (auto i : idx) args.push_back(prev[i]);
        all.insert(Term::app(op.name, args));
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == prev.size()) idx[k++] = 0;
        if (k == idx.size()) break;
      }
    }
  }
  return {all.begin(), all.end()};
}

/// Explicit LTS through naive_step, for terms with finite reachable sets.
struct Graph {
  std::vector<Term> states;
  std::vector<std::vector<std::pair<Action, std::size_t>>> succ;
};

inline Graph explore(const Language& lang, const std::vector<Term>& roots, std::size_t limit = 5000) {
  Graph g;
  std::map<Term, std::size_t> id;
  auto intern = [&](const Term& t) {
    auto [it, fresh] = id.emplace(t, g.states.size());
    if (fresh) {
      g.states.push_back(t);
      g.succ.emplace_back();
    }
    return it->second;
  };
  for (const auto& r : roots) intern(r);
  for (std::size_t i = 0; i < g.states.size() && g.states.size() < limit; ++i) {
    for (const auto& [a, q] : naive_step(lang, g.states[i])) {
      std::size_t j = intern(q);
      g.succ[i].emplace_back(a, j);
    }
  }
  return g;
}

/// Greatest fixpoint over the full state-pair relation.
inline std::vector<std::vector<bool>> naive_bisimilarity(
    const std::vector<std::vector<std::pair<Action, std::size_t>>>& succ) {
  const std::size_t n = succ.size();
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, true));
  auto simulated = [&](std::size_t s, std::size_t t) {
    for (const auto& [a, s2] : succ[s]) {
      bool found = false;
      for (const auto& [b, t2] : succ[t])
        if (a == b && rel[s2][t2]) found = true;
      if (!found) return false;
    }
    return true;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t t = 0; t < n; ++t)
        if (rel[s][t] && !(simulated(s, t) && simulated(t, s))) {
          rel[s][t] = false;
          changed = true;
        }
  }
  return rel;
}

inline bool naive_bisimilar(const Language& lang, const Term& p, const Term& q) {
  Graph g = explore(lang, {p, q});
  auto rel = naive_bisimilarity(g.succ);
  return rel[0][p == q ? 0 : 1];
}

/// Formula truth under a closed substitution, stepping the terms directly.
inline bool holds(const Language& lang, const gsos::Formula& f, const std::map<Variable, Term>& s) {
  using K = gsos::Formula::Kind;
  switch (f.kind()) {
    case K::truth: return true;
    case K::atom: return naive_init(lang, s.at(f.subject())).count(f.action()) != 0;
    case K::negation: return !holds(lang, f.operand(), s);
    case K::conjunction: return holds(lang, f.operand(0), s) && holds(lang, f.operand(1), s);
  }
  return false;
}

inline gsos::Formula random_formula(std::mt19937& rng, const std::vector<Variable>& vs,
                                    const std::vector<Action>& acts, std::size_t atoms) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  std::function<gsos::Formula(std::size_t)> build = [&](std::size_t budget) -> gsos::Formula {
    if (budget == 0) return pick(2) ? gsos::Formula::top() : gsos::Formula::bottom();
    if (budget == 1) {
      auto a = gsos::Formula::atom(vs[pick(vs.size())], acts[pick(acts.size())]);
      return pick(3) == 0 ? gsos::Formula::negate(a) : a;
    }
    std::size_t left = 1 + pick(budget - 1);
    auto l = build(left), r = build(budget - left);
    switch (pick(3)) {
      case 0: return gsos::Formula::conj(l, r);
      case 1: return gsos::Formula::disj(l, r);
      default: return gsos::Formula::negate(gsos::Formula::conj(l, r));
    }
  };
  return build(atoms);
}

/// Random closed term over the BCCSP prelude with at most `size` nodes.
inline Term random_bccsp(std::mt19937& rng, const std::vector<Action>& acts, std::size_t size) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  if (size <= 1) return Term::app("0");
  if (size == 2 || pick(2) == 0)
    return Term::app(gsos::prefix_op(acts[pick(acts.size())]), {random_bccsp(rng, acts, size - 1)});
  std::size_t left = 1 + pick(size - 2);
  return Term::app("plus", {random_bccsp(rng, acts, left), random_bccsp(rng, acts, size - 1 - left)});
}

}  // namespace oracle
