#include "gsos/formula.hpp"

#include <set>
#include <stdexcept>
#include <tuple>

namespace gsos {

struct Formula::Node {
  Kind kind = Kind::truth;
  Variable subject;
  Action action;
  std::vector<Formula> operands;
};

Formula Formula::top() {
  static const Formula t(std::make_shared<Node>());
  return t;
}

Formula Formula::bottom() { return negate(top()); }

Formula Formula::atom(Variable x, Action a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::atom;
  n->subject = std::move(x);
  n->action = std::move(a);
  return Formula(std::move(n));
}

Formula Formula::negate(Formula f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::negation;
  n->operands.push_back(std::move(f));
  return Formula(std::move(n));
}

Formula Formula::conj(Formula lhs, Formula rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::conjunction;
  n->operands.push_back(std::move(lhs));
  n->operands.push_back(std::move(rhs));
  return Formula(std::move(n));
}

Formula Formula::disj(Formula lhs, Formula rhs) {
  return negate(conj(negate(std::move(lhs)), negate(std::move(rhs))));
}

Formula Formula::conj_all(const std::vector<Formula>& parts) {
  if (parts.empty()) return top();
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = conj(acc, parts[i]);
  return acc;
}

Formula Formula::disj_all(const std::vector<Formula>& parts) {
  if (parts.empty()) return bottom();
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = disj(acc, parts[i]);
  return acc;
}

Formula::Kind Formula::kind() const noexcept { return node_->kind; }

const Variable& Formula::subject() const {
  if (kind() != Kind::atom) throw std::logic_error("not an atom");
  return node_->subject;
}

const Action& Formula::action() const {
  if (kind() != Kind::atom) throw std::logic_error("not an atom");
  return node_->action;
}

const Formula& Formula::operand(std::size_t i) const { return node_->operands.at(i); }

namespace {

void collect(const Formula& f, VarSet& out, std::size_t& atoms) {
  switch (f.kind()) {
    case Formula::Kind::truth: return;
    case Formula::Kind::atom:
      out.insert(f.subject());
      ++atoms;
      return;
    case Formula::Kind::negation: collect(f.operand(), out, atoms); return;
    case Formula::Kind::conjunction:
      collect(f.operand(0), out, atoms);
      collect(f.operand(1), out, atoms);
      return;
  }
}

bool is_false(const Formula& f) {
  return f.kind() == Formula::Kind::negation && f.operand().kind() == Formula::Kind::truth;
}

// Matches !(!a & !b), the derived disjunction.
bool is_disjunction(const Formula& f) {
  if (f.kind() != Formula::Kind::negation) return false;
  const Formula& c = f.operand();
  return c.kind() == Formula::Kind::conjunction &&
         c.operand(0).kind() == Formula::Kind::negation &&
         c.operand(1).kind() == Formula::Kind::negation;
}

enum class Prec { disj = 0, conj = 1, unary = 2 };

std::string print(const Formula& f, Prec ctx) {
  auto wrap = [&](std::string s, Prec own) { return own < ctx ? "(" + s + ")" : s; };
  switch (f.kind()) {
    case Formula::Kind::truth: return "true";
    case Formula::Kind::atom: return f.subject().name + " -" + f.action().label + "->";
    case Formula::Kind::conjunction:
      return wrap(print(f.operand(0), Prec::conj) + " & " + print(f.operand(1), Prec::unary),
                  Prec::conj);
    case Formula::Kind::negation:
      if (is_false(f)) return "false";
      if (is_disjunction(f)) {
        const Formula& c = f.operand();
        return wrap(print(c.operand(0).operand(), Prec::disj) + " | " +
                        print(c.operand(1).operand(), Prec::conj),
                    Prec::disj);
      }
      return "!" + print(f.operand(), Prec::unary);
  }
  return "?";
}

}  // namespace

VarSet Formula::vars() const {
  VarSet out;
  std::size_t atoms = 0;
  collect(*this, out, atoms);
  return out;
}

std::size_t Formula::atom_count() const {
  VarSet out;
  std::size_t atoms = 0;
  collect(*this, out, atoms);
  return atoms;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Formula::Kind::truth: return true;
    case Formula::Kind::atom: return a.subject() == b.subject() && a.action() == b.action();
    case Formula::Kind::negation: return a.operand() == b.operand();
    case Formula::Kind::conjunction:
      return a.operand(0) == b.operand(0) && a.operand(1) == b.operand(1);
  }
  return false;
}

std::string to_string(const Formula& f) { return print(f, Prec::disj); }

std::string to_string(const InitAssignment& a, const ActionAlphabet& alphabet) {
  std::string out;
  for (const auto& [v, s] : a) {
    if (!out.empty()) out += ", ";
    out += v.name + ":" + format_action_set(alphabet, s);
  }
  return "[" + out + "]";
}

Formula hyps_of_premises(const PremiseSet& premises) {
  std::set<std::tuple<Variable, Action, bool>> literals;
  for (const auto& p : premises) literals.emplace(p.subject, p.action, p.is_positive());
  std::vector<Formula> parts;
  for (const auto& [x, a, positive] : literals) {
    Formula at = Formula::atom(x, a);
    parts.push_back(positive ? at : Formula::negate(at));
  }
  return Formula::conj_all(parts);
}

Formula hyps_of_ruloid_set(const std::vector<Ruloid>& ruloids) {
  std::vector<Formula> parts;
  for (const auto& r : ruloids) parts.push_back(hyps_of_premises(r.premises));
  return Formula::disj_all(parts);
}

bool eval(const Formula& f, const InitAssignment& assignment, const ActionAlphabet& alphabet) {
  switch (f.kind()) {
    case Formula::Kind::truth: return true;
    case Formula::Kind::atom: {
      auto it = assignment.find(f.subject());
      if (it == assignment.end()) throw UnboundVariable("unbound variable '" + f.subject().name + "'");
      return it->second.contains(alphabet.index(f.action()));
    }
    case Formula::Kind::negation: return !eval(f.operand(), assignment, alphabet);
    case Formula::Kind::conjunction:
      return eval(f.operand(0), assignment, alphabet) && eval(f.operand(1), assignment, alphabet);
  }
  return false;
}

EntailmentResult entails(const InitUniverse& universe, const Formula& lhs, const Formula& rhs) {
  EntailmentResult result;
  if (universe.empty()) return result;

  VarSet vs = lhs.vars();
  for (const auto& v : rhs.vars()) vs.insert(v);
  std::vector<Variable> order(vs.begin(), vs.end());
  const auto& values = universe.realizable;

  std::vector<std::size_t> pick(order.size(), 0);
  InitAssignment alpha;
  while (true) {
    for (std::size_t i = 0; i < order.size(); ++i) alpha[order[i]] = values[pick[i]];
    if (eval(lhs, alpha, universe.alphabet) && !eval(rhs, alpha, universe.alphabet)) {
      result.holds = false;
      for (const auto& [v, s] : alpha) result.witness.bind(v, universe.witness_for(s));
      result.counterexample = std::move(alpha);
      return result;
    }
    // Odometer with the last variable fastest, so the first counterexample
    // is lexicographically least.
    std::size_t k = order.size();
    while (k > 0) {
      if (++pick[k - 1] < values.size()) break;
      pick[k - 1] = 0;
      --k;
    }
    if (k == 0) break;
  }
  return result;
}

bool satisfiable(const InitUniverse& universe, const Formula& f) {
  return !entails(universe, f, Formula::bottom()).holds;
}

bool is_junk(const InitUniverse& universe, const Ruloid& ruloid) {
  return !satisfiable(universe, hyps_of_premises(ruloid.premises));
}

}  // namespace gsos
