#include "gsos/term.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace gsos {

struct Term::Node {
  bool is_var = false;
  bool closed = true;
  std::string symbol;
  std::vector<Term> args;
  std::size_t hash = 0;
  std::size_t size = 1;
  std::size_t depth = 0;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Term Term::var(Variable v) {
  auto node = std::make_shared<Node>();
  node->is_var = true;
  node->closed = false;
  node->symbol = std::move(v.name);
  node->hash = mix(0x51ed270b, std::hash<std::string>{}(node->symbol));
  return Term(std::move(node));
}

Term Term::app(std::string op, std::vector<Term> args) {
  auto node = std::make_shared<Node>();
  node->symbol = std::move(op);
  std::size_t h = mix(0x2545f491, std::hash<std::string>{}(node->symbol));
  for (const auto& a : args) {
    h = mix(h, a.hash());
    node->closed = node->closed && a.is_closed();
    node->size += a.size();
    node->depth = std::max(node->depth, a.depth() + 1);
  }
  node->hash = h;
  node->args = std::move(args);
  return Term(std::move(node));
}

bool Term::is_var() const noexcept { return node_->is_var; }
bool Term::is_closed() const noexcept { return node_->closed; }
const std::string& Term::symbol() const noexcept { return node_->symbol; }
const std::vector<Term>& Term::args() const noexcept { return node_->args; }
std::size_t Term::size() const noexcept { return node_->size; }
std::size_t Term::depth() const noexcept { return node_->depth; }
std::size_t Term::hash() const noexcept { return node_->hash; }

Variable Term::variable() const {
  if (!is_var()) throw std::logic_error("term is not a variable: " + to_string(*this));
  return Variable{node_->symbol};
}

bool operator==(const Term& lhs, const Term& rhs) noexcept {
  if (lhs.node_ == rhs.node_) return true;
  if (lhs.hash() != rhs.hash() || lhs.size() != rhs.size()) return false;
  return (lhs <=> rhs) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Term& lhs, const Term& rhs) noexcept {
  if (lhs.node_ == rhs.node_) return std::strong_ordering::equal;
  // Variables sort before applications.
  if (lhs.is_var() != rhs.is_var())
    return lhs.is_var() ? std::strong_ordering::less : std::strong_ordering::greater;
  if (auto c = lhs.symbol() <=> rhs.symbol(); c != 0) return c;
  const auto& la = lhs.args();
  const auto& ra = rhs.args();
  if (auto c = la.size() <=> ra.size(); c != 0) return c;
  for (std::size_t i = 0; i < la.size(); ++i) {
    if (auto c = la[i] <=> ra[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

namespace {

void print(std::ostream& os, const Term& t) {
  os << t.symbol();
  if (t.is_var() || t.args().empty()) return;
  os << '(';
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i) os << ',';
    print(os, t.args()[i]);
  }
  os << ')';
}

}  // namespace

std::string to_string(const Term& t) {
  std::ostringstream os;
  print(os, t);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Term& t) {
  print(os, t);
  return os;
}

void collect_vars(const Term& t, VarSet& out) {
  if (t.is_closed()) return;
  if (t.is_var()) {
    out.insert(Variable{t.symbol()});
    return;
  }
  for (const auto& a : t.args()) collect_vars(a, out);
}

VarSet vars(const Term& t) {
  VarSet out;
  collect_vars(t, out);
  return out;
}

namespace {

void collect_ordered(const Term& t, std::vector<Variable>& out, VarSet& seen) {
  if (t.is_closed()) return;
  if (t.is_var()) {
    Variable v{t.symbol()};
    if (seen.insert(v).second) out.push_back(std::move(v));
    return;
  }
  for (const auto& a : t.args()) collect_ordered(a, out, seen);
}

}  // namespace

std::vector<Variable> vars_in_order(const Term& t) {
  std::vector<Variable> out;
  VarSet seen;
  collect_ordered(t, out, seen);
  return out;
}

const Term* Substitution::find(const Variable& v) const {
  auto it = mapping_.find(v);
  return it == mapping_.end() ? nullptr : &it->second;
}

Term apply_subst(const Term& t, const Substitution& s) {
  if (t.is_closed() || s.empty()) return t;
  if (t.is_var()) {
    const Term* image = s.find(Variable{t.symbol()});
    return image ? *image : t;
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  bool changed = false;
  for (const auto& a : t.args()) {
    args.push_back(apply_subst(a, s));
    changed = changed || !(args.back() == a);
  }
  return changed ? Term::app(t.symbol(), std::move(args)) : t;
}

std::optional<Renaming> Renaming::make(std::map<Variable, Variable> mapping) {
  VarSet image;
  for (const auto& [from, to] : mapping) {
    if (!image.insert(to).second) return std::nullopt;
  }
  return Renaming(std::move(mapping));
}

Variable Renaming::apply(const Variable& v) const {
  auto it = mapping_.find(v);
  return it == mapping_.end() ? v : it->second;
}

Term Renaming::apply(const Term& t) const {
  if (mapping_.empty()) return t;
  Substitution s;
  for (const auto& [from, to] : mapping_) s.bind(from, Term::var(to));
  return apply_subst(t, s);
}

Renaming Renaming::after(const Renaming& first) const {
  std::map<Variable, Variable> out;
  for (const auto& [from, to] : first.mapping_) out[from] = apply(to);
  for (const auto& [from, to] : mapping_) out.emplace(from, to);
  return Renaming(std::move(out));
}

Renaming Renaming::inverse() const {
  std::map<Variable, Variable> out;
  for (const auto& [from, to] : mapping_) {
    if (!out.emplace(to, from).second) throw std::logic_error("renaming is not injective");
  }
  return Renaming(std::move(out));
}

Variable fresh(const VarSet& exclude, const std::string& hint) {
  std::string base = hint;
  while (!base.empty() && std::isdigit(static_cast<unsigned char>(base.back()))) base.pop_back();
  if (base.empty()) base = "v";
  Variable candidate{base};
  for (std::size_t i = 1; exclude.count(candidate); ++i) candidate.name = base + std::to_string(i);
  return candidate;
}

namespace {

bool match_into(const Term& pattern, const Term& instance, std::map<Variable, Variable>& fwd,
                std::map<Variable, Variable>& back) {
  if (pattern.is_var()) {
    if (!instance.is_var()) return false;
    Variable p{pattern.symbol()};
    Variable i{instance.symbol()};
    auto [fit, fnew] = fwd.emplace(p, i);
    if (!fnew && fit->second != i) return false;
    auto [bit, bnew] = back.emplace(i, p);
    if (!bnew && bit->second != p) return false;
    return true;
  }
  if (instance.is_var() || pattern.symbol() != instance.symbol() ||
      pattern.args().size() != instance.args().size())
    return false;
  if (pattern.is_closed() || instance.is_closed()) return pattern == instance;
  for (std::size_t k = 0; k < pattern.args().size(); ++k) {
    if (!match_into(pattern.args()[k], instance.args()[k], fwd, back)) return false;
  }
  return true;
}

}  // namespace

std::optional<Renaming> match_modulo_renaming(const std::pair<Term, Term>& pattern,
                                              const std::pair<Term, Term>& instance) {
  std::map<Variable, Variable> fwd;
  std::map<Variable, Variable> back;
  if (!match_into(pattern.first, instance.first, fwd, back)) return std::nullopt;
  if (!match_into(pattern.second, instance.second, fwd, back)) return std::nullopt;
  return Renaming::make(std::move(fwd));
}

std::pair<Term, Term> canonical_pair(const std::pair<Term, Term>& p) {
  std::vector<Variable> order = vars_in_order(p.first);
  VarSet seen(order.begin(), order.end());
  for (auto& v : vars_in_order(p.second)) {
    if (seen.insert(v).second) order.push_back(v);
  }
  Substitution s;
  for (std::size_t i = 0; i < order.size(); ++i)
    s.bind(order[i], Term::var("v" + std::to_string(i + 1)));
  return {apply_subst(p.first, s), apply_subst(p.second, s)};
}

Term canonical_term(const Term& t, Renaming* used) {
  std::map<Variable, Variable> m;
  std::size_t i = 0;
  for (auto& v : vars_in_order(t)) m.emplace(v, Variable{"v" + std::to_string(++i)});
  auto r = *Renaming::make(std::move(m));
  if (used) *used = r;
  return r.apply(t);
}

}  // namespace gsos
