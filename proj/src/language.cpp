#include "gsos/language.hpp"

#include <algorithm>
#include <sstream>

namespace gsos {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message,
                       std::vector<std::string> expected)
    : Error([&] {
        std::ostringstream os;
        os << line << ':' << column << ": " << message;
        if (!expected.empty()) {
          os << " (expected ";
          for (std::size_t i = 0; i < expected.size(); ++i) os << (i ? ", " : "") << expected[i];
          os << ')';
        }
        return os.str();
      }()),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : Error([&] {
        std::ostringstream os;
        os << "invalid language:";
        for (const auto& d : diagnostics) os << "\n  " << d.rule << ": " << d.message;
        return os.str();
      }()),
      diagnostics_(std::move(diagnostics)) {}

void Signature::add(std::string name, std::size_t arity) {
  if (index_.count(name)) throw Error("operation '" + name + "' declared twice");
  index_.emplace(name, ops_.size());
  ops_.push_back(OpDecl{std::move(name), arity});
}

std::optional<std::size_t> Signature::arity(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return ops_[it->second].arity;
}

VarSet Ruloid::targetvars() const {
  VarSet out;
  for (const auto& p : premises)
    if (p.target) out.insert(*p.target);
  return out;
}

VarSet Ruloid::all_vars() const {
  VarSet out = vars(source);
  collect_vars(target, out);
  for (const auto& p : premises) {
    out.insert(p.subject);
    if (p.target) out.insert(*p.target);
  }
  return out;
}

ActionAlphabet::ActionAlphabet(std::vector<Action> acts) {
  std::sort(acts.begin(), acts.end());
  acts.erase(std::unique(acts.begin(), acts.end()), acts.end());
  if (acts.size() > 63) throw Error("at most 63 actions are supported");
  acts_ = std::move(acts);
  for (std::size_t i = 0; i < acts_.size(); ++i) index_.emplace(acts_[i], i);
}

std::size_t ActionAlphabet::index(const Action& a) const {
  auto it = index_.find(a);
  if (it == index_.end()) throw Error("undeclared action '" + a.label + "'");
  return it->second;
}

std::string format_action_set(const ActionAlphabet& alphabet, ActionSet s) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    if (!s.contains(i)) continue;
    if (!first) out += ',';
    out += alphabet.actions()[i].label;
    first = false;
  }
  return out + "}";
}

Language::Language(std::vector<Action> acts, Signature sig, std::vector<Rule> rules)
    : alphabet_(std::move(acts)), sig_(std::move(sig)), rules_(std::move(rules)) {
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    by_principal_[rules_[i].principal()].push_back(i);
  }
  for (const auto& op : sig_.ops()) reserved_.insert(Variable{op.name});
}

const std::vector<std::size_t>& Language::rules_for(const std::string& op) const {
  static const std::vector<std::size_t> none;
  auto it = by_principal_.find(op);
  return it == by_principal_.end() ? none : it->second;
}

void check_well_sorted(const Signature& sig, const Term& t) {
  if (t.is_var()) {
    if (sig.contains(t.symbol()))
      throw Error("variable name '" + t.symbol() + "' collides with an operation symbol");
    return;
  }
  auto arity = sig.arity(t.symbol());
  if (!arity) throw Error("undeclared operation '" + t.symbol() + "'");
  if (*arity != t.args().size()) {
    throw ArityError("operation '" + t.symbol() + "' expects " + std::to_string(*arity) +
                     " argument(s), got " + std::to_string(t.args().size()));
  }
  for (const auto& a : t.args()) check_well_sorted(sig, a);
}

std::vector<Diagnostic> validate(const Language& language) {
  std::vector<Diagnostic> out;
  if (language.acts().empty()) out.push_back({"<language>", "action set is empty"});
  const auto& sig = language.signature();
  const auto& alphabet = language.alphabet();

  for (const auto& rule : language.rules()) {
    auto report = [&](std::string msg) { out.push_back({rule.name, std::move(msg)}); };
    const Ruloid& r = rule.body;

    if (r.source.is_var()) {
      report("source must be an operation applied to variables");
      continue;
    }
    auto arity = sig.arity(r.source.symbol());
    if (!arity) {
      report("undeclared principal operation '" + r.source.symbol() + "'");
    } else if (*arity != r.source.args().size()) {
      report("source arity mismatch for '" + r.source.symbol() + "'");
    }

    VarSet source_vars;
    for (const auto& a : r.source.args()) {
      if (!a.is_var()) {
        report("source argument '" + to_string(a) + "' is not a variable");
      } else if (!source_vars.insert(a.variable()).second) {
        report("source variable '" + a.symbol() + "' repeated");
      }
    }

    if (!alphabet.contains(r.action)) report("undeclared action '" + r.action.label + "'");

    VarSet targets;
    for (const auto& p : r.premises) {
      if (!alphabet.contains(p.action)) report("undeclared action '" + p.action.label + "'");
      if (!source_vars.count(p.subject))
        report("premise subject '" + p.subject.name + "' is not a source variable");
      if (p.target) {
        if (*p.target == p.subject) report("premise '" + to_string(p) + "' has subject = target");
        if (source_vars.count(*p.target))
          report("premise target '" + p.target->name + "' is a source variable");
        if (!targets.insert(*p.target).second)
          report("premise target '" + p.target->name + "' used twice");
      }
    }

    for (const auto& v : vars(r.target)) {
      if (!source_vars.count(v) && !targets.count(v))
        report("target uses undeclared variable '" + v.name + "'");
    }
    try {
      check_well_sorted(sig, r.target);
    } catch (const Error& e) {
      report(std::string("target: ") + e.what());
    }
  }
  return out;
}

void require_valid(const Language& language) {
  auto diags = validate(language);
  if (!diags.empty()) throw ValidationError(std::move(diags));
}

Language disjoint_extend(const Language& base, const Language& ext) {
  if (!(base.alphabet() == ext.alphabet()))
    throw ActionMismatch("disjoint extension must use the same action set");
  Signature sig = base.signature();
  for (const auto& op : ext.signature().ops()) {
    if (sig.contains(op.name))
      throw OverlapError("extension redeclares operation '" + op.name + "'");
    sig.add(op.name, op.arity);
  }
  std::vector<Rule> rules = base.rules();
  for (const auto& rule : ext.rules()) {
    if (base.signature().contains(rule.principal()))
      throw OverlapError("extension rule '" + rule.name + "' defines base operation '" +
                         rule.principal() + "'");
    rules.push_back(rule);
  }
  return Language(base.acts(), std::move(sig), std::move(rules));
}

std::string prefix_op(const Action& a) { return "pre_" + a.label; }

Language bccsp_prelude(const std::vector<Action>& acts, BccspFragment fragment) {
  if (acts.empty()) throw Error("BCCSP needs a nonempty action set");
  ActionAlphabet alphabet(acts);
  Signature sig;
  std::vector<Rule> rules;
  const Term x = Term::var("x");
  const Term y = Term::var("y");
  sig.add("0", 0);
  for (const auto& a : alphabet.actions()) {
    sig.add(prefix_op(a), 1);
    rules.push_back(Rule{prefix_op(a) + "#1", Ruloid{{}, Term::app(prefix_op(a), {x}), a, x}});
  }
  if (fragment == BccspFragment::full) {
    sig.add("plus", 2);
    const Term src = Term::app("plus", {x, y});
    std::size_t n = 0;
    for (const auto& a : alphabet.actions()) {
      rules.push_back(Rule{"plus#" + std::to_string(++n),
                           Ruloid{{Premise::positive({"x"}, a, {"x'"})}, src, a, Term::var("x'")}});
      rules.push_back(Rule{"plus#" + std::to_string(++n),
                           Ruloid{{Premise::positive({"y"}, a, {"y'"})}, src, a, Term::var("y'")}});
    }
  }
  return Language(alphabet.actions(), std::move(sig), std::move(rules));
}

bool is_non_inheriting(const Rule& rule) {
  VarSet src = rule.body.sourcevars();
  for (const auto& v : vars(rule.body.target))
    if (src.count(v)) return false;
  return true;
}

bool is_non_inheriting(const Language& language) {
  return std::all_of(language.rules().begin(), language.rules().end(),
                     [](const Rule& r) { return is_non_inheriting(r); });
}

std::string to_string(const Premise& p) {
  if (p.target) return p.subject.name + " -" + p.action.label + "-> " + p.target->name;
  return p.subject.name + " -" + p.action.label + "-/>";
}

std::string to_string(const PremiseSet& premises) {
  std::vector<std::string> parts;
  for (const auto& p : premises) parts.push_back(to_string(p));
  std::sort(parts.begin(), parts.end());
  std::string out = "{";
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? ", " : "") + parts[i];
  return out + "}";
}

std::string to_string(const Ruloid& r) {
  return to_string(r.premises) + " |- " + to_string(r.source) + " -" + r.action.label + "-> " +
         to_string(r.target);
}

}  // namespace gsos
