#include "gsos/parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace gsos {

std::string to_string(CheckMode m) {
  switch (m) {
    case CheckMode::rm: return "rm";
    case CheckMode::closed: return "closed";
    case CheckMode::ruloids: return "ruloids";
    case CheckMode::junk: return "junk";
    case CheckMode::entail: return "entail";
  }
  return "?";
}

std::optional<CheckMode> parse_mode(std::string_view s) {
  if (s == "rm") return CheckMode::rm;
  if (s == "closed") return CheckMode::closed;
  if (s == "ruloids") return CheckMode::ruloids;
  if (s == "junk") return CheckMode::junk;
  if (s == "entail") return CheckMode::entail;
  return std::nullopt;
}

const Term& SpecFile::context(const std::string& name) const {
  for (const auto& [n, t] : contexts)
    if (n == name) return t;
  throw UnknownContext("unknown context '" + name + "'");
}

namespace {

enum class Tok { ident, string, punct, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  std::size_t line = 1;
  std::size_t col = 1;
};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(std::string_view src) {
  static const char* puncts[] = {"-/>", "->", "|-", "=>", "-", "|", "&", "!", ";",
                                 ",",   "(",  ")",  "{",  "}", "/", "=", "*"};
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t{Tok::end, "", line, col};
    if (ident_char(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      t.kind = Tok::ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (c == '"') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != '"' && src[j] != '\n') ++j;
      if (j >= src.size() || src[j] != '"') throw ParseError(line, col, "unterminated string");
      t.kind = Tok::string;
      t.text = std::string(src.substr(i + 1, j - i - 1));
      advance(j + 1 - i);
      out.push_back(std::move(t));
      continue;
    }
    bool matched = false;
    for (const char* p : puncts) {
      std::string_view pv(p);
      if (src.substr(i, pv.size()) == pv) {
        t.kind = Tok::punct;
        t.text = std::string(pv);
        advance(pv.size());
        out.push_back(std::move(t));
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(line, col, std::string("unexpected character '") + c + "'");
  }
  out.push_back(Token{Tok::end, "", line, col});
  return out;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::end: return "end of input";
    case Tok::string: return "string \"" + t.text + "\"";
    default: return "'" + t.text + "'";
  }
}

struct BuildState {
  bool have_acts = false;
  std::vector<Action> acts;
  Signature sig;
  std::vector<Rule> rules;
  std::map<std::string, std::size_t> rule_count;
  std::vector<std::pair<std::string, Term>> contexts;
  std::map<std::pair<Action, Action>, Action> sync;
  std::vector<CheckRequest> checks;
  std::vector<std::string> warnings;
  // Set only for standalone term parsing.
  const Signature* external_sig = nullptr;

  const Signature& signature() const { return external_sig ? *external_sig : sig; }
  const Term* context(const std::string& name) const {
    for (const auto& [n, t] : contexts)
      if (n == name) return &t;
    return nullptr;
  }
  void add_rule(Ruloid body) {
    const std::string op = body.source.symbol();
    rules.push_back(Rule{op + "#" + std::to_string(++rule_count[op]), std::move(body)});
  }
};

// Premise of a rule before action binders are substituted.
struct RawPremise {
  std::string subject;
  std::string action;  // empty for the `x -/>` shorthand
  std::optional<std::string> target;
  bool negative = false;
};

struct RawBinder {
  // `a in Act` uses only `name`; `a*b=c in sync` uses all three.
  std::string name, right, result;
  bool sync = false;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::filesystem::path base_dir, BuildState* build, int depth)
      : toks_(std::move(tokens)), base_(std::move(base_dir)), build_(build), depth_(depth) {}

  void parse_statements();

  Term term();
  Formula formula();
  void expect_end() {
    if (peek().kind != Tok::end) fail(peek(), "unexpected " + describe(peek()), {"end of input"});
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at(std::string_view punct) const {
    return peek().kind == Tok::punct && peek().text == punct;
  }
  bool at_word(std::string_view w) const { return peek().kind == Tok::ident && peek().text == w; }
  [[noreturn]] void fail(const Token& t, const std::string& msg,
                         std::vector<std::string> expected = {}) const {
    throw ParseError(t.line, t.col, msg, std::move(expected));
  }
  void expect(std::string_view punct) {
    if (!at(punct)) fail(peek(), "unexpected " + describe(peek()), {"'" + std::string(punct) + "'"});
    next();
  }
  void expect_word(std::string_view w) {
    if (!at_word(w)) fail(peek(), "unexpected " + describe(peek()), {"'" + std::string(w) + "'"});
    next();
  }
  Token ident(const std::string& what) {
    if (peek().kind != Tok::ident) fail(peek(), "unexpected " + describe(peek()), {what});
    return next();
  }
  std::size_t number(const std::string& what) {
    Token t = ident(what);
    if (!std::all_of(t.text.begin(), t.text.end(), [](char c) { return std::isdigit(c); }))
      fail(t, "expected a number, found " + describe(t), {what});
    try {
      return std::stoul(t.text);
    } catch (const std::exception&) {
      fail(t, "number out of range", {what});
    }
  }
  void require_acts(const Token& at_tok);

  void stmt_acts();
  void stmt_op();
  void stmt_sync();
  void stmt_rule();
  void stmt_context();
  void stmt_check();
  void stmt_entail();
  void stmt_prelude();
  void stmt_include();

  Formula disjunction();
  Formula conjunction();
  Formula unary();

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::filesystem::path base_;
  BuildState* build_;
  int depth_;
};

void Parser::require_acts(const Token& at_tok) {
  if (!build_->have_acts) fail(at_tok, "missing acts declaration", {"acts"});
}

void Parser::parse_statements() {
  while (peek().kind != Tok::end) {
    const Token& t = peek();
    if (t.kind != Tok::ident)
      fail(t, "unexpected " + describe(t),
           {"acts", "op", "sync", "rule", "context", "check", "entail", "prelude", "include"});
    if (t.text == "acts") stmt_acts();
    else if (t.text == "op") stmt_op();
    else if (t.text == "sync") stmt_sync();
    else if (t.text == "rule") stmt_rule();
    else if (t.text == "context") stmt_context();
    else if (t.text == "check") stmt_check();
    else if (t.text == "entail") stmt_entail();
    else if (t.text == "prelude") stmt_prelude();
    else if (t.text == "include") stmt_include();
    else
      fail(t, "unknown statement '" + t.text + "'",
           {"acts", "op", "sync", "rule", "context", "check", "entail", "prelude", "include"});
  }
}

void Parser::stmt_acts() {
  Token kw = next();
  if (build_->have_acts) fail(kw, "duplicate acts declaration");
  std::set<Action> seen;
  do {
    Token a = ident("action name");
    if (a.text.front() == '_') fail(a, "names starting with '_' are reserved");
    if (!seen.insert(Action{a.text}).second) fail(a, "duplicate action '" + a.text + "'");
    build_->acts.push_back(Action{a.text});
    if (!at(",")) break;
    next();
  } while (true);
  expect(";");
  if (build_->acts.size() > 63) fail(kw, "at most 63 actions are supported");
  build_->have_acts = true;
}

void Parser::stmt_op() {
  next();
  do {
    Token name = ident("operation name");
    if (name.text.front() == '_') fail(name, "names starting with '_' are reserved");
    expect("/");
    std::size_t arity = number("arity");
    if (build_->sig.contains(name.text)) fail(name, "duplicate operation '" + name.text + "'");
    if (build_->context(name.text)) fail(name, "'" + name.text + "' already names a context");
    build_->sig.add(name.text, arity);
    if (!at(",")) break;
    next();
  } while (true);
  expect(";");
}

void Parser::stmt_sync() {
  Token kw = next();
  require_acts(kw);
  std::set<Action> declared(build_->acts.begin(), build_->acts.end());
  do {
    Token a = ident("action");
    expect("*");
    Token b = ident("action");
    expect("=");
    Token c = ident("action");
    for (const Token* t : {&a, &b, &c}) {
      if (!declared.count(Action{t->text}))
        throw ValidationError({Diagnostic{"sync", "undeclared action '" + t->text + "'"}});
    }
    for (auto key : {std::make_pair(Action{a.text}, Action{b.text}),
                     std::make_pair(Action{b.text}, Action{a.text})}) {
      auto [it, inserted] = build_->sync.emplace(key, Action{c.text});
      if (!inserted && it->second.label != c.text)
        fail(a, "conflicting synchronization result for " + key.first.label + "*" +
                    key.second.label);
    }
    if (!at(",")) break;
    next();
  } while (true);
  expect(";");

  // Associativity is the author's responsibility; only warn.
  const auto& g = build_->sync;
  auto lookup = [&](const Action& x, const Action& y) -> std::optional<Action> {
    auto it = g.find({x, y});
    return it == g.end() ? std::nullopt : std::optional<Action>(it->second);
  };
  std::set<std::string> reported;
  for (const auto& x : build_->acts)
    for (const auto& y : build_->acts)
      for (const auto& z : build_->acts) {
        auto xy = lookup(x, y);
        auto yz = lookup(y, z);
        auto lhs = xy ? lookup(*xy, z) : std::nullopt;
        auto rhs = yz ? lookup(x, *yz) : std::nullopt;
        if (lhs != rhs) {
          std::string w = "sync is not associative on (" + x.label + "," + y.label + "," +
                          z.label + ")";
          if (reported.insert(w).second) build_->warnings.push_back(w);
        }
      }
}

void Parser::stmt_rule() {
  Token kw = next();
  require_acts(kw);

  std::vector<RawBinder> binders;
  if (at_word("forall")) {
    next();
    do {
      Token name = ident("binder");
      if (at("*")) {
        next();
        Token right = ident("binder");
        expect("=");
        Token result = ident("binder");
        expect_word("in");
        expect_word("sync");
        binders.push_back(RawBinder{name.text, right.text, result.text, true});
      } else {
        expect_word("in");
        expect_word("Act");
        binders.push_back(RawBinder{name.text, "", "", false});
      }
      // A comma continues the binder list only if a binder follows.
      if (at(",") && peek(1).kind == Tok::ident && peek(2).kind == Tok::ident &&
          peek(2).text == "in") {
        next();
        continue;
      }
      if (at(",") && peek(1).kind == Tok::ident && peek(2).kind == Tok::punct &&
          peek(2).text == "*") {
        next();
        continue;
      }
      break;
    } while (true);
    if (at(",")) next();
  }

  std::vector<RawPremise> premises;
  if (!at("|-")) {
    do {
      Token x = ident("premise subject");
      RawPremise p{x.text, "", std::nullopt, false};
      if (at("-/>")) {
        next();
        p.negative = true;
      } else {
        expect("-");
        p.action = ident("action").text;
        if (at("-/>")) {
          next();
          p.negative = true;
        } else {
          expect("->");
          p.target = ident("premise target").text;
        }
      }
      premises.push_back(std::move(p));
      if (!at(",")) break;
      next();
    } while (true);
  }
  expect("|-");
  Term source = term();
  expect("-");
  Token act = ident("action");
  expect("->");
  Term target = term();
  expect(";");

  // Enumerate binder environments in declaration order.
  std::vector<std::map<std::string, std::string>> envs{{}};
  std::vector<std::pair<Action, Action>> sync_keys;
  for (const auto& [k, v] : build_->sync) sync_keys.push_back(k);
  for (const auto& b : binders) {
    std::vector<std::map<std::string, std::string>> next_envs;
    for (const auto& env : envs) {
      if (!b.sync) {
        for (const auto& a : build_->acts) {
          auto e = env;
          e[b.name] = a.label;
          next_envs.push_back(std::move(e));
        }
      } else {
        for (const auto& k : sync_keys) {
          auto e = env;
          e[b.name] = k.first.label;
          e[b.right] = k.second.label;
          e[b.result] = build_->sync.at(k).label;
          next_envs.push_back(std::move(e));
        }
      }
    }
    envs = std::move(next_envs);
  }

  for (const auto& env : envs) {
    auto resolve = [&](const std::string& name) {
      auto it = env.find(name);
      return Action{it == env.end() ? name : it->second};
    };
    Ruloid body{{}, source, resolve(act.text), target};
    for (const auto& p : premises) {
      if (p.negative && p.action.empty()) {
        for (const auto& a : build_->acts)
          body.premises.insert(Premise::negative(Variable{p.subject}, a));
      } else if (p.negative) {
        body.premises.insert(Premise::negative(Variable{p.subject}, resolve(p.action)));
      } else {
        body.premises.insert(Premise::positive(Variable{p.subject}, resolve(p.action),
                                               Variable{*p.target}));
      }
    }
    build_->add_rule(std::move(body));
  }
}

void Parser::stmt_context() {
  next();
  Token name = ident("context name");
  if (build_->signature().contains(name.text)) fail(name, "'" + name.text + "' is an operation");
  if (build_->context(name.text)) fail(name, "duplicate context '" + name.text + "'");
  expect("=");
  Term t = term();
  expect(";");
  build_->contexts.emplace_back(name.text, std::move(t));
}

void Parser::stmt_check() {
  Token kw = next();
  require_acts(kw);
  CheckRequest req;
  req.line = kw.line;
  req.left = term();
  expect("=");
  req.right = term();
  std::set<std::string> seen;
  while (!at(";")) {
    Token opt = ident("'with', 'mode', 'budget' or ';'");
    if (!seen.insert(opt.text).second) fail(opt, "duplicate '" + opt.text + "' clause");
    if (opt.text == "with") {
      expect_word("relation");
      expect("{");
      std::vector<TermPair> pairs;
      while (!at("}")) {
        expect("(");
        Term p = term();
        expect(",");
        Term q = term();
        expect(")");
        pairs.emplace_back(std::move(p), std::move(q));
        if (!at(";")) break;
        next();
      }
      expect("}");
      req.relation = std::move(pairs);
    } else if (opt.text == "mode") {
      Token m = ident("mode");
      auto mode = parse_mode(m.text);
      if (!mode || *mode == CheckMode::entail)
        fail(m, "unknown mode '" + m.text + "'", {"rm", "closed", "ruloids", "junk"});
      req.mode = *mode;
    } else if (opt.text == "budget") {
      do {
        Token k = ident("budget name");
        expect("=");
        std::size_t n = number("budget value");
        if (n == 0) fail(k, "budgets must be positive");
        if (k.text == "pairs") req.budgets.pairs = n;
        else if (k.text == "states") req.budgets.states = n;
        else if (k.text == "size") req.budgets.size = n;
        else fail(k, "unknown budget '" + k.text + "'", {"pairs", "states", "size"});
      } while (peek().kind == Tok::ident && peek(1).kind == Tok::punct && peek(1).text == "=");
    } else {
      fail(opt, "unexpected " + describe(opt), {"with", "mode", "budget", "';'"});
    }
  }
  expect(";");
  build_->checks.push_back(std::move(req));
}

void Parser::stmt_entail() {
  Token kw = next();
  require_acts(kw);
  CheckRequest req;
  req.line = kw.line;
  req.mode = CheckMode::entail;
  req.premise = formula();
  expect("=>");
  req.conclusion = formula();
  expect(";");
  build_->checks.push_back(std::move(req));
}

void Parser::stmt_prelude() {
  Token kw = next();
  require_acts(kw);
  Token which = ident("prelude name");
  BccspFragment frag;
  if (which.text == "bccsp") frag = BccspFragment::full;
  else if (which.text == "bccsp0") frag = BccspFragment::zero_and_prefix;
  else fail(which, "unknown prelude '" + which.text + "'", {"bccsp", "bccsp0"});
  expect(";");
  Language pre = bccsp_prelude(build_->acts, frag);
  for (const auto& op : pre.signature().ops()) {
    if (build_->sig.contains(op.name))
      throw OverlapError("prelude redeclares operation '" + op.name + "'");
    build_->sig.add(op.name, op.arity);
  }
  for (const auto& r : pre.rules()) build_->add_rule(r.body);
}

void Parser::stmt_include() {
  Token kw = next();
  if (peek().kind != Tok::string) fail(peek(), "unexpected " + describe(peek()), {"string"});
  Token file = next();
  expect(";");
  if (depth_ >= 16) fail(kw, "include nesting too deep");
  std::filesystem::path path = base_ / file.text;
  std::ifstream in(path);
  if (!in) fail(file, "cannot open included file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  Parser inner(lex(ss.str()), path.parent_path(), build_, depth_ + 1);
  inner.parse_statements();
}

Term Parser::term() {
  Token name = ident("term");
  const Signature& sig = build_->signature();
  std::vector<Term> args;
  bool parens = false;
  if (at("(")) {
    parens = true;
    next();
    if (!at(")")) {
      do {
        args.push_back(term());
        if (!at(",")) break;
        next();
      } while (true);
    }
    expect(")");
  }
  if (auto arity = sig.arity(name.text)) {
    if (*arity != args.size())
      throw ArityError(std::to_string(name.line) + ":" + std::to_string(name.col) + ": '" +
                       name.text + "' expects " + std::to_string(*arity) + " argument" +
                       (*arity == 1 ? "" : "s") + ", got " + std::to_string(args.size()));
    return Term::app(name.text, std::move(args));
  }
  if (const Term* ctx = build_->context(name.text)) {
    if (!parens) return *ctx;
    auto order = vars_in_order(*ctx);
    if (order.size() != args.size())
      throw ArityError(std::to_string(name.line) + ":" + std::to_string(name.col) +
                       ": context '" + name.text + "' has " + std::to_string(order.size()) +
                       " variable" + (order.size() == 1 ? "" : "s") + ", got " +
                       std::to_string(args.size()));
    Substitution s;
    for (std::size_t i = 0; i < order.size(); ++i) s.bind(order[i], args[i]);
    return apply_subst(*ctx, s);
  }
  if (parens) fail(name, "unknown operation '" + name.text + "'");
  if (name.text.front() == '_') fail(name, "names starting with '_' are reserved");
  return Term::var(name.text);
}

Formula Parser::formula() { return disjunction(); }

Formula Parser::disjunction() {
  Formula f = conjunction();
  while (at("|")) {
    next();
    f = Formula::disj(f, conjunction());
  }
  return f;
}

Formula Parser::conjunction() {
  Formula f = unary();
  while (at("&")) {
    next();
    f = Formula::conj(f, unary());
  }
  return f;
}

Formula Parser::unary() {
  if (at("!")) {
    next();
    return Formula::negate(unary());
  }
  if (at("(")) {
    next();
    Formula f = disjunction();
    expect(")");
    return f;
  }
  if (at_word("true")) {
    next();
    return Formula::top();
  }
  if (at_word("false")) {
    next();
    return Formula::bottom();
  }
  Token x = ident("formula");
  expect("-");
  Token a = ident("action");
  expect("->");
  if (build_->have_acts &&
      std::find(build_->acts.begin(), build_->acts.end(), Action{a.text}) == build_->acts.end())
    throw ValidationError({Diagnostic{"entail", "undeclared action '" + a.text + "'"}});
  return Formula::atom(Variable{x.text}, Action{a.text});
}

}  // namespace

SpecFile parse_spec(std::string_view text, const std::filesystem::path& base_dir) {
  BuildState st;
  Parser p(lex(text), base_dir, &st, 0);
  p.parse_statements();
  if (!st.have_acts) {
    auto toks = lex(text);
    throw ParseError(toks.back().line, toks.back().col, "missing acts declaration", {"acts"});
  }
  SpecFile spec;
  spec.language = Language(st.acts, st.sig, st.rules);
  require_valid(spec.language);
  spec.contexts = std::move(st.contexts);
  for (const auto& [k, v] : st.sync) spec.sync.push_back(SyncEntry{k.first, k.second, v});
  spec.checks = std::move(st.checks);
  spec.warnings = std::move(st.warnings);
  return spec;
}

SpecFile parse_spec_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str(), path.parent_path());
}

Term parse_term(std::string_view text, const Signature& sig) {
  BuildState st;
  st.external_sig = &sig;
  Parser p(lex(text), ".", &st, 0);
  Term t = p.term();
  p.expect_end();
  return t;
}

Formula parse_formula(std::string_view text) {
  BuildState st;
  Parser p(lex(text), ".", &st, 0);
  Formula f = p.formula();
  p.expect_end();
  return f;
}

std::string print_spec(const SpecFile& spec) {
  std::ostringstream os;
  const Language& lang = spec.language;
  os << "acts ";
  for (std::size_t i = 0; i < lang.acts().size(); ++i)
    os << (i ? ", " : "") << lang.acts()[i].label;
  os << " ;\n";
  for (const auto& op : lang.signature().ops()) os << "op " << op.name << '/' << op.arity << " ;\n";
  for (const auto& s : spec.sync)
    if (s.left <= s.right)
      os << "sync " << s.left.label << '*' << s.right.label << '=' << s.result.label << " ;\n";
  for (const auto& r : lang.rules()) {
    os << "rule ";
    bool first = true;
    for (const auto& p : r.body.premises) {
      os << (first ? "" : ", ") << to_string(p);
      first = false;
    }
    os << (first ? "|- " : " |- ") << r.body.source << " -" << r.body.action.label << "-> "
       << r.body.target << " ;\n";
  }
  for (const auto& [name, t] : spec.contexts) os << "context " << name << " = " << t << " ;\n";
  for (const auto& c : spec.checks) {
    if (c.mode == CheckMode::entail) {
      os << "entail " << to_string(*c.premise) << " => " << to_string(*c.conclusion) << " ;\n";
      continue;
    }
    os << "check " << *c.left << " = " << *c.right;
    if (c.relation) {
      os << " with relation {";
      for (std::size_t i = 0; i < c.relation->size(); ++i)
        os << (i ? " ; " : " ") << '(' << (*c.relation)[i].first << ", "
           << (*c.relation)[i].second << ')';
      os << " }";
    }
    os << " mode " << to_string(c.mode);
    if (c.budgets.pairs || c.budgets.states || c.budgets.size) {
      os << " budget";
      if (c.budgets.pairs) os << " pairs=" << *c.budgets.pairs;
      if (c.budgets.states) os << " states=" << *c.budgets.states;
      if (c.budgets.size) os << " size=" << *c.budgets.size;
    }
    os << " ;\n";
  }
  return os.str();
}

}  // namespace gsos
