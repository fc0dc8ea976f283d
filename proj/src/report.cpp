#include "gsos/report.hpp"

#include <sstream>

namespace gsos {

using nlohmann::json;

std::optional<RunMode> parse_run_mode(std::string_view s) {
  if (s == "rm") return RunMode::rm;
  if (s == "closed") return RunMode::closed;
  if (s == "ruloids") return RunMode::ruloids;
  if (s == "junk") return RunMode::junk;
  if (s == "lts") return RunMode::lts;
  if (s == "entail") return RunMode::entail;
  return std::nullopt;
}

namespace {

std::string pair_string(const TermPair& p) {
  return "(" + to_string(p.first) + ", " + to_string(p.second) + ")";
}

json pair_json(const TermPair& p) { return json::array({to_string(p.first), to_string(p.second)}); }

json assignment_json(const InitAssignment& a, const ActionAlphabet& alphabet) {
  json out = json::object();
  for (const auto& [v, s] : a) out[v.name] = format_action_set(alphabet, s);
  return out;
}

json relation_json(const OpenRelation& r) {
  json pairs = json::array();
  for (const auto& p : r.pairs) pairs.push_back(pair_json(p));
  return json{{"pairs", pairs}, {"symmetric", r.symmetric}, {"identity", r.identity}};
}

RunMode to_run_mode(CheckMode m) {
  switch (m) {
    case CheckMode::rm: return RunMode::rm;
    case CheckMode::closed: return RunMode::closed;
    case CheckMode::ruloids: return RunMode::ruloids;
    case CheckMode::junk: return RunMode::junk;
    case CheckMode::entail: return RunMode::entail;
  }
  return RunMode::rm;
}

std::string mode_name(RunMode m) {
  switch (m) {
    case RunMode::rm: return "rm";
    case RunMode::closed: return "closed";
    case RunMode::ruloids: return "ruloids";
    case RunMode::junk: return "junk";
    case RunMode::lts: return "lts";
    case RunMode::entail: return "entail";
  }
  return "?";
}

json blank_document() {
  return json{{"verdict", nullptr},
              {"relation", nullptr},
              {"evidence", nullptr},
              {"stability", nullptr},
              {"caveat", nullptr}};
}

}  // namespace

json to_json(const StabilityReport& s, const ActionAlphabet& alphabet) {
  json missing = json::array();
  for (auto m : s.missing) missing.push_back(format_action_set(alphabet, m));
  return json{{"stable", s.stable},
              {"realizable", s.realizable},
              {"total", s.total},
              {"missing", missing}};
}

json to_json(const Verdict& v, const ActionAlphabet& alphabet) {
  json pairs = json::array();
  for (const auto& pr : v.evidence) {
    json ruloids = json::array();
    for (const auto& m : pr.matches) {
      json cands = json::array();
      for (const auto& c : m.candidates) {
        cands.push_back(json{{"ruloid", to_string(c.ruloid)},
                             {"1a", c.same_action},
                             {"1b", c.related},
                             {"1c", c.hygienic},
                             {"1d", c.shared_ok},
                             {"admissible", c.admissible()}});
      }
      json entry{{"ruloid", to_string(m.ruloid)},
                 {"candidates", cands},
                 {"hyps", to_string(m.hyps)},
                 {"hyps_j", to_string(m.hyps_j)},
                 {"entailed", m.entailment.holds},
                 {"matched", m.matched}};
      if (m.entailment.counterexample)
        entry["counterexample"] = assignment_json(*m.entailment.counterexample, alphabet);
      ruloids.push_back(std::move(entry));
    }
    pairs.push_back(json{{"pair", pair_json(pr.pair)}, {"passed", pr.passed}, {"ruloids", ruloids}});
  }
  json ev{{"pairs", pairs}};
  if (v.refutation) {
    json ref{{"pair", pair_json(v.refutation->pair)},
             {"ruloid", to_string(v.refutation->ruloid)},
             {"reason", v.refutation->reason}};
    ref["counterexample"] = v.refutation->counterexample
                                ? assignment_json(*v.refutation->counterexample, alphabet)
                                : json(nullptr);
    ev["refutation"] = ref;
  }
  json frontier = json::array();
  for (const auto& f : v.frontier) frontier.push_back(pair_json(f));
  ev["frontier"] = frontier;
  return ev;
}

std::string describe(const Refutation& r, const InitUniverse& universe) {
  std::ostringstream os;
  os << "at " << pair_string(r.pair) << ": " << to_string(r.ruloid) << " unmatched (" << r.reason
     << ")";
  if (r.counterexample) {
    os << "\n  falsifying assignment: " << to_string(*r.counterexample, universe.alphabet);
    std::string sep = " witness ";
    for (const auto& [v, s] : *r.counterexample) {
      os << sep << v.name << " := " << universe.witness_for(s);
      sep = ", ";
    }
  }
  return os.str();
}

std::vector<JunkEntry> junk_scan(const Language& language, const InitUniverse& universe) {
  std::vector<JunkEntry> out;
  for (const auto& r : language.rules()) {
    JunkEntry e{r.name, is_junk(universe, r.body), ""};
    if (e.junk) {
      if (universe.empty())
        e.evidence = "no closed terms exist";
      else
        e.evidence = to_string(hyps_of_premises(r.body.premises)) +
                     " is unsatisfiable over the realizable init sets";
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::string format_junk_scan(const std::vector<JunkEntry>& entries) {
  std::ostringstream os;
  std::size_t n = 0;
  for (const auto& e : entries) {
    if (!e.junk) continue;
    ++n;
    os << "junk " << e.rule << ": " << e.evidence << '\n';
  }
  os << n << " junk rule" << (n == 1 ? "" : "s") << " of " << entries.size() << '\n';
  return os.str();
}

Runner::Runner(const SpecFile& spec, RunOptions options)
    : spec_(&spec),
      options_(options),
      engine_(spec.language),
      stability_(certify_extension_stability(engine_.universe())) {}

void Runner::finish(CheckOutcome& out, const std::string& header) const {
  out.document["stability"] = to_json(stability_, engine_.universe().alphabet);
  if (out.verdict.empty()) out.verdict = "skipped";
  out.document["verdict"] = out.verdict;
  std::string body = std::move(out.text);
  out.text = header + ": " + out.verdict + "\n" + body;
  if (options_.stability) {
    std::ostringstream os;
    os << "  stability: " << (stability_.stable ? "stable" : "not stable") << " ("
       << stability_.realizable << " of " << stability_.total << " init sets realizable";
    if (!stability_.missing.empty()) {
      os << "; missing";
      for (auto m : stability_.missing) os << ' ' << format_action_set(engine_.universe().alphabet, m);
    }
    os << ")\n";
    out.text += os.str();
  }
  if (out.document["caveat"].is_string())
    out.text += "  caveat: " + out.document["caveat"].get<std::string>() + "\n";
}

CheckOutcome Runner::run(const CheckRequest& r) const {
  Budgets b;
  if (r.budgets.pairs) b.max_pairs = *r.budgets.pairs;
  if (r.budgets.states) b.max_states = *r.budgets.states;
  if (r.budgets.size) b.max_term_size = *r.budgets.size;
  if (options_.budget_pairs) b.max_pairs = *options_.budget_pairs;
  if (options_.budget_states) b.max_states = *options_.budget_states;

  const RunMode mode = options_.mode.value_or(to_run_mode(r.mode));
  const bool is_entail = r.mode == CheckMode::entail;

  std::string header;
  if (is_entail)
    header = "entail " + to_string(*r.premise) + " => " + to_string(*r.conclusion);
  else
    header = "check " + to_string(*r.left) + " = " + to_string(*r.right);
  header += " [" + mode_name(mode) + ", line " + std::to_string(r.line) + "]";

  CheckOutcome out;
  if (is_entail != (mode == RunMode::entail) && mode != RunMode::junk) {
    out.status = Status::skipped;
    out.document = blank_document();
    out.text = is_entail ? "  note: entailment statement skipped in this mode\n"
                         : "  note: term check skipped in entail mode\n";
  } else {
    switch (mode) {
      case RunMode::rm: out = run_rm(r, b); break;
      case RunMode::closed: out = run_closed(r, b); break;
      case RunMode::ruloids: out = run_ruloids(r); break;
      case RunMode::junk: out = run_junk(); break;
      case RunMode::lts: out = run_lts(r, b); break;
      case RunMode::entail: out = run_entail(r); break;
    }
  }
  finish(out, header);
  return out;
}

std::vector<CheckOutcome> Runner::run_all() const {
  std::vector<CheckOutcome> out;
  for (const auto& r : spec_->checks) out.push_back(run(r));
  return out;
}

CheckOutcome Runner::run_rm(const CheckRequest& r, const Budgets& b) const {
  RmbChecker checker(engine_);
  const TermPair root{*r.left, *r.right};
  Verdict v;
  if (r.relation) {
    OpenRelation rel;
    rel.pairs = *r.relation;
    if (!rel.contains(root.first, root.second)) rel.pairs.push_back(root);
    v = checker.check_relation(rel);
  } else {
    v = checker.search(root, b);
  }

  CheckOutcome out;
  out.document = blank_document();
  out.verdict = to_string(v.kind);
  out.document["relation"] = relation_json(v.relation);
  out.document["evidence"] = to_json(v, engine_.universe().alphabet);
  std::ostringstream os;
  os << "  relation:";
  if (v.relation.pairs.empty()) os << " (none)";
  for (const auto& p : v.relation.pairs) os << ' ' << pair_string(p);
  os << " plus symmetric closure and identity\n";
  switch (v.kind) {
    case Verdict::Kind::proven: out.status = Status::pass; break;
    case Verdict::Kind::refuted:
      out.status = Status::fail;
      out.document["caveat"] = kRefutationCaveat;
      break;
    case Verdict::Kind::inconclusive:
      out.status = Status::inconclusive;
      out.document["caveat"] = v.note;
      for (const auto& f : v.frontier) os << "  frontier: " << pair_string(f) << '\n';
      break;
  }
  if (v.refutation) os << "  " << describe(*v.refutation, engine_.universe()) << '\n';
  out.text = os.str();
  return out;
}

CheckOutcome Runner::run_closed(const CheckRequest& r, const Budgets& b) const {
  for (const Term* t : {&*r.left, &*r.right})
    if (!t->is_closed()) throw NotClosed("closed mode needs closed terms: " + to_string(*t));
  const BisimVerdict v = bisimilar_closed(spec_->language, *r.left, *r.right, b.max_states);
  CheckOutcome out;
  out.document = blank_document();
  out.verdict = to_string(v);
  out.status = v == BisimVerdict::yes ? Status::pass
               : v == BisimVerdict::no ? Status::fail
                                       : Status::inconclusive;
  out.document["evidence"] = json{{"max_states", b.max_states}};
  if (v == BisimVerdict::inconclusive) out.document["caveat"] = "state budget exhausted";
  return out;
}

CheckOutcome Runner::run_ruloids(const CheckRequest& r) const {
  CheckOutcome out;
  out.document = blank_document();
  out.verdict = "listed";
  json ev = json::object();
  std::ostringstream os;
  for (const auto& [side, t] : {std::pair{"left", *r.left}, std::pair{"right", *r.right}}) {
    RuloidSet s = engine_.ruloids(t);
    json list = json::array();
    for (const auto& rl : s.ruloids) list.push_back(to_string(rl));
    ev[side] = json{{"context", to_string(t)}, {"ruloids", list}, {"junk_removed", s.junk_removed}};
    std::istringstream lines(format_ruloid_set(s));
    for (std::string line; std::getline(lines, line);) os << "  " << line << '\n';
  }
  out.document["evidence"] = ev;
  out.text = os.str();
  return out;
}

CheckOutcome Runner::run_junk() const {
  CheckOutcome out;
  out.document = blank_document();
  auto entries = junk_scan(spec_->language, engine_.universe());
  json ev = json::array();
  std::size_t n = 0;
  for (const auto& e : entries) {
    if (!e.junk) continue;
    ++n;
    ev.push_back(json{{"rule", e.rule}, {"evidence", e.evidence}});
  }
  out.verdict = std::to_string(n) + " junk";
  out.document["evidence"] = ev;
  std::istringstream lines(format_junk_scan(entries));
  std::ostringstream os;
  for (std::string line; std::getline(lines, line);) os << "  " << line << '\n';
  out.text = os.str();
  return out;
}

CheckOutcome Runner::run_lts(const CheckRequest& r, const Budgets& b) const {
  CheckOutcome out;
  out.document = blank_document();
  json ev = json::object();
  std::ostringstream os;
  bool truncated = false;
  for (const auto& [side, t] : {std::pair{"left", *r.left}, std::pair{"right", *r.right}}) {
    Lts lts = build_lts(spec_->language, t, b.max_states);
    truncated = truncated || lts.truncated;
    std::string dump = export_lts(lts);
    ev[side] = dump;
    std::istringstream lines(dump);
    for (std::string line; std::getline(lines, line);) os << "  " << line << '\n';
  }
  out.verdict = truncated ? "truncated" : "complete";
  out.status = truncated ? Status::inconclusive : Status::pass;
  out.document["evidence"] = ev;
  out.text = os.str();
  return out;
}

CheckOutcome Runner::run_entail(const CheckRequest& r) const {
  const InitUniverse& u = engine_.universe();
  EntailmentResult e = entails(u, *r.premise, *r.conclusion);
  CheckOutcome out;
  out.document = blank_document();
  out.verdict = e.holds ? "holds" : "fails";
  out.status = e.holds ? Status::pass : Status::fail;
  json ev{{"premise", to_string(*r.premise)}, {"conclusion", to_string(*r.conclusion)}};
  std::ostringstream os;
  if (e.counterexample) {
    ev["counterexample"] = assignment_json(*e.counterexample, u.alphabet);
    os << "  falsifying assignment: " << to_string(*e.counterexample, u.alphabet) << '\n';
  }
  if (u.empty()) os << "  note: no closed terms exist; entailment holds vacuously\n";
  out.document["evidence"] = ev;
  out.text = os.str();
  return out;
}

int exit_code(const std::vector<CheckOutcome>& outcomes) {
  bool fail = false, inconclusive = false;
  for (const auto& o : outcomes) {
    fail = fail || o.status == Status::fail;
    inconclusive = inconclusive || o.status == Status::inconclusive;
  }
  return fail ? 1 : inconclusive ? 2 : 0;
}

}  // namespace gsos
