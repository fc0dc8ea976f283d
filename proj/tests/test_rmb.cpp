#include <doctest.h>

#include "gsos/parser.hpp"
#include "gsos/rmb.hpp"
#include "support.hpp"

using namespace gsos;

namespace {

const Action a{"a"}, b{"b"};
Term v(const std::string& n) { return Term::var(n); }

struct Fixture {
  SpecFile spec;
  RuloidEngine engine;
  RmbChecker checker;

  explicit Fixture(const char* file)
      : spec(oracle::load(file)), engine(spec.language), checker(engine) {}

  Term term(const std::string& text) const { return parse_term(text, spec.language.signature()); }
};

bool equivalent(const InitUniverse& u, const Formula& f, const Formula& g) {
  return entails(u, f, g).holds && entails(u, g, f).holds;
}

}  // namespace

TEST_CASE("the empty relation is trivially a bisimulation") {
  Fixture fx("sequencing.gsos");
  auto verdict = fx.checker.check_relation(OpenRelation{});
  CHECK(verdict.kind == Verdict::Kind::proven);
  CHECK(verdict.evidence.empty());
}

TEST_CASE("OpenRelation membership is modulo renaming") {
  OpenRelation r{{{Term::app("inter", {v("x"), v("y")}), Term::app("inter", {v("y"), v("x")})}}};
  CHECK(r.contains(Term::app("inter", {v("u"), v("w")}), Term::app("inter", {v("w"), v("u")})));
  CHECK(r.contains(v("q"), v("q")));
  CHECK_FALSE(r.contains(Term::app("inter", {v("u"), v("w")}), Term::app("inter", {v("u"), v("w'")})));
  OpenRelation strict{r.pairs, false, false};
  CHECK_FALSE(strict.contains(v("q"), v("q")));
}

TEST_CASE("sequencing is associative with the one-pair relation") {
  Fixture fx("sequencing.gsos");
  OpenRelation r{{{fx.spec.context("R"), fx.spec.context("L")}}};
  auto verdict = fx.checker.check_relation(r);
  CHECK(verdict.kind == Verdict::Kind::proven);
  CHECK(verdict.evidence.size() == 2);
  for (const auto& pr : verdict.evidence) CHECK(pr.passed);

  auto found = fx.checker.search({fx.spec.context("L"), fx.spec.context("R")});
  CHECK(found.kind == Verdict::Kind::proven);
}

TEST_CASE("check_pair fails when target pairs are missing") {
  Fixture fx("interleave.gsos");
  TermPair pq{fx.term("inter(x,y)"), fx.term("inter(y,x)")};
  auto without = fx.checker.check_pair(OpenRelation{}, pq);
  CHECK_FALSE(without.passed);
  for (const auto& m : without.matches) {
    CHECK_FALSE(m.matched);
    CHECK_FALSE(m.blocked_targets.empty());
    CHECK_FALSE(m.unrepairable);
  }
  auto with = fx.checker.check_pair(OpenRelation{{pq}}, pq);
  CHECK(with.passed);
}

TEST_CASE("clock axioms are matched through the True antecedent") {
  Fixture fx("clock.gsos");
  OpenRelation r{{{fx.spec.context("C"), fx.term("inter(z,omega)")},
                  {fx.spec.context("C"), fx.term("omega")},
                  {fx.spec.context("D"), fx.term("omega")}}};
  auto verdict = fx.checker.check_relation(r);
  CHECK(verdict.kind == Verdict::Kind::proven);

  auto pr = fx.checker.check_pair(r, {fx.spec.context("C"), fx.term("omega")});
  CHECK(pr.passed);
  for (const auto& m : pr.matches) CHECK(m.hyps_j == Formula::top());
}

TEST_CASE("h(x) = i(x) is refuted at the (g, f) descendant") {
  Fixture fx("example53.gsos");
  auto verdict = fx.checker.search({fx.term("h(x)"), fx.term("i(x)")});
  REQUIRE(verdict.kind == Verdict::Kind::refuted);
  REQUIRE(verdict.refutation);
  CHECK(verdict.refutation->pair == TermPair{fx.term("g(x)"), fx.term("f(x)")});
  REQUIRE(verdict.refutation->counterexample);
  const auto& al = fx.spec.language.alphabet();
  CHECK(to_string(*verdict.refutation->counterexample, al) == "[x:{a}]");
}

TEST_CASE("fg extension is proven alone and refuted with a dead constant") {
  Fixture base("fg-extension.gsos");
  CHECK(base.checker.search({base.term("f(x)"), base.term("g(y)")}).kind == Verdict::Kind::proven);

  auto lang = disjoint_extend(base.spec.language, bccsp_prelude({a}, BccspFragment::zero_and_prefix));
  RuloidEngine engine(lang);
  RmbChecker checker(engine);
  auto v2 = checker.search({base.term("f(x)"), base.term("g(y)")});
  CHECK(v2.kind == Verdict::Kind::refuted);
}

TEST_CASE("a language without closed terms proves anything") {
  Fixture fx("triv.gsos");
  CHECK(fx.checker.search({fx.term("f(x)"), fx.term("g(y)")}).kind == Verdict::Kind::proven);
}

TEST_CASE("search respects the pair budget") {
  Fixture fx("example53.gsos");
  Budgets tight;
  tight.max_pairs = 1;
  auto verdict = fx.checker.search({fx.term("h(x)"), fx.term("i(x)")}, tight);
  CHECK(verdict.kind == Verdict::Kind::inconclusive);
  CHECK_FALSE(verdict.frontier.empty());
  // A relation closed under its own targets needs no more room.
  Fixture seq("sequencing.gsos");
  CHECK(seq.checker.search({seq.spec.context("L"), seq.spec.context("R")}, tight).kind ==
        Verdict::Kind::proven);
}

TEST_CASE("certify_extension_stability examples") {
  auto full = certify_extension_stability(init_universe(bccsp_prelude({a, b})));
  CHECK(full.stable);
  CHECK(full.realizable == 4);
  CHECK(full.total == 4);
  CHECK(full.missing.empty());

  auto ex = certify_extension_stability(init_universe(oracle::load("example53.gsos").language));
  CHECK_FALSE(ex.stable);
  CHECK(ex.realizable == 3);
  REQUIRE(ex.missing.size() == 1);

  CHECK_FALSE(certify_extension_stability(init_universe(oracle::load("fg-extension.gsos").language)).stable);
}

TEST_CASE("normalize_pattern is invariant under renaming and swapping") {
  TermPair p{Term::app("seq", {v("x"), v("y")}), Term::app("seq", {v("y"), v("x")})};
  TermPair q{Term::app("seq", {v("b"), v("a")}), Term::app("seq", {v("a"), v("b")})};
  CHECK(normalize_pattern(p) == normalize_pattern(q));
  TermPair swapped{p.second, p.first};
  CHECK(normalize_pattern(p) == normalize_pattern(swapped));
}

TEST_CASE("J* is the set of admissible candidates and matching is entailment") {
  for (const char* file : {"sequencing.gsos", "clock.gsos", "example53.gsos", "interleave.gsos"}) {
    CAPTURE(file);
    auto spec = oracle::load(file);
    RuloidEngine engine(spec.language);
    RmbChecker checker(engine);
    for (const auto& req : spec.checks) {
      if (!req.left || req.mode != CheckMode::rm) continue;
      auto verdict = checker.search({*req.left, *req.right});
      for (const auto& pr : verdict.evidence) {
        for (const auto& m : pr.matches) {
          std::vector<Ruloid> admissible;
          for (const auto& cand : m.candidates) {
            if (cand.admissible()) admissible.push_back(cand.ruloid);
            CHECK(cand.same_action == (cand.ruloid.action == m.ruloid.action));
            if (cand.admissible())
              CHECK(verdict.relation.contains(m.ruloid.target, cand.ruloid.target));
          }
          CHECK(equivalent(engine.universe(), m.hyps_j, hyps_of_ruloid_set(admissible)));
          CHECK(m.matched == entails(engine.universe(), m.hyps, m.hyps_j).holds);
        }
      }
    }
  }
}

TEST_CASE("Proven evidence replays through check_relation") {
  for (const char* file : {"sequencing.gsos", "clock.gsos", "interleave.gsos", "bccsp.gsos"}) {
    CAPTURE(file);
    auto spec = oracle::load(file);
    RuloidEngine engine(spec.language);
    RmbChecker checker(engine);
    for (const auto& req : spec.checks) {
      if (!req.left || req.mode != CheckMode::rm) continue;
      CAPTURE(to_string(*req.left));
      auto verdict = checker.search({*req.left, *req.right});
      REQUIRE(verdict.kind == Verdict::Kind::proven);
      CHECK(verdict.relation.contains(*req.left, *req.right));
      auto replay = checker.check_relation(verdict.relation);
      CHECK(replay.kind == Verdict::Kind::proven);
      for (const auto& pr : replay.evidence) CHECK(pr.passed);
    }
  }
}
