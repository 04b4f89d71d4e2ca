// metta-machine: an abstract machine for MeTTa states
// Copyright 2026 The metta-machine Authors.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "metta/resources.hpp"
#include "metta/syntax.hpp"
#include "support/gen.hpp"

using namespace metta;

static Term T(const std::string& src) {
  auto r = parse_term(src);
  REQUIRE_MESSAGE(r.ok(), src);
  return *r.value;
}

static std::vector<unsigned char> key_bytes(const std::string& s) {
  return {s.begin(), s.end()};
}

TEST_CASE("cost function") {
  CHECK(cost_term(T("a")) == 1);
  CHECK(cost_term(T("(f a)")) == 3);
  CHECK(cost_term(T("{}")) == 1);
  CHECK(cost_term(T("()")) == 1);
  CHECK(cost_subst(Substitution{}) == 0);
  Substitution s1;
  s1.extend("x", T("a"));
  CHECK(cost_subst(s1) == 1);
  Substitution s2;
  s2.extend("x", T("(f a)"));
  s2.extend("y", T("b"));
  CHECK(cost_subst(s2) == 4);
  // strictly positive and monotone under subterm inclusion
  testgen::Gen g(1);
  for (int n = 0; n < 500; ++n) {
    Term t = testgen::gen_term(g, 3, true, true);
    CHECK(cost_term(t) >= 1);
    for (const auto& sub : t.items()) CHECK(cost_term(sub) < cost_term(t));
  }
}

TEST_CASE("signing") {
  auto p = key_bytes("alpha-key");
  SignedTerm st = Signer::sign(p, T("(f a)"), std::nullopt);
  Signer signer;
  signer.add_key(p);
  CHECK(signer.verify(st));
  CHECK(st.key == Signer::key_id(p));

  auto q = key_bytes("beta-key");
  CHECK(Signer::key_id(p) != Signer::key_id(q));

  SignedTerm tampered = st;
  tampered.term = T("(f b)");
  CHECK(!signer.verify(tampered));

  // determinism
  CHECK(Signer::sign(p, T("(f a)"), std::nullopt) == st);
  // eo participates in the tag
  SignedTerm with_eo = Signer::sign(p, T("(f a)"), 5);
  CHECK(with_eo.tag != st.tag);
  CHECK(signer.verify(with_eo));

  // null signature always verifies and unknown real tags do not
  CHECK(Signer{}.verify(Signer::sign_null(T("x"), KeyId{9}, std::nullopt)));
  CHECK(!Signer{}.verify(st));
}

static RState query_rstate(Eo balance, std::optional<Eo> inline_eo = std::nullopt) {
  RState s;
  KeyId kid{0xaa};
  s.i = SignedBag::of({Signer::sign_null(T("(g (f a))"), kid, inline_eo)});
  s.k = SignedBag::of({Signer::sign_null(T("(= (f $x) ($x $x))"), kid, std::nullopt)});
  s.eos[kid] = balance;
  return s;
}

TEST_CASE("costed Query debits the ledger") {
  RState s = query_rstate(100);
  Signer signer;
  auto ts = enabled_rb(s, signer);
  REQUIRE(ts.size() == 1);
  const CostedTransition& t = ts[0];
  CHECK(t.label == RuleLabel::Query);
  CHECK(t.cost == 4);  // #({x -> a}) + #((a a)) = 1 + 3
  CHECK(t.payer == KeyId{0xaa});
  CHECK(t.ledger_after.at(KeyId{0xaa}) == 96);
  CHECK(t.next.w.project() == TermBag::of({T("(g (a a))")}));
  CHECK(t.next.w.items()[0].eo == std::nullopt);  // produced terms carry no inline effort
}

TEST_CASE("the gas guard is strict") {
  Signer signer;
  CHECK(enabled_rb(query_rstate(4), signer).empty());   // 4 - 4 = 0 fails > 0
  CHECK(enabled_rb(query_rstate(5), signer).size() == 1);
  // inline effort combines with the balance
  CHECK(enabled_rb(query_rstate(0, 4), signer).empty());
  CHECK(enabled_rb(query_rstate(0, 5), signer).size() == 1);
  CHECK(enabled_rb(query_rstate(2, 3), signer).size() == 1);
}

TEST_CASE("a missing ledger entry blocks even with inline effort") {
  RState s = query_rstate(100, 50);
  s.eos.clear();
  Signer signer;
  CHECK(enabled_rb(s, signer).empty());
  auto rr = run_rb(s, signer, SchedulerPolicy::deterministic(), 10);
  CHECK(rr.verdict == RunRbVerdict::Starved);
}

TEST_CASE("AddAtom1 with inline effort") {
  RState s;
  KeyId kid{0xbb};
  s.i = SignedBag::of({Signer::sign_null(T("(addAtom a)"), kid, 10)});
  s.eos[kid] = 0;
  Signer signer;
  auto ts = enabled_rb(s, signer);
  REQUIRE(ts.size() == 1);
  CHECK(ts[0].label == RuleLabel::AddAtom1);
  CHECK(ts[0].cost == 1);
  CHECK(ts[0].ledger_after.at(kid) == 9);
  CHECK(ts[0].next.k.project() == TermBag::of({T("a")}));
  CHECK(ts[0].next.o.project() == TermBag::of({T("()")}));
}

TEST_CASE("run_rb matches the plain machine's observables when funded") {
  RState s = query_rstate(1000);
  Signer signer;
  auto rr = run_rb(s, signer, SchedulerPolicy::deterministic(), 20);
  CHECK(rr.verdict == RunRbVerdict::Quiescent);
  RunResult plain = run(s.project(), SchedulerPolicy::deterministic(), 20);
  CHECK(rr.final_state.o.project() == plain.final_state.o);
  CHECK(rr.final_state.ledger_total() < 1000);  // something was paid
}

TEST_CASE("zero balance starves a runnable state") {
  RState s = query_rstate(0);
  Signer signer;
  auto rr = run_rb(s, signer, SchedulerPolicy::deterministic(), 20);
  CHECK(rr.verdict == RunRbVerdict::Starved);
  CHECK(!enabled(s.project()).empty());
  // fuel exhaustion is reported before quiescence
  auto rf = run_rb(query_rstate(1000), signer, SchedulerPolicy::deterministic(), 1);
  CHECK(rf.verdict == RunRbVerdict::FuelExhausted);
}

TEST_CASE("costed directive composites") {
  // AddAtom2: directive in k composes with an inner Query. The directive's
  // payer entry is removed while the inner transition runs, so the inner
  // step needs its own key.
  RState s;
  KeyId kid_d{0xcc}, kid_q{0xdd};
  s.i = SignedBag::of({Signer::sign_null(T("q"), kid_q, std::nullopt)});
  s.k = SignedBag::of({Signer::sign_null(T("(addAtom b)"), kid_d, std::nullopt),
                       Signer::sign_null(T("(= q r)"), kid_q, std::nullopt)});
  s.eos[kid_d] = 100;
  s.eos[kid_q] = 100;
  Signer signer;
  auto ts = enabled_rb(s, signer);
  REQUIRE(ts.size() == 2);
  CHECK(ts[0].label == RuleLabel::Query);
  const CostedTransition& t = ts[1];
  CHECK(t.label == RuleLabel::AddAtom2);
  REQUIRE(t.inner != nullptr);
  CHECK(t.inner->label == RuleLabel::Query);
  CHECK(t.cost == 1);         // #(b)
  CHECK(t.inner->cost == 1);  // empty sigma + #(r)
  CHECK(t.total_cost() == 2);
  CHECK(t.next.k.project() == TermBag::of({T("(addAtom b)"), T("b"), T("(= q r)")}));
  CHECK(t.next.o.project() == TermBag::of({T("()")}));
  CHECK(t.ledger_after.at(kid_d) == 99);
  CHECK(t.ledger_after.at(kid_q) == 99);

  // with a single shared key the composite is blocked while the entry is out
  RState shared;
  shared.i = SignedBag::of({Signer::sign_null(T("q"), kid_d, std::nullopt)});
  shared.k = SignedBag::of({Signer::sign_null(T("(addAtom b)"), kid_d, std::nullopt),
                            Signer::sign_null(T("(= q r)"), kid_d, std::nullopt)});
  shared.eos[kid_d] = 100;
  auto ts2 = enabled_rb(shared, signer);
  REQUIRE(ts2.size() == 1);
  CHECK(ts2[0].label == RuleLabel::Query);
}

TEST_CASE("gas conservation along runs") {
  testgen::Gen g(616);
  Signer signer;
  for (int n = 0; n < 120; ++n) {
    RState s = testgen::gen_rstate(g, true);
    auto rr = run_rb(s, signer, SchedulerPolicy::random(n), 25);
    Eo spent = 0, inline_in = 0;
    for (const auto& t : rr.trace) {
      spent += t.total_cost();
      inline_in += t.total_inline_consumed();
    }
    CHECK(s.ledger_total() + inline_in - rr.final_state.ledger_total() == spent);
  }
}

TEST_CASE("projection adequacy") {
  testgen::Gen g(717);
  Signer signer;
  for (int n = 0; n < 60; ++n) {
    RState s = testgen::gen_rstate(g, true);
    for (const auto& ct : enabled_rb(s, signer)) {
      State source = s.project();
      State target = ct.next.project();
      bool found = false;
      for (const auto& t : enabled(source))
        if (t.label == ct.label && t.next == target) found = true;
      CHECK_MESSAGE(found, rule_label_name(ct.label));
    }
  }
}

TEST_CASE("monotone starvation") {
  testgen::Gen g(818);
  Signer signer;
  for (int n = 0; n < 40; ++n) {
    RState s = testgen::gen_rstate(g, false);  // tight balances
    auto base = enabled_rb(s, signer);
    RState richer = s;
    for (auto& [kid, eo] : richer.eos) eo += 50;
    auto more = enabled_rb(richer, signer);
    // every (label, host) enabled with less budget stays enabled with more
    for (const auto& t : base) {
      bool found = false;
      for (const auto& t2 : more)
        if (t2.label == t.label && t2.host == t.host && t2.redex == t.redex) found = true;
      CHECK(found);
    }
    CHECK(more.size() >= base.size());
  }
}

TEST_CASE("engine never leaves a non-positive balance and always signs validly") {
  testgen::Gen g(919);
  Signer signer;
  for (int n = 0; n < 60; ++n) {
    RState s = testgen::gen_rstate(g, g.chance(0.7));
    auto rr = run_rb(s, signer, SchedulerPolicy::random(n), 20);
    RState cur = s;
    for (const auto& t : rr.trace) {
      cur = t.next;
      for (const auto& [kid, eo] : cur.eos) CHECK(eo > 0);
      for (const auto* bag : {&cur.i, &cur.k, &cur.w, &cur.o})
        for (const auto& st : bag->items()) CHECK(signer.verify(st));
    }
  }
}

TEST_CASE("keystore re-signing produces verifying tags") {
  Signer signer;
  auto p = key_bytes("gamma");
  signer.add_key(p);
  KeyId kid = Signer::key_id(p);
  RState s;
  s.i = SignedBag::of({signer.resign(kid, T("(g (f a))"), std::nullopt)});
  s.k = SignedBag::of({signer.resign(kid, T("(= (f $x) ($x $x))"), std::nullopt)});
  s.eos[kid] = 100;
  auto ts = enabled_rb(s, signer);
  REQUIRE(ts.size() == 1);
  const SignedTerm& produced = ts[0].next.w.items()[0];
  CHECK(std::any_of(produced.tag.begin(), produced.tag.end(),
                    [](unsigned char c) { return c != 0; }));
  CHECK(signer.verify(produced));
}
