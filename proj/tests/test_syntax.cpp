// metta-machine: an abstract machine for MeTTa states
// Copyright 2026 The metta-machine Authors.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "metta/syntax.hpp"
#include "support/gen.hpp"

using namespace metta;

static Term parsed(const std::string& src) {
  auto r = parse_term(src);
  REQUIRE_MESSAGE(r.ok(), (r.error ? r.error->render() : std::string("?")));
  return *r.value;
}

TEST_CASE("parse basic terms") {
  Term t = parsed("(= (f $x) ($x $x))");
  Term expect = Term::list({Term::builtin(BuiltinSym::Eq),
                            Term::list({Term::sym("f"), Term::var("x")}),
                            Term::list({Term::var("x"), Term::var("x")})});
  CHECK(t == expect);
  CHECK(parsed("{}") == Term::unit_bag());
  CHECK(parsed("()") == Term::unit_list());
  CHECK(parsed("-3") == Term::integer(-3));
  CHECK(parsed("7u") == Term::uinteger(7));
  CHECK(parsed("1.5") == Term::floating(1.5));
  CHECK(parsed("2e3") == Term::floating(2000.0));
  CHECK(parsed("\"hi there\"") == Term::str("hi there"));
  CHECK(parsed("`http://x`") == Term::uri("http://x"));
  CHECK(parsed("_").is_wildcard());
  CHECK(parsed("true") == Term::boolean(true));
  CHECK(parsed("::=") == Term::builtin(BuiltinSym::DefEq));
  CHECK(parsed("inf") == Term::floating(HUGE_VAL));
  CHECK(parsed("-inf") == Term::floating(-HUGE_VAL));
}

TEST_CASE("bags parse canonically sorted") {
  CHECK(print_term(parsed("{b a}")) == "{a b}");
  CHECK(print_term(Term::bag({Term::sym("b"), Term::sym("a")})) == "{a b}");
}

TEST_CASE("comprehension with a linear receipt") {
  Term t = parsed("( x | $a <- src . ($a) )");
  REQUIRE(t.kind() == TermKind::ListComp);
  CHECK(t.comp_head() == Term::sym("x"));
  REQUIRE(t.comp_receipts().size() == 1);
  const Receipt& r = t.comp_receipts()[0];
  CHECK(r.kind == ReceiptKind::Linear);
  REQUIRE(r.binds.size() == 1);
  REQUIRE(r.binds[0].names.size() == 1);
  CHECK(r.binds[0].names[0] == NamePattern::variable("a"));
  CHECK(!r.binds[0].remainder.has_value());
  REQUIRE(r.binds[0].source.atom.has_value());
  CHECK(*r.binds[0].source.atom == Term::sym("src"));
  REQUIRE(t.comp_body().size() == 1);
  CHECK(t.comp_body()[0] == Term::list({Term::var("a")}));
}

TEST_CASE("receipt variants round-trip") {
  for (const char* src : {
           "( h | $a <- src . ($a) )",
           "{ h | $a, $b <= q . }",
           "( h | _ <~ 3 . x )",
           "( h | $a ... @$rest <- @(f 1) ; $b <- s?! . $a $b )",
           "( h | $a <- s!?(1 2) & $b <- t . )",
           "( h | ... $r <- src . )",
       }) {
    CAPTURE(src);
    Term t = parsed(src);
    Term again = parsed(print_term(t));
    CHECK(t == again);
  }
}

TEST_CASE("print examples") {
  CHECK(print_term(Term::unit_list()) == "()");
  CHECK(print_term(Term::integer(-3)) == "-3");
  CHECK(print_term(Term::str("true")) == "\"true\"");   // avoids keyword capture
  CHECK(print_term(Term::str("123")) == "\"123\"");     // avoids number capture
  CHECK(print_term(Term::floating(2000.0)) == "2000.0");
  CHECK(print_term(Term::floating(-0.0)) == "-0.0");
  CHECK(print_term(Term::uinteger(7)) == "7u");
}

TEST_CASE("comments") {
  CHECK(parsed("; leading comment\n(f a) ; trailing") ==
        Term::list({Term::sym("f"), Term::sym("a")}));
}

TEST_CASE("parse errors carry positions") {
  auto r = parse_term("(f a");
  REQUIRE(!r.ok());
  CHECK(r.error->message.size() > 0);
  auto r2 = parse_term("(f ^)");
  CHECK(!r2.ok());
  auto r3 = parse_term("99999999999999999999999999");
  REQUIRE(!r3.ok());
  CHECK(r3.error->message == "integer literal out of range");
  auto r4 = parse_term("(f a))");
  REQUIRE(!r4.ok());  // trailing input
}

TEST_CASE("round-trip property") {
  testgen::Gen g(2026);
  for (int n = 0; n < 10000; ++n) {
    Term t = testgen::gen_term(g, 4, true, true);
    std::string printed = print_term(t);
    CAPTURE(printed);
    auto r = parse_term(printed);
    REQUIRE_MESSAGE(r.ok(), (r.error ? r.error->render() : std::string()));
    CHECK(*r.value == t);
  }
}

TEST_CASE("fuzz parser never crashes") {
  testgen::Gen g(77);
  const std::string alphabet =
      "(){}|.;&,@_^$<>=+-*?!\"`\\ \t\nabf123ukidtransform:x\xc3\xa9\xff\x01";
  for (int n = 0; n < 10000; ++n) {
    std::string src;
    int len = g.upto(40);
    for (int j = 0; j < len; ++j) src.push_back(alphabet[g.upto(int(alphabet.size()))]);
    auto r = parse_term(src);        // either parses or reports; no crash
    auto rs = parse_state(src);
    (void)r;
    (void)rs;
  }
}

TEST_CASE("parse state files") {
  auto r = parse_state("i: {(f a)}\nk: {(= (f $x) ($x $x))}\n");
  REQUIRE(r.ok());
  REQUIRE(std::holds_alternative<State>(*r.value));
  State s = std::get<State>(*r.value);
  CHECK(s.i == TermBag::of({Term::list({Term::sym("f"), Term::sym("a")})}));
  CHECK(s.k.size() == 1);
  CHECK(s.w.empty());
  CHECK(s.o.empty());

  auto empty = parse_state("");
  REQUIRE(empty.ok());
  State es = std::get<State>(*empty.value);
  CHECK(es.i.empty());
  CHECK(es.k.empty());
  CHECK(es.w.empty());
  CHECK(es.o.empty());
  CHECK(print_state(es) == "i: {}\nk: {}\nw: {}\no: {}\n");

  auto rr = parse_state("eos: {(kid:0x1122334455667788 10)}\n");
  REQUIRE(rr.ok());
  REQUIRE(std::holds_alternative<RState>(*rr.value));
  RState rs = std::get<RState>(*rr.value);
  REQUIRE(rs.eos.size() == 1);
  CHECK(rs.eos.begin()->first.hex() == "1122334455667788");
  CHECK(rs.eos.begin()->second == 10);
}

TEST_CASE("ledger entries merge by addition") {
  auto r = parse_state("eos: {(kid:0x0000000000000001 4) (kid:0x0000000000000001 5)}");
  REQUIRE(r.ok());
  RState rs = std::get<RState>(*r.value);
  REQUIRE(rs.eos.size() == 1);
  CHECK(rs.eos.begin()->second == 9);
}

TEST_CASE("signed terms in state files") {
  std::string tag(64, '0');
  std::string src = "i: {a ^ (kid:0x00000000000000aa 10 " + tag + ")}\neos: {(kid:0x00000000000000aa 5)}\n";
  auto r = parse_state(src);
  REQUIRE(r.ok());
  RState rs = std::get<RState>(*r.value);
  REQUIRE(rs.i.size() == 1);
  CHECK(rs.i.items()[0].term == Term::sym("a"));
  CHECK(rs.i.items()[0].eo == 10);
  CHECK(rs.i.items()[0].key.hex() == "00000000000000aa");
  // round-trip
  auto again = parse_state(print_state(rs));
  REQUIRE(again.ok());
  CHECK(std::get<RState>(*again.value) == rs);
}

TEST_CASE("unsigned terms in a resource state are an error") {
  auto r = parse_state("i: {a}\neos: {(kid:0x0000000000000001 5)}");
  CHECK(!r.ok());
}

TEST_CASE("state round-trip property") {
  testgen::Gen g(505);
  for (int n = 0; n < 500; ++n) {
    if (n % 2 == 0) {
      State s = testgen::gen_machine_state(g);
      auto r = parse_state(print_state(s));
      REQUIRE_MESSAGE(r.ok(), r.error->render());
      CHECK(std::get<State>(*r.value) == s);
    } else {
      RState s = testgen::gen_rstate(g, g.chance(0.5));
      auto r = parse_state(print_state(s));
      REQUIRE_MESSAGE(r.ok(), r.error->render());
      CHECK(std::get<RState>(*r.value) == s);
    }
  }
}
