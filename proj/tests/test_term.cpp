// metta-machine: an abstract machine for MeTTa states
// Copyright 2026 The metta-machine Authors.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "metta/term.hpp"
#include "support/gen.hpp"

using namespace metta;

static Term A() { return Term::sym("a"); }
static Term B() { return Term::sym("b"); }

TEST_CASE("term order basics") {
  CHECK(term_order(Term::integer(1), Term::integer(2)) < 0);
  CHECK(term_order(Term::bag({A(), B()}), Term::bag({B(), A()})) == 0);
  CHECK(term_order(Term::list({A(), B()}), Term::list({B(), A()})) != 0);
  // variant tag ranks
  CHECK(term_order(Term::unit_list(), Term::unit_bag()) < 0);
  CHECK(term_order(Term::unit_bag(), A()) < 0);
  CHECK(term_order(A(), Term::list({A()})) < 0);
  CHECK(term_order(Term::list({A()}), Term::bag({A()})) < 0);
}

TEST_CASE("ground values are distinct types") {
  CHECK(Term::integer(1) != Term::uinteger(1));
  CHECK(Term::integer(1) != Term::floating(1.0));
  CHECK(Term::str("x") != Term::uri("x"));
}

TEST_CASE("float canonicalization") {
  double nan1 = std::nan("1");
  double nan2 = std::nan("2");
  CHECK(Term::floating(nan1) == Term::floating(nan2));  // one canonical NaN
  CHECK(Term::floating(0.0) != Term::floating(-0.0));   // bit-level distinction
  CHECK(term_order(Term::floating(-1.0), Term::floating(1.0)) < 0);
  CHECK(term_order(Term::floating(-2.0), Term::floating(-1.0)) < 0);
}

TEST_CASE("bag union") {
  TermBag a = TermBag::of({A()});
  CHECK(bag_union(a, a).count(A()) == 2);
  CHECK(bag_union(TermBag{}, TermBag::of({A()})) == TermBag::of({A()}));
  TermBag ab = TermBag::of({A(), B()});
  TermBag b = TermBag::of({B()});
  TermBag abb = bag_union(ab, b);
  CHECK(abb.count(A()) == 1);
  CHECK(abb.count(B()) == 2);
}

TEST_CASE("bag remove one") {
  TermBag aab = TermBag::of({A(), A(), B()});
  auto r = bag_remove_one(aab, A());
  REQUIRE(r.has_value());
  CHECK(r->count(A()) == 1);
  CHECK(r->count(B()) == 1);
  CHECK(!bag_remove_one(TermBag::of({B()}), A()).has_value());
  // bag equality is order-insensitive
  Term xy = Term::bag({Term::sym("x"), Term::sym("y")});
  Term yx = Term::bag({Term::sym("y"), Term::sym("x")});
  auto r2 = bag_remove_one(TermBag::of({yx}), xy);
  REQUIRE(r2.has_value());
  CHECK(r2->empty());
}

TEST_CASE("cons") {
  CHECK(cons(A(), Term::list({B(), Term::sym("c")})) ==
        Term::list({A(), B(), Term::sym("c")}));
  CHECK(cons(A(), Term::unit_bag()) == Term::bag({A()}));
  CHECK(cons(A(), Term::unit_list()) == Term::list({A()}));
  CHECK(cons(A(), Term::bag({B()})) == Term::bag({A(), B()}));
  CHECK_THROWS_AS(cons(A(), Term::boolean(true)), std::invalid_argument);
}

TEST_CASE("empty collections collapse to units") {
  CHECK(Term::list({}) == Term::unit_list());
  CHECK(Term::bag({}) == Term::unit_bag());
}

TEST_CASE("canonicalization is idempotent and permutation-invariant") {
  testgen::Gen g(42);
  for (int n = 0; n < 2000; ++n) {
    std::vector<Term> items;
    for (int j = 0; j < 4; ++j) items.push_back(testgen::gen_term(g, 3, true, true));
    Term bag1 = Term::bag(items);
    std::shuffle(items.begin(), items.end(), g.rng);
    Term bag2 = Term::bag(items);
    CHECK(bag1 == bag2);
    CHECK(bag1.hash() == bag2.hash());
    // rebuilding from the stored, already-sorted items is the identity
    CHECK(Term::bag(bag1.items()) == bag1);
  }
}

TEST_CASE("term order is a total order") {
  testgen::Gen g(7);
  std::vector<Term> corpus;
  for (int n = 0; n < 120; ++n) corpus.push_back(testgen::gen_term(g, 3, true, true));
  // antisymmetry + consistency with equality
  for (const auto& a : corpus)
    for (const auto& b : corpus) {
      int ab = term_order(a, b);
      int ba = term_order(b, a);
      CHECK(ab == -ba);
      CHECK((ab == 0) == (a == b));
      if (ab == 0) CHECK(a.hash() == b.hash());
    }
  // transitivity on sampled triples (120^3 is too many; sample)
  for (int n = 0; n < 20000; ++n) {
    const Term& a = corpus[g.upto(int(corpus.size()))];
    const Term& b = corpus[g.upto(int(corpus.size()))];
    const Term& c = corpus[g.upto(int(corpus.size()))];
    if (term_order(a, b) <= 0 && term_order(b, c) <= 0) CHECK(term_order(a, c) <= 0);
  }
}

TEST_CASE("bag union is a commutative monoid") {
  testgen::Gen g(11);
  for (int n = 0; n < 500; ++n) {
    auto mk = [&] {
      std::vector<Term> items;
      for (int j = 0; j < g.upto(4); ++j) items.push_back(testgen::gen_term(g, 2, false, true));
      return TermBag::of(std::move(items));
    };
    TermBag x = mk(), y = mk(), z = mk();
    CHECK(bag_union(x, y) == bag_union(y, x));
    CHECK(bag_union(bag_union(x, y), z) == bag_union(x, bag_union(y, z)));
    CHECK(bag_union(x, TermBag{}) == x);
  }
}

TEST_CASE("node count") {
  CHECK(A().node_count() == 1);
  CHECK(Term::list({Term::sym("f"), A()}).node_count() == 3);
  CHECK(Term::unit_bag().node_count() == 1);
  CHECK(Term::bag({A(), Term::list({A(), B()})}).node_count() == 5);
}
