// metta-machine: an abstract machine for MeTTa states
// Copyright 2026 The metta-machine Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "metta/machine.hpp"
#include "metta/resources.hpp"
#include "metta/term.hpp"

namespace metta {

/// Offsets and line/column are 0-based counts of unicode scalar values.
struct SourceSpan {
  size_t start = 0, end = 0;
  size_t line = 0, column = 0;
};

struct ParseError {
  SourceSpan span;
  std::string message;
  std::vector<std::string> expected;

  std::string render() const;
};

template <typename T>
struct ParseResult {
  std::optional<T> value;
  std::optional<ParseError> error;
  bool ok() const { return value.has_value(); }
};

/// Lexical syntax:
///   variables `$name`, wildcard `_`, quoted names `@term`;
///   `true`/`false`, signed decimal ints, unsigned ints with `u` suffix,
///   floats with a point or exponent (plus `inf`, `-inf`, `nan`), strings in
///   double quotes with \" \\ \n \t \r \xHH escapes, URIs in backticks;
///   builtins `::=` `=` `transform` `addAtom` `remAtom` `+` `*`;
///   bare identifiers are strings that print unquoted;
///   comprehension arrows `<-` `<=` `<~`, source postfixes `?!` and `!?(..)`,
///   bind separator `&`, receipt separator `;` inside comprehensions,
///   remainders `... $x` and `... @$x`; comments `;` to end of line.
ParseResult<Term> parse_term(const std::string& src);

/// Whitespace-separated term sequence (.metta contents).
ParseResult<std::vector<Term>> parse_terms(const std::string& src);

std::string print_term(const Term& t);

std::string print_context(const Context& k);  // hole printed as a box

using AnyState = std::variant<State, RState>;

/// Four sections `i:` `k:` `w:` `o:` each holding one bag literal, all
/// optional, any order, no duplicates. An `eos:` section or any signed-term
/// annotation `t ^ (kid:<hex16> <eo>|_ <hex64>)` makes the file a resource
/// state, in which case every register term must be annotated; annotations in
/// a four-register file are an error.
ParseResult<AnyState> parse_state(const std::string& src);

std::string print_state(const State& s);
std::string print_state(const RState& s);
std::string print_state(const AnyState& s);

std::string print_bag(const TermBag& bag);
std::string print_signed_term(const SignedTerm& st);

/// Barbs and other term multisets rendered `{a b ...}`.
std::string print_term_multiset(const std::vector<Term>& sorted_terms);

}  // namespace metta
