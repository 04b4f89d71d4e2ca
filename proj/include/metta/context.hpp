// metta-machine: an abstract machine for MeTTa states
// Copyright 2026 The metta-machine Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>
#include <vector>

#include "metta/term.hpp"

namespace metta {

/// One step of a one-hole decomposition path. For lists the hole sits between
/// `left` and `right`; for bags the removed occurrence is identified by value,
/// with the remaining siblings kept as a multiset.
struct ContextStep {
  TermKind kind = TermKind::List;  // List or Bag
  std::vector<Term> left;          // List only
  std::vector<Term> right;         // List only
  TermBag siblings;                // Bag only

  bool operator==(const ContextStep& o) const;
};

/// One-hole context: a path from the root to the hole, outermost first.
class Context {
 public:
  Context() = default;
  explicit Context(std::vector<ContextStep> path) : path_(std::move(path)) {}

  bool trivial() const { return path_.empty(); }
  const std::vector<ContextStep>& path() const { return path_; }

  /// Replaces the hole with t; bags along the path re-canonicalize.
  Term plug(const Term& t) const;

  Context extended(ContextStep step) const;

  bool operator==(const Context& o) const { return path_ == o.path_; }

 private:
  std::vector<ContextStep> path_;
};

/// Every (context, subterm) pair of t, trivial pair first, then outermost to
/// innermost, left to right (lists) / canonical order with multiplicity
/// (bags). Does not descend into comprehensions. The pair count equals the
/// node count for comprehension-free terms.
std::vector<std::pair<Context, Term>> decompositions(const Term& t);

inline Term plug(const Context& k, const Term& t) { return k.plug(t); }

}  // namespace metta
