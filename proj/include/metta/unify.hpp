// metta-machine: an abstract machine for MeTTa states
// Copyright 2026 The metta-machine Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "metta/term.hpp"

namespace metta {

/// Idempotent substitution: no bound variable occurs in any bound term.
/// Wildcards are never keys.
class Substitution {
 public:
  Substitution() = default;

  const std::map<std::string, Term>& bindings() const { return bind_; }
  bool empty() const { return bind_.empty(); }
  std::optional<Term> lookup(const std::string& var) const;

  /// Replaces every free variable by its binding; bags re-canonicalize.
  /// Comprehension bodies are treated as closed (receipts bind their names).
  Term apply(const Term& t) const;

  /// Binds var to t (t already fully applied); rewrites existing bindings.
  /// Returns false on occurs-check violation.
  bool extend(const std::string& var, const Term& t);

  bool operator==(const Substitution& o) const { return bind_ == o.bind_; }

 private:
  std::map<std::string, Term> bind_;
};

/// Two-sided first-order unification with occurs check. Bags unify by
/// backtracking over item pairings in canonical order, first solution wins;
/// unequal cardinalities fail. Comprehensions unify only when structurally
/// equal. Failure is a value.
std::optional<Substitution> unify(const Term& a, const Term& b);

inline Term apply(const Substitution& s, const Term& t) { return s.apply(t); }

/// True iff no equation (= t' u) in k has unify(t, t') succeed. Equation
/// variables are freshened away from vars(t) before the check.
bool insensitive(const Term& t, const TermBag& k);

struct EqMatch {
  Substitution subst;
  Term rhs;       // equation right-hand side, freshened
  Term equation;  // the original equation term as it sits in k
};

/// One entry per occurrence of an equation (= ti ui) in k whose head unifies
/// with t, in canonical bag order. Equation-side variables colliding with
/// vars(t) are renamed with a ~n suffix before unification.
std::vector<EqMatch> match_equations(const Term& t, const TermBag& k);

/// (= lhs rhs) as a three-element list.
Term make_equation(const Term& lhs, const Term& rhs);
/// Splits an equation term; nullopt when t is not shaped (= lhs rhs).
std::optional<std::pair<Term, Term>> as_equation(const Term& t);

/// Renames every variable in t by appending suffix.
Term rename_vars_suffix(const Term& t, const std::string& suffix);

}  // namespace metta
