// metta-machine: an abstract machine for MeTTa states
// Copyright 2026 The metta-machine Authors.
// SPDX-License-Identifier: Apache-2.0

#include "metta/unify.hpp"

#include <algorithm>
#include <set>

namespace metta {

std::optional<Term> Substitution::lookup(const std::string& var) const {
  auto it = bind_.find(var);
  if (it == bind_.end()) return std::nullopt;
  return it->second;
}

Term Substitution::apply(const Term& t) const {
  if (bind_.empty()) return t;
  switch (t.kind()) {
    case TermKind::Atom: {
      if (t.atom_value().kind == AtomKind::Var) {
        auto it = bind_.find(t.atom_value().var);
        if (it != bind_.end()) return it->second;
      }
      return t;
    }
    case TermKind::List: {
      std::vector<Term> items;
      items.reserve(t.items().size());
      for (const auto& it : t.items()) items.push_back(apply(it));
      return Term::list(std::move(items));
    }
    case TermKind::Bag: {
      std::vector<Term> items;
      items.reserve(t.items().size());
      for (const auto& it : t.items()) items.push_back(apply(it));
      return Term::bag(std::move(items));
    }
    default: return t;  // units and comprehensions
  }
}

static bool occurs(const std::string& var, const Term& t) {
  switch (t.kind()) {
    case TermKind::Atom:
      return t.atom_value().kind == AtomKind::Var && t.atom_value().var == var;
    case TermKind::List:
    case TermKind::Bag:
      for (const auto& it : t.items())
        if (occurs(var, it)) return true;
      return false;
    default: return false;
  }
}

bool Substitution::extend(const std::string& var, const Term& t) {
  Term resolved = apply(t);
  if (resolved.is_var() && resolved.atom_value().var == var) return true;  // x = x
  if (occurs(var, resolved)) return false;
  Substitution one;
  one.bind_.emplace(var, resolved);
  for (auto& [k, v] : bind_) v = one.apply(v);
  bind_.emplace(var, std::move(resolved));
  return true;
}

namespace {

bool unify_rec(const Term& a, const Term& b, Substitution& s);

bool unify_bags(const std::vector<Term>& as, const std::vector<Term>& bs, size_t i,
                std::vector<bool>& used, Substitution& s) {
  if (i == as.size()) return true;
  for (size_t j = 0; j < bs.size(); ++j) {
    if (used[j]) continue;
    Substitution saved = s;
    if (unify_rec(as[i], bs[j], s)) {
      used[j] = true;
      if (unify_bags(as, bs, i + 1, used, s)) return true;
      used[j] = false;
    }
    s = saved;
  }
  return false;
}

bool unify_rec(const Term& a0, const Term& b0, Substitution& s) {
  Term a = s.apply(a0);
  Term b = s.apply(b0);
  if (a.is_wildcard() || b.is_wildcard()) return true;
  if (a.is_var()) return s.extend(a.atom_value().var, b);
  if (b.is_var()) return s.extend(b.atom_value().var, a);
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::UnitList:
    case TermKind::UnitBag: return true;
    case TermKind::Atom: return a.atom_value() == b.atom_value();
    case TermKind::List: {
      if (a.items().size() != b.items().size()) return false;
      for (size_t i = 0; i < a.items().size(); ++i)
        if (!unify_rec(a.items()[i], b.items()[i], s)) return false;
      return true;
    }
    case TermKind::Bag: {
      if (a.items().size() != b.items().size()) return false;
      std::vector<bool> used(b.items().size(), false);
      return unify_bags(a.items(), b.items(), 0, used, s);
    }
    case TermKind::ListComp:
    case TermKind::BagComp: return a == b;  // no unification under binders
  }
  return false;
}

}  // namespace

std::optional<Substitution> unify(const Term& a, const Term& b) {
  Substitution s;
  if (!unify_rec(a, b, s)) return std::nullopt;
  return s;
}

Term make_equation(const Term& lhs, const Term& rhs) {
  return Term::list({Term::builtin(BuiltinSym::Eq), lhs, rhs});
}

std::optional<std::pair<Term, Term>> as_equation(const Term& t) {
  if (t.kind() != TermKind::List || t.items().size() != 3) return std::nullopt;
  const Term& head = t.items()[0];
  if (!head.is_atom() || head.atom_value().kind != AtomKind::Builtin ||
      head.atom_value().builtin != BuiltinSym::Eq)
    return std::nullopt;
  return std::make_pair(t.items()[1], t.items()[2]);
}

Term rename_vars_suffix(const Term& t, const std::string& suffix) {
  switch (t.kind()) {
    case TermKind::Atom:
      if (t.atom_value().kind == AtomKind::Var) return Term::var(t.atom_value().var + suffix);
      return t;
    case TermKind::List: {
      std::vector<Term> items;
      items.reserve(t.items().size());
      for (const auto& it : t.items()) items.push_back(rename_vars_suffix(it, suffix));
      return Term::list(std::move(items));
    }
    case TermKind::Bag: {
      std::vector<Term> items;
      items.reserve(t.items().size());
      for (const auto& it : t.items()) items.push_back(rename_vars_suffix(it, suffix));
      return Term::bag(std::move(items));
    }
    default: return t;
  }
}

namespace {

// Renames equation variables with the smallest ~n suffix avoiding vars(t).
// Identity when the equation shares no variable names with t.
std::pair<Term, Term> freshen_equation(const Term& lhs, const Term& rhs,
                                       const std::set<std::string>& avoid) {
  std::vector<std::string> eq_vars;
  collect_vars(lhs, eq_vars);
  collect_vars(rhs, eq_vars);
  bool collision = std::any_of(eq_vars.begin(), eq_vars.end(),
                               [&](const std::string& v) { return avoid.count(v) > 0; });
  if (!collision) return {lhs, rhs};
  for (int n = 1;; ++n) {
    std::string suffix = "~" + std::to_string(n);
    bool clean = std::all_of(eq_vars.begin(), eq_vars.end(), [&](const std::string& v) {
      return avoid.count(v + suffix) == 0;
    });
    if (clean) return {rename_vars_suffix(lhs, suffix), rename_vars_suffix(rhs, suffix)};
  }
}

std::set<std::string> var_set(const Term& t) {
  std::vector<std::string> vs;
  collect_vars(t, vs);
  return {vs.begin(), vs.end()};
}

}  // namespace

bool insensitive(const Term& t, const TermBag& k) {
  std::set<std::string> avoid = var_set(t);
  for (const auto& item : k.items()) {
    auto eq = as_equation(item);
    if (!eq) continue;
    auto [lhs, rhs] = freshen_equation(eq->first, eq->second, avoid);
    if (unify(t, lhs)) return false;
  }
  return true;
}

std::vector<EqMatch> match_equations(const Term& t, const TermBag& k) {
  std::vector<EqMatch> out;
  std::set<std::string> avoid = var_set(t);
  for (const auto& item : k.items()) {
    auto eq = as_equation(item);
    if (!eq) continue;
    auto [lhs, rhs] = freshen_equation(eq->first, eq->second, avoid);
    if (auto s = unify(t, lhs)) out.push_back(EqMatch{std::move(*s), rhs, item});
  }
  return out;
}

}  // namespace metta
