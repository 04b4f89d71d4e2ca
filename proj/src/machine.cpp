// metta-machine: an abstract machine for MeTTa states
// Copyright 2026 The metta-machine Authors.
// SPDX-License-Identifier: Apache-2.0

#include "metta/machine.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <tuple>

namespace metta {

int State::compare(const State& a, const State& b) {
  if (int c = TermBag::compare(a.i, b.i)) return c;
  if (int c = TermBag::compare(a.k, b.k)) return c;
  if (int c = TermBag::compare(a.w, b.w)) return c;
  return TermBag::compare(a.o, b.o);
}

size_t State::hash() const {
  size_t h = i.hash();
  h = hash_combine(h, k.hash());
  h = hash_combine(h, w.hash());
  return hash_combine(h, o.hash());
}

const char* rule_label_name(RuleLabel label) {
  switch (label) {
    case RuleLabel::Query: return "Query";
    case RuleLabel::Chain: return "Chain";
    case RuleLabel::Transform: return "Transform";
    case RuleLabel::AddAtom1: return "AddAtom1";
    case RuleLabel::AddAtom2: return "AddAtom2";
    case RuleLabel::RemAtom1: return "RemAtom1";
    case RuleLabel::RemAtom2: return "RemAtom2";
    case RuleLabel::Output: return "Output";
    case RuleLabel::BoolAdd1: return "BoolAdd1";
    case RuleLabel::BoolAdd2: return "BoolAdd2";
    case RuleLabel::BoolMult1: return "BoolMult1";
    case RuleLabel::BoolMult2: return "BoolMult2";
    case RuleLabel::NumAdd1: return "NumAdd1";
    case RuleLabel::NumAdd2: return "NumAdd2";
    case RuleLabel::NumMult1: return "NumMult1";
    case RuleLabel::NumMult2: return "NumMult2";
    case RuleLabel::StrAdd1: return "StrAdd1";
    case RuleLabel::StrAdd2: return "StrAdd2";
  }
  return "?";
}

std::optional<RuleLabel> rule_label_from_name(const std::string& name) {
  for (int l = 0; l <= static_cast<int>(RuleLabel::StrAdd2); ++l) {
    RuleLabel label = static_cast<RuleLabel>(l);
    if (name == rule_label_name(label)) return label;
  }
  return std::nullopt;
}

namespace {

constexpr int kMaxDirectiveDepth = 8;

Term unit() { return Term::unit_list(); }

bool is_builtin_head(const Term& t, BuiltinSym sym) {
  return t.is_atom() && t.atom_value().kind == AtomKind::Builtin && t.atom_value().builtin == sym;
}

// (op a b) with op = addAtom/remAtom takes one argument; + and * take two.
std::optional<Term> directive_arg(const Term& t, BuiltinSym sym) {
  if (t.kind() != TermKind::List || t.items().size() != 2) return std::nullopt;
  if (!is_builtin_head(t.items()[0], sym)) return std::nullopt;
  return t.items()[1];
}

std::optional<std::pair<Term, Term>> binop_args(const Term& t, BuiltinSym sym) {
  if (t.kind() != TermKind::List || t.items().size() != 3) return std::nullopt;
  if (!is_builtin_head(t.items()[0], sym)) return std::nullopt;
  return std::make_pair(t.items()[1], t.items()[2]);
}

std::optional<std::tuple<Term, Term, Term>> transform_parts(const Term& t) {
  if (t.kind() != TermKind::List || t.items().size() != 3) return std::nullopt;
  if (!is_builtin_head(t.items()[0], BuiltinSym::Transform)) return std::nullopt;
  return std::make_tuple(t.items()[0], t.items()[1], t.items()[2]);
}

std::optional<GroundKind> ground_kind(const Term& t) {
  if (!t.is_atom() || t.atom_value().kind != AtomKind::Ground) return std::nullopt;
  return t.atom_value().ground.kind;
}

// Same-type builtin arithmetic. nullopt means not a redex of this rule;
// overflow fills *overflow and yields nullopt (stuck redex).
std::optional<Term> eval_builtin(RuleLabel label, const Term& a, const Term& b, bool* overflow) {
  auto ka = ground_kind(a);
  auto kb = ground_kind(b);
  if (!ka || !kb || *ka != *kb) return std::nullopt;
  const GroundValue& ga = a.atom_value().ground;
  const GroundValue& gb = b.atom_value().ground;
  switch (label) {
    case RuleLabel::BoolAdd1:
    case RuleLabel::BoolAdd2:
      if (*ka != GroundKind::Bool) return std::nullopt;
      return Term::boolean(ga.b || gb.b);
    case RuleLabel::BoolMult1:
    case RuleLabel::BoolMult2:
      if (*ka != GroundKind::Bool) return std::nullopt;
      return Term::boolean(ga.b && gb.b);
    case RuleLabel::NumAdd1:
    case RuleLabel::NumAdd2: {
      if (*ka == GroundKind::Int) {
        int64_t r;
        if (__builtin_add_overflow(ga.i, gb.i, &r)) { *overflow = true; return std::nullopt; }
        return Term::integer(r);
      }
      if (*ka == GroundKind::UInt) {
        uint64_t r;
        if (__builtin_add_overflow(ga.u, gb.u, &r)) { *overflow = true; return std::nullopt; }
        return Term::uinteger(r);
      }
      if (*ka == GroundKind::Float) return Term::floating(ga.f + gb.f);
      return std::nullopt;
    }
    case RuleLabel::NumMult1:
    case RuleLabel::NumMult2: {
      if (*ka == GroundKind::Int) {
        int64_t r;
        if (__builtin_mul_overflow(ga.i, gb.i, &r)) { *overflow = true; return std::nullopt; }
        return Term::integer(r);
      }
      if (*ka == GroundKind::UInt) {
        uint64_t r;
        if (__builtin_mul_overflow(ga.u, gb.u, &r)) { *overflow = true; return std::nullopt; }
        return Term::uinteger(r);
      }
      if (*ka == GroundKind::Float) return Term::floating(ga.f * gb.f);
      return std::nullopt;
    }
    case RuleLabel::StrAdd1:
    case RuleLabel::StrAdd2:
      if (*ka != GroundKind::Str) return std::nullopt;
      return Term::str(ga.s + gb.s);
    default: return std::nullopt;
  }
}

void for_each_distinct(const TermBag& bag, const std::function<void(const Term&)>& f) {
  const auto& items = bag.items();
  for (size_t idx = 0; idx < items.size(); ++idx) {
    if (idx > 0 && items[idx] == items[idx - 1]) continue;
    f(items[idx]);
  }
}

// Query when reg='i', Chain when reg='w'.
void enum_rewrites(const State& s, char reg, std::vector<Transition>& out) {
  const TermBag& source = (reg == 'i') ? s.i : s.w;
  for_each_distinct(source, [&](const Term& host) {
    for (const auto& [ctx, sub] : decompositions(host)) {
      auto matches = match_equations(sub, s.k);
      if (matches.empty()) continue;
      Transition t;
      t.label = (reg == 'i') ? RuleLabel::Query : RuleLabel::Chain;
      t.reg = reg;
      t.host = host;
      t.ctx = ctx;
      t.redex = sub;
      t.next = s;
      TermBag& consumed = (reg == 'i') ? t.next.i : t.next.w;
      consumed = *consumed.remove_one(host);
      for (const auto& m : matches) {
        t.substs.push_back(m.subst);
        t.next.w.add(ctx.plug(m.subst.apply(m.rhs)));
      }
      out.push_back(std::move(t));
    }
  });
}

void enum_transform(const State& s, std::vector<Transition>& out) {
  for_each_distinct(s.i, [&](const Term& host) {
    auto parts = transform_parts(host);
    if (!parts) return;
    const Term& pattern = std::get<1>(*parts);
    const Term& result = std::get<2>(*parts);
    Transition t;
    t.label = RuleLabel::Transform;
    t.reg = 'i';
    t.host = host;
    t.redex = pattern;
    t.next = s;
    bool any = false;
    for (const auto& kb_item : s.k.items()) {  // per occurrence
      for (const auto& [ctx, sub] : decompositions(kb_item)) {
        auto sigma = unify(pattern, sub);
        if (!sigma) continue;
        any = true;
        t.substs.push_back(*sigma);
        t.next.w.add(ctx.plug(sigma->apply(result)));
      }
    }
    if (!any) return;
    t.next.i = *t.next.i.remove_one(host);
    out.push_back(std::move(t));
  });
}

void enum_add_atom1(const State& s, std::vector<Transition>& out) {
  for_each_distinct(s.i, [&](const Term& host) {
    auto arg = directive_arg(host, BuiltinSym::AddAtom);
    if (!arg) return;
    Transition t;
    t.label = RuleLabel::AddAtom1;
    t.reg = 'i';
    t.host = host;
    t.redex = host;
    t.next = s;
    t.next.i = *t.next.i.remove_one(host);
    t.next.k.add(*arg);
    t.next.o.add(unit());
    out.push_back(std::move(t));
  });
}

void enum_rem_atom1(const State& s, std::vector<Transition>& out) {
  for_each_distinct(s.i, [&](const Term& host) {
    auto arg = directive_arg(host, BuiltinSym::RemAtom);
    if (!arg) return;
    auto k2 = s.k.remove_one(*arg);
    if (!k2) return;  // t must be present in k
    Transition t;
    t.label = RuleLabel::RemAtom1;
    t.reg = 'i';
    t.host = host;
    t.redex = host;
    t.next = s;
    t.next.i = *t.next.i.remove_one(host);
    t.next.k = *k2;
    t.next.o.add(unit());
    out.push_back(std::move(t));
  });
}

std::vector<Transition> enabled_at_depth(const State& s, std::vector<std::string>* diags,
                                         int depth);

// Composite directive rules: run the machine against the state with the
// directive material removed, then restore it in the target.
void enum_directive2(const State& s, BuiltinSym sym, std::vector<Transition>& out, int depth) {
  RuleLabel label = (sym == BuiltinSym::AddAtom) ? RuleLabel::AddAtom2 : RuleLabel::RemAtom2;
  for_each_distinct(s.k, [&](const Term& directive) {
    auto arg = directive_arg(directive, sym);
    if (!arg) return;
    State inner_state = s;
    inner_state.k = *inner_state.k.remove_one(directive);
    if (sym == BuiltinSym::RemAtom) {
      auto k2 = inner_state.k.remove_one(*arg);
      if (!k2) return;  // both the directive and t must be in k
      inner_state.k = *k2;
    }
    if (depth >= kMaxDirectiveDepth)
      throw std::runtime_error("directive nesting exceeds depth 8");
    for (auto& inner : enabled_at_depth(inner_state, nullptr, depth + 1)) {
      Transition t;
      t.label = label;
      t.reg = 'k';
      t.host = directive;
      t.redex = directive;
      t.next = inner.next;
      t.next.k.add(directive);
      if (sym == BuiltinSym::AddAtom) t.next.k.add(*arg);
      t.next.o.add(unit());
      t.inner = std::make_shared<Transition>(std::move(inner));
      out.push_back(std::move(t));
    }
  });
}

void enum_output(const State& s, std::vector<Transition>& out) {
  for_each_distinct(s.w, [&](const Term& u) {
    if (!insensitive(u, s.k)) return;
    Transition t;
    t.label = RuleLabel::Output;
    t.reg = 'w';
    t.host = u;
    t.redex = u;
    t.next = s;
    t.next.w = *t.next.w.remove_one(u);
    t.next.o.add(u);
    out.push_back(std::move(t));
  });
}

void enum_builtin(const State& s, RuleLabel label, std::vector<Transition>& out,
                  std::vector<std::string>* diags) {
  bool from_workspace;
  BuiltinSym sym;
  switch (label) {
    case RuleLabel::BoolAdd1: sym = BuiltinSym::Plus; from_workspace = false; break;
    case RuleLabel::BoolAdd2: sym = BuiltinSym::Plus; from_workspace = true; break;
    case RuleLabel::BoolMult1: sym = BuiltinSym::Times; from_workspace = false; break;
    case RuleLabel::BoolMult2: sym = BuiltinSym::Times; from_workspace = true; break;
    case RuleLabel::NumAdd1: sym = BuiltinSym::Plus; from_workspace = false; break;
    case RuleLabel::NumAdd2: sym = BuiltinSym::Plus; from_workspace = true; break;
    case RuleLabel::NumMult1: sym = BuiltinSym::Times; from_workspace = false; break;
    case RuleLabel::NumMult2: sym = BuiltinSym::Times; from_workspace = true; break;
    case RuleLabel::StrAdd1: sym = BuiltinSym::Plus; from_workspace = false; break;
    case RuleLabel::StrAdd2: sym = BuiltinSym::Plus; from_workspace = true; break;
    default: return;
  }
  const TermBag& source = from_workspace ? s.w : s.i;
  for_each_distinct(source, [&](const Term& host) {
    auto args = binop_args(host, sym);
    if (!args) return;
    bool overflow = false;
    auto result = eval_builtin(label, args->first, args->second, &overflow);
    if (!result) {
      if (overflow && diags)
        diags->push_back(std::string(rule_label_name(label)) + ": integer overflow, redex stuck");
      return;
    }
    Transition t;
    t.label = label;
    t.reg = from_workspace ? 'w' : 'i';
    t.host = host;
    t.redex = host;
    t.next = s;
    TermBag& consumed = from_workspace ? t.next.w : t.next.i;
    consumed = *consumed.remove_one(host);
    t.next.o.add(*result);
    out.push_back(std::move(t));
  });
}

std::vector<Transition> enabled_at_depth(const State& s, std::vector<std::string>* diags,
                                         int depth) {
  std::vector<Transition> out;
  enum_rewrites(s, 'i', out);                              // Query
  enum_rewrites(s, 'w', out);                              // Chain
  enum_transform(s, out);                                  // Transform
  enum_add_atom1(s, out);                                  // AddAtom1
  enum_directive2(s, BuiltinSym::AddAtom, out, depth);     // AddAtom2
  enum_rem_atom1(s, out);                                  // RemAtom1
  enum_directive2(s, BuiltinSym::RemAtom, out, depth);     // RemAtom2
  enum_output(s, out);                                     // Output
  for (RuleLabel label :
       {RuleLabel::BoolAdd1, RuleLabel::BoolAdd2, RuleLabel::BoolMult1, RuleLabel::BoolMult2,
        RuleLabel::NumAdd1, RuleLabel::NumAdd2, RuleLabel::NumMult1, RuleLabel::NumMult2,
        RuleLabel::StrAdd1, RuleLabel::StrAdd2})
    enum_builtin(s, label, out, diags);
  std::stable_sort(out.begin(), out.end(), [](const Transition& a, const Transition& b) {
    return static_cast<int>(a.label) < static_cast<int>(b.label);
  });
  return out;
}

}  // namespace

std::vector<Transition> enabled(const State& s, std::vector<std::string>* diags) {
  return enabled_at_depth(s, diags, 0);
}

std::optional<Transition> step(const State& s, const SchedulerPolicy& policy) {
  auto ts = enabled(s);
  if (ts.empty()) return std::nullopt;
  if (policy.kind == SchedulerPolicy::Deterministic) return ts.front();
  std::mt19937_64 rng(policy.seed);
  std::uniform_int_distribution<size_t> pick(0, ts.size() - 1);
  return ts[pick(rng)];
}

RunResult run(const State& s, const SchedulerPolicy& policy, uint64_t fuel) {
  RunResult res;
  res.final_state = s;
  std::mt19937_64 rng(policy.seed);
  for (uint64_t n = 0;; ++n) {
    auto ts = enabled(res.final_state, &res.diagnostics);
    if (ts.empty()) {
      res.verdict = RunVerdict::Quiescent;
      return res;
    }
    if (n >= fuel) {
      res.verdict = RunVerdict::FuelExhausted;
      return res;
    }
    size_t idx = 0;
    if (policy.kind == SchedulerPolicy::Random)
      idx = std::uniform_int_distribution<size_t>(0, ts.size() - 1)(rng);
    res.final_state = ts[idx].next;
    res.trace.push_back(std::move(ts[idx]));
  }
}

}  // namespace metta
