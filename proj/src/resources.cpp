// metta-machine: an abstract machine for MeTTa states
// Copyright 2026 The metta-machine Authors.
// SPDX-License-Identifier: Apache-2.0

#include "metta/resources.hpp"

#include <sodium.h>

#include <algorithm>
#include <cstring>
#include <functional>
#include <stdexcept>

#include "metta/syntax.hpp"

namespace metta {

namespace {

void ensure_sodium() {
  static const int rc = sodium_init();
  if (rc < 0) throw std::runtime_error("libsodium initialization failed");
}

template <typename T>
int cmp3(const T& a, const T& b) {
  return a < b ? -1 : (b < a ? 1 : 0);
}

}  // namespace

std::string KeyId::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int n = 0; n < 16; ++n) out[n] = digits[(value >> (60 - 4 * n)) & 0xf];
  return out;
}

std::optional<KeyId> KeyId::from_hex(const std::string& s) {
  if (s.size() != 16) return std::nullopt;
  uint64_t v = 0;
  for (char c : s) {
    int d;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
    else return std::nullopt;
    v = (v << 4) | static_cast<uint64_t>(d);
  }
  return KeyId{v};
}

int SignedTerm::compare(const SignedTerm& a, const SignedTerm& b) {
  if (int c = Term::compare(a.term, b.term)) return c;
  if (int c = cmp3(a.key.value, b.key.value)) return c;
  if (int c = cmp3(a.eo.has_value(), b.eo.has_value())) return c;
  if (a.eo)
    if (int c = cmp3(*a.eo, *b.eo)) return c;
  return std::memcmp(a.tag.data(), b.tag.data(), a.tag.size());
}

size_t SignedTerm::hash() const {
  size_t h = term.hash();
  h = hash_combine(h, std::hash<uint64_t>{}(key.value));
  h = hash_combine(h, eo ? std::hash<int64_t>{}(*eo) : 0x77);
  size_t th = 0;
  for (unsigned char c : tag) th = th * 131 + c;
  return hash_combine(h, th);
}

SignedBag SignedBag::of(std::vector<SignedTerm> items) {
  std::sort(items.begin(), items.end(), [](const SignedTerm& a, const SignedTerm& b) {
    return SignedTerm::compare(a, b) < 0;
  });
  SignedBag bag;
  bag.items_ = std::move(items);
  return bag;
}

void SignedBag::add(const SignedTerm& t) {
  auto it = std::lower_bound(items_.begin(), items_.end(), t,
                             [](const SignedTerm& a, const SignedTerm& b) {
                               return SignedTerm::compare(a, b) < 0;
                             });
  items_.insert(it, t);
}

std::optional<SignedBag> SignedBag::remove_one(const SignedTerm& t) const {
  auto it = std::lower_bound(items_.begin(), items_.end(), t,
                             [](const SignedTerm& a, const SignedTerm& b) {
                               return SignedTerm::compare(a, b) < 0;
                             });
  if (it == items_.end() || !(*it == t)) return std::nullopt;
  SignedBag out;
  out.items_.assign(items_.begin(), it);
  out.items_.insert(out.items_.end(), it + 1, items_.end());
  return out;
}

std::optional<std::pair<SignedBag, SignedTerm>> SignedBag::remove_one_by_term(
    const Term& t) const {
  for (size_t idx = 0; idx < items_.size(); ++idx) {
    if (items_[idx].term == t) {
      SignedBag out;
      out.items_.assign(items_.begin(), items_.begin() + idx);
      out.items_.insert(out.items_.end(), items_.begin() + idx + 1, items_.end());
      return std::make_pair(std::move(out), items_[idx]);
    }
  }
  return std::nullopt;
}

TermBag SignedBag::project() const {
  std::vector<Term> terms;
  terms.reserve(items_.size());
  for (const auto& st : items_) terms.push_back(st.term);
  return TermBag::of(std::move(terms));
}

int SignedBag::compare(const SignedBag& a, const SignedBag& b) {
  size_t n = std::min(a.items_.size(), b.items_.size());
  for (size_t i = 0; i < n; ++i)
    if (int c = SignedTerm::compare(a.items_[i], b.items_[i])) return c;
  return cmp3(a.items_.size(), b.items_.size());
}

size_t SignedBag::hash() const {
  size_t h = 0x5555;
  for (const auto& t : items_) h = hash_combine(h, t.hash());
  return h;
}

int RState::compare(const RState& a, const RState& b) {
  if (int c = SignedBag::compare(a.i, b.i)) return c;
  if (int c = SignedBag::compare(a.k, b.k)) return c;
  if (int c = SignedBag::compare(a.w, b.w)) return c;
  if (int c = SignedBag::compare(a.o, b.o)) return c;
  if (int c = cmp3(a.eos.size(), b.eos.size())) return c;
  auto ia = a.eos.begin();
  auto ib = b.eos.begin();
  for (; ia != a.eos.end(); ++ia, ++ib) {
    if (int c = cmp3(ia->first.value, ib->first.value)) return c;
    if (int c = cmp3(ia->second, ib->second)) return c;
  }
  return 0;
}

size_t RState::hash() const {
  size_t h = i.hash();
  h = hash_combine(h, k.hash());
  h = hash_combine(h, w.hash());
  h = hash_combine(h, o.hash());
  for (const auto& [kid, eo] : eos) {
    h = hash_combine(h, std::hash<uint64_t>{}(kid.value));
    h = hash_combine(h, std::hash<int64_t>{}(eo));
  }
  return h;
}

Eo RState::ledger_total() const {
  Eo total = 0;
  for (const auto& [kid, eo] : eos) total += eo;
  return total;
}

State RState::project() const {
  return State{i.project(), k.project(), w.project(), o.project()};
}

// ---------------------------------------------------------------------------
// Signing

KeyId Signer::key_id(std::span<const unsigned char> priv) {
  ensure_sodium();
  unsigned char digest[crypto_hash_sha256_BYTES];
  crypto_hash_sha256(digest, priv.data(), priv.size());
  uint64_t v = 0;
  for (int n = 0; n < 8; ++n) v = (v << 8) | digest[n];
  return KeyId{v};
}

void Signer::add_key(std::vector<unsigned char> priv) {
  KeyId kid = key_id(priv);
  keys_[kid] = std::move(priv);
}

namespace {

std::vector<unsigned char> sign_message(const Term& t, std::optional<Eo> eo, KeyId kid) {
  std::string msg = print_term(t);
  msg.push_back('\0');
  msg += eo ? std::to_string(*eo) : "_";
  msg.push_back('\0');
  msg += kid.hex();
  return {msg.begin(), msg.end()};
}

Tag compute_tag(std::span<const unsigned char> priv, const Term& t, std::optional<Eo> eo,
                KeyId kid) {
  ensure_sodium();
  unsigned char key32[crypto_auth_hmacsha256_KEYBYTES];
  crypto_hash_sha256(key32, priv.data(), priv.size());
  auto msg = sign_message(t, eo, kid);
  Tag tag{};
  crypto_auth_hmacsha256(tag.data(), msg.data(), msg.size(), key32);
  return tag;
}

bool tag_is_null(const Tag& tag) {
  return std::all_of(tag.begin(), tag.end(), [](unsigned char c) { return c == 0; });
}

}  // namespace

SignedTerm Signer::sign(std::span<const unsigned char> priv, const Term& t,
                        std::optional<Eo> eo) {
  if (priv.empty()) throw std::invalid_argument("sign: key must be nonempty");
  KeyId kid = key_id(priv);
  return SignedTerm{t, kid, eo, compute_tag(priv, t, eo, kid)};
}

SignedTerm Signer::sign_null(const Term& t, KeyId kid, std::optional<Eo> eo) {
  return SignedTerm{t, kid, eo, Tag{}};
}

SignedTerm Signer::resign(KeyId kid, const Term& t, std::optional<Eo> eo) const {
  auto it = keys_.find(kid);
  if (it == keys_.end()) return sign_null(t, kid, eo);
  return sign(it->second, t, eo);
}

bool Signer::verify(const SignedTerm& st) const {
  if (tag_is_null(st.tag)) return true;
  auto it = keys_.find(st.key);
  if (it == keys_.end()) return false;
  Tag expect = compute_tag(it->second, st.term, st.eo, st.key);
  return expect == st.tag;
}

// ---------------------------------------------------------------------------
// Costs

Eo cost_term(const Term& t) { return static_cast<Eo>(t.node_count()); }

Eo cost_subst(const Substitution& s) {
  Eo total = 0;
  for (const auto& [var, t] : s.bindings()) total += cost_term(t);
  return total;
}

Eo CostedTransition::total_cost() const { return cost + (inner ? inner->total_cost() : 0); }

Eo CostedTransition::total_inline_consumed() const {
  return (host.eo ? *host.eo : 0) + (inner ? inner->total_inline_consumed() : 0);
}

// ---------------------------------------------------------------------------
// Resource-bounded enumeration

namespace {

constexpr int kMaxDirectiveDepth = 8;

bool is_builtin_head(const Term& t, BuiltinSym sym) {
  return t.is_atom() && t.atom_value().kind == AtomKind::Builtin && t.atom_value().builtin == sym;
}

std::optional<Term> directive_arg(const Term& t, BuiltinSym sym) {
  if (t.kind() != TermKind::List || t.items().size() != 2) return std::nullopt;
  if (!is_builtin_head(t.items()[0], sym)) return std::nullopt;
  return t.items()[1];
}

std::optional<GroundKind> ground_kind(const Term& t) {
  if (!t.is_atom() || t.atom_value().kind != AtomKind::Ground) return std::nullopt;
  return t.atom_value().ground.kind;
}

struct RbContext {
  const Signer& signer;
  std::vector<RbCandidate>* out;
  bool guard_only_funded;  // true for enabled_rb, false for candidates
  std::vector<std::string>* diags;
};

// Applies the funding rule: the payer needs a ledger entry e'; with inline
// effort e the guard is (e + e' - cost) > 0 and the entry becomes the
// difference. Returns the updated ledger, or nullopt when blocked.
std::optional<std::map<KeyId, Eo>> debit(const std::map<KeyId, Eo>& eos, KeyId payer,
                                         std::optional<Eo> inline_eo, Eo cost) {
  auto it = eos.find(payer);
  if (it == eos.end()) return std::nullopt;
  Eo available = it->second + (inline_eo ? *inline_eo : 0);
  if (available - cost <= 0) return std::nullopt;
  auto next = eos;
  next[payer] = available - cost;
  return next;
}

void emit(RbContext& rb, CostedTransition t, bool funded) {
  if (rb.guard_only_funded && !funded) return;
  rb.out->push_back(RbCandidate{std::move(t), funded});
}

void for_each_distinct_signed(const SignedBag& bag,
                              const std::function<void(const SignedTerm&)>& f) {
  const auto& items = bag.items();
  for (size_t idx = 0; idx < items.size(); ++idx) {
    if (idx > 0 && items[idx] == items[idx - 1]) continue;
    f(items[idx]);
  }
}

// Query when reg='i', Chain when reg='w'. Costs per instance:
// sum of #(sigma_j) plus sum of #(u_j sigma_j).
void enum_rewrites_rb(const RState& s, char reg, RbContext& rb) {
  const SignedBag& source = (reg == 'i') ? s.i : s.w;
  TermBag kb = s.k.project();
  for_each_distinct_signed(source, [&](const SignedTerm& host) {
    for (const auto& [ctx, sub] : decompositions(host.term)) {
      auto matches = match_equations(sub, kb);
      if (matches.empty()) continue;
      CostedTransition t;
      t.label = (reg == 'i') ? RuleLabel::Query : RuleLabel::Chain;
      t.reg = reg;
      t.host = host;
      t.ctx = ctx;
      t.redex = sub;
      t.payer = host.key;
      t.ledger_before = s.eos;
      t.next = s;
      SignedBag& consumed = (reg == 'i') ? t.next.i : t.next.w;
      consumed = *consumed.remove_one(host);
      Eo cost = 0;
      for (const auto& m : matches) {
        Term result = m.subst.apply(m.rhs);
        cost += cost_subst(m.subst) + cost_term(result);
        t.substs.push_back(m.subst);
        t.next.w.add(rb.signer.resign(host.key, ctx.plug(result), std::nullopt));
      }
      t.cost = cost;
      auto eos2 = debit(s.eos, host.key, host.eo, cost);
      if (eos2) t.next.eos = *eos2;
      t.ledger_after = t.next.eos;
      emit(rb, std::move(t), eos2.has_value());
    }
  });
}

void enum_transform_rb(const RState& s, RbContext& rb) {
  for_each_distinct_signed(s.i, [&](const SignedTerm& host) {
    if (host.term.kind() != TermKind::List || host.term.items().size() != 3) return;
    if (!is_builtin_head(host.term.items()[0], BuiltinSym::Transform)) return;
    const Term& pattern = host.term.items()[1];
    const Term& result = host.term.items()[2];
    CostedTransition t;
    t.label = RuleLabel::Transform;
    t.reg = 'i';
    t.host = host;
    t.redex = pattern;
    t.payer = host.key;
    t.ledger_before = s.eos;
    t.next = s;
    Eo cost = 0;
    bool any = false;
    for (const auto& kb_item : s.k.items()) {
      for (const auto& [ctx, sub] : decompositions(kb_item.term)) {
        auto sigma = unify(pattern, sub);
        if (!sigma) continue;
        any = true;
        Term plugged = sigma->apply(result);
        cost += cost_subst(*sigma) + cost_term(plugged);
        t.substs.push_back(*sigma);
        t.next.w.add(rb.signer.resign(host.key, ctx.plug(plugged), std::nullopt));
      }
    }
    if (!any) return;
    t.next.i = *t.next.i.remove_one(host);
    t.cost = cost;
    auto eos2 = debit(s.eos, host.key, host.eo, cost);
    if (eos2) t.next.eos = *eos2;
    t.ledger_after = t.next.eos;
    emit(rb, std::move(t), eos2.has_value());
  });
}

void enum_atom1_rb(const RState& s, BuiltinSym sym, RbContext& rb) {
  for_each_distinct_signed(s.i, [&](const SignedTerm& host) {
    auto arg = directive_arg(host.term, sym);
    if (!arg) return;
    CostedTransition t;
    t.label = (sym == BuiltinSym::AddAtom) ? RuleLabel::AddAtom1 : RuleLabel::RemAtom1;
    t.reg = 'i';
    t.host = host;
    t.redex = host.term;
    t.payer = host.key;
    t.ledger_before = s.eos;
    t.next = s;
    t.next.i = *t.next.i.remove_one(host);
    if (sym == BuiltinSym::AddAtom) {
      t.next.k.add(rb.signer.resign(host.key, *arg, std::nullopt));
    } else {
      auto removed = t.next.k.remove_one_by_term(*arg);
      if (!removed) return;
      t.next.k = removed->first;
    }
    t.next.o.add(rb.signer.resign(host.key, Term::unit_list(), std::nullopt));
    t.cost = cost_term(*arg);
    auto eos2 = debit(s.eos, host.key, host.eo, t.cost);
    if (eos2) t.next.eos = *eos2;
    t.ledger_after = t.next.eos;
    emit(rb, std::move(t), eos2.has_value());
  });
}

void enum_rb_at_depth(const RState& s, RbContext& rb, int depth);

// Composite directive rules. The payer entry is removed from the ledger seen
// by the inner transition and restored debited by #(t); the directive (and t
// for AddAtom2) is restored into k with no inline effort.
void enum_directive2_rb(const RState& s, BuiltinSym sym, RbContext& rb, int depth) {
  RuleLabel label = (sym == BuiltinSym::AddAtom) ? RuleLabel::AddAtom2 : RuleLabel::RemAtom2;
  for_each_distinct_signed(s.k, [&](const SignedTerm& directive) {
    auto arg = directive_arg(directive.term, sym);
    if (!arg) return;
    RState inner_state = s;
    inner_state.k = *inner_state.k.remove_one(directive);
    if (sym == BuiltinSym::RemAtom) {
      auto removed = inner_state.k.remove_one_by_term(*arg);
      if (!removed) return;
      inner_state.k = removed->first;
    }
    Eo cost = cost_term(*arg);
    auto entry = s.eos.find(directive.key);
    Eo available = (entry == s.eos.end() ? 0 : entry->second) +
                   (directive.eo ? *directive.eo : 0);
    bool funded = entry != s.eos.end() && available - cost > 0;
    if (rb.guard_only_funded && !funded) return;
    if (entry != s.eos.end()) inner_state.eos.erase(directive.key);
    if (depth >= kMaxDirectiveDepth)
      throw std::runtime_error("directive nesting exceeds depth 8");
    std::vector<RbCandidate> inner_out;
    RbContext inner_rb{rb.signer, &inner_out, rb.guard_only_funded, nullptr};
    enum_rb_at_depth(inner_state, inner_rb, depth + 1);
    for (auto& cand : inner_out) {
      CostedTransition t;
      t.label = label;
      t.reg = 'k';
      t.host = directive;
      t.redex = directive.term;
      t.payer = directive.key;
      t.ledger_before = s.eos;
      t.next = cand.transition.next;
      t.next.k.add(rb.signer.resign(directive.key, directive.term, std::nullopt));
      if (sym == BuiltinSym::AddAtom)
        t.next.k.add(rb.signer.resign(directive.key, *arg, std::nullopt));
      t.next.o.add(rb.signer.resign(directive.key, Term::unit_list(), std::nullopt));
      if (funded) t.next.eos[directive.key] = available - cost;
      t.ledger_after = t.next.eos;
      t.cost = cost;
      t.inner = std::make_shared<CostedTransition>(std::move(cand.transition));
      emit(rb, std::move(t), funded && cand.funded);
    }
  });
}

void enum_output_rb(const RState& s, RbContext& rb) {
  TermBag kb = s.k.project();
  for_each_distinct_signed(s.w, [&](const SignedTerm& host) {
    if (!insensitive(host.term, kb)) return;
    CostedTransition t;
    t.label = RuleLabel::Output;
    t.reg = 'w';
    t.host = host;
    t.redex = host.term;
    t.payer = host.key;
    t.ledger_before = s.eos;
    t.next = s;
    t.next.w = *t.next.w.remove_one(host);
    t.next.o.add(rb.signer.resign(host.key, host.term, std::nullopt));
    t.cost = cost_term(host.term);
    auto eos2 = debit(s.eos, host.key, host.eo, t.cost);
    if (eos2) t.next.eos = *eos2;
    t.ledger_after = t.next.eos;
    emit(rb, std::move(t), eos2.has_value());
  });
}

// Shares the plain machine's builtin evaluation by rebuilding a tiny state.
std::optional<Term> eval_builtin_redex(RuleLabel label, const Term& host, bool* overflow);

void enum_builtin_rb(const RState& s, RuleLabel label, RbContext& rb) {
  bool from_workspace;
  switch (label) {
    case RuleLabel::BoolAdd2:
    case RuleLabel::BoolMult2:
    case RuleLabel::NumAdd2:
    case RuleLabel::NumMult2:
    case RuleLabel::StrAdd2: from_workspace = true; break;
    default: from_workspace = false; break;
  }
  const SignedBag& source = from_workspace ? s.w : s.i;
  for_each_distinct_signed(source, [&](const SignedTerm& host) {
    bool overflow = false;
    auto result = eval_builtin_redex(label, host.term, &overflow);
    if (!result) {
      if (overflow && rb.diags)
        rb.diags->push_back(std::string(rule_label_name(label)) +
                            ": integer overflow, redex stuck");
      return;
    }
    CostedTransition t;
    t.label = label;
    t.reg = from_workspace ? 'w' : 'i';
    t.host = host;
    t.redex = host.term;
    t.payer = host.key;
    t.ledger_before = s.eos;
    t.next = s;
    SignedBag& consumed = from_workspace ? t.next.w : t.next.i;
    consumed = *consumed.remove_one(host);
    t.next.o.add(rb.signer.resign(host.key, *result, std::nullopt));
    t.cost = cost_term(host.term.items()[1]) + cost_term(host.term.items()[2]);
    auto eos2 = debit(s.eos, host.key, host.eo, t.cost);
    if (eos2) t.next.eos = *eos2;
    t.ledger_after = t.next.eos;
    emit(rb, std::move(t), eos2.has_value());
  });
}

std::optional<Term> eval_builtin_redex(RuleLabel label, const Term& host, bool* overflow) {
  BuiltinSym sym;
  switch (label) {
    case RuleLabel::BoolAdd1:
    case RuleLabel::BoolAdd2:
    case RuleLabel::NumAdd1:
    case RuleLabel::NumAdd2:
    case RuleLabel::StrAdd1:
    case RuleLabel::StrAdd2: sym = BuiltinSym::Plus; break;
    default: sym = BuiltinSym::Times; break;
  }
  if (host.kind() != TermKind::List || host.items().size() != 3) return std::nullopt;
  if (!is_builtin_head(host.items()[0], sym)) return std::nullopt;
  const Term& a = host.items()[1];
  const Term& b = host.items()[2];
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
    case RuleLabel::NumAdd2:
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
    case RuleLabel::NumMult1:
    case RuleLabel::NumMult2:
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
    case RuleLabel::StrAdd1:
    case RuleLabel::StrAdd2:
      if (*ka != GroundKind::Str) return std::nullopt;
      return Term::str(ga.s + gb.s);
    default: return std::nullopt;
  }
}

void enum_rb_at_depth(const RState& s, RbContext& rb, int depth) {
  enum_rewrites_rb(s, 'i', rb);
  enum_rewrites_rb(s, 'w', rb);
  enum_transform_rb(s, rb);
  enum_atom1_rb(s, BuiltinSym::AddAtom, rb);
  enum_directive2_rb(s, BuiltinSym::AddAtom, rb, depth);
  enum_atom1_rb(s, BuiltinSym::RemAtom, rb);
  enum_directive2_rb(s, BuiltinSym::RemAtom, rb, depth);
  enum_output_rb(s, rb);
  for (RuleLabel label :
       {RuleLabel::BoolAdd1, RuleLabel::BoolAdd2, RuleLabel::BoolMult1, RuleLabel::BoolMult2,
        RuleLabel::NumAdd1, RuleLabel::NumAdd2, RuleLabel::NumMult1, RuleLabel::NumMult2,
        RuleLabel::StrAdd1, RuleLabel::StrAdd2})
    enum_builtin_rb(s, label, rb);
  std::stable_sort(rb.out->begin(), rb.out->end(),
                   [](const RbCandidate& a, const RbCandidate& b) {
                     return static_cast<int>(a.transition.label) <
                            static_cast<int>(b.transition.label);
                   });
}

}  // namespace

std::vector<CostedTransition> enabled_rb(const RState& s, const Signer& signer,
                                         std::vector<std::string>* diags) {
  std::vector<RbCandidate> out;
  RbContext rb{signer, &out, true, diags};
  enum_rb_at_depth(s, rb, 0);
  std::vector<CostedTransition> ts;
  ts.reserve(out.size());
  for (auto& c : out) ts.push_back(std::move(c.transition));
  return ts;
}

std::vector<RbCandidate> enabled_rb_candidates(const RState& s, const Signer& signer) {
  std::vector<RbCandidate> out;
  RbContext rb{signer, &out, false, nullptr};
  enum_rb_at_depth(s, rb, 0);
  return out;
}

RunRbResult run_rb(const RState& s, const Signer& signer, const SchedulerPolicy& policy,
                   uint64_t fuel) {
  RunRbResult res;
  res.final_state = s;
  std::mt19937_64 rng(policy.seed);
  for (uint64_t n = 0;; ++n) {
    auto ts = enabled_rb(res.final_state, signer, &res.diagnostics);
    if (ts.empty()) {
      res.verdict = enabled(res.final_state.project()).empty() ? RunRbVerdict::Quiescent
                                                               : RunRbVerdict::Starved;
      return res;
    }
    if (n >= fuel) {
      res.verdict = RunRbVerdict::FuelExhausted;
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
