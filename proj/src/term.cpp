// metta-machine: an abstract machine for MeTTa states
// Copyright 2026 The metta-machine Authors.
// SPDX-License-Identifier: Apache-2.0

#include "metta/term.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace metta {

size_t hash_combine(size_t a, size_t b) {
  return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
}

static size_t hash_str(const std::string& s) { return std::hash<std::string>{}(s); }

// ---------------------------------------------------------------------------
// GroundValue

GroundValue GroundValue::boolean(bool v) {
  GroundValue g;
  g.kind = GroundKind::Bool;
  g.b = v;
  return g;
}
GroundValue GroundValue::integer(int64_t v) {
  GroundValue g;
  g.kind = GroundKind::Int;
  g.i = v;
  return g;
}
GroundValue GroundValue::uinteger(uint64_t v) {
  GroundValue g;
  g.kind = GroundKind::UInt;
  g.u = v;
  return g;
}
GroundValue GroundValue::floating(double v) {
  GroundValue g;
  g.kind = GroundKind::Float;
  // One canonical NaN so multiset equality stays an equivalence.
  g.f = std::isnan(v) ? std::bit_cast<double>(uint64_t{0x7ff8000000000000ULL}) : v;
  return g;
}
GroundValue GroundValue::str(std::string v) {
  GroundValue g;
  g.kind = GroundKind::Str;
  g.s = std::move(v);
  return g;
}
GroundValue GroundValue::uri(std::string v) {
  GroundValue g;
  g.kind = GroundKind::Uri;
  g.s = std::move(v);
  return g;
}

// Sign-magnitude flip giving a total order on doubles by bit pattern.
static uint64_t float_order_bits(double d) {
  uint64_t bits = std::bit_cast<uint64_t>(d);
  return (bits & 0x8000000000000000ULL) ? ~bits : (bits | 0x8000000000000000ULL);
}

template <typename T>
static int cmp3(const T& a, const T& b) {
  return a < b ? -1 : (b < a ? 1 : 0);
}

int GroundValue::compare(const GroundValue& a, const GroundValue& b) {
  if (a.kind != b.kind) return cmp3(static_cast<int>(a.kind), static_cast<int>(b.kind));
  switch (a.kind) {
    case GroundKind::Bool: return cmp3(a.b, b.b);
    case GroundKind::Int: return cmp3(a.i, b.i);
    case GroundKind::UInt: return cmp3(a.u, b.u);
    case GroundKind::Float: return cmp3(float_order_bits(a.f), float_order_bits(b.f));
    case GroundKind::Str:
    case GroundKind::Uri: return cmp3(a.s, b.s);
  }
  return 0;
}

size_t GroundValue::hash() const {
  size_t h = static_cast<size_t>(kind) * 0x9e3779b97f4a7c15ULL;
  switch (kind) {
    case GroundKind::Bool: return hash_combine(h, b ? 1 : 2);
    case GroundKind::Int: return hash_combine(h, std::hash<int64_t>{}(i));
    case GroundKind::UInt: return hash_combine(h, std::hash<uint64_t>{}(u));
    case GroundKind::Float: return hash_combine(h, std::hash<uint64_t>{}(std::bit_cast<uint64_t>(f)));
    case GroundKind::Str:
    case GroundKind::Uri: return hash_combine(h, hash_str(s));
  }
  return h;
}

// ---------------------------------------------------------------------------
// AtomValue

int AtomValue::compare(const AtomValue& a, const AtomValue& b) {
  if (a.kind != b.kind) return cmp3(static_cast<int>(a.kind), static_cast<int>(b.kind));
  switch (a.kind) {
    case AtomKind::Ground: return GroundValue::compare(a.ground, b.ground);
    case AtomKind::Builtin: return cmp3(static_cast<int>(a.builtin), static_cast<int>(b.builtin));
    case AtomKind::Var: return cmp3(a.var, b.var);
    case AtomKind::Wildcard: return 0;
  }
  return 0;
}

size_t AtomValue::hash() const {
  size_t h = 0xa5a5a5a5ULL + static_cast<size_t>(kind);
  switch (kind) {
    case AtomKind::Ground: return hash_combine(h, ground.hash());
    case AtomKind::Builtin: return hash_combine(h, static_cast<size_t>(builtin));
    case AtomKind::Var: return hash_combine(h, hash_str(var));
    case AtomKind::Wildcard: return h;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Term

struct Term::Data {
  TermKind kind = TermKind::UnitList;
  AtomValue atom;
  std::vector<Term> items;
  std::optional<Term> head;
  std::vector<Receipt> receipts;
  std::vector<Term> body;
  size_t hash = 0;
  size_t nodes = 1;
};

namespace {

size_t receipt_hash(const std::vector<Receipt>& rs) {
  size_t h = 0x51;
  for (const auto& r : rs) h = hash_combine(h, r.hash());
  return h;
}

size_t receipt_nodes(const Receipt& r);

size_t term_nodes(const Term& t) { return t.node_count(); }

size_t name_nodes(const NamePattern& n) {
  return n.kind == NamePatternKind::Quoted ? 1 + n.quoted->node_count() : 1;
}

size_t source_nodes(const AtomSource& s) {
  size_t n = s.name ? name_nodes(*s.name) : s.atom->node_count();
  for (const auto& a : s.args) n += a.node_count();
  return n;
}

size_t receipt_nodes(const Receipt& r) {
  size_t n = 0;
  for (const auto& b : r.binds) {
    for (const auto& nm : b.names) n += name_nodes(nm);
    if (b.remainder) n += 1;
    n += source_nodes(b.source);
  }
  return n;
}

std::shared_ptr<const Term::Data> finish(Term::Data d) {
  size_t h = static_cast<size_t>(d.kind) * 0xff51afd7ed558ccdULL + 1;
  size_t nodes = 1;
  switch (d.kind) {
    case TermKind::UnitList:
    case TermKind::UnitBag: break;
    case TermKind::Atom:
      h = hash_combine(h, d.atom.hash());
      break;
    case TermKind::List:
    case TermKind::Bag:
      for (const auto& t : d.items) {
        h = hash_combine(h, t.hash());
        nodes += term_nodes(t);
      }
      break;
    case TermKind::ListComp:
    case TermKind::BagComp:
      h = hash_combine(h, d.head->hash());
      h = hash_combine(h, receipt_hash(d.receipts));
      nodes += d.head->node_count();
      for (const auto& r : d.receipts) nodes += receipt_nodes(r);
      for (const auto& t : d.body) {
        h = hash_combine(h, t.hash());
        nodes += term_nodes(t);
      }
      break;
  }
  d.hash = h;
  d.nodes = nodes;
  return std::make_shared<const Term::Data>(std::move(d));
}

const std::vector<Term>& empty_terms() {
  static const std::vector<Term> e;
  return e;
}

}  // namespace

Term::Term() {
  static const std::shared_ptr<const Data> unit = finish(Data{});
  d_ = unit;
}

Term Term::unit_list() { return Term(); }

Term Term::unit_bag() {
  Data d;
  d.kind = TermKind::UnitBag;
  static const std::shared_ptr<const Data> unit = finish(std::move(d));
  return Term(unit);
}

Term Term::atom(AtomValue a) {
  Data d;
  d.kind = TermKind::Atom;
  d.atom = std::move(a);
  return Term(finish(std::move(d)));
}

Term Term::list(std::vector<Term> items) {
  if (items.empty()) return unit_list();
  Data d;
  d.kind = TermKind::List;
  d.items = std::move(items);
  return Term(finish(std::move(d)));
}

Term Term::bag(std::vector<Term> items) {
  if (items.empty()) return unit_bag();
  std::sort(items.begin(), items.end(),
            [](const Term& a, const Term& b) { return compare(a, b) < 0; });
  Data d;
  d.kind = TermKind::Bag;
  d.items = std::move(items);
  return Term(finish(std::move(d)));
}

Term Term::list_comp(Term head, std::vector<Receipt> receipts, std::vector<Term> body) {
  if (receipts.empty()) throw std::invalid_argument("comprehension needs at least one receipt");
  Data d;
  d.kind = TermKind::ListComp;
  d.head = std::move(head);
  d.receipts = std::move(receipts);
  d.body = std::move(body);
  return Term(finish(std::move(d)));
}

Term Term::bag_comp(Term head, std::vector<Receipt> receipts, std::vector<Term> body) {
  if (receipts.empty()) throw std::invalid_argument("comprehension needs at least one receipt");
  Data d;
  d.kind = TermKind::BagComp;
  d.head = std::move(head);
  d.receipts = std::move(receipts);
  d.body = std::move(body);
  return Term(finish(std::move(d)));
}

Term Term::boolean(bool v) { AtomValue a; a.kind = AtomKind::Ground; a.ground = GroundValue::boolean(v); return atom(a); }
Term Term::integer(int64_t v) { AtomValue a; a.kind = AtomKind::Ground; a.ground = GroundValue::integer(v); return atom(a); }
Term Term::uinteger(uint64_t v) { AtomValue a; a.kind = AtomKind::Ground; a.ground = GroundValue::uinteger(v); return atom(a); }
Term Term::floating(double v) { AtomValue a; a.kind = AtomKind::Ground; a.ground = GroundValue::floating(v); return atom(a); }
Term Term::str(std::string v) { AtomValue a; a.kind = AtomKind::Ground; a.ground = GroundValue::str(std::move(v)); return atom(a); }
Term Term::uri(std::string v) { AtomValue a; a.kind = AtomKind::Ground; a.ground = GroundValue::uri(std::move(v)); return atom(a); }

Term Term::var(std::string name) {
  if (name.empty()) throw std::invalid_argument("variable name must be nonempty");
  AtomValue a;
  a.kind = AtomKind::Var;
  a.var = std::move(name);
  return atom(a);
}

Term Term::wildcard() {
  AtomValue a;
  a.kind = AtomKind::Wildcard;
  return atom(a);
}

Term Term::builtin(BuiltinSym b) {
  AtomValue a;
  a.kind = AtomKind::Builtin;
  a.builtin = b;
  return atom(a);
}

TermKind Term::kind() const { return d_->kind; }
const AtomValue& Term::atom_value() const { return d_->atom; }

const std::vector<Term>& Term::items() const {
  if (d_->kind == TermKind::List || d_->kind == TermKind::Bag) return d_->items;
  return empty_terms();
}

const Term& Term::comp_head() const { return *d_->head; }
const std::vector<Receipt>& Term::comp_receipts() const { return d_->receipts; }
const std::vector<Term>& Term::comp_body() const { return d_->body; }

bool Term::is_var() const { return is_atom() && d_->atom.kind == AtomKind::Var; }
bool Term::is_wildcard() const { return is_atom() && d_->atom.kind == AtomKind::Wildcard; }
bool Term::is_collection() const {
  TermKind k = kind();
  return k == TermKind::List || k == TermKind::Bag || k == TermKind::UnitList ||
         k == TermKind::UnitBag;
}

size_t Term::hash() const { return d_->hash; }
size_t Term::node_count() const { return d_->nodes; }

static int compare_terms(const std::vector<Term>& a, const std::vector<Term>& b) {
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i)
    if (int c = Term::compare(a[i], b[i])) return c;
  return cmp3(a.size(), b.size());
}

static int compare_receipts(const std::vector<Receipt>& a, const std::vector<Receipt>& b) {
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i)
    if (int c = Receipt::compare(a[i], b[i])) return c;
  return cmp3(a.size(), b.size());
}

int Term::compare(const Term& a, const Term& b) {
  if (a.d_ == b.d_) return 0;
  if (a.d_->kind != b.d_->kind)
    return cmp3(static_cast<int>(a.d_->kind), static_cast<int>(b.d_->kind));
  switch (a.d_->kind) {
    case TermKind::UnitList:
    case TermKind::UnitBag: return 0;
    case TermKind::Atom: return AtomValue::compare(a.d_->atom, b.d_->atom);
    case TermKind::List:
    case TermKind::Bag: return compare_terms(a.d_->items, b.d_->items);
    case TermKind::ListComp:
    case TermKind::BagComp: {
      if (int c = compare(*a.d_->head, *b.d_->head)) return c;
      if (int c = compare_receipts(a.d_->receipts, b.d_->receipts)) return c;
      return compare_terms(a.d_->body, b.d_->body);
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Receipt pieces

NamePattern NamePattern::variable(std::string name) {
  NamePattern n;
  n.kind = NamePatternKind::Var;
  n.var = std::move(name);
  return n;
}
NamePattern NamePattern::quote(Term t) {
  NamePattern n;
  n.kind = NamePatternKind::Quoted;
  n.quoted = std::move(t);
  return n;
}

int NamePattern::compare(const NamePattern& a, const NamePattern& b) {
  if (a.kind != b.kind) return cmp3(static_cast<int>(a.kind), static_cast<int>(b.kind));
  switch (a.kind) {
    case NamePatternKind::Wildcard: return 0;
    case NamePatternKind::Var: return cmp3(a.var, b.var);
    case NamePatternKind::Quoted: return Term::compare(*a.quoted, *b.quoted);
  }
  return 0;
}

size_t NamePattern::hash() const {
  size_t h = 0x1111 + static_cast<size_t>(kind);
  if (kind == NamePatternKind::Var) return hash_combine(h, hash_str(var));
  if (kind == NamePatternKind::Quoted) return hash_combine(h, quoted->hash());
  return h;
}

int NameRemainder::compare(const NameRemainder& a, const NameRemainder& b) {
  if (int c = cmp3(a.quoted, b.quoted)) return c;
  return cmp3(a.var, b.var);
}

int AtomSource::compare(const AtomSource& a, const AtomSource& b) {
  if (int c = cmp3(a.name.has_value(), b.name.has_value())) return c;
  if (a.name) {
    if (int c = NamePattern::compare(*a.name, *b.name)) return c;
  } else {
    if (int c = Term::compare(*a.atom, *b.atom)) return c;
  }
  if (int c = cmp3(static_cast<int>(a.postfix), static_cast<int>(b.postfix))) return c;
  return compare_terms(a.args, b.args);
}

size_t AtomSource::hash() const {
  size_t h = 0x2222 + static_cast<size_t>(postfix);
  h = hash_combine(h, name ? name->hash() : atom->hash());
  for (const auto& t : args) h = hash_combine(h, t.hash());
  return h;
}

int Bind::compare(const Bind& a, const Bind& b) {
  size_t n = std::min(a.names.size(), b.names.size());
  for (size_t i = 0; i < n; ++i)
    if (int c = NamePattern::compare(a.names[i], b.names[i])) return c;
  if (int c = cmp3(a.names.size(), b.names.size())) return c;
  if (int c = cmp3(a.remainder.has_value(), b.remainder.has_value())) return c;
  if (a.remainder)
    if (int c = NameRemainder::compare(*a.remainder, *b.remainder)) return c;
  return AtomSource::compare(a.source, b.source);
}

int Receipt::compare(const Receipt& a, const Receipt& b) {
  if (a.kind != b.kind) return cmp3(static_cast<int>(a.kind), static_cast<int>(b.kind));
  size_t n = std::min(a.binds.size(), b.binds.size());
  for (size_t i = 0; i < n; ++i)
    if (int c = Bind::compare(a.binds[i], b.binds[i])) return c;
  return cmp3(a.binds.size(), b.binds.size());
}

size_t Receipt::hash() const {
  size_t h = 0x3333 + static_cast<size_t>(kind);
  for (const auto& b : binds) {
    for (const auto& nm : b.names) h = hash_combine(h, nm.hash());
    h = hash_combine(h, b.remainder ? hash_str(b.remainder->var) + (b.remainder->quoted ? 7 : 3) : 0);
    h = hash_combine(h, b.source.hash());
  }
  return h;
}

// ---------------------------------------------------------------------------
// TermBag

TermBag TermBag::of(std::vector<Term> items) {
  std::sort(items.begin(), items.end(),
            [](const Term& a, const Term& b) { return Term::compare(a, b) < 0; });
  TermBag bag;
  bag.items_ = std::move(items);
  return bag;
}

void TermBag::add(const Term& t) {
  auto it = std::lower_bound(items_.begin(), items_.end(), t,
                             [](const Term& a, const Term& b) { return Term::compare(a, b) < 0; });
  items_.insert(it, t);
}

TermBag TermBag::union_with(const TermBag& o) const {
  TermBag out;
  out.items_.reserve(items_.size() + o.items_.size());
  std::merge(items_.begin(), items_.end(), o.items_.begin(), o.items_.end(),
             std::back_inserter(out.items_),
             [](const Term& a, const Term& b) { return Term::compare(a, b) < 0; });
  return out;
}

std::optional<TermBag> TermBag::remove_one(const Term& t) const {
  auto it = std::lower_bound(items_.begin(), items_.end(), t,
                             [](const Term& a, const Term& b) { return Term::compare(a, b) < 0; });
  if (it == items_.end() || !(*it == t)) return std::nullopt;
  TermBag out;
  out.items_.reserve(items_.size() - 1);
  out.items_.assign(items_.begin(), it);
  out.items_.insert(out.items_.end(), it + 1, items_.end());
  return out;
}

bool TermBag::contains(const Term& t) const { return count(t) > 0; }

size_t TermBag::count(const Term& t) const {
  auto lo = std::lower_bound(items_.begin(), items_.end(), t,
                             [](const Term& a, const Term& b) { return Term::compare(a, b) < 0; });
  auto hi = std::upper_bound(lo, items_.end(), t,
                             [](const Term& a, const Term& b) { return Term::compare(a, b) < 0; });
  return static_cast<size_t>(hi - lo);
}

int TermBag::compare(const TermBag& a, const TermBag& b) {
  return compare_terms(a.items_, b.items_);
}

size_t TermBag::hash() const {
  size_t h = 0x4444;
  for (const auto& t : items_) h = hash_combine(h, t.hash());
  return h;
}

// ---------------------------------------------------------------------------

Term cons(const Term& t, const Term& s) {
  switch (s.kind()) {
    case TermKind::UnitList: return Term::list({t});
    case TermKind::UnitBag: return Term::bag({t});
    case TermKind::List: {
      std::vector<Term> items;
      items.reserve(s.items().size() + 1);
      items.push_back(t);
      items.insert(items.end(), s.items().begin(), s.items().end());
      return Term::list(std::move(items));
    }
    case TermKind::Bag: {
      std::vector<Term> items = s.items();
      items.push_back(t);
      return Term::bag(std::move(items));
    }
    default: throw std::invalid_argument("cons: second argument must be a list or bag");
  }
}

static void collect_vars_name(const NamePattern& n, std::vector<std::string>& out) {
  if (n.kind == NamePatternKind::Var) out.push_back(n.var);
  if (n.kind == NamePatternKind::Quoted) collect_vars(*n.quoted, out);
}

void collect_vars(const Term& t, std::vector<std::string>& out) {
  switch (t.kind()) {
    case TermKind::Atom:
      if (t.atom_value().kind == AtomKind::Var) out.push_back(t.atom_value().var);
      break;
    case TermKind::List:
    case TermKind::Bag:
      for (const auto& it : t.items()) collect_vars(it, out);
      break;
    case TermKind::ListComp:
    case TermKind::BagComp:
      collect_vars(t.comp_head(), out);
      for (const auto& r : t.comp_receipts())
        for (const auto& b : r.binds) {
          for (const auto& nm : b.names) collect_vars_name(nm, out);
          if (b.remainder && b.remainder->var != "_") out.push_back(b.remainder->var);
          if (b.source.name) collect_vars_name(*b.source.name, out);
          if (b.source.atom) collect_vars(*b.source.atom, out);
          for (const auto& a : b.source.args) collect_vars(a, out);
        }
      for (const auto& it : t.comp_body()) collect_vars(it, out);
      break;
    default: break;
  }
}

}  // namespace metta
