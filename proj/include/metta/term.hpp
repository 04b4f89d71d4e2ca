// metta-machine: an abstract machine for MeTTa states
// Copyright 2026 The metta-machine Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace metta {

enum class TermKind { UnitList, UnitBag, Atom, List, Bag, ListComp, BagComp };
enum class AtomKind { Ground, Builtin, Var, Wildcard };
enum class GroundKind { Bool, Int, UInt, Float, Str, Uri };
enum class BuiltinSym { DefEq, Eq, Transform, AddAtom, RemAtom, Plus, Times };

/// Ground literal. Int/UInt/Float are distinct types; no implicit coercion.
struct GroundValue {
  GroundKind kind = GroundKind::Bool;
  bool b = false;
  int64_t i = 0;
  uint64_t u = 0;
  double f = 0.0;
  std::string s;  // Str and Uri payload (arbitrary bytes)

  static GroundValue boolean(bool v);
  static GroundValue integer(int64_t v);
  static GroundValue uinteger(uint64_t v);
  static GroundValue floating(double v);  // NaNs collapse to one canonical NaN
  static GroundValue str(std::string v);
  static GroundValue uri(std::string v);

  bool operator==(const GroundValue& o) const { return compare(*this, o) == 0; }
  static int compare(const GroundValue& a, const GroundValue& b);
  size_t hash() const;
};

struct AtomValue {
  AtomKind kind = AtomKind::Wildcard;
  GroundValue ground;
  BuiltinSym builtin = BuiltinSym::Eq;
  std::string var;  // nonempty for Var

  bool operator==(const AtomValue& o) const { return compare(*this, o) == 0; }
  static int compare(const AtomValue& a, const AtomValue& b);
  size_t hash() const;
};

class Term;
struct Receipt;

/// Immutable term value; cheap to copy and safe to share between threads.
class Term {
 public:
  Term();  // UnitList

  static Term unit_list();
  static Term unit_bag();
  static Term atom(AtomValue a);
  static Term list(std::vector<Term> items);  // empty collapses to ()
  static Term bag(std::vector<Term> items);   // sorted; empty collapses to {}
  static Term list_comp(Term head, std::vector<Receipt> receipts, std::vector<Term> body);
  static Term bag_comp(Term head, std::vector<Receipt> receipts, std::vector<Term> body);

  // Atom shorthands.
  static Term boolean(bool v);
  static Term integer(int64_t v);
  static Term uinteger(uint64_t v);
  static Term floating(double v);
  static Term str(std::string v);
  static Term sym(std::string v) { return str(std::move(v)); }  // bare-printable string
  static Term uri(std::string v);
  static Term var(std::string name);
  static Term wildcard();
  static Term builtin(BuiltinSym b);

  TermKind kind() const;
  const AtomValue& atom_value() const;
  const std::vector<Term>& items() const;  // List/Bag
  const Term& comp_head() const;
  const std::vector<Receipt>& comp_receipts() const;
  const std::vector<Term>& comp_body() const;

  bool is_atom() const { return kind() == TermKind::Atom; }
  bool is_var() const;
  bool is_wildcard() const;
  bool is_comp() const { return kind() == TermKind::ListComp || kind() == TermKind::BagComp; }
  bool is_collection() const;  // List/Bag/UnitList/UnitBag

  size_t hash() const;
  size_t node_count() const;

  bool operator==(const Term& o) const { return compare(*this, o) == 0; }
  bool operator<(const Term& o) const { return compare(*this, o) < 0; }
  static int compare(const Term& a, const Term& b);  // the total term order

  struct Data;  // definition lives in term.cpp

 private:
  explicit Term(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  std::shared_ptr<const Data> d_;
};

inline int term_order(const Term& a, const Term& b) { return Term::compare(a, b); }

// ---------------------------------------------------------------------------
// Receipts (comprehension binders). Parsed, stored and printed; the machine
// treats comprehensions as inert, so these carry no evaluation behavior.

enum class NamePatternKind { Wildcard, Var, Quoted };
struct NamePattern {
  NamePatternKind kind = NamePatternKind::Wildcard;
  std::string var;
  std::optional<Term> quoted;  // @Term

  static NamePattern wildcard() { return {}; }
  static NamePattern variable(std::string name);
  static NamePattern quote(Term t);
  static int compare(const NamePattern& a, const NamePattern& b);
  bool operator==(const NamePattern& o) const { return compare(*this, o) == 0; }
  size_t hash() const;
};

/// `... $x` (plain) or `... @$x` (quoted); var may be "_".
struct NameRemainder {
  bool quoted = false;
  std::string var;
  static int compare(const NameRemainder& a, const NameRemainder& b);
  bool operator==(const NameRemainder& o) const { return compare(*this, o) == 0; }
};

enum class SourcePostfix { None, Interleave /* ?! */, SendReceive /* !?(..) */ };

/// A bind source: either a Name (wildcard/var/@term) or a bare atom.
struct AtomSource {
  std::optional<NamePattern> name;
  std::optional<Term> atom;
  SourcePostfix postfix = SourcePostfix::None;
  std::vector<Term> args;  // for !?( ... )

  static int compare(const AtomSource& a, const AtomSource& b);
  bool operator==(const AtomSource& o) const { return compare(*this, o) == 0; }
  size_t hash() const;
};

struct Bind {
  std::vector<NamePattern> names;  // may be empty
  std::optional<NameRemainder> remainder;
  AtomSource source;

  static int compare(const Bind& a, const Bind& b);
  bool operator==(const Bind& o) const { return compare(*this, o) == 0; }
};

enum class ReceiptKind { Linear, Repeated, Peek };
struct Receipt {
  ReceiptKind kind = ReceiptKind::Linear;
  std::vector<Bind> binds;  // nonempty

  static int compare(const Receipt& a, const Receipt& b);
  bool operator==(const Receipt& o) const { return compare(*this, o) == 0; }
  size_t hash() const;
};

// ---------------------------------------------------------------------------
// Multisets of terms, stored canonically sorted.

class TermBag {
 public:
  TermBag() = default;
  static TermBag of(std::vector<Term> items);  // sorts

  const std::vector<Term>& items() const { return items_; }
  bool empty() const { return items_.empty(); }
  size_t size() const { return items_.size(); }

  void add(const Term& t);  // insert keeping order
  TermBag union_with(const TermBag& o) const;
  std::optional<TermBag> remove_one(const Term& t) const;
  bool contains(const Term& t) const;
  size_t count(const Term& t) const;

  bool operator==(const TermBag& o) const { return items_ == o.items_; }
  static int compare(const TermBag& a, const TermBag& b);
  size_t hash() const;

 private:
  std::vector<Term> items_;
};

inline TermBag bag_union(const TermBag& x, const TermBag& y) { return x.union_with(y); }
inline std::optional<TermBag> bag_remove_one(const TermBag& x, const Term& t) {
  return x.remove_one(t);
}

/// :: on collections. Throws std::invalid_argument for atoms/comprehensions.
Term cons(const Term& t, const Term& s);

/// All variable names occurring anywhere in t (including under comprehensions).
void collect_vars(const Term& t, std::vector<std::string>& out);

size_t hash_combine(size_t a, size_t b);

}  // namespace metta
