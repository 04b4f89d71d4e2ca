// metta-machine: an abstract machine for MeTTa states
// Copyright 2026 The metta-machine Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "metta/machine.hpp"
#include "metta/term.hpp"
#include "metta/unify.hpp"

namespace metta {

/// Effort objects: the cost group is the integers under +.
using Eo = int64_t;

struct KeyId {
  uint64_t value = 0;
  auto operator<=>(const KeyId&) const = default;
  std::string hex() const;                                  // 16 lowercase hex digits
  static std::optional<KeyId> from_hex(const std::string&);  // exactly 16 hex digits
};

using Tag = std::array<unsigned char, 32>;

struct SignedTerm {
  Term term;
  KeyId key;
  std::optional<Eo> eo;  // absent means no inline effort attached
  Tag tag{};             // all zeros = null signature, always verifies

  bool operator==(const SignedTerm& o) const { return compare(*this, o) == 0; }
  static int compare(const SignedTerm& a, const SignedTerm& b);
  size_t hash() const;
};

/// Multisets of signed terms, canonically sorted.
class SignedBag {
 public:
  SignedBag() = default;
  static SignedBag of(std::vector<SignedTerm> items);

  const std::vector<SignedTerm>& items() const { return items_; }
  bool empty() const { return items_.empty(); }
  size_t size() const { return items_.size(); }

  void add(const SignedTerm& t);
  std::optional<SignedBag> remove_one(const SignedTerm& t) const;
  /// Removes the first occurrence whose term component equals t.
  std::optional<std::pair<SignedBag, SignedTerm>> remove_one_by_term(const Term& t) const;

  TermBag project() const;  // strip signatures

  bool operator==(const SignedBag& o) const { return items_ == o.items_; }
  static int compare(const SignedBag& a, const SignedBag& b);
  size_t hash() const;

 private:
  std::vector<SignedTerm> items_;
};

/// Five-register resource-bounded state. The ledger keeps at most one entry
/// per key (entries merge by addition on load).
struct RState {
  SignedBag i, k, w, o;
  std::map<KeyId, Eo> eos;

  bool operator==(const RState& o_) const {
    return i == o_.i && k == o_.k && w == o_.w && o == o_.o && eos == o_.eos;
  }
  static int compare(const RState& a, const RState& b);
  size_t hash() const;
  Eo ledger_total() const;
  State project() const;  // strip signatures and drop the ledger
};

/// Signs terms and verifies tags. KeyId = first 8 bytes of SHA-256 over the
/// private key; the tag is an HMAC-SHA256 over the canonical term bytes, the
/// effort annotation and the key id. Keys added to the store allow re-signing
/// engine-produced terms; unknown keys fall back to the null signature.
class Signer {
 public:
  static KeyId key_id(std::span<const unsigned char> priv);

  void add_key(std::vector<unsigned char> priv);
  bool knows(KeyId kid) const { return keys_.count(kid) > 0; }

  static SignedTerm sign(std::span<const unsigned char> priv, const Term& t,
                         std::optional<Eo> eo);
  static SignedTerm sign_null(const Term& t, KeyId kid, std::optional<Eo> eo);

  /// Signs with the stored key for kid when known, else a null signature.
  SignedTerm resign(KeyId kid, const Term& t, std::optional<Eo> eo) const;

  /// Null tags always verify; real tags verify only against a stored key.
  bool verify(const SignedTerm& st) const;

 private:
  std::map<KeyId, std::vector<unsigned char>> keys_;
};

/// # on terms: the node count. Strictly positive, monotone under subterm
/// inclusion.
Eo cost_term(const Term& t);
/// # on substitutions: sum of node counts of the bound terms.
Eo cost_subst(const Substitution& s);

struct CostedTransition {
  RuleLabel label = RuleLabel::Query;
  char reg = 'i';
  SignedTerm host;
  Context ctx;
  Term redex;
  std::vector<Substitution> substs;
  Eo cost = 0;   // the arrow label of this rule instance
  KeyId payer;
  std::map<KeyId, Eo> ledger_before, ledger_after;
  RState next;
  std::shared_ptr<CostedTransition> inner;  // AddAtom2/RemAtom2 composite body

  /// Cost including composite inner transitions; this is what the ledger
  /// (plus consumed inline effort) pays in total.
  Eo total_cost() const;
  /// Inline effort consumed by this transition including inner ones.
  Eo total_inline_consumed() const;
};

/// Mirrors enabled() with per-rule costs. A rule instance is enabled only if
/// the payer has a ledger entry and (inline + balance - cost) > 0; the payer
/// entry becomes that difference. Produced terms are re-signed with the payer
/// key and no inline effort.
std::vector<CostedTransition> enabled_rb(const RState& s, const Signer& signer,
                                         std::vector<std::string>* diags = nullptr);

/// Same enumeration with the ledger-entry and gas guards skipped: the
/// candidates a compiler emits listeners for. `funded` is false for entries
/// blocked purely by gas (missing entry or non-positive remainder).
struct RbCandidate {
  CostedTransition transition;
  bool funded = false;
};
std::vector<RbCandidate> enabled_rb_candidates(const RState& s, const Signer& signer);

enum class RunRbVerdict { Quiescent, FuelExhausted, Starved };

struct RunRbResult {
  std::vector<CostedTransition> trace;
  RState final_state;
  RunRbVerdict verdict = RunRbVerdict::Quiescent;
  std::vector<std::string> diagnostics;
};

/// Starved: nothing is enabled under the resource rules while the projected
/// plain state still has enabled transitions.
RunRbResult run_rb(const RState& s, const Signer& signer, const SchedulerPolicy& policy,
                   uint64_t fuel);

}  // namespace metta
