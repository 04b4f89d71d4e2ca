// metta-machine: an abstract machine for MeTTa states
// Copyright 2026 The metta-machine Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "metta/machine.hpp"
#include "metta/resources.hpp"

namespace metta {

class RhoProcess;

/// Effort amount that may reference one join-bound variable until a COMM
/// substitutes a concrete value.
struct EoExpr {
  Eo constant = 0;
  std::optional<std::string> var;

  bool concrete() const { return !var.has_value(); }
  Eo value() const { return constant; }  // valid when concrete
  static EoExpr lit(Eo v) { return {v, std::nullopt}; }
  static EoExpr offset(std::string var_name, Eo c) { return {c, std::move(var_name)}; }
  static int compare(const EoExpr& a, const EoExpr& b);
  bool operator==(const EoExpr& o) const { return compare(*this, o) == 0; }
};

/// Names: quoted processes, runtime channel names introduced by New, and
/// pattern variables bound by inputs. Alpha-equivalence of New binders is
/// handled in comparison, which indexes bound names by binder depth.
struct RhoName {
  enum class Kind { Quote, Alloc, PatVar } kind = Kind::Quote;
  std::shared_ptr<const RhoProcess> quoted;
  uint64_t alloc = 0;
  std::string text;  // Alloc display hint / PatVar name

  static RhoName quote(RhoProcess p);
  static RhoName channel(uint64_t id, std::string hint);
  static RhoName pat_var(std::string name);
  bool operator==(const RhoName& o) const;
};

enum class RhoPatKind { Binder, Literal, Ledger };

/// One join binder: pattern <- channel.
struct RhoBind {
  RhoPatKind pat = RhoPatKind::Binder;
  std::string var;   // Binder: bound name; Ledger: bound effort amount
  RhoName literal;   // Literal: exact datum to consume
  KeyId kid;         // Ledger: entry key to consume
  RhoName channel;
};

enum class RhoKind {
  Zero,
  Par,
  Input,
  Output,
  New,
  Drop,
  IfPositive,
  TermLeaf,
  LedgerLeaf,
  Dispatch,
};

struct DispatchInfo {
  std::vector<RhoName> channels;  // i k w o [c]
  bool resourced = false;
};

/// Immutable process values. Par is kept flattened, Zero-free and canonically
/// sorted; Drop(@P) collapses to P; New binders compare up to renaming.
class RhoProcess {
 public:
  RhoProcess();  // Zero

  static RhoProcess zero();
  static RhoProcess par(std::vector<RhoProcess> items);
  static RhoProcess input(std::vector<RhoBind> binds, RhoProcess cont);
  static RhoProcess output(RhoName channel, RhoProcess payload);
  static RhoProcess make_new(uint64_t binder_id, std::string hint, RhoProcess body);
  static RhoProcess drop(RhoName n);
  static RhoProcess if_positive(EoExpr guard, RhoProcess then_p, RhoProcess else_p);
  static RhoProcess term_leaf(Term t);            // unsigned embedding
  static RhoProcess signed_leaf(SignedTerm st);   // resource embedding
  static RhoProcess ledger_leaf(KeyId kid, EoExpr eo);
  static RhoProcess dispatch(DispatchInfo info);

  RhoKind kind() const;
  const std::vector<RhoProcess>& par_items() const;
  const std::vector<RhoBind>& binds() const;
  const RhoProcess& cont() const;
  const RhoName& channel() const;
  const RhoProcess& payload() const;
  uint64_t binder_id() const;
  const std::string& binder_hint() const;
  const RhoProcess& body() const;
  const RhoName& dropped() const;
  const EoExpr& guard() const;
  const RhoProcess& then_branch() const;
  const RhoProcess& else_branch() const;
  const Term& leaf_term() const;
  bool leaf_is_signed() const;
  const SignedTerm& leaf_signed() const;
  KeyId ledger_kid() const;
  const EoExpr& ledger_eo() const;
  const DispatchInfo& dispatch_info() const;

  bool is_zero() const { return kind() == RhoKind::Zero; }

  static int compare(const RhoProcess& a, const RhoProcess& b);
  bool operator==(const RhoProcess& o) const { return compare(*this, o) == 0; }
  bool operator<(const RhoProcess& o) const { return compare(*this, o) < 0; }

  struct Data;

 private:
  explicit RhoProcess(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  std::shared_ptr<const Data> d_;
};

std::string print_rho(const RhoProcess& p);

// ---------------------------------------------------------------------------
// Execution: a soup of parallel components with allocated channel names.

struct RhoNet {
  std::vector<RhoProcess> comps;  // canonically sorted
  uint64_t next_alloc = 0;

  /// Canonical fingerprint: components printed with channel names renumbered
  /// by first occurrence, so interleavings that differ only in allocation
  /// order collapse.
  std::string key() const;
};

/// Flattens a process into a net, allocating every New binder.
RhoNet rho_instantiate(const RhoProcess& p);

/// All single reduction steps: COMM firings (joins take all their data at
/// once), gas-guard resolutions and dispatcher expansions. Results are
/// deduplicated by canonical key. The signer re-signs data produced by
/// dispatched resource listeners.
std::vector<RhoNet> rho_net_step(const RhoNet& net, const Signer& signer);

/// Single COMM steps of a standalone process (the net machinery applied to
/// one term), as processes.
std::vector<RhoProcess> rho_step(const RhoProcess& p);

// ---------------------------------------------------------------------------
// Compilation from machine states.

struct RhoChannels {
  RhoName i, k, w, o, c;
  bool has_c = false;
};

/// Register channels named i,k,w,o(,c) with fresh ids from 0.
RhoChannels make_channels(bool resourced);

/// Data deployment: one output per register item.
RhoProcess compile_config(const State& s, const RhoChannels& ch);
RhoProcess compile_config_rb(const RState& s, const RhoChannels& ch);

/// One listener per rule instance enabled at s; each listener's continuation
/// re-instantiates the evaluator through a dispatcher once the rule fired.
/// first_fresh_id seeds binder/pattern-variable numbering.
RhoProcess compile_eval(const State& s, const RhoChannels& ch, uint64_t first_fresh_id = 16);
RhoProcess compile_eval_rb(const RState& s, const Signer& signer, const RhoChannels& ch,
                           uint64_t first_fresh_id = 16);

/// Configuration and evaluation composed under New binders for the register
/// channels (and the ledger channel in the resource form).
RhoProcess compile_meaning(const State& s);
RhoProcess compile_meaning_rb(const RState& s, const Signer& signer);

struct RhoBarbs {
  std::vector<Term> terms;  // sorted multiset
  std::vector<std::string> errors;
};

/// Unconsumed data on the designated input/output channels, mapped back to
/// terms. Payloads outside the embedding are reported.
RhoBarbs rho_barbs(const RhoNet& net, const RhoName& chan_i, const RhoName& chan_o);

/// Total of concrete ledger entries sitting on the ledger channel.
Eo rho_ledger_total(const RhoNet& net, const RhoName& chan_c);

// ---------------------------------------------------------------------------
// Differential harnesses.

struct CorrectnessReport {
  std::set<std::string> metta_barbs;  // quiescent barb multisets, printed
  std::set<std::string> rho_barbs;
  bool metta_truncated = false;
  bool rho_truncated = false;
  std::vector<std::string> errors;
  bool agree = false;
};

/// Explores the machine and the compiled process side by side (bounded by
/// fuel) and compares reachable quiescent barbs.
CorrectnessReport check_correctness(const State& s, uint64_t fuel);

struct CorrectnessRbReport {
  std::set<std::string> metta_outcomes;  // "barbs | remaining effort"
  std::set<std::string> rho_outcomes;
  bool metta_truncated = false;
  bool rho_truncated = false;
  std::vector<std::string> errors;
  bool agree = false;
};

/// Resource variant: quiescent barbs plus the channel-c ledger totals must
/// coincide with the machine's ledger.
CorrectnessRbReport check_correctness_rb(const RState& s, const Signer& signer, uint64_t fuel);

}  // namespace metta
