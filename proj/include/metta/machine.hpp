// metta-machine: an abstract machine for MeTTa states
// Copyright 2026 The metta-machine Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "metta/context.hpp"
#include "metta/term.hpp"
#include "metta/unify.hpp"

namespace metta {

/// Four-register state. Registers are canonical bags; state equality is
/// register-wise bag equality.
struct State {
  TermBag i, k, w, o;

  bool operator==(const State& o_) const {
    return i == o_.i && k == o_.k && w == o_.w && o == o_.o;
  }
  static int compare(const State& a, const State& b);
  size_t hash() const;
};

enum class RuleLabel {
  Query,
  Chain,
  Transform,
  AddAtom1,
  AddAtom2,
  RemAtom1,
  RemAtom2,
  Output,
  BoolAdd1,
  BoolAdd2,
  BoolMult1,
  BoolMult2,
  NumAdd1,
  NumAdd2,
  NumMult1,
  NumMult2,
  StrAdd1,
  StrAdd2,
};

const char* rule_label_name(RuleLabel label);
std::optional<RuleLabel> rule_label_from_name(const std::string& name);

struct Transition {
  RuleLabel label = RuleLabel::Query;
  char reg = 'i';  // register the redex was taken from ('i', 'k' or 'w')
  Term host;       // consumed register item (the directive for AddAtom2/RemAtom2)
  Context ctx;     // trivial for builtins, directives and Output
  Term redex;      // subterm at the hole
  std::vector<Substitution> substs;
  State next;
  std::shared_ptr<Transition> inner;  // AddAtom2/RemAtom2 composite body
};

/// Every rule instance enabled at s, ordered by rule label, then canonical
/// host order, then decomposition order. Overflowing integer builtins are
/// stuck redexes; when diags is non-null a note per stuck redex is appended.
std::vector<Transition> enabled(const State& s, std::vector<std::string>* diags = nullptr);

struct SchedulerPolicy {
  enum Kind { Deterministic, Random } kind = Deterministic;
  uint64_t seed = 0;
  static SchedulerPolicy deterministic() { return {}; }
  static SchedulerPolicy random(uint64_t seed) { return {Random, seed}; }
};

/// First enabled transition (deterministic) or a uniform seeded pick.
/// nullopt means quiescent.
std::optional<Transition> step(const State& s, const SchedulerPolicy& policy);

enum class RunVerdict { Quiescent, FuelExhausted };

struct RunResult {
  std::vector<Transition> trace;
  State final_state;
  RunVerdict verdict = RunVerdict::Quiescent;
  std::vector<std::string> diagnostics;
};

RunResult run(const State& s, const SchedulerPolicy& policy, uint64_t fuel);

}  // namespace metta
