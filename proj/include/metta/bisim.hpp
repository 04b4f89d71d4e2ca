// metta-machine: an abstract machine for MeTTa states
// Copyright 2026 The metta-machine Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "metta/machine.hpp"
#include "metta/resources.hpp"

namespace metta {

struct ExploreBounds {
  size_t max_nodes = 4096;
  size_t max_depth = 256;
};

/// Bounded labeled transition system. Node 0 is the root; node and barb keys
/// are canonical printed forms, so graph comparisons are string comparisons.
struct Lts {
  struct Edge {
    RuleLabel label;
    int target;
  };
  std::vector<std::string> node_keys;
  std::vector<std::vector<std::string>> barbs;  // sorted printed barb terms per node
  std::vector<std::vector<Edge>> edges;
  int root = 0;
  bool truncated = false;

  size_t node_count() const { return node_keys.size(); }
  size_t edge_count() const;
  std::string barb_key(int node) const;  // rendered multiset
  bool operator==(const Lts& o) const {
    return node_keys == o.node_keys && barbs == o.barbs && edge_count() == o.edge_count() &&
           edges_equal(o) && root == o.root && truncated == o.truncated;
  }
  bool edges_equal(const Lts& o) const;
};

/// Barbs of a state: the input and output registers, as a multiset.
std::vector<Term> barbs(const State& s);
std::string barb_key(const State& s);

/// Breadth-first closure under enabled() up to the bounds; truncated is set
/// iff a bound cut off at least one transition. Serial reference
/// implementation.
Lts explore(const State& root, const ExploreBounds& bounds);

/// Same LTS as explore(), expanding each BFS frontier level in parallel with
/// OpenMP. jobs <= 1 falls back to the serial path.
Lts explore_parallel(const State& root, const ExploreBounds& bounds, int jobs);

/// Resource-bounded exploration under enabled_rb. Barbs are the projected
/// i/o terms; with with_ledger_barb the ledger joins the barb.
Lts explore_rb(const RState& root, const Signer& signer, const ExploreBounds& bounds,
               bool with_ledger_barb = false, int jobs = 1);

enum class BisimVerdict { Bisimilar, Distinguished, Inconclusive };

struct WitnessStep {
  char side = 'A';  // which system moved
  RuleLabel label = RuleLabel::Query;
  std::string state_a;  // pair after the move
  std::string state_b;
  std::string barbs_a;
  std::string barbs_b;
};

struct BisimResult {
  BisimVerdict verdict = BisimVerdict::Inconclusive;
  std::vector<WitnessStep> witness;  // for Distinguished: path to a barb mismatch
  std::string detail;
};

/// Weak barbed bisimulation on two explored systems: all rule labels are
/// internal; a barb (term with a multiplicity) of one state must be weakly
/// reachable from the other, and single moves may be answered by any weakly
/// reachable state. Partition refinement over the disjoint union, with
/// blocks seeded by weak-barb closures. Under truncation only refutations
/// against a completely explored side are sound; everything else is
/// inconclusive.
BisimResult weak_bisim_lts(const Lts& a, const Lts& b);

BisimResult weak_bisim(const State& a, const State& b, const ExploreBounds& bounds);

}  // namespace metta
