// metta-machine: an abstract machine for MeTTa states
// Copyright 2026 The metta-machine Authors.
// SPDX-License-Identifier: Apache-2.0

#include "metta/bisim.hpp"

#include <omp.h>

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "metta/syntax.hpp"

namespace metta {

size_t Lts::edge_count() const {
  size_t n = 0;
  for (const auto& es : edges) n += es.size();
  return n;
}

std::string Lts::barb_key(int node) const {
  std::string out = "{";
  bool first = true;
  for (const auto& b : barbs[node]) {
    if (!first) out += " ";
    first = false;
    out += b;
  }
  return out + "}";
}

bool Lts::edges_equal(const Lts& o) const {
  if (edges.size() != o.edges.size()) return false;
  for (size_t n = 0; n < edges.size(); ++n) {
    if (edges[n].size() != o.edges[n].size()) return false;
    for (size_t j = 0; j < edges[n].size(); ++j)
      if (edges[n][j].label != o.edges[n][j].label || edges[n][j].target != o.edges[n][j].target)
        return false;
  }
  return true;
}

std::vector<Term> barbs(const State& s) {
  std::vector<Term> out;
  out.reserve(s.i.size() + s.o.size());
  out.insert(out.end(), s.i.items().begin(), s.i.items().end());
  out.insert(out.end(), s.o.items().begin(), s.o.items().end());
  std::sort(out.begin(), out.end(),
            [](const Term& a, const Term& b) { return Term::compare(a, b) < 0; });
  return out;
}

std::string barb_key(const State& s) { return print_term_multiset(barbs(s)); }

namespace {

std::vector<std::string> printed_barbs(const State& s) {
  std::vector<std::string> out;
  for (const auto& t : barbs(s)) out.push_back(print_term(t));
  std::sort(out.begin(), out.end());
  return out;
}

// Level-synchronous BFS shared by the serial and parallel paths. The
// successor order is deterministic, so expanding a level in parallel and
// merging in frontier order reproduces the serial numbering exactly.
template <typename Node, typename SuccFn, typename KeyFn, typename BarbFn>
Lts explore_bfs(const Node& root, const ExploreBounds& bounds, int jobs, SuccFn succ_of,
                KeyFn key_of, BarbFn barb_of) {
  Lts lts;
  std::map<std::string, int> index;
  std::vector<Node> nodes;

  auto add_node = [&](const Node& n, const std::string& key) {
    int id = static_cast<int>(nodes.size());
    nodes.push_back(n);
    lts.node_keys.push_back(key);
    lts.barbs.push_back(barb_of(n));
    lts.edges.emplace_back();
    index.emplace(key, id);
    return id;
  };

  add_node(root, key_of(root));
  std::vector<int> frontier{0};
  size_t depth = 0;
  using Succs = std::vector<std::pair<RuleLabel, Node>>;

  while (!frontier.empty()) {
    std::vector<Succs> level(frontier.size());
    if (jobs > 1) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs)
      for (size_t f = 0; f < frontier.size(); ++f) level[f] = succ_of(nodes[frontier[f]]);
    } else {
      for (size_t f = 0; f < frontier.size(); ++f) level[f] = succ_of(nodes[frontier[f]]);
    }
    if (depth == bounds.max_depth) {
      for (const auto& succs : level)
        if (!succs.empty()) lts.truncated = true;
      break;
    }
    std::vector<int> next_frontier;
    for (size_t f = 0; f < frontier.size(); ++f) {
      int src = frontier[f];
      for (auto& [label, target] : level[f]) {
        std::string key = key_of(target);
        auto it = index.find(key);
        int tid;
        if (it != index.end()) {
          tid = it->second;
        } else if (nodes.size() < bounds.max_nodes) {
          tid = add_node(target, key);
          next_frontier.push_back(tid);
        } else {
          lts.truncated = true;
          continue;
        }
        lts.edges[src].push_back({label, tid});
      }
    }
    frontier = std::move(next_frontier);
    ++depth;
  }
  return lts;
}

std::vector<std::pair<RuleLabel, State>> state_succs(const State& s) {
  std::vector<std::pair<RuleLabel, State>> out;
  for (auto& t : enabled(s)) out.emplace_back(t.label, std::move(t.next));
  return out;
}

}  // namespace

Lts explore(const State& root, const ExploreBounds& bounds) {
  return explore_bfs(root, bounds, 1, state_succs,
                     [](const State& s) { return print_state(s); },
                     [](const State& s) { return printed_barbs(s); });
}

Lts explore_parallel(const State& root, const ExploreBounds& bounds, int jobs) {
  return explore_bfs(root, bounds, jobs, state_succs,
                     [](const State& s) { return print_state(s); },
                     [](const State& s) { return printed_barbs(s); });
}

Lts explore_rb(const RState& root, const Signer& signer, const ExploreBounds& bounds,
               bool with_ledger_barb, int jobs) {
  auto succs = [&signer](const RState& s) {
    std::vector<std::pair<RuleLabel, RState>> out;
    for (auto& t : enabled_rb(s, signer)) out.emplace_back(t.label, std::move(t.next));
    return out;
  };
  auto barb = [with_ledger_barb](const RState& s) {
    std::vector<std::string> out = printed_barbs(s.project());
    if (with_ledger_barb)
      for (const auto& [kid, eo] : s.eos)
        out.push_back("(kid:0x" + kid.hex() + " " + std::to_string(eo) + ")");
    std::sort(out.begin(), out.end());
    return out;
  };
  return explore_bfs(root, bounds, jobs, succs,
                     [](const RState& s) { return print_state(s); }, barb);
}

// ---------------------------------------------------------------------------
// Weak barbed checking

namespace {

using BarbMultiset = std::map<std::string, int>;

BarbMultiset to_multiset(const std::vector<std::string>& sorted) {
  BarbMultiset out;
  for (const auto& b : sorted) ++out[b];
  return out;
}

// Reflexive-transitive closure per node, as sorted index lists.
std::vector<std::vector<int>> weak_closure(const std::vector<std::vector<Lts::Edge>>& edges) {
  size_t n = edges.size();
  std::vector<std::vector<int>> reach(n);
  for (size_t s = 0; s < n; ++s) {
    std::vector<char> seen(n, 0);
    std::deque<int> queue{static_cast<int>(s)};
    seen[s] = 1;
    while (!queue.empty()) {
      int cur = queue.front();
      queue.pop_front();
      reach[s].push_back(cur);
      for (const auto& e : edges[cur])
        if (!seen[e.target]) {
          seen[e.target] = 1;
          queue.push_back(e.target);
        }
    }
    std::sort(reach[s].begin(), reach[s].end());
  }
  return reach;
}

struct UnionGraph {
  std::vector<std::vector<Lts::Edge>> edges;
  std::vector<BarbMultiset> obs;           // per-node barbs with multiplicity
  std::vector<BarbMultiset> weak_obs;      // max multiplicities over reach
  std::vector<std::string> keys;
  std::vector<std::string> barb_strings;
  std::vector<std::vector<int>> reach;
  int root_a = 0, root_b = 0;
  int offset_b = 0;
};

// obs(x) weakly matched by y: every barb of x, at its multiplicity, appears
// somewhere in y's weak closure.
bool barbs_matched(const BarbMultiset& obs_x, const BarbMultiset& weak_y) {
  for (const auto& [term, count] : obs_x) {
    auto it = weak_y.find(term);
    if (it == weak_y.end() || it->second < count) return false;
  }
  return true;
}

UnionGraph make_union(const Lts& a, const Lts& b) {
  UnionGraph g;
  g.offset_b = static_cast<int>(a.node_count());
  g.edges = a.edges;
  for (const auto& es : b.edges) {
    g.edges.emplace_back();
    for (const auto& e : es) g.edges.back().push_back({e.label, e.target + g.offset_b});
  }
  g.keys = a.node_keys;
  g.keys.insert(g.keys.end(), b.node_keys.begin(), b.node_keys.end());
  for (size_t v = 0; v < a.node_count(); ++v) {
    g.obs.push_back(to_multiset(a.barbs[v]));
    g.barb_strings.push_back(a.barb_key(static_cast<int>(v)));
  }
  for (size_t v = 0; v < b.node_count(); ++v) {
    g.obs.push_back(to_multiset(b.barbs[v]));
    g.barb_strings.push_back(b.barb_key(static_cast<int>(v)));
  }
  g.root_a = a.root;
  g.root_b = b.root + g.offset_b;
  g.reach = weak_closure(g.edges);
  g.weak_obs.resize(g.obs.size());
  for (size_t v = 0; v < g.obs.size(); ++v)
    for (int r : g.reach[v])
      for (const auto& [term, count] : g.obs[r]) {
        int& cur = g.weak_obs[v][term];
        cur = std::max(cur, count);
      }
  return g;
}

std::string weak_obs_key(const BarbMultiset& m) {
  std::string out;
  for (const auto& [term, count] : m) out += term + "#" + std::to_string(count) + ";";
  return out;
}

// Bisimilar nodes share weak-barb closures, so those closures seed the
// partition; weak-move signature splitting refines it. Related nodes then
// satisfy the strong-barb clause for free: obs(x) is contained in the shared
// weak closure.
std::vector<int> refine_partition(const UnionGraph& g) {
  size_t n = g.edges.size();
  std::vector<int> block(n);
  {
    std::map<std::string, int> by_weak_barb;
    for (size_t v = 0; v < n; ++v)
      block[v] =
          by_weak_barb.emplace(weak_obs_key(g.weak_obs[v]), static_cast<int>(by_weak_barb.size()))
              .first->second;
  }
  while (true) {
    std::map<std::pair<int, std::vector<int>>, int> sig_ids;
    std::vector<int> next(n);
    for (size_t v = 0; v < n; ++v) {
      std::vector<int> sig;
      sig.reserve(g.reach[v].size());
      for (int m : g.reach[v]) sig.push_back(block[m]);
      std::sort(sig.begin(), sig.end());
      sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
      next[v] =
          sig_ids.emplace(std::make_pair(block[v], std::move(sig)), static_cast<int>(sig_ids.size()))
              .first->second;
    }
    if (next == block) return block;
    block = std::move(next);
  }
}

// Definitional pairwise fixpoint used for the witness: rank 0 pairs fail the
// barb clause outright; rank k pairs have a single move whose every weak
// reply lands in a pair of rank < k.
std::vector<std::vector<int>> pair_ranks(const UnionGraph& g) {
  size_t n = g.edges.size();
  constexpr int kRelated = -1;
  std::vector<std::vector<int>> rank(n, std::vector<int>(n, kRelated));
  for (size_t x = 0; x < n; ++x)
    for (size_t y = 0; y < n; ++y)
      if (!barbs_matched(g.obs[x], g.weak_obs[y]) || !barbs_matched(g.obs[y], g.weak_obs[x]))
        rank[x][y] = 0;
  for (int round = 1;; ++round) {
    bool changed = false;
    for (size_t x = 0; x < n; ++x) {
      for (size_t y = 0; y < n; ++y) {
        if (rank[x][y] != kRelated) continue;
        bool broken = false;
        for (const auto& e : g.edges[x]) {
          bool answered = false;
          for (int r : g.reach[y])
            if (rank[e.target][r] == kRelated) answered = true;
          if (!answered) {
            broken = true;
            break;
          }
        }
        if (!broken)
          for (const auto& e : g.edges[y]) {
            bool answered = false;
            for (int r : g.reach[x])
              if (rank[r][e.target] == kRelated) answered = true;
            if (!answered) {
              broken = true;
              break;
            }
          }
        if (broken) {
          rank[x][y] = round;
          changed = true;
        }
      }
    }
    if (!changed) return rank;
  }
}

std::vector<WitnessStep> build_witness(const UnionGraph& g,
                                       const std::vector<std::vector<int>>& rank) {
  std::vector<WitnessStep> out;
  int x = g.root_a, y = g.root_b;
  for (int guard = 0; guard < 1024; ++guard) {
    if (rank[x][y] == 0) break;  // barb clause fails right here
    int best_rank = -1;
    char best_side = 'A';
    RuleLabel best_label = RuleLabel::Query;
    int best_to = -1, best_reply = -1;
    auto consider = [&](char side, int mover, int other) {
      for (const auto& e : g.edges[mover]) {
        int worst = -1;
        int worst_reply = other;
        bool answered = false;
        for (int r : g.reach[other]) {
          int pr = side == 'A' ? rank[e.target][r] : rank[r][e.target];
          if (pr == -1) {
            answered = true;
            break;
          }
          if (pr > worst) {
            worst = pr;
            worst_reply = r;
          }
        }
        if (answered) continue;
        if (best_rank == -1 || worst < best_rank) {
          best_rank = worst;
          best_side = side;
          best_label = e.label;
          best_to = e.target;
          best_reply = worst_reply;
        }
      }
    };
    consider('A', x, y);
    consider('B', y, x);
    if (best_to == -1) break;
    if (best_side == 'A') {
      x = best_to;
      y = best_reply;
    } else {
      y = best_to;
      x = best_reply;
    }
    WitnessStep step;
    step.side = best_side;
    step.label = best_label;
    step.state_a = g.keys[x];
    step.state_b = g.keys[y];
    step.barbs_a = g.barb_strings[x];
    step.barbs_b = g.barb_strings[y];
    out.push_back(std::move(step));
  }
  WitnessStep final_step;
  final_step.side = '=';
  final_step.state_a = g.keys[x];
  final_step.state_b = g.keys[y];
  final_step.barbs_a = g.barb_strings[x];
  final_step.barbs_b = g.barb_strings[y];
  out.push_back(std::move(final_step));
  return out;
}

}  // namespace

BisimResult weak_bisim_lts(const Lts& a, const Lts& b) {
  BisimResult res;
  if (a.truncated || b.truncated) {
    // A refutation is sound only against a completely explored side: its
    // weak-barb closure cannot grow any further.
    UnionGraph g = make_union(a, b);
    bool a_refutes = !b.truncated && !barbs_matched(g.obs[g.root_a], g.weak_obs[g.root_b]);
    bool b_refutes = !a.truncated && !barbs_matched(g.obs[g.root_b], g.weak_obs[g.root_a]);
    if (a_refutes || b_refutes) {
      res.verdict = BisimVerdict::Distinguished;
      WitnessStep step;
      step.side = '=';
      step.state_a = a.node_keys[a.root];
      step.state_b = b.node_keys[b.root];
      step.barbs_a = a.barb_key(a.root);
      step.barbs_b = b.barb_key(b.root);
      res.witness.push_back(std::move(step));
      res.detail = "root barbs cannot be matched";
      return res;
    }
    res.verdict = BisimVerdict::Inconclusive;
    res.detail = "exploration truncated";
    return res;
  }
  UnionGraph g = make_union(a, b);
  std::vector<int> block = refine_partition(g);
  if (block[g.root_a] == block[g.root_b]) {
    res.verdict = BisimVerdict::Bisimilar;
    return res;
  }
  res.verdict = BisimVerdict::Distinguished;
  res.witness = build_witness(g, pair_ranks(g));
  res.detail = "roots separated by partition refinement";
  return res;
}

BisimResult weak_bisim(const State& a, const State& b, const ExploreBounds& bounds) {
  return weak_bisim_lts(explore(a, bounds), explore(b, bounds));
}

}  // namespace metta
