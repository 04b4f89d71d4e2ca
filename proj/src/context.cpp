// metta-machine: an abstract machine for MeTTa states
// Copyright 2026 The metta-machine Authors.
// SPDX-License-Identifier: Apache-2.0

#include "metta/context.hpp"

namespace metta {

bool ContextStep::operator==(const ContextStep& o) const {
  return kind == o.kind && left == o.left && right == o.right && siblings == o.siblings;
}

Term Context::plug(const Term& t) const {
  Term out = t;
  for (auto it = path_.rbegin(); it != path_.rend(); ++it) {
    if (it->kind == TermKind::List) {
      std::vector<Term> items;
      items.reserve(it->left.size() + 1 + it->right.size());
      items.insert(items.end(), it->left.begin(), it->left.end());
      items.push_back(out);
      items.insert(items.end(), it->right.begin(), it->right.end());
      out = Term::list(std::move(items));
    } else {
      std::vector<Term> items = it->siblings.items();
      items.push_back(out);
      out = Term::bag(std::move(items));
    }
  }
  return out;
}

Context Context::extended(ContextStep step) const {
  std::vector<ContextStep> path = path_;
  path.push_back(std::move(step));
  return Context(std::move(path));
}

static void decompose_into(const Term& t, const Context& here,
                           std::vector<std::pair<Context, Term>>& out) {
  out.emplace_back(here, t);
  switch (t.kind()) {
    case TermKind::List: {
      const auto& items = t.items();
      for (size_t i = 0; i < items.size(); ++i) {
        ContextStep step;
        step.kind = TermKind::List;
        step.left.assign(items.begin(), items.begin() + i);
        step.right.assign(items.begin() + i + 1, items.end());
        decompose_into(items[i], here.extended(std::move(step)), out);
      }
      break;
    }
    case TermKind::Bag: {
      const auto& items = t.items();
      for (size_t i = 0; i < items.size(); ++i) {
        ContextStep step;
        step.kind = TermKind::Bag;
        std::vector<Term> sib;
        sib.reserve(items.size() - 1);
        sib.insert(sib.end(), items.begin(), items.begin() + i);
        sib.insert(sib.end(), items.begin() + i + 1, items.end());
        step.siblings = TermBag::of(std::move(sib));
        decompose_into(items[i], here.extended(std::move(step)), out);
      }
      break;
    }
    default: break;  // atoms, units, comprehensions: only the trivial pair
  }
}

std::vector<std::pair<Context, Term>> decompositions(const Term& t) {
  std::vector<std::pair<Context, Term>> out;
  decompose_into(t, Context(), out);
  return out;
}

}  // namespace metta
