// metta-machine: an abstract machine for MeTTa states
// Copyright 2026 The metta-machine Authors.
// SPDX-License-Identifier: Apache-2.0

#include "metta/trace.hpp"

#include <json.hpp>

#include "metta/syntax.hpp"

namespace metta {

using json = nlohmann::ordered_json;

namespace {

json subst_json(const std::vector<Substitution>& substs) {
  json arr = json::array();
  for (const auto& s : substs) {
    json one = json::object();
    for (const auto& [var, t] : s.bindings()) one[var] = print_term(t);
    arr.push_back(std::move(one));
  }
  return arr;
}

}  // namespace

std::string trace_line(const Transition& t, size_t step_index) {
  json j;
  j["step"] = step_index;
  j["rule"] = rule_label_name(t.label);
  j["register"] = std::string(1, t.reg);
  j["host"] = print_term(t.host);
  j["context"] = print_context(t.ctx);
  j["subst"] = subst_json(t.substs);
  j["next"] = print_state(t.next);
  return j.dump();
}

std::string trace_line(const CostedTransition& t, size_t step_index) {
  json j;
  j["step"] = step_index;
  j["rule"] = rule_label_name(t.label);
  j["register"] = std::string(1, t.reg);
  j["host"] = print_signed_term(t.host);
  j["context"] = print_context(t.ctx);
  j["subst"] = subst_json(t.substs);
  j["next"] = print_state(t.next);
  j["cost"] = t.cost;
  j["payer"] = "kid:0x" + t.payer.hex();
  json ledger = json::object();
  for (const auto& [kid, eo] : t.ledger_after) ledger["kid:0x" + kid.hex()] = eo;
  j["ledger"] = std::move(ledger);
  return j.dump();
}

}  // namespace metta
