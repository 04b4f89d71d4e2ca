// metta-machine: an abstract machine for MeTTa states
// Copyright 2026 The metta-machine Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "metta/machine.hpp"
#include "metta/resources.hpp"

namespace metta {

/// One trace record per step as a single JSON line with fixed field order:
/// step, rule, register, host, context (hole printed as a box), subst, next.
/// Costed records append cost, payer, ledger.
std::string trace_line(const Transition& t, size_t step_index);
std::string trace_line(const CostedTransition& t, size_t step_index);

}  // namespace metta
