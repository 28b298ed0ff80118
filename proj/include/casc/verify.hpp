// Copyright 2025-2026 The casc developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "casc/circuit.hpp"

namespace casc {

struct EquivalenceResult {
  enum Mode { Exact, Sampled } mode = Exact;
  double distance = 0.0;
  int trials = 0;
  double ancilla_residual = 0.0;
  std::uint64_t seed = 0;
};

/**
 * Operator-norm distance of the data-subspace blocks of two circuits, with
 * ancillae of either side contracted against |0>. Exact equality is global
 * phase sensitive; pass phase_insensitive for a debugging comparison that
 * aligns the two blocks' leading phases first.
 */
EquivalenceResult check_exact(const Circuit& a, const Circuit& b, bool phase_insensitive = false);

/** Seeded random-state trials; distance is the largest data-state deviation. */
EquivalenceResult check_sampled(const Circuit& a, const Circuit& b, int trials,
                                std::uint64_t seed);

/** The data-subspace block of the circuit's unitary, ancillae at |0>. */
Matrix data_block(const Circuit& c, double* residual = nullptr);

}  // namespace casc
