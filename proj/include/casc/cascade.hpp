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

#include <vector>

#include "casc/circuit.hpp"

namespace casc {

/**
 * Staircase of singly controlled single-qubit gates. Gate j acts on qubit
 * j+1 controlled by qubit j, so m gates occupy m+1 wires; gate 1 fires first.
 */
struct MNCascade {
  std::vector<Matrix> gates;  // 2x2, unitary

  int num_gates() const { return int(gates.size()); }
  int num_qubits() const { return num_gates() + 1; }
  void validate() const;
};

/**
 * Staircase of closed-open controlled multi-qubit blocks. Block j applies U0
 * or U1 on its body depending on the previous block's last wire; bodies may
 * have different sizes when produced by grouping (the final group of an
 * uneven split is shorter).
 */
struct ControlCascade {
  int k = 0;  // nominal body size in qubits
  std::vector<std::pair<Matrix, Matrix>> blocks;  // (U0, U1)

  int num_blocks() const { return int(blocks.size()); }
  int body_qubits(int block) const { return log2_exact(blocks[std::size_t(block)].first.rows()); }
  int num_qubits() const;
  void validate() const;
};

/** Valley layers, innermost first; layer sizes may differ. */
struct ValleySpec {
  std::vector<Matrix> layers;
  void validate() const;
};

/** One gate per block, in cascade order. */
Circuit lower_naive(const MNCascade& c);
Circuit lower_naive(const ControlCascade& c);

/**
 * Groups consecutive runs of ell gates into multiplexer blocks: V1 is the
 * run with its first gate applied unconditionally, V0 the run with the first
 * gate omitted. The last block may be shorter.
 */
ControlCascade group(const MNCascade& c, int ell);

/** Test helper: recovers the original gates from a grouped cascade. */
std::vector<Matrix> ungroup(const ControlCascade& grouped);

/**
 * The palindromic circuit ctrl-U(l)..ctrl-U(2), U(1), ctrl-U(2)..ctrl-U(l)
 * with layer j controlled by the top wire of the layer below; layer 1 sits
 * on the bottom wires uncontrolled.
 */
Circuit build_valley(const ValleySpec& v);

/** Dense matrix of the same valley (used by stub computations). */
Matrix dense_valley(const ValleySpec& v);

/** Seeded generators. */
MNCascade mn_random(int m, std::uint64_t seed);
MNCascade mn_hadamard(int m);
ControlCascade cascade_random(int k, int m, std::uint64_t seed);

}  // namespace casc
