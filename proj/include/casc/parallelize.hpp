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

#include "casc/precompute.hpp"

namespace casc {

/**
 * Angle tables, in turns, of a diagonal split into two multiplexer phase
 * gates: diag over (y, t) of (e^{2πi φ_y}, e^{2πi θ_y}).
 */
struct PhaseTable {
  RVector theta, phi;  // 2^(k-1) each
};

PhaseTable phase_tables_of(const CVector& diag_phases);

/** Rebuilds the diagonal from its tables (test hook). */
CVector phase_tables_reassemble(const PhaseTable& t);

struct ApproxBudget {
  double epsilon = 0.0;
  int r = 0;  // bits per angle, ceil(log2(m/eps))
};

struct CompiledCircuit {
  Circuit circuit;          // lowered to basis gates
  Circuit staged;           // block-level circuit before lowering
  CompilationReport report;
};

/** Exact ancilla-free compilation via the precomputation identity. */
CompiledCircuit compile_exact_diagonal(const ControlCascade& c);

/** Exact compilation with one-hot ancilla caches of the diagonal tables. */
CompiledCircuit compile_select_exact(const ControlCascade& c);

/** Approximate compilation with binary angle caches. */
CompiledCircuit compile_load_approx(const ControlCascade& c, double epsilon);

/** Log-depth ancilla-free compilation of a single-qubit staircase. */
CompiledCircuit compile_mn_log_depth(const MNCascade& c, int block_size = 2);

ApproxBudget load_budget(int m, double epsilon);

}  // namespace casc
