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

#include <optional>

#include "casc/cascade.hpp"

namespace casc {

/**
 * Pieces of the precomputation rewrite of a controlled multiplexer
 *   diag(U0, U1) = R · Φ†(bottom) · ctrl-D · Φ(bottom) · (I ⊗ P)
 * where P acts on the body wires, D is diagonal over (ctrl, body), and R is
 * a two-control multiplexer on the middle body wires. In the specialized
 * single-qubit-cascade form the middle collapses to ctrl-Q with Q on the
 * bottom wire and no Φ pair.
 */
struct PrecomputeParts {
  Matrix p;                     // preprocessing on the body wires
  CVector d;                    // 2^k diagonal phases of the reversed D
  std::optional<Matrix> q;      // 2x2; present in the specialized form
  std::vector<Matrix> r_cases;  // 4 cases indexed by (ctrl, bottom)
  int body_qubits = 0;
};

PrecomputeParts precompute_identity(const Matrix& u0, const Matrix& u1);

/** Circuit on body_qubits+1 wires realizing the parts (wire 0 = control). */
Circuit assemble_parts(const PrecomputeParts& parts);

/**
 * Constant sine of a single-qubit-layer valley: the product of the layers'
 * off-diagonal magnitudes, replicated across the valley's half dimension.
 */
RVector valley_stub_product(const ValleySpec& v);

/** Basic two-layer valley ctrl-U† · (I ⊗ V) · ctrl-U, control on V's top wire. */
Matrix dense_basic_valley(const Matrix& u, const Matrix& v);

/** Explicit CS decomposition of the basic valley from its layers' parts. */
CSDecomposition valley_cs(const CSDecomposition& u_parts, const CSDecomposition& v_parts);

/** Specialized identity for runs of single-qubit gates (yields the 2x2 Q). */
PrecomputeParts mn_precompute(const std::vector<Matrix>& gates);

struct RefinedStubFactorResult {
  CVector d_prime;        // diagonal on d-ell qubits
  PrecomputeParts parts;  // aligned to the tensor stub arrangement
};

/**
 * Precomputation of a whole cascade as one multiplexer, with the diagonal
 * exposed as an (ell-1)-fold replication of a smaller diagonal.
 */
RefinedStubFactorResult refined_stub_factor(const ControlCascade& c);

}  // namespace casc
