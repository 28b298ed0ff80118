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
#include <utility>
#include <vector>

#include "casc/numerics.hpp"

namespace casc {

enum class GateKind {
  OneQubit,
  TwoQubit,
  Controlled,
  Multiplexer,
  Diagonal,
  Swap,
  GlobalPhase,
};

/**
 * One gate of the IR. Gates are created through the factory functions below,
 * which validate matrix shapes and unitarity. Wire lists are ordered: the
 * first target is the most significant bit of the gate's own matrix.
 */
struct Gate {
  GateKind kind;
  std::vector<std::pair<int, bool>> controls;  // (wire, closed?) for Controlled
  std::vector<int> ctrl_wires;                 // for Multiplexer / Diagonal embeds
  std::vector<int> targets;
  Matrix matrix;               // OneQubit / TwoQubit / Controlled body
  std::vector<Matrix> cases;   // Multiplexer, indexed by control bit pattern
  CVector phases;              // Diagonal, unit modulus
  double angle = 0.0;          // GlobalPhase, radians

  static Gate one_qubit(int q, const Matrix& m);
  static Gate two_qubit(int q_hi, int q_lo, const Matrix& m);
  static Gate controlled(std::vector<std::pair<int, bool>> controls, const Matrix& body,
                         std::vector<int> targets);
  static Gate multiplexer(std::vector<int> controls, std::vector<Matrix> cases,
                          std::vector<int> targets);
  static Gate diagonal(std::vector<int> targets, const CVector& phases);
  static Gate swap(int a, int b);
  static Gate global_phase(double angle);

  /** All wires the gate touches, controls first. */
  std::vector<int> wires() const;
  /** Dense matrix over wires() in listed order (controls as most significant). */
  Matrix local_matrix() const;
  bool is_basis() const;
};

struct Connectivity {
  enum Type { AllToAll, Grid2D } type = AllToAll;
  int width = 0, height = 0;
  std::vector<int> placement;  // wire -> cell (row-major), Grid2D only

  static Connectivity all_to_all() { return {}; }
  static Connectivity grid(int w, int h, std::vector<int> placement);
  int cell_of(int wire) const { return placement.at(std::size_t(wire)); }
  bool adjacent(int wire_a, int wire_b) const;
  int grid_distance(int wire_a, int wire_b) const;
};

/**
 * Gate list over data + ancilla qubits. Ancillae occupy the high wire
 * indices, enter as |0> and every compiled circuit returns them to |0>.
 * Gates are listed in execution order.
 */
struct Circuit {
  int num_data_qubits = 0;
  int num_ancilla = 0;
  std::vector<Gate> gates;
  Connectivity connectivity;

  int total_qubits() const { return num_data_qubits + num_ancilla; }
  void add(Gate g);
  void validate_gate(const Gate& g) const;
};

struct CompilationReport {
  long long depth_basis = 0;
  long long gate_count = 0;
  long long ancilla_count = 0;
  double apriori_error = 0.0;
  std::optional<double> measured_error;
};

/** Dense unitary of the circuit; total qubits ≤ 13. */
Matrix unitary_of(const Circuit& c);

/** Applies the circuit to a full statevector (2^total entries). */
CVector apply_state(const Circuit& c, const CVector& psi);

/** Result of running a circuit on data ⊗ |0...0> with ancillae contracted. */
struct DataStateResult {
  CVector data_state;      // (I ⊗ <0|) · final state
  double ancilla_residual; // norm of the out-of-|0> ancilla component
};

/**
 * Applies the circuit to ψ_data ⊗ |0...0>. Ancillae are simulated with
 * classical constant propagation and only promoted to amplitudes when a gate
 * genuinely entangles them, so circuits with many bookkeeping ancillae stay
 * cheap. Throws GuardError past 26 promoted qubits.
 */
DataStateResult apply_data_state(const Circuit& c, const CVector& psi_data);

/** ordered concatenation: all of a, then all of b (register shapes must match) */
Circuit concat(const Circuit& a, const Circuit& b);

/**
 * Rewrites every gate into {OneQubit, TwoQubit, Swap, GlobalPhase}. Under
 * Grid2D connectivity the result touches only adjacent cells.
 */
Circuit lower_to_basis(const Circuit& c);

/** Greedy layer count over basis gates; throws on block gates. */
long long depth(const Circuit& c);

long long basis_gate_count(const Circuit& c);

/** Returns the non-adjacent two-qubit gates of a lowered Grid2D circuit. */
std::vector<std::size_t> grid_adjacency_violations(const Circuit& c);

/** Test helper: embeds a gate on the full register (dense, small circuits). */
Matrix embed_gate(const Gate& g, int total_qubits);

}  // namespace casc
