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

#include "casc/verify.hpp"

#include <cmath>

namespace casc {

Matrix data_block(const Circuit& c, double* residual) {
  const int nd = c.num_data_qubits;
  const int na = c.num_ancilla;
  if (nd + na > 13) {
    // column-by-column through the hybrid engine: ancillae start at |0>, so
    // each basis column of the data block is one run
    if (nd > 13) throw GuardError("data_block: more than 13 data qubits");
    const Eigen::Index dim = Eigen::Index(1) << nd;
    Matrix block(dim, dim);
    double worst = 0.0;
    for (Eigen::Index j = 0; j < dim; ++j) {
      CVector e = CVector::Zero(dim);
      e(j) = 1.0;
      DataStateResult r = apply_data_state(c, e);
      block.col(j) = r.data_state;
      worst = std::max(worst, r.ancilla_residual);
    }
    if (residual) *residual = worst;
    return block;
  }
  const Matrix full = unitary_of(c);
  const Eigen::Index dim = Eigen::Index(1) << nd;
  const Eigen::Index stride = Eigen::Index(1) << na;
  Matrix block(dim, dim);
  double worst = 0.0;  // largest column mass escaping the ancilla-|0> slice
  for (Eigen::Index j = 0; j < dim; ++j) {
    double col = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i) block(i, j) = full(i * stride, j * stride);
    for (Eigen::Index r = 0; r < full.rows(); ++r)
      if (r % stride != 0) col += std::norm(full(r, j * stride));
    worst = std::max(worst, col);
  }
  if (residual) *residual = std::sqrt(worst);
  return block;
}

EquivalenceResult check_exact(const Circuit& a, const Circuit& b, bool phase_insensitive) {
  if (a.num_data_qubits != b.num_data_qubits)
    throw DimensionError("check_exact: data register sizes differ");
  EquivalenceResult out;
  out.mode = EquivalenceResult::Exact;
  double res_a = 0.0, res_b = 0.0;
  Matrix ba = data_block(a, &res_a);
  Matrix bb = data_block(b, &res_b);
  out.ancilla_residual = std::max(res_a, res_b);
  if (phase_insensitive) {
    Eigen::Index r = 0, c = 0;
    ba.cwiseAbs().maxCoeff(&r, &c);
    const Complex pa = ba(r, c) / std::abs(ba(r, c));
    const Complex pb = bb(r, c) / std::abs(bb(r, c));
    bb *= pa / pb;
  }
  out.distance = op_norm_distance(ba, bb);
  return out;
}

EquivalenceResult check_sampled(const Circuit& a, const Circuit& b, int trials,
                                std::uint64_t seed) {
  if (a.num_data_qubits != b.num_data_qubits)
    throw DimensionError("check_sampled: data register sizes differ");
  EquivalenceResult out;
  out.mode = EquivalenceResult::Sampled;
  out.trials = trials;
  out.seed = seed;
  Rng rng(seed);
  const Eigen::Index dim = Eigen::Index(1) << a.num_data_qubits;
  for (int t = 0; t < trials; ++t) {
    CVector psi(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
      psi(i) = Complex(rng.next_gaussian(), rng.next_gaussian());
    psi.normalize();
    const DataStateResult ra = apply_data_state(a, psi);
    const DataStateResult rb = apply_data_state(b, psi);
    out.distance = std::max(out.distance, (ra.data_state - rb.data_state).norm());
    out.ancilla_residual =
        std::max({out.ancilla_residual, ra.ancilla_residual, rb.ancilla_residual});
  }
  return out;
}

}  // namespace casc
