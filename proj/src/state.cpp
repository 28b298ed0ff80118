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

#include <algorithm>
#include <cmath>

#include "casc/circuit.hpp"

namespace casc {

namespace {

constexpr int kMaxPromoted = 26;

/**
 * Statevector with classical constant propagation. Wires start out either as
 * amplitudes (data) or as classical bits (ancillae in |0>); gates that only
 * permute computational states keep classical wires classical, anything else
 * promotes the wires it touches. Swaps between a classical and a quantum wire
 * are plain relabelings.
 */
class HybridState {
 public:
  HybridState(int total_wires) : axis_(std::size_t(total_wires), -1),
                                 bit_(std::size_t(total_wires), 0) {}

  void init_quantum_block(const CVector& psi, int first_wire, int count) {
    // Wire w gets axis (count-1-w) so that amp == psi verbatim.
    amp_ = psi;
    axes_ = count;
    for (int w = 0; w < count; ++w) axis_[std::size_t(first_wire + w)] = count - 1 - w;
  }

  void init_all_classical_zero() { amp_ = CVector::Constant(1, 1.0); axes_ = 0; }

  bool classical(int w) const { return axis_[std::size_t(w)] < 0; }

  void apply(const Gate& g);

  /** Dense state over the first `nd` wires; mass outside anc=|0> reported. */
  DataStateResult read_data(int nd, int total) const;
  CVector read_full(int total) const;

 private:
  void promote(int w) {
    if (!classical(w)) return;
    if (axes_ + 1 > kMaxPromoted) throw GuardError("statevector: more than 26 live qubits");
    CVector next(amp_.size() * 2);
    if (bit_[std::size_t(w)] == 0) {
      next.head(amp_.size()) = amp_;
      next.tail(amp_.size()).setZero();
    } else {
      next.head(amp_.size()).setZero();
      next.tail(amp_.size()) = amp_;
    }
    // New axis is the highest bit of the index.
    axis_[std::size_t(w)] = axes_;
    ++axes_;
    amp_ = std::move(next);
  }

  void apply_dense(const std::vector<int>& wires, const Matrix& local);
  void apply_diagonal(const std::vector<int>& targets, const CVector& phases);
  bool try_classical_path(const std::vector<int>& wires, const Matrix& local);

  // Returns a promoted wire to a classical bit when its axis carries a pure
  // |0> or |1> factor again (ancilla uncomputation); keeps the live register
  // small across gadget boundaries.
  void try_demote(int w) {
    const int ax = axis_[std::size_t(w)];
    if (ax < 0) return;
    const Eigen::Index stride = Eigen::Index(1) << ax;
    double mass0 = 0.0, mass1 = 0.0;
    for (Eigen::Index i = 0; i < amp_.size(); ++i)
      ((i & stride) ? mass1 : mass0) += std::norm(amp_(i));
    const double total = mass0 + mass1;
    int bit;
    if (mass1 <= 1e-26 * total)
      bit = 0;
    else if (mass0 <= 1e-26 * total)
      bit = 1;
    else
      return;
    CVector next(amp_.size() / 2);
    Eigen::Index w_out = 0;
    for (Eigen::Index i = 0; i < amp_.size(); ++i)
      if (((i & stride) != 0) == (bit != 0)) next(w_out++) = amp_(i);
    amp_ = std::move(next);
    axis_[std::size_t(w)] = -1;
    bit_[std::size_t(w)] = bit;
    for (int other = 0; other < int(axis_.size()); ++other)
      if (axis_[std::size_t(other)] > ax) --axis_[std::size_t(other)];
    --axes_;
  }

  CVector amp_;
  int axes_ = 0;
  std::vector<int> axis_;  // wire -> axis, or -1 when classical
  std::vector<int> bit_;   // classical value
};

bool generalized_permutation(const Matrix& m, std::vector<Eigen::Index>& row_of_col,
                             std::vector<Complex>& phase_of_col) {
  const Eigen::Index n = m.rows();
  row_of_col.assign(std::size_t(n), -1);
  phase_of_col.assign(std::size_t(n), Complex(0, 0));
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index hit = -1;
    for (Eigen::Index r = 0; r < n; ++r) {
      const double a = std::abs(m(r, c));
      if (a > 1e-14) {
        if (hit >= 0) return false;
        if (std::abs(a - 1.0) > 1e-12) return false;
        hit = r;
      }
    }
    if (hit < 0) return false;
    row_of_col[std::size_t(c)] = hit;
    phase_of_col[std::size_t(c)] = m(hit, c);
  }
  return true;
}

void HybridState::apply_dense(const std::vector<int>& wires, const Matrix& local) {
  for (int w : wires) promote(w);
  const int k = int(wires.size());
  const Eigen::Index ld = Eigen::Index(1) << k;
  std::vector<Eigen::Index> stride(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    stride[std::size_t(i)] = Eigen::Index(1) << axis_[std::size_t(wires[std::size_t(i)])];
  Eigen::Index involved = 0;
  for (auto s : stride) involved |= s;
  CVector sub(ld), mixed(ld);
  for (Eigen::Index base = 0; base < amp_.size(); ++base) {
    if (base & involved) continue;
    for (Eigen::Index li = 0; li < ld; ++li) {
      Eigen::Index idx = base;
      for (int i = 0; i < k; ++i)
        if ((li >> (k - 1 - i)) & 1) idx |= stride[std::size_t(i)];
      sub(li) = amp_(idx);
    }
    mixed.noalias() = local * sub;
    for (Eigen::Index li = 0; li < ld; ++li) {
      Eigen::Index idx = base;
      for (int i = 0; i < k; ++i)
        if ((li >> (k - 1 - i)) & 1) idx |= stride[std::size_t(i)];
      amp_(idx) = mixed(li);
    }
  }
}

void HybridState::apply_diagonal(const std::vector<int>& targets, const CVector& phases) {
  // Classical target bits select a slice of the phase table.
  std::vector<int> quantum;
  Eigen::Index fixed = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const int w = targets[i];
    if (classical(w)) {
      if (bit_[std::size_t(w)]) fixed |= Eigen::Index(1) << (targets.size() - 1 - i);
    } else {
      quantum.push_back(int(i));
    }
  }
  if (quantum.empty()) {
    amp_ *= phases(fixed);
    return;
  }
  std::vector<Eigen::Index> stride(quantum.size());
  std::vector<Eigen::Index> weight(quantum.size());
  for (std::size_t i = 0; i < quantum.size(); ++i) {
    const int ti = quantum[i];
    stride[i] = Eigen::Index(1) << axis_[std::size_t(targets[std::size_t(ti)])];
    weight[i] = Eigen::Index(1) << (targets.size() - 1 - std::size_t(ti));
  }
  for (Eigen::Index idx = 0; idx < amp_.size(); ++idx) {
    Eigen::Index p = fixed;
    for (std::size_t i = 0; i < quantum.size(); ++i)
      if (idx & stride[i]) p |= weight[i];
    amp_(idx) *= phases(p);
  }
}

bool HybridState::try_classical_path(const std::vector<int>& wires, const Matrix& local) {
  for (int w : wires)
    if (!classical(w)) return false;
  std::vector<Eigen::Index> row_of_col;
  std::vector<Complex> phase_of_col;
  if (!generalized_permutation(local, row_of_col, phase_of_col)) return false;
  const int k = int(wires.size());
  Eigen::Index in = 0;
  for (int i = 0; i < k; ++i)
    if (bit_[std::size_t(wires[std::size_t(i)])]) in |= Eigen::Index(1) << (k - 1 - i);
  const Eigen::Index out = row_of_col[std::size_t(in)];
  for (int i = 0; i < k; ++i)
    bit_[std::size_t(wires[std::size_t(i)])] = int((out >> (k - 1 - i)) & 1);
  amp_ *= phase_of_col[std::size_t(in)];
  return true;
}

void HybridState::apply(const Gate& g) {
  switch (g.kind) {
    case GateKind::GlobalPhase:
      amp_ *= std::exp(Complex(0, g.angle));
      return;
    case GateKind::Swap: {
      const int a = g.targets[0], b = g.targets[1];
      std::swap(axis_[std::size_t(a)], axis_[std::size_t(b)]);
      std::swap(bit_[std::size_t(a)], bit_[std::size_t(b)]);
      return;
    }
    case GateKind::Diagonal:
      apply_diagonal(g.targets, g.phases);
      return;
    case GateKind::Controlled: {
      // Classical controls either veto the gate or drop out.
      std::vector<std::pair<int, bool>> live;
      for (const auto& [w, closed] : g.controls) {
        if (classical(w)) {
          if ((bit_[std::size_t(w)] != 0) != closed) return;
        } else {
          live.emplace_back(w, closed);
        }
      }
      Gate reduced = Gate::controlled(live, g.matrix, g.targets);
      const std::vector<int> ws = reduced.wires();
      const Matrix local = reduced.local_matrix();
      if (try_classical_path(ws, local)) return;
      apply_dense(ws, local);
      for (int t : g.targets) try_demote(t);
      return;
    }
    case GateKind::Multiplexer: {
      std::vector<int> live;
      std::vector<std::size_t> live_pos;
      Eigen::Index fixed = 0;
      for (std::size_t i = 0; i < g.ctrl_wires.size(); ++i) {
        const int w = g.ctrl_wires[i];
        if (classical(w)) {
          if (bit_[std::size_t(w)]) fixed |= Eigen::Index(1) << (g.ctrl_wires.size() - 1 - i);
        } else {
          live.push_back(w);
          live_pos.push_back(i);
        }
      }
      std::vector<Matrix> sub(std::size_t(1) << live.size());
      for (std::size_t p = 0; p < sub.size(); ++p) {
        Eigen::Index full = fixed;
        for (std::size_t i = 0; i < live.size(); ++i)
          if ((p >> (live.size() - 1 - i)) & 1)
            full |= Eigen::Index(1) << (g.ctrl_wires.size() - 1 - live_pos[i]);
        sub[p] = g.cases[std::size_t(full)];
      }
      Gate reduced = Gate::multiplexer(live, std::move(sub), g.targets);
      const std::vector<int> ws = reduced.wires();
      const Matrix local = reduced.local_matrix();
      if (try_classical_path(ws, local)) return;
      apply_dense(ws, local);
      for (int t : g.targets) try_demote(t);
      return;
    }
    case GateKind::OneQubit:
    case GateKind::TwoQubit: {
      const std::vector<int> ws = g.wires();
      if (try_classical_path(ws, g.matrix)) return;
      apply_dense(ws, g.matrix);
      for (int t : ws) try_demote(t);
      return;
    }
  }
}

DataStateResult HybridState::read_data(int nd, int total) const {
  DataStateResult out;
  out.data_state = CVector::Zero(Eigen::Index(1) << nd);
  for (int w = nd; w < total; ++w) {
    if (classical(w) && bit_[std::size_t(w)] != 0) {
      out.ancilla_residual = amp_.norm();
      return out;
    }
  }
  Eigen::Index anc_mask = 0;
  for (int w = nd; w < total; ++w)
    if (!classical(w)) anc_mask |= Eigen::Index(1) << axis_[std::size_t(w)];
  double residual2 = 0.0;
  for (Eigen::Index i = 0; i < amp_.size(); ++i) {
    if (i & anc_mask) {
      residual2 += std::norm(amp_(i));
      continue;
    }
    Eigen::Index d = 0;
    for (int w = 0; w < nd; ++w) {
      const int ax = axis_[std::size_t(w)];
      int bit;
      if (ax < 0)
        bit = bit_[std::size_t(w)];
      else
        bit = int((i >> ax) & 1);
      if (bit) d |= Eigen::Index(1) << (nd - 1 - w);
    }
    out.data_state(d) += amp_(i);
  }
  out.ancilla_residual = std::sqrt(residual2);
  return out;
}

CVector HybridState::read_full(int total) const {
  CVector out = CVector::Zero(Eigen::Index(1) << total);
  for (Eigen::Index i = 0; i < amp_.size(); ++i) {
    Eigen::Index j = 0;
    for (int w = 0; w < total; ++w) {
      const int ax = axis_[std::size_t(w)];
      const int bit = ax < 0 ? bit_[std::size_t(w)] : int((i >> ax) & 1);
      if (bit) j |= Eigen::Index(1) << (total - 1 - w);
    }
    out(j) += amp_(i);
  }
  return out;
}

}  // namespace

CVector apply_state(const Circuit& c, const CVector& psi) {
  const int q = c.total_qubits();
  if (q > kMaxPromoted) throw GuardError("apply_state: more than 26 qubits");
  if (psi.size() != (Eigen::Index(1) << q))
    throw DimensionError("apply_state: statevector length mismatch");
  HybridState st(q);
  st.init_quantum_block(psi, 0, q);
  for (const Gate& g : c.gates) st.apply(g);
  return st.read_full(q);
}

DataStateResult apply_data_state(const Circuit& c, const CVector& psi_data) {
  if (psi_data.size() != (Eigen::Index(1) << c.num_data_qubits))
    throw DimensionError("apply_data_state: statevector length mismatch");
  HybridState st(c.total_qubits());
  st.init_quantum_block(psi_data, 0, c.num_data_qubits);
  for (const Gate& g : c.gates) st.apply(g);
  return st.read_data(c.num_data_qubits, c.total_qubits());
}

}  // namespace casc
