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
#include <bit>
#include <deque>
#include <map>

#include "casc/circuit.hpp"

namespace casc {

namespace {

bool is_identity_matrix(const Matrix& m, double tol) {
  return (m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

Matrix rz_matrix(double lambda) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = std::exp(Complex(0, -lambda / 2));
  m(1, 1) = std::exp(Complex(0, lambda / 2));
  return m;
}

Matrix ry_matrix(double theta) {
  Matrix m(2, 2);
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  m << Complex(c, 0), Complex(-s, 0), Complex(s, 0), Complex(c, 0);
  return m;
}

Matrix cnot_matrix() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = 1;
  m(2, 3) = m(3, 2) = 1;
  return m;
}

struct Zyz {
  double alpha, beta, gamma, delta;
};

Zyz zyz_decompose(const Matrix& u) {
  const Complex det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
  const double alpha = std::arg(det) / 2;
  const Matrix v = std::exp(Complex(0, -alpha)) * u;
  const double gamma = 2.0 * std::atan2(std::abs(v(1, 0)), std::abs(v(0, 0)));
  double sum = 0.0, diff = 0.0;  // beta+delta, beta-delta
  if (std::abs(v(0, 0)) > 1e-13) sum = -2.0 * std::arg(v(0, 0));
  if (std::abs(v(1, 0)) > 1e-13) diff = 2.0 * std::arg(v(1, 0));
  if (std::abs(v(0, 0)) <= 1e-13) sum = 0.0;
  if (std::abs(v(1, 0)) <= 1e-13) diff = 0.0;
  return {alpha, (sum + diff) / 2, gamma, (sum - diff) / 2};
}

class Lowerer {
 public:
  explicit Lowerer(const Circuit& src) : src_(src) {
    out_.num_data_qubits = src.num_data_qubits;
    out_.num_ancilla = src.num_ancilla;
    out_.connectivity = src.connectivity;
  }

  Circuit run() {
    for (const Gate& g : src_.gates) dispatch(g);
    fuse_single_qubit_runs();
    if (out_.connectivity.type == Connectivity::Grid2D) fix_adjacency();
    return std::move(out_);
  }

 private:
  void emit(Gate g) { out_.add(std::move(g)); }

  // Adjacent one-qubit gates on the same wire multiply into one.
  void fuse_single_qubit_runs() {
    std::vector<Gate> fused;
    std::vector<std::ptrdiff_t> pending(std::size_t(out_.total_qubits()), -1);
    for (Gate& g : out_.gates) {
      if (g.kind == GateKind::OneQubit) {
        const int w = g.targets[0];
        if (pending[std::size_t(w)] >= 0) {
          Gate& prev = fused[std::size_t(pending[std::size_t(w)])];
          prev.matrix = g.matrix * prev.matrix;
          continue;
        }
        pending[std::size_t(w)] = std::ptrdiff_t(fused.size());
        fused.push_back(std::move(g));
        continue;
      }
      if (g.kind != GateKind::GlobalPhase)
        for (int w : g.wires()) pending[std::size_t(w)] = -1;
      fused.push_back(std::move(g));
    }
    out_.gates = std::move(fused);
  }

  void dispatch(const Gate& g) {
    switch (g.kind) {
      case GateKind::OneQubit:
        if (!is_identity_matrix(g.matrix, policy().identity_skip)) emit(g);
        return;
      case GateKind::TwoQubit:
        if (!is_identity_matrix(g.matrix, policy().identity_skip)) emit(g);
        return;
      case GateKind::Swap:
      case GateKind::GlobalPhase:
        emit(g);
        return;
      case GateKind::Diagonal:
        lower_diagonal(g.targets, g.phases);
        return;
      case GateKind::Controlled: {
        const std::vector<int> ws = g.wires();
        if (ws.size() <= 2) {
          emit_small(ws, g.local_matrix());
          return;
        }
        std::vector<Matrix> cases(std::size_t(1) << g.controls.size(),
                                  Matrix::Identity(g.matrix.rows(), g.matrix.cols()));
        Eigen::Index fire = 0;
        for (std::size_t i = 0; i < g.controls.size(); ++i)
          if (g.controls[i].second) fire |= Eigen::Index(1) << (g.controls.size() - 1 - i);
        cases[std::size_t(fire)] = g.matrix;
        std::vector<int> ctrls;
        for (auto& [w, pol] : g.controls) ctrls.push_back(w);
        lower_mux(ctrls, cases, g.targets);
        return;
      }
      case GateKind::Multiplexer: {
        const std::vector<int> ws = g.wires();
        if (ws.size() <= 2) {
          emit_small(ws, g.local_matrix());
          return;
        }
        lower_mux(g.ctrl_wires, g.cases, g.targets);
        return;
      }
    }
  }

  void emit_small(const std::vector<int>& ws, const Matrix& local) {
    if (is_identity_matrix(local, policy().identity_skip)) return;
    if (ws.empty()) {
      emit(Gate::global_phase(std::arg(local(0, 0))));
    } else if (ws.size() == 1) {
      emit(Gate::one_qubit(ws[0], local));
    } else {
      emit(Gate::two_qubit(ws[0], ws[1], local));
    }
  }

  // Gray-code multiplexed rotation; axis 'z' or 'y'.
  void mux_rotation(char axis, const std::vector<int>& ctrls, int target,
                    const std::vector<double>& theta) {
    const std::size_t n = ctrls.size();
    const std::size_t cd = std::size_t(1) << n;
    if (n == 0) {
      const Matrix m = axis == 'z' ? rz_matrix(theta[0]) : ry_matrix(theta[0]);
      if (!is_identity_matrix(m, policy().identity_skip)) emit(Gate::one_qubit(target, m));
      return;
    }
    std::vector<double> phi(cd, 0.0);
    for (std::size_t i = 0; i < cd; ++i) {
      const std::size_t gi = i ^ (i >> 1);
      double acc = 0.0;
      for (std::size_t x = 0; x < cd; ++x)
        acc += theta[x] * (std::popcount(x & gi) % 2 ? -1.0 : 1.0);
      phi[i] = acc / double(cd);
    }
    double biggest = 0.0;
    for (double p : phi) biggest = std::max(biggest, std::abs(p));
    if (biggest <= policy().identity_skip) return;  // the full Gray cycle of CNOTs is the identity
    for (std::size_t i = 0; i < cd; ++i) {
      const Matrix m = axis == 'z' ? rz_matrix(phi[i]) : ry_matrix(phi[i]);
      if (!is_identity_matrix(m, policy().identity_skip)) emit(Gate::one_qubit(target, m));
      const std::size_t cur = i ^ (i >> 1);
      const std::size_t nxt = i + 1 < cd ? (i + 1) ^ ((i + 1) >> 1) : 0;
      std::size_t changed = cur ^ nxt;
      int bit = 0;
      while ((changed >> bit) != 1) ++bit;
      const int ctrl = ctrls[n - 1 - std::size_t(bit)];
      emit(Gate::two_qubit(ctrl, target, cnot_matrix()));
    }
  }

  void lower_diagonal(const std::vector<int>& targets, const CVector& phases) {
    bool trivial = true;
    for (Eigen::Index i = 0; i < phases.size(); ++i)
      if (std::abs(phases(i) - Complex(1, 0)) > policy().identity_skip) trivial = false;
    if (trivial) return;
    if (targets.empty()) {
      emit(Gate::global_phase(std::arg(phases(0))));
      return;
    }
    if (targets.size() == 1) {
      Matrix m = Matrix::Zero(2, 2);
      m(0, 0) = phases(0);
      m(1, 1) = phases(1);
      emit(Gate::one_qubit(targets[0], m));
      return;
    }
    // Peel the last wire into a multiplexed Rz; recurse on the rest.
    const std::size_t half = std::size_t(phases.size() / 2);
    std::vector<double> lambda(half);
    CVector rest = CVector::Zero(static_cast<Eigen::Index>(half));
    for (std::size_t x = 0; x < half; ++x) {
      const Complex d0 = phases(Eigen::Index(2 * x)), d1 = phases(Eigen::Index(2 * x + 1));
      lambda[x] = std::arg(d1 * std::conj(d0));
      rest(Eigen::Index(x)) = d0 * std::exp(Complex(0, lambda[x] / 2));
      rest(Eigen::Index(x)) /= std::abs(rest(Eigen::Index(x)));
    }
    std::vector<int> upper(targets.begin(), targets.end() - 1);
    mux_rotation('z', upper, targets.back(), lambda);
    lower_diagonal(upper, rest);
  }

  void lower_mux(const std::vector<int>& ctrls, const std::vector<Matrix>& cases,
                 const std::vector<int>& targets) {
    bool all_id = true;
    for (const Matrix& m : cases)
      if (!is_identity_matrix(m, policy().identity_skip)) all_id = false;
    if (all_id) return;
    if (ctrls.empty()) {
      synth_unitary(targets, cases[0]);
      return;
    }
    if (targets.size() == 1) {
      lower_mux_su2(ctrls, cases, targets[0]);
      return;
    }
    // Strip the first control with the eigenvalue demultiplexer.
    const std::size_t rest = cases.size() / 2;
    std::vector<Matrix> vs(rest), wsx(rest);
    const Eigen::Index td = cases[0].rows();
    CVector diag_phases(Eigen::Index(2 * rest) * td);
    for (std::size_t y = 0; y < rest; ++y) {
      const Matrix& a0 = cases[y];
      const Matrix& a1 = cases[rest + y];
      const UnitaryEig eig = unitary_eig(a0 * a1.adjoint());
      CVector e(td);
      for (Eigen::Index j = 0; j < td; ++j)
        e(j) = std::exp(Complex(0, std::arg(eig.phases(j)) / 2));
      vs[y] = eig.v;
      wsx[y] = e.conjugate().asDiagonal() * eig.v.adjoint() * a0;
      for (Eigen::Index j = 0; j < td; ++j) {
        diag_phases(Eigen::Index(y) * td + j) = e(j);                            // ctrl = 0
        diag_phases(Eigen::Index(rest + y) * td + j) = std::conj(e(j));          // ctrl = 1
      }
    }
    std::vector<int> sub(ctrls.begin() + 1, ctrls.end());
    std::vector<int> diag_wires;
    diag_wires.push_back(ctrls[0]);
    diag_wires.insert(diag_wires.end(), sub.begin(), sub.end());
    diag_wires.insert(diag_wires.end(), targets.begin(), targets.end());
    lower_mux(sub, wsx, targets);
    lower_diagonal(diag_wires, diag_phases);
    lower_mux(sub, vs, targets);
  }

  void lower_mux_su2(const std::vector<int>& ctrls, const std::vector<Matrix>& cases,
                     int target) {
    const std::size_t cd = cases.size();
    std::vector<double> alpha(cd), beta(cd), gamma(cd), delta(cd);
    for (std::size_t x = 0; x < cd; ++x) {
      const Zyz z = zyz_decompose(cases[x]);
      alpha[x] = z.alpha;
      beta[x] = z.beta;
      gamma[x] = z.gamma;
      delta[x] = z.delta;
    }
    mux_rotation('z', ctrls, target, delta);
    mux_rotation('y', ctrls, target, gamma);
    mux_rotation('z', ctrls, target, beta);
    CVector ph = CVector::Zero(static_cast<Eigen::Index>(cd));
    for (std::size_t x = 0; x < cd; ++x) ph(Eigen::Index(x)) = std::exp(Complex(0, alpha[x]));
    lower_diagonal(ctrls, ph);
  }

  void synth_unitary(const std::vector<int>& wires, const Matrix& u) {
    if (is_identity_matrix(u, policy().identity_skip)) return;
    if (wires.empty()) {
      emit(Gate::global_phase(std::arg(u(0, 0))));
      return;
    }
    if (wires.size() == 1) {
      emit(Gate::one_qubit(wires[0], u));
      return;
    }
    const CSDecomposition cs = cs_decompose(u);
    const std::vector<int> rest(wires.begin() + 1, wires.end());
    lower_mux({wires[0]}, {cs.t0, cs.t1}, rest);
    std::vector<double> theta(static_cast<std::size_t>(cs.half_dim()));
    for (Eigen::Index j = 0; j < cs.half_dim(); ++j)
      theta[std::size_t(j)] = -2.0 * std::atan2(cs.sigma2(j), cs.sigma1(j));
    mux_rotation('y', rest, wires[0], theta);
    lower_mux({wires[0]}, {cs.s0, cs.s1}, rest);
  }

  // Second pass under Grid2D: relay non-adjacent two-qubit gates with swaps.
  void fix_adjacency() {
    std::vector<Gate> fixed;
    std::map<int, int> cell_wire;
    for (int w = 0; w < out_.total_qubits(); ++w)
      cell_wire[out_.connectivity.cell_of(w)] = w;
    const int width = out_.connectivity.width, height = out_.connectivity.height;
    auto neighbors = [&](int cell) {
      std::vector<int> ns;
      const int x = cell % width, y = cell / width;
      if (x > 0) ns.push_back(cell - 1);
      if (x + 1 < width) ns.push_back(cell + 1);
      if (y > 0) ns.push_back(cell - width);
      if (y + 1 < height) ns.push_back(cell + width);
      return ns;
    };
    for (const Gate& g : out_.gates) {
      if (g.kind == GateKind::GlobalPhase || g.kind == GateKind::OneQubit) {
        fixed.push_back(g);
        continue;
      }
      const std::vector<int> ws = g.wires();
      if (ws.size() != 2) throw ValidationError("grid lowering produced a wide gate");
      if (out_.connectivity.adjacent(ws[0], ws[1])) {
        fixed.push_back(g);
        continue;
      }
      // BFS from a's cell to b's cell over occupied cells.
      const int start = out_.connectivity.cell_of(ws[0]);
      const int goal = out_.connectivity.cell_of(ws[1]);
      std::map<int, int> prev;
      std::deque<int> queue{start};
      prev[start] = start;
      while (!queue.empty() && !prev.count(goal)) {
        const int cur = queue.front();
        queue.pop_front();
        for (int nb : neighbors(cur)) {
          if (prev.count(nb) || !cell_wire.count(nb)) continue;
          prev[nb] = cur;
          queue.push_back(nb);
        }
      }
      if (!prev.count(goal)) throw ValidationError("grid lowering: no occupied path");
      std::vector<int> path{goal};
      while (path.back() != start) path.push_back(prev[path.back()]);
      std::reverse(path.begin(), path.end());  // start ... goal
      // Walk a's value to the cell adjacent to goal, apply, walk back.
      std::vector<std::pair<int, int>> swaps;
      for (std::size_t i = 0; i + 2 < path.size(); ++i)
        swaps.emplace_back(cell_wire[path[i]], cell_wire[path[i + 1]]);
      for (auto& [a, b] : swaps) fixed.push_back(Gate::swap(a, b));
      Gate moved = g;
      const int relay_wire = swaps.empty() ? ws[0] : cell_wire[path[path.size() - 2]];
      for (int& w : moved.targets)
        if (w == ws[0]) w = relay_wire;
      for (auto& [w, pol] : moved.controls)
        if (w == ws[0]) w = relay_wire;
      fixed.push_back(std::move(moved));
      for (auto it = swaps.rbegin(); it != swaps.rend(); ++it)
        fixed.push_back(Gate::swap(it->first, it->second));
    }
    out_.gates = std::move(fixed);
  }

  const Circuit& src_;
  Circuit out_;
};

}  // namespace

Circuit lower_to_basis(const Circuit& c) {
  Lowerer l(c);
  return l.run();
}

}  // namespace casc
