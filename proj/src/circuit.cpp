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

#include "casc/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace casc {

namespace {

void require_unitary(const Matrix& m, const char* what) {
  if (!is_unitary(m, policy().unitary_tol))
    throw NonUnitaryError(std::string(what) + ": matrix is not unitary within tolerance");
}

void require_distinct(const std::vector<int>& wires, const char* what) {
  std::set<int> seen;
  for (int w : wires) {
    if (w < 0) throw ValidationError(std::string(what) + ": negative wire index");
    if (!seen.insert(w).second) throw ValidationError(std::string(what) + ": duplicate wire");
  }
}

}  // namespace

Gate Gate::one_qubit(int q, const Matrix& m) {
  if (m.rows() != 2 || m.cols() != 2) throw DimensionError("one_qubit: expected 2x2 matrix");
  require_unitary(m, "one_qubit");
  Gate g;
  g.kind = GateKind::OneQubit;
  g.targets = {q};
  g.matrix = m;
  return g;
}

Gate Gate::two_qubit(int q_hi, int q_lo, const Matrix& m) {
  if (m.rows() != 4 || m.cols() != 4) throw DimensionError("two_qubit: expected 4x4 matrix");
  require_unitary(m, "two_qubit");
  require_distinct({q_hi, q_lo}, "two_qubit");
  Gate g;
  g.kind = GateKind::TwoQubit;
  g.targets = {q_hi, q_lo};
  g.matrix = m;
  return g;
}

Gate Gate::controlled(std::vector<std::pair<int, bool>> controls, const Matrix& body,
                      std::vector<int> targets) {
  require_unitary(body, "controlled");
  if (body.rows() != (Eigen::Index(1) << targets.size()))
    throw DimensionError("controlled: body dimension does not match target count");
  std::vector<int> all = targets;
  for (auto& [w, pol] : controls) all.push_back(w);
  require_distinct(all, "controlled");
  Gate g;
  g.kind = GateKind::Controlled;
  g.controls = std::move(controls);
  g.targets = std::move(targets);
  g.matrix = body;
  return g;
}

Gate Gate::multiplexer(std::vector<int> controls, std::vector<Matrix> cases,
                       std::vector<int> targets) {
  if (cases.size() != (std::size_t(1) << controls.size()))
    throw DimensionError("multiplexer: expected 2^controls cases");
  const Eigen::Index dim = Eigen::Index(1) << targets.size();
  for (const Matrix& m : cases) {
    if (m.rows() != dim || m.cols() != dim)
      throw DimensionError("multiplexer: case dimension does not match target count");
    require_unitary(m, "multiplexer");
  }
  std::vector<int> all = targets;
  all.insert(all.end(), controls.begin(), controls.end());
  require_distinct(all, "multiplexer");
  Gate g;
  g.kind = GateKind::Multiplexer;
  g.ctrl_wires = std::move(controls);
  g.targets = std::move(targets);
  g.cases = std::move(cases);
  return g;
}

Gate Gate::diagonal(std::vector<int> targets, const CVector& phases) {
  if (phases.size() != (Eigen::Index(1) << targets.size()))
    throw DimensionError("diagonal: expected 2^targets phases");
  for (Eigen::Index i = 0; i < phases.size(); ++i)
    if (std::abs(std::abs(phases(i)) - 1.0) > policy().unitary_tol)
      throw NonUnitaryError("diagonal: phases must have unit modulus");
  require_distinct(targets, "diagonal");
  Gate g;
  g.kind = GateKind::Diagonal;
  g.targets = std::move(targets);
  g.phases = phases;
  return g;
}

Gate Gate::swap(int a, int b) {
  require_distinct({a, b}, "swap");
  Gate g;
  g.kind = GateKind::Swap;
  g.targets = {a, b};
  return g;
}

Gate Gate::global_phase(double angle) {
  Gate g;
  g.kind = GateKind::GlobalPhase;
  g.angle = angle;
  return g;
}

std::vector<int> Gate::wires() const {
  std::vector<int> out;
  for (const auto& [w, pol] : controls) out.push_back(w);
  for (int w : ctrl_wires) out.push_back(w);
  for (int w : targets) out.push_back(w);
  return out;
}

bool Gate::is_basis() const {
  switch (kind) {
    case GateKind::OneQubit:
    case GateKind::TwoQubit:
    case GateKind::Swap:
    case GateKind::GlobalPhase:
      return true;
    default:
      return false;
  }
}

Matrix Gate::local_matrix() const {
  switch (kind) {
    case GateKind::OneQubit:
    case GateKind::TwoQubit:
      return matrix;
    case GateKind::Swap: {
      Matrix m = Matrix::Zero(4, 4);
      m(0, 0) = m(3, 3) = 1;
      m(1, 2) = m(2, 1) = 1;
      return m;
    }
    case GateKind::GlobalPhase:
      return Matrix::Constant(1, 1, std::exp(Complex(0, angle)));
    case GateKind::Diagonal: {
      Matrix m = Matrix::Zero(phases.size(), phases.size());
      m.diagonal() = phases;
      return m;
    }
    case GateKind::Controlled: {
      const Eigen::Index td = matrix.rows();
      const Eigen::Index cd = Eigen::Index(1) << controls.size();
      Matrix m = Matrix::Zero(cd * td, cd * td);
      Eigen::Index fire = 0;
      for (std::size_t i = 0; i < controls.size(); ++i)
        if (controls[i].second) fire |= Eigen::Index(1) << (controls.size() - 1 - i);
      for (Eigen::Index p = 0; p < cd; ++p) {
        if (p == fire)
          m.block(p * td, p * td, td, td) = matrix;
        else
          m.block(p * td, p * td, td, td) = Matrix::Identity(td, td);
      }
      return m;
    }
    case GateKind::Multiplexer: {
      const Eigen::Index td = cases.front().rows();
      const Eigen::Index cd = Eigen::Index(1) << ctrl_wires.size();
      Matrix m = Matrix::Zero(cd * td, cd * td);
      for (Eigen::Index p = 0; p < cd; ++p)
        m.block(p * td, p * td, td, td) = cases[std::size_t(p)];
      return m;
    }
  }
  throw Error("unreachable gate kind");
}

Connectivity Connectivity::grid(int w, int h, std::vector<int> placement) {
  Connectivity c;
  c.type = Grid2D;
  c.width = w;
  c.height = h;
  c.placement = std::move(placement);
  std::set<int> used;
  for (int cell : c.placement) {
    if (cell < 0 || cell >= w * h) throw ValidationError("grid: cell out of range");
    if (!used.insert(cell).second) throw ValidationError("grid: two wires share a cell");
  }
  return c;
}

bool Connectivity::adjacent(int a, int b) const {
  if (type == AllToAll) return true;
  return grid_distance(a, b) == 1;
}

int Connectivity::grid_distance(int a, int b) const {
  const int ca = cell_of(a), cb = cell_of(b);
  const int ax = ca % width, ay = ca / width;
  const int bx = cb % width, by = cb / width;
  return std::abs(ax - bx) + std::abs(ay - by);
}

void Circuit::validate_gate(const Gate& g) const {
  for (int w : g.wires())
    if (w >= total_qubits()) throw ValidationError("gate wire exceeds register size");
}

void Circuit::add(Gate g) {
  validate_gate(g);
  gates.push_back(std::move(g));
}

Circuit concat(const Circuit& a, const Circuit& b) {
  if (a.total_qubits() != b.total_qubits() || a.num_data_qubits != b.num_data_qubits)
    throw DimensionError("concat: register shapes differ");
  Circuit out = a;
  out.gates.insert(out.gates.end(), b.gates.begin(), b.gates.end());
  return out;
}

Matrix embed_gate(const Gate& g, int total_qubits) {
  const Eigen::Index dim = Eigen::Index(1) << total_qubits;
  if (g.kind == GateKind::GlobalPhase)
    return std::exp(Complex(0, g.angle)) * Matrix::Identity(dim, dim);
  const std::vector<int> ws = g.wires();
  const Matrix local = g.local_matrix();
  const int k = int(ws.size());
  const Eigen::Index ld = Eigen::Index(1) << k;
  Matrix out = Matrix::Zero(dim, dim);
  // Iterate over assignments of the untouched wires.
  std::vector<int> rest;
  for (int w = 0; w < total_qubits; ++w)
    if (std::find(ws.begin(), ws.end(), w) == ws.end()) rest.push_back(w);
  const Eigen::Index rest_count = Eigen::Index(1) << rest.size();
  for (Eigen::Index r = 0; r < rest_count; ++r) {
    Eigen::Index base = 0;
    for (std::size_t i = 0; i < rest.size(); ++i)
      if ((r >> (rest.size() - 1 - i)) & 1) base |= Eigen::Index(1) << (total_qubits - 1 - rest[i]);
    for (Eigen::Index li = 0; li < ld; ++li) {
      Eigen::Index row = base;
      for (int i = 0; i < k; ++i)
        if ((li >> (k - 1 - i)) & 1) row |= Eigen::Index(1) << (total_qubits - 1 - ws[std::size_t(i)]);
      for (Eigen::Index lj = 0; lj < ld; ++lj) {
        if (local(li, lj) == Complex(0, 0)) continue;
        Eigen::Index col = base;
        for (int i = 0; i < k; ++i)
          if ((lj >> (k - 1 - i)) & 1)
            col |= Eigen::Index(1) << (total_qubits - 1 - ws[std::size_t(i)]);
        out(row, col) = local(li, lj);
      }
    }
  }
  return out;
}

Matrix unitary_of(const Circuit& c) {
  const int q = c.total_qubits();
  if (q > 13) throw GuardError("unitary_of: more than 13 qubits");
  const Eigen::Index dim = Eigen::Index(1) << q;
  Matrix out(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    CVector e = CVector::Zero(dim);
    e(col) = 1.0;
    out.col(col) = apply_state(c, e);
  }
  return out;
}

long long depth(const Circuit& c) {
  std::vector<long long> busy(std::size_t(c.total_qubits()), 0);
  long long d = 0;
  for (const Gate& g : c.gates) {
    if (g.kind == GateKind::GlobalPhase) continue;
    if (!g.is_basis()) throw ValidationError("depth: circuit contains non-basis gates");
    long long layer = 0;
    for (int w : g.wires()) layer = std::max(layer, busy[std::size_t(w)]);
    ++layer;
    for (int w : g.wires()) busy[std::size_t(w)] = layer;
    d = std::max(d, layer);
  }
  return d;
}

long long basis_gate_count(const Circuit& c) {
  long long n = 0;
  for (const Gate& g : c.gates)
    if (g.kind != GateKind::GlobalPhase) ++n;
  return n;
}

std::vector<std::size_t> grid_adjacency_violations(const Circuit& c) {
  std::vector<std::size_t> out;
  if (c.connectivity.type != Connectivity::Grid2D) return out;
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    if (g.kind == GateKind::GlobalPhase || g.kind == GateKind::OneQubit) continue;
    const std::vector<int> ws = g.wires();
    if (ws.size() != 2 || !c.connectivity.adjacent(ws[0], ws[1])) out.push_back(i);
  }
  return out;
}

}  // namespace casc
