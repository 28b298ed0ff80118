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

#include "casc/cascade.hpp"

#include <cmath>

namespace casc {

void MNCascade::validate() const {
  if (gates.empty()) throw ValidationError("mn cascade: no gates");
  for (const Matrix& g : gates) {
    if (g.rows() != 2 || g.cols() != 2) throw DimensionError("mn cascade: gates must be 2x2");
    if (!is_unitary(g, policy().unitary_tol)) throw NonUnitaryError("mn cascade: gate not unitary");
  }
}

int ControlCascade::num_qubits() const {
  int q = 1;
  for (int b = 0; b < num_blocks(); ++b) q += body_qubits(b);
  return q;
}

void ControlCascade::validate() const {
  if (blocks.empty()) throw ValidationError("cascade: no blocks");
  for (const auto& [u0, u1] : blocks) {
    if (u0.rows() != u0.cols() || u1.rows() != u1.cols() || u0.rows() != u1.rows())
      throw DimensionError("cascade: block pair shapes differ");
    if (!is_power_of_two(u0.rows())) throw DimensionError("cascade: block dim not a power of two");
    if (!is_unitary(u0, policy().unitary_tol) || !is_unitary(u1, policy().unitary_tol))
      throw NonUnitaryError("cascade: block not unitary");
  }
}

void ValleySpec::validate() const {
  if (layers.empty()) throw ValidationError("valley: no layers");
  for (const Matrix& u : layers) {
    if (u.rows() != u.cols() || !is_power_of_two(u.rows()))
      throw DimensionError("valley: layer dim not a power of two");
    if (!is_unitary(u, policy().unitary_tol)) throw NonUnitaryError("valley: layer not unitary");
  }
}

Circuit lower_naive(const MNCascade& c) {
  c.validate();
  Circuit out;
  out.num_data_qubits = c.num_qubits();
  for (int j = 0; j < c.num_gates(); ++j)
    out.add(Gate::controlled({{j, true}}, c.gates[std::size_t(j)], {j + 1}));
  return out;
}

Circuit lower_naive(const ControlCascade& c) {
  c.validate();
  Circuit out;
  out.num_data_qubits = c.num_qubits();
  int wire = 1;
  int ctrl = 0;
  for (int b = 0; b < c.num_blocks(); ++b) {
    const int kb = c.body_qubits(b);
    std::vector<int> body(static_cast<std::size_t>(kb));
    for (int i = 0; i < kb; ++i) body[std::size_t(i)] = wire + i;
    out.add(Gate::multiplexer({ctrl}, {c.blocks[std::size_t(b)].first, c.blocks[std::size_t(b)].second},
                              body));
    wire += kb;
    ctrl = wire - 1;
  }
  return out;
}

namespace {

// Dense matrix of the sub-cascade g[first..last] on (last-first+1) wires with
// the first gate applied unconditionally; time order is gate first..last.
Matrix run_matrix(const std::vector<Matrix>& g, int first, int last) {
  const int ell = last - first + 1;
  const Eigen::Index dim = Eigen::Index(1) << ell;
  Matrix acc = Matrix::Identity(dim, dim);
  {
    // unconditional first gate on the top wire of the run
    Matrix e = g[std::size_t(first)];
    for (int i = 1; i < ell; ++i) e = kron(e, Matrix::Identity(2, 2));
    acc = e * acc;
  }
  for (int j = 1; j < ell; ++j) {
    // gate first+j on wire j controlled by wire j-1
    const Eigen::Index pre = Eigen::Index(1) << (j - 1);
    Matrix ctrl_block = Matrix::Zero(4, 4);
    ctrl_block.topLeftCorner(2, 2) = Matrix::Identity(2, 2);
    ctrl_block.bottomRightCorner(2, 2) = g[std::size_t(first + j)];
    Matrix e = kron(Matrix::Identity(pre, pre), ctrl_block);
    const Eigen::Index post = dim / e.rows();
    e = kron(e, Matrix::Identity(post, post));
    acc = e * acc;
  }
  return acc;
}

}  // namespace

ControlCascade group(const MNCascade& c, int ell) {
  c.validate();
  if (ell < 1) throw ValidationError("group: block size must be at least 1");
  ControlCascade out;
  out.k = ell;
  const int m = c.num_gates();
  for (int first = 0; first < m; first += ell) {
    const int last = std::min(first + ell, m) - 1;
    const Matrix v1 = run_matrix(c.gates, first, last);
    Matrix v0;
    if (last == first) {
      v0 = Matrix::Identity(2, 2);
    } else {
      // same run with the first gate omitted
      std::vector<Matrix> tail(c.gates.begin() + first + 1, c.gates.begin() + last + 1);
      std::vector<Matrix> padded;
      padded.push_back(Matrix::Identity(2, 2));
      padded.insert(padded.end(), tail.begin(), tail.end());
      v0 = run_matrix(padded, 0, last - first);
    }
    out.blocks.emplace_back(v0, v1);
  }
  return out;
}

std::vector<Matrix> ungroup(const ControlCascade& grouped) {
  std::vector<Matrix> gates;
  for (const auto& [v0, v1] : grouped.blocks) {
    Matrix a0 = v0, a1 = v1;
    while (a0.rows() > 2) {
      // first gate of the run = top-left 2x2 block of a0† a1
      const Matrix prod = a0.adjoint() * a1;
      const Eigen::Index half = prod.rows() / 2;
      Matrix g(2, 2);
      g(0, 0) = prod(0, 0);
      g(0, 1) = prod(0, half);
      g(1, 0) = prod(half, 0);
      g(1, 1) = prod(half, half);
      gates.push_back(g);
      // descend into the controlled remainder
      const Matrix b0 = a0.topLeftCorner(half, half);
      const Matrix b1 = a0.bottomRightCorner(half, half);
      a0 = b0;
      a1 = b1;
    }
    gates.push_back(a0.adjoint() * a1);
  }
  return gates;
}

Circuit build_valley(const ValleySpec& v) {
  v.validate();
  const int ell = int(v.layers.size());
  std::vector<int> first_wire(std::size_t(ell) + 1, 0);
  // layer ell on top wires, layer 1 at the bottom
  int total = 0;
  for (int j = ell; j >= 1; --j) {
    first_wire[std::size_t(j)] = total;
    total += log2_exact(v.layers[std::size_t(j - 1)].rows());
  }
  Circuit out;
  out.num_data_qubits = total;
  auto layer_targets = [&](int j) {
    const int q = log2_exact(v.layers[std::size_t(j - 1)].rows());
    std::vector<int> t(static_cast<std::size_t>(q));
    for (int i = 0; i < q; ++i) t[std::size_t(i)] = first_wire[std::size_t(j)] + i;
    return t;
  };
  for (int j = ell; j >= 2; --j)
    out.add(Gate::controlled({{first_wire[std::size_t(j - 1)], true}},
                             v.layers[std::size_t(j - 1)].adjoint(), layer_targets(j)));
  out.add(Gate::controlled({}, v.layers[0], layer_targets(1)));
  for (int j = 2; j <= ell; ++j)
    out.add(Gate::controlled({{first_wire[std::size_t(j - 1)], true}}, v.layers[std::size_t(j - 1)],
                             layer_targets(j)));
  return out;
}

Matrix dense_valley(const ValleySpec& v) {
  const Circuit c = build_valley(v);
  return unitary_of(c);
}

MNCascade mn_random(int m, std::uint64_t seed) {
  Rng rng(seed);
  MNCascade c;
  for (int i = 0; i < m; ++i) c.gates.push_back(haar_unitary(2, rng));
  return c;
}

MNCascade mn_hadamard(int m) {
  Matrix h(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h << Complex(s, 0), Complex(s, 0), Complex(s, 0), Complex(-s, 0);
  MNCascade c;
  c.gates.assign(std::size_t(m), h);
  return c;
}

ControlCascade cascade_random(int k, int m, std::uint64_t seed) {
  Rng rng(seed);
  ControlCascade c;
  c.k = k;
  const Eigen::Index dim = Eigen::Index(1) << k;
  for (int i = 0; i < m; ++i) {
    Matrix u0 = haar_unitary(dim, rng);
    Matrix u1 = haar_unitary(dim, rng);
    c.blocks.emplace_back(std::move(u0), std::move(u1));
  }
  return c;
}

}  // namespace casc
