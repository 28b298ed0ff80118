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

#include "casc/parallelize.hpp"

#include <cmath>

namespace casc {

namespace {

Matrix x_matrix() {
  Matrix x = Matrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1;
  return x;
}

double to_turns(Complex phase) {
  double t = std::arg(phase) / (2 * M_PI);
  if (t < 0) t += 1.0;
  if (t >= 1.0) t -= 1.0;
  return t;
}

void finalize(CompiledCircuit& out) {
  out.circuit = lower_to_basis(out.staged);
  out.report.depth_basis = depth(out.circuit);
  out.report.gate_count = basis_gate_count(out.circuit);
  out.report.ancilla_count = out.circuit.num_ancilla;
}

// Emits the R multiplexer of a precompute rewrite; for single-qubit bodies
// the cases are scalars and the gate collapses to a two-wire diagonal.
void emit_r(Circuit& circ, const PrecomputeParts& parts, int ctrl, int bottom,
            const std::vector<int>& middles) {
  if (middles.empty()) {
    CVector ph(4);
    for (int cb = 0; cb < 4; ++cb) ph(cb) = parts.r_cases[std::size_t(cb)](0, 0);
    circ.add(Gate::diagonal({ctrl, bottom}, ph));
  } else {
    circ.add(Gate::multiplexer({ctrl, bottom}, parts.r_cases, middles));
  }
}

struct BlockLayout {
  int ctrl = 0;
  std::vector<int> body;
  int bottom() const { return body.back(); }
  std::vector<int> middles() const { return {body.begin(), body.end() - 1}; }
};

std::vector<BlockLayout> cascade_layout(const ControlCascade& c) {
  std::vector<BlockLayout> out;
  int wire = 1, ctrl = 0;
  for (int b = 0; b < c.num_blocks(); ++b) {
    BlockLayout l;
    l.ctrl = ctrl;
    const int kb = c.body_qubits(b);
    for (int i = 0; i < kb; ++i) l.body.push_back(wire + i);
    wire += kb;
    ctrl = wire - 1;
    out.push_back(std::move(l));
  }
  return out;
}

}  // namespace

PhaseTable phase_tables_of(const CVector& diag_phases) {
  const Eigen::Index n = diag_phases.size();
  if (n < 2 || (n & (n - 1)) != 0)
    throw DimensionError("phase_tables_of: length must be a power of two");
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(std::abs(diag_phases(i)) - 1.0) > policy().unitary_tol)
      throw NonUnitaryError("phase_tables_of: phases must have unit modulus");
  PhaseTable t;
  t.theta.resize(n / 2);
  t.phi.resize(n / 2);
  for (Eigen::Index y = 0; y < n / 2; ++y) {
    t.phi(y) = to_turns(diag_phases(2 * y));
    t.theta(y) = to_turns(diag_phases(2 * y + 1));
  }
  return t;
}

CVector phase_tables_reassemble(const PhaseTable& t) {
  CVector d(2 * t.theta.size());
  for (Eigen::Index y = 0; y < t.theta.size(); ++y) {
    d(2 * y) = std::exp(Complex(0, 2 * M_PI * t.phi(y)));
    d(2 * y + 1) = std::exp(Complex(0, 2 * M_PI * t.theta(y)));
  }
  return d;
}

CompiledCircuit compile_exact_diagonal(const ControlCascade& c) {
  c.validate();
  if (c.k > 6) throw GuardError("compile_exact_diagonal: bodies wider than 6 qubits");
  const std::vector<BlockLayout> layout = cascade_layout(c);
  const int m = c.num_blocks();

  std::vector<PrecomputeParts> parts;
  for (int i = 0; i < m; ++i)
    parts.push_back(precompute_identity(c.blocks[std::size_t(i)].first,
                                        c.blocks[std::size_t(i)].second));

  CompiledCircuit out;
  out.staged.num_data_qubits = c.num_qubits();
  for (int i = 0; i < m; ++i)
    out.staged.add(Gate::controlled({}, parts[std::size_t(i)].p, layout[std::size_t(i)].body));
  for (int i = 0; i < m; ++i) {
    const BlockLayout& l = layout[std::size_t(i)];
    out.staged.add(Gate::one_qubit(l.bottom(), phi_gate()));
    CVector full(parts[std::size_t(i)].d.size() * 2);
    full.head(parts[std::size_t(i)].d.size()).setConstant(Complex(1, 0));
    full.tail(parts[std::size_t(i)].d.size()) = parts[std::size_t(i)].d;
    std::vector<int> wires{l.ctrl};
    wires.insert(wires.end(), l.body.begin(), l.body.end());
    out.staged.add(Gate::diagonal(wires, full));
    out.staged.add(Gate::one_qubit(l.bottom(), phi_gate().adjoint()));
  }
  for (int i = 0; i < m; i += 2)
    emit_r(out.staged, parts[std::size_t(i)], layout[std::size_t(i)].ctrl,
           layout[std::size_t(i)].bottom(), layout[std::size_t(i)].middles());
  for (int i = 1; i < m; i += 2)
    emit_r(out.staged, parts[std::size_t(i)], layout[std::size_t(i)].ctrl,
           layout[std::size_t(i)].bottom(), layout[std::size_t(i)].middles());

  finalize(out);
  return out;
}

namespace {

// Shared machinery of the ancilla passes: rewrite each controlled diagonal
// as two multiplexer phase gates realized by table caches and phase kickback.
class AncillaPassBuilder {
 public:
  AncillaPassBuilder(const ControlCascade& c, bool binary, int r)
      : cascade_(c), binary_(binary), r_(r), layout_(cascade_layout(c)) {}

  CompiledCircuit build() {
    const int m = cascade_.num_blocks();
    const int k = cascade_.k;
    const int bank = binary_ ? r_ : (1 << (k - 1));
    const int per_gate = 2 * bank;
    const int data = cascade_.num_qubits();

    CompiledCircuit out;
    out.staged.num_data_qubits = data;
    out.staged.num_ancilla = m * 2 * per_gate;

    std::vector<PrecomputeParts> parts;
    for (int i = 0; i < m; ++i)
      parts.push_back(precompute_identity(cascade_.blocks[std::size_t(i)].first,
                                          cascade_.blocks[std::size_t(i)].second));
    std::vector<PhaseTable> tables;
    std::vector<double> gauge(std::size_t(m), 0.0);
    for (int i = 0; i < m; ++i) {
      PhaseTable t = phase_tables_of(parts[std::size_t(i)].d);
      if (binary_) {
        // Shift all the block's angles by a common gauge chosen to minimize
        // the worst distance to the r-bit grid; the shift is repaid by an
        // exact phase gate on the control wire.
        const double g = best_gauge(t);
        gauge[std::size_t(i)] = g;
        for (Eigen::Index y = 0; y < t.theta.size(); ++y) {
          t.theta(y) = wrap_turns(t.theta(y) + g);
          t.phi(y) = wrap_turns(t.phi(y) + g);
        }
      }
      tables.push_back(std::move(t));
    }

    for (int i = 0; i < m; ++i)
      out.staged.add(Gate::controlled({}, parts[std::size_t(i)].p, layout_[std::size_t(i)].body));

    // table caches for every multiplexer phase gate, committed up front
    auto bank1 = [&](int i, int t) { return data + (2 * i + t) * per_gate; };
    auto bank2 = [&](int i, int t) { return data + (2 * i + t) * per_gate + bank; };
    for (int i = 0; i < m; ++i) {
      emit_cache(out.staged, i, tables[std::size_t(i)].phi, bank1(i, 0), false);
      emit_cache(out.staged, i, tables[std::size_t(i)].theta, bank1(i, 1), false);
    }

    for (int i = 0; i < m; ++i) {
      const BlockLayout& l = layout_[std::size_t(i)];
      if (gauge[std::size_t(i)] != 0.0) {
        Matrix undo = Matrix::Zero(2, 2);
        undo(0, 0) = 1;
        undo(1, 1) = std::exp(Complex(0, -2 * M_PI * gauge[std::size_t(i)]));
        out.staged.add(Gate::one_qubit(l.ctrl, undo));
      }
      out.staged.add(Gate::one_qubit(l.bottom(), phi_gate()));
      out.staged.add(Gate::one_qubit(l.bottom(), x_matrix()));
      emit_kickback(out.staged, i, tables[std::size_t(i)].phi, bank1(i, 0), bank2(i, 0));
      out.staged.add(Gate::one_qubit(l.bottom(), x_matrix()));
      emit_kickback(out.staged, i, tables[std::size_t(i)].theta, bank1(i, 1), bank2(i, 1));
      out.staged.add(Gate::one_qubit(l.bottom(), phi_gate().adjoint()));
    }

    for (int i = m - 1; i >= 0; --i) {
      emit_cache(out.staged, i, tables[std::size_t(i)].theta, bank1(i, 1), true);
      emit_cache(out.staged, i, tables[std::size_t(i)].phi, bank1(i, 0), true);
    }

    for (int i = 0; i < m; i += 2)
      emit_r(out.staged, parts[std::size_t(i)], layout_[std::size_t(i)].ctrl,
             layout_[std::size_t(i)].bottom(), layout_[std::size_t(i)].middles());
    for (int i = 1; i < m; i += 2)
      emit_r(out.staged, parts[std::size_t(i)], layout_[std::size_t(i)].ctrl,
             layout_[std::size_t(i)].bottom(), layout_[std::size_t(i)].middles());

    finalize(out);
    return out;
  }

 private:
  // SELECT writes a one-hot index of the control pattern; LOAD writes the
  // rounded binary expansion of the selected angle.
  void emit_cache(Circuit& circ, int block, const RVector& angles, int base, bool uncompute) {
    const BlockLayout& l = layout_[std::size_t(block)];
    const std::vector<int> ys = l.middles();  // the k-1 multiplexer controls
    std::vector<Gate> gates;
    const Eigen::Index patterns = angles.size();
    for (Eigen::Index y = 0; y < patterns; ++y) {
      std::vector<std::pair<int, bool>> ctl;
      for (std::size_t i = 0; i < ys.size(); ++i)
        ctl.emplace_back(ys[i], ((y >> (ys.size() - 1 - i)) & 1) != 0);
      if (binary_) {
        const std::uint64_t bits = rounded_bits(angles(y));
        for (int j = 0; j < r_; ++j)
          if ((bits >> (r_ - 1 - j)) & 1)
            gates.push_back(Gate::controlled(ctl, x_matrix(), {base + j}));
      } else {
        gates.push_back(Gate::controlled(ctl, x_matrix(), {base + int(y)}));
      }
    }
    if (uncompute)
      for (auto it = gates.rbegin(); it != gates.rend(); ++it) circ.add(*it);
    else
      for (const Gate& g : gates) circ.add(g);
  }

  void emit_kickback(Circuit& circ, int block, const RVector& angles, int b1, int b2) {
    const BlockLayout& l = layout_[std::size_t(block)];
    const int bank = binary_ ? r_ : int(angles.size());
    // fanout of (ctrl AND bottom) over the second bank: one toffoli plus a
    // balanced binary tree of cnots
    std::vector<Gate> fan;
    fan.push_back(Gate::controlled({{l.ctrl, true}, {l.bottom(), true}}, x_matrix(), {b2}));
    for (int step = 1; step < bank; step *= 2)
      for (int j = 0; j < step && j + step < bank; ++j)
        fan.push_back(Gate::controlled({{b2 + j, true}}, x_matrix(), {b2 + j + step}));
    for (const Gate& g : fan) circ.add(g);
    if (binary_) {
      for (int j = 0; j < r_; ++j) {
        CVector ph = CVector::Ones(4);
        ph(3) = std::exp(Complex(0, 2 * M_PI / double(std::uint64_t(1) << (j + 1))));
        circ.add(Gate::diagonal({b1 + j, b2 + j}, ph));
      }
    } else {
      for (Eigen::Index y = 0; y < angles.size(); ++y) {
        CVector ph = CVector::Ones(4);
        ph(3) = std::exp(Complex(0, 2 * M_PI * angles(y)));
        circ.add(Gate::diagonal({b1 + int(y), b2 + int(y)}, ph));
      }
    }
    for (auto it = fan.rbegin(); it != fan.rend(); ++it) circ.add(*it);
  }

  std::uint64_t rounded_bits(double turns) const {
    // nearest r-bit representative, wrapped on the circle
    const double scaled = turns * double(std::uint64_t(1) << r_);
    const std::uint64_t mask = (std::uint64_t(1) << r_) - 1;
    return std::uint64_t(std::llround(scaled)) & mask;
  }

  static double wrap_turns(double t) {
    t -= std::floor(t);
    if (t >= 1.0) t -= 1.0;
    return t;
  }

  // grid distance of one angle, in turns, at r bits
  double grid_dist(double turns) const {
    const double scaled = turns * double(std::uint64_t(1) << r_);
    const double frac = scaled - std::llround(scaled);
    return std::abs(frac) / double(std::uint64_t(1) << r_);
  }

  double best_gauge(const PhaseTable& t) const {
    std::vector<double> angles;
    for (Eigen::Index y = 0; y < t.theta.size(); ++y) {
      angles.push_back(t.theta(y));
      angles.push_back(t.phi(y));
    }
    const double q = 1.0 / double(std::uint64_t(1) << r_);
    double best_g = 0.0;
    double best_val = 0.0;
    for (double a : angles) best_val = std::max(best_val, grid_dist(a));
    // candidate gauges put one angle exactly on the grid or midway between
    // two breakpoints; the worst-distance objective is piecewise linear
    for (double a : angles) {
      for (double off : {0.0, q / 4, q / 2, 3 * q / 4}) {
        const double g = wrap_turns(-a + off);
        double val = 0.0;
        for (double x : angles) val = std::max(val, grid_dist(wrap_turns(x + g)));
        if (val < best_val - 1e-18) {
          best_val = val;
          best_g = g;
        }
      }
    }
    return best_g;
  }

  const ControlCascade& cascade_;
  bool binary_;
  int r_;
  std::vector<BlockLayout> layout_;
};

}  // namespace

CompiledCircuit compile_select_exact(const ControlCascade& c) {
  c.validate();
  if (c.k > 4) throw GuardError("compile_select_exact: bodies wider than 4 qubits");
  for (int b = 0; b < c.num_blocks(); ++b)
    if (c.body_qubits(b) != c.k)
      throw DimensionError("compile_select_exact: bodies must share one size");
  AncillaPassBuilder builder(c, false, 0);
  CompiledCircuit out = builder.build();
  out.report.apriori_error = 0.0;
  return out;
}

ApproxBudget load_budget(int m, double epsilon) {
  ApproxBudget b;
  b.epsilon = epsilon;
  b.r = int(std::ceil(std::log2(double(m) / epsilon)));
  if (b.r < 1) b.r = 1;
  return b;
}

CompiledCircuit compile_load_approx(const ControlCascade& c, double epsilon) {
  c.validate();
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ValidationError("compile_load_approx: epsilon must be in (0, 1)");
  if (c.k > 4) throw GuardError("compile_load_approx: bodies wider than 4 qubits");
  for (int b = 0; b < c.num_blocks(); ++b)
    if (c.body_qubits(b) != c.k)
      throw DimensionError("compile_load_approx: bodies must share one size");
  const ApproxBudget budget = load_budget(c.num_blocks(), epsilon);
  AncillaPassBuilder builder(c, true, budget.r);
  CompiledCircuit out = builder.build();
  out.report.apriori_error = double(c.num_blocks()) * std::pow(2.0, 1 - budget.r);
  return out;
}

namespace {

void mn_log_rec(Circuit& circ, const std::vector<int>& chain, const std::vector<Matrix>& gates,
                int b, int level = 0) {
  const int m = int(gates.size());
  if (m <= 1) {
    for (int j = 0; j < m; ++j)
      circ.add(Gate::controlled({{chain[std::size_t(j)], true}}, gates[std::size_t(j)],
                                {chain[std::size_t(j + 1)]}));
    return;
  }
  const int groups = (m + b - 1) / b;
  std::vector<PrecomputeParts> parts;
  std::vector<int> bottoms;
  for (int g = 0; g < groups; ++g) {
    const int first = g * b;
    const int last = std::min(first + b, m) - 1;
    std::vector<Matrix> run(gates.begin() + first, gates.begin() + last + 1);
    parts.push_back(mn_precompute(run));
    bottoms.push_back(chain[std::size_t(last + 1)]);
  }
  for (int g = 0; g < groups; ++g) {
    const int first = g * b;
    std::vector<int> body;
    for (int j = first; j < first + parts[std::size_t(g)].body_qubits; ++j)
      body.push_back(chain[std::size_t(j + 1)]);
    circ.add(Gate::controlled({}, parts[std::size_t(g)].p, body));
  }
  // induced staircase of the Q rotations on the group bottoms
  std::vector<int> sub_chain{chain[0]};
  sub_chain.insert(sub_chain.end(), bottoms.begin(), bottoms.end());
  std::vector<Matrix> qs;
  for (int g = 0; g < groups; ++g) qs.push_back(*parts[std::size_t(g)].q);
  mn_log_rec(circ, sub_chain, qs, b, level + 1);
  // postprocessing multiplexers pack into two commuting layers
  auto emit_group_r = [&](int g) {
    const int first = g * b;
    const int ell = parts[std::size_t(g)].body_qubits;
    std::vector<int> middles;
    for (int j = first; j < first + ell - 1; ++j) middles.push_back(chain[std::size_t(j + 1)]);
    emit_r(circ, parts[std::size_t(g)], chain[std::size_t(first)], bottoms[std::size_t(g)],
           middles);
  };
  const int first_parity = level % 2;
  for (int g = first_parity; g < groups; g += 2) emit_group_r(g);
  for (int g = 1 - first_parity; g < groups; g += 2) emit_group_r(g);
}

}  // namespace

CompiledCircuit compile_mn_log_depth(const MNCascade& c, int block_size) {
  c.validate();
  if (block_size < 2) throw ValidationError("compile_mn_log_depth: block size must be >= 2");
  CompiledCircuit out;
  out.staged.num_data_qubits = c.num_qubits();
  std::vector<int> chain(static_cast<std::size_t>(c.num_qubits()));
  for (std::size_t i = 0; i < chain.size(); ++i) chain[i] = int(i);
  mn_log_rec(out.staged, chain, c.gates, block_size);
  finalize(out);
  return out;
}

}  // namespace casc
