#include <doctest.h>

#include <casc/circuit.hpp>

#include "oracles.hpp"

using namespace casc;

namespace {

Matrix x_matrix() {
  Matrix x = Matrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1;
  return x;
}

Matrix h_matrix() {
  Matrix h(2, 2);
  const double s = 1 / std::sqrt(2.0);
  h << Complex(s, 0), Complex(s, 0), Complex(s, 0), Complex(-s, 0);
  return h;
}

Circuit random_circuit(int qubits, int gates, std::uint64_t seed) {
  Rng rng(seed);
  Circuit c;
  c.num_data_qubits = qubits;
  for (int i = 0; i < gates; ++i) {
    const int pick = int(rng.next_u64() % 3);
    if (pick == 0) {
      c.add(Gate::one_qubit(int(rng.next_u64() % std::uint64_t(qubits)), haar_unitary(2, rng)));
    } else if (pick == 1) {
      int a = int(rng.next_u64() % std::uint64_t(qubits));
      int b = int(rng.next_u64() % std::uint64_t(qubits));
      if (b == a) b = (a + 1) % qubits;
      c.add(Gate::two_qubit(a, b, haar_unitary(4, rng)));
    } else {
      int a = int(rng.next_u64() % std::uint64_t(qubits));
      int b = int(rng.next_u64() % std::uint64_t(qubits));
      if (b == a) b = (a + 1) % qubits;
      c.add(Gate::controlled({{a, (rng.next_u64() & 1) != 0}}, haar_unitary(2, rng), {b}));
    }
  }
  return c;
}

}  // namespace

TEST_CASE("unitary_of basics") {
  Circuit empty;
  empty.num_data_qubits = 2;
  CHECK(oracles::max_abs(unitary_of(empty) - identity(4)) == 0.0);

  Circuit cnot;
  cnot.num_data_qubits = 2;
  cnot.add(Gate::controlled({{0, true}}, x_matrix(), {1}));
  Matrix expect = Matrix::Zero(4, 4);
  expect(0, 0) = expect(1, 1) = 1;
  expect(2, 3) = expect(3, 2) = 1;
  CHECK(oracles::max_abs(unitary_of(cnot) - expect) < 1e-15);
}

TEST_CASE("unitary_of matches embed-multiply oracle") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Circuit c = random_circuit(3, 5, seed);
    CHECK(oracles::max_abs(unitary_of(c) - oracles::embed_multiply(c)) < 1e-13);
  }
}

TEST_CASE("unitary_of of concat is the reversed product") {
  Circuit a = random_circuit(3, 4, 7), b = random_circuit(3, 4, 8);
  Matrix prod = unitary_of(b) * unitary_of(a);
  CHECK(oracles::max_abs(unitary_of(concat(a, b)) - prod) < 1e-10);
}

TEST_CASE("apply_state basics") {
  Circuit c;
  c.num_data_qubits = 1;
  c.add(Gate::one_qubit(0, h_matrix()));
  CVector psi = CVector::Zero(2);
  psi(0) = 1;
  CVector out = apply_state(c, psi);
  CHECK(std::abs(out(0) - Complex(1 / std::sqrt(2.0), 0)) < 1e-15);
  CHECK(std::abs(out(1) - Complex(1 / std::sqrt(2.0), 0)) < 1e-15);

  Circuit idc;
  idc.num_data_qubits = 3;
  CVector r = oracles::random_state(8, 5);
  CHECK((apply_state(idc, r) - r).norm() == 0.0);
}

TEST_CASE("apply_state is linear and norm preserving at 10 qubits") {
  Circuit c = random_circuit(10, 30, 17);
  CVector psi = oracles::random_state(1 << 10, 18);
  CVector via_state = apply_state(c, psi);
  CHECK(std::abs(via_state.norm() - 1.0) < 1e-9);
  CVector phi = oracles::random_state(1 << 10, 19);
  CVector lhs = apply_state(c, CVector(0.6 * psi + 0.8 * phi));
  CVector rhs = 0.6 * via_state + 0.8 * apply_state(c, phi);
  CHECK((lhs - rhs).norm() < 1e-9);
}

TEST_CASE("apply_state matches unitary_of at small width") {
  Circuit c = random_circuit(3, 8, 21);
  Matrix u = unitary_of(c);
  CVector psi = oracles::random_state(8, 22);
  CHECK((apply_state(c, psi) - u * psi).norm() < 1e-12);
}

TEST_CASE("apply_data_state leaves clean ancillae classical") {
  // CNOT data->ancilla, then undo: the 24 ancillae would overflow a dense
  // simulation if they were all promoted
  Circuit c;
  c.num_data_qubits = 2;
  c.num_ancilla = 24;
  c.add(Gate::one_qubit(0, h_matrix()));
  c.add(Gate::controlled({{0, true}}, x_matrix(), {2}));
  c.add(Gate::controlled({{0, true}}, x_matrix(), {2}));
  CVector psi = CVector::Zero(4);
  psi(0) = 1;
  DataStateResult r = apply_data_state(c, psi);
  CHECK(r.ancilla_residual < 1e-12);
  CVector expect = CVector::Zero(4);
  expect(0) = expect(2) = 1 / std::sqrt(2.0);
  CHECK((r.data_state - expect).norm() < 1e-12);
}

TEST_CASE("apply_data_state agrees with apply_state") {
  Circuit clean;
  clean.num_data_qubits = 3;
  clean.num_ancilla = 1;
  for (const Gate& g : random_circuit(3, 12, 23).gates) clean.add(g);
  CVector psi = oracles::random_state(8, 31);
  DataStateResult r = apply_data_state(clean, psi);
  CVector full = CVector::Zero(16);
  for (int i = 0; i < 8; ++i) full(2 * i) = psi(i);
  CVector out = apply_state(clean, full);
  CVector data = CVector::Zero(8);
  for (int i = 0; i < 8; ++i) data(i) = out(2 * i);
  CHECK((r.data_state - data).norm() < 1e-12);
  CHECK(r.ancilla_residual < 1e-12);
}

TEST_CASE("swap with classical ancilla is free relabeling") {
  Circuit c;
  c.num_data_qubits = 1;
  c.num_ancilla = 25;
  for (int i = 0; i < 25; ++i) c.add(Gate::swap(i, i + 1));
  for (int i = 24; i >= 0; --i) c.add(Gate::swap(i, i + 1));
  CVector psi = oracles::random_state(2, 3);
  DataStateResult r = apply_data_state(c, psi);
  CHECK((r.data_state - psi).norm() < 1e-14);
  CHECK(r.ancilla_residual == 0.0);
}

TEST_CASE("depth rules") {
  Circuit c;
  c.num_data_qubits = 3;
  CHECK(depth(c) == 0);
  c.add(Gate::one_qubit(0, h_matrix()));
  c.add(Gate::one_qubit(1, h_matrix()));
  CHECK(depth(c) == 1);
  Rng rng(5);
  c.add(Gate::two_qubit(0, 1, haar_unitary(4, rng)));
  CHECK(depth(c) == 2);
  c.add(Gate::global_phase(1.0));
  CHECK(depth(c) == 2);

  Circuit blocks;
  blocks.num_data_qubits = 2;
  blocks.add(Gate::controlled({{0, true}}, x_matrix(), {1}));
  CHECK_THROWS_AS(depth(blocks), ValidationError);
}

TEST_CASE("depth equals depth of reversed gate list") {
  Circuit c = lower_to_basis(random_circuit(4, 14, 41));
  Circuit r = c;
  std::reverse(r.gates.begin(), r.gates.end());
  CHECK(depth(c) == depth(r));
  CHECK(depth(c) <= basis_gate_count(c));
}

TEST_CASE("lower_to_basis preserves unitary and is idempotent") {
  for (std::uint64_t seed : {3u, 4u}) {
    Circuit c = random_circuit(3, 6, seed);
    Circuit low = lower_to_basis(c);
    for (const Gate& g : low.gates) CHECK(g.is_basis());
    CHECK(op_norm_distance(unitary_of(low), unitary_of(c)) < 1e-9);
    Circuit again = lower_to_basis(low);
    CHECK(again.gates.size() == low.gates.size());
    CHECK(op_norm_distance(unitary_of(again), unitary_of(c)) < 1e-9);
  }
}

TEST_CASE("lower_to_basis diagonal cases") {
  Circuit c;
  c.num_data_qubits = 1;
  CVector ones = CVector::Ones(2);
  c.add(Gate::diagonal({0}, ones));
  Circuit low = lower_to_basis(c);
  CHECK(low.gates.empty());

  Circuit c2;
  c2.num_data_qubits = 1;
  CVector ph(2);
  ph << Complex(1, 0), std::exp(Complex(0, M_PI / 4));
  c2.add(Gate::diagonal({0}, ph));
  Circuit low2 = lower_to_basis(c2);
  REQUIRE(low2.gates.size() == 1);
  CHECK(low2.gates[0].kind == GateKind::OneQubit);
  CHECK(oracles::max_abs(low2.gates[0].matrix - unitary_of(c2)) < 1e-12);
}

TEST_CASE("lower_to_basis multiplexer with two controls") {
  Rng rng(91);
  std::vector<Matrix> cases;
  for (int i = 0; i < 4; ++i) cases.push_back(haar_unitary(2, rng));
  Circuit c;
  c.num_data_qubits = 3;
  c.add(Gate::multiplexer({0, 1}, cases, {2}));
  Circuit low = lower_to_basis(c);
  CHECK(op_norm_distance(unitary_of(low), unitary_of(c)) < 1e-9);
}

TEST_CASE("lower_to_basis block unitary via shannon recursion") {
  Rng rng(93);
  Matrix u = haar_unitary(8, rng);
  Circuit c;
  c.num_data_qubits = 3;
  c.add(Gate::controlled({}, u, {0, 1, 2}));
  Circuit low = lower_to_basis(c);
  CHECK(op_norm_distance(unitary_of(low), u) < 1e-9);
}

TEST_CASE("lower_to_basis four qubit diagonal") {
  Rng rng(97);
  CVector ph(16);
  for (int i = 0; i < 16; ++i) ph(i) = std::exp(Complex(0, 2 * M_PI * rng.next_double()));
  Circuit c;
  c.num_data_qubits = 4;
  c.add(Gate::diagonal({0, 1, 2, 3}, ph));
  Circuit low = lower_to_basis(c);
  CHECK(op_norm_distance(unitary_of(low), unitary_of(c)) < 1e-10);
}

TEST_CASE("grid lowering inserts relays and passes the audit") {
  Connectivity grid = Connectivity::grid(3, 1, {0, 1, 2});
  Circuit c;
  c.num_data_qubits = 3;
  c.connectivity = grid;
  Rng rng(95);
  c.add(Gate::two_qubit(0, 2, haar_unitary(4, rng)));
  Circuit low = lower_to_basis(c);
  CHECK(grid_adjacency_violations(low).empty());
  CHECK(op_norm_distance(unitary_of(low), unitary_of(c)) < 1e-10);
}

TEST_CASE("guards") {
  Circuit big;
  big.num_data_qubits = 14;
  CHECK_THROWS_AS(unitary_of(big), GuardError);
  Circuit c;
  c.num_data_qubits = 2;
  CHECK_THROWS_AS(apply_state(c, CVector::Zero(3)), DimensionError);
}
