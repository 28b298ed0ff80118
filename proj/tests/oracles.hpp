// Test-only oracles, kept independent of the library code paths they check.
#pragma once

#include <casc/cascade.hpp>
#include <casc/circuit.hpp>

namespace casc::oracles {

// Bit-reversal permutation matrix (oracle for rev()).
inline Matrix bit_reversal_permutation(int qubits) {
  const Eigen::Index dim = Eigen::Index(1) << qubits;
  Matrix p = Matrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    Eigen::Index r = 0, x = i;
    for (int b = 0; b < qubits; ++b) {
      r = (r << 1) | (x & 1);
      x >>= 1;
    }
    p(r, i) = 1;
  }
  return p;
}

// Embed-and-multiply oracle for unitary_of on small circuits.
inline Matrix embed_multiply(const Circuit& c) {
  const Eigen::Index dim = Eigen::Index(1) << c.total_qubits();
  Matrix u = Matrix::Identity(dim, dim);
  for (const Gate& g : c.gates) u = embed_gate(g, c.total_qubits()) * u;
  return u;
}

// Recursive block-matrix assembly of a Moore-Nilsson staircase: gate j acts
// on wire j+1 controlled by wire j, gate 1 first.
inline Matrix mn_dense(const std::vector<Matrix>& gates) {
  const int m = int(gates.size());
  const Eigen::Index dim = Eigen::Index(1) << (m + 1);
  Matrix acc = Matrix::Identity(dim, dim);
  for (int j = 0; j < m; ++j) {
    Matrix blk = Matrix::Zero(4, 4);
    blk.topLeftCorner(2, 2) = Matrix::Identity(2, 2);
    blk.bottomRightCorner(2, 2) = gates[std::size_t(j)];
    const Eigen::Index pre = Eigen::Index(1) << j;
    Matrix e = kron(Matrix::Identity(pre, pre), blk);
    const Eigen::Index post = dim / e.rows();
    e = kron(e, Matrix::Identity(post, post));
    acc = e * acc;
  }
  return acc;
}

inline Matrix random_unitary(Eigen::Index n, std::uint64_t seed) {
  Rng rng(seed);
  return haar_unitary(n, rng);
}

inline CVector random_state(Eigen::Index dim, std::uint64_t seed) {
  Rng rng(seed);
  CVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(rng.next_gaussian(), rng.next_gaussian());
  v.normalize();
  return v;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace casc::oracles
