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

#include <cstdint>
#include <vector>

#include "casc/common.hpp"

namespace casc {

/**
 * Cosine-sine decomposition of a 2N x 2N unitary
 *   U = diag(s0, s1) · [[Σ1, Σ2], [-Σ2, Σ1]] · diag(t0, t1)
 * with sigma1 nondecreasing and sigma1²+sigma2² = 1 entrywise.
 */
struct CSDecomposition {
  Matrix s0, s1, t0, t1;
  RVector sigma1, sigma2;

  Eigen::Index half_dim() const { return sigma1.size(); }
};

/** max-entry norm of (U†U - I) ≤ tol. */
bool is_unitary(const Matrix& u, double tol);
double unitarity_defect(const Matrix& u);

Matrix identity(Eigen::Index n);

/** Kronecker product a ⊗ b. */
Matrix kron(const Matrix& a, const Matrix& b);
RVector kron(const RVector& a, const RVector& b);

/** Conjugation by the bit-reversal permutation on basis indices. */
Matrix rev(const Matrix& u);

/** Largest singular value of a - b. */
double op_norm_distance(const Matrix& a, const Matrix& b);
double op_norm(const Matrix& a);

struct Svd {
  Matrix u;        // left factor, columns orthonormal
  RVector s;       // nonincreasing
  Matrix v_dagger; // right factor; a = u · diag(s) · v_dagger
};
Svd svd(const Matrix& a);

/** Unitary polar factor (closest unitary in Frobenius norm). */
Matrix polar_unitary(const Matrix& a);

/** Orthonormal eigendecomposition a = v · diag(phases) · v† of a unitary. */
struct UnitaryEig {
  Matrix v;
  CVector phases;  // unit modulus
};
UnitaryEig unitary_eig(const Matrix& a);

/** The fixed gate Φ = (1/√2)[[1, i], [i, 1]] = √Z·H·√Z. */
const Matrix& phi_gate();

/** Deterministic Haar-random unitary from a 64-bit seed stream. */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  std::uint64_t next_u64();
  double next_double();      // uniform in [0, 1)
  double next_gaussian();
 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

Matrix haar_unitary(Eigen::Index n, Rng& rng);

/** CS decomposition; throws NonUnitaryError / DimensionError. */
CSDecomposition cs_decompose(const Matrix& u);

/** Multiplies the CS factors back together. */
Matrix cs_reconstruct(const CSDecomposition& cs);

/** The rotation core [[Σ1, Σ2], [-Σ2, Σ1]]. */
Matrix cs_core(const RVector& sigma1, const RVector& sigma2);

}  // namespace casc
