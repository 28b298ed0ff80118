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

#include "casc/precompute.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace casc {

namespace {

Matrix projector(int bit) {
  Matrix p = Matrix::Zero(2, 2);
  p(bit, bit) = 1;
  return p;
}

// Σ_b rev(X_b) ⊗ |b><b| : the reversed block-diagonal factor of a CS
// decomposition, re-controlled from the bottom wire.
Matrix mux_rev_from_below(const Matrix& x0, const Matrix& x1) {
  return kron(rev(x0), projector(0)) + kron(rev(x1), projector(1));
}

std::vector<Matrix> build_r_cases(const CSDecomposition& cs) {
  return {rev(cs.t0).adjoint(), rev(cs.t1).adjoint(), rev(cs.s0), rev(cs.s1)};
}

CVector reversed_d_phases(const RVector& sigma1, const RVector& sigma2) {
  const Eigen::Index n = sigma1.size();
  CVector d(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i) = Complex(sigma1(i), -sigma2(i));
    d(n + i) = Complex(sigma1(i), sigma2(i));
  }
  const int bits = log2_exact(2 * n);
  CVector out(2 * n);
  for (Eigen::Index i = 0; i < 2 * n; ++i) {
    Eigen::Index r = 0;
    Eigen::Index x = i;
    for (int b = 0; b < bits; ++b) {
      r = (r << 1) | (x & 1);
      x >>= 1;
    }
    out(i) = d(r);
  }
  return out;
}

}  // namespace

PrecomputeParts precompute_identity(const Matrix& u0, const Matrix& u1) {
  if (u0.rows() != u0.cols() || u1.rows() != u1.cols() || u0.rows() != u1.rows())
    throw DimensionError("precompute_identity: dimension mismatch");
  if (!is_unitary(u0, policy().unitary_tol) || !is_unitary(u1, policy().unitary_tol))
    throw NonUnitaryError("precompute_identity: inputs not unitary");
  const int k = log2_exact(u0.rows());
  const Matrix w = rev(u1 * u0.adjoint());
  const CSDecomposition cs = cs_decompose(w);

  PrecomputeParts parts;
  parts.body_qubits = k;
  parts.d = reversed_d_phases(cs.sigma1, cs.sigma2);
  parts.p = mux_rev_from_below(cs.t0, cs.t1) * u0;
  parts.r_cases = build_r_cases(cs);
  return parts;
}

Circuit assemble_parts(const PrecomputeParts& parts) {
  const int k = parts.body_qubits;
  Circuit out;
  out.num_data_qubits = k + 1;
  std::vector<int> body(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) body[std::size_t(i)] = i + 1;
  out.add(Gate::controlled({}, parts.p, body));
  if (parts.q) {
    out.add(Gate::controlled({{0, true}}, *parts.q, {k}));
  } else {
    out.add(Gate::one_qubit(k, phi_gate()));
    CVector full(parts.d.size() * 2);
    full.head(parts.d.size()).setConstant(Complex(1, 0));
    full.tail(parts.d.size()) = parts.d;
    std::vector<int> all{0};
    all.insert(all.end(), body.begin(), body.end());
    out.add(Gate::diagonal(all, full));
    out.add(Gate::one_qubit(k, phi_gate().adjoint()));
  }
  if (k == 1) {
    CVector ph(4);
    for (int c = 0; c < 2; ++c)
      for (int b = 0; b < 2; ++b)
        ph(2 * c + b) = parts.r_cases[std::size_t(2 * c + b)](0, 0);
    out.add(Gate::diagonal({0, 1}, ph));
  } else {
    std::vector<int> middles(body.begin(), body.end() - 1);
    out.add(Gate::multiplexer({0, k}, parts.r_cases, middles));
  }
  return out;
}

RVector valley_stub_product(const ValleySpec& v) {
  v.validate();
  double s = 1.0;
  for (const Matrix& u : v.layers) {
    if (u.rows() != 2) throw DimensionError("valley_stub_product: layers must be single qubit");
    s *= std::abs(u(0, 1));
  }
  const Eigen::Index half = Eigen::Index(1) << (v.layers.size() - 1);
  return RVector::Constant(half, s);
}

Matrix dense_basic_valley(const Matrix& u, const Matrix& v) {
  const Eigen::Index du = u.rows();
  const Eigen::Index dr = v.rows() / 2;
  const Matrix cu = kron(u, kron(projector(1), Matrix::Identity(dr, dr))) +
                    kron(Matrix::Identity(du, du), kron(projector(0), Matrix::Identity(dr, dr)));
  const Matrix v_emb = kron(Matrix::Identity(du, du), v);
  return cu.adjoint() * v_emb * cu;
}

CSDecomposition valley_cs(const CSDecomposition& u_parts, const CSDecomposition& v_parts) {
  const Eigen::Index nu = u_parts.half_dim();  // = dim(u)/2
  const Eigen::Index nv = v_parts.half_dim();
  const Eigen::Index du = 2 * nu, dr = nv;
  const Eigen::Index half = nu * 2 * nv;  // half dimension of the valley

  CSDecomposition out;
  out.sigma2 = kron(kron(u_parts.sigma2, RVector::Ones(2)), v_parts.sigma2);
  out.sigma1.resize(half);
  for (Eigen::Index i = 0; i < half; ++i)
    out.sigma1(i) = std::sqrt(std::max(0.0, 1.0 - out.sigma2(i) * out.sigma2(i)));

  // Multiplexed one-qubit rotations on the middle wire, diagonalizing the
  // blocks B_j = [[b_j, a_j], [a_j, -b_j]] with a = (I ⊗ Σ1v), b = (Σ1u ⊗ Σ2v).
  const RVector a_list = kron(RVector::Ones(nu), v_parts.sigma1);
  const RVector b_list = kron(u_parts.sigma1, v_parts.sigma2);
  Matrix l_mux = Matrix::Zero(nu * 2 * nv, nu * 2 * nv);
  for (Eigen::Index iu = 0; iu < nu; ++iu) {
    for (Eigen::Index jv = 0; jv < nv; ++jv) {
      const double a = a_list(iu * nv + jv);
      const double b = b_list(iu * nv + jv);
      const double c = std::sqrt(a * a + b * b);
      Matrix lj(2, 2);
      if (c < 1e-14) {
        lj = Matrix::Identity(2, 2);
      } else if (b + c >= c - b) {
        const double n = std::sqrt(2.0 * c * (c + b));
        lj << Complex((b + c) / n, 0), Complex(a / n, 0), Complex(-a / n, 0),
            Complex((b + c) / n, 0);
      } else {
        const double n = std::sqrt(2.0 * c * (c - b));
        lj << Complex(a / n, 0), Complex((c - b) / n, 0), Complex((c - b) / n, 0),
            Complex(-a / n, 0);
      }
      for (int r = 0; r < 2; ++r)
        for (int cc = 0; cc < 2; ++cc)
          l_mux(iu * 2 * nv + r * nv + jv, iu * 2 * nv + cc * nv + jv) = lj(r, cc);
    }
  }

  const Matrix iu_id = Matrix::Identity(nu, nu);
  const Matrix ir_id = Matrix::Identity(nv, nv);
  Matrix z_mid = kron(Matrix::Identity(2 * nu, 2 * nu), kron([] {
                        Matrix z = Matrix::Zero(2, 2);
                        z(0, 0) = 1;
                        z(1, 1) = -1;
                        return z;
                      }(),
                      ir_id));
  Matrix x_mid = kron(Matrix::Identity(2 * nu, 2 * nu), kron([] {
                        Matrix x = Matrix::Zero(2, 2);
                        x(0, 1) = 1;
                        x(1, 0) = 1;
                        return x;
                      }(),
                      ir_id));

  const Matrix su_blocks = kron(projector(0), u_parts.s0) + kron(projector(1), u_parts.s1);
  const Matrix tu_blocks = kron(projector(0), u_parts.t0) + kron(projector(1), u_parts.t1);
  const Matrix mid_id = Matrix::Identity(2 * nv, 2 * nv);
  const Matrix su = kron(su_blocks, mid_id);
  const Matrix tu = kron(tu_blocks, mid_id);
  const Matrix f_left =
      su * kron(Matrix::Identity(du, du), kron(projector(0), v_parts.s0)) +
      tu.adjoint() * kron(Matrix::Identity(du, du), kron(projector(1), v_parts.s1));
  const Matrix f_right =
      su.adjoint() * kron(Matrix::Identity(du, du), kron(projector(0), v_parts.t0)) +
      tu * kron(Matrix::Identity(du, du), kron(projector(1), v_parts.t1));

  const Matrix l_full = kron(Matrix::Identity(2, 2), l_mux);
  // open-controlled / closed-controlled Z on the middle wire, control = top wire
  Matrix oz = Matrix::Identity(2 * half, 2 * half);
  Matrix cz = Matrix::Identity(2 * half, 2 * half);
  oz.topLeftCorner(half, half) = z_mid.topLeftCorner(half, half);
  cz.bottomRightCorner(half, half) = z_mid.topLeftCorner(half, half);

  const Matrix x_mid_half = x_mid.topLeftCorner(half, half);
  const Matrix s_full = f_left * l_full.adjoint() * oz;
  const Matrix t_full = cz * l_full * kron(Matrix::Identity(2, 2), x_mid_half) * f_right;

  out.s0 = s_full.topLeftCorner(half, half);
  out.s1 = s_full.bottomRightCorner(half, half);
  out.t0 = t_full.topLeftCorner(half, half);
  out.t1 = t_full.bottomRightCorner(half, half);
  return out;
}

PrecomputeParts mn_precompute(const std::vector<Matrix>& gates) {
  if (gates.empty()) throw ValidationError("mn_precompute: no gates");
  MNCascade run;
  run.gates = gates;
  run.validate();
  const int ell = int(gates.size());
  const ControlCascade grouped = group(run, ell);
  const Matrix& v0 = grouped.blocks[0].first;
  const Matrix& v1 = grouped.blocks[0].second;
  const Matrix w = rev(v1 * v0.adjoint());
  const CSDecomposition cs = cs_decompose(w);

  double s = 1.0;
  for (const Matrix& g : gates) s *= std::abs(g(0, 1));
  const double c = std::sqrt(std::max(0.0, 1.0 - s * s));
  for (Eigen::Index i = 0; i < cs.sigma2.size(); ++i)
    if (std::abs(cs.sigma2(i) - s) > 1e-7)
      throw Error("mn_precompute: sine spectrum is not constant");

  PrecomputeParts parts;
  parts.body_qubits = ell;
  parts.d = reversed_d_phases(cs.sigma1, cs.sigma2);
  parts.p = mux_rev_from_below(cs.t0, cs.t1) * v0;
  parts.r_cases = build_r_cases(cs);
  Matrix q(2, 2);
  q << Complex(c, 0), Complex(s, 0), Complex(-s, 0), Complex(c, 0);
  parts.q = q;
  return parts;
}

RefinedStubFactorResult refined_stub_factor(const ControlCascade& c) {
  c.validate();
  const int ell = c.num_blocks();
  const int d = c.num_qubits();
  for (int b = 0; b < ell; ++b)
    if (c.body_qubits(b) != c.k)
      throw DimensionError("refined_stub_factor: bodies must share one size");

  // The whole cascade as one multiplexer over the top wire: branch b applies
  // U_b of block 1 unconditionally, then the controlled remainder.
  auto branch = [&](int bit) {
    Circuit cc;
    cc.num_data_qubits = d - 1;
    const Matrix& first = bit ? c.blocks[0].second : c.blocks[0].first;
    std::vector<int> body0(static_cast<std::size_t>(c.k));
    for (int i = 0; i < c.k; ++i) body0[std::size_t(i)] = i;
    cc.add(Gate::controlled({}, first, body0));
    int wire = c.k;
    int ctrl = c.k - 1;
    for (int blk = 1; blk < ell; ++blk) {
      std::vector<int> body(static_cast<std::size_t>(c.k));
      for (int i = 0; i < c.k; ++i) body[std::size_t(i)] = wire + i;
      cc.add(Gate::multiplexer({ctrl}, {c.blocks[std::size_t(blk)].first,
                                        c.blocks[std::size_t(blk)].second}, body));
      wire += c.k;
      ctrl = wire - 1;
    }
    return unitary_of(cc);
  };
  const Matrix v0 = branch(0);
  const Matrix v1 = branch(1);
  const Matrix w = rev(v1 * v0.adjoint());
  CSDecomposition cs = cs_decompose(w);

  // Per-block sines and their tensor product.
  RVector sig2_hat = RVector::Ones(1);
  for (int blk = 0; blk < ell; ++blk) {
    const Matrix wj =
        rev(c.blocks[std::size_t(blk)].second * c.blocks[std::size_t(blk)].first.adjoint());
    if (c.k == 1) {
      RVector s(1);
      s(0) = std::abs(wj(0, 1));
      sig2_hat = kron(sig2_hat, s);
    } else {
      sig2_hat = kron(sig2_hat, cs_decompose(wj).sigma2);
    }
  }
  RVector sig1_hat(sig2_hat.size());
  for (Eigen::Index i = 0; i < sig2_hat.size(); ++i)
    sig1_hat(i) = std::sqrt(std::max(0.0, 1.0 - sig2_hat(i) * sig2_hat(i)));

  // Target arrangement: sines replicated over the first ell-1 wires.
  const Eigen::Index half = w.rows() / 2;
  const RVector target = kron(RVector::Ones(Eigen::Index(1) << (ell - 1)), sig2_hat);
  if (target.size() != half) throw DimensionError("refined_stub_factor: shape mismatch");

  // Align the computed decomposition to the target by value matching.
  std::vector<Eigen::Index> order_cs(static_cast<std::size_t>(half)), order_t(static_cast<std::size_t>(half));
  std::iota(order_cs.begin(), order_cs.end(), 0);
  std::iota(order_t.begin(), order_t.end(), 0);
  std::sort(order_cs.begin(), order_cs.end(),
            [&](Eigen::Index a, Eigen::Index b) { return cs.sigma2(a) < cs.sigma2(b); });
  std::sort(order_t.begin(), order_t.end(),
            [&](Eigen::Index a, Eigen::Index b) { return target(a) < target(b); });
  std::vector<Eigen::Index> pick(static_cast<std::size_t>(half));  // target index -> cs index
  for (std::size_t r = 0; r < std::size_t(half); ++r) {
    pick[std::size_t(order_t[r])] = order_cs[r];
    if (std::abs(cs.sigma2(order_cs[r]) - target(order_t[r])) > 1e-7)
      throw Error("refined_stub_factor: stub multisets disagree");
  }
  Matrix perm = Matrix::Zero(half, half);
  for (Eigen::Index i = 0; i < half; ++i) perm(pick[std::size_t(i)], i) = 1;
  CSDecomposition aligned;
  aligned.s0 = cs.s0 * perm;
  aligned.s1 = cs.s1 * perm;
  aligned.t0 = perm.transpose() * cs.t0;
  aligned.t1 = perm.transpose() * cs.t1;
  aligned.sigma1.resize(half);
  aligned.sigma2.resize(half);
  for (Eigen::Index i = 0; i < half; ++i) {
    aligned.sigma1(i) = cs.sigma1(pick[std::size_t(i)]);
    aligned.sigma2(i) = cs.sigma2(pick[std::size_t(i)]);
  }

  RefinedStubFactorResult out;
  out.d_prime.resize(2 * sig2_hat.size());
  for (Eigen::Index i = 0; i < sig2_hat.size(); ++i) {
    out.d_prime(i) = Complex(sig1_hat(i), -sig2_hat(i));
    out.d_prime(sig2_hat.size() + i) = Complex(sig1_hat(i), sig2_hat(i));
  }
  out.parts.body_qubits = d - 1;
  out.parts.d = reversed_d_phases(aligned.sigma1, aligned.sigma2);
  out.parts.p = mux_rev_from_below(aligned.t0, aligned.t1) * v0;
  out.parts.r_cases = build_r_cases(aligned);
  return out;
}

}  // namespace casc
