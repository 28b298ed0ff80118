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

#include "casc/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace casc {

NumericPolicy& policy() {
  static NumericPolicy p;
  return p;
}

bool is_unitary(const Matrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return unitarity_defect(u) <= tol;
}

double unitarity_defect(const Matrix& u) {
  Matrix g = u.adjoint() * u;
  g.diagonal().array() -= 1.0;
  return g.cwiseAbs().maxCoeff();
}

Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

RVector kron(const RVector& a, const RVector& b) {
  RVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) out(i * b.size() + j) = a(i) * b(j);
  return out;
}

namespace {

Eigen::Index bit_reverse(Eigen::Index x, int bits) {
  Eigen::Index out = 0;
  for (int i = 0; i < bits; ++i) {
    out = (out << 1) | (x & 1);
    x >>= 1;
  }
  return out;
}

}  // namespace

Matrix rev(const Matrix& u) {
  if (u.rows() != u.cols()) throw DimensionError("rev: matrix must be square");
  if (!is_power_of_two(u.rows())) throw DimensionError("rev: dimension is not a power of two");
  const int q = log2_exact(u.rows());
  Matrix out(u.rows(), u.cols());
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const Eigen::Index ri = bit_reverse(i, q);
    for (Eigen::Index j = 0; j < u.cols(); ++j) out(i, j) = u(ri, bit_reverse(j, q));
  }
  return out;
}

double op_norm(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  if (a.rows() <= 64 && a.cols() <= 64)
    return Eigen::JacobiSVD<Matrix>(a).singularValues()(0);
  return Eigen::BDCSVD<Matrix>(a).singularValues()(0);
}

double op_norm_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("op_norm_distance: dimension mismatch");
  return op_norm(a - b);
}

Svd svd(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> j(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Svd out;
  out.u = j.matrixU();
  out.s = j.singularValues();
  out.v_dagger = j.matrixV().adjoint();
  return out;
}

Matrix polar_unitary(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> j(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return j.matrixU() * j.matrixV().adjoint();
}

UnitaryEig unitary_eig(const Matrix& a) {
  // Schur form of a unitary matrix is diagonal, and the Schur basis is
  // orthonormal even for repeated eigenvalues.
  Eigen::ComplexSchur<Matrix> schur(a, true);
  UnitaryEig out;
  out.v = schur.matrixU();
  out.phases = schur.matrixT().diagonal();
  for (Eigen::Index i = 0; i < out.phases.size(); ++i) {
    const double m = std::abs(out.phases(i));
    if (m > 0) out.phases(i) /= m;
  }
  return out;
}

const Matrix& phi_gate() {
  static const Matrix phi = [] {
    Matrix m(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    m << Complex(s, 0), Complex(0, s), Complex(0, s), Complex(s, 0);
    return m;
  }();
  return phi;
}

std::uint64_t Rng::next_u64() {
  // splitmix64; deterministic across platforms.
  state_ += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double Rng::next_double() {
  return double(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = next_double(), u2 = next_double();
  while (u1 <= 1e-300) u1 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  have_spare_ = true;
  spare_ = r * std::sin(2.0 * M_PI * u2);
  return r * std::cos(2.0 * M_PI * u2);
}

Matrix haar_unitary(Eigen::Index n, Rng& rng) {
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = Complex(rng.next_gaussian(), rng.next_gaussian());
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double m = std::abs(d);
    q.col(j) *= (m > 0 ? d / m : Complex(1, 0));
  }
  return q;
}

Matrix cs_core(const RVector& sigma1, const RVector& sigma2) {
  const Eigen::Index n = sigma1.size();
  Matrix core = Matrix::Zero(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    core(i, i) = sigma1(i);
    core(i, n + i) = sigma2(i);
    core(n + i, i) = -sigma2(i);
    core(n + i, n + i) = sigma1(i);
  }
  return core;
}

Matrix cs_reconstruct(const CSDecomposition& cs) {
  const Eigen::Index n = cs.half_dim();
  Matrix out(2 * n, 2 * n);
  const Matrix core = cs_core(cs.sigma1, cs.sigma2);
  out.topLeftCorner(n, n) = cs.s0 * core.topLeftCorner(n, n) * cs.t0;
  out.topRightCorner(n, n) = cs.s0 * core.topRightCorner(n, n) * cs.t1;
  out.bottomLeftCorner(n, n) = cs.s1 * core.bottomLeftCorner(n, n) * cs.t0;
  out.bottomRightCorner(n, n) = cs.s1 * core.bottomRightCorner(n, n) * cs.t1;
  return out;
}

namespace {

double cs_block_error(const Matrix& u, const CSDecomposition& cs) {
  const Eigen::Index n = cs.half_dim();
  double e = 0.0;
  e = std::max(e, (cs.s0 * cs.sigma1.asDiagonal().toDenseMatrix().cast<Complex>() * cs.t0 -
                   u.topLeftCorner(n, n)).cwiseAbs().maxCoeff());
  e = std::max(e, (cs.s0 * cs.sigma2.asDiagonal().toDenseMatrix().cast<Complex>() * cs.t1 -
                   u.topRightCorner(n, n)).cwiseAbs().maxCoeff());
  e = std::max(e, (-(cs.s1 * cs.sigma2.asDiagonal().toDenseMatrix().cast<Complex>()) * cs.t0 -
                   u.bottomLeftCorner(n, n)).cwiseAbs().maxCoeff());
  e = std::max(e, (cs.s1 * cs.sigma1.asDiagonal().toDenseMatrix().cast<Complex>() * cs.t1 -
                   u.bottomRightCorner(n, n)).cwiseAbs().maxCoeff());
  return e;
}

}  // namespace

CSDecomposition cs_decompose(const Matrix& u) {
  if (u.rows() != u.cols()) throw DimensionError("cs_decompose: matrix must be square");
  if (u.rows() % 2 != 0) throw DimensionError("cs_decompose: odd dimension");
  if (!is_unitary(u, policy().unitary_tol))
    throw NonUnitaryError("cs_decompose: input is not unitary within tolerance");

  const Eigen::Index n = u.rows() / 2;
  const Matrix a = u.topLeftCorner(n, n);
  const Matrix b = u.topRightCorner(n, n);
  const Matrix c = u.bottomLeftCorner(n, n);
  const Matrix d = u.bottomRightCorner(n, n);

  CSDecomposition cs;

  // SVD of the upper-left block, singular values sorted ascending with a
  // stable permutation so that ties keep the solver's order.
  Eigen::JacobiSVD<Matrix> j(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  {
    const RVector sv = j.singularValues();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) order[std::size_t(i)] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index x, Eigen::Index y) { return sv(x) < sv(y); });
    cs.sigma1.resize(n);
    cs.s0.resize(n, n);
    Matrix v_sorted(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      cs.sigma1(i) = sv(order[std::size_t(i)]);
      cs.s0.col(i) = j.matrixU().col(order[std::size_t(i)]);
      v_sorted.col(i) = j.matrixV().col(order[std::size_t(i)]);
    }
    cs.t0 = v_sorted.adjoint();
  }

  // Within a cluster of equal cosines the SVD basis is arbitrary, but the
  // sines are only diagonal in the basis that also diagonalizes the u01
  // rows (s0†·u01·u01†·s0 and its u00 counterpart sum to the identity, so
  // one rotation settles both). The eigenvalues come back sine-ascending;
  // reverse so the cosine stays ascending inside the cluster.
  {
    Matrix y = cs.s0.adjoint() * b;
    Eigen::Index lo = 0;
    while (lo < n) {
      Eigen::Index hi = lo + 1;
      while (hi < n && cs.sigma1(hi) - cs.sigma1(hi - 1) < policy().zero_stub_tol) ++hi;
      if (hi - lo > 1) {
        const Matrix yc = y.middleRows(lo, hi - lo);
        const Matrix h = yc * yc.adjoint();
        const Complex mean = h.trace() / double(hi - lo);
        const double spread =
            (h - mean * Matrix::Identity(hi - lo, hi - lo)).cwiseAbs().maxCoeff();
        if (spread > 1e-26) {
          Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
          const Matrix q = eig.eigenvectors().rowwise().reverse();
          cs.s0.middleCols(lo, hi - lo) = cs.s0.middleCols(lo, hi - lo) * q;
          cs.t0.middleRows(lo, hi - lo) = q.adjoint() * cs.t0.middleRows(lo, hi - lo);
        }
      }
      lo = hi;
    }
  }

  // Phase convention: first sizable entry of each left singular vector is
  // made real positive; the compensating phase goes into the matching t0 row.
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index r = 0; r < n; ++r) {
      const Complex e = cs.s0(r, k);
      if (std::abs(e) > policy().phase_floor) {
        const Complex ph = e / std::abs(e);
        cs.s0.col(k) *= std::conj(ph);
        cs.t0.row(k) *= ph;
        break;
      }
    }
  }

  // Both spectra come from row norms of s0† times the top blocks, not from
  // sqrt(1 - σ²), which loses half the digits near an argument of one.
  const Matrix x = cs.s0.adjoint() * a;
  const Matrix y = cs.s0.adjoint() * b;
  cs.sigma2.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double c1 = x.row(k).norm(), c2 = y.row(k).norm();
    const double h = std::hypot(c1, c2);
    cs.sigma1(k) = c1 / h;
    cs.sigma2(k) = c2 / h;
  }

  const double zero_tol = 1e-12;

  // Orthogonalization helper that processes rows from most to least
  // trustworthy (largest row weight first), so that corrections land on the
  // rows whose accuracy budget allows them.
  const auto ordered_orthonormalize = [n](Matrix& m, const RVector& weight) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) order[std::size_t(i)] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index p, Eigen::Index q) { return weight(p) > weight(q); });
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index r = order[std::size_t(i)];
      for (Eigen::Index j = 0; j < i; ++j) {
        const Eigen::Index p = order[std::size_t(j)];
        m.row(r) -= m.row(p).dot(m.row(r)) * m.row(p);
      }
      const double nr = m.row(r).norm();
      if (nr > 0) m.row(r) /= nr;
    }
  };

  // t0 rows are re-derived from the u00 rows where the cosine is above the
  // noise floor; below it the SVD rows already provide a valid gauge.
  for (Eigen::Index k = 0; k < n; ++k)
    if (x.row(k).norm() >= zero_tol) cs.t0.row(k) = x.row(k) / x.row(k).norm();
  ordered_orthonormalize(cs.t0, cs.sigma1);

  // t1 rows where the sine is above the noise floor come from Σ2·t1 = s0†·u01
  // (the refinement below restores consistency of the remaining blocks); the
  // rest is an orthonormal completion closest to the identity rows.
  std::vector<Eigen::Index> small;
  cs.t1 = Matrix::Zero(n, n);
  Eigen::Index nf = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (y.row(k).norm() >= zero_tol) {
      cs.t1.row(k) = y.row(k) / y.row(k).norm();
      ++nf;
    } else {
      small.push_back(k);
    }
  }
  if (!small.empty()) {
    Matrix basis;
    if (nf == 0) {
      basis = Matrix::Identity(n, n);
    } else {
      Matrix rows_f(nf, n);
      Eigen::Index w = 0;
      for (Eigen::Index k = 0; k < n; ++k)
        if (y.row(k).norm() >= zero_tol) rows_f.row(w++) = cs.t1.row(k);
      Eigen::JacobiSVD<Matrix> jn(rows_f, Eigen::ComputeFullV);
      basis = jn.matrixV().rightCols(n - nf);  // null space of the fixed rows
    }
    // Procrustes fit of the free rows onto the identity rows they replace.
    Matrix g(small.size(), small.size());
    for (std::size_t r = 0; r < small.size(); ++r) g.row(r) = basis.row(small[r]);
    const Matrix omega = polar_unitary(g);
    const Matrix completion = omega * basis.adjoint();
    for (std::size_t r = 0; r < small.size(); ++r) cs.t1.row(small[r]) = completion.row(r);
  }
  ordered_orthonormalize(cs.t1, cs.sigma2);

  const Matrix sig1 = cs.sigma1.asDiagonal();
  const Matrix sig2 = cs.sigma2.asDiagonal();
  cs.s1 = -c * cs.t0.adjoint() * sig2 + d * cs.t1.adjoint() * sig1;
  {
    Matrix cols = cs.s1.transpose();
    ordered_orthonormalize(cols, cs.sigma2);
    cs.s1 = cols.transpose();
  }

  // Alternating Procrustes refinement over all four factors with the spectra
  // held fixed. Each update is the optimal unitary given the others, so the
  // total misfit is monotone; this absorbs the ill conditioning of tiny
  // sines, tiny cosines, and clustered singular values.
  double best = cs_block_error(u, cs);
  CSDecomposition keep = cs;
  for (int it = 0; it < policy().cs_refine_iters && best > 1e-13; ++it) {
    cs.t1 = polar_unitary(sig2 * cs.s0.adjoint() * b + sig1 * cs.s1.adjoint() * d);
    cs.t0 = polar_unitary(sig1 * cs.s0.adjoint() * a - sig2 * cs.s1.adjoint() * c);
    cs.s1 = polar_unitary(-c * cs.t0.adjoint() * sig2 + d * cs.t1.adjoint() * sig1);
    cs.s0 = polar_unitary(a * cs.t0.adjoint() * sig1 + b * cs.t1.adjoint() * sig2);
    const double e = cs_block_error(u, cs);
    if (e < best) {
      best = e;
      keep = cs;
    } else {
      break;
    }
  }
  return keep;
}

}  // namespace casc
