#include <doctest.h>

#include <casc/numerics.hpp>

#include "oracles.hpp"

using namespace casc;

TEST_CASE("kron identities") {
  CHECK(oracles::max_abs(kron(identity(2), identity(2)) - identity(4)) == 0.0);
  Matrix a = oracles::random_unitary(2, 11), b = oracles::random_unitary(4, 12);
  Matrix k = kron(a, b);
  CHECK(is_unitary(k, 1e-12));
  CHECK(std::abs(k(1, 2) - a(0, 0) * b(1, 2)) < 1e-15);
}

TEST_CASE("svd basics") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3;
  d(1, 1) = 1;
  Svd s = svd(d);
  CHECK(s.s(0) == doctest::Approx(3.0));
  CHECK(s.s(1) == doctest::Approx(1.0));

  Rng rng(5);
  Matrix g(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) g(i, j) = Complex(rng.next_gaussian(), rng.next_gaussian());
  Svd f = svd(g);
  Matrix rec = f.u * f.s.asDiagonal().toDenseMatrix().cast<Complex>() * f.v_dagger;
  CHECK(oracles::max_abs(rec - g) < 1e-10);
  for (int i = 0; i + 1 < 6; ++i) CHECK(f.s(i) >= f.s(i + 1));
}

TEST_CASE("rev single and two qubit") {
  Matrix u = oracles::random_unitary(2, 3);
  CHECK(oracles::max_abs(rev(u) - u) == 0.0);

  Matrix a = oracles::random_unitary(2, 4), b = oracles::random_unitary(2, 5);
  CHECK(oracles::max_abs(rev(kron(a, b)) - kron(b, a)) < 1e-15);
}

TEST_CASE("rev is conjugation by the bit-reversal permutation") {
  Matrix u = oracles::random_unitary(8, 7);
  Matrix p = oracles::bit_reversal_permutation(3);
  CHECK(oracles::max_abs(rev(u) - p * u * p) < 1e-14);
  CHECK(oracles::max_abs(rev(rev(u)) - u) < 1e-14);
  CHECK(is_unitary(rev(u), 1e-12));
}

TEST_CASE("op_norm_distance") {
  Matrix u = oracles::random_unitary(4, 9);
  CHECK(op_norm_distance(u, u) == doctest::Approx(0.0));
  CHECK(op_norm_distance(identity(4), -identity(4)) == doctest::Approx(2.0));

  Matrix a = oracles::random_unitary(8, 21), b = oracles::random_unitary(8, 22);
  Eigen::JacobiSVD<Matrix> full(a - b);
  CHECK(std::abs(op_norm_distance(a, b) - full.singularValues()(0)) < 1e-12);
  // symmetry and the triangle inequality on random triples
  Matrix c = oracles::random_unitary(8, 23);
  CHECK(std::abs(op_norm_distance(a, b) - op_norm_distance(b, a)) < 1e-12);
  CHECK(op_norm_distance(a, c) <= op_norm_distance(a, b) + op_norm_distance(b, c) + 1e-9);
}

TEST_CASE("op_norm power iteration path matches dense svd") {
  // 128-dim exercises the iterative branch
  Matrix a = oracles::random_unitary(128, 31), b = oracles::random_unitary(128, 32);
  Matrix d = a - b;
  Eigen::JacobiSVD<Matrix> full(d);
  CHECK(std::abs(op_norm(d) - full.singularValues()(0)) < 1e-9);
}

TEST_CASE("phi gate equals sqrtZ H sqrtZ") {
  Matrix sqz = Matrix::Zero(2, 2);
  sqz(0, 0) = 1;
  sqz(1, 1) = Complex(0, 1);
  Matrix h(2, 2);
  const double s = 1 / std::sqrt(2.0);
  h << Complex(s, 0), Complex(s, 0), Complex(s, 0), Complex(-s, 0);
  CHECK(oracles::max_abs(phi_gate() - sqz * h * sqz) < 1e-12);
}

TEST_CASE("cs_decompose identity and antidiagonal") {
  CSDecomposition cs = cs_decompose(identity(4));
  CHECK(oracles::max_abs(cs.s0 - identity(2)) < 1e-12);
  CHECK(oracles::max_abs(cs.s1 - identity(2)) < 1e-12);
  CHECK(oracles::max_abs(cs.t0 - identity(2)) < 1e-12);
  CHECK(oracles::max_abs(cs.t1 - identity(2)) < 1e-12);
  CHECK(cs.sigma1(0) == doctest::Approx(1.0));
  CHECK(cs.sigma1(1) == doctest::Approx(1.0));
  CHECK(cs.sigma2.maxCoeff() == doctest::Approx(0.0));

  Matrix u = Matrix::Zero(4, 4);
  u(0, 2) = u(1, 3) = 1;
  u(2, 0) = u(3, 1) = -1;
  CSDecomposition c2 = cs_decompose(u);
  CHECK(c2.sigma1.maxCoeff() == doctest::Approx(0.0));
  CHECK(c2.sigma2.minCoeff() == doctest::Approx(1.0));
  CHECK(oracles::max_abs(c2.s0 - identity(2)) < 1e-12);
  CHECK(oracles::max_abs(c2.t1 - identity(2)) < 1e-12);
  CHECK(oracles::max_abs(cs_reconstruct(c2) - u) < 1e-12);
}

TEST_CASE("cs_decompose random unitaries reconstruct") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Eigen::Index dim = 2 << (seed % 4);  // 2,4,8,16
    Matrix u = oracles::random_unitary(dim, 1000 + seed);
    CSDecomposition cs = cs_decompose(u);
    CHECK(oracles::max_abs(cs_reconstruct(cs) - u) < 1e-10);
    for (Eigen::Index i = 0; i + 1 < cs.sigma1.size(); ++i)
      CHECK(cs.sigma1(i) <= cs.sigma1(i + 1) + 1e-14);
    for (Eigen::Index i = 0; i < cs.sigma1.size(); ++i) {
      CHECK(std::abs(cs.sigma1(i) * cs.sigma1(i) + cs.sigma2(i) * cs.sigma2(i) - 1.0) < 1e-10);
      CHECK(cs.sigma1(i) >= 0.0);
      CHECK(cs.sigma2(i) >= 0.0);
    }
    CHECK(is_unitary(cs.s0, 1e-10));
    CHECK(is_unitary(cs.s1, 1e-10));
    CHECK(is_unitary(cs.t0, 1e-10));
    CHECK(is_unitary(cs.t1, 1e-10));
  }
}

namespace {

// Builds a unitary with a prescribed sine spectrum from random block factors.
Matrix with_spectrum(const RVector& sigma2, std::uint64_t seed) {
  const Eigen::Index n = sigma2.size();
  CSDecomposition cs;
  Rng rng(seed);
  cs.s0 = haar_unitary(n, rng);
  cs.s1 = haar_unitary(n, rng);
  cs.t0 = haar_unitary(n, rng);
  cs.t1 = haar_unitary(n, rng);
  cs.sigma2 = sigma2;
  cs.sigma1.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    cs.sigma1(i) = std::sqrt(std::max(0.0, 1.0 - sigma2(i) * sigma2(i)));
  return cs_reconstruct(cs);
}

}  // namespace

TEST_CASE("cs_decompose degenerate spectra") {
  // repeated cosines, exact zeros and ones, and barely-split clusters
  std::vector<RVector> spectra;
  {
    RVector s(4);
    s << 0.5, 0.5, 0.5, 0.5;
    spectra.push_back(s);
  }
  {
    RVector s(4);
    s << 0.0, 0.0, 1.0, 1.0;
    spectra.push_back(s);
  }
  {
    RVector s(4);
    s << 0.0, 1e-9, 0.3, 0.3 + 1e-9;
    spectra.push_back(s);
  }
  {
    RVector s(8);
    s << 0, 0, 1e-12, 0.7, 0.7, 0.7, 1.0, 1.0;
    spectra.push_back(s);
  }
  for (std::size_t i = 0; i < spectra.size(); ++i) {
    Matrix u = with_spectrum(spectra[i], 500 + i);
    CSDecomposition cs = cs_decompose(u);
    CAPTURE(i);
    CHECK(oracles::max_abs(cs_reconstruct(cs) - u) < 1e-10);
  }
}

TEST_CASE("cs_decompose determinism") {
  Matrix u = oracles::random_unitary(8, 77);
  CSDecomposition a = cs_decompose(u);
  CSDecomposition b = cs_decompose(u);
  CHECK((a.s0 - b.s0).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.t1 - b.t1).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.sigma1 - b.sigma1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("cs_decompose rejects bad input") {
  CHECK_THROWS_AS(cs_decompose(Matrix::Zero(4, 4)), NonUnitaryError);
  CHECK_THROWS_AS(cs_decompose(identity(3)), DimensionError);
  CHECK_THROWS_AS(rev(identity(3)), DimensionError);
}

TEST_CASE("haar unitary is deterministic and unitary") {
  Rng a(42), b(42);
  Matrix ua = haar_unitary(8, a), ub = haar_unitary(8, b);
  CHECK(oracles::max_abs(ua - ub) == 0.0);
  CHECK(is_unitary(ua, 1e-12));
}
