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

// End-to-end acceptance suite: one pass/fail line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>

#include "casc/grid2d.hpp"
#include "casc/verify.hpp"

using namespace casc;

namespace {

int failures = 0;

void criterion(int number, const std::string& label, const std::function<bool(std::string&)>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = fn(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s  criterion %2d: %-38s (%5.1fs)  %s\n", ok ? "PASS" : "FAIL", number,
              label.c_str(), secs, detail.c_str());
  if (!ok) ++failures;
}

double minimax_affine_residual(const std::vector<double>& xs, const std::vector<double>& ys,
                               double a_lo, double a_hi, double c_lo, double c_hi) {
  double best = 1e18;
  for (double a = a_lo; a <= a_hi; a += 0.25) {
    for (double c = c_lo; c <= c_hi; c += 0.5) {
      double worst = 0.0;
      bool valid = true;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = a * xs[i] + c;
        if (f <= 1.0) {
          valid = false;
          break;
        }
        worst = std::max(worst, std::abs(ys[i] - f) / f);
      }
      if (valid) best = std::min(best, worst);
    }
  }
  return best;
}

Matrix unitary_with_spectrum(const RVector& sigma2, Rng& rng) {
  const Eigen::Index n = sigma2.size();
  CSDecomposition cs;
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

int main() {
  std::printf("casc acceptance suite\n");

  criterion(1, "staircase refutation, exact, no ancillae", [](std::string& detail) {
    double worst = 0.0;
    for (int m : {4, 6, 8, 10}) {
      MNCascade c = mn_random(m, 1);
      CompiledCircuit out = compile_mn_log_depth(c, 2);
      if (out.report.ancilla_count != 0) {
        detail = "ancillae present";
        return false;
      }
      EquivalenceResult r = check_exact(out.circuit, lower_naive(c));
      worst = std::max(worst, r.distance);
    }
    detail = "max distance " + std::to_string(worst);
    return worst <= 1e-7;
  });

  criterion(2, "log-depth scaling fit", [](std::string& detail) {
    std::vector<double> xs, ys;
    long long max_step = 0, prev = 0;
    for (int m : {8, 16, 32, 64, 128, 256, 512, 1024}) {
      MNCascade c = mn_random(m, 1);
      const long long d = compile_mn_log_depth(c, 2).report.depth_basis;
      if (!xs.empty()) max_step = std::max(max_step, d - prev);
      prev = d;
      xs.push_back(std::log2(double(m)));
      ys.push_back(double(d));
    }
    const double resid = minimax_affine_residual(xs, ys, 5, 90, -150, 200);
    detail = "minimax residual " + std::to_string(resid * 100) + "%, max doubling step " +
             std::to_string(max_step);
    return resid <= 0.10 && max_step <= 60;
  });

  criterion(3, "exact diagonal pass and depth model", [](std::string& detail) {
    double worst = 0.0;
    std::vector<double> f1s, f2s, ds;
    for (int k : {1, 2}) {
      for (int m : {2, 3, 4}) {
        ControlCascade c = cascade_random(k, m, 1);
        CompiledCircuit out = compile_exact_diagonal(c);
        if (out.report.ancilla_count != 0) {
          detail = "ancillae present";
          return false;
        }
        EquivalenceResult r = check_exact(out.circuit, lower_naive(c));
        worst = std::max(worst, r.distance);
        f1s.push_back(std::pow(4.0, k));
        f2s.push_back(double(m) * std::pow(2.0, k));
        ds.push_back(double(out.report.depth_basis));
      }
    }
    if (worst > 1e-8) {
      detail = "max distance " + std::to_string(worst);
      return false;
    }
    // two-parameter minimax fit over c1*4^k + c2*m*2^k
    double best = 1e18;
    for (double c1 = 0.0; c1 <= 40.0; c1 += 0.25) {
      for (double c2 = 0.0; c2 <= 40.0; c2 += 0.25) {
        double w = 0.0;
        bool valid = true;
        for (std::size_t i = 0; i < ds.size(); ++i) {
          const double f = c1 * f1s[i] + c2 * f2s[i];
          if (f <= 1.0) {
            valid = false;
            break;
          }
          w = std::max(w, std::abs(ds[i] - f) / f);
        }
        if (valid) best = std::min(best, w);
      }
    }
    detail = "max distance " + std::to_string(worst) + ", depth fit residual " +
             std::to_string(best * 100) + "%";
    return best <= 0.15;
  });

  criterion(4, "select pass, exact with one-hot caches", [](std::string& detail) {
    double worst = 0.0, residual = 0.0;
    for (int m : {2, 3}) {
      ControlCascade c = cascade_random(1, m, 1);
      CompiledCircuit out = compile_select_exact(c);
      if (out.report.ancilla_count != m * 4) {
        detail = "ancilla count " + std::to_string(out.report.ancilla_count);
        return false;
      }
      EquivalenceResult r = check_exact(out.circuit, lower_naive(c));
      worst = std::max(worst, r.distance);
      residual = std::max(residual, r.ancilla_residual);
    }
    detail = "max distance " + std::to_string(worst) + ", residual " + std::to_string(residual);
    return worst <= 1e-8 && residual <= 1e-9;
  });

  criterion(5, "load pass, approximate binary caches", [](std::string& detail) {
    char buf[160];
    std::string all;
    for (double eps : {1e-2, 1e-3, 1e-6}) {
      const int m = 2;
      ControlCascade c = cascade_random(1, m, 1);
      CompiledCircuit out = compile_load_approx(c, eps);
      const int r_bits = load_budget(m, eps).r;
      if (out.report.ancilla_count != 4 * m * r_bits) {
        detail = "ancilla count " + std::to_string(out.report.ancilla_count);
        return false;
      }
      const int trials = eps <= 1e-5 ? 6 : 12;
      EquivalenceResult r = check_sampled(out.circuit, lower_naive(c), trials, 1);
      std::snprintf(buf, sizeof buf, "eps %.0e: dist %.2e;", eps, r.distance);
      all += buf;
      if (!(r.distance <= eps)) {
        detail = all;
        return false;
      }
    }
    detail = all;
    return true;
  });

  criterion(6, "cosine-sine kernel on 500 unitaries", [](std::string& detail) {
    Rng rng(6001);
    double worst = 0.0, worst_pair = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
      const int pick = trial % 5;
      const Eigen::Index dim = 2 << pick;  // 2, 4, 8, 16, 32
      Matrix u;
      if (trial % 7 == 3) {
        // degenerate spectra: repeated, exact-zero, and exact-one cosines
        RVector s2(dim / 2);
        for (Eigen::Index i = 0; i < s2.size(); ++i) {
          const int mode = int(rng.next_u64() % 4);
          s2(i) = mode == 0 ? 0.0 : (mode == 1 ? 1.0 : (mode == 2 ? 0.5 : rng.next_double()));
        }
        u = unitary_with_spectrum(s2, rng);
      } else {
        u = haar_unitary(dim, rng);
      }
      const CSDecomposition cs = cs_decompose(u);
      worst = std::max(worst, (cs_reconstruct(cs) - u).cwiseAbs().maxCoeff());
      for (Eigen::Index i = 0; i < cs.sigma1.size(); ++i) {
        if (i + 1 < cs.sigma1.size() && cs.sigma1(i) > cs.sigma1(i + 1) + 1e-14) {
          detail = "sigma1 not ascending";
          return false;
        }
        worst_pair = std::max(worst_pair, std::abs(cs.sigma1(i) * cs.sigma1(i) +
                                                   cs.sigma2(i) * cs.sigma2(i) - 1.0));
      }
    }
    detail = "max reconstruction " + std::to_string(worst) + ", max pair defect " +
             std::to_string(worst_pair);
    return worst <= 1e-10 && worst_pair <= 1e-10;
  });

  criterion(7, "valley stub laws", [](std::string& detail) {
    // constant sines with the product value on single-qubit valleys
    for (int trial = 0; trial < 200; ++trial) {
      const int ell = 1 + trial % 6;
      MNCascade c = mn_random(ell, 7000 + std::uint64_t(trial));
      ValleySpec v;
      v.layers = c.gates;
      const RVector expect = valley_stub_product(v);
      const CSDecomposition cs = cs_decompose(dense_valley(v));
      const double spread = cs.sigma2.maxCoeff() - cs.sigma2.minCoeff();
      if (spread > 1e-9 || std::abs(cs.sigma2(0) - expect(0)) > 1e-9) {
        detail = "trial " + std::to_string(trial) + " spread " + std::to_string(spread);
        return false;
      }
    }
    // squared-sine multiset tensor law on mixed-size valleys
    for (int trial = 0; trial < 40; ++trial) {
      Rng rng(7500 + std::uint64_t(trial));
      ValleySpec v;
      const int layers = 2 + trial % 2;
      for (int i = 0; i < layers; ++i)
        v.layers.push_back(haar_unitary(rng.next_u64() % 2 ? 4 : 2, rng));
      RVector acc(1);
      acc(0) = 1.0;
      for (std::size_t l = v.layers.size(); l-- > 0;) {
        RVector s2;
        if (v.layers[l].rows() == 2) {
          s2.resize(1);
          s2(0) = std::abs(v.layers[l](0, 1));
        } else {
          s2 = cs_decompose(v.layers[l]).sigma2;
        }
        RVector sq(s2.size());
        for (Eigen::Index i = 0; i < s2.size(); ++i) sq(i) = s2(i) * s2(i);
        acc = (l + 1 == v.layers.size()) ? sq : RVector(kron(acc, kron(RVector::Ones(2), sq)));
      }
      RVector got = cs_decompose(dense_valley(v)).sigma2;
      for (Eigen::Index i = 0; i < got.size(); ++i) got(i) = got(i) * got(i);
      std::sort(got.begin(), got.end());
      std::sort(acc.begin(), acc.end());
      for (Eigen::Index i = 0; i < got.size(); ++i)
        if (std::abs(got(i) - acc(i)) > 1e-8) {
          detail = "multiset mismatch at trial " + std::to_string(trial);
          return false;
        }
    }
    detail = "200 single-qubit + 40 mixed valleys";
    return true;
  });

  criterion(8, "explicit valley decomposition", [](std::string& detail) {
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      Rng rng(8000 + std::uint64_t(trial));
      const Eigen::Index du = 2 << (trial % 3);  // 2, 4, 8
      const Eigen::Index dv = 2 << ((trial / 3) % 3);
      Matrix u = haar_unitary(du, rng);
      Matrix v = haar_unitary(dv, rng);
      const Matrix w = dense_basic_valley(u, v);
      const CSDecomposition wcs = valley_cs(cs_decompose(u), cs_decompose(v));
      worst = std::max(worst, (cs_reconstruct(wcs) - w).cwiseAbs().maxCoeff());
      // cosines match the singular values of the upper-left block
      Eigen::JacobiSVD<Matrix> sv(w.topLeftCorner(w.rows() / 2, w.rows() / 2));
      RVector c1 = wcs.sigma1, c2 = sv.singularValues();
      std::sort(c1.begin(), c1.end());
      std::sort(c2.begin(), c2.end());
      for (Eigen::Index i = 0; i < c1.size(); ++i)
        worst = std::max(worst, std::abs(c1(i) - c2(i)));
    }
    detail = "max deviation " + std::to_string(worst);
    return worst <= 1e-9;
  });

  criterion(9, "2d backend", [](std::string& detail) {
    std::vector<long long> depths;
    for (int m : {4, 16, 64, 256}) {
      MNCascade c = mn_random(m, 1);
      CompiledCircuit out = compile_mn_2d(c);
      if (!grid_adjacency_violations(out.circuit).empty()) {
        detail = "adjacency violation at m=" + std::to_string(m);
        return false;
      }
      if (out.report.depth_basis <
          lightcone_lower_bound(out.circuit.connectivity, 0, c.num_qubits() - 1)) {
        detail = "lightcone bound violated";
        return false;
      }
      if (m == 4) {
        EquivalenceResult r = check_sampled(out.circuit, lower_naive(c), 8, 1);
        if (r.distance > 1e-6 || r.ancilla_residual > 1e-9) {
          detail = "m=4 distance " + std::to_string(r.distance);
          return false;
        }
      }
      if (m >= 16) depths.push_back(out.report.depth_basis);
    }
    const double r1 = double(depths[1]) / double(depths[0]);
    const double r2 = double(depths[2]) / double(depths[1]);
    detail = "depth ratios " + std::to_string(r1) + ", " + std::to_string(r2);
    return r1 >= 1.6 && r1 <= 2.6 && r2 >= 1.6 && r2 <= 2.6;
  });

  criterion(10, "identity-level soundness", [](std::string& detail) {
    double worst = 0.0;
    for (int trial = 0; trial < 300; ++trial) {
      Rng rng(10000 + std::uint64_t(trial));
      const int k = 1 + trial % 3;
      Matrix u0 = haar_unitary(1 << k, rng);
      Matrix u1 = haar_unitary(1 << k, rng);
      PrecomputeParts p = precompute_identity(u0, u1);
      Matrix mux = Matrix::Zero(2 << k, 2 << k);
      mux.topLeftCorner(1 << k, 1 << k) = u0;
      mux.bottomRightCorner(1 << k, 1 << k) = u1;
      worst = std::max(worst, (unitary_of(assemble_parts(p)) - mux).cwiseAbs().maxCoeff());
    }
    for (int trial = 0; trial < 300; ++trial) {
      const int ell = 1 + trial % 4;
      MNCascade c = mn_random(ell, 11000 + std::uint64_t(trial));
      PrecomputeParts p = mn_precompute(c.gates);
      worst = std::max(
          worst, (unitary_of(assemble_parts(p)) - unitary_of(lower_naive(c))).cwiseAbs().maxCoeff());
    }
    for (int trial = 0; trial < 300; ++trial) {
      const int k = 1 + trial % 2;
      ControlCascade c = cascade_random(k, 2, 12000 + std::uint64_t(trial));
      RefinedStubFactorResult r = refined_stub_factor(c);
      worst = std::max(worst, (unitary_of(assemble_parts(r.parts)) - unitary_of(lower_naive(c)))
                                  .cwiseAbs()
                                  .maxCoeff());
    }
    detail = "max reassembly error " + std::to_string(worst) + " over 900 instances";
    return worst <= 1e-9;
  });

  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
