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

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace casc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/** Base class for all casc errors. */
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonUnitaryError : Error {
  using Error::Error;
};
struct DimensionError : Error {
  using Error::Error;
};
struct GuardError : Error {
  using Error::Error;
};
struct ValidationError : Error {
  using Error::Error;
};

/**
 * Global numeric policy. All tolerances used by the library live here so a
 * caller can tighten or relax them in one place.
 */
struct NumericPolicy {
  double unitary_tol = 1e-10;    // max-entry norm of U†U - I accepted as unitary
  double zero_stub_tol = 1e-8;   // sine values below this are treated as zero
  double phase_floor = 1e-10;    // smallest entry used for phase normalization
  double identity_skip = 0.0;    // only exactly-identity gates are dropped
  int cs_refine_iters = 60;      // cap on the Procrustes refinement loop
};

NumericPolicy& policy();

inline bool is_power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

inline int log2_exact(Eigen::Index n) {
  int q = 0;
  while ((Eigen::Index(1) << q) < n) ++q;
  if ((Eigen::Index(1) << q) != n) throw DimensionError("dimension is not a power of two");
  return q;
}

}  // namespace casc
