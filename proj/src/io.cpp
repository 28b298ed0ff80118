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

#include "casc/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace casc {

Json matrix_to_json(const Matrix& m) {
  Json j;
  j["dim"] = m.rows();
  Json entries = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      entries.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
  j["entries"] = std::move(entries);
  return j;
}

Matrix matrix_from_json(const Json& j) {
  const Eigen::Index dim = j.at("dim").get<Eigen::Index>();
  const Json& entries = j.at("entries");
  if (Eigen::Index(entries.size()) != dim * dim)
    throw ValidationError("matrix: entry count does not match dim");
  Matrix m(dim, dim);
  Eigen::Index i = 0;
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c, ++i)
      m(r, c) = Complex(entries[std::size_t(i)][0].get<double>(),
                        entries[std::size_t(i)][1].get<double>());
  return m;
}

namespace {

Json phases_to_json(const CVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out.push_back(Json::array({v(i).real(), v(i).imag()}));
  return out;
}

CVector phases_from_json(const Json& j) {
  CVector v(Eigen::Index(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(Eigen::Index(i)) = Complex(j[i][0].get<double>(), j[i][1].get<double>());
  return v;
}

Json gate_to_json(const Gate& g) {
  Json j;
  switch (g.kind) {
    case GateKind::OneQubit:
      j["kind"] = "one_qubit";
      j["qubits"] = g.targets;
      j["matrix"] = matrix_to_json(g.matrix);
      break;
    case GateKind::TwoQubit:
      j["kind"] = "two_qubit";
      j["qubits"] = g.targets;
      j["matrix"] = matrix_to_json(g.matrix);
      break;
    case GateKind::Controlled: {
      j["kind"] = "controlled";
      Json ctl = Json::array();
      for (auto& [w, closed] : g.controls) ctl.push_back(Json::array({w, closed ? 1 : 0}));
      j["controls"] = std::move(ctl);
      j["qubits"] = g.targets;
      j["matrix"] = matrix_to_json(g.matrix);
      break;
    }
    case GateKind::Multiplexer: {
      j["kind"] = "multiplexer";
      j["controls"] = g.ctrl_wires;
      j["qubits"] = g.targets;
      Json cases = Json::array();
      for (const Matrix& m : g.cases) cases.push_back(matrix_to_json(m));
      j["cases"] = std::move(cases);
      break;
    }
    case GateKind::Diagonal:
      j["kind"] = "diagonal";
      j["qubits"] = g.targets;
      j["phases"] = phases_to_json(g.phases);
      break;
    case GateKind::Swap:
      j["kind"] = "swap";
      j["qubits"] = g.targets;
      break;
    case GateKind::GlobalPhase:
      j["kind"] = "global_phase";
      j["angle"] = g.angle;
      break;
  }
  return j;
}

Gate gate_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "one_qubit")
    return Gate::one_qubit(j.at("qubits")[0].get<int>(), matrix_from_json(j.at("matrix")));
  if (kind == "two_qubit")
    return Gate::two_qubit(j.at("qubits")[0].get<int>(), j.at("qubits")[1].get<int>(),
                           matrix_from_json(j.at("matrix")));
  if (kind == "controlled") {
    std::vector<std::pair<int, bool>> ctl;
    for (const Json& c : j.at("controls"))
      ctl.emplace_back(c[0].get<int>(), c[1].get<int>() != 0);
    return Gate::controlled(std::move(ctl), matrix_from_json(j.at("matrix")),
                            j.at("qubits").get<std::vector<int>>());
  }
  if (kind == "multiplexer") {
    std::vector<Matrix> cases;
    for (const Json& c : j.at("cases")) cases.push_back(matrix_from_json(c));
    return Gate::multiplexer(j.at("controls").get<std::vector<int>>(), std::move(cases),
                             j.at("qubits").get<std::vector<int>>());
  }
  if (kind == "diagonal")
    return Gate::diagonal(j.at("qubits").get<std::vector<int>>(),
                          phases_from_json(j.at("phases")));
  if (kind == "swap")
    return Gate::swap(j.at("qubits")[0].get<int>(), j.at("qubits")[1].get<int>());
  if (kind == "global_phase") return Gate::global_phase(j.at("angle").get<double>());
  throw ValidationError("unknown gate kind: " + kind);
}

}  // namespace

Json circuit_to_json(const Circuit& c) {
  Json j;
  j["version"] = 1;
  j["num_data_qubits"] = c.num_data_qubits;
  j["num_ancilla"] = c.num_ancilla;
  if (c.connectivity.type == Connectivity::AllToAll) {
    j["connectivity"] = Json{{"type", "all_to_all"}};
  } else {
    j["connectivity"] = Json{{"type", "grid2d"},
                             {"width", c.connectivity.width},
                             {"height", c.connectivity.height},
                             {"placement", c.connectivity.placement}};
  }
  Json gates = Json::array();
  for (const Gate& g : c.gates) gates.push_back(gate_to_json(g));
  j["gates"] = std::move(gates);
  return j;
}

Circuit circuit_from_json(const Json& j) {
  Circuit c;
  c.num_data_qubits = j.at("num_data_qubits").get<int>();
  c.num_ancilla = j.at("num_ancilla").get<int>();
  const Json& conn = j.at("connectivity");
  if (conn.at("type").get<std::string>() == "grid2d")
    c.connectivity = Connectivity::grid(conn.at("width").get<int>(), conn.at("height").get<int>(),
                                        conn.at("placement").get<std::vector<int>>());
  for (const Json& g : j.at("gates")) c.add(gate_from_json(g));
  return c;
}

Json cascade_to_json(const MNCascade& c) {
  Json j;
  j["kind"] = "mn";
  Json gates = Json::array();
  for (const Matrix& g : c.gates) gates.push_back(matrix_to_json(g));
  j["gates"] = std::move(gates);
  return j;
}

Json cascade_to_json(const ControlCascade& c) {
  Json j;
  j["kind"] = "cascade";
  j["k"] = c.k;
  Json blocks = Json::array();
  for (const auto& [u0, u1] : c.blocks)
    blocks.push_back(Json::array({matrix_to_json(u0), matrix_to_json(u1)}));
  j["blocks"] = std::move(blocks);
  return j;
}

std::variant<MNCascade, ControlCascade> cascade_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "mn") {
    MNCascade c;
    for (const Json& g : j.at("gates")) c.gates.push_back(matrix_from_json(g));
    c.validate();
    return c;
  }
  if (kind == "cascade") {
    ControlCascade c;
    c.k = j.at("k").get<int>();
    for (const Json& b : j.at("blocks"))
      c.blocks.emplace_back(matrix_from_json(b[0]), matrix_from_json(b[1]));
    c.validate();
    return c;
  }
  throw ValidationError("unknown cascade kind: " + kind);
}

Json report_to_json(const CompilationReport& r) {
  Json j;
  j["depth_basis"] = r.depth_basis;
  j["gate_count"] = r.gate_count;
  j["ancilla_count"] = r.ancilla_count;
  j["apriori_error"] = r.apriori_error;
  if (r.measured_error)
    j["measured_error"] = *r.measured_error;
  else
    j["measured_error"] = "not-checked";
  return j;
}

Json equivalence_to_json(const EquivalenceResult& r) {
  Json j;
  j["mode"] = r.mode == EquivalenceResult::Exact ? "exact" : "sampled";
  j["distance"] = r.distance;
  j["trials"] = r.trials;
  j["ancilla_residual"] = r.ancilla_residual;
  j["seed"] = r.seed;
  return j;
}

Json parts_to_json(const PrecomputeParts& p) {
  Json j;
  j["body_qubits"] = p.body_qubits;
  j["p"] = matrix_to_json(p.p);
  j["d"] = phases_to_json(p.d);
  if (p.q) j["q"] = matrix_to_json(*p.q);
  Json cases = Json::array();
  for (const Matrix& m : p.r_cases) cases.push_back(matrix_to_json(m));
  j["r_cases"] = std::move(cases);
  return j;
}

namespace {

bool matches(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && (a - b).cwiseAbs().maxCoeff() < 1e-12;
}

Matrix cnot_matrix() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = 1;
  m(2, 3) = m(3, 2) = 1;
  return m;
}

Matrix cz_matrix() {
  Matrix m = Matrix::Identity(4, 4);
  m(3, 3) = -1;
  return m;
}

}  // namespace

std::string export_assembly(const Circuit& c) {
  std::ostringstream out;
  out << "// casc assembly export\n";
  out << "qubit q[" << c.total_qubits() << "];\n";
  for (const Gate& g : c.gates) {
    switch (g.kind) {
      case GateKind::OneQubit: {
        // zyz angles as a generic u gate plus a phase comment
        const Matrix& u = g.matrix;
        const Complex det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
        const double alpha = std::arg(det) / 2;
        const Matrix v = std::exp(Complex(0, -alpha)) * u;
        const double gamma = 2.0 * std::atan2(std::abs(v(1, 0)), std::abs(v(0, 0)));
        double sum = std::abs(v(0, 0)) > 1e-13 ? -2.0 * std::arg(v(0, 0)) : 0.0;
        double diff = std::abs(v(1, 0)) > 1e-13 ? 2.0 * std::arg(v(1, 0)) : 0.0;
        char buf[160];
        std::snprintf(buf, sizeof buf, "u(%.17g, %.17g, %.17g) q[%d]; // phase %.17g\n", gamma,
                      (sum + diff) / 2, (sum - diff) / 2, g.targets[0], alpha);
        out << buf;
        break;
      }
      case GateKind::TwoQubit:
        if (matches(g.matrix, cnot_matrix()))
          out << "cx q[" << g.targets[0] << "], q[" << g.targets[1] << "];\n";
        else if (matches(g.matrix, cz_matrix()))
          out << "cz q[" << g.targets[0] << "], q[" << g.targets[1] << "];\n";
        else
          out << "// unitary2q q[" << g.targets[0] << "], q[" << g.targets[1] << "]\n";
        break;
      case GateKind::Swap:
        out << "swap q[" << g.targets[0] << "], q[" << g.targets[1] << "];\n";
        break;
      case GateKind::GlobalPhase:
        out << "// global phase " << g.angle << "\n";
        break;
      default:
        throw ValidationError("export_assembly: lower the circuit to basis gates first");
    }
  }
  return out.str();
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + tmp);
    f << contents;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw Error("cannot write " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace casc
