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

#include <CLI11.hpp>
#include <iostream>

#include "casc/grid2d.hpp"
#include "casc/io.hpp"

namespace {

using namespace casc;

constexpr int kExitTolerance = 2;
constexpr int kExitValidation = 3;
constexpr int kExitGuard = 4;

std::variant<MNCascade, ControlCascade> load_cascade(const std::string& path) {
  return cascade_from_json(Json::parse(read_file(path)));
}

Circuit naive_of(const std::variant<MNCascade, ControlCascade>& c) {
  if (std::holds_alternative<MNCascade>(c)) return lower_naive(std::get<MNCascade>(c));
  return lower_naive(std::get<ControlCascade>(c));
}

struct CompileOptions {
  std::string pass = "mn-log";
  int block_size = 2;
  double epsilon = 0.0;
  bool grid = false;
};

CompiledCircuit run_pass(const std::variant<MNCascade, ControlCascade>& input,
                         const CompileOptions& opt,
                         std::vector<PrecomputeParts>* parts_out = nullptr) {
  if (opt.pass == "mn-log" || opt.grid) {
    if (!std::holds_alternative<MNCascade>(input))
      throw ValidationError("this pass expects a staircase of single-qubit gates");
    const MNCascade& mn = std::get<MNCascade>(input);
    if (opt.grid || opt.pass == "mn-2d") return compile_mn_2d(mn);
    return compile_mn_log_depth(mn, opt.block_size);
  }
  ControlCascade cc;
  if (std::holds_alternative<ControlCascade>(input)) {
    cc = std::get<ControlCascade>(input);
  } else {
    // a staircase is the k = 1 cascade with open branch fixed to identity
    const MNCascade& mn = std::get<MNCascade>(input);
    cc.k = 1;
    for (const Matrix& g : mn.gates) cc.blocks.emplace_back(Matrix::Identity(2, 2), g);
  }
  if (parts_out)
    for (const auto& [u0, u1] : cc.blocks) parts_out->push_back(precompute_identity(u0, u1));
  if (opt.pass == "exact-diagonal") return compile_exact_diagonal(cc);
  if (opt.pass == "select") return compile_select_exact(cc);
  if (opt.pass == "load") {
    if (!(opt.epsilon > 0)) throw ValidationError("pass=load requires --epsilon");
    return compile_load_approx(cc, opt.epsilon);
  }
  throw ValidationError("unknown pass: " + opt.pass);
}

int cmd_gen(const std::string& kind, int m, int k, const std::string& family, std::uint64_t seed,
            const std::string& out_path) {
  Json j;
  if (kind == "mn") {
    MNCascade c = family == "hadamard" ? mn_hadamard(m) : mn_random(m, seed);
    j = cascade_to_json(c);
  } else if (kind == "cascade") {
    j = cascade_to_json(cascade_random(k, m, seed));
  } else {
    throw ValidationError("unknown kind: " + kind);
  }
  write_file_atomic(out_path, j.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"casc: a depth compiler for controlled-unitary cascade circuits"};
  app.require_subcommand(1);

  std::string kind = "mn", family = "haar", pass = "mn-log", mode = "exact";
  std::vector<std::string> in_paths;
  std::string out_path, report_path, dump_parts_path;
  int m = 4, k = 1, block_size = 2, trials = 16;
  double epsilon = 0.0, tolerance = 1e-7;
  std::uint64_t seed = 1;
  bool grid = false;

  CLI::App* gen = app.add_subcommand("gen", "write a seeded cascade file");
  gen->add_option("--kind", kind, "mn or cascade");
  gen->add_option("--m", m, "number of gates or blocks");
  gen->add_option("--k", k, "body qubits for cascade kind");
  gen->add_option("--family", family, "haar or hadamard");
  gen->add_option("--seed", seed);
  gen->add_option("--out", out_path)->required();

  CLI::App* compile = app.add_subcommand("compile", "compile a cascade file");
  compile->add_option("--in", in_paths, "input cascade")->required();
  compile->add_option("--pass", pass, "mn-log | exact-diagonal | select | load");
  compile->add_option("--block-size", block_size);
  compile->add_option("--epsilon", epsilon);
  compile->add_flag("--grid", grid, "target the 2D grid backend");
  compile->add_option("--out", out_path, "circuit JSON output");
  compile->add_option("--report", report_path, "report JSON output");
  compile->add_option("--dump-parts", dump_parts_path, "precompute parts JSON output");

  CLI::App* verify = app.add_subcommand("verify", "check equivalence");
  verify->add_option("--in", in_paths, "cascade file, or two circuit files")->required();
  verify->add_option("--pass", pass);
  verify->add_option("--block-size", block_size);
  verify->add_option("--epsilon", epsilon);
  verify->add_flag("--grid", grid);
  verify->add_option("--mode", mode, "exact or sampled");
  verify->add_option("--trials", trials);
  verify->add_option("--tolerance", tolerance);
  verify->add_option("--seed", seed);
  verify->add_option("--out", out_path, "result JSON output");

  CLI::App* bench = app.add_subcommand("bench", "depth scaling table");
  std::vector<int> bench_ms{8, 16, 32, 64, 128, 256, 512, 1024};
  bench->add_option("--pass", pass);
  bench->add_option("--m", bench_ms, "sizes to measure");
  bench->add_option("--k", k);
  bench->add_option("--block-size", block_size);
  bench->add_option("--epsilon", epsilon);
  bench->add_flag("--grid", grid);
  bench->add_option("--seed", seed);
  bench->add_option("--out", out_path, "CSV output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(kind, m, k, family, seed, out_path);

    if (compile->parsed()) {
      const auto input = load_cascade(in_paths.at(0));
      CompileOptions opt{pass, block_size, epsilon, grid};
      std::vector<PrecomputeParts> parts;
      CompiledCircuit out = run_pass(input, opt, dump_parts_path.empty() ? nullptr : &parts);
      if (!out_path.empty())
        write_file_atomic(out_path, circuit_to_json(out.circuit).dump() + "\n");
      if (!report_path.empty())
        write_file_atomic(report_path, report_to_json(out.report).dump(2) + "\n");
      if (!dump_parts_path.empty()) {
        Json j = Json::array();
        for (const PrecomputeParts& p : parts) j.push_back(parts_to_json(p));
        write_file_atomic(dump_parts_path, j.dump() + "\n");
      }
      std::cout << report_to_json(out.report).dump(2) << "\n";
      return 0;
    }

    if (verify->parsed()) {
      EquivalenceResult result;
      if (in_paths.size() == 2) {
        Circuit a = circuit_from_json(Json::parse(read_file(in_paths[0])));
        Circuit b = circuit_from_json(Json::parse(read_file(in_paths[1])));
        result = mode == "exact" ? check_exact(a, b) : check_sampled(a, b, trials, seed);
      } else {
        const auto input = load_cascade(in_paths.at(0));
        CompileOptions opt{pass, block_size, epsilon, grid};
        CompiledCircuit out = run_pass(input, opt);
        const Circuit naive = naive_of(input);
        result = mode == "exact" ? check_exact(out.circuit, naive)
                                 : check_sampled(out.circuit, naive, trials, seed);
      }
      const Json j = equivalence_to_json(result);
      std::cout << j.dump(2) << "\n";
      if (!out_path.empty()) write_file_atomic(out_path, j.dump(2) + "\n");
      return result.distance <= tolerance ? 0 : kExitTolerance;
    }

    if (bench->parsed()) {
      std::ostringstream csv;
      csv << "m,k,pass,depth_basis,gate_count,ancilla_count\n";
      for (int mm : bench_ms) {
        std::variant<MNCascade, ControlCascade> input;
        if (pass == "mn-log" || grid)
          input = mn_random(mm, seed);
        else
          input = cascade_random(k, mm, seed);
        CompileOptions opt{pass, block_size, epsilon, grid};
        CompiledCircuit out = run_pass(input, opt);
        csv << mm << "," << k << "," << (grid ? "mn-2d" : pass) << "," << out.report.depth_basis
            << "," << out.report.gate_count << "," << out.report.ancilla_count << "\n";
      }
      if (!out_path.empty())
        write_file_atomic(out_path, csv.str());
      else
        std::cout << csv.str();
      return 0;
    }
  } catch (const GuardError& e) {
    std::cerr << "guard: " << e.what() << "\n";
    return kExitGuard;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}
