// Copyright 2026 The orq Authors
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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "orq/orq.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kUserError = 1;
constexpr int kVerifyFailed = 2;
constexpr int kInternal = 3;

/// Input problems the user can fix; reported with exit code 1.
class UsageError : public orq::Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

orq::Circuit load_circuit(const std::string& path) {
  try {
    const auto prog = orq::parse_qasm_program(read_file(path));
    for (const auto& w : prog.warnings) std::cerr << path << ": warning: " << w << '\n';
    return prog.circuit;
  } catch (const orq::ParseError& e) {
    throw UsageError(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " +
                     std::string(orq::to_string(e.category())) + ": " + e.message());
  }
}

/// A path to a profile file, or the name of a bundled profile.
orq::DeviceProfile load_profile_arg(const std::string& arg) {
  if (!fs::exists(arg)) {
    const auto& names = orq::bundled_profile_names();
    if (std::find(names.begin(), names.end(), arg) != names.end()) return orq::bundled_profile(arg);
    throw UsageError("profile not found: " + arg);
  }
  return orq::load_profile(read_file(arg));
}

orq::Policies load_policies(const std::string& path) {
  orq::Policies pol;
  if (path.empty()) return pol;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(path + ": invalid JSON: " + e.what());
  }
  const std::string kind = j.value("kind", "");
  if (kind == "orchestrator-policy") {
    pol.orchestrator = orq::orchestrator_policy_from_json(j);
  } else if (kind == "rewrite-policy") {
    pol.rewrite = orq::rewrite_policy_from_json(j);
  } else {
    throw UsageError(path + ": unknown policy kind '" + kind + "'");
  }
  return pol;
}

std::vector<orq::Circuit> load_corpus(const std::string& dir) {
  if (!fs::is_directory(dir)) throw UsageError("corpus directory not found: " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".qasm") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw UsageError("corpus directory has no .qasm files: " + dir);
  std::vector<orq::Circuit> corpus;
  for (const auto& f : files) corpus.push_back(load_circuit(f.string()));
  return corpus;
}

std::vector<orq::Pipeline> parse_pipelines(const std::string& list) {
  std::vector<orq::Pipeline> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "all") {
      out.insert(out.end(), orq::kAllPipelines.begin(), orq::kAllPipelines.end());
    } else if (!item.empty()) {
      out.push_back(orq::pipeline_from_string(item));
    }
  }
  if (out.empty()) throw UsageError("no pipelines given");
  return out;
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

struct OptimizeArgs {
  std::string input, profile, policy, pipeline = "orchestrated", out, report;
  std::uint64_t seed = 0;
  bool timings = false;
};

int cmd_optimize(const OptimizeArgs& a) {
  const orq::Circuit c = load_circuit(a.input);
  const orq::DeviceProfile p = load_profile_arg(a.profile);
  const orq::Policies pol = load_policies(a.policy);
  const auto r = orq::run_pipeline(c, p, orq::pipeline_from_string(a.pipeline), pol, a.seed);
  const std::string qasm = orq::emit_qasm(r.output_circuit);
  if (a.out.empty()) {
    std::cout << qasm;
  } else {
    write_file(a.out, qasm);
  }
  if (!a.report.empty()) write_file(a.report, dump(orq::report_to_json(r, a.timings)));
  std::cerr << r.pipeline << " on " << r.profile << ": gates " << r.input.total_gates << " -> "
            << r.optimized.total_gates << " (native " << r.output.total_gates << "), depth " << r.input.depth
            << " -> " << r.optimized.depth << ", cx " << r.input.cx_count << " -> " << r.optimized.cx_count
            << ", fidelity " << r.fidelity_before << " -> " << r.fidelity_after << '\n';
  return kOk;
}

struct TrainArgs {
  std::string what, corpus, profile, out, log, rewrite_policy;
  int episodes = 200;
  std::uint64_t seed = 0;
};

int cmd_train(const TrainArgs& a) {
  const auto corpus = load_corpus(a.corpus);
  if (a.what == "rewrite") {
    orq::RewriteHyper h;
    h.episodes = a.episodes;
    write_file(a.out, dump(orq::rewrite_policy_to_json(orq::train_rewrite_policy(corpus, h, a.seed))));
    return kOk;
  }
  if (a.profile.empty()) throw UsageError("train orchestrator requires --profile");
  const orq::DeviceProfile p = load_profile_arg(a.profile);
  orq::OrchestratorConfig cfg;
  if (!a.rewrite_policy.empty()) {
    auto pol = load_policies(a.rewrite_policy);
    if (!pol.rewrite) throw UsageError(a.rewrite_policy + " is not a rewrite policy");
    cfg.rewrite_policy = pol.rewrite;
  }
  orq::OrchestratorHyper h;
  h.episodes = a.episodes;
  const auto res = orq::train_orchestrator(corpus, p, cfg, h, a.seed);
  write_file(a.out, dump(orq::orchestrator_policy_to_json(res.policy)));
  if (!a.log.empty()) {
    std::ostringstream os;
    os << "episode,cumulative_reward,final_cost\n";
    for (const auto& row : res.log) {
      os << row.episode << ',' << orq::format_angle(row.cumulative_reward) << ','
         << orq::format_angle(row.final_cost) << '\n';
    }
    write_file(a.log, os.str());
  }
  return kOk;
}

struct BenchArgs {
  std::string suite, profile, pipelines = "all", out, policy;
  std::uint64_t seed = 0;
  bool timings = false;
};

int cmd_bench(const BenchArgs& a) {
  const orq::DeviceProfile p = load_profile_arg(a.profile);
  const auto suite = orq::make_suite(a.suite, a.seed, p.num_qubits);
  const auto table = orq::run_bench(suite, p, parse_pipelines(a.pipelines), load_policies(a.policy), a.seed);
  write_file((fs::path(a.out) / "bench.csv").string(), orq::bench_csv(table, a.timings));
  write_file((fs::path(a.out) / "bench.json").string(), dump(orq::bench_json(table, a.timings)));
  std::cerr << table.rows.size() << " rows written to " << a.out << '\n';
  return kOk;
}

int cmd_verify(const std::string& a, const std::string& b, double tol) {
  const orq::Circuit ca = load_circuit(a), cb = load_circuit(b);
  if (ca.num_qubits() != cb.num_qubits()) {
    std::cout << "not equivalent: " << ca.num_qubits() << " vs " << cb.num_qubits() << " qubits\n";
    return kVerifyFailed;
  }
  const double d = orq::phase_distance(orq::unitary(ca), orq::unitary(cb));
  if (d <= tol) {
    std::cout << "equivalent (distance " << orq::format_angle(d) << ")\n";
    return kOk;
  }
  std::cout << "not equivalent (distance " << orq::format_angle(d) << ")\n";
  return kVerifyFailed;
}

int cmd_profile_show(const std::string& path) {
  const orq::DeviceProfile p = load_profile_arg(path);
  std::cout << "name: " << p.name << '\n' << "qubits: " << p.num_qubits << '\n';
  std::cout << "coupling (" << p.coupling.size() << " edges):";
  for (const auto& e : p.coupling) std::cout << ' ' << e.first << '-' << e.second;
  std::cout << "\nnative gates:";
  for (auto k : p.native_gates) std::cout << ' ' << orq::mnemonic(k);
  std::cout << '\n';
  try {
    std::cout << "native family: " << orq::to_string(orq::native_family(p)) << '\n';
  } catch (const orq::UnsupportedNativeSet& e) {
    std::cout << "native family: unsupported (" << e.what() << ")\n";
  }
  std::cout << "degrees:";
  for (int q = 0; q < p.num_qubits; ++q) std::cout << ' ' << p.degree(q);
  std::cout << "\ndefault error: 1q " << orq::format_angle(p.default_err_1q) << ", 2q "
            << orq::format_angle(p.default_err_2q) << '\n';
  for (const auto& [k, v] : p.err_1q) std::cout << "error " << orq::mnemonic(k) << ": " << orq::format_angle(v) << '\n';
  for (const auto& [e, v] : p.err_2q) {
    std::cout << "error " << e.first << '-' << e.second << ": " << orq::format_angle(v) << '\n';
  }
  return kOk;
}

int cmd_generate(const std::string& suite_name, std::uint64_t seed, int max_qubits, const std::string& out) {
  const auto suite = orq::make_suite(suite_name, seed, max_qubits);
  for (const auto& e : suite.entries) {
    write_file((fs::path(out) / (e.id + ".qasm")).string(), "// " + e.spec + "\n" + orq::emit_qasm(e.circuit));
  }
  std::cerr << suite.entries.size() << " circuits written to " << out << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orq: quantum circuit optimizer"};
  app.require_subcommand(1);

  OptimizeArgs opt;
  auto* optimize = app.add_subcommand("optimize", "Optimize, route and translate a circuit");
  optimize->add_option("input", opt.input, "OpenQASM 2.0 input")->required();
  optimize->add_option("--profile", opt.profile, "Device profile (path or bundled name)")->required();
  optimize->add_option("--policy", opt.policy, "Trained policy JSON");
  optimize->add_option("--pipeline", opt.pipeline, "Pipeline id");
  optimize->add_option("--seed", opt.seed);
  optimize->add_option("--out", opt.out, "Output QASM (stdout if omitted)");
  optimize->add_option("--report", opt.report, "Report JSON");
  optimize->add_flag("--timings", opt.timings, "Include wall times in the report");

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "Train a rewrite or orchestrator policy");
  train->add_option("what", tr.what)->required()->check(CLI::IsMember({"rewrite", "orchestrator"}));
  train->add_option("--corpus", tr.corpus, "Directory of .qasm files")->required();
  train->add_option("--profile", tr.profile);
  train->add_option("--episodes", tr.episodes);
  train->add_option("--seed", tr.seed);
  train->add_option("--out", tr.out)->required();
  train->add_option("--log", tr.log, "Training log CSV (orchestrator)");
  train->add_option("--rewrite-policy", tr.rewrite_policy, "Rewrite policy used by RunRewrite");

  BenchArgs bn;
  auto* bench = app.add_subcommand("bench", "Run a benchmark suite");
  bench->add_option("--suite", bn.suite)->required()->check(CLI::IsMember(orq::suite_names()));
  bench->add_option("--profile", bn.profile)->required();
  bench->add_option("--pipelines", bn.pipelines, "Comma-separated pipeline ids or 'all'");
  bench->add_option("--seed", bn.seed);
  bench->add_option("--out", bn.out)->required();
  bench->add_option("--policy", bn.policy);
  bench->add_flag("--timings", bn.timings, "Fill the wall_ms column");

  std::string va, vb;
  double vtol = 1e-8;
  auto* verify = app.add_subcommand("verify", "Check unitary equivalence up to global phase");
  verify->add_option("a", va)->required();
  verify->add_option("b", vb)->required();
  verify->add_option("--tol", vtol);

  std::string show_path;
  auto* profile = app.add_subcommand("profile", "Device profile tools");
  profile->require_subcommand(1);
  auto* show = profile->add_subcommand("show", "Summarize a profile");
  show->add_option("profile", show_path)->required();

  std::string gen_suite, gen_out;
  std::uint64_t gen_seed = 0;
  int gen_max = 1 << 20;
  auto* generate = app.add_subcommand("generate", "Write a generated suite as .qasm files");
  generate->add_option("--suite", gen_suite)->required()->check(CLI::IsMember(orq::suite_names()));
  generate->add_option("--seed", gen_seed);
  generate->add_option("--max-qubits", gen_max);
  generate->add_option("--out", gen_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUserError;
  }

  try {
    if (*optimize) return cmd_optimize(opt);
    if (*train) return cmd_train(tr);
    if (*bench) return cmd_bench(bn);
    if (*verify) return cmd_verify(va, vb, vtol);
    if (*show) return cmd_profile_show(show_path);
    if (*generate) return cmd_generate(gen_suite, gen_seed, gen_max, gen_out);
  } catch (const orq::VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return kVerifyFailed;
  } catch (const orq::ProfileError& e) {
    std::cerr << "profile error: " << e.what() << '\n';
    return kUserError;
  } catch (const orq::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUserError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
