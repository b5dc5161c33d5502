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

#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "orq/backend.hpp"
#include "orq/circuit.hpp"
#include "orq/error.hpp"
#include "orq/instantiate.hpp"
#include "orq/orchestrator.hpp"
#include "orq/qasm.hpp"
#include "orq/rewrite.hpp"
#include "orq/rng.hpp"
#include "orq/route.hpp"
#include "orq/unitary.hpp"

namespace orq {

// ---------------------------------------------------------------------------
// Generators.

enum class QaoaGraph { Ring, Complete };

inline Circuit gen_qaoa(int n, int layers, QaoaGraph graph, std::uint64_t seed) {
  if (n < 2) throw HyperparameterError("gen_qaoa needs n >= 2");
  if (layers < 0) throw HyperparameterError("gen_qaoa needs layers >= 0");
  std::vector<std::pair<int, int>> edges;
  if (graph == QaoaGraph::Ring) {
    if (n == 2) {
      edges.emplace_back(0, 1);
    } else {
      for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  Rng rng(seed);
  auto open_angle = [&] {
    double a;
    do a = rng.uniform(0, 2 * kPi);
    while (a == 0.0);
    return a;
  };
  Circuit c(n);
  for (int q = 0; q < n; ++q) c.add(Gate::h(q));
  for (int l = 0; l < layers; ++l) {
    const double gamma = open_angle();
    const double beta = open_angle();
    for (auto [a, b] : edges) {
      c.add(Gate::cx(a, b));
      c.add(Gate::rz(gamma, b));
      c.add(Gate::cx(a, b));
    }
    for (int q = 0; q < n; ++q) c.add(Gate::rx(beta, q));
  }
  return c;
}

inline Circuit gen_vqe_ansatz(int n, int layers, std::uint64_t seed) {
  if (n < 1 || layers < 0) throw HyperparameterError("gen_vqe_ansatz needs n >= 1 and layers >= 0");
  Rng rng(seed);
  Circuit c(n);
  for (int l = 0; l < layers; ++l) {
    for (int q = 0; q < n; ++q) {
      c.add(Gate::ry(rng.uniform(0, 2 * kPi), q));
      c.add(Gate::rz(rng.uniform(0, 2 * kPi), q));
    }
    for (int q = 0; q + 1 < n; ++q) c.add(Gate::cx(q, q + 1));
  }
  return c;
}

/// Clifford+T Toffoli: 15 gates, 6 CX, exact (no phase).
inline void append_toffoli(Circuit& c, int c1, int c2, int t) {
  c.add(Gate::h(t));
  c.add(Gate::cx(c2, t));
  c.add(Gate::tdg(t));
  c.add(Gate::cx(c1, t));
  c.add(Gate::t(t));
  c.add(Gate::cx(c2, t));
  c.add(Gate::tdg(t));
  c.add(Gate::cx(c1, t));
  c.add(Gate::t(c2));
  c.add(Gate::t(t));
  c.add(Gate::h(t));
  c.add(Gate::cx(c1, c2));
  c.add(Gate::t(c1));
  c.add(Gate::tdg(c2));
  c.add(Gate::cx(c1, c2));
}

/// Qubit roles in the ripple-carry adder.
struct AdderLayout {
  int bits;
  int cin() const { return 0; }
  int a(int i) const { return 1 + i; }
  int b(int i) const { return 1 + bits + i; }
  int cout() const { return 1 + 2 * bits; }
  int num_qubits() const { return 2 * bits + 2; }
};

/// Ripple-carry (MAJ/UMA) adder: b <- a + b, carry into cout, a and cin restored.
inline Circuit gen_adder(int bits) {
  if (bits < 1 || bits > 3) throw HyperparameterError("gen_adder supports 1..3 bits");
  const AdderLayout L{bits};
  Circuit c(L.num_qubits());
  auto maj = [&](int x, int y, int z) {
    c.add(Gate::cx(z, y));
    c.add(Gate::cx(z, x));
    append_toffoli(c, x, y, z);
  };
  auto uma = [&](int x, int y, int z) {
    append_toffoli(c, x, y, z);
    c.add(Gate::cx(z, x));
    c.add(Gate::cx(x, y));
  };
  maj(L.cin(), L.b(0), L.a(0));
  for (int i = 1; i < bits; ++i) maj(L.a(i - 1), L.b(i), L.a(i));
  c.add(Gate::cx(L.a(bits - 1), L.cout()));
  for (int i = bits - 1; i >= 1; --i) uma(L.a(i - 1), L.b(i), L.a(i));
  uma(L.cin(), L.b(0), L.a(0));
  return c;
}

inline Circuit gen_clifford_t(int n, int depth_target, std::uint64_t seed) {
  if (n < 1 || depth_target < 0) throw HyperparameterError("gen_clifford_t needs n >= 1 and depth_target >= 0");
  Rng rng(seed);
  Circuit c(n);
  std::vector<int> layer(static_cast<std::size_t>(n), 0);
  int d = 0;
  const std::uint64_t kinds = n >= 2 ? 4 : 3;
  while (d < depth_target) {
    const auto k = rng.below(kinds);
    if (k == 3) {
      const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
      if (b >= a) ++b;
      c.add(Gate::cx(a, b));
      const int l = std::max(layer[static_cast<std::size_t>(a)], layer[static_cast<std::size_t>(b)]) + 1;
      layer[static_cast<std::size_t>(a)] = layer[static_cast<std::size_t>(b)] = l;
      d = std::max(d, l);
    } else {
      const int q = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      c.add(k == 0 ? Gate::h(q) : k == 1 ? Gate::s(q) : Gate::t(q));
      d = std::max(d, ++layer[static_cast<std::size_t>(q)]);
    }
  }
  return c;
}

/// Uniformly random gates over every supported kind with random angles.
inline Circuit gen_random_circuit(int n, int num_gates, std::uint64_t seed) {
  if (n < 1 || num_gates < 0) throw HyperparameterError("gen_random_circuit needs n >= 1 and num_gates >= 0");
  Rng rng(seed);
  std::vector<GateKind> kinds;
  for (GateKind k : kAllGateKinds) {
    if (n >= 2 || !is_two_qubit(k)) kinds.push_back(k);
  }
  Circuit c(n);
  for (int i = 0; i < num_gates; ++i) {
    const GateKind k = kinds[rng.below(kinds.size())];
    const auto info = kind_info(k);
    std::vector<int> qs;
    const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    qs.push_back(a);
    if (info.num_qubits == 2) {
      int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
      if (b >= a) ++b;
      qs.push_back(b);
    }
    std::vector<double> ps;
    for (int j = 0; j < info.num_params; ++j) ps.push_back(rng.uniform(0, 2 * kPi));
    c.add(Gate(k, std::move(qs), std::move(ps)));
  }
  return c;
}

/// Inserts identity pairs before gates with probability `rate`. `inserted`
/// receives the number of pairs added.
inline Circuit inject_redundancy(const Circuit& c, double rate, std::uint64_t seed, int* inserted = nullptr) {
  if (!(rate >= 0 && rate <= 1)) throw HyperparameterError("rate must lie in [0, 1]");
  Rng rng(seed);
  const int n = c.num_qubits();
  Circuit out = c.with_gates({});
  int count = 0;
  for (const Gate& g : c.gates()) {
    if (rng.bernoulli(rate)) {
      ++count;
      const auto kind = rng.below(n >= 2 ? 4 : 3);
      const int q = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      switch (kind) {
        case 0:
          out.add(Gate::h(q));
          out.add(Gate::h(q));
          break;
        case 1:
          out.add(Gate::x(q));
          out.add(Gate::x(q));
          break;
        case 2: {
          const double phi = rng.uniform(0, 2 * kPi);
          out.add(Gate::rz(phi, q));
          out.add(Gate::rz(-phi, q));
          break;
        }
        default: {
          int t = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
          if (t >= q) ++t;
          out.add(Gate::cx(q, t));
          out.add(Gate::cx(q, t));
        }
      }
    }
    out.add(g);
  }
  if (inserted) *inserted = count;
  return out;
}

/// Training/evaluation corpus item: Clifford+T with injected redundancy.
inline Circuit gen_redundant(int n, int depth_target, double rate, std::uint64_t seed) {
  return inject_redundancy(gen_clifford_t(n, depth_target, derive_seed(seed, 0)), rate, derive_seed(seed, 1));
}

// ---------------------------------------------------------------------------
// Suites.

struct BenchEntry {
  std::string id;
  std::string spec;
  Circuit circuit;
};

struct BenchSuite {
  std::string name;
  std::vector<BenchEntry> entries;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"qaoa", "vqe", "adder", "cliffordt", "redundancy", "all"};
  return names;
}

/// Regenerates a named suite; circuits wider than `max_qubits` are left out.
inline BenchSuite make_suite(const std::string& name, std::uint64_t seed, int max_qubits = 1 << 20) {
  BenchSuite s{name, {}};
  auto push = [&](std::string id, std::string spec, Circuit c) {
    if (c.num_qubits() <= max_qubits) s.entries.push_back({std::move(id), std::move(spec), std::move(c)});
  };
  const bool all = name == "all";
  bool known = all;
  if (all || name == "qaoa") {
    known = true;
    std::uint64_t k = 0;
    for (int n : {3, 4, 5}) {
      for (int p : {1, 2}) {
        const auto sd = derive_seed(seed, k++);
        push("qaoa_n" + std::to_string(n) + "_p" + std::to_string(p),
             "gen_qaoa(n=" + std::to_string(n) + ",p=" + std::to_string(p) + ",graph=ring,seed=" +
                 std::to_string(sd) + ")",
             gen_qaoa(n, p, QaoaGraph::Ring, sd));
      }
    }
  }
  if (all || name == "vqe") {
    known = true;
    std::uint64_t k = 0;
    for (int n : {2, 3, 4, 5}) {
      const auto sd = derive_seed(seed, 100 + k++);
      push("vqe_n" + std::to_string(n) + "_l2",
           "gen_vqe_ansatz(n=" + std::to_string(n) + ",layers=2,seed=" + std::to_string(sd) + ")",
           gen_vqe_ansatz(n, 2, sd));
    }
  }
  if (all || name == "adder") {
    known = true;
    for (int bits : {1, 2, 3}) {
      push("adder_" + std::to_string(bits), "gen_adder(bits=" + std::to_string(bits) + ")", gen_adder(bits));
    }
  }
  if (all || name == "cliffordt") {
    known = true;
    std::uint64_t k = 0;
    for (int n : {2, 3, 4, 5}) {
      for (int d : {10, 20}) {
        const auto sd = derive_seed(seed, 200 + k++);
        push("cliffordt_n" + std::to_string(n) + "_d" + std::to_string(d),
             "gen_clifford_t(n=" + std::to_string(n) + ",depth=" + std::to_string(d) + ",seed=" +
                 std::to_string(sd) + ")",
             gen_clifford_t(n, d, sd));
      }
    }
  }
  if (all || name == "redundancy") {
    known = true;
    for (int i = 0; i < 16; ++i) {
      const auto sd = derive_seed(seed, 300 + static_cast<std::uint64_t>(i));
      const int n = 2 + i % 3;
      push("redundancy_" + std::to_string(i),
           "gen_redundant(n=" + std::to_string(n) + ",depth=12,rate=0.35,seed=" + std::to_string(sd) + ")",
           gen_redundant(n, 12, 0.35, sd));
    }
  }
  if (!known) throw Error("unknown suite '" + name + "'");
  return s;
}

// ---------------------------------------------------------------------------
// Pipelines.

enum class Pipeline { Orchestrated, RewriteOnly, ResynthOnly, InstantiateOnly, FixedSequence, RandomPolicy };

inline constexpr std::array<Pipeline, 6> kAllPipelines{Pipeline::Orchestrated,    Pipeline::RewriteOnly,
                                                       Pipeline::ResynthOnly,     Pipeline::InstantiateOnly,
                                                       Pipeline::FixedSequence,   Pipeline::RandomPolicy};

inline std::string_view to_string(Pipeline p) {
  switch (p) {
    case Pipeline::Orchestrated: return "orchestrated";
    case Pipeline::RewriteOnly: return "rewrite_only";
    case Pipeline::ResynthOnly: return "resynth_only";
    case Pipeline::InstantiateOnly: return "instantiate_only";
    case Pipeline::FixedSequence: return "fixed_sequence";
    case Pipeline::RandomPolicy: return "random_policy";
  }
  return "?";
}

inline Pipeline pipeline_from_string(std::string_view s) {
  for (Pipeline p : kAllPipelines) {
    if (to_string(p) == s) return p;
  }
  throw Error("unknown pipeline '" + std::string(s) + "'");
}

struct Policies {
  std::optional<OrchestratorPolicy> orchestrator;
  std::optional<RewritePolicy> rewrite;
};

struct StageTimes {
  double optimize_ms = 0;
  double route_ms = 0;
  double translate_ms = 0;
  double verify_ms = 0;
};

struct OptimizationReport {
  std::string pipeline;
  std::string profile;
  std::uint64_t seed = 0;
  Metrics input;
  Metrics optimized;  // logical circuit after the optimization stage
  Metrics output;     // routed, native circuit
  double fidelity_before = 1;
  double fidelity_after = 1;
  double cost_before = 0;
  double cost_optimized = 0;
  std::vector<TraceEntry> trace;
  Layout layout;
  StageTimes times;
  bool unitary_checked = false;
  Circuit optimized_circuit{1};
  Circuit output_circuit{1};
};

struct PipelineOptions {
  /// Used when no orchestrator policy is supplied.
  OrchestratorConfig config;
  double verify_tol = 1e-6;
  int max_verify_qubits = 5;
};

namespace detail {

inline double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

inline OptimizationReport run_pipeline(const Circuit& c, const DeviceProfile& p, Pipeline pipeline,
                                       const Policies& policies, std::uint64_t seed,
                                       const PipelineOptions& opt = {}, PassCache* cache = nullptr) {
  using clock = std::chrono::steady_clock;
  if (c.num_qubits() > p.num_qubits) {
    throw InsufficientQubits("circuit needs " + std::to_string(c.num_qubits()) + " qubits, " + p.name + " has " +
                             std::to_string(p.num_qubits));
  }
  OrchestratorConfig cfg = policies.orchestrator ? policies.orchestrator->config : opt.config;
  if (policies.rewrite) cfg.rewrite_policy = policies.rewrite;
  cfg.resynth.seed = derive_seed(seed, 2);

  OptimizationReport r;
  r.pipeline = std::string(to_string(pipeline));
  r.profile = p.name;
  r.seed = seed;
  r.input = metrics(c);
  r.fidelity_before = estimate_fidelity(c, p);

  auto t0 = clock::now();
  OrchestrationResult res;
  auto single = [&](OrchestratorAction a) {
    OrchestratorConfig one = cfg;
    one.max_steps = std::max(one.max_steps, 1);
    Episode ep(c, p, one, cache);
    ep.step(a);
    return OrchestrationResult{ep.current(), ep.current_cost(), cost(c, c, p, one.weights), ep.trace()};
  };
  switch (pipeline) {
    case Pipeline::Orchestrated: {
      OrchestratorPolicy pol;
      if (policies.orchestrator) pol = *policies.orchestrator;
      pol.config = cfg;
      res = orchestrate(c, p, pol, cache);
      break;
    }
    case Pipeline::RewriteOnly: res = single(OrchestratorAction::RunRewrite); break;
    case Pipeline::ResynthOnly: res = single(OrchestratorAction::RunResynth); break;
    case Pipeline::InstantiateOnly: res = single(OrchestratorAction::RunInstantiate); break;
    case Pipeline::FixedSequence: res = orchestrate_fixed(c, p, cfg, cache); break;
    case Pipeline::RandomPolicy: res = orchestrate_random(c, p, cfg, derive_seed(seed, 1), cache); break;
  }
  r.times.optimize_ms = detail::ms_since(t0);
  r.optimized_circuit = res.circuit;
  r.optimized = metrics(res.circuit);
  r.cost_before = res.initial_cost;
  r.cost_optimized = res.cost;
  r.trace = res.trace;

  t0 = clock::now();
  RoutedCircuit routed = route(res.circuit, p, seed);
  r.times.route_ms = detail::ms_since(t0);
  r.layout = routed.layout;

  t0 = clock::now();
  r.output_circuit = translate_to_native(routed.circuit, p);
  r.times.translate_ms = detail::ms_since(t0);
  r.output = metrics(r.output_circuit);
  r.fidelity_after = estimate_fidelity(r.output_circuit, p);

  t0 = clock::now();
  const FeasibilityReport feas = check_feasibility(r.output_circuit, p);
  if (!feas.feasible || !verify_routed(r.output_circuit, p, r.layout, false)) {
    std::string msg = r.pipeline + ": output is not executable on " + p.name;
    if (!feas.violations.empty()) msg += " (" + feas.violations.front().detail + ")";
    throw VerificationError(msg);
  }
  if (c.num_qubits() <= opt.max_verify_qubits && p.num_qubits <= kMaxUnitaryQubits) {
    if (!circuits_equivalent(c, res.circuit, opt.verify_tol)) {
      throw VerificationError(r.pipeline + ": optimized circuit is not equivalent to the input");
    }
    if (!permuted_equivalence(c, r.output_circuit, r.layout, opt.verify_tol)) {
      throw VerificationError(r.pipeline + ": routed output is not equivalent to the input under its layout");
    }
    r.unitary_checked = true;
  }
  r.times.verify_ms = detail::ms_since(t0);
  return r;
}

inline nlohmann::ordered_json metrics_to_json(const Metrics& m) {
  nlohmann::ordered_json j;
  j["depth"] = m.depth;
  j["total_gates"] = m.total_gates;
  j["cx_count"] = m.cx_count;
  j["two_qubit_count"] = m.two_qubit_count;
  auto counts = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.counts_by_kind) counts[std::string(mnemonic(k))] = v;
  j["counts_by_kind"] = counts;
  return j;
}

inline nlohmann::ordered_json report_to_json(const OptimizationReport& r, bool timings = false) {
  nlohmann::ordered_json j;
  j["pipeline"] = r.pipeline;
  j["profile"] = r.profile;
  j["seed"] = r.seed;
  j["input"] = metrics_to_json(r.input);
  j["optimized"] = metrics_to_json(r.optimized);
  j["output"] = metrics_to_json(r.output);
  j["fidelity_before"] = r.fidelity_before;
  j["fidelity_after"] = r.fidelity_after;
  j["cost_before"] = r.cost_before;
  j["cost_optimized"] = r.cost_optimized;
  auto trace = nlohmann::ordered_json::array();
  for (const auto& t : r.trace) trace.push_back({{"action", to_string(t.action)}, {"cost", t.cost}});
  j["trace"] = trace;
  j["layout"] = {{"logical_qubits", r.layout.logical},
                 {"initial_map", r.layout.initial},
                 {"final_map", r.layout.final}};
  j["unitary_checked"] = r.unitary_checked;
  if (timings) {
    j["wall_ms"] = {{"optimize", r.times.optimize_ms},
                    {"route", r.times.route_ms},
                    {"translate", r.times.translate_ms},
                    {"verify", r.times.verify_ms}};
  }
  return j;
}

// ---------------------------------------------------------------------------
// Bench tables.

inline double percent_reduction(double before, double after) {
  return before > 0 ? 100.0 * (before - after) / before : 0.0;
}

struct BenchRow {
  std::string circuit_id;
  std::string pipeline;
  int qubits = 0;
  Metrics before;
  Metrics after;   // logical, optimized
  Metrics output;  // routed, native
  double fidelity_before = 1;
  double fidelity_after = 1;
  double gate_reduction = 0;
  double depth_reduction = 0;
  double cx_reduction = 0;
  double wall_ms = 0;
};

struct BenchTable {
  std::vector<BenchRow> rows;
};

inline BenchTable run_bench(const BenchSuite& suite, const DeviceProfile& p, const std::vector<Pipeline>& pipelines,
                            const Policies& policies, std::uint64_t seed, const PipelineOptions& opt = {}) {
  BenchTable t;
  PassCache cache;
  for (std::size_t i = 0; i < suite.entries.size(); ++i) {
    const BenchEntry& e = suite.entries[i];
    for (Pipeline pl : pipelines) {
      const auto r = run_pipeline(e.circuit, p, pl, policies, derive_seed(seed, i), opt, &cache);
      BenchRow row;
      row.circuit_id = e.id;
      row.pipeline = r.pipeline;
      row.qubits = e.circuit.num_qubits();
      row.before = r.input;
      row.after = r.optimized;
      row.output = r.output;
      row.fidelity_before = r.fidelity_before;
      row.fidelity_after = r.fidelity_after;
      row.gate_reduction = percent_reduction(r.input.total_gates, r.optimized.total_gates);
      row.depth_reduction = percent_reduction(r.input.depth, r.optimized.depth);
      row.cx_reduction = percent_reduction(r.input.cx_count, r.optimized.cx_count);
      row.wall_ms = r.times.optimize_ms + r.times.route_ms + r.times.translate_ms + r.times.verify_ms;
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

inline const std::vector<std::string>& bench_columns() {
  static const std::vector<std::string> cols{
      "circuit",        "pipeline",        "qubits",        "depth_before",    "gates_before",   "cx_before",
      "depth_after",    "gates_after",     "cx_after",      "depth_native",    "gates_native",   "cx_native",
      "fidelity_before", "fidelity_after", "gate_reduction_pct", "depth_reduction_pct", "cx_reduction_pct",
      "wall_ms"};
  return cols;
}

inline std::vector<double> row_values(const BenchRow& r) {
  return {static_cast<double>(r.qubits),  static_cast<double>(r.before.depth),
          static_cast<double>(r.before.total_gates), static_cast<double>(r.before.cx_count),
          static_cast<double>(r.after.depth),        static_cast<double>(r.after.total_gates),
          static_cast<double>(r.after.cx_count),     static_cast<double>(r.output.depth),
          static_cast<double>(r.output.total_gates), static_cast<double>(r.output.cx_count),
          r.fidelity_before,                         r.fidelity_after,
          r.gate_reduction,                          r.depth_reduction,
          r.cx_reduction,                            r.wall_ms};
}

/// Per-pipeline means of every numeric column, in first-seen pipeline order.
inline std::vector<std::pair<std::string, std::vector<double>>> bench_means(const BenchTable& t) {
  std::vector<std::pair<std::string, std::vector<double>>> out;
  std::vector<int> counts;
  for (const auto& r : t.rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& e) { return e.first == r.pipeline; });
    const auto vals = row_values(r);
    if (it == out.end()) {
      out.emplace_back(r.pipeline, std::vector<double>(vals.size(), 0.0));
      counts.push_back(0);
      it = out.end() - 1;
    }
    const auto idx = static_cast<std::size_t>(it - out.begin());
    for (std::size_t k = 0; k < vals.size(); ++k) it->second[k] += vals[k];
    ++counts[idx];
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (double& v : out[i].second) v /= counts[i];
  }
  return out;
}

inline std::string bench_csv(const BenchTable& t, bool timings = false) {
  std::ostringstream os;
  const auto& cols = bench_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& r : t.rows) {
    os << r.circuit_id << ',' << r.pipeline;
    const auto vals = row_values(r);
    for (std::size_t k = 0; k < vals.size(); ++k) {
      os << ',';
      if (k + 1 == vals.size() && !timings) continue;
      os << format_angle(vals[k]);
    }
    os << '\n';
  }
  return os.str();
}

inline nlohmann::ordered_json bench_json(const BenchTable& t, bool timings = false) {
  const auto& cols = bench_columns();
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : t.rows) {
    nlohmann::ordered_json j;
    j[cols[0]] = r.circuit_id;
    j[cols[1]] = r.pipeline;
    const auto vals = row_values(r);
    for (std::size_t k = 0; k < vals.size(); ++k) {
      if (cols[k + 2] == "wall_ms" && !timings) continue;
      j[cols[k + 2]] = vals[k];
    }
    rows.push_back(j);
  }
  auto means = nlohmann::ordered_json::object();
  for (const auto& [pl, vals] : bench_means(t)) {
    nlohmann::ordered_json m;
    for (std::size_t k = 0; k < vals.size(); ++k) {
      if (cols[k + 2] == "wall_ms" && !timings) continue;
      m[cols[k + 2]] = vals[k];
    }
    means[pl] = m;
  }
  return {{"rows", rows}, {"means", means}};
}

}  // namespace orq
