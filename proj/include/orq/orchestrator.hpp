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

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "orq/backend.hpp"
#include "orq/circuit.hpp"
#include "orq/error.hpp"
#include "orq/instantiate.hpp"
#include "orq/qasm.hpp"
#include "orq/resynth.hpp"
#include "orq/rewrite.hpp"
#include "orq/rng.hpp"

namespace orq {

enum class OrchestratorAction { RunRewrite = 0, RunResynth = 1, RunInstantiate = 2, Stop = 3 };
inline constexpr int kNumActions = 4;

inline std::string_view to_string(OrchestratorAction a) {
  switch (a) {
    case OrchestratorAction::RunRewrite: return "RunRewrite";
    case OrchestratorAction::RunResynth: return "RunResynth";
    case OrchestratorAction::RunInstantiate: return "RunInstantiate";
    case OrchestratorAction::Stop: return "Stop";
  }
  return "?";
}

struct CostWeights {
  double depth = 1.0;
  double gates = 1.0;
  double cx = 2.0;
  double fidelity = 4.0;

  void validate() const {
    if (depth < 0 || gates < 0 || cx < 0 || fidelity < 0) throw HyperparameterError("cost weights must be >= 0");
    if (depth + gates + cx + fidelity <= 0) throw HyperparameterError("at least one cost weight must be positive");
  }
};

/// Weighted cost of `c` relative to the reference `c0`. Depth and gate terms
/// are dropped when the reference value is zero.
inline double cost(const Circuit& c, const Circuit& c0, const DeviceProfile& p, const CostWeights& w) {
  const Metrics m = metrics(c), m0 = metrics(c0);
  double j = 0;
  if (m0.depth > 0) j += w.depth * m.depth / static_cast<double>(m0.depth);
  if (m0.total_gates > 0) j += w.gates * m.total_gates / static_cast<double>(m0.total_gates);
  j += w.cx * m.cx_count / static_cast<double>(std::max(m0.cx_count, 1));
  j += w.fidelity * (1.0 - estimate_fidelity(c, p));
  return j;
}

struct OrchestratorState {
  double gate_ratio = 1;
  double cx_ratio = 1;
  double depth_ratio = 1;
  double fidelity = 1;
  std::optional<OrchestratorAction> last_action;
  std::array<int, 3> pass_runs{};
  bool translated = false;
};

inline int ratio_bin(double r) {
  if (r < 0.25) return 0;
  if (r < 0.5) return 1;
  if (r < 0.75) return 2;
  if (r < 1.0) return 3;
  return 4;
}

inline int fidelity_bin(double f) {
  if (f < 0.5) return 0;
  if (f < 0.8) return 1;
  if (f < 0.95) return 2;
  return 3;
}

inline constexpr const char* kDiscretization =
    "ratio bins [0,.25) [.25,.5) [.5,.75) [.75,1) [1,inf); fidelity bins [0,.5) [.5,.8) [.8,.95) [.95,1]; "
    "last action (none + 4); translated flag";

/// Table key: gate, cx, depth ratio bins, fidelity bin, last action, translated.
inline std::string state_key(const OrchestratorState& s) {
  const int last = s.last_action ? static_cast<int>(*s.last_action) + 1 : 0;
  std::ostringstream os;
  os << ratio_bin(s.gate_ratio) << ',' << ratio_bin(s.cx_ratio) << ',' << ratio_bin(s.depth_ratio) << ','
     << fidelity_bin(s.fidelity) << ',' << last << ',' << (s.translated ? 1 : 0);
  return os.str();
}

struct OrchestratorConfig {
  CostWeights weights;
  double action_cost = 0.02;
  int max_steps = 8;
  int rewrite_budget = 256;
  ResynthOptions resynth;
  /// Null selects the greedy rewriter.
  std::optional<RewritePolicy> rewrite_policy;
};

/// Memo of pass results keyed by action and input circuit. Passes are
/// deterministic for a fixed config, so caching never changes outcomes.
class PassCache {
 public:
  std::optional<Circuit> find(OrchestratorAction a, const Circuit& c) const {
    auto it = map_.find(key(a, c));
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }
  void store(OrchestratorAction a, const Circuit& in, const Circuit& out) { map_.emplace(key(a, in), out); }
  std::size_t size() const { return map_.size(); }

 private:
  static std::string key(OrchestratorAction a, const Circuit& c) {
    return std::to_string(static_cast<int>(a)) + "|" + format_angle(c.global_phase()) + "|" + emit_qasm(c);
  }
  std::unordered_map<std::string, Circuit> map_;
};

inline Circuit run_action(OrchestratorAction a, const Circuit& c, const DeviceProfile& p,
                          const OrchestratorConfig& cfg, PassCache* cache = nullptr) {
  if (a == OrchestratorAction::Stop) return c;
  if (cache) {
    if (auto hit = cache->find(a, c)) return *hit;
  }
  Circuit out = c;
  switch (a) {
    case OrchestratorAction::RunRewrite:
      out = cfg.rewrite_policy ? rewrite_rl(c, *cfg.rewrite_policy, cfg.rewrite_budget)
                               : rewrite_greedy(c, cfg.rewrite_budget);
      break;
    case OrchestratorAction::RunResynth: out = resynth_pass(c, cfg.resynth); break;
    case OrchestratorAction::RunInstantiate: out = translate_to_native(c, p); break;
    case OrchestratorAction::Stop: break;
  }
  if (cache) cache->store(a, c, out);
  return out;
}

struct TraceEntry {
  OrchestratorAction action;
  double cost;
};

struct StepResult {
  double reward = 0;
  bool done = false;
};

/// One orchestration episode over a circuit.
class Episode {
 public:
  Episode(Circuit c0, const DeviceProfile& p, const OrchestratorConfig& cfg, PassCache* cache = nullptr)
      : c0_(std::move(c0)), cur_(c0_), best_(c0_), profile_(p), cfg_(cfg), cache_(cache) {
    cfg_.weights.validate();
    if (cfg_.max_steps < 0) throw HyperparameterError("max_steps must be >= 0");
    cur_cost_ = best_cost_ = cost(cur_, c0_, profile_, cfg_.weights);
    done_ = cfg_.max_steps == 0;
    refresh_state();
  }

  StepResult step(OrchestratorAction a) {
    if (done_) throw Error("episode already finished");
    if (a == OrchestratorAction::Stop) {
      done_ = true;
      trace_.push_back({a, cur_cost_});
      return {0.0, true};
    }
    const double before = cur_cost_;
    cur_ = run_action(a, cur_, profile_, cfg_, cache_);
    cur_cost_ = cost(cur_, c0_, profile_, cfg_.weights);
    ++steps_;
    ++state_.pass_runs[static_cast<std::size_t>(a)];
    state_.last_action = a;
    if (a == OrchestratorAction::RunInstantiate) state_.translated = true;
    if (cur_cost_ < best_cost_) {
      best_cost_ = cur_cost_;
      best_ = cur_;
    }
    trace_.push_back({a, cur_cost_});
    if (steps_ >= cfg_.max_steps) done_ = true;
    refresh_state();
    return {before - cur_cost_ - cfg_.action_cost, done_};
  }

  bool done() const { return done_; }
  const OrchestratorState& state() const { return state_; }
  std::string key() const { return state_key(state_); }
  const Circuit& current() const { return cur_; }
  const Circuit& best() const { return best_; }
  double current_cost() const { return cur_cost_; }
  double best_cost() const { return best_cost_; }
  const std::vector<TraceEntry>& trace() const { return trace_; }

 private:
  void refresh_state() {
    const Metrics m = metrics(cur_), m0 = metrics(c0_);
    auto ratio = [](int x, int x0) { return x0 > 0 ? x / static_cast<double>(x0) : (x > 0 ? 1.0 * x : 1.0); };
    state_.gate_ratio = ratio(m.total_gates, m0.total_gates);
    state_.depth_ratio = ratio(m.depth, m0.depth);
    state_.cx_ratio = m.cx_count / static_cast<double>(std::max(m0.cx_count, 1));
    if (m0.cx_count == 0 && m.cx_count == 0) state_.cx_ratio = 1.0;
    state_.fidelity = estimate_fidelity(cur_, profile_);
  }

  Circuit c0_, cur_, best_;
  const DeviceProfile& profile_;
  OrchestratorConfig cfg_;
  PassCache* cache_;
  double cur_cost_ = 0, best_cost_ = 0;
  int steps_ = 0;
  bool done_ = false;
  OrchestratorState state_;
  std::vector<TraceEntry> trace_;
};

using ActionValues = std::array<double, kNumActions>;

struct OrchestratorHyper {
  int episodes = 300;
  double alpha = 0.2;
  double gamma = 0.9;
  double epsilon_start = 0.4;
  double epsilon_end = 0.05;
};

struct OrchestratorPolicy {
  std::map<std::string, ActionValues> table;
  OrchestratorConfig config;
  OrchestratorHyper hyper;
  std::uint64_t seed = 0;
  std::string corpus_hash;

  ActionValues values(const std::string& key) const {
    auto it = table.find(key);
    return it == table.end() ? ActionValues{} : it->second;
  }
};

/// Ties go to the lowest action index.
inline OrchestratorAction argmax_action(const ActionValues& v) {
  return static_cast<OrchestratorAction>(std::max_element(v.begin(), v.end()) - v.begin());
}

struct TrainLogRow {
  int episode = 0;
  double cumulative_reward = 0;
  double final_cost = 0;
};

struct TrainResult {
  OrchestratorPolicy policy;
  std::vector<TrainLogRow> log;
};

/// FNV-1a over the emitted corpus, as 16 hex digits.
inline std::string corpus_hash(const std::vector<Circuit>& corpus) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 0x100000001b3ULL;
    }
  };
  for (const Circuit& c : corpus) mix(emit_qasm(c) + "\x1f");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline TrainResult train_orchestrator(const std::vector<Circuit>& corpus, const DeviceProfile& p,
                                      const OrchestratorConfig& cfg, const OrchestratorHyper& hyper,
                                      std::uint64_t seed) {
  if (corpus.empty()) throw HyperparameterError("corpus must be non-empty");
  detail::check_hyper(hyper.alpha, hyper.gamma, hyper.episodes);
  if (hyper.epsilon_start < 0 || hyper.epsilon_start > 1 || hyper.epsilon_end < 0 || hyper.epsilon_end > 1) {
    throw HyperparameterError("epsilon must lie in [0, 1]");
  }
  cfg.weights.validate();
  TrainResult out;
  out.policy.config = cfg;
  out.policy.hyper = hyper;
  out.policy.seed = seed;
  out.policy.corpus_hash = corpus_hash(corpus);
  auto& q = out.policy.table;
  Rng rng(seed);
  PassCache cache;
  for (int ep = 0; ep < hyper.episodes; ++ep) {
    Episode episode(corpus[static_cast<std::size_t>(ep) % corpus.size()], p, cfg, &cache);
    const double eps = detail::epsilon_at(hyper.epsilon_start, hyper.epsilon_end, ep, hyper.episodes);
    double total = 0;
    while (!episode.done()) {
      const std::string s = episode.key();
      ActionValues& qs = q[s];
      const OrchestratorAction a = rng.uniform() < eps ? static_cast<OrchestratorAction>(rng.below(kNumActions))
                                                       : argmax_action(qs);
      const StepResult r = episode.step(a);
      total += r.reward;
      double target = r.reward;
      if (!r.done) {
        const ActionValues next = out.policy.values(episode.key());
        target += hyper.gamma * *std::max_element(next.begin(), next.end());
      }
      auto& v = q[s][static_cast<std::size_t>(a)];
      v += hyper.alpha * (target - v);
    }
    out.log.push_back({ep, total, episode.current_cost()});
  }
  return out;
}

struct OrchestrationResult {
  Circuit circuit{1};
  double cost = 0;
  double initial_cost = 0;
  std::vector<TraceEntry> trace;
};

using ActionChooser = std::function<OrchestratorAction(const Episode&)>;

inline OrchestrationResult run_episode(const Circuit& c, const DeviceProfile& p, const OrchestratorConfig& cfg,
                                       const ActionChooser& choose, PassCache* cache = nullptr) {
  Episode ep(c, p, cfg, cache);
  OrchestrationResult out{c, ep.current_cost(), ep.current_cost(), {}};
  if (c.empty()) {
    ep.step(OrchestratorAction::Stop);
  } else {
    while (!ep.done()) ep.step(choose(ep));
  }
  out.circuit = ep.best();
  out.cost = ep.best_cost();
  out.trace = ep.trace();
  return out;
}

/// Greedy rollout of a trained policy. Returns the lowest-cost circuit visited.
inline OrchestrationResult orchestrate(const Circuit& c, const DeviceProfile& p, const OrchestratorPolicy& policy,
                                       PassCache* cache = nullptr) {
  return run_episode(c, p, policy.config,
                     [&](const Episode& ep) { return argmax_action(policy.values(ep.key())); }, cache);
}

/// Uniform-random action choice; the untrained baseline.
inline OrchestrationResult orchestrate_random(const Circuit& c, const DeviceProfile& p,
                                              const OrchestratorConfig& cfg, std::uint64_t seed,
                                              PassCache* cache = nullptr) {
  Rng rng(seed);
  return run_episode(
      c, p, cfg, [&](const Episode&) { return static_cast<OrchestratorAction>(rng.below(kNumActions)); }, cache);
}

/// Applies rewrite, resynthesis, then native translation once each and
/// reports the final circuit.
inline OrchestrationResult orchestrate_fixed(const Circuit& c, const DeviceProfile& p, const OrchestratorConfig& cfg,
                                             PassCache* cache = nullptr) {
  OrchestratorConfig local = cfg;
  local.max_steps = std::max(local.max_steps, 3);
  Episode ep(c, p, local, cache);
  OrchestrationResult out{c, ep.current_cost(), ep.current_cost(), {}};
  for (auto a : {OrchestratorAction::RunRewrite, OrchestratorAction::RunResynth, OrchestratorAction::RunInstantiate}) {
    ep.step(a);
  }
  out.circuit = ep.current();
  out.cost = ep.current_cost();
  out.trace = ep.trace();
  return out;
}

inline nlohmann::ordered_json config_to_json(const OrchestratorConfig& c) {
  nlohmann::ordered_json j;
  j["weights"] = {{"depth", c.weights.depth},
                  {"gates", c.weights.gates},
                  {"cx", c.weights.cx},
                  {"fidelity", c.weights.fidelity}};
  j["action_cost"] = c.action_cost;
  j["max_steps"] = c.max_steps;
  j["rewrite_budget"] = c.rewrite_budget;
  j["resynth"] = {{"tol", c.resynth.tol},
                  {"restarts", c.resynth.restarts},
                  {"max_iters", c.resynth.max_iters},
                  {"seed", c.resynth.seed},
                  {"use_lower_bound", c.resynth.use_lower_bound}};
  j["rewrite_policy"] = c.rewrite_policy ? rewrite_policy_to_json(*c.rewrite_policy) : nlohmann::ordered_json();
  return j;
}

inline OrchestratorConfig config_from_json(const nlohmann::json& j) {
  OrchestratorConfig c;
  const auto& w = j.at("weights");
  c.weights = {w.at("depth").get<double>(), w.at("gates").get<double>(), w.at("cx").get<double>(),
               w.at("fidelity").get<double>()};
  c.action_cost = j.at("action_cost").get<double>();
  c.max_steps = j.at("max_steps").get<int>();
  c.rewrite_budget = j.at("rewrite_budget").get<int>();
  const auto& r = j.at("resynth");
  c.resynth.tol = r.at("tol").get<double>();
  c.resynth.restarts = r.at("restarts").get<int>();
  c.resynth.max_iters = r.at("max_iters").get<int>();
  c.resynth.seed = r.at("seed").get<std::uint64_t>();
  c.resynth.use_lower_bound = r.at("use_lower_bound").get<bool>();
  if (!j.at("rewrite_policy").is_null()) c.rewrite_policy = rewrite_policy_from_json(j.at("rewrite_policy"));
  return c;
}

inline nlohmann::ordered_json orchestrator_policy_to_json(const OrchestratorPolicy& p) {
  nlohmann::ordered_json j;
  j["kind"] = "orchestrator-policy";
  j["discretization"] = kDiscretization;
  j["actions"] = {"RunRewrite", "RunResynth", "RunInstantiate", "Stop"};
  j["seed"] = p.seed;
  j["corpus_hash"] = p.corpus_hash;
  j["hyper"] = {{"episodes", p.hyper.episodes},
                {"alpha", p.hyper.alpha},
                {"gamma", p.hyper.gamma},
                {"epsilon_start", p.hyper.epsilon_start},
                {"epsilon_end", p.hyper.epsilon_end}};
  j["config"] = config_to_json(p.config);
  auto table = nlohmann::ordered_json::object();
  for (const auto& [key, vals] : p.table) table[key] = vals;
  j["table"] = table;
  return j;
}

inline OrchestratorPolicy orchestrator_policy_from_json(const nlohmann::json& j) {
  try {
    if (j.at("kind") != "orchestrator-policy") throw Error("not an orchestrator policy");
    OrchestratorPolicy p;
    p.seed = j.at("seed").get<std::uint64_t>();
    p.corpus_hash = j.at("corpus_hash").get<std::string>();
    const auto& h = j.at("hyper");
    p.hyper = {h.at("episodes").get<int>(), h.at("alpha").get<double>(), h.at("gamma").get<double>(),
               h.at("epsilon_start").get<double>(), h.at("epsilon_end").get<double>()};
    p.config = config_from_json(j.at("config"));
    for (const auto& [key, vals] : j.at("table").items()) p.table[key] = vals.get<ActionValues>();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed orchestrator policy: ") + e.what());
  }
}

}  // namespace orq
