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
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "orq/circuit.hpp"
#include "orq/error.hpp"
#include "orq/rng.hpp"
#include "orq/unitary.hpp"

namespace orq {

/// The site no longer matches its rule in the circuit it was applied to.
class StaleSite : public Error {
 public:
  using Error::Error;
};

inline constexpr int kNumRules = 12;

/// Peephole rule metadata. Matching and replacement live in the rewrite engine;
/// rule k (1-based) is identified as "Rk".
struct RewriteRule {
  int number;
  std::string id;
  int arity;
  std::string description;
};

struct RewriteSite {
  int rule = 0;
  std::vector<std::size_t> gate_indices;

  std::string rule_id() const { return "R" + std::to_string(rule); }

  friend bool operator==(const RewriteSite&, const RewriteSite&) = default;
  friend bool operator<(const RewriteSite& a, const RewriteSite& b) {
    return std::tie(a.gate_indices.front(), a.rule, a.gate_indices) <
           std::tie(b.gate_indices.front(), b.rule, b.gate_indices);
  }
};

namespace detail {

inline bool is_diagonal(GateKind k) {
  switch (k) {
    case GateKind::Z: case GateKind::S: case GateKind::SDG: case GateKind::T: case GateKind::TDG: case GateKind::RZ:
      return true;
    default:
      return false;
  }
}

inline bool is_x_axis(GateKind k) { return k == GateKind::X || k == GateKind::SX || k == GateKind::RX; }

/// Sound but incomplete commutation test for two gates sharing qubits.
inline bool commutes(const Gate& a, const Gate& b) {
  if (a.arity() == 1 && b.arity() == 1) {
    if (a.qubit(0) != b.qubit(0)) return true;
    return (is_diagonal(a.kind()) && is_diagonal(b.kind())) || (is_x_axis(a.kind()) && is_x_axis(b.kind()));
  }
  if (a.arity() == 2 && b.arity() == 2) {
    if (a.kind() != GateKind::CX || b.kind() != GateKind::CX) return false;
    const bool same_control = a.qubit(0) == b.qubit(0);
    const bool same_target = a.qubit(1) == b.qubit(1);
    const bool crossed = a.qubit(0) == b.qubit(1) || a.qubit(1) == b.qubit(0);
    return !crossed && (same_control != same_target);
  }
  const Gate& two = a.arity() == 2 ? a : b;
  const Gate& one = a.arity() == 2 ? b : a;
  if (two.kind() != GateKind::CX) return false;
  if (one.qubit(0) == two.qubit(0)) return is_diagonal(one.kind());
  if (one.qubit(0) == two.qubit(1)) return is_x_axis(one.kind());
  return true;
}

/// Per-qubit neighbour links over a circuit's gate list.
class Adjacency {
 public:
  explicit Adjacency(const Circuit& c)
      : c_(c), next_(c.size(), {-1, -1}), prev_(c.size(), {-1, -1}) {
    std::vector<std::ptrdiff_t> last(static_cast<std::size_t>(c.num_qubits()), -1);
    for (std::size_t i = 0; i < c.size(); ++i) {
      const auto& qs = c[i].qubits();
      for (std::size_t k = 0; k < qs.size(); ++k) {
        auto& l = last[static_cast<std::size_t>(qs[k])];
        prev_[i][k] = l;
        if (l >= 0) {
          const auto& lq = c[static_cast<std::size_t>(l)].qubits();
          const std::size_t slot = lq[0] == qs[k] ? 0 : 1;
          next_[static_cast<std::size_t>(l)][slot] = static_cast<std::ptrdiff_t>(i);
        }
        l = static_cast<std::ptrdiff_t>(i);
      }
    }
  }

  const Circuit& circuit() const { return c_; }

  std::optional<std::size_t> next_on(std::size_t i, int q) const { return lookup(next_, i, q); }
  std::optional<std::size_t> prev_on(std::size_t i, int q) const { return lookup(prev_, i, q); }

 private:
  using Links = std::vector<std::array<std::ptrdiff_t, 2>>;

  std::optional<std::size_t> lookup(const Links& links, std::size_t i, int q) const {
    const auto& qs = c_[i].qubits();
    for (std::size_t k = 0; k < qs.size(); ++k) {
      if (qs[k] == q) {
        const auto v = links[i][k];
        if (v < 0) return std::nullopt;
        return static_cast<std::size_t>(v);
      }
    }
    return std::nullopt;
  }

  const Circuit& c_;
  Links next_;
  Links prev_;
};

}  // namespace detail

/// The rule catalog. Every entry is an identity up to global phase.
inline const std::vector<RewriteRule>& rule_catalog_metadata() {
  static const std::vector<RewriteRule> rules = {
      {1, "R1", 1, "H.H -> identity"},
      {2, "R2", 1, "X.X -> identity"},
      {3, "R3", 2, "CX.CX on the same operands -> identity"},
      {4, "R4", 1, "RZ(a).RZ(b) -> RZ(a+b)"},
      {5, "R5", 1, "RX(a).RX(b) -> RX(a+b)"},
      {6, "R6", 1, "T.T -> S"},
      {7, "R7", 1, "S.S -> Z"},
      {8, "R8", 1, "H.X.H -> Z"},
      {9, "R9", 1, "H.Z.H -> X"},
      {10, "R10", 1, "RZ/RX/RY by a multiple of 2pi -> identity"},
      {11, "R11", 2, "CX(a,b).X(a).CX(a,b) -> X(a).X(b)"},
      {12, "R12", 2, "swap commuting neighbours when that exposes a reducing rule"},
  };
  return rules;
}

namespace detail {

inline constexpr double kZeroAngleTol = 1e-12;

class RuleMatcher {
 public:
  explicit RuleMatcher(const Circuit& c) : c_(c), adj_(c) {}

  const Circuit& circuit() const { return c_; }

  /// Gate indices of rule `rule` (1..11) anchored at gate `i`, if it matches.
  std::optional<std::vector<std::size_t>> match_reducing(int rule, std::size_t i) const {
    const Gate& g = c_[i];
    switch (rule) {
      case 1: return pair_1q(i, GateKind::H);
      case 2: return pair_1q(i, GateKind::X);
      case 3: {
        if (g.kind() != GateKind::CX) return std::nullopt;
        const auto j = adj_.next_on(i, g.qubit(0));
        if (!j || adj_.next_on(i, g.qubit(1)) != j || c_[*j] != g) return std::nullopt;
        return std::vector<std::size_t>{i, *j};
      }
      case 4: return pair_1q(i, GateKind::RZ);
      case 5: return pair_1q(i, GateKind::RX);
      case 6: return pair_1q(i, GateKind::T);
      case 7: return pair_1q(i, GateKind::S);
      case 8: return sandwich(i, GateKind::X);
      case 9: return sandwich(i, GateKind::Z);
      case 10:
        if ((g.kind() == GateKind::RZ || g.kind() == GateKind::RX || g.kind() == GateKind::RY) &&
            angle_residue(g.param(0), 2 * kPi) < kZeroAngleTol) {
          return std::vector<std::size_t>{i};
        }
        return std::nullopt;
      case 11: {
        if (g.kind() != GateKind::CX) return std::nullopt;
        const int a = g.qubit(0), b = g.qubit(1);
        const auto j = adj_.next_on(i, a);
        if (!j || c_[*j].kind() != GateKind::X) return std::nullopt;
        const auto k = adj_.next_on(*j, a);
        if (!k || c_[*k] != g || adj_.next_on(i, b) != k) return std::nullopt;
        return std::vector<std::size_t>{i, *j, *k};
      }
      default: return std::nullopt;
    }
  }

  std::vector<RewriteSite> reducing_sites() const {
    std::vector<RewriteSite> out;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      for (int r = 1; r <= 11; ++r) {
        if (auto m = match_reducing(r, i)) out.push_back({r, std::move(*m)});
      }
    }
    return out;
  }

  /// Whether swapping gate i with its on-qubit successor j is a legal R12 site.
  bool r12_valid(std::size_t i, std::size_t j, const std::vector<bool>& in_reducing) const {
    if (j <= i || j >= c_.size()) return false;
    if (in_reducing[i] || in_reducing[j]) return false;
    const Gate& gi = c_[i];
    const Gate& gj = c_[j];
    std::optional<int> shared;
    for (int q : gi.qubits()) {
      if (gj.acts_on(q)) {
        if (shared) return false;
        shared = q;
      }
    }
    if (!shared || adj_.next_on(i, *shared) != j) return false;
    for (int q : gj.qubits()) {
      const auto p = adj_.prev_on(j, q);
      if (p && *p > i) return false;
    }
    if (!commutes(gi, gj)) return false;
    if (!pairable_neighbourhood(i, j, *shared)) return false;

    std::vector<Gate> gates = c_.gates();
    std::rotate(gates.begin() + static_cast<std::ptrdiff_t>(i), gates.begin() + static_cast<std::ptrdiff_t>(j),
                gates.begin() + static_cast<std::ptrdiff_t>(j) + 1);
    // rotate yields [g_j, g_i, between...]; that is the post-swap order.
    const Circuit swapped = c_.with_gates(std::move(gates));
    const RuleMatcher after(swapped);
    for (const auto& s : after.reducing_sites()) {
      for (std::size_t idx : s.gate_indices) {
        if (idx == i || idx == i + 1) return true;
      }
    }
    return false;
  }

  std::vector<RewriteSite> all_sites() const {
    std::vector<RewriteSite> out = reducing_sites();
    std::vector<bool> in_reducing(c_.size(), false);
    for (const auto& s : out) {
      for (std::size_t idx : s.gate_indices) in_reducing[idx] = true;
    }
    for (std::size_t i = 0; i < c_.size(); ++i) {
      std::set<std::size_t> seen;
      for (int q : c_[i].qubits()) {
        const auto j = adj_.next_on(i, q);
        if (j && seen.insert(*j).second && r12_valid(i, *j, in_reducing)) {
          out.push_back({12, {i, *j}});
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<bool> reducing_membership() const {
    std::vector<bool> in_reducing(c_.size(), false);
    for (const auto& s : reducing_sites()) {
      for (std::size_t idx : s.gate_indices) in_reducing[idx] = true;
    }
    return in_reducing;
  }

 private:
  std::optional<std::vector<std::size_t>> pair_1q(std::size_t i, GateKind kind) const {
    const Gate& g = c_[i];
    if (g.kind() != kind || g.arity() != 1) return std::nullopt;
    const auto j = adj_.next_on(i, g.qubit(0));
    if (!j || c_[*j].kind() != kind || c_[*j].arity() != 1) return std::nullopt;
    return std::vector<std::size_t>{i, *j};
  }

  std::optional<std::vector<std::size_t>> sandwich(std::size_t i, GateKind middle) const {
    const Gate& g = c_[i];
    if (g.kind() != GateKind::H) return std::nullopt;
    const int q = g.qubit(0);
    const auto j = adj_.next_on(i, q);
    if (!j || c_[*j].kind() != middle) return std::nullopt;
    const auto k = adj_.next_on(*j, q);
    if (!k || c_[*k].kind() != GateKind::H) return std::nullopt;
    return std::vector<std::size_t>{i, *j, *k};
  }

  static bool could_pair(const Gate& a, const Gate& b) {
    const GateKind ka = a.kind(), kb = b.kind();
    static const std::set<GateKind> self = {GateKind::H, GateKind::X, GateKind::CX, GateKind::RZ,
                                            GateKind::RX, GateKind::T, GateKind::S};
    if (ka == kb && self.count(ka)) return true;
    auto hxz = [](GateKind k) { return k == GateKind::H || k == GateKind::X || k == GateKind::Z; };
    if (hxz(ka) && hxz(kb) && (ka == GateKind::H || kb == GateKind::H)) return true;
    return (ka == GateKind::CX && kb == GateKind::X) || (ka == GateKind::X && kb == GateKind::CX);
  }

  // Cheap filter: after the swap, the new on-qubit neighbours must be able to
  // take part in some reducing rule.
  bool pairable_neighbourhood(std::size_t i, std::size_t j, int q) const {
    const auto p = adj_.prev_on(i, q);
    const auto n = adj_.next_on(j, q);
    if (p && could_pair(c_[*p], c_[j])) return true;
    if (n && could_pair(c_[i], c_[*n])) return true;
    return could_pair(c_[j], c_[i]);
  }

  const Circuit& c_;
  Adjacency adj_;
};

inline std::vector<Gate> replacement(int rule, const Circuit& c, const std::vector<std::size_t>& idx) {
  const Gate& first = c[idx.front()];
  switch (rule) {
    case 1: case 2: case 3: case 10: return {};
    case 4: return {Gate::rz(first.param(0) + c[idx[1]].param(0), first.qubit(0))};
    case 5: return {Gate::rx(first.param(0) + c[idx[1]].param(0), first.qubit(0))};
    case 6: return {Gate::s(first.qubit(0))};
    case 7: return {Gate::z(first.qubit(0))};
    case 8: return {Gate::z(first.qubit(0))};
    case 9: return {Gate::x(first.qubit(0))};
    case 11: return {Gate::x(first.qubit(0)), Gate::x(first.qubit(1))};
    case 12: return {c[idx[1]], c[idx[0]]};
    default: throw StaleSite("unknown rule R" + std::to_string(rule));
  }
}

/// Global phase alpha with window == e^{i alpha} replacement.
inline double window_phase(const std::vector<Gate>& window, const std::vector<Gate>& repl) {
  std::vector<int> qubits;
  for (const auto& g : window) {
    for (int q : g.qubits()) {
      if (std::find(qubits.begin(), qubits.end(), q) == qubits.end()) qubits.push_back(q);
    }
  }
  std::vector<int> map(static_cast<std::size_t>(*std::max_element(qubits.begin(), qubits.end())) + 1, 0);
  for (std::size_t k = 0; k < qubits.size(); ++k) map[static_cast<std::size_t>(qubits[k])] = static_cast<int>(k);
  std::vector<Gate> lw, lr;
  for (const auto& g : window) lw.push_back(g.relabeled(map));
  for (const auto& g : repl) lr.push_back(g.relabeled(map));
  const int n = static_cast<int>(qubits.size());
  return relative_phase(gates_unitary(lw, n), gates_unitary(lr, n));
}

}  // namespace detail

/// All rewrite sites, ordered by first gate index then rule number.
inline std::vector<RewriteSite> find_sites(const Circuit& c) { return detail::RuleMatcher(c).all_sites(); }

/// Applies a site after re-matching it; throws StaleSite if it no longer holds.
inline Circuit apply_site(const Circuit& c, const RewriteSite& s) {
  if (s.gate_indices.empty() || s.rule < 1 || s.rule > kNumRules) throw StaleSite("malformed site");
  for (std::size_t k = 0; k < s.gate_indices.size(); ++k) {
    if (s.gate_indices[k] >= c.size() || (k && s.gate_indices[k] <= s.gate_indices[k - 1])) {
      throw StaleSite(s.rule_id() + ": indices out of range");
    }
  }
  const detail::RuleMatcher m(c);
  if (s.rule == 12) {
    if (s.gate_indices.size() != 2 ||
        !m.r12_valid(s.gate_indices[0], s.gate_indices[1], m.reducing_membership())) {
      throw StaleSite("R12 site no longer valid");
    }
  } else {
    const auto match = m.match_reducing(s.rule, s.gate_indices.front());
    if (!match || *match != s.gate_indices) throw StaleSite(s.rule_id() + " site no longer matches");
  }

  std::vector<Gate> window;
  for (std::size_t idx : s.gate_indices) window.push_back(c[idx]);
  std::vector<Gate> repl = detail::replacement(s.rule, c, s.gate_indices);
  const double phase = s.rule == 12 ? 0.0 : detail::window_phase(window, repl);

  std::vector<Gate> gates;
  gates.reserve(c.size() - window.size() + repl.size());
  std::size_t next_match = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (next_match < s.gate_indices.size() && s.gate_indices[next_match] == i) {
      if (next_match == 0) gates.insert(gates.end(), repl.begin(), repl.end());
      ++next_match;
      continue;
    }
    gates.push_back(c[i]);
  }
  Circuit out = c.with_gates(std::move(gates));
  out.add_global_phase(phase);
  return out;
}

/// Applies the first site in deterministic order until none remain or the step budget runs out.
inline Circuit rewrite_greedy(const Circuit& c, int max_steps) {
  if (max_steps < 0) throw HyperparameterError("max_steps must be >= 0");
  Circuit cur = c;
  for (int step = 0; step < max_steps; ++step) {
    const auto sites = find_sites(cur);
    if (sites.empty()) break;
    cur = apply_site(cur, sites.front());
  }
  return cur;
}

/// Sample windows for each rule, used by the registration self-test.
inline std::vector<Circuit> rule_samples(int rule) {
  const double a = 0.7311, b = 2.2;
  switch (rule) {
    case 1: return {Circuit(1, {Gate::h(0), Gate::h(0)})};
    case 2: return {Circuit(1, {Gate::x(0), Gate::x(0)})};
    case 3: return {Circuit(2, {Gate::cx(0, 1), Gate::cx(0, 1)}), Circuit(2, {Gate::cx(1, 0), Gate::cx(1, 0)})};
    case 4:
      return {Circuit(1, {Gate::rz(a, 0), Gate::rz(b, 0)}), Circuit(1, {Gate::rz(3 * kPi, 0), Gate::rz(2 * kPi, 0)}),
              Circuit(1, {Gate::rz(-a, 0), Gate::rz(a, 0)})};
    case 5: return {Circuit(1, {Gate::rx(a, 0), Gate::rx(b, 0)}), Circuit(1, {Gate::rx(3.5 * kPi, 0), Gate::rx(1, 0)})};
    case 6: return {Circuit(1, {Gate::t(0), Gate::t(0)})};
    case 7: return {Circuit(1, {Gate::s(0), Gate::s(0)})};
    case 8: return {Circuit(1, {Gate::h(0), Gate::x(0), Gate::h(0)})};
    case 9: return {Circuit(1, {Gate::h(0), Gate::z(0), Gate::h(0)})};
    case 10:
      return {Circuit(1, {Gate::rz(0, 0)}), Circuit(1, {Gate::rx(2 * kPi, 0)}), Circuit(1, {Gate::ry(0, 0)}),
              Circuit(1, {Gate::rz(2 * kPi, 0)})};
    case 11: return {Circuit(2, {Gate::cx(0, 1), Gate::x(0), Gate::cx(0, 1)}),
                     Circuit(2, {Gate::cx(1, 0), Gate::x(1), Gate::cx(1, 0)})};
    case 12:
      return {Circuit(2, {Gate::rz(a, 0), Gate::cx(0, 1), Gate::rz(b, 0)}),
              Circuit(2, {Gate::t(0), Gate::cx(0, 1), Gate::t(0)}),
              Circuit(2, {Gate::x(1), Gate::cx(0, 1), Gate::x(1)}),
              Circuit(2, {Gate::cx(0, 1), Gate::s(0), Gate::cx(0, 1)}),
              Circuit(3, {Gate::cx(0, 1), Gate::cx(0, 2), Gate::cx(0, 1)}),
              Circuit(1, {Gate::t(0), Gate::s(0), Gate::t(0)}),
              Circuit(1, {Gate::rx(a, 0), Gate::x(0), Gate::rx(b, 0)})};
    default: return {};
  }
}

struct RuleSelfTest {
  int rule;
  int samples = 0;
  double worst_distance = 0;
  bool passed = false;
};

/// Applies the rule to each sample window and compares unitaries up to phase.
inline RuleSelfTest rule_self_test(int rule, double tol = 1e-10) {
  RuleSelfTest r{rule};
  r.passed = true;
  for (const Circuit& sample : rule_samples(rule)) {
    ++r.samples;
    std::optional<RewriteSite> site;
    for (const auto& s : find_sites(sample)) {
      if (s.rule == rule) {
        site = s;
        break;
      }
    }
    if (!site) {
      r.passed = false;
      r.worst_distance = 1;
      continue;
    }
    const Circuit out = apply_site(sample, *site);
    const double d = phase_distance(unitary(sample), unitary(out));
    // With phase tracking the unitaries agree exactly, not just up to phase.
    const double exact = (unitary(sample) - unitary(out)).cwiseAbs().maxCoeff();
    r.worst_distance = std::max({r.worst_distance, d, exact});
    if (d > tol || exact > 1e-9) r.passed = false;
  }
  if (r.samples == 0) r.passed = false;
  return r;
}

/// Rule catalog, self-tested on first use.
inline const std::vector<RewriteRule>& rule_catalog() {
  static const bool verified = [] {
    for (const auto& rule : rule_catalog_metadata()) {
      if (!rule_self_test(rule.number).passed) {
        throw Error("rewrite rule " + rule.id + " failed its self-test");
      }
    }
    return true;
  }();
  (void)verified;
  return rule_catalog_metadata();
}

// ---------------------------------------------------------------------------
// Learned rewrite policy.

struct RewriteRewardWeights {
  double gates = 1.0;
  double cx = 2.0;
  double depth = 0.5;
  double step_cost = 0.1;
};

struct RewriteHyper {
  int episodes = 200;
  double alpha = 0.2;
  double gamma = 0.9;
  double epsilon_start = 0.3;
  double epsilon_end = 0.02;
  int max_steps_per_episode = 128;
  RewriteRewardWeights reward;
};

/// log2 bucket: 0 for 0, else floor(log2(x)) + 1.
inline int log2_bucket(int x) {
  int b = 0;
  while (x > 0) {
    ++b;
    x >>= 1;
  }
  return b;
}

/// Discretized rewrite state: gate, CX and depth buckets plus the site-availability mask.
struct RewriteFeatures {
  int gate_bucket = 0;
  int cx_bucket = 0;
  int depth_bucket = 0;
  unsigned mask = 0;

  std::string key() const {
    return std::to_string(gate_bucket) + "," + std::to_string(cx_bucket) + "," + std::to_string(depth_bucket) +
           "," + std::to_string(mask);
  }
};

inline RewriteFeatures rewrite_features(const Circuit& c, const std::vector<RewriteSite>& sites) {
  RewriteFeatures f;
  f.gate_bucket = log2_bucket(static_cast<int>(c.size()));
  f.cx_bucket = log2_bucket(cx_count(c));
  f.depth_bucket = log2_bucket(depth(c));
  for (const auto& s : sites) f.mask |= 1u << (s.rule - 1);
  return f;
}

using RuleValues = std::array<double, kNumRules>;

struct RewritePolicy {
  std::map<std::string, RuleValues> table;
  RewriteHyper hyper;
  std::uint64_t seed = 0;

  /// Unseen states get all-zero (uniform) preferences.
  RuleValues values(const std::string& key) const {
    auto it = table.find(key);
    return it == table.end() ? RuleValues{} : it->second;
  }

  friend bool operator==(const RewritePolicy& a, const RewritePolicy& b) {
    return a.table == b.table && a.seed == b.seed;
  }
};

/// Index of the largest value among allowed entries; ties go to the lowest index.
inline int argmax_rule(const RuleValues& v, unsigned allowed = (1u << kNumRules) - 1) {
  int best = -1;
  for (int r = 0; r < kNumRules; ++r) {
    if (!(allowed & (1u << r))) continue;
    if (best < 0 || v[static_cast<std::size_t>(r)] > v[static_cast<std::size_t>(best)]) best = r;
  }
  return best;
}

namespace detail {

struct RewriteStepResult {
  Circuit circuit;
  std::vector<RewriteSite> sites;
  double reward;
};

inline RewriteStepResult rewrite_step(const Circuit& c, const std::vector<RewriteSite>& sites, int rule,
                                      const RewriteRewardWeights& w) {
  Circuit next = c;
  for (const auto& s : sites) {
    if (s.rule == rule) {
      next = apply_site(c, s);
      break;
    }
  }
  const Metrics before = metrics(c), after = metrics(next);
  const double reward = w.gates * (before.total_gates - after.total_gates) +
                        w.cx * (before.cx_count - after.cx_count) + w.depth * (before.depth - after.depth) -
                        w.step_cost;
  auto next_sites = find_sites(next);
  return {std::move(next), std::move(next_sites), reward};
}

inline void check_hyper(double alpha, double gamma, int episodes) {
  if (!(alpha > 0 && alpha <= 1)) throw HyperparameterError("alpha must lie in (0, 1]");
  if (!(gamma >= 0 && gamma <= 1)) throw HyperparameterError("gamma must lie in [0, 1]");
  if (episodes < 0) throw HyperparameterError("episodes must be >= 0");
}

inline double epsilon_at(double start, double end, int episode, int episodes) {
  if (episodes <= 1) return start;
  return start + (end - start) * static_cast<double>(episode) / static_cast<double>(episodes - 1);
}

}  // namespace detail

/// Tabular Q-learning over rule choices. Deterministic for a fixed seed and corpus order.
inline RewritePolicy train_rewrite_policy(const std::vector<Circuit>& corpus, const RewriteHyper& hyper,
                                          std::uint64_t seed) {
  if (corpus.empty()) throw HyperparameterError("corpus must be non-empty");
  detail::check_hyper(hyper.alpha, hyper.gamma, hyper.episodes);
  if (hyper.epsilon_start < 0 || hyper.epsilon_start > 1 || hyper.epsilon_end < 0 || hyper.epsilon_end > 1) {
    throw HyperparameterError("epsilon must lie in [0, 1]");
  }
  RewritePolicy policy;
  policy.hyper = hyper;
  policy.seed = seed;
  Rng rng(seed);
  for (int ep = 0; ep < hyper.episodes; ++ep) {
    Circuit c = corpus[static_cast<std::size_t>(ep) % corpus.size()];
    const double eps = detail::epsilon_at(hyper.epsilon_start, hyper.epsilon_end, ep, hyper.episodes);
    auto sites = find_sites(c);
    for (int step = 0; step < hyper.max_steps_per_episode && !sites.empty(); ++step) {
      RuleValues& q = policy.table[rewrite_features(c, sites).key()];
      int action;
      if (rng.uniform() < eps) {
        action = static_cast<int>(rng.below(kNumRules));
      } else {
        action = argmax_rule(q);
      }
      auto res = detail::rewrite_step(c, sites, action + 1, hyper.reward);
      double target = res.reward;
      if (!res.sites.empty()) {
        const RuleValues nq = policy.values(rewrite_features(res.circuit, res.sites).key());
        target += hyper.gamma * *std::max_element(nq.begin(), nq.end());
      }
      q[static_cast<std::size_t>(action)] += hyper.alpha * (target - q[static_cast<std::size_t>(action)]);
      c = std::move(res.circuit);
      sites = std::move(res.sites);
    }
  }
  return policy;
}

/// Greedy rollout of a rewrite policy, restricted to rules that have a site.
/// Returns the best circuit seen by (gates, CX, depth).
inline Circuit rewrite_rl(const Circuit& c, const RewritePolicy& policy, int budget) {
  if (budget < 0) throw HyperparameterError("budget must be >= 0");
  auto score = [](const Circuit& x) {
    const Metrics m = metrics(x);
    return std::make_tuple(m.total_gates, m.cx_count, m.depth);
  };
  Circuit cur = c;
  Circuit best = c;
  auto best_score = score(best);
  auto sites = find_sites(cur);
  for (int step = 0; step < budget && !sites.empty(); ++step) {
    const RewriteFeatures f = rewrite_features(cur, sites);
    const int action = argmax_rule(policy.values(f.key()), f.mask);
    auto res = detail::rewrite_step(cur, sites, action + 1, policy.hyper.reward);
    cur = std::move(res.circuit);
    sites = std::move(res.sites);
    const auto s = score(cur);
    if (s < best_score) {
      best = cur;
      best_score = s;
    }
  }
  return best;
}

/// Uniform-random rule choice among available sites; the untrained baseline.
inline Circuit rewrite_random(const Circuit& c, int budget, std::uint64_t seed) {
  Rng rng(seed);
  Circuit cur = c;
  Circuit best = c;
  auto sites = find_sites(cur);
  for (int step = 0; step < budget && !sites.empty(); ++step) {
    cur = apply_site(cur, sites[rng.below(sites.size())]);
    sites = find_sites(cur);
    if (std::make_tuple(cur.size(), cx_count(cur), depth(cur)) <
        std::make_tuple(best.size(), cx_count(best), depth(best))) {
      best = cur;
    }
  }
  return best;
}

inline nlohmann::ordered_json rewrite_policy_to_json(const RewritePolicy& p) {
  nlohmann::ordered_json j;
  j["kind"] = "rewrite-policy";
  j["features"] = "gate_bucket,cx_bucket,depth_bucket,site_mask(R1..R12)";
  j["seed"] = p.seed;
  j["hyper"] = {{"episodes", p.hyper.episodes},
                {"alpha", p.hyper.alpha},
                {"gamma", p.hyper.gamma},
                {"epsilon_start", p.hyper.epsilon_start},
                {"epsilon_end", p.hyper.epsilon_end},
                {"max_steps_per_episode", p.hyper.max_steps_per_episode},
                {"reward", {{"gates", p.hyper.reward.gates},
                            {"cx", p.hyper.reward.cx},
                            {"depth", p.hyper.reward.depth},
                            {"step_cost", p.hyper.reward.step_cost}}}};
  auto table = nlohmann::ordered_json::object();
  for (const auto& [key, vals] : p.table) table[key] = vals;
  j["table"] = table;
  return j;
}

inline RewritePolicy rewrite_policy_from_json(const nlohmann::json& j) {
  try {
    if (j.at("kind") != "rewrite-policy") throw Error("not a rewrite policy");
    RewritePolicy p;
    p.seed = j.at("seed").get<std::uint64_t>();
    const auto& h = j.at("hyper");
    p.hyper.episodes = h.at("episodes").get<int>();
    p.hyper.alpha = h.at("alpha").get<double>();
    p.hyper.gamma = h.at("gamma").get<double>();
    p.hyper.epsilon_start = h.at("epsilon_start").get<double>();
    p.hyper.epsilon_end = h.at("epsilon_end").get<double>();
    p.hyper.max_steps_per_episode = h.at("max_steps_per_episode").get<int>();
    const auto& r = h.at("reward");
    p.hyper.reward = {r.at("gates").get<double>(), r.at("cx").get<double>(), r.at("depth").get<double>(),
                      r.at("step_cost").get<double>()};
    for (const auto& [key, vals] : j.at("table").items()) p.table[key] = vals.get<RuleValues>();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed rewrite policy: ") + e.what());
  }
}

}  // namespace orq
