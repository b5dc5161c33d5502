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
#include <cstddef>
#include <initializer_list>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "orq/error.hpp"

namespace orq {

enum class GateKind {
  H,
  X,
  Y,
  Z,
  S,
  SDG,
  T,
  TDG,
  SX,
  RX,
  RY,
  RZ,
  U3,
  CX,
  SWAP,
};

inline constexpr std::array<GateKind, 15> kAllGateKinds = {
    GateKind::H,  GateKind::X,  GateKind::Y,  GateKind::Z,  GateKind::S,
    GateKind::SDG, GateKind::T, GateKind::TDG, GateKind::SX, GateKind::RX,
    GateKind::RY, GateKind::RZ, GateKind::U3, GateKind::CX, GateKind::SWAP,
};

struct GateKindInfo {
  std::string_view mnemonic;
  int num_qubits;
  int num_params;
};

inline constexpr GateKindInfo kind_info(GateKind k) {
  switch (k) {
    case GateKind::H: return {"h", 1, 0};
    case GateKind::X: return {"x", 1, 0};
    case GateKind::Y: return {"y", 1, 0};
    case GateKind::Z: return {"z", 1, 0};
    case GateKind::S: return {"s", 1, 0};
    case GateKind::SDG: return {"sdg", 1, 0};
    case GateKind::T: return {"t", 1, 0};
    case GateKind::TDG: return {"tdg", 1, 0};
    case GateKind::SX: return {"sx", 1, 0};
    case GateKind::RX: return {"rx", 1, 1};
    case GateKind::RY: return {"ry", 1, 1};
    case GateKind::RZ: return {"rz", 1, 1};
    case GateKind::U3: return {"u3", 1, 3};
    case GateKind::CX: return {"cx", 2, 0};
    case GateKind::SWAP: return {"swap", 2, 0};
  }
  return {"?", 0, 0};
}

inline std::string_view mnemonic(GateKind k) { return kind_info(k).mnemonic; }

inline std::optional<GateKind> kind_from_mnemonic(std::string_view name) {
  for (GateKind k : kAllGateKinds) {
    if (kind_info(k).mnemonic == name) return k;
  }
  return std::nullopt;
}

inline bool is_two_qubit(GateKind k) { return kind_info(k).num_qubits == 2; }

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kFourPi = 4.0 * std::numbers::pi;

/// Reduces an angle into [0, 4pi). Single-qubit rotations are 4pi-periodic.
inline double canonical_angle(double a) {
  double r = std::fmod(a, kFourPi);
  if (r < 0) r += kFourPi;
  if (r >= kFourPi) r = 0.0;
  return r;
}

/// Distance from `a` to the nearest multiple of `period`.
inline double angle_residue(double a, double period) {
  double r = std::fmod(a, period);
  if (r < 0) r += period;
  return std::min(r, period - r);
}

/// A typed gate application. Immutable once constructed.
class Gate {
 public:
  Gate(GateKind kind, std::vector<int> qubits, std::vector<double> params = {})
      : kind_(kind), qubits_(std::move(qubits)), params_(std::move(params)) {
    const auto info = kind_info(kind_);
    if (static_cast<int>(qubits_.size()) != info.num_qubits) {
      throw InvalidGate(std::string(info.mnemonic) + " expects " +
                        std::to_string(info.num_qubits) + " qubit operand(s)");
    }
    if (static_cast<int>(params_.size()) != info.num_params) {
      throw InvalidGate(std::string(info.mnemonic) + " expects " +
                        std::to_string(info.num_params) + " angle(s)");
    }
    for (int q : qubits_) {
      if (q < 0) throw InvalidGate("negative qubit index");
    }
    if (qubits_.size() == 2 && qubits_[0] == qubits_[1]) {
      throw InvalidGate(std::string(info.mnemonic) + " operands must be distinct");
    }
    for (double& p : params_) {
      if (!std::isfinite(p)) throw InvalidGate("angle must be finite");
      p = canonical_angle(p);
    }
  }

  static Gate h(int q) { return {GateKind::H, {q}}; }
  static Gate x(int q) { return {GateKind::X, {q}}; }
  static Gate y(int q) { return {GateKind::Y, {q}}; }
  static Gate z(int q) { return {GateKind::Z, {q}}; }
  static Gate s(int q) { return {GateKind::S, {q}}; }
  static Gate sdg(int q) { return {GateKind::SDG, {q}}; }
  static Gate t(int q) { return {GateKind::T, {q}}; }
  static Gate tdg(int q) { return {GateKind::TDG, {q}}; }
  static Gate sx(int q) { return {GateKind::SX, {q}}; }
  static Gate rx(double a, int q) { return {GateKind::RX, {q}, {a}}; }
  static Gate ry(double a, int q) { return {GateKind::RY, {q}, {a}}; }
  static Gate rz(double a, int q) { return {GateKind::RZ, {q}, {a}}; }
  static Gate u3(double theta, double phi, double lam, int q) {
    return {GateKind::U3, {q}, {theta, phi, lam}};
  }
  static Gate cx(int control, int target) { return {GateKind::CX, {control, target}}; }
  static Gate swap(int a, int b) { return {GateKind::SWAP, {a, b}}; }

  GateKind kind() const noexcept { return kind_; }
  const std::vector<int>& qubits() const noexcept { return qubits_; }
  const std::vector<double>& params() const noexcept { return params_; }
  int qubit(std::size_t i) const { return qubits_.at(i); }
  double param(std::size_t i) const { return params_.at(i); }
  std::size_t arity() const noexcept { return qubits_.size(); }

  bool acts_on(int q) const {
    return std::find(qubits_.begin(), qubits_.end(), q) != qubits_.end();
  }

  bool shares_qubit(const Gate& other) const {
    for (int q : qubits_) {
      if (other.acts_on(q)) return true;
    }
    return false;
  }

  /// Same gate on other qubits.
  Gate relabeled(const std::vector<int>& map) const {
    std::vector<int> qs;
    qs.reserve(qubits_.size());
    for (int q : qubits_) qs.push_back(map.at(static_cast<std::size_t>(q)));
    return Gate(kind_, std::move(qs), params_);
  }

  friend bool operator==(const Gate&, const Gate&) = default;

 private:
  GateKind kind_;
  std::vector<int> qubits_;
  std::vector<double> params_;
};

/// Ordered gate list over a fixed qubit register.
///
/// Qubit 0 is the least-significant bit of a computational basis index
/// everywhere in the library. `global_phase` carries a scalar e^{i phase}
/// accumulated by passes that drop gates equal to -I; it never becomes a gate.
class Circuit {
 public:
  explicit Circuit(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits <= 0) throw InvalidGate("circuit needs at least one qubit");
  }

  Circuit(int num_qubits, std::vector<Gate> gates) : Circuit(num_qubits) {
    gates_.reserve(gates.size());
    for (auto& g : gates) add(std::move(g));
  }

  Circuit& add(Gate g) {
    for (int q : g.qubits()) {
      if (q >= num_qubits_) {
        throw QubitOutOfRange("qubit " + std::to_string(q) + " outside register of " +
                              std::to_string(num_qubits_));
      }
    }
    gates_.push_back(std::move(g));
    return *this;
  }

  Circuit& append(const Circuit& other) {
    if (other.num_qubits_ != num_qubits_) throw DimensionMismatch("qubit counts differ");
    for (const auto& g : other.gates_) add(g);
    global_phase_ += other.global_phase_;
    return *this;
  }

  int num_qubits() const noexcept { return num_qubits_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }
  std::size_t size() const noexcept { return gates_.size(); }
  bool empty() const noexcept { return gates_.empty(); }
  const Gate& operator[](std::size_t i) const { return gates_[i]; }

  double global_phase() const noexcept { return global_phase_; }
  void add_global_phase(double phase) {
    global_phase_ = std::remainder(global_phase_ + phase, 2.0 * kPi);
  }

  /// Copy with the same register and phase but a new gate list.
  Circuit with_gates(std::vector<Gate> gates) const {
    Circuit out(num_qubits_, std::move(gates));
    out.global_phase_ = global_phase_;
    return out;
  }

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  int num_qubits_;
  std::vector<Gate> gates_;
  double global_phase_ = 0.0;
};

/// Concatenation: `a` followed by `b`.
inline Circuit concat(const Circuit& a, const Circuit& b) {
  Circuit out = a;
  out.append(b);
  return out;
}

/// Structural equality with an angle tolerance, ignoring global phase.
inline bool same_structure(const Circuit& a, const Circuit& b, double angle_tol = 1e-12) {
  if (a.num_qubits() != b.num_qubits() || a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Gate& ga = a[i];
    const Gate& gb = b[i];
    if (ga.kind() != gb.kind() || ga.qubits() != gb.qubits()) return false;
    for (std::size_t k = 0; k < ga.params().size(); ++k) {
      if (angle_residue(ga.param(k) - gb.param(k), kFourPi) > angle_tol) return false;
    }
  }
  return true;
}

/// For each gate, the indices of the most recent earlier gate on each of its
/// qubits (deduplicated, ascending). This is the dependency DAG.
inline std::vector<std::vector<std::size_t>> dependency_dag(const Circuit& c) {
  std::vector<std::vector<std::size_t>> preds(c.size());
  std::vector<std::optional<std::size_t>> last(static_cast<std::size_t>(c.num_qubits()));
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (int q : c[i].qubits()) {
      auto& l = last[static_cast<std::size_t>(q)];
      if (l) preds[i].push_back(*l);
      l = i;
    }
    std::sort(preds[i].begin(), preds[i].end());
    preds[i].erase(std::unique(preds[i].begin(), preds[i].end()), preds[i].end());
  }
  return preds;
}

/// ASAP layer (1-based) of every gate.
inline std::vector<int> asap_layers(const Circuit& c) {
  std::vector<int> level(static_cast<std::size_t>(c.num_qubits()), 0);
  std::vector<int> layers;
  layers.reserve(c.size());
  for (const Gate& g : c.gates()) {
    int l = 0;
    for (int q : g.qubits()) l = std::max(l, level[static_cast<std::size_t>(q)]);
    ++l;
    for (int q : g.qubits()) level[static_cast<std::size_t>(q)] = l;
    layers.push_back(l);
  }
  return layers;
}

inline int depth(const Circuit& c) {
  const auto layers = asap_layers(c);
  return layers.empty() ? 0 : *std::max_element(layers.begin(), layers.end());
}

struct Metrics {
  int depth = 0;
  int total_gates = 0;
  std::map<GateKind, int> counts_by_kind;
  int cx_count = 0;
  int two_qubit_count = 0;

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

inline Metrics metrics(const Circuit& c) {
  Metrics m;
  for (const Gate& g : c.gates()) {
    ++m.total_gates;
    ++m.counts_by_kind[g.kind()];
    if (g.kind() == GateKind::CX) ++m.cx_count;
    if (g.arity() == 2) ++m.two_qubit_count;
  }
  m.depth = depth(c);
  return m;
}

inline int cx_count(const Circuit& c) {
  return static_cast<int>(std::count_if(c.gates().begin(), c.gates().end(),
                                        [](const Gate& g) { return g.kind() == GateKind::CX; }));
}

}  // namespace orq
