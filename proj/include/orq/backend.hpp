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
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "orq/circuit.hpp"
#include "orq/error.hpp"

namespace orq {

using Edge = std::pair<int, int>;

inline Edge make_edge(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

/// Knowledge-base entry for one backend. Coupling edges are undirected and
/// stored with the smaller index first.
struct DeviceProfile {
  std::string name;
  int num_qubits = 0;
  std::set<Edge> coupling;
  std::set<GateKind> native_gates;
  std::map<GateKind, double> err_1q;
  std::map<Edge, double> err_2q;
  double default_err_1q = 0.0;
  double default_err_2q = 0.0;

  bool coupled(int a, int b) const { return coupling.count(make_edge(a, b)) > 0; }
  bool is_native(GateKind k) const { return native_gates.count(k) > 0; }

  int degree(int q) const {
    int d = 0;
    for (const auto& [a, b] : coupling) d += (a == q) + (b == q);
    return d;
  }

  std::vector<int> neighbors(int q) const {
    std::vector<int> out;
    for (const auto& [a, b] : coupling) {
      if (a == q) out.push_back(b);
      if (b == q) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Error probability of one application of `g`.
  double gate_error(const Gate& g) const {
    if (g.arity() == 1) {
      auto it = err_1q.find(g.kind());
      return it == err_1q.end() ? default_err_1q : it->second;
    }
    auto it = err_2q.find(make_edge(g.qubit(0), g.qubit(1)));
    return it == err_2q.end() ? default_err_2q : it->second;
  }

  friend bool operator==(const DeviceProfile&, const DeviceProfile&) = default;
};

namespace detail {

inline double probability(const nlohmann::json& v, const std::string& path) {
  if (!v.is_number()) throw ProfileError(path, "expected a number");
  const double p = v.get<double>();
  if (!(p >= 0.0 && p < 1.0)) throw ProfileError(path, "probability must lie in [0, 1)");
  return p;
}

inline int integer(const nlohmann::json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ProfileError(path, "expected an integer");
  const auto i = v.get<long long>();
  if (i < 0 || i > (1 << 20)) throw ProfileError(path, "integer out of range");
  return static_cast<int>(i);
}

inline const nlohmann::json& field(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) throw ProfileError(key, "missing required field");
  return doc.at(key);
}

}  // namespace detail

/// Parses a device-profile JSON document. Errors name the offending field path.
inline DeviceProfile load_profile(std::string_view source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(source);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProfileError("", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ProfileError("", "profile must be a JSON object");

  static const std::set<std::string> kKnown = {"name",           "num_qubits",     "coupling",
                                               "native_gates",   "default_err_1q", "default_err_2q",
                                               "err_1q",         "err_2q"};
  for (const auto& [key, _] : doc.items()) {
    if (!kKnown.count(key)) throw ProfileError(key, "unknown field");
  }

  DeviceProfile p;
  const auto& name = detail::field(doc, "name");
  if (!name.is_string()) throw ProfileError("name", "expected a string");
  p.name = name.get<std::string>();

  p.num_qubits = detail::integer(detail::field(doc, "num_qubits"), "num_qubits");
  if (p.num_qubits <= 0) throw ProfileError("num_qubits", "must be positive");

  const auto& coupling = detail::field(doc, "coupling");
  if (!coupling.is_array()) throw ProfileError("coupling", "expected an array of pairs");
  for (std::size_t i = 0; i < coupling.size(); ++i) {
    const std::string path = "coupling[" + std::to_string(i) + "]";
    const auto& e = coupling[i];
    if (!e.is_array() || e.size() != 2) throw ProfileError(path, "expected [int, int]");
    const int a = detail::integer(e[0], path + "[0]");
    const int b = detail::integer(e[1], path + "[1]");
    if (a >= p.num_qubits || b >= p.num_qubits) throw ProfileError(path, "qubit index out of range");
    if (a == b) throw ProfileError(path, "self-loop");
    p.coupling.insert(make_edge(a, b));
  }

  const auto& natives = detail::field(doc, "native_gates");
  if (!natives.is_array() || natives.empty()) {
    throw ProfileError("native_gates", "expected a non-empty array");
  }
  for (std::size_t i = 0; i < natives.size(); ++i) {
    const std::string path = "native_gates[" + std::to_string(i) + "]";
    if (!natives[i].is_string()) throw ProfileError(path, "expected a gate mnemonic");
    const auto kind = kind_from_mnemonic(natives[i].get<std::string>());
    if (!kind) throw ProfileError(path, "unknown gate '" + natives[i].get<std::string>() + "'");
    p.native_gates.insert(*kind);
  }
  if (std::none_of(p.native_gates.begin(), p.native_gates.end(), is_two_qubit)) {
    throw ProfileError("native_gates", "must contain a two-qubit gate");
  }

  p.default_err_1q = detail::probability(detail::field(doc, "default_err_1q"), "default_err_1q");
  p.default_err_2q = detail::probability(detail::field(doc, "default_err_2q"), "default_err_2q");

  if (doc.contains("err_1q")) {
    const auto& m = doc["err_1q"];
    if (!m.is_object()) throw ProfileError("err_1q", "expected an object");
    for (const auto& [key, val] : m.items()) {
      const std::string path = "err_1q." + key;
      const auto kind = kind_from_mnemonic(key);
      if (!kind || is_two_qubit(*kind)) throw ProfileError(path, "not a single-qubit gate");
      p.err_1q[*kind] = detail::probability(val, path);
    }
  }
  if (doc.contains("err_2q")) {
    const auto& m = doc["err_2q"];
    if (!m.is_object()) throw ProfileError("err_2q", "expected an object");
    for (const auto& [key, val] : m.items()) {
      const std::string path = "err_2q." + key;
      const auto dash = key.find('-');
      int a = -1, b = -1;
      try {
        std::size_t used_a = 0, used_b = 0;
        if (dash == std::string::npos) throw std::invalid_argument("no dash");
        a = std::stoi(key.substr(0, dash), &used_a);
        b = std::stoi(key.substr(dash + 1), &used_b);
        if (used_a != dash || used_b != key.size() - dash - 1) throw std::invalid_argument("junk");
      } catch (const std::exception&) {
        throw ProfileError(path, "edge key must look like \"i-j\"");
      }
      if (!(a >= 0 && a < b)) throw ProfileError(path, "edge key requires 0 <= i < j");
      if (!p.coupling.count({a, b})) throw ProfileError(path, "not a coupling edge");
      p.err_2q[{a, b}] = detail::probability(val, path);
    }
  }
  return p;
}

/// Inverse of load_profile, with keys in a fixed order.
inline nlohmann::ordered_json profile_to_json(const DeviceProfile& p) {
  nlohmann::ordered_json j;
  j["name"] = p.name;
  j["num_qubits"] = p.num_qubits;
  auto coupling = nlohmann::ordered_json::array();
  for (const auto& [a, b] : p.coupling) coupling.push_back({a, b});
  j["coupling"] = coupling;
  auto natives = nlohmann::ordered_json::array();
  for (GateKind k : p.native_gates) natives.push_back(std::string(mnemonic(k)));
  j["native_gates"] = natives;
  j["default_err_1q"] = p.default_err_1q;
  j["default_err_2q"] = p.default_err_2q;
  if (!p.err_1q.empty()) {
    auto m = nlohmann::ordered_json::object();
    for (const auto& [k, v] : p.err_1q) m[std::string(mnemonic(k))] = v;
    j["err_1q"] = m;
  }
  if (!p.err_2q.empty()) {
    auto m = nlohmann::ordered_json::object();
    for (const auto& [e, v] : p.err_2q) m[std::to_string(e.first) + "-" + std::to_string(e.second)] = v;
    j["err_2q"] = m;
  }
  return j;
}

/// Product of per-gate success probabilities. Uncoupled pairs use default_err_2q.
inline double estimate_fidelity(const Circuit& c, const DeviceProfile& p) {
  double f = 1.0;
  for (const Gate& g : c.gates()) {
    for (int q : g.qubits()) {
      if (q >= p.num_qubits) {
        throw QubitOutOfRange("gate qubit " + std::to_string(q) + " not on device " + p.name);
      }
    }
    f *= 1.0 - p.gate_error(g);
  }
  return f;
}

enum class ViolationKind { InsufficientQubits, NonNativeGate, UncoupledPair };

inline std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::InsufficientQubits: return "InsufficientQubits";
    case ViolationKind::NonNativeGate: return "NonNativeGate";
    case ViolationKind::UncoupledPair: return "UncoupledPair";
  }
  return "?";
}

struct Violation {
  ViolationKind kind;
  std::string detail;
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<Violation> violations;
};

inline FeasibilityReport check_feasibility(const Circuit& c, const DeviceProfile& p) {
  FeasibilityReport r;
  if (c.num_qubits() > p.num_qubits) {
    r.violations.push_back({ViolationKind::InsufficientQubits,
                            "circuit uses " + std::to_string(c.num_qubits()) + " qubits, " + p.name +
                                " has " + std::to_string(p.num_qubits)});
  }
  std::set<GateKind> reported;
  for (const Gate& g : c.gates()) {
    if (!p.is_native(g.kind()) && reported.insert(g.kind()).second) {
      r.violations.push_back({ViolationKind::NonNativeGate, std::string(mnemonic(g.kind()))});
    }
  }
  for (const Gate& g : c.gates()) {
    if (g.arity() != 2) continue;
    const int a = g.qubit(0), b = g.qubit(1);
    if (a >= p.num_qubits || b >= p.num_qubits) continue;
    if (!p.coupled(a, b)) {
      r.violations.push_back({ViolationKind::UncoupledPair,
                              "(" + std::to_string(a) + "," + std::to_string(b) + ")"});
    }
  }
  r.feasible = r.violations.empty();
  return r;
}

namespace detail {

inline std::string grid_coupling(int rows, int cols) {
  std::string s;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int q = r * cols + c;
      if (c + 1 < cols) s += (s.empty() ? "" : ",") + ("[" + std::to_string(q) + "," + std::to_string(q + 1) + "]");
      if (r + 1 < rows) s += (s.empty() ? "" : ",") + ("[" + std::to_string(q) + "," + std::to_string(q + cols) + "]");
    }
  }
  return s;
}

}  // namespace detail

/// JSON source of one of the bundled example devices: line5, tee7, grid9.
inline std::string bundled_profile_json(std::string_view name) {
  if (name == "line5") {
    return R"({"name": "line5", "num_qubits": 5,
  "coupling": [[0,1],[1,2],[2,3],[3,4]],
  "native_gates": ["rz","sx","x","cx"],
  "default_err_1q": 0.001, "default_err_2q": 0.01})";
  }
  if (name == "tee7") {
    return R"({"name": "tee7", "num_qubits": 7,
  "coupling": [[0,1],[1,2],[1,3],[3,5],[4,5],[5,6]],
  "native_gates": ["rz","sx","x","cx"],
  "default_err_1q": 0.001, "default_err_2q": 0.01,
  "err_1q": {"rz": 0.0},
  "err_2q": {"1-3": 0.015, "3-5": 0.012}})";
  }
  if (name == "grid9") {
    return R"({"name": "grid9", "num_qubits": 9, "coupling": [)" + detail::grid_coupling(3, 3) + R"(],
  "native_gates": ["rx","rz","cx"],
  "default_err_1q": 0.001, "default_err_2q": 0.01})";
  }
  throw ProfileError("", "no bundled profile named '" + std::string(name) + "'");
}

inline DeviceProfile bundled_profile(std::string_view name) { return load_profile(bundled_profile_json(name)); }

inline const std::vector<std::string>& bundled_profile_names() {
  static const std::vector<std::string> names = {"line5", "tee7", "grid9"};
  return names;
}

}  // namespace orq
