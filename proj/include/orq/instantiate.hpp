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
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "orq/backend.hpp"
#include "orq/circuit.hpp"
#include "orq/error.hpp"
#include "orq/numeric.hpp"
#include "orq/rng.hpp"
#include "orq/unitary.hpp"

namespace orq {

class UnsupportedNativeSet : public Error {
 public:
  using Error::Error;
};

/// Numeric instantiation finished above tolerance; carries the best distance found.
class ToleranceNotReached : public Error {
 public:
  explicit ToleranceNotReached(double best)
      : Error("instantiation tolerance not reached (best distance " + std::to_string(best) + ")"),
        best_distance_(best) {}
  double best_distance() const noexcept { return best_distance_; }

 private:
  double best_distance_;
};

/// Euler angles with U3(theta, phi, lam) * e^{i phase} == u.
struct EulerAngles {
  double theta = 0;
  double phi = 0;
  double lam = 0;
  double phase = 0;
};

/// ZYZ decomposition onto the OpenQASM U3 convention.
///
/// theta lies in [0, pi]; at theta in {0, pi} lam is fixed to 0.
inline EulerAngles zyz_decompose(const Mat2& u) {
  if (unitarity_error(u) > 1e-9) throw NonUnitaryInput("zyz_decompose: input is not unitary");
  constexpr double eps = 1e-12;
  const double c = std::abs(u(0, 0));
  const double s = std::abs(u(1, 0));
  EulerAngles e;
  e.theta = 2.0 * std::atan2(s, c);
  if (s < eps) {
    e.theta = 0;
    e.phase = std::arg(u(0, 0));
    e.phi = std::arg(u(1, 1)) - e.phase;
  } else if (c < eps) {
    e.theta = kPi;
    e.phase = std::arg(-u(0, 1));
    e.phi = std::arg(u(1, 0)) - e.phase;
  } else {
    e.phase = std::arg(u(0, 0));
    e.phi = std::arg(u(1, 0)) - e.phase;
    e.lam = std::arg(-u(0, 1)) - e.phase;
  }
  return e;
}

/// Single-qubit native families supported by gate-set translation.
enum class NativeFamily { RzSx, RxRz };

inline std::string_view to_string(NativeFamily f) { return f == NativeFamily::RzSx ? "rz-sx" : "rx-rz"; }

inline NativeFamily native_family(const DeviceProfile& p) {
  if (!p.is_native(GateKind::CX)) {
    throw UnsupportedNativeSet("profile " + p.name + " has no CX-like two-qubit native");
  }
  if (p.is_native(GateKind::RZ) && p.is_native(GateKind::SX)) return NativeFamily::RzSx;
  if (p.is_native(GateKind::RZ) && p.is_native(GateKind::RX)) return NativeFamily::RxRz;
  throw UnsupportedNativeSet("profile " + p.name + " has neither {rz, sx} nor {rx, rz}");
}

/// One gate of a parameterized pattern; `slots` index the free-parameter vector.
struct PatternGate {
  GateKind kind;
  std::vector<int> qubits;
  std::vector<int> slots;
};

struct GatePattern {
  int num_qubits = 1;
  int num_params = 0;
  std::vector<PatternGate> gates;

  std::vector<Gate> materialize(const Vec& params, const std::vector<int>& qubit_map = {}) const {
    std::vector<Gate> out;
    out.reserve(gates.size());
    for (const auto& pg : gates) {
      std::vector<double> ps;
      for (int s : pg.slots) ps.push_back(params[s]);
      std::vector<int> qs = pg.qubits;
      if (!qubit_map.empty()) {
        for (int& q : qs) q = qubit_map.at(static_cast<std::size_t>(q));
      }
      out.emplace_back(pg.kind, std::move(qs), std::move(ps));
    }
    return out;
  }

  MatX unitary(const Vec& params) const { return gates_unitary(materialize(params), num_qubits); }
};

/// The general single-qubit pattern for a family: five gates for rz-sx, three for rx-rz.
inline GatePattern euler_pattern(NativeFamily f) {
  GatePattern p;
  p.num_qubits = 1;
  if (f == NativeFamily::RzSx) {
    p.num_params = 3;
    p.gates = {{GateKind::RZ, {0}, {0}},
               {GateKind::SX, {0}, {}},
               {GateKind::RZ, {0}, {1}},
               {GateKind::SX, {0}, {}},
               {GateKind::RZ, {0}, {2}}};
  } else {
    p.num_params = 3;
    p.gates = {{GateKind::RZ, {0}, {0}}, {GateKind::RX, {0}, {1}}, {GateKind::RZ, {0}, {2}}};
  }
  return p;
}

struct InstantiationResult {
  Vec params;
  double distance = 1.0;
};

struct InstantiateOptions {
  int restarts = 8;
  int max_iters = 500;
  double fd_step = 1e-6;
};

/// Solves a pattern's free angles numerically so its unitary matches `target`
/// up to global phase. The first start is the all-zero vector.
inline InstantiationResult instantiate_numeric(const GatePattern& pattern, const MatX& target, double tol,
                                               std::uint64_t seed, const InstantiateOptions& opt = {}) {
  const Eigen::Index dim = Eigen::Index{1} << pattern.num_qubits;
  if (target.rows() != dim || target.cols() != dim) throw DimensionMismatch("target size does not match pattern");
  if (unitarity_error(target) > 1e-9) throw NonUnitaryInput("instantiate_numeric: target is not unitary");
  auto value = [&](const Vec& x) { return phase_distance(pattern.unitary(x), target); };
  auto grad = [&](const Vec& x) { return central_difference_gradient(value, x, opt.fd_step); };

  Rng rng(seed);
  InstantiationResult best;
  best.params = Vec::Zero(pattern.num_params);
  best.distance = value(best.params);
  MinimizeOptions mo;
  mo.max_iters = opt.max_iters;
  for (int r = 0; r < opt.restarts && best.distance > tol * 1e-3; ++r) {
    Vec x0 = Vec::Zero(pattern.num_params);
    if (r > 0) {
      for (Eigen::Index i = 0; i < x0.size(); ++i) x0[i] = rng.uniform(0, 2 * kPi);
    }
    auto res = minimize(value, grad, x0, mo);
    if (res.value < best.distance) {
      best.params = std::move(res.x);
      best.distance = res.value;
    }
  }
  if (best.distance > tol) throw ToleranceNotReached(best.distance);
  return best;
}

/// Analytic lowering of a 2x2 unitary onto a native family, acting on qubit `q`.
/// Gates are in time order; `phase` receives the global phase left over.
inline std::vector<Gate> lower_single_qubit(const Mat2& u, NativeFamily family, bool x_native, int q,
                                            double* phase = nullptr) {
  const EulerAngles e = zyz_decompose(u);
  constexpr double eps = 1e-10;
  std::vector<Gate> out;
  if (e.theta < eps) {
    out = {Gate::rz(e.phi + e.lam, q)};
  } else if (family == NativeFamily::RxRz) {
    out = {Gate::rz(e.lam - kPi / 2, q), Gate::rx(e.theta, q), Gate::rz(e.phi + kPi / 2, q)};
  } else if (std::abs(e.theta - kPi / 2) < eps) {
    out = {Gate::rz(e.lam - kPi / 2, q), Gate::sx(q), Gate::rz(e.phi + kPi / 2, q)};
  } else if (std::abs(e.theta - kPi) < eps) {
    if (x_native) {
      out = {Gate::rz(e.lam + kPi, q), Gate::x(q), Gate::rz(e.phi, q)};
    } else {
      out = {Gate::rz(e.lam + kPi, q), Gate::sx(q), Gate::sx(q), Gate::rz(e.phi, q)};
    }
  } else {
    out = {Gate::rz(e.lam, q), Gate::sx(q), Gate::rz(e.theta + kPi, q), Gate::sx(q), Gate::rz(e.phi + kPi, q)};
  }

  std::vector<Gate> local;
  for (const Gate& g : out) local.push_back(g.relabeled(std::vector<int>(static_cast<std::size_t>(q) + 1, 0)));
  const MatX approx = gates_unitary(local, 1);
  if (phase_distance(approx, u) > 1e-9) {
    // Analytic branch missed; fall back to the numeric solve of the general pattern.
    const GatePattern pattern = euler_pattern(family);
    const auto res = instantiate_numeric(pattern, u, 1e-9, 0);
    out = pattern.materialize(res.params, std::vector<int>{q});
    local = pattern.materialize(res.params);
  }
  if (phase) *phase = relative_phase(u, gates_unitary(local, 1));
  return out;
}

enum class TemplateSolver { Analytic, Numeric };

/// Registered translation for one non-native gate kind.
struct NativeTemplate {
  GateKind target_kind;
  NativeFamily family;
  TemplateSolver solver;
  GatePattern pattern;
};

inline std::vector<NativeTemplate> registered_templates(NativeFamily family) {
  std::vector<NativeTemplate> out;
  for (GateKind k : kAllGateKinds) {
    if (k == GateKind::CX) continue;
    if (k == GateKind::SWAP) {
      GatePattern p;
      p.num_qubits = 2;
      p.gates = {{GateKind::CX, {0, 1}, {}}, {GateKind::CX, {1, 0}, {}}, {GateKind::CX, {0, 1}, {}}};
      out.push_back({k, family, TemplateSolver::Analytic, p});
      continue;
    }
    out.push_back({k, family, TemplateSolver::Analytic, euler_pattern(family)});
  }
  return out;
}

/// Lowers one gate through its registered template.
inline std::vector<Gate> instantiate_template(const NativeTemplate& t, const Gate& g, bool x_native,
                                              double* phase = nullptr) {
  if (g.kind() != t.target_kind) throw InvalidGate("template kind mismatch");
  if (g.kind() == GateKind::SWAP) {
    if (phase) *phase = 0;
    const int a = g.qubit(0), b = g.qubit(1);
    return {Gate::cx(a, b), Gate::cx(b, a), Gate::cx(a, b)};
  }
  return lower_single_qubit(single_qubit_matrix(g), t.family, x_native, g.qubit(0), phase);
}

struct TemplateSelfTest {
  GateKind kind;
  int samples = 0;
  double worst_distance = 0;
  bool passed = false;
};

/// Instantiates a template on fixed and seeded-random gates of its kind and
/// checks the result against the gate matrix, including the reported phase.
inline TemplateSelfTest template_self_test(const NativeTemplate& t, bool x_native, double tol = 1e-10) {
  TemplateSelfTest r{t.target_kind};
  const auto info = kind_info(t.target_kind);
  std::vector<std::vector<double>> param_sets;
  if (info.num_params == 0) {
    param_sets.push_back({});
  } else {
    for (double a : {0.0, kPi / 2, kPi, 3 * kPi / 2, 2 * kPi, 1e-12}) param_sets.push_back(std::vector<double>(info.num_params, a));
    Rng rng(static_cast<std::uint64_t>(t.target_kind) + 1);
    for (int k = 0; k < 16; ++k) {
      std::vector<double> ps;
      for (int j = 0; j < info.num_params; ++j) ps.push_back(rng.uniform(0, 4 * kPi));
      param_sets.push_back(std::move(ps));
    }
  }
  bool ok = true;
  for (const auto& ps : param_sets) {
    std::vector<int> qs(static_cast<std::size_t>(info.num_qubits));
    std::iota(qs.begin(), qs.end(), 0);
    const Gate g(t.target_kind, qs, ps);
    double phase = 0;
    const auto lowered = instantiate_template(t, g, x_native, &phase);
    const MatX target = gates_unitary({g}, info.num_qubits);
    const MatX got = gates_unitary(lowered, info.num_qubits) * std::polar(1.0, phase);
    const double d = phase_distance(got, target);
    r.worst_distance = std::max(r.worst_distance, d);
    ++r.samples;
    if (d > tol || (got - target).cwiseAbs().maxCoeff() > 1e-9) ok = false;
  }
  r.passed = ok;
  return r;
}

inline bool is_rotation(GateKind k) { return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ; }

/// Merges runs of same-axis rotations on a qubit and drops identity rotations.
/// Rotations by 2pi equal -I and move pi into the global phase.
inline Circuit merge_rotations(const Circuit& c) {
  constexpr double eps = 1e-12;
  std::vector<std::optional<Gate>> out;
  std::vector<std::vector<std::size_t>> stack(static_cast<std::size_t>(c.num_qubits()));
  Circuit result = c.with_gates({});

  // Returns true and accounts for phase if the rotation angle is trivial.
  auto trivial = [&](double angle) {
    if (angle_residue(angle, kFourPi) < eps) return true;
    if (std::abs(angle - 2 * kPi) < eps) {
      result.add_global_phase(kPi);
      return true;
    }
    return false;
  };

  for (const Gate& g : c.gates()) {
    if (is_rotation(g.kind())) {
      auto& st = stack[static_cast<std::size_t>(g.qubit(0))];
      if (!st.empty() && out[st.back()]->kind() == g.kind()) {
        const Gate merged(g.kind(), g.qubits(), {out[st.back()]->param(0) + g.param(0)});
        if (trivial(merged.param(0))) {
          out[st.back()].reset();
          st.pop_back();
        } else {
          out[st.back()] = merged;
        }
        continue;
      }
      if (trivial(g.param(0))) continue;
    }
    out.emplace_back(g);
    for (int q : g.qubits()) stack[static_cast<std::size_t>(q)].push_back(out.size() - 1);
  }
  std::vector<Gate> gates;
  for (auto& g : out) {
    if (g) gates.push_back(std::move(*g));
  }
  Circuit merged = result.with_gates(std::move(gates));
  return merged;
}

struct TranslateOptions {
  bool merge = true;
};

/// Registered templates for a family, self-tested once per (family, X-native) combination.
inline const std::vector<NativeTemplate>& verified_templates(NativeFamily family, bool x_native) {
  static std::map<std::pair<NativeFamily, bool>, std::vector<NativeTemplate>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({family, x_native});
  if (it != cache.end()) return it->second;
  auto ts = registered_templates(family);
  for (const auto& t : ts) {
    if (!template_self_test(t, x_native).passed) {
      throw Error("native template for " + std::string(mnemonic(t.target_kind)) + " failed its self-test");
    }
  }
  return cache.emplace(std::make_pair(family, x_native), std::move(ts)).first->second;
}

/// Rewrites every gate into the profile's native set, then merges rotations.
inline Circuit translate_to_native(const Circuit& c, const DeviceProfile& p, const TranslateOptions& opt = {}) {
  const NativeFamily family = native_family(p);
  const bool x_native = p.is_native(GateKind::X);
  const auto& templates = verified_templates(family, x_native);
  Circuit out = c.with_gates({});
  std::vector<Gate> gates;
  gates.reserve(c.size());
  for (const Gate& g : c.gates()) {
    if (p.is_native(g.kind())) {
      gates.push_back(g);
      continue;
    }
    const auto it = std::find_if(templates.begin(), templates.end(),
                                 [&](const NativeTemplate& t) { return t.target_kind == g.kind(); });
    if (it == templates.end()) {
      throw UnsupportedNativeSet("no translation for " + std::string(mnemonic(g.kind())));
    }
    double phase = 0;
    for (Gate& lowered : instantiate_template(*it, g, x_native, &phase)) gates.push_back(std::move(lowered));
    out.add_global_phase(phase);
  }
  out = out.with_gates(std::move(gates));
  return opt.merge ? merge_rotations(out) : out;
}

}  // namespace orq
