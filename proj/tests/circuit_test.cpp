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

#include "orq/circuit.hpp"

#include <cmath>

#include "gtest/gtest.h"
#include "orq/harness.hpp"

using namespace orq;

TEST(gate, arity_and_param_count_are_enforced) {
  EXPECT_THROW(Gate(GateKind::RZ, {0}), InvalidGate);
  EXPECT_THROW(Gate(GateKind::H, {0}, {0.1}), InvalidGate);
  EXPECT_THROW(Gate(GateKind::U3, {0}, {0.1, 0.2}), InvalidGate);
  EXPECT_THROW(Gate(GateKind::CX, {0}), InvalidGate);
  EXPECT_THROW(Gate(GateKind::H, {0, 1}), InvalidGate);
  EXPECT_THROW(Gate::cx(1, 1), InvalidGate);
  EXPECT_THROW(Gate::swap(2, 2), InvalidGate);
  EXPECT_THROW(Gate::h(-1), InvalidGate);
  EXPECT_NO_THROW(Gate::u3(0.1, 0.2, 0.3, 0));
}

TEST(gate, non_finite_angles_are_rejected) {
  EXPECT_THROW(Gate::rz(std::nan(""), 0), InvalidGate);
  EXPECT_THROW(Gate::rx(INFINITY, 0), InvalidGate);
}

TEST(gate, angles_canonicalize_into_zero_to_four_pi) {
  EXPECT_DOUBLE_EQ(Gate::rz(-kPi / 2, 0).param(0), 4 * kPi - kPi / 2);
  EXPECT_DOUBLE_EQ(Gate::rz(5 * kPi, 0).param(0), kPi);
  EXPECT_DOUBLE_EQ(Gate::rz(4 * kPi, 0).param(0), 0.0);
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double a = rng.uniform(-100, 100);
    const double c = Gate::ry(a, 0).param(0);
    EXPECT_GE(c, 0.0);
    EXPECT_LT(c, 4 * kPi);
    EXPECT_NEAR(std::remainder(c - a, 4 * kPi), 0.0, 1e-9);
  }
}

TEST(gate, kind_table) {
  for (GateKind k : kAllGateKinds) {
    const auto info = kind_info(k);
    const bool rot = k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ;
    EXPECT_EQ(info.num_params, rot ? 1 : k == GateKind::U3 ? 3 : 0) << info.mnemonic;
    EXPECT_EQ(info.num_qubits, (k == GateKind::CX || k == GateKind::SWAP) ? 2 : 1) << info.mnemonic;
    EXPECT_EQ(kind_from_mnemonic(info.mnemonic), k);
  }
  EXPECT_EQ(kAllGateKinds.size(), 15u);
  EXPECT_FALSE(kind_from_mnemonic("ccx").has_value());
}

TEST(circuit, add_checks_register_bounds) {
  Circuit c(2);
  EXPECT_THROW(c.add(Gate::h(2)), QubitOutOfRange);
  EXPECT_THROW(c.add(Gate::cx(0, 5)), QubitOutOfRange);
  EXPECT_THROW(Circuit(0), InvalidGate);
}

TEST(depth, examples) {
  EXPECT_EQ(depth(Circuit(2)), 0);
  EXPECT_EQ(depth(Circuit(2, {Gate::h(0), Gate::h(1)})), 1);
  EXPECT_EQ(depth(Circuit(2, {Gate::h(0), Gate::cx(0, 1), Gate::h(1)})), 3);
}

TEST(metrics, examples) {
  const Metrics empty = metrics(Circuit(3));
  EXPECT_EQ(empty.depth, 0);
  EXPECT_EQ(empty.total_gates, 0);
  EXPECT_EQ(empty.cx_count, 0);
  EXPECT_EQ(empty.two_qubit_count, 0);
  EXPECT_TRUE(empty.counts_by_kind.empty());

  const Metrics cxcx = metrics(Circuit(2, {Gate::cx(0, 1), Gate::cx(0, 1)}));
  EXPECT_EQ(cxcx.total_gates, 2);
  EXPECT_EQ(cxcx.cx_count, 2);
  EXPECT_EQ(cxcx.depth, 2);

  const Metrics m = metrics(Circuit(2, {Gate::h(0), Gate::t(0), Gate::cx(0, 1)}));
  EXPECT_EQ(m.total_gates, 3);
  EXPECT_EQ(m.cx_count, 1);
  EXPECT_EQ(m.depth, 3);
  const std::map<GateKind, int> expected{{GateKind::H, 1}, {GateKind::T, 1}, {GateKind::CX, 1}};
  EXPECT_EQ(m.counts_by_kind, expected);
}

// Depth by explicit longest path over the dependency DAG.
static int longest_path(const Circuit& c) {
  const auto dag = dependency_dag(c);
  std::vector<int> level(c.size(), 1);
  int best = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t p : dag[i]) level[i] = std::max(level[i], level[p] + 1);
    best = std::max(best, level[i]);
  }
  return best;
}

TEST(metrics, invariants_on_random_circuits) {
  for (int i = 0; i < 300; ++i) {
    const Circuit c = gen_random_circuit(1 + i % 5, i % 40, static_cast<std::uint64_t>(i));
    const Metrics m = metrics(c);
    EXPECT_LE(m.cx_count, m.two_qubit_count);
    EXPECT_LE(m.two_qubit_count, m.total_gates);
    EXPECT_LE(m.depth, m.total_gates);
    EXPECT_EQ(m.depth, longest_path(c));
    EXPECT_EQ(m, metrics(c));

    Circuit appended = c;
    appended.add(c.num_qubits() > 1 ? Gate::cx(0, 1) : Gate::h(0));
    const Metrics ma = metrics(appended);
    EXPECT_EQ(ma.total_gates, m.total_gates + 1);
    EXPECT_GE(ma.depth, m.depth);
  }
}

TEST(dependency_dag, links_to_most_recent_gate_per_qubit) {
  const Circuit c(3, {Gate::h(0), Gate::h(1), Gate::cx(0, 1), Gate::h(2), Gate::cx(1, 2), Gate::h(0)});
  const auto dag = dependency_dag(c);
  EXPECT_TRUE(dag[0].empty());
  EXPECT_TRUE(dag[1].empty());
  EXPECT_EQ(dag[2], (std::vector<std::size_t>{0, 1}));
  EXPECT_TRUE(dag[3].empty());
  EXPECT_EQ(dag[4], (std::vector<std::size_t>{2, 3}));
  EXPECT_EQ(dag[5], (std::vector<std::size_t>{2}));
}

TEST(circuit, global_phase_stays_in_range) {
  Circuit c(1);
  c.add_global_phase(3 * kPi);
  EXPECT_NEAR(std::abs(c.global_phase()), kPi, 1e-12);
  c.add_global_phase(kPi);
  EXPECT_NEAR(c.global_phase(), 0.0, 1e-12);
  EXPECT_EQ(c.with_gates({Gate::x(0)}).global_phase(), c.global_phase());
}
