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

#include "orq/instantiate.hpp"

#include <algorithm>
#include <cmath>

#include "gtest/gtest.h"
#include "orq/harness.hpp"
#include "test_util.hpp"

using namespace orq;
using orq_test::chain_unitary;
using orq_test::Dense;
using orq_test::hs_distance;
using orq_test::random_unitary;

namespace {

// OpenQASM U3 written out from its textbook definition.
Dense u3_textbook(double t, double p, double l) {
  Dense m(2, 2);
  m << std::cos(t / 2), -std::polar(1.0, l) * std::sin(t / 2), std::polar(1.0, p) * std::sin(t / 2),
      std::polar(1.0, p + l) * std::cos(t / 2);
  return m;
}

DeviceProfile rzsx_without_x() {
  return load_profile(R"({"name": "nox", "num_qubits": 4, "coupling": [[0,1],[1,2],[2,3]],
    "native_gates": ["rz","sx","cx"], "default_err_1q": 0.001, "default_err_2q": 0.01})");
}

bool only_native(const Circuit& c, const DeviceProfile& p) {
  for (const Gate& g : c.gates()) {
    if (!p.is_native(g.kind())) return false;
  }
  return true;
}

}  // namespace

TEST(zyz_decompose, identity) {
  const EulerAngles e = zyz_decompose(Mat2::Identity());
  EXPECT_EQ(e.theta, 0.0);
  EXPECT_EQ(e.phi, 0.0);
  EXPECT_EQ(e.lam, 0.0);
}

TEST(zyz_decompose, hadamard) {
  const double r = 1 / std::sqrt(2.0);
  Mat2 h;
  h << r, r, r, -r;
  const EulerAngles e = zyz_decompose(h);
  EXPECT_LT(hs_distance(u3_textbook(e.theta, e.phi, e.lam), h), 1e-10);
  EXPECT_NEAR(e.theta, kPi / 2, 1e-12);
  EXPECT_NEAR(std::remainder(e.phi, 2 * kPi), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(std::remainder(e.lam, 2 * kPi)), kPi, 1e-12);
}

TEST(zyz_decompose, random_reconstruction_and_branch) {
  for (int i = 0; i < 500; ++i) {
    const Dense u = random_unitary(2, static_cast<std::uint64_t>(i));
    const EulerAngles e = zyz_decompose(Mat2(u));
    EXPECT_GE(e.theta, 0.0);
    EXPECT_LE(e.theta, kPi);
    const Dense rec = u3_textbook(e.theta, e.phi, e.lam);
    EXPECT_LT(hs_distance(rec, u), 1e-9);
    EXPECT_LT((rec * std::polar(1.0, e.phase) - u).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(zyz_decompose, degenerate_branches_zero_lambda) {
  Mat2 x;
  x << 0, 1, 1, 0;
  EXPECT_EQ(zyz_decompose(x).lam, 0.0);
  EXPECT_NEAR(zyz_decompose(x).theta, kPi, 1e-12);
  Mat2 d;
  d << std::polar(1.0, 0.3), 0, 0, std::polar(1.0, -0.9);
  EXPECT_EQ(zyz_decompose(d).theta, 0.0);
  EXPECT_EQ(zyz_decompose(d).lam, 0.0);
  EXPECT_LT(hs_distance(u3_textbook(0, zyz_decompose(d).phi, 0), d), 1e-12);
}

TEST(zyz_decompose, rejects_non_unitary) {
  Mat2 m;
  m << 1, 1, 0, 1;
  EXPECT_THROW(zyz_decompose(m), NonUnitaryInput);
}

TEST(translate_to_native, hadamard_on_rz_sx) {
  const DeviceProfile p = bundled_profile("line5");
  const Circuit c(1, {Gate::h(0)});
  const Circuit raw = translate_to_native(c, p, {.merge = false});
  const Circuit merged = translate_to_native(c, p);
  EXPECT_LE(raw.size(), 5u);
  EXPECT_LE(merged.size(), 3u);
  for (const Circuit& t : {raw, merged}) {
    EXPECT_TRUE(only_native(t, p));
    EXPECT_LT((chain_unitary(t) - chain_unitary(c)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(translate_to_native, native_circuit_only_merges) {
  const DeviceProfile p = bundled_profile("line5");
  const Circuit native(2, {Gate::rz(0.1, 0), Gate::sx(0), Gate::cx(0, 1), Gate::x(1)});
  EXPECT_EQ(translate_to_native(native, p), native);
  const Circuit mergeable(2, {Gate::rz(0.1, 0), Gate::rz(0.2, 0), Gate::sx(1), Gate::rz(0.0, 1)});
  const Circuit out = translate_to_native(mergeable, p);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].kind(), GateKind::RZ);
  EXPECT_NEAR(out[0].params()[0], 0.3, 1e-15);
  EXPECT_EQ(out[1], Gate::sx(1));
}

TEST(translate_to_native, swap_becomes_three_cx) {
  const DeviceProfile p = bundled_profile("line5");
  const Circuit c(2, {Gate::swap(0, 1)});
  const Circuit out = translate_to_native(c, p);
  EXPECT_EQ(out.size(), 3u);
  EXPECT_EQ(metrics(out).cx_count, 3);
  EXPECT_LT(hs_distance(chain_unitary(out), chain_unitary(c)), 1e-12);
}

TEST(translate_to_native, unsupported_family) {
  const DeviceProfile p = load_profile(R"({"name": "hx", "num_qubits": 2, "coupling": [[0,1]],
    "native_gates": ["h","t","cx"], "default_err_1q": 0.001, "default_err_2q": 0.01})");
  EXPECT_THROW(translate_to_native(Circuit(1, {Gate::x(0)}), p), UnsupportedNativeSet);
}

TEST(translate_to_native, preserves_unitary_on_random_circuits) {
  const std::vector<DeviceProfile> profiles = {bundled_profile("line5"), bundled_profile("grid9"), rzsx_without_x()};
  for (const auto& p : profiles) {
    for (int i = 0; i < 60; ++i) {
      const Circuit c = gen_random_circuit(1 + i % 4, 25, static_cast<std::uint64_t>(7000 + i));
      const Circuit out = translate_to_native(c, p);
      EXPECT_LT(hs_distance(chain_unitary(out), chain_unitary(c)), 1e-8) << p.name << " #" << i;
      EXPECT_LT((chain_unitary(out) - chain_unitary(c)).cwiseAbs().maxCoeff(), 1e-8) << "phase drift";
      EXPECT_TRUE(only_native(out, p));
      const auto violations = check_feasibility(out, p).violations;
      EXPECT_TRUE(std::none_of(violations.begin(), violations.end(),
                               [](const Violation& v) { return v.kind == ViolationKind::NonNativeGate; }));
    }
  }
}

TEST(translate_to_native, idempotent) {
  for (const auto& name : {"line5", "grid9"}) {
    const DeviceProfile p = bundled_profile(name);
    for (int i = 0; i < 60; ++i) {
      const Circuit once = translate_to_native(gen_random_circuit(1 + i % 4, 25, static_cast<std::uint64_t>(i)), p);
      EXPECT_EQ(translate_to_native(once, p), once);
    }
  }
}

TEST(translate_to_native, merging_never_adds_gates) {
  for (const auto& name : {"line5", "grid9"}) {
    const DeviceProfile p = bundled_profile(name);
    for (int i = 0; i < 100; ++i) {
      const Circuit c = gen_random_circuit(1 + i % 4, 30, static_cast<std::uint64_t>(300 + i));
      EXPECT_LE(translate_to_native(c, p).size(), translate_to_native(c, p, {.merge = false}).size());
    }
  }
}

TEST(native_templates, self_tests_pass) {
  for (NativeFamily f : {NativeFamily::RzSx, NativeFamily::RxRz}) {
    for (bool x_native : {false, true}) {
      for (const auto& t : registered_templates(f)) {
        const TemplateSelfTest r = template_self_test(t, x_native);
        EXPECT_TRUE(r.passed) << mnemonic(t.target_kind) << " " << to_string(f);
        EXPECT_GT(r.samples, 0);
        EXPECT_LT(r.worst_distance, 1e-10);
      }
    }
  }
}

TEST(instantiate_numeric, identity_target_zero_angles) {
  const GatePattern pat = euler_pattern(NativeFamily::RxRz);
  const auto r = instantiate_numeric(pat, MatX::Identity(2, 2), 1e-10, 1);
  EXPECT_LT(r.distance, 1e-12);
  EXPECT_EQ(r.params, Vec::Zero(3));
}

TEST(instantiate_numeric, representable_target) {
  for (NativeFamily f : {NativeFamily::RzSx, NativeFamily::RxRz}) {
    const GatePattern pat = euler_pattern(f);
    for (int i = 0; i < 10; ++i) {
      const MatX target = random_unitary(2, static_cast<std::uint64_t>(40 + i));
      const auto r = instantiate_numeric(pat, target, 1e-10, static_cast<std::uint64_t>(i));
      EXPECT_LT(r.distance, 1e-10);
      EXPECT_LT(hs_distance(pat.unitary(r.params), target), 1e-10);
    }
  }
}

TEST(instantiate_numeric, swap_needs_more_than_one_cx) {
  GatePattern pat;
  pat.num_qubits = 2;
  pat.num_params = 12;
  pat.gates = {{GateKind::U3, {0}, {0, 1, 2}}, {GateKind::U3, {1}, {3, 4, 5}}, {GateKind::CX, {0, 1}, {}},
               {GateKind::U3, {0}, {6, 7, 8}}, {GateKind::U3, {1}, {9, 10, 11}}};
  const MatX swap = unitary(Circuit(2, {Gate::swap(0, 1)}));
  try {
    instantiate_numeric(pat, swap, 1e-8, 3, {.restarts = 3, .max_iters = 200});
    FAIL() << "a single CX cannot express SWAP";
  } catch (const ToleranceNotReached& e) {
    EXPECT_GT(e.best_distance(), 0.1);
  }
}

TEST(instantiate_numeric, rejects_bad_targets) {
  const GatePattern pat = euler_pattern(NativeFamily::RxRz);
  EXPECT_THROW(instantiate_numeric(pat, MatX::Identity(4, 4), 1e-8, 0), DimensionMismatch);
  EXPECT_THROW(instantiate_numeric(pat, MatX::Constant(2, 2, 1.0), 1e-8, 0), NonUnitaryInput);
}
