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

#include "orq/unitary.hpp"

#include "gtest/gtest.h"
#include "orq/harness.hpp"
#include "test_util.hpp"

using namespace orq;
using orq_test::chain_unitary;

TEST(unitary, hadamard) {
  const MatX u = unitary(Circuit(1, {Gate::h(0)}));
  const double r = 1 / std::sqrt(2.0);
  MatX expected(2, 2);
  expected << r, r, r, -r;
  EXPECT_LT((u - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(unitary, cx_control_is_least_significant_bit) {
  const MatX u = unitary(Circuit(2, {Gate::cx(0, 1)}));
  // |q1 q0>: control q0 = bit 0. Basis 1 = |01> maps to 3 = |11>.
  MatX expected = MatX::Zero(4, 4);
  expected(0, 0) = expected(2, 2) = 1;
  expected(3, 1) = expected(1, 3) = 1;
  EXPECT_EQ(u, expected);
}

TEST(unitary, matches_straight_line_chain) {
  for (int i = 0; i < 200; ++i) {
    const Circuit c = gen_random_circuit(1 + i % 4, 5 + i % 11, static_cast<std::uint64_t>(100 + i));
    EXPECT_LT((unitary(c) - chain_unitary(c)).cwiseAbs().maxCoeff(), 1e-12) << i;
  }
  const Circuit three = gen_random_circuit(3, 5, 7);
  EXPECT_LT((unitary(three) - chain_unitary(three)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(unitary, is_unitary_on_random_circuits) {
  for (int i = 0; i < 100; ++i) {
    const Circuit c = gen_random_circuit(1 + i % 5, 40, static_cast<std::uint64_t>(i));
    EXPECT_LT(unitarity_error(unitary(c)), 1e-9);
  }
}

TEST(unitary, concat_is_matrix_product) {
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 4;
    const Circuit a = gen_random_circuit(n, 8, static_cast<std::uint64_t>(2 * i));
    const Circuit b = gen_random_circuit(n, 8, static_cast<std::uint64_t>(2 * i + 1));
    EXPECT_LT((unitary(concat(a, b)) - unitary(b) * unitary(a)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(unitary, qubit_cap) {
  EXPECT_NO_THROW(unitary(Circuit(10)));
  EXPECT_THROW(unitary(Circuit(11)), QubitCapExceeded);
}

TEST(unitary, global_phase_is_applied) {
  Circuit c(1, {Gate::x(0)});
  c.add_global_phase(0.3);
  EXPECT_LT((unitary(c) - chain_unitary(c)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(std::arg(unitary(c)(1, 0)), 0.3, 1e-15);
}

TEST(equiv_up_to_phase, examples) {
  const MatX u = unitary(gen_random_circuit(2, 10, 1));
  EXPECT_TRUE(equiv_up_to_phase(u, u, 1e-9));
  const MatX phased = u * std::polar(1.0, kPi / 7);
  EXPECT_TRUE(equiv_up_to_phase(u, phased, 1e-9));
  const MatX id = MatX::Identity(2, 2);
  const MatX x = unitary(Circuit(1, {Gate::x(0)}));
  EXPECT_FALSE(equiv_up_to_phase(id, x, 1e-6));
  EXPECT_THROW(equiv_up_to_phase(id, u, 1e-6), DimensionMismatch);
}

TEST(equiv_up_to_phase, reflexive_symmetric_phase_invariant) {
  for (int i = 0; i < 100; ++i) {
    const MatX a = orq_test::random_unitary(4, static_cast<std::uint64_t>(i));
    const MatX b = i % 2 ? a * std::polar(1.0, 0.1 * i) : orq_test::random_unitary(4, 1000 + static_cast<std::uint64_t>(i));
    EXPECT_TRUE(equiv_up_to_phase(a, a, 1e-12));
    EXPECT_NEAR(phase_distance(a, b), phase_distance(b, a), 1e-14);
    const cplx s = std::polar(1.0, 1.234 * i);
    EXPECT_NEAR(phase_distance(MatX(a * s), b), phase_distance(a, b), 1e-14);
    EXPECT_NEAR(phase_distance(a, MatX(b * s)), phase_distance(a, b), 1e-14);
    EXPECT_NEAR(phase_distance(a, b), orq_test::hs_distance(a, b), 1e-14);
  }
}

TEST(relative_phase, recovers_scalar) {
  const MatX u = orq_test::random_unitary(4, 9);
  const MatX v = u * std::polar(1.0, 0.7);
  EXPECT_NEAR(relative_phase(v, u), 0.7, 1e-12);
}
