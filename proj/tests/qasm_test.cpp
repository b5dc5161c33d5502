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

#include "orq/qasm.hpp"

#include <string>

#include "gtest/gtest.h"
#include "orq/harness.hpp"

using namespace orq;

static ParseErrorCategory category_of(const std::string& src) {
  try {
    parse_qasm(src);
  } catch (const ParseError& e) {
    return e.category();
  }
  ADD_FAILURE() << "expected a parse error for:\n" << src;
  return ParseErrorCategory::Syntax;
}

TEST(parse_qasm, minimal_program) {
  const Circuit c = parse_qasm("OPENQASM 2.0;\nqreg q[1];\nh q[0];");
  EXPECT_EQ(c, Circuit(1, {Gate::h(0)}));
}

TEST(parse_qasm, rotation_and_cx) {
  const Circuit c = parse_qasm("OPENQASM 2.0;\nqreg q[2];\nrz(pi/2) q[1];\ncx q[0],q[1];");
  EXPECT_EQ(c, Circuit(2, {Gate::rz(kPi / 2, 1), Gate::cx(0, 1)}));
}

TEST(parse_qasm, unknown_gate) {
  EXPECT_EQ(category_of("OPENQASM 2.0;\nqreg q[1];\nccx q[0],q[0],q[0];"), ParseErrorCategory::UnknownGate);
}

TEST(parse_qasm, angle_expressions) {
  const Circuit c = parse_qasm(
      "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg r[1];\n"
      "rz(-pi) r[0];\nrx(2*pi/3 - 0.5) r[0];\nry(1.5e-3) r[0];\nrz(-(pi + 1)*2) r[0];\nrz(.25) r[0];\n"
      "u3(0.1, -0.2, pi/4) r[0]; // trailing comment\n");
  ASSERT_EQ(c.size(), 6u);
  EXPECT_EQ(c[0], Gate::rz(-kPi, 0));
  EXPECT_EQ(c[1], Gate::rx(2 * kPi / 3 - 0.5, 0));
  EXPECT_EQ(c[2], Gate::ry(1.5e-3, 0));
  EXPECT_EQ(c[3], Gate::rz(-(kPi + 1) * 2, 0));
  EXPECT_EQ(c[4], Gate::rz(0.25, 0));
  EXPECT_EQ(c[5], Gate::u3(0.1, -0.2, kPi / 4, 0));
}

TEST(parse_qasm, ignored_statements_warn) {
  const auto prog = parse_qasm_program(
      "OPENQASM 2.0;\nqreg q[2];\ncreg c[2];\nh q[0];\nbarrier q[0],q[1];\nmeasure q[0] -> c[0];\nmeasure q -> c;\n");
  EXPECT_EQ(prog.circuit, Circuit(2, {Gate::h(0)}));
  ASSERT_EQ(prog.warnings.size(), 4u);
  EXPECT_NE(prog.warnings[0].find("3:1"), std::string::npos);
  EXPECT_NE(prog.warnings[0].find("creg"), std::string::npos);
}

TEST(parse_qasm, error_categories) {
  EXPECT_EQ(category_of("qreg q[1];"), ParseErrorCategory::Syntax);
  EXPECT_EQ(category_of("OPENQASM 3.0;\nqreg q[1];"), ParseErrorCategory::UnsupportedFeature);
  EXPECT_EQ(category_of("OPENQASM 2.0;\nqreg q[1];\nh q[0]"), ParseErrorCategory::Syntax);
  EXPECT_EQ(category_of("OPENQASM 2.0;\nqreg q[1];\nrz q[0];"), ParseErrorCategory::ArityMismatch);
  EXPECT_EQ(category_of("OPENQASM 2.0;\nqreg q[1];\nh(0.1) q[0];"), ParseErrorCategory::ArityMismatch);
  EXPECT_EQ(category_of("OPENQASM 2.0;\nqreg q[2];\ncx q[0];"), ParseErrorCategory::ArityMismatch);
  EXPECT_EQ(category_of("OPENQASM 2.0;\nqreg q[2];\ncx q[1],q[1];"), ParseErrorCategory::ArityMismatch);
  EXPECT_EQ(category_of("OPENQASM 2.0;\nqreg q[2];\nh q[2];"), ParseErrorCategory::QubitOutOfRange);
  EXPECT_EQ(category_of("OPENQASM 2.0;\nqreg q[1];\nqreg r[1];"), ParseErrorCategory::UnsupportedFeature);
  EXPECT_EQ(category_of("OPENQASM 2.0;\nqreg q[1];\ngate foo a { h a; }"), ParseErrorCategory::UnsupportedFeature);
  EXPECT_EQ(category_of("OPENQASM 2.0;\nqreg q[1];\nif(c==1) h q[0];"), ParseErrorCategory::UnsupportedFeature);
  EXPECT_EQ(category_of("OPENQASM 2.0;\nqreg q[1];\nh r[0];"), ParseErrorCategory::Syntax);
  EXPECT_EQ(category_of("OPENQASM 2.0;\nqreg q[1];\nh q;"), ParseErrorCategory::UnsupportedFeature);
  EXPECT_EQ(category_of("OPENQASM 2.0;\nh q[0];"), ParseErrorCategory::Syntax);
  EXPECT_EQ(category_of("OPENQASM 2.0;\n"), ParseErrorCategory::Syntax);
  EXPECT_EQ(category_of("OPENQASM 2.0;\nqreg q[1];\nrz(1/0) q[0];"), ParseErrorCategory::Syntax);
  EXPECT_EQ(category_of("OPENQASM 2.0;\nqreg q[1];\nrz(1 $ 2) q[0];"), ParseErrorCategory::Syntax);
}

TEST(parse_qasm, error_position_points_into_source) {
  try {
    parse_qasm("OPENQASM 2.0;\nqreg q[2];\nh q[0];\n  cx q[0],q[7];\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.category(), ParseErrorCategory::QubitOutOfRange);
    EXPECT_EQ(e.line(), 4);
    EXPECT_EQ(e.column(), 13);
  }
  try {
    parse_qasm("OPENQASM 2.0;\nqreg q[1];\n\nfoo q[0];");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4);
    EXPECT_EQ(e.column(), 1);
  }
}

TEST(parse_qasm, deep_nesting_is_an_error_not_a_crash) {
  const std::string deep = "OPENQASM 2.0;\nqreg q[1];\nrz(" + std::string(100000, '(') + "1" +
                           std::string(100000, ')') + ") q[0];";
  EXPECT_EQ(category_of(deep), ParseErrorCategory::Syntax);
  const std::string negs = "OPENQASM 2.0;\nqreg q[1];\nrz(" + std::string(100000, '-') + "1) q[0];";
  EXPECT_EQ(category_of(negs), ParseErrorCategory::Syntax);
}

TEST(emit_qasm, empty_circuit) { EXPECT_EQ(emit_qasm(Circuit(1)), "OPENQASM 2.0;\nqreg q[1];\n"); }

TEST(emit_qasm, canonical_text) {
  const Circuit c(2, {Gate::rz(0.5, 1), Gate::cx(0, 1), Gate::u3(1, 2, 3, 0)});
  EXPECT_EQ(emit_qasm(c),
            "OPENQASM 2.0;\nqreg q[2];\nrz(0.5) q[1];\ncx q[0],q[1];\nu3(1,2,3) q[0];\n");
  EXPECT_EQ(emit_qasm(Circuit(1, {Gate::rz(kPi / 3, 0)})),
            "OPENQASM 2.0;\nqreg q[1];\nrz(1.0471975511965976) q[0];\n");
}

TEST(emit_qasm, round_trip_random_circuits) {
  for (int i = 0; i < 300; ++i) {
    const Circuit c = gen_random_circuit(1 + i % 6, i % 50, static_cast<std::uint64_t>(i));
    const Circuit back = parse_qasm(emit_qasm(c));
    EXPECT_TRUE(same_structure(c, back, 1e-12)) << emit_qasm(c);
    EXPECT_EQ(emit_qasm(back), emit_qasm(c));
  }
}

TEST(emit_qasm, emit_parse_is_a_fixed_point) {
  const std::vector<std::string> corpus = {
      "OPENQASM 2.0;\nqreg q[3];\nrz(-pi/3) q[2];\nrx(7*pi) q[0];\ncx q[2],q[0];\n",
      "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg a[2];\ncreg c[2];\nu3(0.1,0.2,0.3) a[1];\nswap a[0],a[1];\n",
      "OPENQASM 2.0;\nqreg q[1];\nry(1e-20) q[0];\nrz(12.566370614359172) q[0];\n",
  };
  for (const auto& s : corpus) {
    const std::string once = emit_qasm(parse_qasm(s));
    EXPECT_EQ(emit_qasm(parse_qasm(once)), once);
  }
}

TEST(parse_qasm, byte_fuzz_only_raises_parse_errors) {
  const std::string seed_text =
      "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[3];\nh q[0];\nrz(pi/2) q[1];\ncx q[0],q[2];\n"
      "u3(0.1,-0.2,3*pi) q[2];\nmeasure q[0] -> c[0];\n";
  Rng rng(17);
  int parsed = 0;
  for (int i = 0; i < 2000; ++i) {
    std::string s = seed_text;
    const int edits = 1 + static_cast<int>(rng.below(6));
    for (int e = 0; e < edits; ++e) {
      const auto pos = rng.below(s.size() + 1);
      switch (rng.below(3)) {
        case 0: s.insert(s.begin() + static_cast<std::ptrdiff_t>(pos), static_cast<char>(rng.below(256))); break;
        case 1:
          if (pos < s.size()) s.erase(pos, 1);
          break;
        default:
          if (pos < s.size()) s[pos] = static_cast<char>(rng.below(256));
      }
    }
    try {
      parse_qasm(s);
      ++parsed;
    } catch (const ParseError&) {
    } catch (const std::exception& e) {
      ADD_FAILURE() << "non-parse exception: " << e.what();
    }
  }
  EXPECT_GT(parsed, 0);
}
