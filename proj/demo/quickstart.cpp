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

// Parses a small circuit, optimizes it for the bundled line5 device and
// prints the result with before/after metrics.

#include <iostream>

#include "orq/orq.hpp"

int main() {
  const char* source = R"(OPENQASM 2.0;
include "qelib1.inc";
qreg q[3];
h q[0];
h q[0];
cx q[0],q[2];
rz(0.25) q[2];
rz(-0.25) q[2];
cx q[0],q[2];
t q[1];
cx q[1],q[2];
)";
  const orq::Circuit c = orq::parse_qasm(source);
  const orq::DeviceProfile line5 = orq::bundled_profile("line5");

  const auto report = orq::run_pipeline(c, line5, orq::Pipeline::FixedSequence, {}, 7);
  std::cout << "input:  " << report.input.total_gates << " gates, depth " << report.input.depth << ", "
            << report.input.cx_count << " cx\n";
  std::cout << "output: " << report.output.total_gates << " gates, depth " << report.output.depth << ", "
            << report.output.cx_count << " cx\n";
  std::cout << "estimated fidelity " << report.fidelity_before << " -> " << report.fidelity_after << "\n\n";
  std::cout << orq::emit_qasm(report.output_circuit);
}
