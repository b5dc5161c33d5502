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

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include "orq/circuit.hpp"
#include "orq/error.hpp"

namespace orq {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using MatX = Eigen::MatrixXcd;

/// Dense unitaries are capped at this many qubits.
inline constexpr int kMaxUnitaryQubits = 10;

inline Mat2 u3_matrix(double theta, double phi, double lam) {
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  Mat2 m;
  m << c, -std::polar(1.0, lam) * s, std::polar(1.0, phi) * s, std::polar(1.0, phi + lam) * c;
  return m;
}

inline Mat2 rx_matrix(double a) {
  const cplx c(std::cos(a / 2), 0), s(0, -std::sin(a / 2));
  Mat2 m;
  m << c, s, s, c;
  return m;
}

inline Mat2 ry_matrix(double a) {
  const double c = std::cos(a / 2), s = std::sin(a / 2);
  Mat2 m;
  m << c, -s, s, c;
  return m;
}

inline Mat2 rz_matrix(double a) {
  Mat2 m;
  m << std::polar(1.0, -a / 2), 0, 0, std::polar(1.0, a / 2);
  return m;
}

/// 2x2 matrix of a single-qubit gate.
inline Mat2 single_qubit_matrix(const Gate& g) {
  const double r = 1.0 / std::sqrt(2.0);
  const cplx i(0, 1);
  Mat2 m;
  switch (g.kind()) {
    case GateKind::H: m << r, r, r, -r; break;
    case GateKind::X: m << 0, 1, 1, 0; break;
    case GateKind::Y: m << 0, -i, i, 0; break;
    case GateKind::Z: m << 1, 0, 0, -1; break;
    case GateKind::S: m << 1, 0, 0, i; break;
    case GateKind::SDG: m << 1, 0, 0, -i; break;
    case GateKind::T: m << 1, 0, 0, std::polar(1.0, kPi / 4); break;
    case GateKind::TDG: m << 1, 0, 0, std::polar(1.0, -kPi / 4); break;
    case GateKind::SX: m << cplx(0.5, 0.5), cplx(0.5, -0.5), cplx(0.5, -0.5), cplx(0.5, 0.5); break;
    case GateKind::RX: return rx_matrix(g.param(0));
    case GateKind::RY: return ry_matrix(g.param(0));
    case GateKind::RZ: return rz_matrix(g.param(0));
    case GateKind::U3: return u3_matrix(g.param(0), g.param(1), g.param(2));
    default: throw InvalidGate("not a single-qubit gate: " + std::string(mnemonic(g.kind())));
  }
  return m;
}

/// 4x4 matrix of a two-qubit gate. Local basis index = bit(qubits[0]) + 2*bit(qubits[1]).
inline Mat4 two_qubit_matrix(const Gate& g) {
  Mat4 m = Mat4::Zero();
  switch (g.kind()) {
    case GateKind::CX:
      m(0, 0) = m(2, 2) = 1;
      m(3, 1) = m(1, 3) = 1;
      break;
    case GateKind::SWAP:
      m(0, 0) = m(3, 3) = 1;
      m(1, 2) = m(2, 1) = 1;
      break;
    default: throw InvalidGate("not a two-qubit gate: " + std::string(mnemonic(g.kind())));
  }
  return m;
}

/// Left-multiplies `m` (2^n rows) by a single-qubit operator on qubit `q`.
inline void apply_1q(MatX& m, const Mat2& g, int q) {
  const Eigen::Index dim = m.rows();
  const Eigen::Index bit = Eigen::Index{1} << q;
  for (Eigen::Index col = 0; col < m.cols(); ++col) {
    cplx* v = m.col(col).data();
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (i & bit) continue;
      const cplx a = v[i], b = v[i | bit];
      v[i] = g(0, 0) * a + g(0, 1) * b;
      v[i | bit] = g(1, 0) * a + g(1, 1) * b;
    }
  }
}

/// Left-multiplies `m` by a two-qubit operator on (q0, q1) in local ordering.
inline void apply_2q(MatX& m, const Mat4& g, int q0, int q1) {
  const Eigen::Index dim = m.rows();
  const Eigen::Index b0 = Eigen::Index{1} << q0, b1 = Eigen::Index{1} << q1;
  for (Eigen::Index col = 0; col < m.cols(); ++col) {
    cplx* v = m.col(col).data();
    for (Eigen::Index i = 0; i < dim; ++i) {
      if ((i & b0) || (i & b1)) continue;
      const Eigen::Index idx[4] = {i, i | b0, i | b1, i | b0 | b1};
      const cplx in[4] = {v[idx[0]], v[idx[1]], v[idx[2]], v[idx[3]]};
      for (int r = 0; r < 4; ++r) {
        v[idx[r]] = g(r, 0) * in[0] + g(r, 1) * in[1] + g(r, 2) * in[2] + g(r, 3) * in[3];
      }
    }
  }
}

inline void apply_gate(MatX& m, const Gate& g) {
  if (g.arity() == 1) {
    apply_1q(m, single_qubit_matrix(g), g.qubit(0));
  } else {
    apply_2q(m, two_qubit_matrix(g), g.qubit(0), g.qubit(1));
  }
}

/// Full 2^n x 2^n unitary; gates are applied in list order (later gates on the left).
inline MatX unitary(const Circuit& c) {
  if (c.num_qubits() > kMaxUnitaryQubits) {
    throw QubitCapExceeded("unitary() supports at most " + std::to_string(kMaxUnitaryQubits) +
                           " qubits, got " + std::to_string(c.num_qubits()));
  }
  const Eigen::Index dim = Eigen::Index{1} << c.num_qubits();
  MatX m = MatX::Identity(dim, dim);
  for (const Gate& g : c.gates()) apply_gate(m, g);
  if (c.global_phase() != 0.0) m *= std::polar(1.0, c.global_phase());
  return m;
}

/// Hilbert-Schmidt distance modulo global phase: 1 - |tr(u^dagger v)| / d.
template <typename A, typename B>
double phase_distance(const Eigen::MatrixBase<A>& u, const Eigen::MatrixBase<B>& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols() || u.rows() != u.cols()) {
    throw DimensionMismatch("matrices must be square and of equal size");
  }
  const cplx tr = (u.conjugate().cwiseProduct(v)).sum();
  return 1.0 - std::abs(tr) / static_cast<double>(u.rows());
}

template <typename A, typename B>
bool equiv_up_to_phase(const Eigen::MatrixBase<A>& u, const Eigen::MatrixBase<B>& v, double tol) {
  return phase_distance(u, v) <= tol;
}

template <typename A>
double unitarity_error(const Eigen::MatrixBase<A>& u) {
  using Dyn = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;
  const Dyn prod = u.adjoint() * u;
  return (prod - Dyn::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

/// Unitary of a short gate list on `num_qubits` local qubits (no cap checks).
inline MatX gates_unitary(const std::vector<Gate>& gates, int num_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  MatX m = MatX::Identity(dim, dim);
  for (const Gate& g : gates) apply_gate(m, g);
  return m;
}

/// Phase alpha such that target ~= e^{i alpha} approx.
template <typename A, typename B>
double relative_phase(const Eigen::MatrixBase<A>& target, const Eigen::MatrixBase<B>& approx) {
  return std::arg((approx.conjugate().cwiseProduct(target)).sum());
}

inline bool circuits_equivalent(const Circuit& a, const Circuit& b, double tol) {
  if (a.num_qubits() != b.num_qubits()) throw DimensionMismatch("qubit counts differ");
  return equiv_up_to_phase(unitary(a), unitary(b), tol);
}

}  // namespace orq
