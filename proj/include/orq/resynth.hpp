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
#include <optional>
#include <tuple>
#include <vector>

#include "orq/circuit.hpp"
#include "orq/error.hpp"
#include "orq/instantiate.hpp"
#include "orq/numeric.hpp"
#include "orq/rng.hpp"
#include "orq/unitary.hpp"

namespace orq {

/// A run of gates supported on one or two qubits. Blocks partition the gate
/// list, and concatenating them in order yields an equivalent circuit.
struct Block {
  std::vector<int> qubits;
  std::vector<std::size_t> gate_indices;

  bool two_qubit() const { return qubits.size() == 2; }
};

inline std::vector<Block> partition_blocks(const Circuit& c) {
  struct Building {
    Block block;
    std::size_t key;
    bool accepts_2q = true;
    bool alive = true;
  };
  std::vector<Building> blocks;
  std::vector<std::optional<std::size_t>> open(static_cast<std::size_t>(c.num_qubits()));
  auto same_pair = [](const std::vector<int>& qs, int a, int b) {
    return qs.size() == 2 && ((qs[0] == a && qs[1] == b) || (qs[0] == b && qs[1] == a));
  };

  for (std::size_t i = 0; i < c.size(); ++i) {
    const Gate& g = c[i];
    if (g.arity() == 1) {
      auto& o = open[static_cast<std::size_t>(g.qubit(0))];
      if (o) {
        blocks[*o].block.gate_indices.push_back(i);
      } else {
        blocks.push_back({Block{{g.qubit(0)}, {i}}, i});
        o = blocks.size() - 1;
      }
      continue;
    }
    const int a = g.qubit(0), b = g.qubit(1);
    auto& oa = open[static_cast<std::size_t>(a)];
    auto& ob = open[static_cast<std::size_t>(b)];
    if (oa && ob && *oa == *ob && blocks[*oa].accepts_2q && same_pair(blocks[*oa].block.qubits, a, b)) {
      blocks[*oa].block.gate_indices.push_back(i);
      continue;
    }
    Building fresh{Block{{a, b}, {}}, i};
    for (auto* o : {&oa, &ob}) {
      if (!*o) continue;
      Building& prev = blocks[**o];
      if (!prev.alive) continue;
      if (prev.block.two_qubit()) {
        prev.accepts_2q = false;
      } else {
        // Pending single-qubit run joins its next two-qubit partner.
        auto& idx = fresh.block.gate_indices;
        idx.insert(idx.end(), prev.block.gate_indices.begin(), prev.block.gate_indices.end());
        prev.alive = false;
      }
    }
    fresh.block.gate_indices.push_back(i);
    std::sort(fresh.block.gate_indices.begin(), fresh.block.gate_indices.end());
    blocks.push_back(std::move(fresh));
    oa = ob = blocks.size() - 1;
  }

  std::vector<Building*> live;
  for (auto& b : blocks) {
    if (b.alive) live.push_back(&b);
  }
  std::stable_sort(live.begin(), live.end(), [](const Building* x, const Building* y) { return x->key < y->key; });
  std::vector<Block> out;
  out.reserve(live.size());
  for (auto* b : live) out.push_back(std::move(b->block));
  return out;
}

/// Concatenates blocks in order.
inline Circuit assemble_blocks(const Circuit& c, const std::vector<Block>& blocks) {
  std::vector<Gate> gates;
  gates.reserve(c.size());
  for (const auto& b : blocks) {
    for (std::size_t i : b.gate_indices) gates.push_back(c[i]);
  }
  return c.with_gates(std::move(gates));
}

/// Local 2^k unitary of a block; block qubit k maps to local bit k.
inline MatX block_unitary(const Circuit& c, const Block& b) {
  std::vector<int> map(static_cast<std::size_t>(c.num_qubits()), 0);
  for (std::size_t k = 0; k < b.qubits.size(); ++k) map[static_cast<std::size_t>(b.qubits[k])] = static_cast<int>(k);
  std::vector<Gate> local;
  local.reserve(b.gate_indices.size());
  for (std::size_t i : b.gate_indices) local.push_back(c[i].relabeled(map));
  return gates_unitary(local, static_cast<int>(b.qubits.size()));
}

/// CX-ladder ansatz: (cx_count + 1) layers of U3 on both qubits separated by CX(0, 1).
/// Parameters are laid out per layer as [U3 on qubit 0 | U3 on qubit 1].
struct Template {
  int cx_count = 0;

  int num_params() const { return 6 * (cx_count + 1); }
  int num_u3() const { return 2 * (cx_count + 1); }
};

namespace detail {

/// Left-multiplies `m` by a 2x2 operator on local bit `bit`.
inline void left_apply(Mat4& m, const Mat2& u, int bit) {
  const int stride = bit == 0 ? 1 : 2;
  for (int o = 0; o < 2; ++o) {
    const int base = bit == 0 ? 2 * o : o;
    const int r0 = base, r1 = base + stride;
    for (int col = 0; col < 4; ++col) {
      const cplx x = m(r0, col), y = m(r1, col);
      m(r0, col) = u(0, 0) * x + u(0, 1) * y;
      m(r1, col) = u(1, 0) * x + u(1, 1) * y;
    }
  }
}

inline void left_apply_cx(Mat4& m) { m.row(1).swap(m.row(3)); }

/// Factor list of a template in time order.
struct TemplateFactors {
  std::vector<Mat4> factors;
  std::vector<int> u3_factor;  // factor index of each U3
  std::vector<int> u3_bit;
};

inline Mat2 u3_at(const Vec& p, int u) { return u3_matrix(p[3 * u], p[3 * u + 1], p[3 * u + 2]); }

inline TemplateFactors template_factors(const Template& t, const Vec& p) {
  TemplateFactors tf;
  Mat4 cx = Mat4::Identity();
  left_apply_cx(cx);
  for (int layer = 0; layer <= t.cx_count; ++layer) {
    for (int bit = 0; bit < 2; ++bit) {
      Mat4 f = Mat4::Identity();
      left_apply(f, u3_at(p, 2 * layer + bit), bit);
      tf.u3_factor.push_back(static_cast<int>(tf.factors.size()));
      tf.u3_bit.push_back(bit);
      tf.factors.push_back(f);
    }
    if (layer < t.cx_count) tf.factors.push_back(cx);
  }
  return tf;
}

}  // namespace detail

/// Unitary of a template at the given parameters.
inline Mat4 template_unitary(const Template& t, const Vec& params) {
  Mat4 m = Mat4::Identity();
  for (int layer = 0; layer <= t.cx_count; ++layer) {
    detail::left_apply(m, detail::u3_at(params, 2 * layer), 0);
    detail::left_apply(m, detail::u3_at(params, 2 * layer + 1), 1);
    if (layer < t.cx_count) detail::left_apply_cx(m);
  }
  return m;
}

/// 1 - |tr(T(params)^dagger target)| / 4, in [0, 1].
inline double template_distance(const Vec& params, const Template& t, const Mat4& target) {
  if (params.size() != t.num_params()) throw DimensionMismatch("template parameter count mismatch");
  return std::clamp(phase_distance(template_unitary(t, params), target), 0.0, 1.0);
}

/// Central-difference gradient of template_distance with step `h`.
///
/// Each probe re-evaluates the trace with one U3 perturbed, using cached
/// prefix and suffix products so a probe costs O(1) instead of a full product.
inline Vec template_gradient(const Vec& params, const Template& t, const Mat4& target, double h = 1e-6) {
  const auto tf = detail::template_factors(t, params);
  const std::size_t m = tf.factors.size();
  std::vector<Mat4> prefix(m + 1, Mat4::Identity()), suffix(m + 1, Mat4::Identity());
  for (std::size_t j = 0; j < m; ++j) prefix[j + 1] = tf.factors[j] * prefix[j];
  for (std::size_t j = m; j-- > 0;) suffix[j] = suffix[j + 1] * tf.factors[j];

  Vec g(params.size());
  for (int u = 0; u < t.num_u3(); ++u) {
    const std::size_t j = static_cast<std::size_t>(tf.u3_factor[static_cast<std::size_t>(u)]);
    const int bit = tf.u3_bit[static_cast<std::size_t>(u)];
    // tr(T^dagger U) = tr(F_j^dagger M) with M = S^dagger U P^dagger, reduced over the idle bit.
    const Mat4 mm = suffix[j + 1].adjoint() * target * prefix[j].adjoint();
    Mat2 r = Mat2::Zero();
    for (int o = 0; o < 2; ++o) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const int ra = bit == 0 ? a + 2 * o : o + 2 * a;
          const int cb = bit == 0 ? b + 2 * o : o + 2 * b;
          r(a, b) += mm(ra, cb);
        }
      }
    }
    auto f = [&](const Vec& p) {
      const Mat2 uu = detail::u3_at(p, u);
      return 1.0 - std::abs((uu.conjugate().cwiseProduct(r)).sum()) / 4.0;
    };
    Vec probe = params;
    for (int k = 0; k < 3; ++k) {
      const Eigen::Index idx = 3 * u + k;
      const double x = params[idx];
      probe[idx] = x + h;
      const double fp = f(probe);
      probe[idx] = x - h;
      const double fm = f(probe);
      probe[idx] = x;
      g[idx] = (fp - fm) / (2 * h);
    }
  }
  return g;
}

struct TemplateFit {
  Vec params;
  double distance = 1.0;
};

/// Multi-start descent on template_distance. Returns the best fit even above `tol`.
inline TemplateFit optimize_template(const Template& t, const Mat4& target, int restarts, int max_iters, double tol,
                                     std::uint64_t seed) {
  if (restarts < 1) throw HyperparameterError("restarts must be >= 1");
  auto value = [&](const Vec& p) { return template_distance(p, t, target); };
  auto grad = [&](const Vec& p) { return template_gradient(p, t, target); };
  MinimizeOptions opt;
  opt.max_iters = max_iters;
  Rng rng(seed);
  TemplateFit best;
  best.params = Vec::Zero(t.num_params());
  for (int r = 0; r < restarts; ++r) {
    Vec x0(t.num_params());
    for (Eigen::Index i = 0; i < x0.size(); ++i) x0[i] = rng.uniform(0, 2 * kPi);
    auto res = minimize(value, grad, x0, opt);
    if (r == 0 || res.value < best.distance) {
      best.params = std::move(res.x);
      best.distance = res.value;
    }
    if (best.distance <= tol) break;
  }
  return best;
}

/// Shende-Markov-Bullock invariant gamma(U) = U (YY) U^T (YY), after scaling U into SU(4).
inline Mat4 gamma_invariant(const Mat4& u) {
  const cplx det = u.determinant();
  const Mat4 su = u / std::pow(det, 0.25);
  Mat4 yy = Mat4::Zero();
  yy(0, 3) = -1;
  yy(1, 2) = 1;
  yy(2, 1) = 1;
  yy(3, 0) = -1;
  return su * yy * su.transpose() * yy;
}

/// Lower bound on the CX count needed for `u`, from the gamma invariant.
/// `tol` loosens each membership test so near-boundary unitaries are still tried.
inline int cx_lower_bound(const Mat4& u, double tol) {
  const Mat4 g = gamma_invariant(u);
  const Mat4 id = Mat4::Identity();
  if ((g - id).cwiseAbs().maxCoeff() <= tol || (g + id).cwiseAbs().maxCoeff() <= tol) return 0;
  const cplx tr = g.trace();
  if (std::abs(tr) <= tol && (g * g + id).cwiseAbs().maxCoeff() <= tol) return 1;
  if (std::abs(tr.imag()) <= tol) return 2;
  return 3;
}

struct ResynthOptions {
  double tol = 1e-7;
  int restarts = 8;
  int max_iters = 500;
  std::uint64_t seed = 0;
  /// Skip templates the gamma invariant rules out.
  bool use_lower_bound = true;
};

struct BlockSynthesis {
  std::vector<Gate> gates;  // on local qubits 0 and 1
  int cx_count = 0;
  double distance = 0;
  double phase = 0;         // u ~= e^{i phase} * unitary(gates)
};

namespace detail {

inline bool is_identity_u3(double theta, double phi, double lam) {
  return angle_residue(theta, kFourPi) < 1e-10 && angle_residue(phi + lam, 2 * kPi) < 1e-10;
}

inline std::vector<Gate> materialize_template(const Template& t, const Vec& p) {
  std::vector<Gate> out;
  for (int layer = 0; layer <= t.cx_count; ++layer) {
    for (int bit = 0; bit < 2; ++bit) {
      const int u = 2 * layer + bit;
      const double th = p[3 * u], ph = p[3 * u + 1], la = p[3 * u + 2];
      if (!is_identity_u3(th, ph, la)) out.push_back(Gate::u3(th, ph, la, bit));
    }
    if (layer < t.cx_count) out.push_back(Gate::cx(0, 1));
  }
  return out;
}

}  // namespace detail

/// Re-expresses a 4x4 unitary with the fewest CX the templates reach within `tol`.
/// Returns nullopt when even the 3-CX template misses, so the caller keeps the original.
inline std::optional<BlockSynthesis> resynthesize_block(const Mat4& u, const ResynthOptions& opt) {
  if (unitarity_error(u) > 1e-9) throw NonUnitaryInput("resynthesize_block: input is not unitary");
  const int first = opt.use_lower_bound ? cx_lower_bound(u, std::max(1e-6, 10 * std::sqrt(opt.tol))) : 0;
  for (int k = first; k <= 3; ++k) {
    const Template t{k};
    const TemplateFit fit = optimize_template(t, u, opt.restarts, opt.max_iters, opt.tol, derive_seed(opt.seed, k));
    if (fit.distance > opt.tol) continue;
    BlockSynthesis out;
    out.gates = detail::materialize_template(t, fit.params);
    out.cx_count = k;
    const MatX approx = gates_unitary(out.gates, 2);
    out.distance = phase_distance(approx, u);
    out.phase = relative_phase(u, approx);
    if (out.distance > opt.tol) continue;
    return out;
  }
  return std::nullopt;
}

/// Collapses a single-qubit gate run into at most one U3; `phase` receives the leftover.
inline std::vector<Gate> collapse_single_qubit(const Mat2& u, int q, double* phase) {
  const EulerAngles e = zyz_decompose(u);
  *phase = e.phase;
  if (detail::is_identity_u3(e.theta, e.phi, e.lam)) {
    *phase = relative_phase(u, Mat2::Identity());
    return {};
  }
  return {Gate::u3(e.theta, e.phi, e.lam, q)};
}

struct ResynthStats {
  int blocks = 0;
  int replaced = 0;
};

/// Partition, resynthesize each block, keep replacements that strictly reduce (CX, gates).
inline Circuit resynth_pass(const Circuit& c, const ResynthOptions& opt = {}, ResynthStats* stats = nullptr) {
  const auto blocks = partition_blocks(c);
  Circuit out = c.with_gates({});
  std::vector<Gate> gates;
  gates.reserve(c.size());
  ResynthStats st;
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    const Block& b = blocks[bi];
    ++st.blocks;
    auto keep = [&] {
      for (std::size_t i : b.gate_indices) gates.push_back(c[i]);
    };
    if (!b.two_qubit()) {
      if (b.gate_indices.size() < 2) {
        keep();
        continue;
      }
      double phase = 0;
      const Mat2 u = block_unitary(c, b);
      for (Gate& g : collapse_single_qubit(u, b.qubits[0], &phase)) gates.push_back(std::move(g));
      out.add_global_phase(phase);
      ++st.replaced;
      continue;
    }
    int old_cx = 0;
    for (std::size_t i : b.gate_indices) old_cx += c[i].kind() == GateKind::CX;
    const int old_total = static_cast<int>(b.gate_indices.size());
    const Mat4 u = block_unitary(c, b);
    ResynthOptions local = opt;
    local.seed = derive_seed(opt.seed, bi);
    std::optional<BlockSynthesis> syn;
    if (old_total > 1) syn = resynthesize_block(u, local);
    if (!syn || std::make_tuple(syn->cx_count, static_cast<int>(syn->gates.size())) >=
                    std::make_tuple(old_cx, old_total)) {
      keep();
      continue;
    }
    for (const Gate& g : syn->gates) gates.push_back(g.relabeled(b.qubits));
    out.add_global_phase(syn->phase);
    ++st.replaced;
  }
  if (stats) *stats = st;
  return out.with_gates(std::move(gates));
}

}  // namespace orq
