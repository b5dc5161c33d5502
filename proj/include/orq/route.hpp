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
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "orq/backend.hpp"
#include "orq/circuit.hpp"
#include "orq/error.hpp"
#include "orq/unitary.hpp"

namespace orq {

/// Virtual-to-physical placement. Virtual qubits [0, logical) are the
/// circuit's qubits; the rest are ancillas covering the remaining device
/// qubits, so both maps are permutations of [0, device qubits).
struct Layout {
  int logical = 0;
  std::vector<int> initial;
  std::vector<int> final;

  friend bool operator==(const Layout&, const Layout&) = default;
};

struct RoutedCircuit {
  Circuit circuit;
  Layout layout;
};

namespace detail {

inline std::vector<std::vector<int>> all_pairs_distance(const DeviceProfile& p) {
  const int n = p.num_qubits;
  constexpr int inf = std::numeric_limits<int>::max() / 4;
  std::vector<std::vector<int>> dist(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), inf));
  for (int s = 0; s < n; ++s) {
    auto& d = dist[static_cast<std::size_t>(s)];
    d[static_cast<std::size_t>(s)] = 0;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v : p.neighbors(u)) {
        if (d[static_cast<std::size_t>(v)] == inf) {
          d[static_cast<std::size_t>(v)] = d[static_cast<std::size_t>(u)] + 1;
          queue.push_back(v);
        }
      }
    }
  }
  return dist;
}

/// Shortest path from `from` to `to`; among equal-length paths the
/// lexicographically smallest by physical index is taken.
inline std::vector<int> shortest_path(const DeviceProfile& p, const std::vector<std::vector<int>>& dist, int from,
                                      int to) {
  std::vector<int> path{from};
  int cur = from;
  while (cur != to) {
    int step = -1;
    for (int v : p.neighbors(cur)) {
      if (dist[static_cast<std::size_t>(v)][static_cast<std::size_t>(to)] + 1 ==
          dist[static_cast<std::size_t>(cur)][static_cast<std::size_t>(to)]) {
        step = v;
        break;
      }
    }
    if (step < 0) throw Error("device " + p.name + " has no path between qubits " + std::to_string(from) + " and " +
                              std::to_string(to));
    path.push_back(step);
    cur = step;
  }
  return path;
}

inline bool coupled_under_identity(const Circuit& c, const DeviceProfile& p) {
  for (const Gate& g : c.gates()) {
    if (g.arity() == 2 && !p.coupled(g.qubit(0), g.qubit(1))) return false;
  }
  return true;
}

/// Greedy interaction-frequency placement of logical qubits onto the device.
inline std::vector<int> initial_placement(const Circuit& c, const DeviceProfile& p,
                                          const std::vector<std::vector<int>>& dist) {
  const int n = c.num_qubits();
  const int dev = p.num_qubits;
  std::vector<std::vector<int>> w(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
  int best_w = 0, la = -1, lb = -1;
  for (const Gate& g : c.gates()) {
    if (g.arity() != 2) continue;
    const int a = std::min(g.qubit(0), g.qubit(1)), b = std::max(g.qubit(0), g.qubit(1));
    const int v = ++w[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    w[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = v;
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (w[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] > best_w) {
        best_w = w[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
        la = a;
        lb = b;
      }
    }
  }
  std::vector<int> phys(static_cast<std::size_t>(n), -1);
  std::vector<bool> used(static_cast<std::size_t>(dev), false);
  if (la < 0) {
    std::iota(phys.begin(), phys.end(), 0);
    return phys;
  }
  int best_deg = -1;
  Edge best_edge{0, 0};
  for (const Edge& e : p.coupling) {
    const int d = p.degree(e.first) + p.degree(e.second);
    if (d > best_deg) {
      best_deg = d;
      best_edge = e;
    }
  }
  if (best_deg < 0) throw Error("device " + p.name + " has no coupling edges");
  phys[static_cast<std::size_t>(la)] = best_edge.first;
  phys[static_cast<std::size_t>(lb)] = best_edge.second;
  used[static_cast<std::size_t>(best_edge.first)] = used[static_cast<std::size_t>(best_edge.second)] = true;

  for (int placed = 2; placed < n; ++placed) {
    int pick = -1, pick_w = -1;
    for (int l = 0; l < n; ++l) {
      if (phys[static_cast<std::size_t>(l)] >= 0) continue;
      int tw = 0;
      for (int m = 0; m < n; ++m) {
        if (phys[static_cast<std::size_t>(m)] >= 0) tw += w[static_cast<std::size_t>(l)][static_cast<std::size_t>(m)];
      }
      if (tw > pick_w) {
        pick_w = tw;
        pick = l;
      }
    }
    long long best_cost = std::numeric_limits<long long>::max();
    int best_near = std::numeric_limits<int>::max();
    int target = -1;
    for (int q = 0; q < dev; ++q) {
      if (used[static_cast<std::size_t>(q)]) continue;
      long long cost = 0;
      int near = std::numeric_limits<int>::max();
      for (int m = 0; m < n; ++m) {
        const int pm = phys[static_cast<std::size_t>(m)];
        if (pm < 0) continue;
        const int d = dist[static_cast<std::size_t>(q)][static_cast<std::size_t>(pm)];
        cost += static_cast<long long>(w[static_cast<std::size_t>(pick)][static_cast<std::size_t>(m)]) * d;
        near = std::min(near, d);
      }
      if (cost < best_cost || (cost == best_cost && near < best_near)) {
        best_cost = cost;
        best_near = near;
        target = q;
      }
    }
    phys[static_cast<std::size_t>(pick)] = target;
    used[static_cast<std::size_t>(target)] = true;
  }
  return phys;
}

}  // namespace detail

namespace detail {

inline void check_width(const Circuit& c, const DeviceProfile& p) {
  if (c.num_qubits() > p.num_qubits) {
    throw InsufficientQubits("circuit needs " + std::to_string(c.num_qubits()) + " qubits, " + p.name + " has " +
                             std::to_string(p.num_qubits));
  }
}

}  // namespace detail

/// Routes `c` starting from a caller-chosen placement. `initial` maps each
/// logical qubit to a distinct physical qubit; ancillas fill the remaining
/// physical qubits in increasing order.
inline RoutedCircuit route_from(const Circuit& c, const DeviceProfile& p, const std::vector<int>& initial) {
  detail::check_width(c, p);
  const int n = c.num_qubits();
  const int dev = p.num_qubits;
  if (static_cast<int>(initial.size()) != n) throw DimensionMismatch("initial placement must cover every qubit");
  std::vector<bool> used(static_cast<std::size_t>(dev), false);
  for (int q : initial) {
    if (q < 0 || q >= dev || used[static_cast<std::size_t>(q)]) {
      throw QubitOutOfRange("initial placement is not injective into the device");
    }
    used[static_cast<std::size_t>(q)] = true;
  }
  const auto dist = detail::all_pairs_distance(p);

  Layout layout;
  layout.logical = n;
  layout.initial = initial;
  for (int q = 0; q < dev; ++q) {
    if (!used[static_cast<std::size_t>(q)]) layout.initial.push_back(q);
  }

  std::vector<int> phys_of = layout.initial;
  std::vector<int> virt_at(static_cast<std::size_t>(dev));
  for (int v = 0; v < dev; ++v) virt_at[static_cast<std::size_t>(phys_of[static_cast<std::size_t>(v)])] = v;

  Circuit out(dev);
  out.add_global_phase(c.global_phase());
  for (const Gate& g : c.gates()) {
    if (g.arity() == 2) {
      const int pa = phys_of[static_cast<std::size_t>(g.qubit(0))];
      const int pb = phys_of[static_cast<std::size_t>(g.qubit(1))];
      if (!p.coupled(pa, pb)) {
        // Move the lower-degree endpoint (lower index on ties) toward the other.
        const int da = p.degree(pa), db = p.degree(pb);
        const bool move_a = da < db || (da == db && pa < pb);
        const auto path = detail::shortest_path(p, dist, move_a ? pa : pb, move_a ? pb : pa);
        for (std::size_t k = 0; k + 2 < path.size(); ++k) {
          const int x = path[k], y = path[k + 1];
          out.add(Gate::swap(x, y));
          const int vx = virt_at[static_cast<std::size_t>(x)], vy = virt_at[static_cast<std::size_t>(y)];
          std::swap(virt_at[static_cast<std::size_t>(x)], virt_at[static_cast<std::size_t>(y)]);
          phys_of[static_cast<std::size_t>(vx)] = y;
          phys_of[static_cast<std::size_t>(vy)] = x;
        }
      }
    }
    out.add(g.relabeled(phys_of));
  }
  layout.final = phys_of;
  return {std::move(out), std::move(layout)};
}

/// Places and routes `c` onto the device. The output acts on all device
/// qubits; every two-qubit gate lies on a coupling edge. Circuits already
/// coupled under the identity placement keep it.
///
/// `seed` is accepted for interface stability; placement and SWAP choice are
/// fully determined by index-order tie breaks.
inline RoutedCircuit route(const Circuit& c, const DeviceProfile& p, std::uint64_t seed = 0) {
  (void)seed;
  detail::check_width(c, p);
  if (detail::coupled_under_identity(c, p)) {
    std::vector<int> identity(static_cast<std::size_t>(c.num_qubits()));
    std::iota(identity.begin(), identity.end(), 0);
    return route_from(c, p, identity);
  }
  return route_from(c, p, detail::initial_placement(c, p, detail::all_pairs_distance(p)));
}

inline bool layout_valid(const Layout& l, int device_qubits) {
  auto is_perm = [&](const std::vector<int>& m) {
    if (static_cast<int>(m.size()) != device_qubits) return false;
    std::vector<bool> seen(static_cast<std::size_t>(device_qubits), false);
    for (int q : m) {
      if (q < 0 || q >= device_qubits || seen[static_cast<std::size_t>(q)]) return false;
      seen[static_cast<std::size_t>(q)] = true;
    }
    return true;
  };
  return l.logical >= 0 && l.logical <= device_qubits && is_perm(l.initial) && is_perm(l.final);
}

/// True iff every two-qubit gate sits on a coupling edge and every kind is
/// native (SWAP is tolerated when `allow_swap`).
inline bool verify_routed(const Circuit& c, const DeviceProfile& p, const Layout& layout, bool allow_swap = true) {
  if (c.num_qubits() > p.num_qubits || !layout_valid(layout, p.num_qubits)) return false;
  for (const Gate& g : c.gates()) {
    if (!p.is_native(g.kind()) && !(allow_swap && g.kind() == GateKind::SWAP)) return false;
    if (g.arity() == 2 && !p.coupled(g.qubit(0), g.qubit(1))) return false;
  }
  return true;
}

/// Checks unitary(routed) == P_final * unitary(original) * P_initial^-1 up to global phase.
inline bool permuted_equivalence(const Circuit& original, const Circuit& routed, const Layout& layout,
                                 double tol = 1e-8) {
  const int dev = routed.num_qubits();
  if (dev > kMaxUnitaryQubits) {
    throw QubitCapExceeded("permuted_equivalence supports at most " + std::to_string(kMaxUnitaryQubits) + " qubits");
  }
  if (!layout_valid(layout, dev) || original.num_qubits() != layout.logical) return false;
  Circuit widened = Circuit(dev).with_gates(original.gates());
  widened.add_global_phase(original.global_phase());
  const MatX u = unitary(widened);
  const MatX r = unitary(routed);

  const Eigen::Index dim = Eigen::Index{1} << dev;
  auto permute = [&](const std::vector<int>& map, Eigen::Index x) {
    Eigen::Index y = 0;
    for (int v = 0; v < dev; ++v) {
      if (x & (Eigen::Index{1} << v)) y |= Eigen::Index{1} << map[static_cast<std::size_t>(v)];
    }
    return y;
  };
  std::vector<Eigen::Index> pin(static_cast<std::size_t>(dim)), pfin(static_cast<std::size_t>(dim));
  for (Eigen::Index x = 0; x < dim; ++x) {
    pin[static_cast<std::size_t>(x)] = permute(layout.initial, x);
    pfin[static_cast<std::size_t>(x)] = permute(layout.final, x);
  }
  cplx tr = 0;
  for (Eigen::Index z = 0; z < dim; ++z) {
    for (Eigen::Index x = 0; x < dim; ++x) {
      tr += std::conj(u(x, z)) * r(pfin[static_cast<std::size_t>(x)], pin[static_cast<std::size_t>(z)]);
    }
  }
  return 1.0 - std::abs(tr) / static_cast<double>(dim) <= tol;
}

}  // namespace orq
