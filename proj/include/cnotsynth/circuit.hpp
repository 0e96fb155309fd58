#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cnotsynth/bitmatrix.hpp"
#include "cnotsynth/rng.hpp"

namespace cnot {

struct nonlinear_gate_error : std::runtime_error {
  nonlinear_gate_error() : std::runtime_error("circuit contains a non-CNOT gate") {}
};

/// CNOT(control, target) or an opaque pass-through gate. Opaque gates are
/// never interpreted beyond their wire footprint.
struct Gate {
  enum class Kind { cnot, other };
  Kind kind;
  std::size_t control = 0, target = 0;  // cnot only
  std::string name;                     // other only
  std::vector<std::size_t> wires;       // other only

  static Gate cnot_gate(std::size_t control, std::size_t target) {
    assert(control != target);
    Gate g;
    g.kind = Kind::cnot;
    g.control = control;
    g.target = target;
    return g;
  }

  static Gate other(std::string name, std::vector<std::size_t> wires) {
    Gate g;
    g.kind = Kind::other;
    g.name = std::move(name);
    g.wires = std::move(wires);
    return g;
  }

  bool is_cnot() const { return kind == Kind::cnot; }

  template <typename Fn>
  void for_each_wire(Fn&& fn) const {
    if (is_cnot()) {
      fn(control);
      fn(target);
    } else {
      for (std::size_t w : wires) fn(w);
    }
  }

  friend bool operator==(const Gate& a, const Gate& b) {
    if (a.kind != b.kind) return false;
    if (a.is_cnot()) return a.control == b.control && a.target == b.target;
    return a.name == b.name && a.wires == b.wires;
  }
};

struct Circuit {
  std::size_t n_wires = 0;
  std::vector<Gate> gates;

  Circuit() = default;
  explicit Circuit(std::size_t n) : n_wires(n) {}

  void add_cnot(std::size_t control, std::size_t target) {
    assert(control < n_wires && target < n_wires);
    gates.push_back(Gate::cnot_gate(control, target));
  }

  void append(const Circuit& other) {
    assert(other.n_wires <= n_wires);
    gates.insert(gates.end(), other.gates.begin(), other.gates.end());
  }

  bool cnot_only() const {
    return std::all_of(gates.begin(), gates.end(),
                       [](const Gate& g) { return g.is_cnot(); });
  }

  std::size_t cnot_count() const {
    std::size_t c = 0;
    for (const Gate& g : gates) c += g.is_cnot();
    return c;
  }

  /// Bijective wire relabeling.
  Circuit relabeled(const std::vector<std::size_t>& map) const {
    Circuit out(n_wires);
    out.gates.reserve(gates.size());
    for (const Gate& g : gates) {
      if (g.is_cnot()) {
        out.gates.push_back(Gate::cnot_gate(map[g.control], map[g.target]));
      } else {
        std::vector<std::size_t> ws;
        ws.reserve(g.wires.size());
        for (std::size_t w : g.wires) ws.push_back(map[w]);
        out.gates.push_back(Gate::other(g.name, std::move(ws)));
      }
    }
    return out;
  }
};

/// Depth as the number of slices of parallel gates: each gate commutes
/// leftward into the earliest slice it can reach; it cannot pass a slice
/// sharing one of its wires.
inline std::size_t depth_slices(const Circuit& c) {
  std::vector<std::vector<bool>> slices;  // wire footprint per slice
  for (const Gate& g : c.gates) {
    // last slice whose footprint intersects the gate's wires
    std::size_t barrier = 0;
    bool found = false;
    for (std::size_t s = slices.size(); s-- > 0;) {
      bool hit = false;
      g.for_each_wire([&](std::size_t w) { hit = hit || slices[s][w]; });
      if (hit) {
        barrier = s + 1;
        found = true;
        break;
      }
    }
    if (!found) barrier = 0;
    if (barrier == slices.size()) slices.emplace_back(c.n_wires, false);
    g.for_each_wire([&](std::size_t w) { slices[barrier][w] = true; });
  }
  return slices.size();
}

/// Depth as the longest path through the dependency DAG: gate g depends on
/// the latest earlier gate sharing any wire.
inline std::size_t depth_dag(const Circuit& c) {
  std::vector<std::vector<std::size_t>> preds(c.gates.size());
  std::vector<std::size_t> last_on_wire(c.n_wires, SIZE_MAX);
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    c.gates[i].for_each_wire([&](std::size_t w) {
      if (last_on_wire[w] != SIZE_MAX) preds[i].push_back(last_on_wire[w]);
      last_on_wire[w] = i;
    });
  }
  std::size_t depth = 0;
  std::vector<std::size_t> dist(c.gates.size(), 0);
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    std::size_t d = 0;
    for (std::size_t p : preds[i]) d = std::max(d, dist[p]);
    dist[i] = d + 1;
    depth = std::max(depth, dist[i]);
  }
  return depth;
}

/// Operator of a CNOT-only circuit: start from I and apply
/// row_add(src=control, tgt=target) per gate in circuit order.
inline BitMatrix simulate(const Circuit& c) {
  BitMatrix m = BitMatrix::identity(c.n_wires);
  for (const Gate& g : c.gates) {
    if (!g.is_cnot()) throw nonlinear_gate_error();
    m.row_add(g.control, g.target);
  }
  return m;
}

inline Circuit invert_circuit(const Circuit& c) {
  Circuit out(c.n_wires);
  out.gates.reserve(c.gates.size());
  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
    if (!it->is_cnot()) throw nonlinear_gate_error();
    out.gates.push_back(*it);
  }
  return out;
}

/// Random CNOTs appended until depth_slices reaches exactly target_depth.
/// Depth is tracked incrementally via a per-wire frontier.
inline Circuit random_circuit(std::size_t n, std::size_t target_depth, std::uint64_t seed) {
  assert(n >= 2);
  Circuit c(n);
  Rng rng(seed);
  std::vector<std::size_t> frontier(n, 0);
  std::size_t depth = 0;
  while (depth < target_depth) {
    std::size_t control = rng.below(n);
    std::size_t target = rng.below(n - 1);
    if (target >= control) ++target;
    c.add_cnot(control, target);
    std::size_t slice = std::max(frontier[control], frontier[target]) + 1;
    frontier[control] = frontier[target] = slice;
    depth = std::max(depth, slice);
  }
  return c;
}

/// Operator of a circuit of n^2 uniformly random CNOTs. Empirically a
/// worst-case instance for synthesis depth.
inline BitMatrix random_worst_operator(std::size_t n, std::uint64_t seed) {
  assert(n >= 2);
  Rng rng(seed);
  BitMatrix m = BitMatrix::identity(n);
  for (std::size_t k = 0; k < n * n; ++k) {
    std::size_t control = rng.below(n);
    std::size_t target = rng.below(n - 1);
    if (target >= control) ++target;
    m.row_add(control, target);
  }
  return m;
}

/// Maximal runs of consecutive CNOTs separated by opaque gates.
struct CircuitSegment {
  bool is_chunk;   // true: CNOT run; false: single barrier gate
  Circuit chunk;   // valid when is_chunk
  Gate barrier;    // valid when !is_chunk

  static CircuitSegment make_chunk(Circuit c) {
    CircuitSegment s{true, std::move(c), Gate::cnot_gate(0, 1)};
    return s;
  }
  static CircuitSegment make_barrier(Gate g) {
    CircuitSegment s{false, Circuit(), std::move(g)};
    return s;
  }
};

inline std::vector<CircuitSegment> split_cnot_chunks(const Circuit& c) {
  std::vector<CircuitSegment> out;
  Circuit run(c.n_wires);
  for (const Gate& g : c.gates) {
    if (g.is_cnot()) {
      run.gates.push_back(g);
    } else {
      if (!run.gates.empty()) {
        out.push_back(CircuitSegment::make_chunk(std::move(run)));
        run = Circuit(c.n_wires);
      }
      out.push_back(CircuitSegment::make_barrier(g));
    }
  }
  if (!run.gates.empty()) out.push_back(CircuitSegment::make_chunk(std::move(run)));
  return out;
}

/// Synthesis output: CNOT-only circuit plus a symbolic output-side wire
/// permutation. Defining contract: out_permutation applied to the rows of
/// simulate(circuit) equals the synthesized operator.
struct SynthesisResult {
  Circuit circuit;
  Permutation out_permutation;
  std::string method;
  std::size_t depth = 0;
  std::size_t cnot_count = 0;

  void refresh_stats() {
    depth = depth_slices(circuit);
    cnot_count = circuit.cnot_count();
  }

  BitMatrix realized_operator() const {
    return out_permutation.apply_to_rows(simulate(circuit));
  }

  bool implements(const BitMatrix& target) const {
    return realized_operator() == target;
  }
};

}  // namespace cnot
