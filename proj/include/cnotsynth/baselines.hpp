#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "cnotsynth/bitmatrix.hpp"
#include "cnotsynth/circuit.hpp"
#include "cnotsynth/synthesis.hpp"

namespace cnot {

struct not_triangular_error : std::runtime_error {
  not_triangular_error() : std::runtime_error("operator is not triangular") {}
};

/// Gaussian elimination synthesis: forward elimination below the diagonal
/// with virtual row pivoting (pivot swaps land in out_permutation, never in
/// gates), then back-substitution above. Gates of one elimination column all
/// share the pivot as control, so they commute; emitting the hits on
/// upcoming pivot rows first lets consecutive columns pipeline in the slice
/// packing instead of serializing.
inline SynthesisResult gaussian_synth(const BitMatrix& a) {
  if (!a.is_square()) throw shape_error("gaussian_synth: square input required");
  std::size_t n = a.n_rows();
  BitMatrix m(a);
  std::vector<std::size_t> pivot_of(n, SIZE_MAX);
  std::vector<std::size_t> pivot_col(n, SIZE_MAX);
  std::vector<bool> used(n, false);
  std::vector<std::vector<std::size_t>> targets(2 * n);

  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = SIZE_MAX;
    for (std::size_t r = 0; r < n; ++r)
      if (!used[r] && m.get(r, c)) { pivot = r; break; }
    if (pivot == SIZE_MAX) throw singular_error();
    used[pivot] = true;
    pivot_of[c] = pivot;
    pivot_col[pivot] = c;
    for (std::size_t r = 0; r < n; ++r)
      if (!used[r] && m.get(r, c)) {
        m.row_add(pivot, r);
        targets[c].push_back(r);
      }
  }
  for (std::size_t c = n; c-- > 0;) {
    std::size_t p = pivot_of[c];
    for (std::size_t r = 0; r < n; ++r)
      if (r != p && m.get(r, c)) {
        m.row_add(p, r);
        targets[n + (n - 1 - c)].push_back(r);
      }
  }

  ReductionRecorder rec;
  for (std::size_t c = 0; c < n; ++c) {
    auto& t = targets[c];
    std::stable_sort(t.begin(), t.end(), [&](std::size_t x, std::size_t y) {
      return pivot_col[x] < pivot_col[y];
    });
    for (std::size_t r : t) rec.record_row(pivot_of[c], r);
  }
  for (std::size_t k = 0; k < n; ++k) {
    auto& t = targets[n + k];
    std::stable_sort(t.begin(), t.end(), [&](std::size_t x, std::size_t y) {
      return pivot_col[x] > pivot_col[y];
    });
    for (std::size_t r : t) rec.record_row(pivot_of[n - 1 - k], r);
  }
  return assemble_reduction(rec, m, "gaussian");
}

enum class Triangle { lower, upper };

namespace detail {

// Brick-wall sweeps over a virtual qubit ordering, reducing a working copy
// of L to the identity. When qubits a < b meet and the working entry (b, a)
// is set, CNOT(a -> b) clears it; the pollution a partially-reduced source
// row introduces is cleared at later meetings. Returns the reduction
// sequence in application order.
inline std::vector<Gate> kutin_sweeps(const BitMatrix& l) {
  std::size_t n = l.n_rows();
  BitMatrix w(l);
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::vector<Gate> gates;
  for (std::size_t round = 1; round <= n; ++round) {
    std::size_t start = (round % 2 == 1) ? 0 : 1;
    while (start + 1 < n) {
      std::size_t a = std::min(perm[start], perm[start + 1]);
      std::size_t b = std::max(perm[start], perm[start + 1]);
      if (w.get(b, a)) {
        w.row_add(a, b);
        gates.push_back(Gate::cnot_gate(a, b));
      }
      std::swap(perm[start], perm[start + 1]);
      start += 2;
    }
  }
  return gates;
}

}  // namespace detail

/// Sorting-network triangular synthesis. Depth at most n; the circuit is the
/// reversed sweep recording. Upper-triangular input runs the lower algorithm
/// on the reversed-index conjugate so control/target roles stay correct.
inline Circuit kutin_triangular(const BitMatrix& l, Triangle orientation) {
  if (!l.is_square()) throw shape_error("kutin_triangular: square input required");
  std::size_t n = l.n_rows();
  for (std::size_t i = 0; i < n; ++i) {
    if (!l.get(i, i)) throw not_triangular_error();
    for (std::size_t j = i + 1; j < n; ++j) {
      bool off = (orientation == Triangle::lower) ? l.get(i, j) : l.get(j, i);
      if (off) throw not_triangular_error();
    }
  }
  Circuit c(n);
  if (orientation == Triangle::lower) {
    std::vector<Gate> gates = detail::kutin_sweeps(l);
    c.gates.assign(gates.rbegin(), gates.rend());
  } else {
    BitMatrix conj(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (l.get(n - 1 - i, n - 1 - j)) conj.set(i, j, true);
    std::vector<Gate> gates = detail::kutin_sweeps(conj);
    for (auto it = gates.rbegin(); it != gates.rend(); ++it)
      c.add_cnot(n - 1 - it->control, n - 1 - it->target);
  }
  return c;
}

/// Full synthesis via A = P*L*U: U's circuit first, then L's; P stays
/// symbolic. Depth at most 2n.
inline SynthesisResult kutin_synth(const BitMatrix& a) {
  if (!a.is_square()) throw shape_error("kutin_synth: square input required");
  LuResult lu = lu_decompose(a, LuStrategy::plain);
  SynthesisResult res;
  res.method = "kutin";
  res.circuit = kutin_triangular(lu.upper, Triangle::upper);
  res.circuit.append(kutin_triangular(lu.lower, Triangle::lower));
  res.out_permutation = lu.perm;
  res.refresh_stats();
  return res;
}

}  // namespace cnot
