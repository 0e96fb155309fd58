#pragma once

#include <cassert>
#include <functional>
#include <stdexcept>
#include <vector>

#include "cnotsynth/bitmatrix.hpp"
#include "cnotsynth/circuit.hpp"
#include "cnotsynth/dacsynth.hpp"
#include "cnotsynth/greedy.hpp"

namespace cnot {

struct rank_deficient_error : std::runtime_error {
  rank_deficient_error() : std::runtime_error("parity table rank below column count") {}
};

/// p x n Boolean table: row w lists which input-variable parities wire w
/// carries. Valid tables have rank n.
struct ParityTable {
  BitMatrix matrix;

  std::size_t wires() const { return matrix.n_rows(); }
  std::size_t variables() const { return matrix.n_cols(); }
  bool valid() const { return matrix.rank() == matrix.n_cols(); }
};

/// Realize a wire permutation with CNOT swaps: the permutation factors into
/// two involutions, each a layer of disjoint transpositions (3 CNOTs each),
/// so depth is at most 6.
inline Circuit realize_permutation(const Permutation& perm) {
  std::size_t n = perm.size();
  Circuit c(n);
  std::vector<std::pair<std::size_t, std::size_t>> first, second;
  std::vector<bool> seen(n, false);
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::vector<std::size_t> cycle;
    std::size_t w = start;
    while (!seen[w]) {
      seen[w] = true;
      cycle.push_back(w);
      w = perm.image[w];
    }
    std::size_t len = cycle.size();
    if (len < 2) continue;
    // content at cycle position i must move to position i+1; the rotation is
    // s(i)=1-i composed after t(i)=-i (mod len), both involutions
    for (std::size_t i = 0; i < len; ++i) {
      std::size_t j = (len - i) % len;
      if (i < j) first.emplace_back(cycle[i], cycle[j]);
      std::size_t j2 = (len + 1 - i) % len;
      if (i < j2) second.emplace_back(cycle[i], cycle[j2]);
    }
  }
  auto emit_swaps = [&](const std::vector<std::pair<std::size_t, std::size_t>>& swaps) {
    for (auto [a, b] : swaps) c.add_cnot(a, b);
    for (auto [a, b] : swaps) c.add_cnot(b, a);
    for (auto [a, b] : swaps) c.add_cnot(a, b);
  };
  emit_swaps(first);
  emit_swaps(second);
  return c;
}

/// Injective partial map sigma (entries (target row of b, source row of a))
/// with |sigma| <= n - rank(b) such that adding row a[sigma(t)] into row
/// b[t] for every pair makes b invertible. a must be invertible.
inline std::vector<std::pair<std::size_t, std::size_t>> find_partial_permutation(
    const BitMatrix& b, const BitMatrix& a) {
  std::size_t n = b.n_rows();
  assert(a.n_rows() == n && a.n_cols() == b.n_cols() && b.is_square());
  std::vector<std::size_t> basis = greedy_row_basis(b, n);
  if (basis.size() == n) return {};

  // extend the row space of b with rows of a that increase the rank
  std::size_t wpr = (n + 63) / 64;
  std::vector<std::vector<std::uint64_t>> echelon;
  std::vector<std::size_t> lead;
  auto insert_row = [&](const BitMatrix& m, std::size_t r) {
    std::vector<std::uint64_t> row(wpr, 0);
    for (std::size_t c = 0; c < n; ++c)
      if (m.get(r, c)) row[c >> 6] |= std::uint64_t{1} << (c & 63);
    for (std::size_t i = 0; i < echelon.size(); ++i)
      if ((row[lead[i] >> 6] >> (lead[i] & 63)) & 1)
        for (std::size_t k = 0; k < wpr; ++k) row[k] ^= echelon[i][k];
    for (std::size_t k = 0; k < wpr; ++k)
      if (row[k]) {
        std::size_t first = k * 64 + std::countr_zero(row[k]);
        echelon.push_back(row);
        lead.push_back(first);
        return true;
      }
    return false;
  };
  for (std::size_t r : basis) insert_row(b, r);

  std::vector<std::size_t> chosen;
  for (std::size_t r = 0; r < n && echelon.size() < n; ++r)
    if (insert_row(a, r)) chosen.push_back(r);
  assert(echelon.size() == n);

  std::vector<bool> in_basis(n, false);
  for (std::size_t r : basis) in_basis[r] = true;
  std::vector<std::pair<std::size_t, std::size_t>> sigma;
  std::size_t next = 0;
  for (std::size_t t = 0; t < n && next < chosen.size(); ++t)
    if (!in_basis[t]) sigma.emplace_back(t, chosen[next++]);
  assert(next == chosen.size());
  return sigma;
}

struct BlockPrep {
  Circuit prep;        // gates on physical wires
  Permutation sigma;   // row w of the table sits at virtual position sigma(w)
  std::vector<std::size_t> boundaries;  // virtual block offsets, k+1 entries
  BitMatrix table;     // table after applying prep

  std::size_t block_count() const { return boundaries.size() - 1; }
};

/// Make every block of the parity table invertible. The returned permutation
/// moves an invertible row basis to the top (block 1 absorbs the r leftover
/// rows); doubling rounds of depth-1 partial-permutation layers then fix
/// blocks 2..k, sourcing each from a distinct already-fixed block. Prep
/// depth is at most ceil(log2 k).
inline BlockPrep make_blocks_invertible(const ParityTable& a) {
  std::size_t p = a.wires(), n = a.variables();
  std::vector<std::size_t> top = greedy_row_basis(a.matrix, n);
  if (top.size() != n) throw rank_deficient_error();
  std::size_t k = p / n, r = p - k * n;

  BlockPrep out;
  out.sigma = Permutation(p);
  {
    std::vector<bool> selected(p, false);
    for (std::size_t i = 0; i < n; ++i) {
      selected[top[i]] = true;
      out.sigma.image[top[i]] = i;
    }
    std::size_t next = n;
    for (std::size_t w = 0; w < p; ++w)
      if (!selected[w]) out.sigma.image[w] = next++;
  }
  out.boundaries.push_back(0);
  out.boundaries.push_back(n + r);
  for (std::size_t i = 2; i <= k; ++i) out.boundaries.push_back(n + r + (i - 1) * n);

  out.prep = Circuit(p);
  out.table = a.matrix;
  Permutation phys = out.sigma.inverse();  // virtual position -> physical row

  auto block_rows = [&](std::size_t i) {  // physical rows of block i (1-based)
    std::vector<std::size_t> rows;
    for (std::size_t v = out.boundaries[i - 1]; v < out.boundaries[i]; ++v)
      rows.push_back(phys(v));
    return rows;
  };
  // the invertible core of a block: block 1 contributes its top n virtual
  // rows, every other block all n of its rows
  auto block_core = [&](std::size_t i) {
    std::vector<std::size_t> rows;
    std::size_t v0 = (i == 1) ? 0 : out.boundaries[i - 1];
    for (std::size_t v = v0; v < v0 + n; ++v) rows.push_back(phys(v));
    return rows;
  };

  std::size_t fixed = 1;
  while (fixed < k) {
    std::size_t batch = std::min(fixed, k - fixed);
    for (std::size_t j = 0; j < batch; ++j) {
      std::size_t target = fixed + 1 + j;  // 1-based block index
      std::size_t source = 1 + j;          // round-robin over fixed blocks
      std::vector<std::size_t> tgt_rows = block_rows(target);
      std::vector<std::size_t> src_rows = block_core(source);
      BitMatrix tgt = out.table.take_rows(tgt_rows);
      BitMatrix src = out.table.take_rows(src_rows);
      for (auto [t, s] : find_partial_permutation(tgt, src)) {
        out.prep.add_cnot(src_rows[s], tgt_rows[t]);
        out.table.row_add(src_rows[s], tgt_rows[t]);
      }
    }
    fixed += batch;
  }
  return out;
}

using InnerSynth = std::function<SynthesisResult(const BitMatrix&)>;

/// Small deterministic portfolio: the greedy methods win on the simple
/// operators block transitions tend to be, DaCSynth backstops the rest.
inline SynthesisResult default_inner_synth(const BitMatrix& d) {
  SynthesisResult best = dacsynth_greedy(d);
  for (CostKind k : {CostKind::H_sum, CostKind::h_prod, CostKind::H_prod}) {
    GreedyConfig cfg;
    cfg.cost = k;
    cfg.seed = 1;
    GreedyOutcome out = greedy_synth(d, cfg);
    if (out.ok() && (out.result->depth < best.depth ||
                     (out.result->depth == best.depth &&
                      out.result->cnot_count < best.cnot_count)))
      best = std::move(*out.result);
  }
  return best;
}

/// Full synthesis result with the phase structure exposed for verification:
/// gates [0, prep1_end) prepare the input table, [prep1_end, d_end) hold the
/// wire-disjoint block transitions, [d_end, align_end) realign wires between
/// the two preps' frames, and the tail undoes the output prep.
struct AncillaResult {
  Circuit circuit;
  std::size_t prep1_end = 0, d_end = 0, align_end = 0;
  std::size_t prep1_depth = 0, prep2_depth = 0;
  std::vector<std::vector<std::size_t>> d_blocks;  // physical wire sets
};

/// Synthesize a CNOT circuit whose operator B satisfies B * A_in = A_out
/// exactly. Block transitions D_i = H_i K_i^-1 run on wire-disjoint blocks;
/// the inner syntheses' residual permutations and the frame mismatch between
/// the two preps merge into one global swap stage of depth at most 6.
inline AncillaResult ancilla_synth(const ParityTable& a_in, const ParityTable& a_out,
                                   const InnerSynth& inner = default_inner_synth) {
  if (a_in.wires() != a_out.wires() || a_in.variables() != a_out.variables())
    throw shape_error("ancilla_synth: table shapes differ");
  std::size_t p = a_in.wires(), n = a_in.variables();

  BlockPrep prep1 = make_blocks_invertible(a_in);
  BlockPrep prep2 = make_blocks_invertible(a_out);
  Permutation phys1 = prep1.sigma.inverse();
  Permutation phys2 = prep2.sigma.inverse();
  std::size_t k = prep1.block_count();
  std::size_t r = p - k * n;

  AncillaResult out;
  out.circuit = Circuit(p);
  out.circuit.append(prep1.prep);
  out.prep1_end = out.circuit.gates.size();
  out.prep1_depth = depth_slices(prep1.prep);
  out.prep2_depth = depth_slices(prep2.prep);

  // virtual-frame stacks: K[v] = T1[phys1(v)], H[v] = T2[phys2(v)]
  auto virtual_rows = [&](const BitMatrix& t, const Permutation& phys, std::size_t v0,
                          std::size_t count) {
    std::vector<std::size_t> rows;
    for (std::size_t v = v0; v < v0 + count; ++v) rows.push_back(phys(v));
    return t.take_rows(rows);
  };

  // per-virtual-row target of the final alignment: after the block gates,
  // the content of virtual row v0+l is H-stack row v0+pi(l)
  std::vector<std::size_t> content_of(p);

  for (std::size_t i = 1; i <= k; ++i) {
    std::size_t v0 = prep1.boundaries[i - 1];
    std::size_t size = prep1.boundaries[i] - v0;
    BitMatrix ki = virtual_rows(prep1.table, phys1, v0, size);
    BitMatrix hi = virtual_rows(prep2.table, phys2, v0, size);

    BitMatrix di(size, size);
    if (i == 1 && r > 0) {
      // two-by-two block form: top rows map K1's invertible core onto H1's,
      // the G rows decompose K1[n+j] + H1[n+j] in the core basis
      BitMatrix kt = ki.submatrix(0, n, 0, n);
      BitMatrix ht = hi.submatrix(0, n, 0, n);
      BitMatrix top = decompose_in_basis(kt, ht);  // ht * kt^-1
      BitMatrix rest(r, n);
      for (std::size_t j = 0; j < r; ++j)
        for (std::size_t c = 0; c < n; ++c)
          rest.set(j, c, ki.get(n + j, c) ^ hi.get(n + j, c));
      BitMatrix g = decompose_in_basis(kt, rest);
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
          if (top.get(x, y)) di.set(x, y, true);
      for (std::size_t j = 0; j < r; ++j) {
        di.set(n + j, n + j, true);
        for (std::size_t y = 0; y < n; ++y)
          if (g.get(j, y)) di.set(n + j, y, true);
      }
    } else {
      di = decompose_in_basis(ki, hi);  // hi * ki^-1
    }
    assert(di.multiply(ki) == hi);

    SynthesisResult block = inner(di);
    for (std::size_t l = 0; l < size; ++l)
      content_of[v0 + l] = v0 + block.out_permutation(l);

    std::vector<std::size_t> wires;
    for (std::size_t v = v0; v < v0 + size; ++v) wires.push_back(phys1(v));
    out.d_blocks.push_back(wires);
    for (const Gate& g : block.circuit.gates)
      out.circuit.add_cnot(wires[g.control], wires[g.target]);
  }
  out.d_end = out.circuit.gates.size();

  // realign: wire phys1(v) holds H-stack row content_of(v), which belongs at
  // phys2(content_of(v)); the block residuals and the prep frame mismatch
  // collapse into this one permutation
  Permutation q(p);
  for (std::size_t v = 0; v < p; ++v) q.image[phys1(v)] = phys2(content_of[v]);
  if (!q.is_identity()) out.circuit.append(realize_permutation(q));
  out.align_end = out.circuit.gates.size();

  out.circuit.append(invert_circuit(prep2.prep));
  return out;
}

}  // namespace cnot
