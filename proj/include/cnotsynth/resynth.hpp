#pragma once

#include <map>
#include <string>
#include <vector>

#include "cnotsynth/ancilla.hpp"
#include "cnotsynth/portfolio.hpp"
#include "cnotsynth/qc_io.hpp"

namespace cnot {

inline std::size_t t_count(const Circuit& c) {
  std::size_t n = 0;
  for (const Gate& g : c.gates)
    if (!g.is_cnot() && (g.name == "T" || g.name == "T*")) ++n;
  return n;
}

/// Depth of the circuit restricted to its T/T* gates alone.
inline std::size_t t_depth(const Circuit& c) {
  Circuit sub(c.n_wires);
  for (const Gate& g : c.gates)
    if (!g.is_cnot() && (g.name == "T" || g.name == "T*")) sub.gates.push_back(g);
  return depth_slices(sub);
}

struct ResynthTotals {
  std::size_t depth = 0, cnots = 0, t_count = 0, t_depth = 0;
};

struct MethodWins {
  std::size_t best = 0;       // returned a minimum-depth replacement
  std::size_t only_best = 0;  // and no other method matched it
};

struct ResynthReport {
  QcFile output;
  Permutation out_perm;  // residual wire relabeling at the end of the circuit
  ResynthTotals before, after;
  std::map<std::string, MethodWins> wins;
  std::size_t chunk_count = 0;
  bool reverted = false;  // safety fallback to the original circuit fired
};

/// Optional per-chunk parity tables (the caller knows them, e.g. from a
/// T-depth optimizer export): chunk index -> (A_in, A_out). Chunks with
/// tables also try the block method; its result replaces the chunk operator
/// outright, on the caller's assertion that only the output parities matter.
using ChunkParities = std::map<std::size_t, std::pair<ParityTable, ParityTable>>;

/// Re-synthesize every maximal CNOT run of the circuit with the portfolio;
/// opaque gates pass through untouched, so T metrics are preserved by
/// construction. Residual permutations of the replacements propagate forward
/// as wire relabelings; the final relabeling is reported, not emitted as
/// gates. T metrics are measured on logical wires (relabelings undone).
inline ResynthReport resynthesize(const QcFile& input,
                                  const std::vector<std::string>& methods,
                                  std::uint64_t seed,
                                  const ChunkParities& parities = {}) {
  std::size_t n = input.circuit.n_wires;
  ResynthReport report;
  report.before = {depth_slices(input.circuit), input.circuit.cnot_count(),
                   t_count(input.circuit), t_depth(input.circuit)};

  Circuit out(n);
  std::vector<std::size_t> rho(n);  // logical wire -> physical wire
  for (std::size_t i = 0; i < n; ++i) rho[i] = i;
  Circuit logical_barriers(n);  // for logical-frame T metrics

  std::size_t chunk_index = 0;
  for (const CircuitSegment& seg : split_cnot_chunks(input.circuit)) {
    if (!seg.is_chunk) {
      logical_barriers.gates.push_back(seg.barrier);
      std::vector<std::size_t> wires;
      for (std::size_t w : seg.barrier.wires) wires.push_back(rho[w]);
      out.gates.push_back(Gate::other(seg.barrier.name, std::move(wires)));
      continue;
    }

    ++report.chunk_count;
    Circuit physical = seg.chunk.relabeled(rho);
    BitMatrix op = simulate(physical);
    std::size_t orig_depth = depth_slices(physical);
    std::size_t orig_cnots = physical.gates.size();

    struct Candidate {
      std::string tag;
      Circuit circuit;
      Permutation perm;
      std::size_t depth, cnots;
    };
    std::vector<Candidate> candidates;
    candidates.push_back(
        {"original", physical, Permutation(n), orig_depth, orig_cnots});
    for (const std::string& tag : methods) {
      std::optional<SynthesisResult> r = run_method(tag, op, seed + chunk_index);
      if (!r) continue;
      if (!r->implements(op))
        throw std::logic_error("method '" + tag + "' failed output verification");
      candidates.push_back({tag, r->circuit, r->out_permutation, r->depth, r->cnot_count});
    }
    auto it = parities.find(chunk_index - 1);
    if (it != parities.end()) {
      AncillaResult blk = ancilla_synth(it->second.first, it->second.second);
      candidates.push_back({"ancilla-block", blk.circuit, Permutation(n),
                            depth_slices(blk.circuit), blk.circuit.gates.size()});
    }

    // a replacement must not worsen either metric
    std::size_t pick = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
      const Candidate& c = candidates[i];
      if (c.depth > orig_depth || c.cnots > orig_cnots) continue;
      if (c.depth < candidates[pick].depth ||
          (c.depth == candidates[pick].depth && c.cnots < candidates[pick].cnots))
        pick = i;
    }
    std::size_t best_depth = candidates[pick].depth;
    std::vector<std::string> winners;
    for (std::size_t i = 1; i < candidates.size(); ++i)
      if (candidates[i].depth == best_depth) winners.push_back(candidates[i].tag);
    for (const std::string& w : winners) {
      ++report.wins[w].best;
      if (winners.size() == 1) ++report.wins[w].only_best;
    }

    out.append(candidates[pick].circuit);
    if (!candidates[pick].perm.is_identity()) {
      Permutation inv = candidates[pick].perm.inverse();
      for (std::size_t o = 0; o < n; ++o) rho[o] = inv(rho[o]);
    }
  }

  // safety net: per-chunk dominance almost always shrinks the total, but
  // slice packing across segment boundaries is not compositional
  if (depth_slices(out) > report.before.depth ||
      out.cnot_count() > report.before.cnots) {
    out = input.circuit;
    for (std::size_t i = 0; i < n; ++i) rho[i] = i;
    logical_barriers = Circuit(n);
    for (const Gate& g : input.circuit.gates)
      if (!g.is_cnot()) logical_barriers.gates.push_back(g);
    report.reverted = true;
  }

  report.output.wire_names = input.wire_names;
  report.output.circuit = out;
  report.out_perm = Permutation(n);
  for (std::size_t o = 0; o < n; ++o) report.out_perm.image[o] = rho[o];
  report.after = {depth_slices(out), out.cnot_count(), t_count(logical_barriers),
                  t_depth(logical_barriers)};
  return report;
}

}  // namespace cnot
