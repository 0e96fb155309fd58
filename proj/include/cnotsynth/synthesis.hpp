#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cnotsynth/bitmatrix.hpp"
#include "cnotsynth/circuit.hpp"

namespace cnot {

// Reduction bookkeeping shared by the synthesizers. Row(i,j) denotes
// r_j <- r_i XOR r_j (left factor E_ji, gate CNOT(i, j)); Col(i,j) denotes
// c_j <- c_i XOR c_j (right factor E_ij, gate CNOT(j, i)). Once row and
// column operations have reduced A to a permutation matrix P, the operator
// factors as
//   A = R_1 ... R_q  P  C_m ... C_1        (ops indexed in application order)
// so the circuit reads: column-side gates in application order at the input
// end, then row-side gates reversed at the output end with their wires
// relabeled through P so that the residual permutation can stay symbolic on
// the output side.
struct ReductionRecorder {
  std::vector<std::pair<std::size_t, std::size_t>> row_ops;  // (src,tgt)
  std::vector<std::pair<std::size_t, std::size_t>> col_ops;  // (src,tgt)

  void record_row(std::size_t src, std::size_t tgt) { row_ops.emplace_back(src, tgt); }
  void record_col(std::size_t src, std::size_t tgt) { col_ops.emplace_back(src, tgt); }
};

/// Build the SynthesisResult from a recorder and the final (permutation)
/// matrix the reduction arrived at.
inline SynthesisResult assemble_reduction(const ReductionRecorder& rec,
                                          const BitMatrix& final_matrix,
                                          std::string method) {
  std::size_t n = final_matrix.n_rows();
  SynthesisResult res;
  res.method = std::move(method);
  res.circuit = Circuit(n);
  res.out_permutation = Permutation(n);

  // final[r][c] == 1 means the permutation maps component c to r.
  std::vector<std::size_t> rho(n);  // rho(w) = P^-1(w)
  for (std::size_t r = 0; r < n; ++r) {
    std::size_t c = final_matrix.leading_one(r);
    rho[r] = c;
    res.out_permutation.image[c] = r;
  }

  for (const auto& [src, tgt] : rec.col_ops)
    res.circuit.add_cnot(tgt, src);  // Col(i,j) is E_ij, i.e. CNOT(j -> i)
  for (auto it = rec.row_ops.rbegin(); it != rec.row_ops.rend(); ++it)
    res.circuit.add_cnot(rho[it->first], rho[it->second]);

  res.refresh_stats();
  return res;
}

}  // namespace cnot
