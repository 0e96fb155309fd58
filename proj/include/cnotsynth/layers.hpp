#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

#include "cnotsynth/bitmatrix.hpp"

namespace cnot {

/// One elementary reduction step on a working matrix B.
///   RowOp: row b <- row b XOR row a
///   ColOp: col b <- col b XOR col a
///   Flip:  entry (a, b) toggled
struct OpRecord {
  enum class Kind : std::uint8_t { row, col, flip };
  Kind kind;
  std::size_t a, b;

  static OpRecord row_op(std::size_t src, std::size_t tgt) {
    assert(src != tgt);
    return {Kind::row, src, tgt};
  }
  static OpRecord col_op(std::size_t src, std::size_t tgt) {
    assert(src != tgt);
    return {Kind::col, src, tgt};
  }
  static OpRecord flip_op(std::size_t r, std::size_t c) { return {Kind::flip, r, c}; }

  friend bool operator==(const OpRecord& x, const OpRecord& y) {
    return x.kind == y.kind && x.a == y.a && x.b == y.b;
  }
};

/// Ops executable in parallel: RowOp rows pairwise disjoint, ColOp columns
/// pairwise disjoint, each Flip's row disjoint from RowOp rows and other
/// Flips' rows, its column disjoint from ColOp columns and other Flips'
/// columns.
struct Layer {
  std::vector<OpRecord> ops;
};

inline void apply_op(BitMatrix& b, const OpRecord& op) {
  switch (op.kind) {
    case OpRecord::Kind::row:
      b.row_add(op.a, op.b);
      break;
    case OpRecord::Kind::col:
      b.col_add(op.a, op.b);
      break;
    case OpRecord::Kind::flip:
      b.flip(op.a, op.b);
      break;
  }
}

inline void apply_layer(BitMatrix& b, const Layer& layer) {
  for (const OpRecord& op : layer.ops) apply_op(b, op);
}

inline void apply_layers(BitMatrix& b, const std::vector<Layer>& layers) {
  for (const Layer& l : layers) apply_layer(b, l);
}

/// Check the parallelism invariant of one layer.
inline bool layer_is_valid(const Layer& layer, std::size_t n_rows, std::size_t n_cols) {
  std::vector<bool> row_busy(n_rows, false), col_busy(n_cols, false);
  for (const OpRecord& op : layer.ops) {
    switch (op.kind) {
      case OpRecord::Kind::row:
        if (row_busy[op.a] || row_busy[op.b]) return false;
        row_busy[op.a] = row_busy[op.b] = true;
        break;
      case OpRecord::Kind::col:
        if (col_busy[op.a] || col_busy[op.b]) return false;
        col_busy[op.a] = col_busy[op.b] = true;
        break;
      case OpRecord::Kind::flip:
        if (row_busy[op.a] || col_busy[op.b]) return false;
        row_busy[op.a] = true;
        col_busy[op.b] = true;
        break;
    }
  }
  return true;
}

/// Maximum number of ones in any single row or column: the pure-flip depth
/// bound for zeroing b.
inline std::size_t max_line_weight(const BitMatrix& b) {
  std::size_t best = 0;
  for (std::size_t r = 0; r < b.n_rows(); ++r) best = std::max(best, b.row_weight(r));
  for (std::size_t c = 0; c < b.n_cols(); ++c) best = std::max(best, b.col_weight(c));
  return best;
}

}  // namespace cnot
