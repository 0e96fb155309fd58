#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cnotsynth/rng.hpp"

namespace cnot {

struct singular_error : std::runtime_error {
  singular_error() : std::runtime_error("matrix not invertible") {}
};

struct shape_error : std::runtime_error {
  explicit shape_error(const std::string& what) : std::runtime_error(what) {}
};

struct parse_error : std::runtime_error {
  parse_error(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line_number(line) {}
  std::size_t line_number;
};

/// Dense Boolean matrix over GF(2), rows packed 64 entries per word.
/// Storage past n_cols in the last word of each row is kept zero.
class BitMatrix {
 public:
  BitMatrix() : rows_(0), cols_(0), wpr_(0) {}

  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), words_(rows * wpr_, 0) {
    assert(rows >= 1 && cols >= 1);
  }

  static BitMatrix identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
  }

  // Convenience for tests: rows as strings of 0/1, e.g. {"10","11"}.
  static BitMatrix from_rows(const std::vector<std::string>& rows) {
    BitMatrix m(rows.size(), rows.at(0).size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      assert(rows[i].size() == m.cols_);
      for (std::size_t j = 0; j < m.cols_; ++j)
        if (rows[i][j] == '1') m.set(i, j, true);
    }
    return m;
  }

  std::size_t n_rows() const { return rows_; }
  std::size_t n_cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  bool get(std::size_t r, std::size_t c) const {
    assert(r < rows_ && c < cols_);
    return (words_[r * wpr_ + (c >> 6)] >> (c & 63)) & 1u;
  }

  void set(std::size_t r, std::size_t c, bool v) {
    assert(r < rows_ && c < cols_);
    std::uint64_t& w = words_[r * wpr_ + (c >> 6)];
    std::uint64_t bit = 1ULL << (c & 63);
    if (v)
      w |= bit;
    else
      w &= ~bit;
  }

  void flip(std::size_t r, std::size_t c) {
    assert(r < rows_ && c < cols_);
    words_[r * wpr_ + (c >> 6)] ^= 1ULL << (c & 63);
  }

  /// row tgt <- row tgt XOR row src. Wire-level this is CNOT(src -> tgt).
  void row_add(std::size_t src, std::size_t tgt) {
    assert(src != tgt && src < rows_ && tgt < rows_);
    const std::uint64_t* s = &words_[src * wpr_];
    std::uint64_t* t = &words_[tgt * wpr_];
    for (std::size_t k = 0; k < wpr_; ++k) t[k] ^= s[k];
  }

  /// col tgt <- col tgt XOR col src.
  void col_add(std::size_t src, std::size_t tgt) {
    assert(src != tgt && src < cols_ && tgt < cols_);
    for (std::size_t r = 0; r < rows_; ++r)
      if (get(r, src)) flip(r, tgt);
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t k = 0; k < wpr_; ++k)
      std::swap(words_[a * wpr_ + k], words_[b * wpr_ + k]);
  }

  std::size_t row_weight(std::size_t r) const {
    std::size_t w = 0;
    for (std::size_t k = 0; k < wpr_; ++k)
      w += std::popcount(words_[r * wpr_ + k]);
    return w;
  }

  std::size_t col_weight(std::size_t c) const {
    std::size_t w = 0;
    for (std::size_t r = 0; r < rows_; ++r) w += get(r, c);
    return w;
  }

  std::size_t count_ones() const {
    std::size_t w = 0;
    for (std::uint64_t x : words_) w += std::popcount(x);
    return w;
  }

  bool is_zero() const {
    for (std::uint64_t x : words_) if (x) return false;
    return true;
  }

  bool row_is_zero(std::size_t r) const {
    for (std::size_t k = 0; k < wpr_; ++k)
      if (words_[r * wpr_ + k]) return false;
    return true;
  }

  template <typename Fn>
  void for_each_set_in_row(std::size_t r, Fn&& fn) const {
    for (std::size_t k = 0; k < wpr_; ++k) {
      std::uint64_t w = words_[r * wpr_ + k];
      while (w) {
        fn(k * 64 + std::countr_zero(w));
        w &= w - 1;
      }
    }
  }

  std::size_t rows_xor_weight(std::size_t a, std::size_t b) const {
    std::size_t w = 0;
    const std::uint64_t* pa = &words_[a * wpr_];
    const std::uint64_t* pb = &words_[b * wpr_];
    for (std::size_t k = 0; k < wpr_; ++k) w += std::popcount(pa[k] ^ pb[k]);
    return w;
  }

  bool is_identity() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (row_weight(i) != 1 || !get(i, i)) return false;
    }
    return true;
  }

  /// Exactly one 1 per row and per column.
  bool is_permutation() const {
    if (rows_ != cols_) return false;
    std::vector<bool> seen(cols_, false);
    for (std::size_t i = 0; i < rows_; ++i) {
      if (row_weight(i) != 1) return false;
      std::size_t c = leading_one(i);
      if (seen[c]) return false;
      seen[c] = true;
    }
    return true;
  }

  /// Column index of the first set bit in row r; rows_ == cols_ sentinel if none.
  std::size_t leading_one(std::size_t r) const {
    for (std::size_t k = 0; k < wpr_; ++k) {
      std::uint64_t w = words_[r * wpr_ + k];
      if (w) return k * 64 + std::countr_zero(w);
    }
    return cols_;
  }

  BitMatrix transpose() const {
    BitMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t k = 0; k < wpr_; ++k) {
        std::uint64_t w = words_[r * wpr_ + k];
        while (w) {
          std::size_t c = k * 64 + std::countr_zero(w);
          t.set(c, r, true);
          w &= w - 1;
        }
      }
    return t;
  }

  /// GF(2) product this * other.
  BitMatrix multiply(const BitMatrix& other) const {
    if (cols_ != other.rows_) throw shape_error("multiply: dimension mismatch");
    BitMatrix out(rows_, other.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
      std::uint64_t* dst = &out.words_[r * out.wpr_];
      for (std::size_t k = 0; k < wpr_; ++k) {
        std::uint64_t w = words_[r * wpr_ + k];
        while (w) {
          std::size_t j = k * 64 + std::countr_zero(w);
          const std::uint64_t* src = &other.words_[j * other.wpr_];
          for (std::size_t q = 0; q < other.wpr_; ++q) dst[q] ^= src[q];
          w &= w - 1;
        }
      }
    }
    return out;
  }

  std::size_t rank() const {
    BitMatrix w(*this);
    std::size_t rk = 0;
    for (std::size_t c = 0; c < cols_ && rk < rows_; ++c) {
      std::size_t pivot = rows_;
      for (std::size_t r = rk; r < rows_; ++r)
        if (w.get(r, c)) { pivot = r; break; }
      if (pivot == rows_) continue;
      w.swap_rows(rk, pivot);
      for (std::size_t r = rk + 1; r < rows_; ++r)
        if (w.get(r, c)) w.row_add(rk, r);
      ++rk;
    }
    return rk;
  }

  /// Gauss-Jordan inverse. Throws singular_error.
  BitMatrix invert() const {
    if (!is_square()) throw shape_error("invert: matrix not square");
    BitMatrix w(*this);
    BitMatrix inv = identity(rows_);
    for (std::size_t c = 0; c < cols_; ++c) {
      std::size_t pivot = rows_;
      for (std::size_t r = c; r < rows_; ++r)
        if (w.get(r, c)) { pivot = r; break; }
      if (pivot == rows_) throw singular_error();
      w.swap_rows(c, pivot);
      inv.swap_rows(c, pivot);
      for (std::size_t r = 0; r < rows_; ++r)
        if (r != c && w.get(r, c)) {
          w.row_add(c, r);
          inv.row_add(c, r);
        }
    }
    return inv;
  }

  BitMatrix submatrix(std::size_t row0, std::size_t rows, std::size_t col0,
                      std::size_t cols) const {
    assert(row0 + rows <= rows_ && col0 + cols <= cols_);
    BitMatrix out(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c)
        if (get(row0 + r, col0 + c)) out.set(r, c, true);
    return out;
  }

  BitMatrix take_rows(const std::vector<std::size_t>& rows) const {
    BitMatrix out(rows.size(), cols_);
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t k = 0; k < wpr_; ++k)
        out.words_[r * wpr_ + k] = words_[rows[r] * wpr_ + k];
    return out;
  }

  friend bool operator==(const BitMatrix& a, const BitMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.words_ == b.words_;
  }
  friend bool operator!=(const BitMatrix& a, const BitMatrix& b) {
    return !(a == b);
  }

 private:
  std::size_t rows_, cols_, wpr_;
  std::vector<std::uint64_t> words_;
};

/// Bijection on {0..n-1}; image[i] is where index i is sent.
struct Permutation {
  std::vector<std::size_t> image;

  Permutation() = default;
  explicit Permutation(std::size_t n) : image(n) {
    std::iota(image.begin(), image.end(), std::size_t{0});
  }

  std::size_t size() const { return image.size(); }
  std::size_t operator()(std::size_t i) const { return image[i]; }

  bool is_identity() const {
    for (std::size_t i = 0; i < image.size(); ++i)
      if (image[i] != i) return false;
    return true;
  }

  Permutation inverse() const {
    Permutation p(image.size());
    for (std::size_t i = 0; i < image.size(); ++i) p.image[image[i]] = i;
    return p;
  }

  /// this after other: result(i) = this(other(i)).
  Permutation compose(const Permutation& other) const {
    assert(image.size() == other.image.size());
    Permutation p(image.size());
    for (std::size_t i = 0; i < image.size(); ++i)
      p.image[i] = image[other.image[i]];
    return p;
  }

  BitMatrix as_matrix() const {
    BitMatrix m(image.size(), image.size());
    for (std::size_t i = 0; i < image.size(); ++i) m.set(image[i], i, true);
    return m;
  }

  /// P * M: row i of M lands at row image[i] of the result.
  BitMatrix apply_to_rows(const BitMatrix& m) const {
    assert(m.n_rows() == image.size());
    BitMatrix out(m.n_rows(), m.n_cols());
    for (std::size_t r = 0; r < m.n_rows(); ++r)
      for (std::size_t c = 0; c < m.n_cols(); ++c)
        if (m.get(r, c)) out.set(image[r], c, true);
    return out;
  }

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.image == b.image;
  }
};

/// Greedy basis selection: scan rows in order, keep those that increase the
/// GF(2) rank, stop once `wanted` rows are collected. Returns kept indices.
inline std::vector<std::size_t> greedy_row_basis(const BitMatrix& m,
                                                 std::size_t wanted) {
  std::vector<std::size_t> kept;
  std::vector<std::vector<std::uint64_t>> echelon;  // reduced rows
  std::vector<std::size_t> lead;
  std::size_t wpr = (m.n_cols() + 63) / 64;
  for (std::size_t r = 0; r < m.n_rows() && kept.size() < wanted; ++r) {
    std::vector<std::uint64_t> row(wpr, 0);
    for (std::size_t c = 0; c < m.n_cols(); ++c)
      if (m.get(r, c)) row[c >> 6] |= 1ULL << (c & 63);
    for (std::size_t i = 0; i < echelon.size(); ++i) {
      if ((row[lead[i] >> 6] >> (lead[i] & 63)) & 1)
        for (std::size_t k = 0; k < wpr; ++k) row[k] ^= echelon[i][k];
    }
    std::size_t first = m.n_cols();
    for (std::size_t k = 0; k < wpr && first == m.n_cols(); ++k)
      if (row[k]) first = k * 64 + std::countr_zero(row[k]);
    if (first == m.n_cols()) continue;  // dependent
    echelon.push_back(row);
    lead.push_back(first);
    kept.push_back(r);
  }
  return kept;
}

/// Permutation moving the rows of a greedily selected invertible top-left
/// ceil(n/2) block to the top (relative order preserved; remaining rows
/// below, order preserved).
inline Permutation select_invertible_top_block(const BitMatrix& a) {
  if (!a.is_square()) throw shape_error("select_invertible_top_block: square input required");
  std::size_t n = a.n_rows();
  std::size_t h = (n + 1) / 2;
  BitMatrix left = a.submatrix(0, n, 0, h);
  std::vector<std::size_t> top = greedy_row_basis(left, h);
  if (top.size() != h) throw singular_error();
  Permutation p(n);
  std::vector<bool> selected(n, false);
  for (std::size_t i = 0; i < top.size(); ++i) {
    selected[top[i]] = true;
    p.image[top[i]] = i;
  }
  std::size_t next = h;
  for (std::size_t r = 0; r < n; ++r)
    if (!selected[r]) p.image[r] = next++;
  return p;
}

/// W with W * basis = V  (i.e. V * basis^-1).
inline BitMatrix decompose_in_basis(const BitMatrix& basis, const BitMatrix& v) {
  if (!basis.is_square()) throw shape_error("decompose_in_basis: basis not square");
  if (v.n_cols() != basis.n_rows())
    throw shape_error("decompose_in_basis: dimension mismatch");
  return v.multiply(basis.invert());
}

enum class LuStrategy { plain, sparse };

struct LuResult {
  Permutation perm;  // A = P * L * U
  BitMatrix lower;
  BitMatrix upper;
};

/// PLU over GF(2): A = P*L*U with L unit lower triangular and U upper
/// triangular (unit diagonal, since A is invertible). `sparse` picks at each
/// step the pivot minimizing the weight of the produced U row plus L column,
/// ties to the lowest index.
inline LuResult lu_decompose(const BitMatrix& a, LuStrategy strategy) {
  if (!a.is_square()) throw shape_error("lu_decompose: square input required");
  std::size_t n = a.n_rows();
  BitMatrix w(a);
  BitMatrix lower = BitMatrix::identity(n);
  // order[i] = original row of A currently at working position i
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = n;
    if (strategy == LuStrategy::plain) {
      for (std::size_t r = c; r < n; ++r)
        if (w.get(r, c)) { pivot = r; break; }
    } else {
      std::size_t candidates = 0;
      for (std::size_t r = c; r < n; ++r)
        if (w.get(r, c)) ++candidates;
      std::size_t best_score = SIZE_MAX;
      for (std::size_t r = c; r < n; ++r) {
        if (!w.get(r, c)) continue;
        std::size_t urow = 0;
        for (std::size_t j = c; j < n; ++j) urow += w.get(r, j);
        std::size_t score = urow + (candidates - 1);
        if (score < best_score) { best_score = score; pivot = r; }
      }
    }
    if (pivot == n) throw singular_error();
    if (pivot != c) {
      w.swap_rows(c, pivot);
      std::swap(order[c], order[pivot]);
      // swap the already-built part of L (columns < c)
      for (std::size_t j = 0; j < c; ++j) {
        bool t = lower.get(c, j);
        lower.set(c, j, lower.get(pivot, j));
        lower.set(pivot, j, t);
      }
    }
    for (std::size_t r = c + 1; r < n; ++r)
      if (w.get(r, c)) {
        w.row_add(c, r);
        lower.set(r, c, true);
      }
  }
  LuResult out{Permutation(n), std::move(lower), std::move(w)};
  // P restores original row order: row i of L*U corresponds to original
  // row order[i], so P sends position i to order[i].
  for (std::size_t i = 0; i < n; ++i) out.perm.image[i] = order[i];
  return out;
}

/// Uniformly random invertible matrix by rejection sampling.
inline BitMatrix random_invertible(std::size_t n, Rng& rng) {
  for (;;) {
    BitMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        if (rng.coin()) m.set(r, c, true);
    if (m.rank() == n) return m;
  }
}

// --- matrix text format ---------------------------------------------------
// line 1: "<n_rows> <n_cols>"; then one line of 0/1 characters per row.

inline BitMatrix read_matrix(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw parse_error("empty matrix file", 1);
  ++lineno;
  std::size_t rows = 0, cols = 0;
  {
    std::size_t pos = 0;
    try {
      rows = std::stoul(line, &pos);
      cols = std::stoul(line.substr(pos));
    } catch (const std::exception&) {
      throw parse_error("expected '<n_rows> <n_cols>'", lineno);
    }
    if (rows < 1 || cols < 1) throw parse_error("matrix dimensions must be >= 1", lineno);
  }
  BitMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!std::getline(in, line)) throw parse_error("unexpected end of file", lineno + 1);
    ++lineno;
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
      line.pop_back();
    if (line.size() != cols)
      throw parse_error("expected " + std::to_string(cols) + " characters, got " +
                            std::to_string(line.size()),
                        lineno);
    for (std::size_t c = 0; c < cols; ++c) {
      if (line[c] == '1')
        m.set(r, c, true);
      else if (line[c] != '0')
        throw parse_error(std::string("invalid character '") + line[c] + "'", lineno);
    }
  }
  return m;
}

inline void write_matrix(std::ostream& out, const BitMatrix& m) {
  out << m.n_rows() << ' ' << m.n_cols() << '\n';
  for (std::size_t r = 0; r < m.n_rows(); ++r) {
    for (std::size_t c = 0; c < m.n_cols(); ++c) out << (m.get(r, c) ? '1' : '0');
    out << '\n';
  }
}

}  // namespace cnot
