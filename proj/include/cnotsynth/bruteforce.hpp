#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <istream>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cnotsynth/bitmatrix.hpp"
#include "cnotsynth/layers.hpp"

namespace cnot {

struct unsupported_k_error : std::runtime_error {
  explicit unsupported_k_error(const std::string& what) : std::runtime_error(what) {}
};

struct missing_table_error : std::runtime_error {
  explicit missing_table_error(std::size_t k)
      : std::runtime_error("no precomputed table for k=" + std::to_string(k)) {}
};

/// Canonical encoding of a small Boolean matrix class under independent row
/// and column permutations.
struct CanonicalKey {
  std::uint32_t rows = 0, cols = 0;
  std::uint64_t bits = 0;  // row-major, entry (0,0) most significant

  friend bool operator==(const CanonicalKey& a, const CanonicalKey& b) {
    return a.rows == b.rows && a.cols == b.cols && a.bits == b.bits;
  }
};

namespace detail {

// bit position of entry (i, j) in the encoding: (0,0) most significant so
// integer order matches row-major lexicographic order
inline std::uint64_t cell_bit(std::size_t r, std::size_t c, std::size_t i, std::size_t j) {
  (void)r;
  return std::uint64_t{1} << (r * c - 1 - (i * c + j));
}

inline std::uint64_t encode(const BitMatrix& m) {
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < m.n_rows(); ++i)
    for (std::size_t j = 0; j < m.n_cols(); ++j)
      if (m.get(i, j)) bits |= cell_bit(m.n_rows(), m.n_cols(), i, j);
  return bits;
}

inline BitMatrix decode(std::uint64_t bits, std::size_t r, std::size_t c) {
  BitMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (bits & cell_bit(r, c, i, j)) m.set(i, j, true);
  return m;
}

// permuted[i][j] = bits[sigma[i]][tau[j]]
inline std::uint64_t permute_bits(std::uint64_t bits, std::size_t r, std::size_t c,
                                  const std::vector<std::size_t>& sigma,
                                  const std::vector<std::size_t>& tau) {
  std::uint64_t out = 0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (bits & cell_bit(r, c, sigma[i], tau[j])) out |= cell_bit(r, c, i, j);
  return out;
}

inline std::vector<std::vector<std::size_t>> all_permutations(std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  std::vector<std::vector<std::size_t>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// Permutations found by reordering equal-weight groups only; the weight
// profile is sorted, so the candidate set is a complete class invariant.
inline std::vector<std::vector<std::size_t>> weight_sorted_permutations(
    const std::vector<std::size_t>& weights) {
  std::size_t n = weights.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return weights[a] < weights[b]; });
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::pair<std::size_t, std::size_t>> groups;  // [begin, end)
  std::size_t g0 = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i == n || weights[order[i]] != weights[order[g0]]) {
      groups.emplace_back(g0, i);
      g0 = i;
    }
  }
  std::vector<std::size_t> cur(order);
  auto rec = [&](auto&& self, std::size_t gi) -> void {
    if (gi == groups.size()) {
      out.push_back(cur);
      return;
    }
    auto [b, e] = groups[gi];
    std::sort(cur.begin() + b, cur.begin() + e);
    std::vector<std::size_t> base(cur.begin() + b, cur.begin() + e);
    do {
      std::copy(base.begin(), base.end(), cur.begin() + b);
      self(self, gi + 1);
    } while (std::next_permutation(base.begin(), base.end()));
    return;
  };
  rec(rec, 0);
  return out;
}

struct CanonResult {
  std::uint64_t bits;
  std::vector<std::size_t> sigma, tau;  // canon[i][j] = M[sigma[i]][tau[j]]
};

inline CanonResult canonicalize(const BitMatrix& m) {
  std::size_t r = m.n_rows(), c = m.n_cols();
  std::uint64_t bits = encode(m);
  std::vector<std::vector<std::size_t>> sigmas, taus;
  if (r <= 4 && c <= 4) {
    sigmas = all_permutations(r);
    taus = all_permutations(c);
  } else {
    std::vector<std::size_t> rw(r), cw(c);
    for (std::size_t i = 0; i < r; ++i) rw[i] = m.row_weight(i);
    for (std::size_t j = 0; j < c; ++j) cw[j] = m.col_weight(j);
    sigmas = weight_sorted_permutations(rw);
    taus = weight_sorted_permutations(cw);
  }
  CanonResult best;
  best.bits = ~std::uint64_t{0};
  for (const auto& s : sigmas)
    for (const auto& t : taus) {
      std::uint64_t v = permute_bits(bits, r, c, s, t);
      if (v < best.bits) {
        best.bits = v;
        best.sigma = s;
        best.tau = t;
      }
    }
  return best;
}

// All layers of parallel row/column operations on an r x c matrix: every
// pair of (vertex-disjoint row-op set, vertex-disjoint col-op set), at least
// one op total. Flips are not search moves.
inline std::vector<std::vector<OpRecord>> enumerate_layers(std::size_t r, std::size_t c) {
  // vertex-disjoint op sets over n indices: the lowest available index is
  // either unused or paired with a later index in either direction
  auto op_sets = [](std::size_t n, bool row_kind) {
    std::vector<std::vector<OpRecord>> sets;
    std::vector<OpRecord> cur;
    auto rec = [&](auto&& self, std::uint32_t avail) -> void {
      if (std::popcount(avail) < 2) {
        sets.push_back(cur);
        return;
      }
      std::size_t i = std::countr_zero(avail);
      std::uint32_t rest = avail & ~(1u << i);
      self(self, rest);  // i not used by any op
      for (std::uint32_t jbit = rest; jbit; jbit &= jbit - 1) {
        std::size_t j = std::countr_zero(jbit);
        std::uint32_t nxt = rest & ~(1u << j);
        cur.push_back(row_kind ? OpRecord::row_op(i, j) : OpRecord::col_op(i, j));
        self(self, nxt);
        cur.pop_back();
        cur.push_back(row_kind ? OpRecord::row_op(j, i) : OpRecord::col_op(j, i));
        self(self, nxt);
        cur.pop_back();
      }
    };
    rec(rec, (1u << n) - 1);
    return sets;
  };

  std::vector<std::vector<OpRecord>> row_sets = op_sets(r, true);
  std::vector<std::vector<OpRecord>> col_sets = op_sets(c, false);
  std::vector<std::vector<OpRecord>> layers;
  for (const auto& rs : row_sets)
    for (const auto& cs : col_sets) {
      if (rs.empty() && cs.empty()) continue;
      std::vector<OpRecord> layer = rs;
      layer.insert(layer.end(), cs.begin(), cs.end());
      layers.push_back(std::move(layer));
    }
  return layers;
}

// apply a row/col-op layer to an encoded matrix
inline std::uint64_t apply_layer_bits(std::uint64_t bits, std::size_t r, std::size_t c,
                                      const std::vector<OpRecord>& layer) {
  for (const OpRecord& op : layer) {
    if (op.kind == OpRecord::Kind::row) {
      // row b ^= row a; row i occupies bits [(r-1-i)*c, ...) from LSB side
      std::uint64_t row_mask = ((std::uint64_t{1} << c) - 1) << ((r - 1 - op.a) * c);
      std::uint64_t src = bits & row_mask;
      long long shift = (static_cast<long long>(op.a) - static_cast<long long>(op.b)) *
                        static_cast<long long>(c);
      bits ^= (shift >= 0) ? (src << shift) : (src >> -shift);
    } else {
      // col b ^= col a; col j contributes bit (c-1-j) within each row field
      std::uint64_t col_mask = 0;
      for (std::size_t i = 0; i < r; ++i)
        col_mask |= std::uint64_t{1} << (i * c + (c - 1 - op.a));
      std::uint64_t src = bits & col_mask;
      long long shift = static_cast<long long>(op.a) - static_cast<long long>(op.b);
      bits ^= (shift >= 0) ? (src << shift) : (src >> -shift);
    }
  }
  return bits;
}

inline void enumerate_partial_permutations(std::size_t r, std::size_t c,
                                           std::vector<std::uint64_t>& out) {
  auto rec = [&](auto&& self, std::size_t i, std::uint32_t used_cols,
                 std::uint64_t bits) -> void {
    if (i == r) {
      out.push_back(bits);
      return;
    }
    self(self, i + 1, used_cols, bits);  // row i all zero
    for (std::size_t j = 0; j < c; ++j)
      if (!(used_cols & (1u << j)))
        self(self, i + 1, used_cols | (1u << j), bits | cell_bit(r, c, i, j));
  };
  rec(rec, 0, 0, 0);
}

}  // namespace detail

inline CanonicalKey canonical_form(const BitMatrix& m) {
  if (m.n_rows() > 6 || m.n_cols() > 6)
    throw unsupported_k_error("canonical_form supports sizes up to 6");
  detail::CanonResult r = detail::canonicalize(m);
  return CanonicalKey{static_cast<std::uint32_t>(m.n_rows()),
                      static_cast<std::uint32_t>(m.n_cols()), r.bits};
}

/// Optimal reduction data for one canonical class: minimal layer count and a
/// witness reducing the class representative to a partial permutation.
struct TileEntry {
  std::uint8_t depth = 0;
  std::vector<Layer> witness;
};

struct TileTable {
  std::size_t rows = 0, cols = 0;
  std::unordered_map<std::uint64_t, TileEntry> entries;  // canonical bits
};

/// Per-shape optimal tables for tile sizes up to k; consumed by the tiled
/// zeroing strategy.
struct BlockTables {
  std::size_t k = 0;
  std::vector<TileTable> shapes;  // index (r-1)*k + (c-1), 1 <= r,c <= k

  const TileTable& shape(std::size_t r, std::size_t c) const {
    return shapes.at((r - 1) * k + (c - 1));
  }
  TileTable& shape(std::size_t r, std::size_t c) { return shapes.at((r - 1) * k + (c - 1)); }

  /// Largest witness depth over the square k x k classes (the D of the
  /// tiled depth bound; p is always 1).
  std::size_t max_depth() const {
    std::size_t d = 0;
    for (const auto& [bits, e] : shape(k, k).entries) d = std::max<std::size_t>(d, e.depth);
    return d;
  }
};

namespace detail {

// Exhaustive BFS over all r x c matrices: distance to the nearest partial
// permutation in parallel row/column layers, with backpointers for
// witnesses.
struct ShapeBfs {
  std::size_t r, c;
  std::vector<std::int8_t> dist;
  std::vector<std::uint32_t> parent_state;
  std::vector<std::uint16_t> parent_layer;
  std::vector<std::vector<OpRecord>> layers;

  ShapeBfs(std::size_t r_, std::size_t c_) : r(r_), c(c_) {
    std::size_t nstates = std::size_t{1} << (r * c);
    dist.assign(nstates, -1);
    parent_state.assign(nstates, 0);
    parent_layer.assign(nstates, 0);
    layers = enumerate_layers(r, c);

    std::vector<std::uint64_t> sources;
    enumerate_partial_permutations(r, c, sources);
    std::deque<std::uint32_t> queue;
    for (std::uint64_t s : sources) {
      dist[s] = 0;
      queue.push_back(static_cast<std::uint32_t>(s));
    }
    while (!queue.empty()) {
      std::uint32_t cur = queue.front();
      queue.pop_front();
      for (std::size_t li = 0; li < layers.size(); ++li) {
        std::uint32_t nxt =
            static_cast<std::uint32_t>(apply_layer_bits(cur, r, c, layers[li]));
        if (dist[nxt] == -1) {
          dist[nxt] = static_cast<std::int8_t>(dist[cur] + 1);
          parent_state[nxt] = cur;
          parent_layer[nxt] = static_cast<std::uint16_t>(li);
          queue.push_back(nxt);
        }
      }
    }
  }

  // layers reducing `state` to a partial permutation (layers are
  // involutions, so the BFS backpointers replay forward)
  std::vector<Layer> witness(std::uint32_t state) const {
    std::vector<Layer> out;
    while (dist[state] > 0) {
      Layer l;
      l.ops = layers[parent_layer[state]];
      out.push_back(std::move(l));
      state = parent_state[state];
    }
    return out;
  }
};

}  // namespace detail

struct BfsResult {
  std::map<std::size_t, std::size_t> class_counts;  // depth -> #classes (k x k)
  BlockTables tables;
};

/// Exhaustive class census for square size k plus reduction tables for all
/// shapes up to k x k. k <= 4.
inline BfsResult bfs_depth_classes(std::size_t k) {
  if (k < 1 || k > 4)
    throw unsupported_k_error("exhaustive tables support k <= 4; use class_counts_large for k=5,6");
  BfsResult out;
  out.tables.k = k;
  out.tables.shapes.resize(k * k);
  for (std::size_t r = 1; r <= k; ++r)
    for (std::size_t c = 1; c <= k; ++c) {
      detail::ShapeBfs bfs(r, c);
      TileTable& table = out.tables.shape(r, c);
      table.rows = r;
      table.cols = c;
      std::size_t nstates = std::size_t{1} << (r * c);
      for (std::size_t s = 0; s < nstates; ++s) {
        detail::CanonResult canon = detail::canonicalize(detail::decode(s, r, c));
        if (canon.bits != s) continue;  // not the class representative
        TileEntry e;
        e.depth = static_cast<std::uint8_t>(bfs.dist[s]);
        e.witness = bfs.witness(static_cast<std::uint32_t>(s));
        table.entries.emplace(s, std::move(e));
        if (r == k && c == k) ++out.class_counts[e.depth];
      }
    }
  return out;
}

/// Class census for k = 5 or 6 by BFS over canonical representatives only
/// (no witness tables). k = 6 can take a very long time; max_depth caps the
/// exploration for partial runs.
inline std::map<std::size_t, std::size_t> class_counts_large(
    std::size_t k, std::size_t max_depth = SIZE_MAX) {
  if (k < 5 || k > 6) throw unsupported_k_error("class_counts_large supports k = 5 or 6");
  auto layers = detail::enumerate_layers(k, k);
  auto canon_bits = [&](std::uint64_t bits) {
    return detail::canonicalize(detail::decode(bits, k, k)).bits;
  };
  std::unordered_set<std::uint64_t> seen;
  std::vector<std::uint64_t> frontier;
  {
    std::vector<std::uint64_t> pp;
    detail::enumerate_partial_permutations(k, k, pp);
    for (std::uint64_t s : pp) {
      std::uint64_t cb = canon_bits(s);
      if (seen.insert(cb).second) frontier.push_back(cb);
    }
  }
  std::map<std::size_t, std::size_t> counts;
  counts[0] = frontier.size();
  std::size_t depth = 0;
  while (!frontier.empty() && depth < max_depth) {
    ++depth;
    std::vector<std::uint64_t> next;
    for (std::uint64_t rep : frontier) {
      for (const auto& layer : layers) {
        std::uint64_t moved = detail::apply_layer_bits(rep, k, k, layer);
        std::uint64_t cb = canon_bits(moved);
        if (seen.insert(cb).second) next.push_back(cb);
      }
    }
    if (!next.empty()) counts[depth] = next.size();
    frontier = std::move(next);
  }
  return counts;
}

/// Burnside count of r x c Boolean matrices up to row x column permutations
/// (independent census oracle for the BFS totals).
inline std::size_t count_classes_burnside(std::size_t r, std::size_t c) {
  auto sigmas = detail::all_permutations(r);
  auto taus = detail::all_permutations(c);
  auto cycle_lengths = [](const std::vector<std::size_t>& p) {
    std::vector<std::size_t> lens;
    std::vector<bool> seen(p.size(), false);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (seen[i]) continue;
      std::size_t len = 0, j = i;
      while (!seen[j]) {
        seen[j] = true;
        j = p[j];
        ++len;
      }
      lens.push_back(len);
    }
    return lens;
  };
  long double total = 0;
  for (const auto& s : sigmas) {
    auto ls = cycle_lengths(s);
    for (const auto& t : taus) {
      auto lt = cycle_lengths(t);
      std::size_t orbits = 0;
      for (std::size_t a : ls)
        for (std::size_t b : lt) orbits += std::gcd(a, b);
      total += std::pow(2.0L, static_cast<long double>(orbits));
    }
  }
  total /= static_cast<long double>(sigmas.size()) * static_cast<long double>(taus.size());
  return static_cast<std::size_t>(total + 0.5L);
}

// --- table serialization (versioned binary) --------------------------------

namespace detail {

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw parse_error("truncated table file", 0);
  return v;
}

}  // namespace detail

inline void save_block_tables(std::ostream& out, const BlockTables& t) {
  out.write("CNTB", 4);
  detail::put<std::uint32_t>(out, 1);  // version
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(t.k));
  for (std::size_t r = 1; r <= t.k; ++r)
    for (std::size_t c = 1; c <= t.k; ++c) {
      const TileTable& table = t.shape(r, c);
      detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(table.entries.size()));
      for (const auto& [bits, e] : table.entries) {
        detail::put<std::uint64_t>(out, bits);
        detail::put<std::uint8_t>(out, e.depth);
        detail::put<std::uint16_t>(out, static_cast<std::uint16_t>(e.witness.size()));
        for (const Layer& l : e.witness) {
          detail::put<std::uint16_t>(out, static_cast<std::uint16_t>(l.ops.size()));
          for (const OpRecord& op : l.ops) {
            detail::put<std::uint8_t>(out, static_cast<std::uint8_t>(op.kind));
            detail::put<std::uint8_t>(out, static_cast<std::uint8_t>(op.a));
            detail::put<std::uint8_t>(out, static_cast<std::uint8_t>(op.b));
          }
        }
      }
    }
}

inline BlockTables load_block_tables(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != "CNTB") throw parse_error("bad table file magic", 0);
  std::uint32_t version = detail::get<std::uint32_t>(in);
  if (version != 1) throw parse_error("unsupported table file version", 0);
  BlockTables t;
  t.k = detail::get<std::uint32_t>(in);
  t.shapes.resize(t.k * t.k);
  for (std::size_t r = 1; r <= t.k; ++r)
    for (std::size_t c = 1; c <= t.k; ++c) {
      TileTable& table = t.shape(r, c);
      table.rows = r;
      table.cols = c;
      std::uint32_t count = detail::get<std::uint32_t>(in);
      for (std::uint32_t i = 0; i < count; ++i) {
        std::uint64_t bits = detail::get<std::uint64_t>(in);
        TileEntry e;
        e.depth = detail::get<std::uint8_t>(in);
        std::uint16_t nlayers = detail::get<std::uint16_t>(in);
        e.witness.resize(nlayers);
        for (auto& l : e.witness) {
          std::uint16_t nops = detail::get<std::uint16_t>(in);
          for (std::uint16_t o = 0; o < nops; ++o) {
            auto kind = static_cast<OpRecord::Kind>(detail::get<std::uint8_t>(in));
            std::size_t a = detail::get<std::uint8_t>(in);
            std::size_t b = detail::get<std::uint8_t>(in);
            l.ops.push_back(OpRecord{kind, a, b});
          }
        }
        table.entries.emplace(bits, std::move(e));
      }
    }
  return t;
}

/// Process-wide cache; tables for k <= 4 are cheap to rebuild on demand.
inline const BlockTables& block_tables(std::size_t k) {
  if (k < 1 || k > 4) throw missing_table_error(k);
  static std::mutex mu;
  static std::map<std::size_t, BlockTables> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(k);
  if (it == cache.end()) it = cache.emplace(k, bfs_depth_classes(k).tables).first;
  return it->second;
}

}  // namespace cnot
