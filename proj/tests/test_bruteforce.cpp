#include "doctest.h"

#include <sstream>

#include "cnotsynth/bruteforce.hpp"
#include "cnotsynth/rng.hpp"

using namespace cnot;

namespace {

// exhaustive equivalence oracle: is b reachable from a by row/col perms?
bool equivalent(const BitMatrix& a, const BitMatrix& b) {
  if (a.n_rows() != b.n_rows() || a.n_cols() != b.n_cols()) return false;
  auto sigmas = detail::all_permutations(a.n_rows());
  auto taus = detail::all_permutations(a.n_cols());
  std::uint64_t target = detail::encode(b);
  std::uint64_t bits = detail::encode(a);
  for (const auto& s : sigmas)
    for (const auto& t : taus)
      if (detail::permute_bits(bits, a.n_rows(), a.n_cols(), s, t) == target) return true;
  return false;
}

BitMatrix random_small(std::size_t r, std::size_t c, Rng& rng) {
  BitMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (rng.coin()) m.set(i, j, true);
  return m;
}

bool is_partial_permutation(const BitMatrix& m) {
  for (std::size_t i = 0; i < m.n_rows(); ++i)
    if (m.row_weight(i) > 1) return false;
  for (std::size_t j = 0; j < m.n_cols(); ++j)
    if (m.col_weight(j) > 1) return false;
  return true;
}

}  // namespace

TEST_CASE("canonical_form is invariant exactly on permutation classes") {
  Rng rng(31);
  // permuted pairs share a key
  for (int t = 0; t < 100; ++t) {
    BitMatrix m = random_small(4, 4, rng);
    std::vector<std::size_t> sigma{0, 1, 2, 3}, tau{0, 1, 2, 3};
    for (std::size_t i = 3; i > 0; --i) {
      std::swap(sigma[i], sigma[rng.below(i + 1)]);
      std::swap(tau[i], tau[rng.below(i + 1)]);
    }
    BitMatrix p(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        if (m.get(sigma[i], tau[j])) p.set(i, j, true);
    CHECK(canonical_form(m) == canonical_form(p));
  }
  // non-equivalent pairs get distinct keys
  int checked = 0;
  while (checked < 60) {
    BitMatrix a = random_small(3, 3, rng), b = random_small(3, 3, rng);
    if (equivalent(a, b)) continue;
    ++checked;
    CHECK_FALSE(canonical_form(a) == canonical_form(b));
  }
  // all permutation matrices share the identity's key
  BitMatrix id = BitMatrix::identity(4);
  BitMatrix rot(4, 4);
  for (std::size_t i = 0; i < 4; ++i) rot.set(i, (i + 1) % 4, true);
  CHECK(canonical_form(id) == canonical_form(rot));

  // the refined large-size form is still a class invariant
  for (int t = 0; t < 40; ++t) {
    BitMatrix m = random_small(5, 5, rng);
    std::vector<std::size_t> sigma{0, 1, 2, 3, 4}, tau{0, 1, 2, 3, 4};
    for (std::size_t i = 4; i > 0; --i) {
      std::swap(sigma[i], sigma[rng.below(i + 1)]);
      std::swap(tau[i], tau[rng.below(i + 1)]);
    }
    BitMatrix p(5, 5);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j)
        if (m.get(sigma[i], tau[j])) p.set(i, j, true);
    CHECK(canonical_form(m) == canonical_form(p));
  }
}

TEST_CASE("class census matches the published depth table for k <= 4") {
  using Counts = std::map<std::size_t, std::size_t>;
  CHECK(bfs_depth_classes(1).class_counts == Counts{{0, 2}});
  CHECK(bfs_depth_classes(2).class_counts == Counts{{0, 3}, {1, 4}});
  CHECK(bfs_depth_classes(3).class_counts == Counts{{0, 4}, {1, 17}, {2, 15}});
  CHECK(bfs_depth_classes(4).class_counts == Counts{{0, 5}, {1, 69}, {2, 243}});
}

TEST_CASE("depth-0 classes are the k+1 partial-permutation ranks") {
  for (std::size_t k = 1; k <= 4; ++k)
    CHECK(bfs_depth_classes(k).class_counts.at(0) == k + 1);
}

TEST_CASE("census totals agree with the Burnside oracle") {
  CHECK(count_classes_burnside(3, 3) == 36);  // 4 + 17 + 15
  for (std::size_t k = 1; k <= 4; ++k) {
    std::size_t total = 0;
    for (auto [d, c] : bfs_depth_classes(k).class_counts) total += c;
    CHECK(total == count_classes_burnside(k, k));
  }
}

TEST_CASE("every witness replays its representative to a partial permutation") {
  Rng rng(5);
  for (std::size_t k = 2; k <= 4; ++k) {
    BfsResult res = bfs_depth_classes(k);
    for (std::size_t r = 1; r <= k; ++r)
      for (std::size_t c = 1; c <= k; ++c) {
        const TileTable& table = res.tables.shape(r, c);
        for (const auto& [bits, entry] : table.entries) {
          BitMatrix rep = detail::decode(bits, r, c);
          CHECK(entry.witness.size() == entry.depth);
          for (const Layer& l : entry.witness) CHECK(layer_is_valid(l, r, c));
          apply_layers(rep, entry.witness);
          CHECK(is_partial_permutation(rep));
        }
      }
  }
}

TEST_CASE("table lookup covers every matrix via canonicalization") {
  Rng rng(77);
  const BlockTables& tables = block_tables(4);
  CHECK(tables.max_depth() == 2);
  for (int t = 0; t < 300; ++t) {
    std::size_t r = 1 + rng.below(4), c = 1 + rng.below(4);
    BitMatrix m = random_small(r, c, rng);
    detail::CanonResult canon = detail::canonicalize(m);
    const TileTable& table = tables.shape(r, c);
    REQUIRE(table.entries.count(canon.bits) == 1);
    // conjugated witness reduces the original matrix
    const TileEntry& e = table.entries.at(canon.bits);
    BitMatrix work(m);
    for (const Layer& wl : e.witness) {
      Layer mapped;
      for (const OpRecord& op : wl.ops) {
        if (op.kind == OpRecord::Kind::row)
          mapped.ops.push_back(OpRecord::row_op(canon.sigma[op.a], canon.sigma[op.b]));
        else if (op.kind == OpRecord::Kind::col)
          mapped.ops.push_back(OpRecord::col_op(canon.tau[op.a], canon.tau[op.b]));
        else
          mapped.ops.push_back(OpRecord::flip_op(canon.sigma[op.a], canon.tau[op.b]));
      }
      apply_layer(work, mapped);
    }
    CHECK(is_partial_permutation(work));
  }
}

TEST_CASE("block tables serialize and reload") {
  BfsResult res = bfs_depth_classes(3);
  std::ostringstream out;
  save_block_tables(out, res.tables);
  std::istringstream in(out.str());
  BlockTables back = load_block_tables(in);
  CHECK(back.k == 3);
  for (std::size_t r = 1; r <= 3; ++r)
    for (std::size_t c = 1; c <= 3; ++c) {
      CHECK(back.shape(r, c).entries.size() == res.tables.shape(r, c).entries.size());
      for (const auto& [bits, e] : res.tables.shape(r, c).entries) {
        REQUIRE(back.shape(r, c).entries.count(bits) == 1);
        const TileEntry& b2 = back.shape(r, c).entries.at(bits);
        CHECK(b2.depth == e.depth);
        REQUIRE(b2.witness.size() == e.witness.size());
        for (std::size_t i = 0; i < e.witness.size(); ++i) {
          REQUIRE(b2.witness[i].ops.size() == e.witness[i].ops.size());
          for (std::size_t o = 0; o < e.witness[i].ops.size(); ++o)
            CHECK(b2.witness[i].ops[o] == e.witness[i].ops[o]);
        }
      }
    }

  std::istringstream bad("NOPE");
  CHECK_THROWS_AS(load_block_tables(bad), parse_error);
}

TEST_CASE("unsupported sizes are rejected") {
  CHECK_THROWS_AS(bfs_depth_classes(5), unsupported_k_error);
  CHECK_THROWS_AS(class_counts_large(4), unsupported_k_error);
  CHECK_THROWS_AS(block_tables(7), missing_table_error);
}
