#include "doctest.h"

#include <set>

#include "cnotsynth/ancilla.hpp"

using namespace cnot;

namespace {

ParityTable random_table(std::size_t p, std::size_t n, Rng& rng) {
  for (;;) {
    BitMatrix m(p, n);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (rng.coin()) m.set(i, j, true);
    if (m.rank() == n) return ParityTable{m};
  }
}

std::size_t ceil_log2(std::size_t x) {
  std::size_t d = 0;
  while ((std::size_t{1} << d) < x) ++d;
  return d;
}

BitMatrix table_after(const Circuit& c, const BitMatrix& table) {
  BitMatrix t(table);
  for (const Gate& g : c.gates) t.row_add(g.control, g.target);
  return t;
}

}  // namespace

TEST_CASE("realize_permutation simulates to the permutation in depth <= 6") {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 2 + rng.below(30);
    Permutation p(n);
    for (std::size_t i = n - 1; i > 0; --i) std::swap(p.image[i], p.image[rng.below(i + 1)]);
    Circuit c = realize_permutation(p);
    CHECK(simulate(c) == p.as_matrix());
    CHECK(depth_slices(c) <= 6);
  }
  CHECK(realize_permutation(Permutation(5)).gates.empty());
}

TEST_CASE("find_partial_permutation basics") {
  Rng rng(7);
  BitMatrix inv = random_invertible(5, rng);
  CHECK(find_partial_permutation(inv, BitMatrix::identity(5)).empty());

  BitMatrix zero(4, 4);
  auto full = find_partial_permutation(zero, BitMatrix::identity(4));
  CHECK(full.size() == 4);

  // rank-2 4x4 target against the identity source needs exactly 2 additions
  BitMatrix low = BitMatrix::from_rows({"1100", "1100", "0011", "0011"});
  auto sigma = find_partial_permutation(low, BitMatrix::identity(4));
  CHECK(sigma.size() == 2);
}

TEST_CASE("find_partial_permutation always produces an invertible sum") {
  Rng rng(11);
  for (int t = 0; t < 300; ++t) {
    std::size_t n = 1 + rng.below(12);
    BitMatrix a = random_invertible(n, rng);
    BitMatrix b(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (rng.below(3) == 0) b.set(i, j, true);
    auto sigma = find_partial_permutation(b, a);
    CHECK(sigma.size() <= n - b.rank());
    std::set<std::size_t> tgts, srcs;
    BitMatrix sum(b);
    for (auto [tgt, src] : sigma) {
      CHECK(tgts.insert(tgt).second);
      CHECK(srcs.insert(src).second);
      for (std::size_t c = 0; c < n; ++c)
        if (a.get(src, c)) sum.flip(tgt, c);
    }
    CHECK(sum.rank() == n);
  }
}

TEST_CASE("make_blocks_invertible leaves already-good tables untouched") {
  Rng rng(13);
  std::size_t n = 4;
  BitMatrix m(12, 4);
  for (std::size_t blk = 0; blk < 3; ++blk) {
    BitMatrix b = random_invertible(n, rng);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (b.get(i, j)) m.set(blk * n + i, j, true);
  }
  BlockPrep prep = make_blocks_invertible(ParityTable{m});
  CHECK(prep.prep.gates.empty());
  CHECK(prep.sigma.is_identity());
}

TEST_CASE("make_blocks_invertible copies block 1 onto a zero block in one layer") {
  std::size_t n = 5;
  BitMatrix m(2 * n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);  // block 1 = I, block 2 = 0
  BlockPrep prep = make_blocks_invertible(ParityTable{m});
  CHECK(prep.prep.gates.size() == n);
  CHECK(depth_slices(prep.prep) == 1);
  for (std::size_t blk = 0; blk < 2; ++blk)
    CHECK(prep.table.submatrix(blk * n, n, 0, n).rank() == n);
}

TEST_CASE("make_blocks_invertible fixes every block within the depth bound") {
  Rng rng(17);
  for (std::size_t n : {4, 8}) {
    for (std::size_t mult : {1, 2, 4, 8}) {
      std::size_t p = mult * n + (mult > 1 ? rng.below(n) : 0);
      for (int t = 0; t < 10; ++t) {
        ParityTable a = random_table(p, n, rng);
        BlockPrep prep = make_blocks_invertible(a);
        std::size_t k = p / n;
        CHECK(depth_slices(prep.prep) <= ceil_log2(k));
        CHECK(prep.table == table_after(prep.prep, a.matrix));
        Permutation phys = prep.sigma.inverse();
        // block 1 core plus every further block must be invertible
        for (std::size_t i = 1; i <= prep.block_count(); ++i) {
          std::size_t v0 = (i == 1) ? 0 : prep.boundaries[i - 1];
          std::vector<std::size_t> rows;
          for (std::size_t v = v0; v < v0 + n; ++v) rows.push_back(phys(v));
          CHECK(prep.table.take_rows(rows).rank() == n);
        }
      }
    }
  }
  BitMatrix bad(6, 3);
  bad.set(0, 0, true);
  CHECK_THROWS_AS(make_blocks_invertible(ParityTable{bad}), rank_deficient_error);
}

TEST_CASE("ancilla_synth maps the input table to the output table exactly") {
  Rng rng(19);
  for (std::size_t n : {4, 8}) {
    for (std::size_t mult : {1, 2, 4}) {
      std::size_t p = mult * n;
      for (int t = 0; t < 8; ++t) {
        ParityTable in = random_table(p, n, rng);
        ParityTable out = random_table(p, n, rng);
        AncillaResult res = ancilla_synth(in, out);
        CHECK(simulate(res.circuit).multiply(in.matrix) == out.matrix);
        CHECK(res.prep1_depth <= ceil_log2(p / n));
        CHECK(res.prep2_depth <= ceil_log2(p / n));
        // D-phase gates stay inside their wire blocks
        for (std::size_t gi = res.prep1_end; gi < res.d_end; ++gi) {
          const Gate& g = res.circuit.gates[gi];
          bool inside = false;
          for (const auto& wires : res.d_blocks) {
            bool c_in = std::find(wires.begin(), wires.end(), g.control) != wires.end();
            bool t_in = std::find(wires.begin(), wires.end(), g.target) != wires.end();
            inside = inside || (c_in && t_in);
          }
          CHECK(inside);
        }
      }
    }
  }
}

TEST_CASE("ancilla_synth with ragged block sizes (p not a multiple of n)") {
  Rng rng(23);
  for (int t = 0; t < 10; ++t) {
    std::size_t n = 4 + rng.below(5);
    std::size_t p = 2 * n + 1 + rng.below(n - 1);
    ParityTable in = random_table(p, n, rng);
    ParityTable out = random_table(p, n, rng);
    AncillaResult res = ancilla_synth(in, out);
    CHECK(simulate(res.circuit).multiply(in.matrix) == out.matrix);
  }
}

TEST_CASE("ancilla_synth fixes the table when A_out equals A_in") {
  Rng rng(29);
  ParityTable a = random_table(12, 4, rng);
  AncillaResult res = ancilla_synth(a, a);
  CHECK(simulate(res.circuit).multiply(a.matrix) == a.matrix);
}

TEST_CASE("ancilla_synth at p = n reduces to square synthesis") {
  Rng rng(31);
  for (int t = 0; t < 10; ++t) {
    ParityTable in{random_invertible(6, rng)};
    ParityTable out{random_invertible(6, rng)};
    AncillaResult res = ancilla_synth(in, out);
    BitMatrix expect = out.matrix.multiply(in.matrix.invert());
    CHECK(simulate(res.circuit) == expect);
  }
}

TEST_CASE("ancilla depth grows at most logarithmically with the ancilla count") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng16(1000 + seed), rng64(1000 + seed);
    std::size_t n = 8;
    ParityTable in16 = random_table(16, n, rng16);
    ParityTable out16 = random_table(16, n, rng16);
    ParityTable in64 = random_table(64, n, rng64);
    ParityTable out64 = random_table(64, n, rng64);
    std::size_t d16 = depth_slices(ancilla_synth(in16, out16).circuit);
    std::size_t d64 = depth_slices(ancilla_synth(in64, out64).circuit);
    CHECK(d64 <= d16 + 6);
  }
}

TEST_CASE("ancilla_synth rejects bad inputs") {
  Rng rng(37);
  ParityTable ok = random_table(8, 4, rng);
  ParityTable narrow = random_table(8, 3, rng);
  CHECK_THROWS_AS(ancilla_synth(ok, narrow), shape_error);
  BitMatrix deficient(8, 4);
  deficient.set(0, 0, true);
  CHECK_THROWS_AS(ancilla_synth(ParityTable{deficient}, ok), rank_deficient_error);
}
