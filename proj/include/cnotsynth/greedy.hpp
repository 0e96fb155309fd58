#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cnotsynth/bitmatrix.hpp"
#include "cnotsynth/circuit.hpp"
#include "cnotsynth/rng.hpp"
#include "cnotsynth/synthesis.hpp"

namespace cnot {

enum class CostKind { h_sum, H_sum, h_prod, H_prod };

inline const char* cost_kind_name(CostKind k) {
  switch (k) {
    case CostKind::h_sum: return "h_sum";
    case CostKind::H_sum: return "H_sum";
    case CostKind::h_prod: return "h_prod";
    case CostKind::H_prod: return "H_prod";
  }
  return "?";
}

inline bool cost_uses_inverse(CostKind k) {
  return k == CostKind::H_sum || k == CostKind::H_prod;
}

/// Cost of a working operator; all four reach their minimum exactly on
/// permutation matrices.
inline double cost(const BitMatrix& a, CostKind kind) {
  auto h_sum = [](const BitMatrix& m) { return static_cast<double>(m.count_ones()); };
  auto h_prod = [](const BitMatrix& m) {
    double total = 0;
    for (std::size_t r = 0; r < m.n_rows(); ++r)
      total += std::log2(static_cast<double>(m.row_weight(r)));
    return total;
  };
  switch (kind) {
    case CostKind::h_sum: return h_sum(a);
    case CostKind::H_sum: return h_sum(a) + h_sum(a.invert());
    case CostKind::h_prod: return h_prod(a);
    case CostKind::H_prod: return h_prod(a) + h_prod(a.invert());
  }
  return 0;
}

struct GreedyConfig {
  CostKind cost = CostKind::H_sum;
  std::uint64_t seed = 0;
  std::size_t max_resets = 0;  // 0: default of 20 * n
  bool use_lu = false;
  LuStrategy lu_strategy = LuStrategy::plain;
};

/// Failure is a value: callers run portfolios and want to know why a method
/// dropped out.
struct GreedyFailure {
  std::size_t resets = 0;
  std::vector<double> cost_trace;
};

struct GreedyStep {
  bool is_row;
  std::size_t src, tgt;
  bool after_reset;  // first accepted operation of a fresh layer epoch
};

struct GreedyOutcome {
  std::optional<SynthesisResult> result;
  GreedyFailure failure;
  std::vector<double> cost_trace;
  std::vector<GreedyStep> op_trace;

  bool ok() const { return result.has_value(); }
};

namespace detail {

// Working state: the operator, its transpose (fast column access), and for
// the H-costs the inverse pair as well, with cached row weights.
struct GreedyState {
  BitMatrix m, mt, inv, invt;
  std::vector<std::size_t> rw_m, rw_mt, rw_inv, rw_invt;
  std::vector<double> log_tab;  // log2 lookup; std::log2 is too hot otherwise
  bool track_inverse;
  std::size_t n;

  explicit GreedyState(const BitMatrix& a, bool with_inverse)
      : m(a), mt(a.transpose()), track_inverse(with_inverse), n(a.n_rows()) {
    if (track_inverse) {
      inv = a.invert();
      invt = inv.transpose();
    }
    auto weights = [](const BitMatrix& x) {
      std::vector<std::size_t> w(x.n_rows());
      for (std::size_t r = 0; r < x.n_rows(); ++r) w[r] = x.row_weight(r);
      return w;
    };
    rw_m = weights(m);
    rw_mt = weights(mt);
    if (track_inverse) {
      rw_inv = weights(inv);
      rw_invt = weights(invt);
    }
    log_tab.resize(n + 2, 0.0);
    for (std::size_t i = 1; i < log_tab.size(); ++i)
      log_tab[i] = std::log2(static_cast<double>(i));
  }

  double log_delta(std::size_t from, std::size_t to) const {
    return log_tab[to] - log_tab[from];
  }

  // cost change of Row(i, j): r_j <- r_i XOR r_j
  double row_delta(CostKind kind, std::size_t i, std::size_t j) const {
    std::size_t neww = m.rows_xor_weight(i, j);
    switch (kind) {
      case CostKind::h_sum:
        return static_cast<double>(neww) - static_cast<double>(rw_m[j]);
      case CostKind::h_prod:
        return log_delta(rw_m[j], neww);
      case CostKind::H_sum: {
        // inverse side: col i <- col i XOR col j, i.e. invt row i ^= row j
        std::size_t newi = invt.rows_xor_weight(j, i);
        return static_cast<double>(neww) - static_cast<double>(rw_m[j]) +
               static_cast<double>(newi) - static_cast<double>(rw_invt[i]);
      }
      case CostKind::H_prod: {
        double d = log_delta(rw_m[j], neww);
        // inverse rows touched: rows r with inv[r][j] = 1 get inv[r][i] toggled
        invt.for_each_set_in_row(j, [&](std::size_t r) {
          d += log_delta(rw_inv[r], rw_inv[r] + (inv.get(r, i) ? -1 : +1));
        });
        return d;
      }
    }
    return 0;
  }

  // cost change of Col(i, j): c_j <- c_i XOR c_j
  double col_delta(CostKind kind, std::size_t i, std::size_t j) const {
    switch (kind) {
      case CostKind::h_sum: {
        std::size_t neww = mt.rows_xor_weight(i, j);
        return static_cast<double>(neww) - static_cast<double>(rw_mt[j]);
      }
      case CostKind::h_prod: {
        // rows r with m[r][i] = 1 get m[r][j] toggled
        double d = 0;
        mt.for_each_set_in_row(i, [&](std::size_t r) {
          d += log_delta(rw_m[r], rw_m[r] + (m.get(r, j) ? -1 : +1));
        });
        return d;
      }
      case CostKind::H_sum: {
        std::size_t neww = mt.rows_xor_weight(i, j);
        // inverse side: row i <- row i XOR row j
        std::size_t newi = inv.rows_xor_weight(j, i);
        return static_cast<double>(neww) - static_cast<double>(rw_mt[j]) +
               static_cast<double>(newi) - static_cast<double>(rw_inv[i]);
      }
      case CostKind::H_prod: {
        double d = 0;
        mt.for_each_set_in_row(i, [&](std::size_t r) {
          d += log_delta(rw_m[r], rw_m[r] + (m.get(r, j) ? -1 : +1));
        });
        d += log_delta(rw_inv[i], inv.rows_xor_weight(j, i));
        return d;
      }
    }
    return 0;
  }

  void apply_row(std::size_t i, std::size_t j) {
    m.row_add(i, j);
    rw_m[j] = m.row_weight(j);
    m.for_each_set_in_row(i, [&](std::size_t c) {
      mt.flip(c, j);
      rw_mt[c] += mt.get(c, j) ? +1 : std::size_t(-1);
    });
    if (track_inverse) {
      invt.row_add(j, i);  // inv col i ^= col j
      rw_invt[i] = invt.row_weight(i);
      invt.for_each_set_in_row(j, [&](std::size_t r) {
        inv.flip(r, i);
        rw_inv[r] += inv.get(r, i) ? +1 : std::size_t(-1);
      });
    }
  }

  void apply_col(std::size_t i, std::size_t j) {
    mt.row_add(i, j);
    rw_mt[j] = mt.row_weight(j);
    mt.for_each_set_in_row(i, [&](std::size_t r) {
      m.flip(r, j);
      rw_m[r] += m.get(r, j) ? +1 : std::size_t(-1);
    });
    if (track_inverse) {
      inv.row_add(j, i);  // inv row i ^= row j
      rw_inv[i] = inv.row_weight(i);
      inv.for_each_set_in_row(j, [&](std::size_t c) {
        invt.flip(c, i);
        rw_invt[c] += invt.get(c, i) ? +1 : std::size_t(-1);
      });
    }
  }

  bool is_permutation() const { return m.count_ones() == n; }
};

}  // namespace detail

/// Cost-guided reduction to a permutation matrix. Open row-side and
/// column-side layers are tracked through busy-wire sets; when no compatible
/// operation decreases the cost, both sets reset together and a counter
/// increments. Ties among best operations break uniformly at random
/// (seeded).
inline GreedyOutcome greedy_synth(const BitMatrix& a, const GreedyConfig& cfg) {
  if (!a.is_square()) throw shape_error("greedy_synth: square input required");
  std::size_t n = a.n_rows();
  if (a.rank() != n) throw singular_error();
  std::size_t max_resets = cfg.max_resets ? cfg.max_resets : 20 * n;

  detail::GreedyState st(a, cost_uses_inverse(cfg.cost));
  Rng rng(cfg.seed);
  ReductionRecorder rec;
  std::vector<bool> row_busy(n, false), col_busy(n, false);
  std::size_t resets = 0;
  bool fresh_epoch = true;

  GreedyOutcome out;
  out.cost_trace.push_back(cost(a, cfg.cost));

  constexpr double kEps = 1e-9;
  struct Candidate {
    bool is_row;
    std::size_t i, j;
  };

  while (!st.is_permutation()) {
    double best = -kEps;
    std::vector<Candidate> ties;
    for (std::size_t i = 0; i < n; ++i) {
      if (!row_busy[i]) {
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i || row_busy[j]) continue;
          double d = st.row_delta(cfg.cost, i, j);
          if (d < best - kEps) {
            best = d;
            ties.clear();
            ties.push_back({true, i, j});
          } else if (d < best + kEps && d < -kEps) {
            ties.push_back({true, i, j});
          }
        }
      }
      if (!col_busy[i]) {
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i || col_busy[j]) continue;
          double d = st.col_delta(cfg.cost, i, j);
          if (d < best - kEps) {
            best = d;
            ties.clear();
            ties.push_back({false, i, j});
          } else if (d < best + kEps && d < -kEps) {
            ties.push_back({false, i, j});
          }
        }
      }
    }

    if (ties.empty()) {
      bool all_free = true;
      for (std::size_t w = 0; w < n && all_free; ++w)
        all_free = !row_busy[w] && !col_busy[w];
      ++resets;
      if (all_free || resets > max_resets) {
        out.failure.resets = resets;
        out.failure.cost_trace = out.cost_trace;
        return out;
      }
      std::fill(row_busy.begin(), row_busy.end(), false);
      std::fill(col_busy.begin(), col_busy.end(), false);
      fresh_epoch = true;
      continue;
    }

    const Candidate& pick = ties[ties.size() == 1 ? 0 : rng.below(ties.size())];
    if (pick.is_row) {
      st.apply_row(pick.i, pick.j);
      row_busy[pick.i] = row_busy[pick.j] = true;
      rec.record_row(pick.i, pick.j);
    } else {
      st.apply_col(pick.i, pick.j);
      col_busy[pick.i] = col_busy[pick.j] = true;
      rec.record_col(pick.i, pick.j);
    }
    out.op_trace.push_back({pick.is_row, pick.i, pick.j, fresh_epoch});
    fresh_epoch = false;
    out.cost_trace.push_back(out.cost_trace.back() + best);
  }

  SynthesisResult res = assemble_reduction(rec, st.m, std::string("greedy:") +
                                                          cost_kind_name(cfg.cost));
  out.result = std::move(res);
  return out;
}

/// LU-preprocessed greedy: factor A = P*L*U, synthesize L and U separately,
/// concatenate (U's circuit first) and fold P into the output permutation.
inline GreedyOutcome lu_greedy_synth(const BitMatrix& a, const GreedyConfig& cfg) {
  if (!a.is_square()) throw shape_error("lu_greedy_synth: square input required");
  LuResult lu = lu_decompose(a, cfg.lu_strategy);
  GreedyConfig sub = cfg;
  sub.use_lu = false;

  GreedyOutcome lo = greedy_synth(lu.lower, sub);
  if (!lo.ok()) return lo;
  GreedyOutcome uo = greedy_synth(lu.upper, sub);
  if (!uo.ok()) return uo;

  const SynthesisResult& rl = *lo.result;
  const SynthesisResult& ru = *uo.result;

  // A = P * (pi_L sim(c_L)) * (pi_U sim(c_U))
  //   = (P pi_L pi_U) * sim(c_L relabeled through pi_U^-1) * sim(c_U)
  SynthesisResult res;
  res.method = std::string("lu+greedy:") + cost_kind_name(cfg.cost) +
               (cfg.lu_strategy == LuStrategy::sparse ? ":sparse" : "");
  res.circuit = ru.circuit;
  res.circuit.append(rl.circuit.relabeled(ru.out_permutation.inverse().image));
  res.out_permutation =
      lu.perm.compose(rl.out_permutation).compose(ru.out_permutation);
  res.refresh_stats();

  GreedyOutcome out;
  out.cost_trace = lo.cost_trace;
  out.cost_trace.insert(out.cost_trace.end(), uo.cost_trace.begin(), uo.cost_trace.end());
  out.result = std::move(res);
  return out;
}

}  // namespace cnot
