#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <vector>

#include "cnotsynth/bitmatrix.hpp"

namespace cnot {

struct WeightedEdge {
  std::size_t u, v;
  long long weight;
};

/// Undirected weighted graph; at most one edge per unordered pair (callers
/// pre-merge parallel candidates keeping the max weight).
struct WeightedGraph {
  std::size_t n_vertices = 0;
  std::vector<WeightedEdge> edges;
};

/// Biadjacency representation: left vertices are rows, right are columns.
struct BipartiteGraph {
  std::size_t left_count = 0, right_count = 0;
  BitMatrix adjacency;

  BipartiteGraph() = default;
  BipartiteGraph(std::size_t left, std::size_t right)
      : left_count(left), right_count(right), adjacency(left, right) {}
  explicit BipartiteGraph(const BitMatrix& adj)
      : left_count(adj.n_rows()), right_count(adj.n_cols()), adjacency(adj) {}
};

struct MatchingSet {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  std::size_t size() const { return pairs.size(); }
};

namespace detail {

// Maximum weight matching on general graphs (Galil's primal-dual blossom
// method, following van Rantwijk's formulation). O(V^3). Weights are doubled
// internally so dual variables stay integral.
class BlossomMatcher {
 public:
  explicit BlossomMatcher(const WeightedGraph& g) : nvertex_(g.n_vertices) {
    for (const WeightedEdge& e : g.edges) {
      if (e.weight <= 0) continue;  // never in a maximum-weight matching
      assert(e.u != e.v && e.u < nvertex_ && e.v < nvertex_);
      edges_.push_back({e.u, e.v, e.weight});
    }
    nedge_ = edges_.size();
  }

  // mate[v] = matched partner or SIZE_MAX
  std::vector<std::size_t> solve() {
    std::vector<std::size_t> result(nvertex_, SIZE_MAX);
    if (nvertex_ == 0 || nedge_ == 0) return result;

    long long maxweight = 0;
    for (const Edge& e : edges_) maxweight = std::max(maxweight, e.w);

    endpoint_.resize(2 * nedge_);
    for (std::size_t k = 0; k < nedge_; ++k) {
      endpoint_[2 * k] = edges_[k].u;
      endpoint_[2 * k + 1] = edges_[k].v;
    }
    neighbend_.assign(nvertex_, {});
    for (std::size_t k = 0; k < nedge_; ++k) {
      neighbend_[edges_[k].u].push_back(2 * k + 1);
      neighbend_[edges_[k].v].push_back(2 * k);
    }
    mate_.assign(nvertex_, kNone);
    label_.assign(2 * nvertex_, 0);
    labelend_.assign(2 * nvertex_, kNone);
    inblossom_.resize(nvertex_);
    for (std::size_t v = 0; v < nvertex_; ++v) inblossom_[v] = v;
    blossomparent_.assign(2 * nvertex_, kNone);
    blossomchilds_.assign(2 * nvertex_, {});
    blossombase_.resize(2 * nvertex_, kNone);
    for (std::size_t v = 0; v < nvertex_; ++v) blossombase_[v] = v;
    blossomendps_.assign(2 * nvertex_, {});
    bestedge_.assign(2 * nvertex_, kNone);
    blossombestedges_.assign(2 * nvertex_, {});
    unusedblossoms_.clear();
    for (std::size_t b = nvertex_; b < 2 * nvertex_; ++b) unusedblossoms_.push_back(b);
    dualvar_.assign(2 * nvertex_, 0);
    for (std::size_t v = 0; v < nvertex_; ++v) dualvar_[v] = maxweight;
    allowedge_.assign(nedge_, false);

    for (std::size_t stage = 0; stage < nvertex_; ++stage) {
      std::fill(label_.begin(), label_.end(), 0);
      std::fill(bestedge_.begin(), bestedge_.end(), kNone);
      for (std::size_t b = nvertex_; b < 2 * nvertex_; ++b) blossombestedges_[b].clear();
      std::fill(allowedge_.begin(), allowedge_.end(), false);
      queue_.clear();

      for (std::size_t v = 0; v < nvertex_; ++v)
        if (mate_[v] == kNone && label_[inblossom_[v]] == 0) assign_label(v, 1, kNone);

      bool augmented = false;
      for (;;) {
        while (!queue_.empty() && !augmented) {
          std::size_t v = queue_.back();
          queue_.pop_back();
          assert(label_[inblossom_[v]] == 1);
          for (std::size_t p : neighbend_[v]) {
            std::size_t k = p / 2;
            std::size_t w = endpoint_[p];
            if (inblossom_[v] == inblossom_[w]) continue;
            long long kslack = 0;
            if (!allowedge_[k]) {
              kslack = slack(k);
              if (kslack <= 0) allowedge_[k] = true;
            }
            if (allowedge_[k]) {
              if (label_[inblossom_[w]] == 0) {
                assign_label(w, 2, p ^ 1);
              } else if (label_[inblossom_[w]] == 1) {
                std::size_t base = scan_blossom(v, w);
                if (base != kNone) {
                  add_blossom(base, k);
                } else {
                  augment_matching(k);
                  augmented = true;
                  break;
                }
              } else if (label_[w] == 0) {
                label_[w] = 2;
                labelend_[w] = p ^ 1;
              }
            } else if (label_[inblossom_[w]] == 1) {
              std::size_t b = inblossom_[v];
              if (bestedge_[b] == kNone || kslack < slack(bestedge_[b])) bestedge_[b] = k;
            } else if (label_[w] == 0) {
              if (bestedge_[w] == kNone || kslack < slack(bestedge_[w])) bestedge_[w] = k;
            }
          }
        }
        if (augmented) break;

        // dual adjustment
        int deltatype = 1;
        long long delta = 0;
        std::size_t deltaedge = kNone, deltablossom = kNone;
        {
          long long mind = dualvar_[0];
          for (std::size_t v = 1; v < nvertex_; ++v) mind = std::min(mind, dualvar_[v]);
          delta = mind;
        }
        for (std::size_t v = 0; v < nvertex_; ++v) {
          if (label_[inblossom_[v]] == 0 && bestedge_[v] != kNone) {
            long long d = slack(bestedge_[v]);
            if (d < delta) {
              delta = d;
              deltatype = 2;
              deltaedge = bestedge_[v];
            }
          }
        }
        for (std::size_t b = 0; b < 2 * nvertex_; ++b) {
          if (blossomparent_[b] == kNone && label_[b] == 1 && bestedge_[b] != kNone) {
            long long kslack = slack(bestedge_[b]);
            long long d = kslack / 2;
            if (d < delta) {
              delta = d;
              deltatype = 3;
              deltaedge = bestedge_[b];
            }
          }
        }
        for (std::size_t b = nvertex_; b < 2 * nvertex_; ++b) {
          if (blossombase_[b] != kNone && blossomparent_[b] == kNone && label_[b] == 2 &&
              dualvar_[b] < delta) {
            delta = dualvar_[b];
            deltatype = 4;
            deltablossom = b;
          }
        }
        delta = std::max(delta, 0LL);

        for (std::size_t v = 0; v < nvertex_; ++v) {
          int lab = label_[inblossom_[v]];
          if (lab == 1)
            dualvar_[v] -= delta;
          else if (lab == 2)
            dualvar_[v] += delta;
        }
        for (std::size_t b = nvertex_; b < 2 * nvertex_; ++b) {
          if (blossombase_[b] != kNone && blossomparent_[b] == kNone) {
            if (label_[b] == 1)
              dualvar_[b] += delta;
            else if (label_[b] == 2)
              dualvar_[b] -= delta;
          }
        }

        if (deltatype == 1) break;  // optimum reached
        if (deltatype == 2) {
          allowedge_[deltaedge] = true;
          std::size_t i = edges_[deltaedge].u;
          if (label_[inblossom_[i]] == 0) i = edges_[deltaedge].v;
          assert(label_[inblossom_[i]] == 1);
          queue_.push_back(i);
        } else if (deltatype == 3) {
          allowedge_[deltaedge] = true;
          std::size_t i = edges_[deltaedge].u;
          assert(label_[inblossom_[i]] == 1);
          queue_.push_back(i);
        } else {
          expand_blossom(deltablossom, false);
        }
      }
      if (!augmented) break;

      for (std::size_t b = nvertex_; b < 2 * nvertex_; ++b)
        if (blossomparent_[b] == kNone && blossombase_[b] != kNone && label_[b] == 1 &&
            dualvar_[b] == 0)
          expand_blossom(b, true);
    }

    for (std::size_t v = 0; v < nvertex_; ++v)
      if (mate_[v] != kNone) result[v] = endpoint_[mate_[v]];
    return result;
  }

 private:
  struct Edge {
    std::size_t u, v;
    long long w;
  };
  static constexpr std::size_t kNone = SIZE_MAX;

  long long slack(std::size_t k) const {
    return dualvar_[edges_[k].u] + dualvar_[edges_[k].v] - 2 * edges_[k].w;
  }

  void blossom_leaves(std::size_t b, std::vector<std::size_t>& out) const {
    if (b < nvertex_) {
      out.push_back(b);
    } else {
      for (std::size_t t : blossomchilds_[b]) blossom_leaves(t, out);
    }
  }

  void assign_label(std::size_t w, int t, std::size_t p) {
    std::size_t b = inblossom_[w];
    assert(label_[w] == 0 && label_[b] == 0);
    label_[w] = label_[b] = t;
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = kNone;
    if (t == 1) {
      std::vector<std::size_t> leaves;
      blossom_leaves(b, leaves);
      for (std::size_t l : leaves) queue_.push_back(l);
    } else {
      std::size_t base = blossombase_[b];
      assert(mate_[base] != kNone);
      assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
    }
  }

  std::size_t scan_blossom(std::size_t v, std::size_t w) {
    std::vector<std::size_t> path;
    std::size_t base = kNone;
    while (v != kNone || w != kNone) {
      if (v != kNone) {
        std::size_t b = inblossom_[v];
        if (label_[b] & 4) {
          base = blossombase_[b];
          break;
        }
        assert(label_[b] == 1);
        path.push_back(b);
        label_[b] = 5;
        assert(labelend_[b] == mate_[blossombase_[b]]);
        if (labelend_[b] == kNone) {
          v = kNone;
        } else {
          v = endpoint_[labelend_[b]];
          b = inblossom_[v];
          assert(label_[b] == 2);
          assert(labelend_[b] != kNone);
          v = endpoint_[labelend_[b]];
        }
      }
      if (w != kNone) std::swap(v, w);
    }
    for (std::size_t b : path) label_[b] = 1;
    return base;
  }

  void add_blossom(std::size_t base, std::size_t k) {
    std::size_t v = edges_[k].u, w = edges_[k].v;
    std::size_t bb = inblossom_[base], bv = inblossom_[v], bw = inblossom_[w];
    std::size_t b = unusedblossoms_.back();
    unusedblossoms_.pop_back();
    blossombase_[b] = base;
    blossomparent_[b] = kNone;
    blossomparent_[bb] = b;
    std::vector<std::size_t> path, endps;
    while (bv != bb) {
      blossomparent_[bv] = b;
      path.push_back(bv);
      endps.push_back(labelend_[bv]);
      assert(label_[bv] == 2 || (label_[bv] == 1 && labelend_[bv] == mate_[blossombase_[bv]]));
      assert(labelend_[bv] != kNone);
      v = endpoint_[labelend_[bv]];
      bv = inblossom_[v];
    }
    path.push_back(bb);
    std::reverse(path.begin(), path.end());
    std::reverse(endps.begin(), endps.end());
    endps.push_back(2 * k);
    while (bw != bb) {
      blossomparent_[bw] = b;
      path.push_back(bw);
      endps.push_back(labelend_[bw] ^ 1);
      assert(label_[bw] == 2 || (label_[bw] == 1 && labelend_[bw] == mate_[blossombase_[bw]]));
      assert(labelend_[bw] != kNone);
      w = endpoint_[labelend_[bw]];
      bw = inblossom_[w];
    }
    assert(label_[bb] == 1);
    blossomchilds_[b] = std::move(path);
    blossomendps_[b] = std::move(endps);
    label_[b] = 1;
    labelend_[b] = labelend_[bb];
    dualvar_[b] = 0;
    std::vector<std::size_t> leaves;
    blossom_leaves(b, leaves);
    for (std::size_t l : leaves) {
      if (label_[inblossom_[l]] == 2) queue_.push_back(l);
      inblossom_[l] = b;
    }
    std::vector<std::size_t> bestedgeto(2 * nvertex_, kNone);
    for (std::size_t bv2 : blossomchilds_[b]) {
      std::vector<std::size_t> nblists;
      if (!blossombestedges_[bv2].empty()) {
        nblists = blossombestedges_[bv2];
      } else {
        std::vector<std::size_t> lv;
        blossom_leaves(bv2, lv);
        for (std::size_t l : lv)
          for (std::size_t p : neighbend_[l]) nblists.push_back(p / 2);
      }
      for (std::size_t k2 : nblists) {
        std::size_t i = edges_[k2].u, j = edges_[k2].v;
        if (inblossom_[j] == b) std::swap(i, j);
        std::size_t bj = inblossom_[j];
        if (bj != b && label_[bj] == 1 &&
            (bestedgeto[bj] == kNone || slack(k2) < slack(bestedgeto[bj])))
          bestedgeto[bj] = k2;
      }
      blossombestedges_[bv2].clear();
      bestedge_[bv2] = kNone;
    }
    blossombestedges_[b].clear();
    for (std::size_t k2 : bestedgeto)
      if (k2 != kNone) blossombestedges_[b].push_back(k2);
    bestedge_[b] = kNone;
    for (std::size_t k2 : blossombestedges_[b])
      if (bestedge_[b] == kNone || slack(k2) < slack(bestedge_[b])) bestedge_[b] = k2;
  }

  void expand_blossom(std::size_t b, bool endstage) {
    for (std::size_t s : blossomchilds_[b]) {
      blossomparent_[s] = kNone;
      if (s < nvertex_) {
        inblossom_[s] = s;
      } else if (endstage && dualvar_[s] == 0) {
        expand_blossom(s, endstage);
      } else {
        std::vector<std::size_t> leaves;
        blossom_leaves(s, leaves);
        for (std::size_t l : leaves) inblossom_[l] = s;
      }
    }
    if (!endstage && label_[b] == 2) {
      assert(labelend_[b] != kNone);
      std::size_t entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
      std::size_t nchild = blossomchilds_[b].size();
      std::size_t j = 0;
      while (blossomchilds_[b][j] != entrychild) ++j;
      bool forward = (j & 1) != 0;
      std::size_t endptrick = forward ? 0 : 1;
      // walk from entrychild around to child 0, relabeling alternately
      long long jj = static_cast<long long>(j);
      long long step = forward ? 1 : -1;
      if (forward) jj -= static_cast<long long>(nchild);
      std::size_t p = labelend_[b];
      auto child_at = [&](long long idx) {
        long long m = static_cast<long long>(nchild);
        long long r = ((idx % m) + m) % m;
        return blossomchilds_[b][static_cast<std::size_t>(r)];
      };
      auto endp_at = [&](long long idx) {
        long long m = static_cast<long long>(nchild);
        long long r = ((idx % m) + m) % m;
        return blossomendps_[b][static_cast<std::size_t>(r)];
      };
      while (jj != 0) {
        label_[endpoint_[p ^ 1]] = 0;
        label_[endpoint_[endp_at(jj - static_cast<long long>(endptrick)) ^ endptrick ^ 1]] = 0;
        assign_label(endpoint_[p ^ 1], 2, p);
        allowedge_[endp_at(jj - static_cast<long long>(endptrick)) / 2] = true;
        jj += step;
        p = endp_at(jj - static_cast<long long>(endptrick)) ^ endptrick;
        allowedge_[p / 2] = true;
        jj += step;
      }
      std::size_t bv = child_at(jj);
      label_[endpoint_[p ^ 1]] = label_[bv] = 2;
      labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
      bestedge_[bv] = kNone;
      jj += step;
      while (child_at(jj) != entrychild) {
        std::size_t bv2 = child_at(jj);
        if (label_[bv2] == 1) {
          jj += step;
          continue;
        }
        std::vector<std::size_t> leaves;
        blossom_leaves(bv2, leaves);
        std::size_t vlab = kNone;
        for (std::size_t l : leaves)
          if (label_[l] != 0) {
            vlab = l;
            break;
          }
        if (vlab != kNone) {
          assert(label_[vlab] == 2);
          assert(inblossom_[vlab] == bv2);
          label_[vlab] = 0;
          label_[endpoint_[mate_[blossombase_[bv2]]]] = 0;
          assign_label(vlab, 2, labelend_[vlab]);
        }
        jj += step;
      }
    }
    label_[b] = 0;
    labelend_[b] = kNone;
    blossomchilds_[b].clear();
    blossomendps_[b].clear();
    blossombase_[b] = kNone;
    blossombestedges_[b].clear();
    bestedge_[b] = kNone;
    unusedblossoms_.push_back(b);
  }

  void augment_blossom(std::size_t b, std::size_t v) {
    std::size_t t = v;
    while (blossomparent_[t] != b) t = blossomparent_[t];
    if (t >= nvertex_) augment_blossom(t, v);
    std::size_t nchild = blossomchilds_[b].size();
    std::size_t i = 0;
    while (blossomchilds_[b][i] != t) ++i;
    bool forward = (i & 1) != 0;
    long long jj = static_cast<long long>(i);
    long long step = forward ? 1 : -1;
    std::size_t endptrick = forward ? 0 : 1;
    if (forward) jj -= static_cast<long long>(nchild);
    auto child_at = [&](long long idx) {
      long long m = static_cast<long long>(nchild);
      long long r = ((idx % m) + m) % m;
      return blossomchilds_[b][static_cast<std::size_t>(r)];
    };
    auto endp_at = [&](long long idx) {
      long long m = static_cast<long long>(nchild);
      long long r = ((idx % m) + m) % m;
      return blossomendps_[b][static_cast<std::size_t>(r)];
    };
    while (jj != 0) {
      jj += step;
      std::size_t t2 = child_at(jj);
      std::size_t p = endp_at(jj - static_cast<long long>(endptrick)) ^ endptrick;
      if (t2 >= nvertex_) augment_blossom(t2, endpoint_[p]);
      jj += step;
      t2 = child_at(jj);
      if (t2 >= nvertex_) augment_blossom(t2, endpoint_[p ^ 1]);
      mate_[endpoint_[p]] = p ^ 1;
      mate_[endpoint_[p ^ 1]] = p;
    }
    std::rotate(blossomchilds_[b].begin(), blossomchilds_[b].begin() + i,
                blossomchilds_[b].end());
    std::rotate(blossomendps_[b].begin(), blossomendps_[b].begin() + i,
                blossomendps_[b].end());
    blossombase_[b] = blossombase_[blossomchilds_[b][0]];
    assert(blossombase_[b] == v);
  }

  void augment_matching(std::size_t k) {
    std::size_t v = edges_[k].u, w = edges_[k].v;
    for (auto [s, p] : {std::pair<std::size_t, std::size_t>{v, 2 * k + 1},
                        std::pair<std::size_t, std::size_t>{w, 2 * k}}) {
      for (;;) {
        std::size_t bs = inblossom_[s];
        assert(label_[bs] == 1);
        assert(labelend_[bs] == mate_[blossombase_[bs]]);
        if (bs >= nvertex_) augment_blossom(bs, s);
        mate_[s] = p;
        if (labelend_[bs] == kNone) break;  // reached a free vertex
        std::size_t t = endpoint_[labelend_[bs]];
        std::size_t bt = inblossom_[t];
        assert(label_[bt] == 2);
        assert(labelend_[bt] != kNone);
        s = endpoint_[labelend_[bt]];
        std::size_t j = endpoint_[labelend_[bt] ^ 1];
        assert(blossombase_[bt] == t);
        if (bt >= nvertex_) augment_blossom(bt, j);
        mate_[j] = labelend_[bt];
        p = labelend_[bt] ^ 1;
      }
    }
  }

  std::size_t nvertex_, nedge_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> endpoint_;
  std::vector<std::vector<std::size_t>> neighbend_;
  std::vector<std::size_t> mate_;
  std::vector<int> label_;
  std::vector<std::size_t> labelend_;
  std::vector<std::size_t> inblossom_;
  std::vector<std::size_t> blossomparent_;
  std::vector<std::vector<std::size_t>> blossomchilds_;
  std::vector<std::size_t> blossombase_;
  std::vector<std::vector<std::size_t>> blossomendps_;
  std::vector<std::size_t> bestedge_;
  std::vector<std::vector<std::size_t>> blossombestedges_;
  std::vector<std::size_t> unusedblossoms_;
  std::vector<long long> dualvar_;
  std::vector<bool> allowedge_;
  std::vector<std::size_t> queue_;
};

}  // namespace detail

/// Maximum weight matching over edges with weight > 0.
inline MatchingSet max_weight_matching(const WeightedGraph& g) {
  detail::BlossomMatcher matcher(g);
  std::vector<std::size_t> mate = matcher.solve();
  MatchingSet out;
  for (std::size_t v = 0; v < mate.size(); ++v)
    if (mate[v] != SIZE_MAX && v < mate[v]) out.pairs.emplace_back(v, mate[v]);
  return out;
}

/// Maximum cardinality bipartite matching (augmenting paths). Pairs are
/// (left index, right index).
inline MatchingSet max_bipartite_matching(const BipartiteGraph& g) {
  std::vector<std::size_t> match_right(g.right_count, SIZE_MAX);
  std::vector<bool> visited;

  auto try_augment = [&](auto&& self, std::size_t u) -> bool {
    for (std::size_t c = 0; c < g.right_count; ++c) {
      if (!g.adjacency.get(u, c) || visited[c]) continue;
      visited[c] = true;
      if (match_right[c] == SIZE_MAX || self(self, match_right[c])) {
        match_right[c] = u;
        return true;
      }
    }
    return false;
  };

  for (std::size_t u = 0; u < g.left_count; ++u) {
    visited.assign(g.right_count, false);
    try_augment(try_augment, u);
  }
  MatchingSet out;
  for (std::size_t c = 0; c < g.right_count; ++c)
    if (match_right[c] != SIZE_MAX) out.pairs.emplace_back(match_right[c], c);
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

/// Decompose the edges of a bipartite graph into exactly Delta matchings
/// (Delta = maximum degree; Koenig edge coloring via alternating-path
/// recoloring). Empty graph yields an empty list.
inline std::vector<MatchingSet> edge_color_bipartite(const BipartiteGraph& g) {
  std::size_t delta = 0;
  for (std::size_t r = 0; r < g.left_count; ++r)
    delta = std::max(delta, g.adjacency.row_weight(r));
  for (std::size_t c = 0; c < g.right_count; ++c)
    delta = std::max(delta, g.adjacency.col_weight(c));
  std::vector<MatchingSet> colors(delta);
  if (delta == 0) return colors;

  // color -> partner maps; SIZE_MAX = free
  std::vector<std::vector<std::size_t>> left_at(g.left_count,
                                                std::vector<std::size_t>(delta, SIZE_MAX));
  std::vector<std::vector<std::size_t>> right_at(g.right_count,
                                                 std::vector<std::size_t>(delta, SIZE_MAX));
  auto free_color = [&](const std::vector<std::size_t>& at) {
    for (std::size_t c = 0; c < at.size(); ++c)
      if (at[c] == SIZE_MAX) return c;
    assert(false);
    return SIZE_MAX;
  };

  for (std::size_t u = 0; u < g.left_count; ++u) {
    for (std::size_t v = 0; v < g.right_count; ++v) {
      if (!g.adjacency.get(u, v)) continue;
      std::size_t a = free_color(left_at[u]);
      if (right_at[v][a] != SIZE_MAX) {
        // Free color a at v by flipping the a/b alternating path from v.
        // The path cannot reach u (it would have to enter through an a-edge,
        // and a is free at u), so a stays free at u.
        std::size_t b = free_color(right_at[v]);
        struct PathEdge {
          std::size_t left, right, color;
        };
        std::vector<PathEdge> path;
        std::size_t cur = v;
        bool on_right = true;
        std::size_t want = a;
        for (;;) {
          std::size_t partner = on_right ? right_at[cur][want] : left_at[cur][want];
          if (partner == SIZE_MAX) break;
          path.push_back(on_right ? PathEdge{partner, cur, want}
                                  : PathEdge{cur, partner, want});
          cur = partner;
          on_right = !on_right;
          want = (want == a) ? b : a;
        }
        for (const PathEdge& e : path) {
          left_at[e.left][e.color] = SIZE_MAX;
          right_at[e.right][e.color] = SIZE_MAX;
        }
        for (const PathEdge& e : path) {
          std::size_t flipped = (e.color == a) ? b : a;
          left_at[e.left][flipped] = e.right;
          right_at[e.right][flipped] = e.left;
        }
      }
      assert(right_at[v][a] == SIZE_MAX);
      left_at[u][a] = v;
      right_at[v][a] = u;
    }
  }

  for (std::size_t u = 0; u < g.left_count; ++u)
    for (std::size_t c = 0; c < delta; ++c)
      if (left_at[u][c] != SIZE_MAX) colors[c].pairs.emplace_back(u, left_at[u][c]);
  return colors;
}

}  // namespace cnot
