#pragma once

// Maximum-weight matching in general graphs (Edmonds' blossom algorithm,
// primal-dual formulation with O(n^3) total work).
//
// Weights must be integral: with doubled vertex duals every slack stays an
// integer and every S-S slack stays even, so no rounding ever happens.
// `Weight` is any signed integer type (int64_t, __int128).

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <utility>
#include <vector>

#include "isltopo/error.hpp"

namespace isltopo {

template <class Weight>
struct MatchingEdge {
  int u = 0;
  int v = 0;
  Weight weight = 0;
};

/// mate[v] is the vertex matched to v, or -1.
template <class Weight>
class MaxWeightMatching {
 public:
  MaxWeightMatching(int n_vertices, std::vector<MatchingEdge<Weight>> edges)
      : nv_(n_vertices), edges_(std::move(edges)) {
    for (const auto& e : edges_)
      if (e.u < 0 || e.v < 0 || e.u >= nv_ || e.v >= nv_ || e.u == e.v)
        throw ArgumentError("matching edge endpoint out of range or self-loop");
  }

  std::vector<int> solve() {
    const int ne = static_cast<int>(edges_.size());
    std::vector<int> result(static_cast<std::size_t>(nv_), -1);
    if (ne == 0 || nv_ == 0) return result;

    Weight maxweight = 0;
    for (const auto& e : edges_) maxweight = std::max(maxweight, e.weight);

    endpoint_.resize(2 * static_cast<std::size_t>(ne));
    for (int p = 0; p < 2 * ne; ++p) endpoint_[p] = (p % 2 == 0) ? edges_[p / 2].u : edges_[p / 2].v;
    neighbend_.assign(static_cast<std::size_t>(nv_), {});
    for (int k = 0; k < ne; ++k) {
      neighbend_[edges_[k].u].push_back(2 * k + 1);
      neighbend_[edges_[k].v].push_back(2 * k);
    }
    const int n2 = 2 * nv_;
    mate_.assign(static_cast<std::size_t>(nv_), -1);
    label_.assign(static_cast<std::size_t>(n2), 0);
    labelend_.assign(static_cast<std::size_t>(n2), -1);
    inblossom_.resize(static_cast<std::size_t>(nv_));
    for (int v = 0; v < nv_; ++v) inblossom_[v] = v;
    blossomparent_.assign(static_cast<std::size_t>(n2), -1);
    blossomchilds_.assign(static_cast<std::size_t>(n2), {});
    blossombase_.assign(static_cast<std::size_t>(n2), -1);
    for (int v = 0; v < nv_; ++v) blossombase_[v] = v;
    blossomendps_.assign(static_cast<std::size_t>(n2), {});
    bestedge_.assign(static_cast<std::size_t>(n2), -1);
    blossombestedges_.assign(static_cast<std::size_t>(n2), {});
    has_bestedges_.assign(static_cast<std::size_t>(n2), false);
    unusedblossoms_.clear();
    for (int b = n2 - 1; b >= nv_; --b) unusedblossoms_.push_back(b);
    dualvar_.assign(static_cast<std::size_t>(n2), 0);
    for (int v = 0; v < nv_; ++v) dualvar_[v] = maxweight;
    allowedge_.assign(static_cast<std::size_t>(ne), false);
    queue_.clear();

    for (int stage = 0; stage < nv_; ++stage) {
      std::fill(label_.begin(), label_.end(), 0);
      std::fill(bestedge_.begin(), bestedge_.end(), -1);
      for (int b = nv_; b < n2; ++b) {
        blossombestedges_[b].clear();
        has_bestedges_[b] = false;
      }
      std::fill(allowedge_.begin(), allowedge_.end(), false);
      queue_.clear();
      for (int v = 0; v < nv_; ++v)
        if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);

      bool augmented = false;
      for (;;) {
        while (!queue_.empty() && !augmented) {
          const int v = queue_.back();
          queue_.pop_back();
          for (int p : neighbend_[v]) {
            const int k = p / 2;
            const int w = endpoint_[p];
            if (inblossom_[v] == inblossom_[w]) continue;
            Weight kslack = 0;
            if (!allowedge_[k]) {
              kslack = slack(k);
              if (kslack <= 0) allowedge_[k] = true;
            }
            if (allowedge_[k]) {
              if (label_[inblossom_[w]] == 0) {
                assign_label(w, 2, p ^ 1);
              } else if (label_[inblossom_[w]] == 1) {
                const int base = scan_blossom(v, w);
                if (base >= 0) {
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
              const int b = inblossom_[v];
              if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
            } else if (label_[w] == 0) {
              if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
            }
          }
        }
        if (augmented) break;

        // Dual adjustment.
        int deltatype = 1;
        Weight delta = *std::min_element(dualvar_.begin(), dualvar_.begin() + nv_);
        int deltaedge = -1, deltablossom = -1;
        for (int v = 0; v < nv_; ++v) {
          if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
            const Weight d = slack(bestedge_[v]);
            if (d < delta) {
              delta = d;
              deltatype = 2;
              deltaedge = bestedge_[v];
            }
          }
        }
        for (int b = 0; b < n2; ++b) {
          if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
            const Weight ks = slack(bestedge_[b]);
            assert(ks % 2 == 0);
            const Weight d = ks / 2;
            if (d < delta) {
              delta = d;
              deltatype = 3;
              deltaedge = bestedge_[b];
            }
          }
        }
        for (int b = nv_; b < n2; ++b) {
          if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 && dualvar_[b] < delta) {
            delta = dualvar_[b];
            deltatype = 4;
            deltablossom = b;
          }
        }
        for (int v = 0; v < nv_; ++v) {
          if (label_[inblossom_[v]] == 1) dualvar_[v] -= delta;
          else if (label_[inblossom_[v]] == 2) dualvar_[v] += delta;
        }
        for (int b = nv_; b < n2; ++b) {
          if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
            if (label_[b] == 1) dualvar_[b] += delta;
            else if (label_[b] == 2) dualvar_[b] -= delta;
          }
        }
        if (deltatype == 1) {
          break;
        } else if (deltatype == 2) {
          allowedge_[deltaedge] = true;
          int i = edges_[deltaedge].u, j = edges_[deltaedge].v;
          if (label_[inblossom_[i]] == 0) std::swap(i, j);
          queue_.push_back(i);
        } else if (deltatype == 3) {
          allowedge_[deltaedge] = true;
          queue_.push_back(edges_[deltaedge].u);
        } else {
          expand_blossom(deltablossom, false);
        }
      }
      if (!augmented) break;

      for (int b = nv_; b < n2; ++b)
        if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 && dualvar_[b] == 0)
          expand_blossom(b, true);
    }

    for (int v = 0; v < nv_; ++v)
      if (mate_[v] >= 0) result[v] = endpoint_[mate_[v]];
    return result;
  }

 private:
  Weight slack(int k) const {
    const auto& e = edges_[k];
    return dualvar_[e.u] + dualvar_[e.v] - 2 * e.weight;
  }

  template <class F>
  void for_leaves(int b, F&& f) const {
    if (b < nv_) {
      f(b);
      return;
    }
    for (int t : blossomchilds_[b]) for_leaves(t, f);
  }

  std::vector<int> leaves(int b) const {
    std::vector<int> out;
    for_leaves(b, [&](int v) { out.push_back(v); });
    return out;
  }

  void assign_label(int w, int t, int p) {
    const int b = inblossom_[w];
    label_[w] = label_[b] = t;
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = -1;
    if (t == 1) {
      for_leaves(b, [&](int v) { queue_.push_back(v); });
    } else if (t == 2) {
      const int base = blossombase_[b];
      assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
    }
  }

  int scan_blossom(int v, int w) {
    std::vector<int> path;
    int base = -1;
    while (v != -1 || w != -1) {
      int b = inblossom_[v];
      if (label_[b] & 4) {
        base = blossombase_[b];
        break;
      }
      path.push_back(b);
      label_[b] = 5;
      if (labelend_[b] == -1) {
        v = -1;
      } else {
        v = endpoint_[labelend_[b]];
        b = inblossom_[v];
        v = endpoint_[labelend_[b]];
      }
      if (w != -1) std::swap(v, w);
    }
    for (int b : path) label_[b] = 1;
    return base;
  }

  void add_blossom(int base, int k) {
    int v = edges_[k].u, w = edges_[k].v;
    const int bb = inblossom_[base];
    int bv = inblossom_[v];
    int bw = inblossom_[w];
    const int b = unusedblossoms_.back();
    unusedblossoms_.pop_back();
    blossombase_[b] = base;
    blossomparent_[b] = -1;
    blossomparent_[bb] = b;
    auto& path = blossomchilds_[b];
    auto& endps = blossomendps_[b];
    path.clear();
    endps.clear();
    while (bv != bb) {
      blossomparent_[bv] = b;
      path.push_back(bv);
      endps.push_back(labelend_[bv]);
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
      w = endpoint_[labelend_[bw]];
      bw = inblossom_[w];
    }
    label_[b] = 1;
    labelend_[b] = labelend_[bb];
    dualvar_[b] = 0;
    for_leaves(b, [&](int leaf) {
      if (label_[inblossom_[leaf]] == 2) queue_.push_back(leaf);
      inblossom_[leaf] = b;
    });

    std::vector<int> bestedgeto(2 * static_cast<std::size_t>(nv_), -1);
    for (int sub : path) {
      auto consider = [&](int kk) {
        int i = edges_[kk].u, j = edges_[kk].v;
        if (inblossom_[j] == b) std::swap(i, j);
        const int bj = inblossom_[j];
        if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj])))
          bestedgeto[bj] = kk;
      };
      if (!has_bestedges_[sub]) {
        for_leaves(sub, [&](int leaf) {
          for (int p : neighbend_[leaf]) consider(p / 2);
        });
      } else {
        for (int kk : blossombestedges_[sub]) consider(kk);
      }
      blossombestedges_[sub].clear();
      has_bestedges_[sub] = false;
      bestedge_[sub] = -1;
    }
    auto& best = blossombestedges_[b];
    best.clear();
    for (int kk : bestedgeto)
      if (kk != -1) best.push_back(kk);
    has_bestedges_[b] = true;
    bestedge_[b] = -1;
    for (int kk : best)
      if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) bestedge_[b] = kk;
  }

  static int wrap(int j, int len) { return ((j % len) + len) % len; }

  void expand_blossom(int b, bool endstage) {
    const std::vector<int> childs = blossomchilds_[b];
    for (int s : childs) {
      blossomparent_[s] = -1;
      if (s < nv_) {
        inblossom_[s] = s;
      } else if (endstage && dualvar_[s] == 0) {
        expand_blossom(s, endstage);
      } else {
        for_leaves(s, [&](int v) { inblossom_[v] = s; });
      }
    }
    if (!endstage && label_[b] == 2) {
      const auto& ch = blossomchilds_[b];
      const auto& ep = blossomendps_[b];
      const int len = static_cast<int>(ch.size());
      const int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
      int j = static_cast<int>(std::find(ch.begin(), ch.end(), entrychild) - ch.begin());
      int jstep, endptrick;
      if (j & 1) {
        j -= len;
        jstep = 1;
        endptrick = 0;
      } else {
        jstep = -1;
        endptrick = 1;
      }
      int p = labelend_[b];
      while (j != 0) {
        label_[endpoint_[p ^ 1]] = 0;
        label_[endpoint_[ep[wrap(j - endptrick, len)] ^ endptrick ^ 1]] = 0;
        assign_label(endpoint_[p ^ 1], 2, p);
        allowedge_[ep[wrap(j - endptrick, len)] / 2] = true;
        j += jstep;
        p = ep[wrap(j - endptrick, len)] ^ endptrick;
        allowedge_[p / 2] = true;
        j += jstep;
      }
      const int bv0 = ch[wrap(j, len)];
      label_[endpoint_[p ^ 1]] = label_[bv0] = 2;
      labelend_[endpoint_[p ^ 1]] = labelend_[bv0] = p;
      bestedge_[bv0] = -1;
      j += jstep;
      while (ch[wrap(j, len)] != entrychild) {
        const int bv = ch[wrap(j, len)];
        if (label_[bv] == 1) {
          j += jstep;
          continue;
        }
        int found = -1;
        for (int v : leaves(bv))
          if (label_[v] != 0) {
            found = v;
            break;
          }
        if (found >= 0) {
          label_[found] = 0;
          label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
          assign_label(found, 2, labelend_[found]);
        }
        j += jstep;
      }
    }
    label_[b] = labelend_[b] = -1;
    blossomchilds_[b].clear();
    blossomendps_[b].clear();
    blossombase_[b] = -1;
    blossombestedges_[b].clear();
    has_bestedges_[b] = false;
    bestedge_[b] = -1;
    unusedblossoms_.push_back(b);
  }

  void augment_blossom(int b, int v) {
    int t = v;
    while (blossomparent_[t] != b) t = blossomparent_[t];
    if (t >= nv_) augment_blossom(t, v);
    auto& ch = blossomchilds_[b];
    auto& ep = blossomendps_[b];
    const int len = static_cast<int>(ch.size());
    const int i = static_cast<int>(std::find(ch.begin(), ch.end(), t) - ch.begin());
    int j = i;
    int jstep, endptrick;
    if (i & 1) {
      j -= len;
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    while (j != 0) {
      j += jstep;
      t = ch[wrap(j, len)];
      const int p = ep[wrap(j - endptrick, len)] ^ endptrick;
      if (t >= nv_) augment_blossom(t, endpoint_[p]);
      j += jstep;
      t = ch[wrap(j, len)];
      if (t >= nv_) augment_blossom(t, endpoint_[p ^ 1]);
      mate_[endpoint_[p]] = p ^ 1;
      mate_[endpoint_[p ^ 1]] = p;
    }
    std::rotate(ch.begin(), ch.begin() + i, ch.end());
    std::rotate(ep.begin(), ep.begin() + i, ep.end());
    blossombase_[b] = blossombase_[ch[0]];
  }

  void augment_matching(int k) {
    const int v = edges_[k].u, w = edges_[k].v;
    for (auto [s, p] : {std::pair{v, 2 * k + 1}, std::pair{w, 2 * k}}) {
      for (;;) {
        const int bs = inblossom_[s];
        if (bs >= nv_) augment_blossom(bs, s);
        mate_[s] = p;
        if (labelend_[bs] == -1) break;
        const int t = endpoint_[labelend_[bs]];
        const int bt = inblossom_[t];
        s = endpoint_[labelend_[bt]];
        const int j = endpoint_[labelend_[bt] ^ 1];
        if (bt >= nv_) augment_blossom(bt, j);
        mate_[j] = labelend_[bt];
        p = labelend_[bt] ^ 1;
      }
    }
  }

  int nv_;
  std::vector<MatchingEdge<Weight>> edges_;
  std::vector<int> endpoint_;
  std::vector<std::vector<int>> neighbend_;
  std::vector<int> mate_;
  std::vector<int> label_;
  std::vector<int> labelend_;
  std::vector<int> inblossom_;
  std::vector<int> blossomparent_;
  std::vector<std::vector<int>> blossomchilds_;
  std::vector<int> blossombase_;
  std::vector<std::vector<int>> blossomendps_;
  std::vector<int> bestedge_;
  std::vector<std::vector<int>> blossombestedges_;
  std::vector<bool> has_bestedges_;
  std::vector<int> unusedblossoms_;
  std::vector<Weight> dualvar_;
  std::vector<bool> allowedge_;
  std::vector<int> queue_;
};

template <class Weight>
std::vector<int> max_weight_matching(int n_vertices, std::vector<MatchingEdge<Weight>> edges) {
  return MaxWeightMatching<Weight>(n_vertices, std::move(edges)).solve();
}

}  // namespace isltopo
