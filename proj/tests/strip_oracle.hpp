#ifndef POTTS_TESTS_STRIP_ORACLE_HPP
#define POTTS_TESTS_STRIP_ORACLE_HPP

// Exact transfer enumeration of point-to-point connectivity for Bernoulli
// bond percolation on a width-3 strip. Test-only oracle for the surface
// tension fit: tau_strip = -(1/k) d log mu, independent of the Monte Carlo
// path it checks.

#include <array>
#include <cmath>
#include <map>
#include <vector>

namespace strip_oracle {

// frontier state: partition of the 3 column sites (block id per site,
// normalized) plus a source flag per block
struct State {
  std::array<int, 3> block;
  std::array<bool, 3> source;  // per site: its block touches the source
  bool operator<(const State& o) const {
    if (block != o.block) return block < o.block;
    return source < o.source;
  }
};

inline State normalize(std::array<int, 3> blk, std::array<bool, 3> src) {
  std::array<int, 3> remap{-1, -1, -1};
  int next = 0;
  State s{};
  for (int i = 0; i < 3; ++i) {
    if (remap[blk[i]] < 0) remap[blk[i]] = next++;
    s.block[i] = remap[blk[i]];
  }
  // source flags live on blocks: propagate within the new labels
  std::array<bool, 3> bsrc{false, false, false};
  for (int i = 0; i < 3; ++i)
    if (src[i]) bsrc[s.block[i]] = true;
  for (int i = 0; i < 3; ++i) s.source[i] = bsrc[s.block[i]];
  return s;
}

// probability that (0, mid) is connected to (k, mid) within columns [0, k]
inline double connectivity(double p, int k) {
  std::map<State, double> dist;
  // column 0: vertical edges only, source = middle site
  for (int v = 0; v < 4; ++v) {
    double w = 1.0;
    std::array<int, 3> blk{0, 1, 2};
    for (int e = 0; e < 2; ++e) {
      if (v & (1 << e)) {
        w *= p;
        int a = blk[e], b = blk[e + 1];
        for (int i = 0; i < 3; ++i)
          if (blk[i] == b) blk[i] = a;
      } else {
        w *= 1.0 - p;
      }
    }
    std::array<bool, 3> src{};
    for (int i = 0; i < 3; ++i) src[i] = blk[i] == blk[1];
    dist[normalize(blk, src)] += w;
  }
  for (int col = 1; col <= k; ++col) {
    std::map<State, double> next;
    for (const auto& [st, prob] : dist) {
      for (int h = 0; h < 8; ++h) {     // horizontal edges to the new column
        for (int v = 0; v < 4; ++v) {   // vertical edges within it
          double w = prob;
          // union-find over 3 old blocks + 3 new sites (ids 0..2 old, 3..5 new)
          std::array<int, 6> uf{0, 1, 2, 3, 4, 5};
          auto find = [&](int x) {
            while (uf[x] != x) x = uf[x] = uf[uf[x]];
            return x;
          };
          auto merge = [&](int a, int b) { uf[find(a)] = find(b); };
          for (int i = 0; i < 3; ++i)
            if (st.block[i] != i) merge(i, st.block[i]);
          for (int e = 0; e < 3; ++e) {
            if (h & (1 << e)) {
              w *= p;
              merge(e, 3 + e);
            } else {
              w *= 1.0 - p;
            }
          }
          for (int e = 0; e < 2; ++e) {
            if (v & (1 << e)) {
              w *= p;
              merge(3 + e, 4 + e);
            } else {
              w *= 1.0 - p;
            }
          }
          std::array<int, 3> blk;
          std::array<bool, 3> src{};
          std::map<int, int> ids;
          for (int i = 0; i < 3; ++i) {
            int r = find(3 + i);
            if (!ids.count(r)) ids[r] = static_cast<int>(ids.size());
            blk[i] = ids[r];
          }
          for (int i = 0; i < 3; ++i) {
            // the new site inherits the source flag if its root matches a
            // flagged old block
            for (int o = 0; o < 3; ++o)
              if (st.source[o] && find(o) == find(3 + i)) src[i] = true;
          }
          next[normalize(blk, src)] += w;
        }
      }
    }
    dist.swap(next);
  }
  double mu = 0.0;
  for (const auto& [st, prob] : dist)
    if (st.source[1]) mu += prob;
  return mu;
}

inline double strip_tau(double p) {
  double mu8 = connectivity(p, 8);
  double mu16 = connectivity(p, 16);
  return -(std::log(mu16) - std::log(mu8)) / 8.0;
}

}  // namespace strip_oracle

#endif
