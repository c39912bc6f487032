#ifndef POTTS_UNIONFIND_HPP
#define POTTS_UNIONFIND_HPP

#include <numeric>
#include <vector>

namespace potts {

class UnionFind {
 public:
  explicit UnionFind(int n) : id_(n), sz_(n, 1), count_(n) {
    std::iota(id_.begin(), id_.end(), 0);
  }

  int find(int p) {
    int root = p;
    while (root != id_[root]) root = id_[root];
    while (p != root) {
      int next = id_[p];
      id_[p] = root;
      p = next;
    }
    return root;
  }

  void merge(int a, int b) {
    int ra = find(a), rb = find(b);
    if (ra == rb) return;
    if (sz_[ra] < sz_[rb]) std::swap(ra, rb);
    id_[rb] = ra;
    sz_[ra] += sz_[rb];
    --count_;
  }

  bool connected(int a, int b) { return find(a) == find(b); }
  int count() const { return count_; }
  int size(int a) { return sz_[find(a)]; }

  void reset() {
    std::iota(id_.begin(), id_.end(), 0);
    std::fill(sz_.begin(), sz_.end(), 1);
    count_ = static_cast<int>(id_.size());
  }

 private:
  std::vector<int> id_;
  std::vector<int> sz_;
  int count_;
};

}  // namespace potts

#endif
