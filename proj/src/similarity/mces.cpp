//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "msbench/similarity/mces.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <tuple>
#include <vector>

namespace msbench::similarity {
namespace {

using Clock = std::chrono::steady_clock;
using chem::Molecule;

struct Edge {
  int u;
  int v;
  int zu;
  int zv;
  int label;
};

std::vector<Edge> edges_of(const Molecule &m) {
  std::vector<Edge> out;
  out.reserve(m.num_bonds());
  for (int b = 0; b < m.num_bonds(); ++b) {
    const chem::Bond &bond = m.bond(b);
    out.push_back({ bond.begin, bond.end, m.atom(bond.begin).element.atomic_number(),
                    m.atom(bond.end).element.atomic_number(),
                    static_cast<int>(m.bond_label(b)) });
  }
  return out;
}

using LabelKey = std::tuple<int, int, int>;

LabelKey label_key(const Edge &e) {
  return { e.label, std::min(e.zu, e.zv), std::max(e.zu, e.zv) };
}

// One vertex of the modular product: A-edge i matched to B-edge j with a
// fixed endpoint orientation.
struct Pairing {
  int i;
  int j;
  int a0, b0;  // a0 -> b0
  int a1, b1;  // a1 -> b1
};

bool consistent(int x, int y, int x2, int y2) {
  return (x == x2) == (y == y2);
}

bool compatible(const Pairing &p, const Pairing &q) {
  if (p.i == q.i || p.j == q.j)
    return false;
  return consistent(p.a0, p.b0, q.a0, q.b0) && consistent(p.a0, p.b0, q.a1, q.b1)
         && consistent(p.a1, p.b1, q.a0, q.b0) && consistent(p.a1, p.b1, q.a1, q.b1);
}

class Bits {
public:
  explicit Bits(int words = 0): w_(words, 0) { }
  void set(int i) { w_[i >> 6] |= std::uint64_t { 1 } << (i & 63); }
  void reset(int i) { w_[i >> 6] &= ~(std::uint64_t { 1 } << (i & 63)); }
  bool any() const {
    return std::any_of(w_.begin(), w_.end(), [](std::uint64_t x) { return x != 0; });
  }
  int first() const {
    for (std::size_t k = 0; k < w_.size(); ++k) {
      if (w_[k])
        return static_cast<int>(k * 64) + std::countr_zero(w_[k]);
    }
    return -1;
  }
  void and_not(const std::uint64_t *other) {
    for (std::size_t k = 0; k < w_.size(); ++k)
      w_[k] &= ~other[k];
  }
  template <typename F>
  void for_each(F &&f) const {
    for (std::size_t k = 0; k < w_.size(); ++k) {
      for (std::uint64_t x = w_[k]; x; x &= x - 1)
        f(static_cast<int>(k * 64) + std::countr_zero(x));
    }
  }
  void assign_and(const Bits &a, const std::uint64_t *b) {
    for (std::size_t k = 0; k < w_.size(); ++k)
      w_[k] = a.w_[k] & b[k];
  }

private:
  std::vector<std::uint64_t> w_;
};

// Branch-and-bound maximum clique with greedy coloring bounds.
class CliqueSearch {
public:
  // `edge_a`/`edge_b` give each vertex's A-edge and B-edge; `klass` its
  // label class. A clique holds each edge at most once.
  CliqueSearch(int n, std::vector<std::uint64_t> adj, int words, int ceiling,
               Clock::time_point deadline, std::vector<int> edge_a,
               std::vector<int> edge_b, std::vector<int> klass, int num_a,
               int num_b, int num_classes)
      : n_(n), words_(words), adj_(std::move(adj)), ceiling_(ceiling),
        deadline_(deadline), edge_a_(std::move(edge_a)), edge_b_(std::move(edge_b)),
        klass_(std::move(klass)), seen_a_(num_a, 0), seen_b_(num_b, 0),
        class_a_(num_classes, 0), class_b_(num_classes, 0) { }

  void seed(int size) { best_ = std::max(best_, size); }

  void run() {
    if (best_ >= ceiling_ || n_ == 0)
      return;
    Bits all(words_);
    for (int v = 0; v < n_; ++v)
      all.set(v);
    expand(0, all);
  }

  int best() const { return best_; }
  bool timed_out() const { return timed_out_; }

private:
  const std::uint64_t *row(int v) const { return adj_.data() + static_cast<std::size_t>(v) * words_; }

  bool stop() {
    if (timed_out_ || best_ >= ceiling_)
      return true;
    if ((++nodes_ & 255) == 0 && Clock::now() > deadline_)
      timed_out_ = true;
    return timed_out_;
  }

  // Sum over label classes of min(distinct A-edges, distinct B-edges) in p.
  int edge_bound(const Bits &p) {
    ++stamp_;
    std::fill(class_a_.begin(), class_a_.end(), 0);
    std::fill(class_b_.begin(), class_b_.end(), 0);
    p.for_each([&](int v) {
      if (seen_a_[edge_a_[v]] != stamp_) {
        seen_a_[edge_a_[v]] = stamp_;
        ++class_a_[klass_[v]];
      }
      if (seen_b_[edge_b_[v]] != stamp_) {
        seen_b_[edge_b_[v]] = stamp_;
        ++class_b_[klass_[v]];
      }
    });
    int bound = 0;
    for (std::size_t c = 0; c < class_a_.size(); ++c)
      bound += std::min(class_a_[c], class_b_[c]);
    return bound;
  }

  void expand(int size, Bits &p) {
    if (stop() || size + edge_bound(p) <= best_)
      return;
    std::vector<int> order;
    std::vector<int> color;
    {
      Bits q = p;
      int c = 0;
      while (q.any()) {
        ++c;
        Bits qc = q;
        while (qc.any()) {
          const int v = qc.first();
          qc.reset(v);
          q.reset(v);
          qc.and_not(row(v));
          order.push_back(v);
          color.push_back(c);
        }
      }
    }
    Bits next(words_);
    for (int k = static_cast<int>(order.size()) - 1; k >= 0; --k) {
      if (size + color[k] <= best_ || stop())
        return;
      const int v = order[k];
      next.assign_and(p, row(v));
      if (!next.any()) {
        best_ = std::max(best_, size + 1);
      } else {
        expand(size + 1, next);
      }
      p.reset(v);
    }
  }

  int n_;
  int words_;
  std::vector<std::uint64_t> adj_;
  int ceiling_;
  Clock::time_point deadline_;
  std::vector<int> edge_a_;
  std::vector<int> edge_b_;
  std::vector<int> klass_;
  std::vector<unsigned> seen_a_;
  std::vector<unsigned> seen_b_;
  std::vector<int> class_a_;
  std::vector<int> class_b_;
  unsigned stamp_ = 0;
  int best_ = 0;
  long nodes_ = 0;
  bool timed_out_ = false;
};

} // namespace

int mces_upper_bound(const Molecule &a, const Molecule &b) {
  std::map<LabelKey, int> ca, cb;
  for (const Edge &e: edges_of(a))
    ++ca[label_key(e)];
  for (const Edge &e: edges_of(b))
    ++cb[label_key(e)];
  int bound = 0;
  for (const auto &[key, n]: ca) {
    auto it = cb.find(key);
    if (it != cb.end())
      bound += std::min(n, it->second);
  }
  return bound;
}

double mces_dissimilarity_for(const Molecule &a, const Molecule &b, int common_edges) {
  const int denom = std::max(a.num_bonds(), b.num_bonds());
  if (denom == 0) {
    const bool same_atom = a.num_atoms() == 1 && b.num_atoms() == 1
                           && a.atom(0).element == b.atom(0).element;
    return same_atom ? 0.0 : 1.0;
  }
  return 1.0 - static_cast<double>(common_edges) / denom;
}

McesResult mces(const Molecule &a, const Molecule &b, Budget budget) {
  const auto deadline =
      Clock::now() + std::chrono::duration_cast<Clock::duration>(budget);
  McesResult result;
  const int ceiling = mces_upper_bound(a, b);
  if (ceiling == 0) {
    result.dissimilarity = mces_dissimilarity_for(a, b, 0);
    return result;
  }

  const std::vector<Edge> ea = edges_of(a);
  const std::vector<Edge> eb = edges_of(b);
  std::vector<Pairing> verts;
  for (int i = 0; i < static_cast<int>(ea.size()); ++i) {
    for (int j = 0; j < static_cast<int>(eb.size()); ++j) {
      const Edge &x = ea[i];
      const Edge &y = eb[j];
      if (x.label != y.label)
        continue;
      if (x.zu == y.zu && x.zv == y.zv)
        verts.push_back({ i, j, x.u, y.u, x.v, y.v });
      if (x.zu == y.zv && x.zv == y.zu)
        verts.push_back({ i, j, x.u, y.v, x.v, y.u });
    }
  }

  const int n = static_cast<int>(verts.size());
  // Degree-descending order helps the coloring bound.
  std::vector<std::vector<int>> nbrs(n);
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      if (compatible(verts[p], verts[q])) {
        nbrs[p].push_back(q);
        nbrs[q].push_back(p);
      }
    }
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return nbrs[x].size() > nbrs[y].size();
  });
  std::vector<int> pos(n);
  for (int k = 0; k < n; ++k)
    pos[order[k]] = k;

  const int words = (n + 63) / 64;
  std::vector<std::uint64_t> adj(static_cast<std::size_t>(n) * words, 0);
  for (int p = 0; p < n; ++p) {
    for (const int q: nbrs[p]) {
      const int r = pos[p];
      const int s = pos[q];
      adj[static_cast<std::size_t>(r) * words + (s >> 6)] |= std::uint64_t { 1 } << (s & 63);
    }
  }

  // Greedy clique in degree order as the initial bound.
  int greedy = 0;
  {
    std::vector<int> chosen;
    for (int k = 0; k < n; ++k) {
      const bool ok = std::all_of(chosen.begin(), chosen.end(), [&](int c) {
        return (adj[static_cast<std::size_t>(k) * words + (c >> 6)] >> (c & 63)) & 1;
      });
      if (ok)
        chosen.push_back(k);
    }
    greedy = static_cast<int>(chosen.size());
  }

  std::map<LabelKey, int> classes;
  std::vector<int> edge_a(n), edge_b(n), klass(n);
  for (int k = 0; k < n; ++k) {
    const Pairing &p = verts[order[k]];
    edge_a[k] = p.i;
    edge_b[k] = p.j;
    klass[k] = classes.emplace(label_key(ea[p.i]), static_cast<int>(classes.size()))
                   .first->second;
  }
  CliqueSearch search(n, std::move(adj), words, ceiling, deadline, std::move(edge_a),
                      std::move(edge_b), std::move(klass), static_cast<int>(ea.size()),
                      static_cast<int>(eb.size()), static_cast<int>(classes.size()));
  search.seed(greedy);
  search.run();

  result.common_edges = search.best();
  result.optimal = !search.timed_out();
  result.dissimilarity = mces_dissimilarity_for(a, b, result.common_edges);
  return result;
}

double mces_dissimilarity(const Molecule &a, const Molecule &b, Budget budget) {
  return mces(a, b, budget).dissimilarity;
}

} // namespace msbench::similarity
