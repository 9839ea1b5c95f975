// Balls in the Cayley 2-complex of a C'(1/6) presentation, and an unbounded
// complex whose vertices are interned on demand.

#ifndef CDIM_CAYLEY_HPP_
#define CDIM_CAYLEY_HPP_

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dehn.hpp"
#include "words.hpp"

namespace cdim {

  struct BallCell {
    std::vector<size_t> cycle;  // cycle[t] -> cycle[t+1] reads relator[offset + t]
    size_t              relator     = 0;
    int                 orientation = 1;
    size_t              offset      = 0;
  };

  class ball_cap_exceeded : public cdim_error {
   public:
    ball_cap_exceeded(size_t completed, size_t cap)
        : cdim_error("ball exceeds " + std::to_string(cap)
                     + " vertices; complete up to radius "
                     + std::to_string(completed)),
          completed_radius(completed) {}
    size_t completed_radius;
  };

  class BallComplex {
   public:
    Presentation                     presentation;
    size_t                           radius = 0;
    std::vector<word_type>           words;  // shortlex-least geodesics
    std::vector<size_t>              dist;
    std::vector<std::vector<long>>   adj;  // adj[v][letter_rank(x)], -1 if outside
    std::vector<BallCell>            cells;
    std::vector<std::vector<size_t>> cells_at;

    size_t size() const noexcept {
      return words.size();
    }

    // Every 2-cell through a vertex at distance <= this is present; -1 if none.
    long interior_radius() const noexcept {
      return static_cast<long>(radius)
             - static_cast<long>((presentation.max_relator_length() + 1) / 2);
    }

    long neighbour(size_t v, letter_type x) const {
      return adj[v][letter_rank(x)];
    }

    size_t edge_count() const {
      size_t e = 0;
      for (auto const& row : adj) {
        for (size_t r = 0; r < row.size(); r += 2) {
          e += row[r] >= 0;
        }
      }
      return e;
    }

    std::vector<size_t> sphere_sizes() const {
      std::vector<size_t> s(radius + 1, 0);
      for (auto d : dist) {
        ++s[d];
      }
      return s;
    }

    // Vertex representing w, if w lies in the ball.
    std::optional<size_t> locate(word_type const& w) const {
      size_t v = 0;
      size_t i = 0;
      for (; i < w.size(); ++i) {
        long n = adj[v][letter_rank(w[i])];
        if (n < 0) {
          break;
        }
        v = static_cast<size_t>(n);
      }
      if (i == w.size()) {
        return v;
      }
      return table_->find(w);
    }

    DehnKernel const& dehn() const {
      return *dehn_;
    }

    std::shared_ptr<DehnKernel const> dehn_ptr() const {
      return dehn_;
    }

   private:
    friend BallComplex build_ball(Presentation const&, size_t, size_t);
    std::shared_ptr<DehnKernel const> dehn_;
    std::shared_ptr<ElementTable>     table_;
  };

  // Breadth-first construction of the radius-R ball.  Vertices are words,
  // identified exactly through the Dehn kernel; a 2-cell is attached for
  // every closed relator cycle inside the ball, one per proper-power bundle.
  inline BallComplex build_ball(Presentation const& p,
                                size_t              R,
                                size_t              vertex_cap = 4000000) {
    BallComplex b;
    b.presentation = p;
    b.radius       = R;
    b.dehn_        = std::make_shared<DehnKernel const>(p);
    b.table_       = std::make_shared<ElementTable>(*b.dehn_, p);
    size_t const width = 2 * p.rank;
    bool         odd   = false;
    for (auto const& r : p.relators) {
      odd = odd || (r.size() % 2 == 1);
    }
    b.table_->intern({});
    b.words.push_back({});
    b.dist.push_back(0);
    b.adj.emplace_back(width, -1);

    size_t layer_begin = 0, layer_end = 1;
    for (size_t k = 0; k < R; ++k) {
      for (size_t v = layer_begin; v < layer_end; ++v) {
        for (size_t rk = 0; rk < width; ++rk) {
          if (b.adj[v][rk] >= 0) {
            continue;
          }
          letter_type x = letter_from_rank(static_cast<int>(rk));
          word_type   w = b.words[v];
          w.push_back(x);
          auto window = [&](size_t id) {
            size_t d = b.dist[id];
            return d + 1 >= k && d <= k + 1 && (odd || d != k);
          };
          auto [id, fresh] = b.table_->intern(w, window);
          if (fresh) {
            if (b.words.size() >= vertex_cap) {
              throw ball_cap_exceeded(k, vertex_cap);
            }
            b.words.push_back(std::move(w));
            b.dist.push_back(k + 1);
            b.adj.emplace_back(width, -1);
          }
          b.adj[v][rk]                             = static_cast<long>(id);
          b.adj[id][letter_rank(inverse(x))] = static_cast<long>(v);
        }
      }
      layer_begin = layer_end;
      layer_end   = b.words.size();
    }
    if (odd) {
      // Edges between two vertices of the outer sphere.
      for (size_t v = layer_begin; v < layer_end; ++v) {
        for (size_t rk = 0; rk < width; ++rk) {
          if (b.adj[v][rk] >= 0) {
            continue;
          }
          letter_type x = letter_from_rank(static_cast<int>(rk));
          word_type   w = b.words[v];
          w.push_back(x);
          auto same = [&](size_t id) { return b.dist[id] == R; };
          if (auto id = b.table_->find(w, same)) {
            b.adj[v][rk]                        = static_cast<long>(*id);
            b.adj[*id][letter_rank(inverse(x))] = static_cast<long>(v);
          }
        }
      }
    }

    b.cells_at.assign(b.size(), {});
    for (size_t j = 0; j < p.relators.size(); ++j) {
      auto const&  r      = p.relators[j];
      size_t const n      = r.size();
      size_t const period = cyclic_period(r);
      for (size_t v = 0; v < b.size(); ++v) {
        std::vector<size_t> cyc{v};
        size_t              u  = v;
        bool                ok = true;
        for (size_t t = 0; t < n; ++t) {
          long nx = b.adj[u][letter_rank(r[t])];
          if (nx < 0) {
            ok = false;
            break;
          }
          u = static_cast<size_t>(nx);
          if (t + 1 < n) {
            cyc.push_back(u);
          }
        }
        if (!ok || u != v) {
          continue;
        }
        bool least = true;
        for (size_t s = period; s < n; s += period) {
          least = least && cyc[s] > v;
        }
        if (!least) {
          continue;
        }
        for (auto c : std::set<size_t>(cyc.begin(), cyc.end())) {
          b.cells_at[c].push_back(b.cells.size());
        }
        b.cells.push_back({std::move(cyc), j, 1, 0});
      }
    }
    return b;
  }

  struct GeodesicQuery {
    size_t                 source   = 0;
    size_t                 target   = 0;
    size_t                 distance = 0;
    uint64_t               count    = 0;  // number of geodesic edge paths
    std::vector<word_type> paths;         // filled when enumerating
  };

  // Distance from x to y and the geodesics between them.  Refuses unless
  // d(1,x) + d(x,y) <= R, which keeps every such path inside the ball.
  inline GeodesicQuery geodesics(BallComplex const& b,
                                 size_t             x,
                                 size_t             y,
                                 bool               enumerate_all,
                                 size_t             path_cap = 100000) {
    size_t const          n = b.size();
    std::vector<long>     d(n, -1);
    std::vector<uint64_t> cnt(n, 0);
    std::deque<size_t>    q{x};
    d[x]   = 0;
    cnt[x] = 1;
    while (!q.empty()) {
      size_t u = q.front();
      q.pop_front();
      if (u == y) {
        break;
      }
      for (long v : b.adj[u]) {
        if (v < 0) {
          continue;
        }
        if (d[v] < 0) {
          d[v] = d[u] + 1;
          q.push_back(static_cast<size_t>(v));
        }
        if (d[v] == d[u] + 1) {
          cnt[v] += cnt[u];
        }
      }
    }
    if (d[y] < 0 || b.dist[x] + static_cast<size_t>(d[y]) > b.radius) {
      throw cdim_error("geodesics: interval may leave the ball (need d(1,x) + "
                       "d(x,y) <= R)");
    }
    GeodesicQuery g{x, y, static_cast<size_t>(d[y]), cnt[y], {}};
    if (!enumerate_all) {
      return g;
    }
    if (cnt[y] > path_cap) {
      throw cdim_error("geodesics: " + std::to_string(cnt[y])
                       + " paths exceed the enumeration cap");
    }
    // Walk back from y through predecessors, then reverse.
    std::function<void(size_t, word_type&)> back = [&](size_t u,
                                                       word_type& suffix) {
      if (u == x) {
        g.paths.emplace_back(suffix.rbegin(), suffix.rend());
        return;
      }
      for (size_t rk = 0; rk < b.adj[u].size(); ++rk) {
        long v = b.adj[u][rk];
        if (v >= 0 && d[v] >= 0 && d[v] + 1 == d[u]) {
          suffix.push_back(inverse(letter_from_rank(static_cast<int>(rk))));
          back(static_cast<size_t>(v), suffix);
          suffix.pop_back();
        }
      }
    };
    word_type scratch;
    back(y, scratch);
    std::sort(g.paths.begin(), g.paths.end(), shortlex_less);
    return g;
  }

  // Neighbours b of a with d(1,b) <= d(1,a).
  inline size_t non_extending_neighbours(BallComplex const& b, size_t a) {
    if (b.dist[a] + 1 > b.radius) {
      throw cdim_error("non_extending_neighbours: vertex too close to the "
                       "ball boundary");
    }
    std::set<size_t> s;
    for (long v : b.adj[a]) {
      if (v >= 0 && b.dist[v] <= b.dist[a]) {
        s.insert(static_cast<size_t>(v));
      }
    }
    return s.size();
  }

  struct CellAudit {
    size_t cells             = 0;
    size_t non_embedded      = 0;  // boundary cycle repeats a vertex
    size_t pairs_checked     = 0;
    size_t disconnected_meet = 0;  // two cells meeting in a disconnected set
  };

  // Boundaries of 2-cells embed and two 2-cells meet in a connected set:
  // an arc of shared edges, a single vertex, or nothing.
  inline CellAudit audit_cells(BallComplex const& b) {
    CellAudit a;
    a.cells = b.cells.size();
    for (auto const& c : b.cells) {
      if (std::set<size_t>(c.cycle.begin(), c.cycle.end()).size()
          != c.cycle.size()) {
        ++a.non_embedded;
      }
    }
    auto edge_set = [&](BallCell const& c) {
      std::set<std::pair<size_t, size_t>> e;
      for (size_t t = 0; t < c.cycle.size(); ++t) {
        size_t u = c.cycle[t], v = c.cycle[(t + 1) % c.cycle.size()];
        e.insert({std::min(u, v), std::max(u, v)});
      }
      return e;
    };
    for (size_t i = 0; i < b.cells.size(); ++i) {
      std::set<size_t> others;
      for (auto v : b.cells[i].cycle) {
        for (auto j : b.cells_at[v]) {
          if (j > i) {
            others.insert(j);
          }
        }
      }
      auto ei = edge_set(b.cells[i]);
      for (auto j : others) {
        ++a.pairs_checked;
        std::set<size_t> vj(b.cells[j].cycle.begin(), b.cells[j].cycle.end());
        auto             ej = edge_set(b.cells[j]);
        // Components of the shared subgraph: shared vertices joined by
        // shared edges.
        std::vector<size_t> shared;
        for (auto v : b.cells[i].cycle) {
          if (vj.count(v)) {
            shared.push_back(v);
          }
        }
        std::map<size_t, size_t> parent;
        for (auto v : shared) {
          parent[v] = v;
        }
        std::function<size_t(size_t)> root = [&](size_t v) {
          return parent[v] == v ? v : parent[v] = root(parent[v]);
        };
        size_t comps = shared.size();
        for (auto const& e : ei) {
          if (ej.count(e) && root(e.first) != root(e.second)) {
            parent[root(e.first)] = root(e.second);
            --comps;
          }
        }
        if (comps > 1) {
          ++a.disconnected_meet;
        }
      }
    }
    return a;
  }

  ////////////////////////////////////////////////////////////////////////
  // The unbounded complex
  ////////////////////////////////////////////////////////////////////////

  // An undirected edge {tail, tail * letter} with letter a positive generator.
  struct EdgeRef {
    size_t      tail   = 0;
    letter_type letter = 1;
    auto        operator<=>(EdgeRef const&) const = default;
  };

  // A 2-cell reading relator `relator` from element `base`, with the base
  // chosen canonically within a proper-power bundle.
  struct FaceRef {
    size_t base    = 0;
    size_t relator = 0;
    auto   operator<=>(FaceRef const&) const = default;
  };

  // Lower bound, exact when `exact`.
  struct Distance {
    size_t value = 0;
    bool   exact = true;
  };

  class CayleyComplex {
   public:
    // Distances are exact up to oracle_radius and bounded below beyond it.
    CayleyComplex(Presentation const& p, size_t oracle_radius)
        : pres_(p),
          dehn_(std::make_shared<DehnKernel const>(p)),
          table_(*dehn_, p),
          ball_(build_ball(p, oracle_radius)) {
      table_.intern({});
    }

    Presentation const& presentation() const noexcept {
      return pres_;
    }

    DehnKernel const& dehn() const noexcept {
      return *dehn_;
    }

    BallComplex const& oracle() const noexcept {
      return ball_;
    }

    size_t identity() const noexcept {
      return 0;
    }

    size_t element(word_type const& w) {
      return table_.intern(w).first;
    }

    std::optional<size_t> find(word_type const& w) const {
      return table_.find(w);
    }

    size_t element_count() const noexcept {
      return table_.size();
    }

    word_type const& word(size_t g) const {
      return table_.key(g);
    }

    size_t neighbour(size_t g, letter_type x) {
      auto k = std::make_pair(g, x);
      if (auto it = nbr_.find(k); it != nbr_.end()) {
        return it->second;
      }
      word_type w = word(g);
      w.push_back(x);
      size_t h = element(w);
      nbr_.emplace(k, h);
      nbr_.emplace(std::make_pair(h, inverse(x)), g);
      return h;
    }

    size_t walk(size_t g, word_type const& w) {
      for (auto x : w) {
        g = neighbour(g, x);
      }
      return g;
    }

    EdgeRef edge(size_t g, letter_type x) {
      return x > 0 ? EdgeRef{g, x} : EdgeRef{neighbour(g, x), -x};
    }

    std::pair<size_t, size_t> endpoints(EdgeRef e) {
      return {e.tail, neighbour(e.tail, e.letter)};
    }

    // The face reading relator j from base g, normalised over its bundle.
    FaceRef face(size_t g, size_t j) {
      auto const&  r      = pres_.relators[j];
      size_t const period = cyclic_period(r);
      size_t       best   = g, cur = g;
      for (size_t s = period; s < r.size(); s += period) {
        cur  = walk(cur, word_type(r.begin() + static_cast<long>(s - period),
                                  r.begin() + static_cast<long>(s)));
        best = std::min(best, cur);
      }
      return {best, j};
    }

    size_t perimeter(FaceRef const& f) const {
      return pres_.relators[f.relator].size();
    }

    // vertices[t] -> vertices[t+1] reads relator letter t.
    std::vector<size_t> face_vertices(FaceRef const& f) {
      auto const&         r = pres_.relators[f.relator];
      std::vector<size_t> v{f.base};
      for (size_t t = 0; t + 1 < r.size(); ++t) {
        v.push_back(neighbour(v.back(), r[t]));
      }
      return v;
    }

    EdgeRef face_edge(FaceRef const& f, size_t t) {
      auto const& r = pres_.relators[f.relator];
      auto        v = face_vertices(f);
      return edge(v[t % r.size()], r[t % r.size()]);
    }

    // Faces containing e, each with the positions t at which e occurs in
    // the boundary (more than one only for non-embedded boundaries).
    std::vector<std::pair<FaceRef, size_t>> faces_through(EdgeRef e) {
      std::vector<std::pair<FaceRef, size_t>> out;
      for (size_t j = 0; j < pres_.relators.size(); ++j) {
        auto const& r = pres_.relators[j];
        for (size_t t = 0; t < r.size(); ++t) {
          if (std::abs(r[t]) != e.letter) {
            continue;
          }
          // Position t runs tail -> head when r[t] is positive.
          size_t    start = r[t] > 0 ? e.tail : neighbour(e.tail, e.letter);
          word_type pre(r.begin(), r.begin() + static_cast<long>(t));
          size_t    base = walk(start, inverse(pre));
          FaceRef   f    = face(base, j);
          // Recover the position of e relative to the normalised base.
          auto vs = face_vertices(f);
          for (size_t s = 0; s < r.size(); ++s) {
            if (edge(vs[s], r[s]) == e) {
              auto item = std::make_pair(f, s);
              if (std::find(out.begin(), out.end(), item) == out.end()) {
                out.push_back(item);
              }
            }
          }
        }
      }
      std::sort(out.begin(), out.end());
      return out;
    }

    Distance distance(size_t g, size_t h) {
      if (g == h) {
        return {0, true};
      }
      auto v = ball_.locate(multiply(inverse(word(g)), word(h)));
      if (v) {
        return {ball_.dist[*v], true};
      }
      return {ball_.radius + 1, false};
    }

    // Distance between edge midpoints.
    Distance distance(EdgeRef a, EdgeRef b) {
      if (a == b) {
        return {0, true};
      }
      auto [a0, a1] = endpoints(a);
      auto [b0, b1] = endpoints(b);
      Distance best{SIZE_MAX, false};
      bool     best_exact_min = false;
      for (size_t x : {a0, a1}) {
        for (size_t y : {b0, b1}) {
          Distance d = distance(x, y);
          if (d.value < best.value
              || (d.value == best.value && d.exact && !best_exact_min)) {
            best           = d;
            best_exact_min = d.exact;
          }
        }
      }
      return {best.value + 1, best_exact_min};
    }

   private:
    struct PairHash {
      size_t operator()(std::pair<size_t, letter_type> const& k) const noexcept {
        return std::hash<size_t>()(k.first * 131 + static_cast<size_t>(k.second + 64));
      }
    };

    Presentation                       pres_;
    std::shared_ptr<DehnKernel const>  dehn_;
    ElementTable                       table_;
    BallComplex                        ball_;
    std::unordered_map<std::pair<size_t, letter_type>, size_t, PairHash> nbr_;
  };

}  // namespace cdim

#endif  // CDIM_CAYLEY_HPP_
