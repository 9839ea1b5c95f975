// Disc diagrams stored as rotation systems: validation, cancellable pairs and
// their removal, the combinatorial Gauss-Bonnet audit, ladders, pseudoshells
// and the isoperimetric inequality.

#ifndef CDIM_DIAGRAMS_HPP_
#define CDIM_DIAGRAMS_HPP_

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "numeric.hpp"
#include "rng.hpp"
#include "words.hpp"

namespace cdim {

  // Darts are signed 1-based edge indices: +(e+1) runs tail -> head along
  // edge e, -(e+1) runs head -> tail.
  using dart_type = long;

  struct DEdge {
    size_t      tail  = 0;
    size_t      head  = 0;
    letter_type label = 1;  // read from tail to head
  };

  struct DFace {
    std::vector<dart_type> darts;  // counter-clockwise, face on the left
    size_t                 relator  = 0;
    bool                   inverted = false;  // reads a conjugate of r^-1
    size_t                 offset   = 0;      // reads rotate(r^{+-1}, offset)
  };

  struct DiscDiagram {
    size_t             vertices = 1;
    std::vector<DEdge> edges;
    std::vector<DFace> faces;
    size_t             base = 0;
    // Outgoing darts at each vertex in counter-clockwise order.  Left empty,
    // it is derived from the faces.
    std::vector<std::vector<dart_type>> rotation;
  };

  namespace detail {
    inline size_t dart_index(dart_type s) {
      return s > 0 ? 2 * static_cast<size_t>(s - 1)
                   : 2 * static_cast<size_t>(-s - 1) + 1;
    }

    inline dart_type dart_signed(size_t i) {
      return i % 2 == 0 ? static_cast<dart_type>(i / 2 + 1)
                        : -static_cast<dart_type>(i / 2 + 1);
    }

    constexpr long outer_face = -1;
    constexpr long hole_face  = -2;
  }  // namespace detail

  // The combinatorial map underlying a diagram: for each internal dart
  // (2e forward, 2e+1 backward) its origin, label, the next dart around the
  // face on its left, and that face (-1 for the outside).
  struct DiagramMap {
    std::vector<size_t>      origin;
    std::vector<letter_type> label;
    std::vector<size_t>      next;
    std::vector<long>        face;
    std::vector<std::vector<size_t>> rotation;     // ccw, internal darts
    std::vector<std::vector<size_t>> outer_cycles;  // traced, outside on left
    std::vector<std::string>         defects;

    size_t head(size_t d) const {
      return origin[d ^ 1];
    }
  };

  inline word_type face_word(DiscDiagram const& d, DFace const& f) {
    word_type w;
    for (auto s : f.darts) {
      auto const& e = d.edges[detail::dart_index(s) / 2];
      w.push_back(s > 0 ? e.label : inverse(e.label));
    }
    return w;
  }

  // Builds the combinatorial map and records every structural defect.
  inline DiagramMap analyse(DiscDiagram const& d) {
    using namespace detail;
    DiagramMap   m;
    size_t const E = d.edges.size();
    size_t const D = 2 * E;
    m.origin.resize(D);
    m.label.resize(D);
    m.next.assign(D, SIZE_MAX);
    m.face.assign(D, outer_face);
    auto fail = [&](std::string s) { m.defects.push_back(std::move(s)); };

    for (size_t e = 0; e < E; ++e) {
      auto const& ed = d.edges[e];
      if (ed.tail >= d.vertices || ed.head >= d.vertices) {
        fail("edge " + std::to_string(e) + " has an endpoint out of range");
        return m;
      }
      if (ed.label == 0) {
        fail("edge " + std::to_string(e) + " has no label");
      }
      m.origin[2 * e]     = ed.tail;
      m.origin[2 * e + 1] = ed.head;
      m.label[2 * e]      = ed.label;
      m.label[2 * e + 1]  = inverse(ed.label);
    }
    if (d.base >= d.vertices) {
      fail("base point out of range");
      return m;
    }

    // Faces: closed dart cycles, each dart used at most once.
    std::vector<long> used(D, -1);
    for (size_t f = 0; f < d.faces.size(); ++f) {
      auto const& ds = d.faces[f].darts;
      if (ds.empty()) {
        fail("face " + std::to_string(f) + " is empty");
        continue;
      }
      for (size_t i = 0; i < ds.size(); ++i) {
        if (ds[i] == 0 || static_cast<size_t>(std::abs(ds[i])) > E) {
          fail("face " + std::to_string(f) + " names a missing edge");
          return m;
        }
      }
      for (size_t i = 0; i < ds.size(); ++i) {
        size_t a = dart_index(ds[i]), b = dart_index(ds[(i + 1) % ds.size()]);
        if (m.head(a) != m.origin[b]) {
          fail("face " + std::to_string(f) + " boundary is not a closed path");
        }
        if (used[a] >= 0) {
          fail("dart " + std::to_string(ds[i]) + " lies on faces "
               + std::to_string(used[a]) + " and " + std::to_string(f)
               + " (inconsistent orientation)");
        }
        used[a] = static_cast<long>(f);
      }
    }
    if (!m.defects.empty()) {
      return m;
    }

    // Rotation system.
    std::vector<std::vector<size_t>> at(d.vertices);
    for (size_t x = 0; x < D; ++x) {
      at[m.origin[x]].push_back(x);
    }
    m.rotation.assign(d.vertices, {});
    if (!d.rotation.empty()) {
      if (d.rotation.size() != d.vertices) {
        fail("rotation system has the wrong number of vertices");
        return m;
      }
      for (size_t v = 0; v < d.vertices; ++v) {
        std::vector<size_t> r;
        for (auto s : d.rotation[v]) {
          if (s == 0 || static_cast<size_t>(std::abs(s)) > E) {
            fail("rotation at vertex " + std::to_string(v)
                 + " names a missing edge");
            return m;
          }
          r.push_back(dart_index(s));
        }
        auto a = r, b = at[v];
        std::sort(a.begin(), a.end());
        if (a != b) {
          fail("rotation at vertex " + std::to_string(v)
               + " is not a cyclic order of its darts");
          return m;
        }
        m.rotation[v] = std::move(r);
      }
    } else {
      // Consecutive darts d_i, d_{i+1} of a face give succ(d_{i+1}) =
      // twin(d_i) around their common vertex; boundary gaps are closed in
      // order of the least dart.
      std::vector<long> succ(D, -1), pred(D, -1);
      for (auto const& f : d.faces) {
        auto const& ds = f.darts;
        for (size_t i = 0; i < ds.size(); ++i) {
          size_t a  = dart_index(ds[i]);
          size_t b  = dart_index(ds[(i + 1) % ds.size()]);
          succ[b]   = static_cast<long>(a ^ 1);
          pred[a ^ 1] = static_cast<long>(b);
        }
      }
      std::vector<char> seen(D, 0);
      for (size_t v = 0; v < d.vertices; ++v) {
        std::vector<size_t> order;
        size_t              chains = 0;
        for (auto x : at[v]) {
          if (pred[x] >= 0 || seen[x]) {
            continue;
          }
          ++chains;
          for (long y = static_cast<long>(x); y >= 0 && !seen[y];
               y = succ[y]) {
            seen[y] = 1;
            order.push_back(static_cast<size_t>(y));
          }
        }
        size_t cycles = 0;
        for (auto x : at[v]) {
          if (seen[x]) {
            continue;
          }
          ++cycles;
          for (long y = static_cast<long>(x); !seen[y]; y = succ[y]) {
            seen[y] = 1;
            order.push_back(static_cast<size_t>(y));
          }
        }
        if (cycles > 1 || (cycles == 1 && chains > 0)) {
          fail("vertex " + std::to_string(v)
               + " has a link that is not a single arc or circle");
        }
        m.rotation[v] = std::move(order);
      }
      if (!m.defects.empty()) {
        return m;
      }
    }

    // next(x) = ccw predecessor of twin(x) around head(x).
    std::vector<size_t> pos(D);
    for (size_t v = 0; v < d.vertices; ++v) {
      for (size_t i = 0; i < m.rotation[v].size(); ++i) {
        pos[m.rotation[v][i]] = i;
      }
    }
    for (size_t x = 0; x < D; ++x) {
      auto const& r = m.rotation[m.head(x)];
      size_t      i = pos[x ^ 1];
      m.next[x]     = r[(i + r.size() - 1) % r.size()];
    }
    for (size_t f = 0; f < d.faces.size(); ++f) {
      auto const& ds = d.faces[f].darts;
      for (size_t i = 0; i < ds.size(); ++i) {
        size_t a = dart_index(ds[i]), b = dart_index(ds[(i + 1) % ds.size()]);
        if (m.next[a] != b) {
          fail("face " + std::to_string(f)
               + " is not a face of the rotation system");
          break;
        }
      }
      for (auto s : ds) {
        m.face[dart_index(s)] = static_cast<long>(f);
      }
    }
    std::vector<char> seen(D, 0);
    for (size_t x = 0; x < D; ++x) {
      if (seen[x] || m.face[x] != outer_face) {
        continue;
      }
      std::vector<size_t> cyc;
      for (size_t y = x; !seen[y]; y = m.next[y]) {
        seen[y] = 1;
        cyc.push_back(y);
      }
      m.outer_cycles.push_back(std::move(cyc));
    }
    if (E > 0 && m.outer_cycles.size() != 1) {
      fail("expected one boundary cycle, found "
           + std::to_string(m.outer_cycles.size()));
    }

    // Connectivity and Euler characteristic.
    std::vector<size_t> uf(d.vertices);
    std::iota(uf.begin(), uf.end(), 0);
    std::function<size_t(size_t)> find = [&](size_t x) {
      return uf[x] == x ? x : uf[x] = find(uf[x]);
    };
    for (auto const& e : d.edges) {
      uf[find(e.tail)] = find(e.head);
    }
    for (size_t v = 0; v < d.vertices; ++v) {
      if (find(v) != find(0)) {
        fail("diagram is not connected");
        break;
      }
    }
    long chi = static_cast<long>(d.vertices) - static_cast<long>(E)
               + static_cast<long>(d.faces.size());
    if (chi != 1) {
      fail("Euler characteristic is " + std::to_string(chi) + ", not 1");
    }
    if (E > 0 && m.outer_cycles.size() == 1) {
      bool on = false;
      for (auto x : m.outer_cycles[0]) {
        on = on || m.origin[x] == d.base;
      }
      if (!on) {
        fail("base point is not on the boundary");
      }
    }
    return m;
  }

  // Counter-clockwise boundary darts starting at the base point.
  inline std::vector<size_t> boundary_darts(DiscDiagram const& d,
                                            DiagramMap const&  m) {
    if (m.outer_cycles.empty()) {
      return {};
    }
    std::vector<size_t> out;
    auto const&         c = m.outer_cycles[0];
    for (size_t i = c.size(); i-- > 0;) {
      out.push_back(c[i] ^ 1);
    }
    auto it = std::find_if(out.begin(), out.end(),
                           [&](size_t x) { return m.origin[x] == d.base; });
    if (it != out.end()) {
      std::rotate(out.begin(), it, out.end());
    }
    return out;
  }

  inline word_type boundary_word(DiscDiagram const& d) {
    auto      m = analyse(d);
    word_type w;
    for (auto x : boundary_darts(d, m)) {
      w.push_back(m.label[x]);
    }
    return w;
  }

  struct DiagramCheck {
    bool                     valid = true;
    std::vector<std::string> defects;
    word_type                boundary;
  };

  inline DiagramCheck validate(DiscDiagram const& d, Presentation const& p) {
    DiagramCheck c;
    auto         m = analyse(d);
    c.defects      = m.defects;
    for (size_t f = 0; f < d.faces.size() && c.defects.empty(); ++f) {
      auto const& F = d.faces[f];
      if (F.relator >= p.relators.size()) {
        c.defects.push_back("face " + std::to_string(f)
                            + " names a missing relator");
        continue;
      }
      word_type r = p.relators[F.relator];
      if (F.inverted) {
        r = inverse(r);
      }
      if (r.empty() || face_word(d, F) != rotate(r, F.offset % r.size())) {
        c.defects.push_back("face label: face " + std::to_string(f)
                            + " does not read its relator");
      }
    }
    c.valid = c.defects.empty();
    if (c.valid) {
      for (auto x : boundary_darts(d, m)) {
        c.boundary.push_back(m.label[x]);
      }
    }
    return c;
  }

  // Faces have their whole boundary or part of it on the boundary of the
  // disc; counts are in edges (darts).
  inline std::vector<size_t> exterior_counts(DiscDiagram const& d,
                                             DiagramMap const&  m) {
    std::vector<size_t> e(d.faces.size(), 0);
    for (size_t f = 0; f < d.faces.size(); ++f) {
      for (auto s : d.faces[f].darts) {
        e[f] += m.face[detail::dart_index(s) ^ 1] == detail::outer_face;
      }
    }
    return e;
  }

  inline bool is_disc(DiscDiagram const& d, DiagramMap const& m) {
    if (!m.defects.empty() || d.faces.empty() || m.outer_cycles.size() != 1) {
      return false;
    }
    std::set<size_t> verts;
    for (auto x : m.outer_cycles[0]) {
      if (!verts.insert(m.origin[x]).second
          || m.face[x ^ 1] == detail::outer_face) {
        return false;
      }
    }
    return true;
  }

  ////////////////////////////////////////////////////////////////////////
  // Curvature
  ////////////////////////////////////////////////////////////////////////

  struct CurvatureAudit {
    std::vector<size_t> vertices;       // retained vertices
    std::vector<size_t> degree;         // d(v), per retained vertex
    std::vector<size_t> exterior;       // e(R)
    std::vector<size_t> interior;       // i(R)
    std::vector<long>   contribution;   // 6 - 2e(R) - i(R)
    long                vertex_total = 0;  // 2 sum (3 - d(v))
    long                face_total   = 0;
    long                total        = 0;
  };

  // Degree-2 vertices are suppressed (one is kept if none remain), then
  // 2 sum_v (3 - d(v)) + sum_R (6 - 2e(R) - i(R)) is evaluated.
  inline CurvatureAudit curvature_audit(DiscDiagram const& d) {
    auto m = analyse(d);
    if (!is_disc(d, m)) {
      throw cdim_error("curvature_audit: diagram is not homeomorphic to a disc"
                       + (m.defects.empty() ? std::string()
                                            : " (" + m.defects[0] + ")"));
    }
    size_t const        D = m.origin.size();
    std::vector<size_t> deg(d.vertices, 0);
    for (size_t x = 0; x < D; ++x) {
      ++deg[m.origin[x]];
    }
    std::vector<char> kept(d.vertices, 0);
    bool              any = false;
    for (size_t v = 0; v < d.vertices; ++v) {
      kept[v] = deg[v] != 2;
      any     = any || kept[v];
    }
    if (!any) {
      kept[d.base] = 1;
    }
    CurvatureAudit a;
    for (size_t v = 0; v < d.vertices; ++v) {
      if (kept[v]) {
        a.vertices.push_back(v);
        a.degree.push_back(deg[v]);
        a.vertex_total += 2 * (3 - static_cast<long>(deg[v]));
      }
    }
    // A suppressed edge is a maximal chain of darts through degree-2
    // vertices; each is counted once from its first dart.
    a.exterior.assign(d.faces.size(), 0);
    a.interior.assign(d.faces.size(), 0);
    auto continue_chain = [&](size_t x) {
      // The dart after x along the chain: the other dart at head(x).
      size_t v = m.head(x);
      auto const& r = m.rotation[v];
      return r[0] == (x ^ 1) ? r[1] : r[0];
    };
    for (size_t x = 0; x < D; ++x) {
      if (!kept[m.origin[x]]) {
        continue;
      }
      size_t y = x;
      while (!kept[m.head(y)]) {
        y = continue_chain(y);
      }
      // Chain x..y; the face on its left is m.face[x], on its right the face
      // of twin(x).  Each face counts the chain once, from its own side.
      long left = m.face[x], right = m.face[x ^ 1];
      if (left >= 0) {
        (right == detail::outer_face ? a.exterior : a.interior)[left] += 1;
      }
    }
    for (size_t f = 0; f < d.faces.size(); ++f) {
      long c = 6 - 2 * static_cast<long>(a.exterior[f])
               - static_cast<long>(a.interior[f]);
      a.contribution.push_back(c);
      a.face_total += c;
    }
    a.total = a.vertex_total + a.face_total;
    return a;
  }

  ////////////////////////////////////////////////////////////////////////
  // Cancellable pairs and reduction
  ////////////////////////////////////////////////////////////////////////

  // Pairs of distinct faces sharing an edge, carrying the same relator, whose
  // boundary words read from that edge agree (one clockwise, one not).
  inline std::vector<std::pair<size_t, size_t>> cancellable_pairs(
      DiscDiagram const& d) {
    using namespace detail;
    auto m = analyse(d);
    if (!m.defects.empty()) {
      throw cdim_error("cancellable_pairs: invalid diagram: " + m.defects[0]);
    }
    std::set<std::pair<size_t, size_t>> out;
    for (size_t f = 0; f < d.faces.size(); ++f) {
      auto const& ds = d.faces[f].darts;
      for (size_t i = 0; i < ds.size(); ++i) {
        size_t x = dart_index(ds[i]);
        long   g = m.face[x ^ 1];
        if (g < 0 || static_cast<size_t>(g) <= f
            || d.faces[g].relator != d.faces[f].relator) {
          continue;
        }
        // f read ccw from x; g read ccw from twin(x), inverted and rotated
        // to start with the letter of x.
        word_type a;
        for (size_t j = 0; j < ds.size(); ++j) {
          a.push_back(m.label[dart_index(ds[(i + j) % ds.size()])]);
        }
        word_type b;
        size_t    y = x ^ 1;
        do {
          b.push_back(m.label[y]);
          y = m.next[y];
        } while (y != (x ^ 1));
        word_type c = inverse(b);
        std::rotate(c.begin(), c.end() - 1, c.end());
        if (a == c) {
          out.emplace(f, static_cast<size_t>(g));
        }
      }
    }
    return {out.begin(), out.end()};
  }

  namespace detail {
    struct Dcel {
      std::vector<size_t>      origin, next, prev;
      std::vector<long>        face;
      std::vector<letter_type> label;
      std::vector<char>        alive;
      std::vector<size_t>      parent;  // vertex identifications

      size_t find(size_t v) {
        while (parent[v] != v) {
          v = parent[v] = parent[parent[v]];
        }
        return v;
      }

      void link(size_t a, size_t b) {
        next[a] = b;
        prev[b] = a;
      }

      void delete_edge(size_t h) {
        size_t t = h ^ 1;
        if (next[h] == t && next[t] == h) {
        } else if (next[h] == t) {
          link(prev[h], next[t]);
        } else if (next[t] == h) {
          link(prev[t], next[h]);
        } else {
          size_t ph = prev[h], pt = prev[t], nh = next[h], nt = next[t];
          link(ph, nt);
          link(pt, nh);
        }
        alive[h] = alive[t] = 0;
      }
    };
  }  // namespace detail

  struct ReduceResult {
    DiscDiagram              diagram;
    size_t                   steps = 0;
    std::vector<std::string> defects;
  };

  // Removes one cancellable pair at a time: both open 2-cells and their
  // common edges go, and the two remaining boundary paths, which read
  // inverse words, are zipped together.
  inline ReduceResult reduce(DiscDiagram const& input) {
    using namespace detail;
    ReduceResult res;
    res.diagram = input;
    while (true) {
      auto pairs = cancellable_pairs(res.diagram);
      if (pairs.empty()) {
        return res;
      }
      auto const&  d = res.diagram;
      auto         m = analyse(d);
      size_t const D = m.origin.size();
      Dcel         c;
      c.origin = m.origin;
      c.next   = m.next;
      c.prev.assign(D, 0);
      for (size_t x = 0; x < D; ++x) {
        c.prev[c.next[x]] = x;
      }
      c.face  = m.face;
      c.label = m.label;
      c.alive.assign(D, 1);
      c.parent.resize(d.vertices);
      std::iota(c.parent.begin(), c.parent.end(), 0);

      auto [f1, f2] = pairs.front();
      for (size_t x = 0; x < D; ++x) {
        if (c.face[x] == static_cast<long>(f1)
            || c.face[x] == static_cast<long>(f2)) {
          c.face[x] = hole_face;
        }
      }
      for (size_t x = 0; x < D; x += 2) {
        if (c.face[x] == hole_face && c.face[x + 1] == hole_face) {
          c.delete_edge(x);
        }
      }
      auto fail = [&](std::string s) {
        res.defects.push_back(std::move(s));
        return res;
      };
      while (true) {
        long x = -1;
        for (size_t i = 0; i < D; ++i) {
          if (c.alive[i] && c.face[i] == hole_face) {
            size_t y = c.next[i];
            if (c.label[y] == inverse(c.label[i])) {
              x = static_cast<long>(i);
              break;
            }
          }
        }
        if (x < 0) {
          bool left = false;
          for (size_t i = 0; i < D; ++i) {
            left = left || (c.alive[i] && c.face[i] == hole_face);
          }
          if (left) {
            return fail("regluing stalled: hole boundary does not zip");
          }
          break;
        }
        size_t xs = static_cast<size_t>(x);
        size_t y  = c.next[xs];
        if (y == (xs ^ 1)) {
          c.delete_edge(xs);
          continue;
        }
        size_t ty = y ^ 1;
        if (c.face[ty] == hole_face || c.face[xs ^ 1] == hole_face) {
          return fail("regluing stalled: folded edge borders the hole twice");
        }
        size_t p = c.find(c.origin[xs]), s = c.find(c.origin[ty]);
        size_t a = c.prev[ty], b = c.next[ty];
        if (p == s) {
          if (c.next[y] != xs) {
            return fail("regluing pinches off a sphere component");
          }
        } else {
          size_t w = c.prev[xs], z = c.next[y];
          c.link(w, z);
          c.parent[s] = p;
        }
        if (a == ty) {
          c.link(xs, xs);
        } else {
          c.link(a, xs);
          c.link(xs, b);
        }
        c.face[xs] = c.face[ty];
        c.alive[y] = c.alive[ty] = 0;
      }

      // Compact back into a diagram.
      std::vector<long> vid(d.vertices, -1);
      DiscDiagram       out;
      out.vertices = 0;
      std::vector<long> eid(D / 2, -1);
      for (size_t x = 0; x < D; x += 2) {
        if (!c.alive[x]) {
          continue;
        }
        for (size_t v : {c.find(c.origin[x]), c.find(c.origin[x + 1])}) {
          if (vid[v] < 0) {
            vid[v] = static_cast<long>(out.vertices++);
          }
        }
        eid[x / 2] = static_cast<long>(out.edges.size());
        out.edges.push_back({static_cast<size_t>(vid[c.find(c.origin[x])]),
                             static_cast<size_t>(vid[c.find(c.origin[x + 1])]),
                             c.label[x]});
      }
      size_t b0 = c.find(d.base);
      if (vid[b0] < 0) {
        vid[b0] = static_cast<long>(out.vertices++);
      }
      out.base = static_cast<size_t>(vid[b0]);
      auto sd  = [&](size_t x) {
        return eid[x / 2] * 2 + static_cast<long>(x % 2);
      };
      for (size_t f = 0; f < d.faces.size(); ++f) {
        if (f == f1 || f == f2) {
          continue;
        }
        size_t start = D;
        for (auto s : d.faces[f].darts) {
          size_t x = dart_index(s);
          if (c.alive[x]) {
            start = x;
            break;
          }
        }
        if (start == D) {
          return fail("face " + std::to_string(f) + " lost its boundary");
        }
        // Keep the original reading position: the first surviving dart of
        // the old cycle sits at index k of it.
        size_t k = 0;
        while (dart_index(d.faces[f].darts[k]) != start) {
          ++k;
        }
        DFace nf = d.faces[f];
        nf.darts.clear();
        size_t x = start;
        do {
          nf.darts.push_back(dart_signed(static_cast<size_t>(sd(x))));
          x = c.next[x];
        } while (x != start);
        nf.offset = (nf.offset + k) % nf.darts.size();
        out.faces.push_back(std::move(nf));
      }
      // Rotation: clockwise successor of x is next(twin(x)).
      out.rotation.assign(out.vertices, {});
      std::vector<char> seen(D, 0);
      for (size_t x = 0; x < D; ++x) {
        if (!c.alive[x] || seen[x]) {
          continue;
        }
        size_t              v = static_cast<size_t>(vid[c.find(c.origin[x])]);
        std::vector<size_t> cw;
        for (size_t y = x; !seen[y]; y = c.next[y ^ 1]) {
          seen[y] = 1;
          cw.push_back(y);
        }
        if (!out.rotation[v].empty()) {
          return fail("regluing produced a vertex with two links");
        }
        for (size_t i = cw.size(); i-- > 0;) {
          out.rotation[v].push_back(dart_signed(static_cast<size_t>(sd(cw[i]))));
        }
      }
      auto chk = analyse(out);
      if (!chk.defects.empty()) {
        return fail("regluing produced a non-diagram: " + chk.defects[0]);
      }
      res.diagram = std::move(out);
      ++res.steps;
    }
  }

  ////////////////////////////////////////////////////////////////////////
  // Ladders, pseudoshells, isoperimetry
  ////////////////////////////////////////////////////////////////////////

  inline std::vector<std::set<size_t>> face_vertex_sets(DiscDiagram const& d) {
    std::vector<std::set<size_t>> out;
    for (auto const& f : d.faces) {
      std::set<size_t> s;
      for (auto x : f.darts) {
        auto const& e = d.edges[detail::dart_index(x) / 2];
        s.insert(e.tail);
        s.insert(e.head);
      }
      out.push_back(std::move(s));
    }
    return out;
  }

  struct LadderResult {
    bool                is_ladder = false;
    std::vector<size_t> sequence;
  };

  // Faces ordered so that closed faces meet only when consecutive.
  inline LadderResult classify_ladder(DiscDiagram const& d) {
    LadderResult res;
    size_t const n = d.faces.size();
    if (n == 0) {
      return res;
    }
    auto vs = face_vertex_sets(d);
    std::vector<std::vector<size_t>> adj(n);
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = i + 1; j < n; ++j) {
        bool meet = std::any_of(vs[i].begin(), vs[i].end(),
                                [&](size_t v) { return vs[j].count(v) > 0; });
        if (meet) {
          adj[i].push_back(j);
          adj[j].push_back(i);
        }
      }
    }
    size_t start = 0, ends = 0;
    for (size_t i = 0; i < n; ++i) {
      if (adj[i].size() > 2) {
        return res;
      }
      if (adj[i].size() <= 1) {
        ++ends;
        if (ends == 1) {
          start = i;
        }
      }
    }
    if (n > 1 && ends != 2) {
      return res;
    }
    std::vector<char> seen(n, 0);
    long              prev = -1;
    for (size_t cur = start;;) {
      seen[cur] = 1;
      res.sequence.push_back(cur);
      long nxt = -1;
      for (auto j : adj[cur]) {
        if (static_cast<long>(j) != prev && !seen[j]) {
          nxt = static_cast<long>(j);
        }
      }
      if (nxt < 0) {
        break;
      }
      prev = static_cast<long>(cur);
      cur  = static_cast<size_t>(nxt);
    }
    res.is_ladder = res.sequence.size() == n;
    if (!res.is_ladder) {
      res.sequence.clear();
    }
    return res;
  }

  // Faces with more than half of their boundary on the boundary of D.
  inline std::vector<size_t> pseudoshells(DiscDiagram const& d) {
    auto m = analyse(d);
    if (!m.defects.empty()) {
      throw cdim_error("pseudoshells: invalid diagram: " + m.defects[0]);
    }
    auto                e = exterior_counts(d, m);
    std::vector<size_t> out;
    for (size_t f = 0; f < d.faces.size(); ++f) {
      if (2 * e[f] > d.faces[f].darts.size()) {
        out.push_back(f);
      }
    }
    return out;
  }

  inline size_t boundary_length(DiscDiagram const& d) {
    auto m = analyse(d);
    return m.outer_cycles.empty() ? 0 : m.outer_cycles[0].size();
  }

  // |dD| >= (1 - 2 density - epsilon) l |D|.
  inline bool isoperimetric_check(DiscDiagram const& d,
                                  rational const&    density,
                                  rational const&    epsilon,
                                  size_t             l) {
    rational rhs = (1 - 2 * density - epsilon) * l * d.faces.size();
    return rational(boundary_length(d)) >= rhs;
  }

  ////////////////////////////////////////////////////////////////////////
  // Building diagrams by gluing faces
  ////////////////////////////////////////////////////////////////////////

  inline DiscDiagram single_face_diagram(Presentation const& p,
                                         size_t              relator,
                                         bool                inverted = false,
                                         size_t              offset   = 0) {
    word_type r = p.relators.at(relator);
    if (inverted) {
      r = inverse(r);
    }
    r = rotate(r, offset % r.size());
    DiscDiagram d;
    d.vertices = r.size();
    DFace f{{}, relator, inverted, offset % r.size()};
    for (size_t i = 0; i < r.size(); ++i) {
      d.edges.push_back({i, (i + 1) % r.size(), r[i]});
      f.darts.push_back(static_cast<dart_type>(i + 1));
    }
    d.faces.push_back(std::move(f));
    return d;
  }

  // Glues a new face along the k boundary edges starting at boundary
  // position i (counted from the base point).  The new face reads
  // inverse(arc) followed by `fresh`, a path of new edges from the start of
  // the arc to its end.
  inline void attach_face(DiscDiagram&     d,
                          size_t           i,
                          size_t           k,
                          word_type const& fresh,
                          size_t           relator,
                          bool             inverted,
                          size_t           offset) {
    auto m  = analyse(d);
    auto bd = boundary_darts(d, m);
    size_t const L = bd.size();
    if (k == 0 || k >= L || fresh.empty()) {
      throw cdim_error("attach_face: need 0 < k < |boundary| and a new path");
    }
    std::vector<size_t> arc;
    for (size_t j = 0; j < k; ++j) {
      arc.push_back(bd[(i + j) % L]);
    }
    size_t from = m.origin[arc.front()], to = m.head(arc.back());
    DFace  f{{}, relator, inverted, offset};
    for (size_t j = arc.size(); j-- > 0;) {
      f.darts.push_back(detail::dart_signed(arc[j] ^ 1));
    }
    size_t cur = from;
    for (size_t j = 0; j < fresh.size(); ++j) {
      size_t nxt = j + 1 == fresh.size() ? to : d.vertices++;
      d.edges.push_back({cur, nxt, fresh[j]});
      f.darts.push_back(static_cast<dart_type>(d.edges.size()));
      cur = nxt;
    }
    d.faces.push_back(std::move(f));
    d.rotation.clear();
    for (size_t j = 1; j < arc.size(); ++j) {
      if (m.origin[arc[j]] == d.base) {
        d.base = from;  // the base point became interior
      }
    }
  }

  // Glues a copy of relator `relator` (either orientation) along the arc,
  // choosing the first rotation whose initial k letters read the inverse of
  // the arc.  Returns false if none does.
  inline bool attach_relator(DiscDiagram&        d,
                             Presentation const& p,
                             size_t              i,
                             size_t              k,
                             size_t              relator,
                             bool                inverted) {
    auto      m  = analyse(d);
    auto      bd = boundary_darts(d, m);
    word_type arc;
    for (size_t j = 0; j < k; ++j) {
      arc.push_back(m.label[bd[(i + j) % bd.size()]]);
    }
    word_type want = inverse(arc);
    word_type r    = p.relators.at(relator);
    if (inverted) {
      r = inverse(r);
    }
    if (r.size() <= k) {
      return false;
    }
    for (size_t s = 0; s < r.size(); ++s) {
      word_type c = rotate(r, s);
      if (std::equal(want.begin(), want.end(), c.begin())) {
        attach_face(d, i, k, word_type(c.begin() + static_cast<long>(k), c.end()),
                    relator, inverted, s);
        return true;
      }
    }
    return false;
  }

  // A random disc-homeomorphic diagram with `faces` faces, every edge
  // carrying its own generator; the presentation returned has one relator
  // per face.
  inline std::pair<DiscDiagram, Presentation> random_disc_diagram(
      rng_type& g, size_t faces, size_t min_perimeter = 3,
      size_t max_perimeter = 8) {
    auto perimeter = [&]() {
      return min_perimeter + uniform_below(g, max_perimeter - min_perimeter + 1);
    };
    DiscDiagram d;
    size_t      P = perimeter();
    d.vertices    = P;
    DFace f0;
    for (size_t i = 0; i < P; ++i) {
      d.edges.push_back({i, (i + 1) % P, static_cast<letter_type>(i + 1)});
      f0.darts.push_back(static_cast<dart_type>(i + 1));
    }
    d.faces.push_back(f0);
    while (d.faces.size() < faces) {
      size_t L = boundary_length(d);
      size_t k = 1 + uniform_below(g, L - 1);
      size_t Q = std::max(perimeter(), k + 1);
      word_type fresh;
      for (size_t j = 0; j < Q - k; ++j) {
        fresh.push_back(static_cast<letter_type>(d.edges.size() + j + 1));
      }
      attach_face(d, uniform_below(g, L), k, fresh, d.faces.size(), false, 0);
    }
    Presentation p;
    p.rank = d.edges.size();
    for (auto const& f : d.faces) {
      p.relators.push_back(face_word(d, f));
    }
    return {d, p};
  }

  // Grows a diagram over p by gluing relator copies along random boundary
  // arcs of length at most max_arc; attempts that find no matching relator
  // are skipped.
  inline DiscDiagram random_diagram_over(Presentation const& p,
                                         rng_type&           g,
                                         size_t              faces,
                                         size_t              max_arc = 1,
                                         size_t              attempts = 1000) {
    DiscDiagram d = single_face_diagram(
        p, uniform_below(g, p.relators.size()), uniform_below(g, 2) == 1,
        0);
    for (size_t t = 0; t < attempts && d.faces.size() < faces; ++t) {
      size_t L = boundary_length(d);
      size_t k = 1 + uniform_below(g, std::min(max_arc, L - 1));
      size_t i = uniform_below(g, L);
      attach_relator(d, p, i, k, uniform_below(g, p.relators.size()),
                     uniform_below(g, 2) == 1);
    }
    return d;
  }

}  // namespace cdim

#endif  // CDIM_DIAGRAMS_HPP_
