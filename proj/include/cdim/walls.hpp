// V-paths, V'-branching walls and their elementary polygonal complexes.

#ifndef CDIM_WALLS_HPP_
#define CDIM_WALLS_HPP_

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cancellation.hpp"
#include "cayley.hpp"
#include "numeric.hpp"

namespace cdim {

  // Distance between two edge midpoints along a boundary of P edges, when
  // the edges sit at positions i and j.
  inline size_t boundary_distance(size_t P, size_t i, size_t j) {
    size_t k = (i + P - j % P) % P;
    return std::min(k, P - k);
  }

  // The 3/8 rule: 8 * distance >= 3 * P.
  inline bool crosses_far(size_t P, size_t dist) {
    return 8 * dist >= 3 * P;
  }

  // Offsets k (measured from the entry edge in the travel direction) of the
  // V'-targets in a face of perimeter P.
  inline std::vector<size_t> vprime_offsets(size_t P, rational const& lambda) {
    if (lambda * P <= 1) {
      throw cdim_error("vprime_targets: need lambda * |dR| > 1 (got "
                       + to_string(rational(lambda * P)) + ")");
    }
    size_t const gap   = static_cast<size_t>(ceil(rational(lambda * P))) - 1;
    size_t const first = static_cast<size_t>(ceil(rational(3 * P, 8)));
    std::vector<size_t> out;
    for (size_t k = first; k + first <= P; k += gap) {
      out.push_back(k);
    }
    return out;
  }

  // Positions of the targets y_1..y_t given the entry position and whether
  // travel runs forward along the boundary word.
  inline std::vector<size_t> vprime_targets(size_t          P,
                                            size_t          entry,
                                            rational const& lambda,
                                            bool            forward) {
    std::vector<size_t> out;
    for (size_t k : vprime_offsets(P, lambda)) {
      out.push_back(forward ? (entry + k) % P : (entry + P - k % P) % P);
    }
    return out;
  }

  // The count printed in the branching lemma, floor(2 floor(P/8) / gap) + 1.
  inline size_t lemma_branching_count(size_t P, rational const& lambda) {
    size_t gap = static_cast<size_t>(ceil(rational(lambda * P))) - 1;
    if (gap == 0) {
      throw cdim_error("lemma_branching_count: need lambda * |dR| > 1");
    }
    return 2 * (P / 8) / gap + 1;
  }

  inline size_t branching_lower_bound(rational const& lambda) {
    return static_cast<size_t>(floor(rational(1 / (8 * lambda)))) + 1;
  }

  ////////////////////////////////////////////////////////////////////////
  // V-paths
  ////////////////////////////////////////////////////////////////////////

  struct VPath {
    std::vector<EdgeRef> edges;  // alpha(0), alpha(1), ...
    std::vector<FaceRef> faces;  // alpha(1/2), alpha(3/2), ...

    size_t length() const noexcept {
      return faces.size();
    }
  };

  struct Check {
    bool                     valid = true;
    std::vector<std::string> defects;

    void fail(std::string s) {
      valid = false;
      defects.push_back(std::move(s));
    }
  };

  namespace detail {
    inline std::vector<size_t> positions_in(CayleyComplex& X,
                                            FaceRef const& f,
                                            EdgeRef const& e) {
      std::vector<size_t> pos;
      for (auto const& [g, t] : X.faces_through(e)) {
        if (g == f) {
          pos.push_back(t);
        }
      }
      return pos;
    }

    inline std::set<size_t> vertex_set(CayleyComplex& X, FaceRef const& f) {
      auto v = X.face_vertices(f);
      return {v.begin(), v.end()};
    }
  }  // namespace detail

  // Immersion, the 3/8 rule in every crossed face, and the crossing
  // property R1 n R2 n R3 = empty for every window of three faces.
  inline Check validate_vpath(CayleyComplex& X, VPath const& a) {
    Check c;
    if (a.edges.size() != a.faces.size() + 1) {
      c.fail("shape: need one more edge midpoint than face centres");
      return c;
    }
    for (size_t i = 0; i < a.faces.size(); ++i) {
      auto const& f  = a.faces[i];
      size_t      P  = X.perimeter(f);
      auto        p0 = detail::positions_in(X, f, a.edges[i]);
      auto        p1 = detail::positions_in(X, f, a.edges[i + 1]);
      if (p0.empty() || p1.empty()) {
        c.fail("step " + std::to_string(i) + ": edge not in face boundary");
        continue;
      }
      if (a.edges[i] == a.edges[i + 1]) {
        c.fail("step " + std::to_string(i) + ": returns to the same midpoint");
      }
      if (i > 0 && a.faces[i - 1] == f) {
        c.fail("step " + std::to_string(i) + ": re-enters the previous face");
      }
      size_t best = 0;
      for (auto s : p0) {
        for (auto t : p1) {
          best = std::max(best, boundary_distance(P, s, t));
        }
      }
      if (!crosses_far(P, best)) {
        c.fail("step " + std::to_string(i) + ": boundary distance "
               + std::to_string(best) + " < 3/8 of " + std::to_string(P));
      }
    }
    for (size_t i = 0; i + 2 < a.faces.size(); ++i) {
      auto s0 = detail::vertex_set(X, a.faces[i]);
      auto s1 = detail::vertex_set(X, a.faces[i + 1]);
      auto s2 = detail::vertex_set(X, a.faces[i + 2]);
      for (auto v : s0) {
        if (s1.count(v) && s2.count(v)) {
          c.fail("window " + std::to_string(i)
                 + ": three consecutive faces share a vertex");
          break;
        }
      }
    }
    return c;
  }

  struct Ratio {
    Distance distance;  // between the endpoint midpoints
    size_t   length = 0;
    rational value  = 0;  // a lower bound unless distance.exact
  };

  inline Ratio quasiconvexity_ratio(CayleyComplex& X, VPath const& a) {
    if (a.length() == 0) {
      throw cdim_error("quasiconvexity_ratio: path has length zero");
    }
    Ratio r;
    r.distance = X.distance(a.edges.front(), a.edges.back());
    r.length   = a.length();
    r.value    = rational(r.distance.value, r.length);
    return r;
  }

  // Every V-path (3/8 rule, immersed) of length 1..max_length starting at
  // the midpoint of e; f is called on each.
  template <typename F>
  void for_each_vpath(CayleyComplex& X, EdgeRef e, size_t max_length, F&& f) {
    VPath a;
    a.edges.push_back(e);
    std::function<void()> grow = [&]() {
      if (a.length() == max_length) {
        return;
      }
      EdgeRef cur = a.edges.back();
      for (auto const& [face, pos] : X.faces_through(cur)) {
        if (!a.faces.empty() && a.faces.back() == face) {
          continue;
        }
        size_t P  = X.perimeter(face);
        auto   vs = X.face_vertices(face);
        auto const& r = X.presentation().relators[face.relator];
        for (size_t t = 0; t < P; ++t) {
          if (!crosses_far(P, boundary_distance(P, pos, t))) {
            continue;
          }
          a.faces.push_back(face);
          a.edges.push_back(X.edge(vs[t], r[t]));
          f(static_cast<VPath const&>(a));
          grow();
          a.faces.pop_back();
          a.edges.pop_back();
        }
      }
    };
    grow();
  }

  ////////////////////////////////////////////////////////////////////////
  // Branching walls
  ////////////////////////////////////////////////////////////////////////

  struct WallNode {
    bool                black  = true;
    EdgeRef             edge;         // black
    FaceRef             face;         // white
    long                parent = -1;
    size_t              layer  = 0;   // white layers above this node
    size_t              position = 0; // black: position in the parent face
    std::vector<size_t> children;
  };

  struct BranchingWall {
    EdgeRef               root;
    rational              lambda;
    size_t                depth = 0;
    std::vector<WallNode> nodes;  // nodes[0] is the root

    size_t white_count() const {
      return static_cast<size_t>(std::count_if(
          nodes.begin(), nodes.end(), [](auto const& n) { return !n.black; }));
    }
  };

  // Follows every V'-path from the midpoint of root for `depth` face
  // crossings.  The travel direction in each face is that of the crossed
  // edge, oriented towards its positive generator.
  inline BranchingWall grow_branching_wall(CayleyComplex&  X,
                                           EdgeRef         root,
                                           size_t          depth,
                                           rational const& lambda) {
    BranchingWall w;
    w.root   = root;
    w.lambda = lambda;
    w.depth  = depth;
    w.nodes.push_back({});
    w.nodes[0].edge = root;
    std::deque<size_t> exposed{0};
    while (!exposed.empty()) {
      size_t b = exposed.front();
      exposed.pop_front();
      if (w.nodes[b].layer == depth) {
        continue;
      }
      EdgeRef e           = w.nodes[b].edge;
      long    parent_face = w.nodes[b].parent;
      for (auto const& [face, pos] : X.faces_through(e)) {
        if (parent_face >= 0 && w.nodes[parent_face].face == face) {
          continue;
        }
        auto const& r       = X.presentation().relators[face.relator];
        size_t      P       = r.size();
        bool        forward = r[pos] > 0;
        size_t      white   = w.nodes.size();
        WallNode    wn;
        wn.black  = false;
        wn.face   = face;
        wn.parent = static_cast<long>(b);
        wn.layer  = w.nodes[b].layer + 1;
        w.nodes.push_back(wn);
        w.nodes[b].children.push_back(white);
        auto vs = X.face_vertices(face);
        for (size_t t : vprime_targets(P, pos, lambda, forward)) {
          WallNode bn;
          bn.black    = true;
          bn.edge     = X.edge(vs[t], r[t]);
          bn.parent   = static_cast<long>(white);
          bn.layer    = wn.layer;
          bn.position = t;
          w.nodes[white].children.push_back(w.nodes.size());
          exposed.push_back(w.nodes.size());
          w.nodes.push_back(bn);
        }
      }
    }
    return w;
  }

  // Distinct tree vertices map to distinct midpoints and centres.
  inline bool check_wall_embedding(BranchingWall const& w) {
    std::set<EdgeRef> edges;
    std::set<FaceRef> faces;
    for (auto const& n : w.nodes) {
      bool fresh = n.black ? edges.insert(n.edge).second
                           : faces.insert(n.face).second;
      if (!fresh) {
        return false;
      }
    }
    return true;
  }

  // Root-to-leaf V-paths of the wall.
  inline std::vector<VPath> wall_paths(BranchingWall const& w) {
    std::vector<VPath> out;
    for (size_t i = 0; i < w.nodes.size(); ++i) {
      if (!w.nodes[i].black || !w.nodes[i].children.empty() || i == 0) {
        continue;
      }
      VPath a;
      for (long v = static_cast<long>(i); v >= 0; v = w.nodes[v].parent) {
        if (w.nodes[v].black) {
          a.edges.push_back(w.nodes[v].edge);
        } else {
          a.faces.push_back(w.nodes[v].face);
        }
      }
      std::reverse(a.edges.begin(), a.edges.end());
      std::reverse(a.faces.begin(), a.faces.end());
      out.push_back(std::move(a));
    }
    return out;
  }

  // Branching pairs go into different faces: two black children of one
  // white vertex never continue into a common face.
  inline size_t branching_pair_violations(BranchingWall const& w) {
    size_t bad = 0;
    for (auto const& n : w.nodes) {
      if (n.black) {
        continue;
      }
      std::map<FaceRef, size_t> seen;
      for (auto c : n.children) {
        for (auto g : w.nodes[c].children) {
          ++seen[w.nodes[g].face];
        }
      }
      for (auto const& [f, k] : seen) {
        bad += k > 1;
      }
    }
    return bad;
  }

  ////////////////////////////////////////////////////////////////////////
  // Elementary polygonal complexes
  ////////////////////////////////////////////////////////////////////////

  struct EPCFace {
    size_t              white;  // wall node
    std::vector<size_t> black;  // black wall nodes in boundary order
    size_t perimeter() const noexcept {
      return 2 * black.size();
    }
  };

  struct EPC {
    std::vector<EPCFace>     faces;
    std::map<size_t, size_t> thickness;  // black node -> faces containing it
    std::set<size_t>         frontier;   // unexpanded black leaves
  };

  struct EPCReport {
    bool                     valid = true;
    std::vector<std::string> defects;
    size_t                   m_min         = 0;  // least half-perimeter
    size_t                   max_perimeter = 0;
    size_t                   k             = 0;  // greatest black thickness
    size_t                   min_black     = 0;  // least interior black thickness
    size_t                   frontier      = 0;
  };

  // Each white vertex of degree d becomes a 2d-gon whose black edges are its
  // neighbours, taken in order around the face.
  inline EPC to_epc(BranchingWall const& w) {
    EPC c;
    for (size_t i = 0; i < w.nodes.size(); ++i) {
      auto const& n = w.nodes[i];
      if (n.black) {
        size_t deg = n.children.size() + (n.parent >= 0 ? 1 : 0);
        c.thickness[i] = deg;
        if (n.children.empty() && n.layer == w.depth) {
          c.frontier.insert(i);
        }
        continue;
      }
      EPCFace f{i, {}};
      size_t  p = static_cast<size_t>(n.parent);
      f.black.push_back(p);
      std::vector<size_t> kids = n.children;
      std::sort(kids.begin(), kids.end(), [&](size_t a, size_t b) {
        return w.nodes[a].position < w.nodes[b].position;
      });
      f.black.insert(f.black.end(), kids.begin(), kids.end());
      c.faces.push_back(std::move(f));
    }
    return c;
  }

  // Even perimeters >= 6, faces meeting in at most one edge, white edges of
  // thickness one, interior black edges of thickness >= 2.
  inline EPCReport validate_epc(EPC const& c) {
    EPCReport r;
    r.frontier = c.frontier.size();
    if (c.faces.empty()) {
      return r;
    }
    r.m_min = SIZE_MAX;
    std::map<size_t, std::vector<size_t>> faces_of;
    for (size_t i = 0; i < c.faces.size(); ++i) {
      auto const& f = c.faces[i];
      size_t      P = f.perimeter();
      r.m_min         = std::min(r.m_min, P / 2);
      r.max_perimeter = std::max(r.max_perimeter, P);
      if (P < 6) {
        r.valid = false;
        r.defects.push_back("face " + std::to_string(i) + " has perimeter "
                            + std::to_string(P) + " < 6");
      }
      if (std::set<size_t>(f.black.begin(), f.black.end()).size()
          != f.black.size()) {
        r.valid = false;
        r.defects.push_back("face " + std::to_string(i)
                            + " repeats a black edge");
      }
      for (auto b : f.black) {
        faces_of[b].push_back(i);
      }
    }
    std::map<std::pair<size_t, size_t>, size_t> shared;
    for (auto const& [b, fs] : faces_of) {
      for (size_t i = 0; i < fs.size(); ++i) {
        for (size_t j = i + 1; j < fs.size(); ++j) {
          if (++shared[{fs[i], fs[j]}] > 1) {
            r.valid = false;
            r.defects.push_back("faces " + std::to_string(fs[i]) + " and "
                                + std::to_string(fs[j])
                                + " share more than one edge");
          }
        }
      }
    }
    r.min_black = SIZE_MAX;
    for (auto const& [b, t] : c.thickness) {
      if (c.frontier.count(b)) {
        continue;
      }
      if (faces_of[b].size() != t) {
        r.valid = false;
        r.defects.push_back("black edge " + std::to_string(b)
                            + " thickness mismatch");
      }
      r.k         = std::max(r.k, t);
      r.min_black = std::min(r.min_black, t);
      if (t < 2) {
        r.valid = false;
        r.defects.push_back("black edge " + std::to_string(b)
                            + " has thickness " + std::to_string(t) + " < 2");
      }
    }
    if (r.min_black == SIZE_MAX) {
      r.min_black = 0;
    }
    return r;
  }

}  // namespace cdim

#endif  // CDIM_WALLS_HPP_
