// Combinatorial round trees: geodesic extension in balls, layered
// construction in the Cayley complex, and the checks of their defining
// properties.

#ifndef CDIM_ROUNDTREE_HPP_
#define CDIM_ROUNDTREE_HPP_

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cancellation.hpp"
#include "cayley.hpp"
#include "matching.hpp"
#include "numeric.hpp"
#include "rng.hpp"

namespace cdim {

  ////////////////////////////////////////////////////////////////////////
  // Toy relators
  ////////////////////////////////////////////////////////////////////////

  // A cyclically reduced word on m generators in which every reduced word of
  // length t occurs, as a cyclic subword of it or of its inverse, exactly
  // once.  Randomised depth-first search with restarts; empty if the budget
  // runs out.
  inline word_type covering_relator(size_t   m,
                                    size_t   t,
                                    uint64_t seed,
                                    size_t   restarts   = 200,
                                    size_t   node_limit = 200000) {
    auto key = [](word_type const& w) {
      word_type v = inverse(w);
      return word_less(v, w) ? v : w;
    };
    auto   all = reduced_words(m, t);
    std::set<word_type, WordLess> pairs;
    for (auto const& w : all) {
      pairs.insert(key(w));
    }
    size_t const N = pairs.size();
    for (size_t attempt = 0; attempt < restarts; ++attempt) {
      auto g = make_stream(seed, {attempt});
      word_type path = all[uniform_below(g, all.size())];
      std::set<word_type, WordLess> used{key(path)};
      size_t nodes = 0;
      std::function<bool()> rec = [&]() -> bool {
        if (path.size() == N) {
          if (path.back() == inverse(path.front())) {
            return false;
          }
          std::set<word_type, WordLess> extra;
          for (size_t i = N - t + 1; i < N; ++i) {
            word_type w;
            for (size_t j = 0; j < t; ++j) {
              w.push_back(path[(i + j) % N]);
            }
            if (used.count(key(w)) || !extra.insert(key(w)).second) {
              return false;
            }
          }
          return true;
        }
        if (++nodes > node_limit) {
          return false;
        }
        std::vector<letter_type> opts;
        for (int r = 0; r < static_cast<int>(2 * m); ++r) {
          letter_type x = letter_from_rank(r);
          if (x != inverse(path.back())) {
            opts.push_back(x);
          }
        }
        for (size_t i = opts.size(); i > 1; --i) {
          std::swap(opts[i - 1], opts[uniform_below(g, i)]);
        }
        for (auto x : opts) {
          word_type w(path.end() - static_cast<long>(t - 1), path.end());
          w.push_back(x);
          auto k = key(w);
          if (used.count(k)) {
            continue;
          }
          used.insert(k);
          path.push_back(x);
          if (rec()) {
            return true;
          }
          path.pop_back();
          used.erase(k);
        }
        return false;
      };
      if (N >= t && rec()) {
        return path;
      }
    }
    return {};
  }

  ////////////////////////////////////////////////////////////////////////
  // Geodesic extension in a ball
  ////////////////////////////////////////////////////////////////////////

  struct ExtensionResult {
    std::vector<size_t> endpoints;   // ball vertices, sorted
    std::optional<size_t> exceptional;  // the point b with two non-extending
                                        // neighbours, if any
    std::vector<letter_type> ruled_out;  // first letters excluded because of b
  };

  // Endpoints u with d(u', u) = eta and d(1, u) = d(1, u') + eta reached by a
  // path whose first letter is neither `forbidden` nor a direction leading
  // to the exceptional point.
  inline ExtensionResult extension_set(BallComplex const& b,
                                       size_t             u0,
                                       size_t             eta,
                                       letter_type        forbidden,
                                       bool               enforce_range = true) {
    auto const& p = b.presentation;
    if (enforce_range && !p.relators.empty()
        && 6 * (eta + 1) >= p.min_relator_length()) {
      throw cdim_error("extension_set: need eta + 1 < M'/6 (eta = "
                       + std::to_string(eta) + ", M' = "
                       + std::to_string(p.min_relator_length()) + ")");
    }
    if (b.dist[u0] + eta + 1 > b.radius) {
      throw cdim_error("extension_set: ball radius too small for this eta");
    }
    size_t const gens = 2 * p.rank;
    // Outward paths from u0, keeping the set of first letters that reach
    // each vertex.
    std::map<size_t, std::set<letter_type>> layer{{u0, {}}}, all = layer;
    for (size_t k = 0; k < eta; ++k) {
      std::map<size_t, std::set<letter_type>> nxt;
      for (auto const& [v, firsts] : layer) {
        for (size_t r = 0; r < gens; ++r) {
          letter_type x = letter_from_rank(static_cast<int>(r));
          long        w = b.neighbour(v, x);
          if (w < 0 || b.dist[w] != b.dist[v] + 1) {
            continue;
          }
          auto& s = nxt[static_cast<size_t>(w)];
          if (k == 0) {
            s.insert(x);
          } else {
            s.insert(firsts.begin(), firsts.end());
          }
        }
      }
      layer = std::move(nxt);
      for (auto const& [v, f] : layer) {
        all[v].insert(f.begin(), f.end());
      }
    }
    ExtensionResult res;
    for (auto const& [v, f] : all) {
      if (non_extending_neighbours(b, v) >= 2) {
        res.exceptional = v;
        if (v != u0) {
          res.ruled_out.assign(f.begin(), f.end());
        }
        break;
      }
    }
    if (eta == 0) {
      res.endpoints = {u0};
      return res;
    }
    for (auto const& [v, f] : layer) {
      for (auto x : f) {
        if (x != forbidden
            && std::find(res.ruled_out.begin(), res.ruled_out.end(), x)
                   == res.ruled_out.end()) {
          res.endpoints.push_back(v);
          break;
        }
      }
    }
    return res;
  }

  ////////////////////////////////////////////////////////////////////////
  // Round trees
  ////////////////////////////////////////////////////////////////////////

  enum class TreeMode { few, density };

  struct RoundTreeParams {
    TreeMode mode    = TreeMode::density;
    size_t   seg_min = 1;
    size_t   seg_max = 2;
    size_t   K       = 1;  // density mode: extension length
    size_t   eta     = 0;  // few mode: extension length; density: fixed part
    size_t   T       = 2;
    size_t   layers  = 2;
    rational density = rational(9, 100);
    rational epsilon = rational(1, 24);
    size_t   mstar   = 0;  // every reduced word of this length is a subword
  };

  struct ParamCheck {
    std::vector<std::string> violations;
    std::vector<std::string> notes;
    bigint                   formula_T = 0;

    bool ok() const {
      return violations.empty();
    }
  };

  // The inequalities each mode needs, as far as the presentation allows
  // them to be checked.
  inline ParamCheck check_params(Presentation const& p, RoundTreeParams const& q) {
    ParamCheck c;
    size_t const l  = p.min_relator_length();
    size_t const m  = p.rank;
    auto         no = [&](std::string s) { c.violations.push_back(std::move(s)); };
    if (q.seg_min == 0 || q.seg_min > q.seg_max) {
      no("segment range must satisfy 1 <= min <= max");
    }
    if (q.T == 0) {
      no("T must be positive");
    }
    if (q.mode == TreeMode::few) {
      if (q.seg_min != 3 || q.seg_max != 6) {
        c.notes.push_back("few mode normally splits into segments of length 3..6");
      }
      if (q.eta < 3) {
        no("few mode needs eta >= 3");
      } else {
        c.formula_T = boost::multiprecision::pow(bigint(2 * m - 1),
                                                 static_cast<unsigned>(q.eta - 3));
      }
      if (6 * (q.eta + 1) >= l) {
        no("geodesic extension needs eta + 1 < M'/6");
      }
    } else {
      if (q.eta >= q.K) {
        no("density mode needs eta < K");
      } else {
        c.formula_T
            = boost::multiprecision::pow(bigint(2 * m - 1),
                                        static_cast<unsigned>(q.K - q.eta - 1));
      }
      if (q.mstar == 0) {
        no("density mode needs M* (covering length) > 0");
      } else {
        if (2 * q.K + q.seg_max > q.mstar) {
          no("closing words have length up to 2K + max segment > M*");
        }
        if (q.K != q.mstar / 3) {
          c.notes.push_back("K differs from floor(M*/3)");
        }
        bigint want = ceil(rational(4 * q.density * l / 5));
        if (want != q.mstar) {
          c.notes.push_back("M* differs from ceil(4dl/5) = " + want.str());
        }
      }
      if (2 * q.seg_min > q.K + 1 || q.seg_max > q.K) {
        c.notes.push_back("segment range differs from [K/2, K]");
      }
      rational lhs = rational(q.K) - q.eta;
      rational a   = rational(l, 6) - 1;
      rational b   = rational(3, 2) * q.epsilon * l - 1;
      if (!(lhs < std::min(a, b))) {
        no("need K - eta < min(l/6 - 1, 3 eps l/2 - 1)");
      }
      if (q.density >= rational(1, 8) || q.epsilon >= rational(1, 6) - q.density) {
        no("need d < 1/8 and eps < 1/6 - d");
      }
    }
    if (c.formula_T > 0 && bigint(q.T) > c.formula_T) {
      c.notes.push_back("requested T exceeds the branching formula "
                        + c.formula_T.str());
    }
    return c;
  }

  struct TreeCell {
    size_t              layer = 0;
    std::vector<size_t> boundary;  // tree vertices, reading `word` from [0]
    word_type           word;
    size_t              relator  = 0;
    bool                inverted = false;
    size_t              offset   = 0;
  };

  struct TreeBranch {
    std::vector<size_t> prefix;  // a_n
    long                parent = -1;
    std::vector<size_t> cells;   // cells added at this layer
    std::vector<size_t> left, right, outer;  // L, R from 1; E from L to R
    std::vector<char>   member;  // tree vertices of A_{a_n}
  };

  struct RoundTree {
    RoundTreeParams          params;
    std::vector<size_t>      element;  // tree vertex -> group element
    std::vector<std::vector<size_t>> adj;
    std::vector<TreeCell>    cells;
    std::vector<std::vector<size_t>> layers;  // branch ids per layer
    std::vector<TreeBranch>  branches;
    size_t                   achieved_V = 0;
    size_t                   achieved_H = 0;
    size_t                   collisions = 0;  // tree vertices sharing an element
    size_t                   shared_vertices = 0;  // arc vertices on a neighbour
    bool                     halted     = false;
    std::string              halt_reason;
    word_type                missing_word;
    std::optional<HallViolator> violator;
    bool                     beyond_formula = false;

    size_t vertex_count() const {
      return element.size();
    }
  };

  namespace detail {
    struct TreeBuilder {
      CayleyComplex&      X;
      RoundTree&          t;
      std::unordered_map<size_t, size_t> owner;  // element -> first tree vertex
      std::unordered_set<uint64_t>       edge_set;

      size_t add_vertex(size_t g) {
        size_t v = t.element.size();
        t.element.push_back(g);
        t.adj.emplace_back();
        if (!owner.emplace(g, v).second) {
          ++t.collisions;
        }
        return v;
      }

      void add_edge(size_t a, size_t b) {
        uint64_t k = (static_cast<uint64_t>(std::min(a, b)) << 32) | std::max(a, b);
        if (edge_set.insert(k).second) {
          t.adj[a].push_back(b);
          t.adj[b].push_back(a);
        }
      }

      std::vector<size_t> distances_from(size_t s, std::vector<char> const& member) {
        std::vector<size_t> d(t.element.size(), SIZE_MAX);
        std::deque<size_t>  q{s};
        d[s] = 0;
        while (!q.empty()) {
          size_t v = q.front();
          q.pop_front();
          for (auto w : t.adj[v]) {
            if (w < member.size() && member[w] && d[w] == SIZE_MAX) {
              d[w] = d[v] + 1;
              q.push_back(w);
            }
          }
        }
        return d;
      }
    };

    // Lexicographically least placement of w at the start of a cyclic
    // conjugate of some relator or its inverse.
    struct Placement {
      size_t    relator  = 0;
      size_t    offset   = 0;
      bool      inverted = false;
      word_type cell;  // the conjugate, beginning with w
    };

    inline std::optional<Placement> place(Presentation const& p,
                                          word_type const&    w) {
      for (size_t j = 0; j < p.relators.size(); ++j) {
        auto const& r = p.relators[j];
        if (r.size() <= w.size()) {
          continue;
        }
        for (size_t s = 0; s < r.size(); ++s) {
          for (bool inv : {false, true}) {
            word_type c = rotate(inv ? inverse(r) : r, s);
            if (std::equal(w.begin(), w.end(), c.begin())) {
              return Placement{j, s, inv, std::move(c)};
            }
          }
        }
      }
      return std::nullopt;
    }
  }  // namespace detail

  // Builds the layers of a round tree in X.  Each endpoint of the outer
  // boundary E of a branch sprouts T extension paths (the first T admissible
  // words in shortlex order); branch c continues with its c-th path at the
  // first endpoint and, across each segment, with the path matched to it
  // (identity in density mode, a perfect matching of the closing graph in
  // few mode).  Each segment is closed by the least relator placement that
  // reads P^-1 seg P'.
  inline RoundTree build_round_tree(CayleyComplex& X, RoundTreeParams const& q) {
    auto const& p = X.presentation();
    RoundTree   t;
    t.params = q;
    auto chk = check_params(p, q);
    if (!chk.ok()) {
      throw cdim_error("round tree parameters: " + chk.violations.front());
    }
    t.beyond_formula = bigint(q.T) > chk.formula_T;
    detail::TreeBuilder B{X, t, {}, {}};
    size_t const ext   = q.mode == TreeMode::few ? q.eta : q.K;
    size_t const fixed = q.mode == TreeMode::few ? 3 : q.eta + 1;

    // Layer 0: the cell reading relator 0 from the identity.
    {
      auto const& r = p.relators.at(0);
      TreeCell    c;
      c.word = r;
      size_t g = X.identity();
      for (size_t i = 0; i < r.size(); ++i) {
        c.boundary.push_back(B.add_vertex(g));
        g = X.neighbour(g, r[i]);
      }
      for (size_t i = 0; i < r.size(); ++i) {
        B.add_edge(c.boundary[i], c.boundary[(i + 1) % r.size()]);
      }
      t.cells.push_back(c);
      TreeBranch b;
      b.cells = {0};
      b.left  = {c.boundary[0], c.boundary[1]};
      b.right = {c.boundary[0], c.boundary.back()};
      b.outer.assign(c.boundary.begin() + 1, c.boundary.end());
      b.member.assign(t.element.size(), 1);
      t.branches.push_back(std::move(b));
      t.layers.push_back({0});
    }
    t.achieved_V = q.T;

    for (size_t layer = 1; layer <= q.layers && !t.halted; ++layer) {
      std::vector<size_t> next_layer;
      for (size_t bi : t.layers[layer - 1]) {
        if (t.halted) {
          break;
        }
        // Copy what is needed: branches may reallocate below.
        std::vector<size_t> E      = t.branches[bi].outer;
        std::vector<char>   member = t.branches[bi].member;
        member.resize(t.element.size(), 0);
        auto dA = B.distances_from(0, member);

        // Admissible extension words at a tree vertex: reduced, of length
        // ext, through group elements not yet in the tree.  The first T in
        // shortlex order sharing the first `fixed` letters, or the first T
        // overall when too few share them.
        bool prefix_shortfall = false;
        auto candidates = [&](size_t u) {
          std::vector<word_type> found;
          word_type              w;
          std::vector<size_t>    path{t.element[u]};
          std::function<void()>  rec = [&]() {
            if (found.size() >= 64 * q.T) {
              return;
            }
            if (w.size() == ext) {
              found.push_back(w);
              return;
            }
            for (int r = 0; r < static_cast<int>(2 * p.rank); ++r) {
              letter_type x = letter_from_rank(r);
              if (!w.empty() && x == inverse(w.back())) {
                continue;
              }
              size_t h = X.neighbour(path.back(), x);
              if (B.owner.count(h)
                  || std::find(path.begin(), path.end(), h) != path.end()) {
                continue;
              }
              w.push_back(x);
              path.push_back(h);
              rec();
              w.pop_back();
              path.pop_back();
            }
          };
          rec();
          std::vector<word_type> with_prefix;
          long const             f = static_cast<long>(std::min(fixed, ext));
          for (auto const& c : found) {
            if (std::equal(c.begin(), c.begin() + f, found.front().begin())) {
              with_prefix.push_back(c);
            }
          }
          prefix_shortfall = with_prefix.size() < q.T;
          return prefix_shortfall ? found : with_prefix;
        };

        // Segment endpoints: not local minima of d_A(1, .) on E, and with T
        // admissible extensions.
        size_t const N = E.size() - 1;
        auto admissible = [&](size_t i) {
          bool minimum = i > 0 && i < N && dA[E[i]] <= dA[E[i - 1]]
                         && dA[E[i]] <= dA[E[i + 1]];
          return !minimum && candidates(E[i]).size() >= q.T;
        };
        std::vector<size_t> ends{0};
        while (ends.back() < N) {
          size_t cur = ends.back(), rem = N - cur;
          if (rem <= q.seg_max && rem >= q.seg_min) {
            ends.push_back(N);
            break;
          }
          bool found = false;
          for (size_t len = q.seg_max; len >= q.seg_min && len > 0; --len) {
            size_t nx = cur + len;
            if (nx >= N || N - nx < q.seg_min || !admissible(nx)) {
              continue;
            }
            ends.push_back(nx);
            found = true;
            break;
          }
          if (!found) {
            t.halted      = true;
            t.halt_reason = "no admissible segment endpoint after position "
                            + std::to_string(cur);
            break;
          }
        }
        if (t.halted) {
          break;
        }

        // Extension paths: a trie of tree vertices per endpoint.
        struct Ext {
          std::vector<word_type>           words;
          std::vector<std::vector<size_t>> verts;  // tree vertices after u'
        };
        std::vector<Ext> exts(ends.size());
        for (size_t j = 0; j < ends.size(); ++j) {
          size_t u      = E[ends[j]];
          size_t g0     = t.element[u];
          auto   chosen = candidates(u);
          if (chosen.size() < q.T) {
            t.halted      = true;
            t.halt_reason = "only " + std::to_string(chosen.size())
                            + " admissible extension paths at an endpoint";
            break;
          }
          t.beyond_formula = t.beyond_formula || prefix_shortfall;
          // Create vertices, sharing common prefixes.
          std::map<word_type, size_t, WordLess> made;
          for (size_t c = 0; c < q.T; ++c) {
            auto const&         word = chosen[c];
            std::vector<size_t> vs;
            size_t              prev = u;
            size_t              g    = g0;
            for (size_t i = 0; i < word.size(); ++i) {
              g = X.neighbour(g, word[i]);
              word_type pre(word.begin(), word.begin() + static_cast<long>(i + 1));
              auto      it = made.find(pre);
              size_t    v;
              if (it == made.end()) {
                v = B.add_vertex(g);
                made.emplace(pre, v);
                B.add_edge(prev, v);
              } else {
                v = it->second;
              }
              vs.push_back(v);
              prev = v;
            }
            exts[j].words.push_back(word);
            exts[j].verts.push_back(std::move(vs));
          }
        }
        if (t.halted) {
          break;
        }

        // Matchings across segments.
        std::vector<std::vector<size_t>> mate(ends.size() - 1);
        std::vector<word_type>           segs(ends.size() - 1);
        for (size_t j = 0; j + 1 < ends.size(); ++j) {
          word_type seg;
          for (size_t i = ends[j]; i < ends[j + 1]; ++i) {
            size_t a = t.element[E[i]], b = t.element[E[i + 1]];
            letter_type lab = 0;
            for (int r = 0; r < static_cast<int>(2 * p.rank); ++r) {
              letter_type x = letter_from_rank(r);
              if (X.neighbour(a, x) == b) {
                lab = x;
                break;
              }
            }
            seg.push_back(lab);
          }
          segs[j] = seg;
          auto closing = [&](size_t x, size_t y) {
            return concat(concat(inverse(exts[j].words[x]), seg),
                          exts[j + 1].words[y]);
          };
          if (q.mode == TreeMode::density) {
            mate[j].resize(q.T);
            for (size_t c = 0; c < q.T; ++c) {
              mate[j][c] = c;
            }
            continue;
          }
          auto       windows = window_set(p, 2 * ext + seg.size());
          MatchGraph g(q.T);
          for (size_t x = 0; x < q.T; ++x) {
            for (size_t y = 0; y < q.T; ++y) {
              if (windows.count(closing(x, y))) {
                g.add_edge(x, y);
              }
            }
          }
          auto mr = perfect_matching(g, true);
          if (!mr.perfect) {
            t.halted      = true;
            t.violator    = mr.violator;
            t.halt_reason = "closing graph has no perfect matching";
            auto const& h = *mr.violator;
            size_t      x = h.left_side ? h.set.front() : 0;
            size_t      y = h.left_side ? 0 : h.set.front();
            if (h.left_side) {
              for (size_t v = 0; v < q.T; ++v) {
                if (!std::binary_search(h.neighbours.begin(), h.neighbours.end(), v)) {
                  y = v;
                  break;
                }
              }
            } else {
              for (size_t v = 0; v < q.T; ++v) {
                if (!std::binary_search(h.neighbours.begin(), h.neighbours.end(), v)) {
                  x = v;
                  break;
                }
              }
            }
            t.missing_word = closing(x, y);
            break;
          }
          mate[j].resize(q.T);
          for (size_t c = 0; c < q.T; ++c) {
            mate[j][c] = static_cast<size_t>(mr.mate[c]);
          }
        }
        if (t.halted) {
          break;
        }

        // One child branch per c.
        for (size_t c = 0; c < q.T && !t.halted; ++c) {
          TreeBranch child;
          child.prefix = t.branches[bi].prefix;
          child.prefix.push_back(c);
          child.parent = static_cast<long>(bi);
          std::vector<size_t> idx(ends.size());
          idx[0] = c;
          for (size_t j = 0; j + 1 < ends.size(); ++j) {
            idx[j + 1] = mate[j][idx[j]];
          }
          child.left = t.branches[bi].left;
          for (auto v : exts[0].verts[idx[0]]) {
            child.left.push_back(v);
          }
          child.right = t.branches[bi].right;
          for (auto v : exts.back().verts[idx.back()]) {
            child.right.push_back(v);
          }
          std::vector<size_t> new_vertices;
          std::unordered_map<size_t, size_t> local;
          for (size_t v = 0; v < member.size(); ++v) {
            if (member[v]) {
              local.emplace(t.element[v], v);
            }
          }
          for (size_t j = 0; j < ends.size(); ++j) {
            for (auto v : exts[j].verts[idx[j]]) {
              local.emplace(t.element[v], v);
            }
          }
          for (size_t j = 0; j + 1 < ends.size(); ++j) {
            auto const& P  = exts[j].words[idx[j]];
            auto const& Pv = exts[j].verts[idx[j]];
            auto const& Q  = exts[j + 1].words[idx[j + 1]];
            auto const& Qv = exts[j + 1].verts[idx[j + 1]];
            word_type   W  = concat(concat(inverse(P), segs[j]), Q);
            auto        pl = detail::place(p, W);
            if (!pl) {
              t.halted       = true;
              t.halt_reason  = "no relator contains the closing word";
              t.missing_word = W;
              break;
            }
            TreeCell cell;
            cell.layer    = layer;
            cell.word     = pl->cell;
            cell.relator  = pl->relator;
            cell.inverted = pl->inverted;
            cell.offset   = pl->offset;
            // Boundary: u (end of P), back along P to u', along seg, out
            // along Q to its end, then the fresh arc Z back to u.
            for (size_t i = Pv.size(); i-- > 0;) {
              cell.boundary.push_back(Pv[i]);
            }
            for (size_t i = ends[j]; i <= ends[j + 1]; ++i) {
              cell.boundary.push_back(E[i]);
            }
            for (auto v : Qv) {
              cell.boundary.push_back(v);
            }
            size_t g = t.element[cell.boundary.back()];
            for (size_t i = W.size(); i + 1 < cell.word.size(); ++i) {
              g = X.neighbour(g, cell.word[i]);
              size_t v;
              if (auto it = local.find(g); it != local.end()) {
                // Neighbouring cells meeting along a piece.
                v = it->second;
                ++t.shared_vertices;
              } else {
                v = B.add_vertex(g);
                local.emplace(g, v);
                new_vertices.push_back(v);
              }
              cell.boundary.push_back(v);
            }
            if (X.neighbour(g, cell.word.back()) != t.element[cell.boundary.front()]) {
              throw cdim_error("round tree: closing cell does not close up");
            }
            for (size_t i = 0; i < cell.boundary.size(); ++i) {
              B.add_edge(cell.boundary[i],
                         cell.boundary[(i + 1) % cell.boundary.size()]);
            }
            // The new outer boundary runs along Z^-1 from u to u_{j+1}.
            if (j == 0) {
              child.outer.push_back(cell.boundary.front());
            }
            for (size_t i = cell.boundary.size(); i-- > W.size() + 1;) {
              child.outer.push_back(cell.boundary[i]);
            }
            child.outer.push_back(cell.boundary[W.size()]);
            child.cells.push_back(t.cells.size());
            t.cells.push_back(std::move(cell));
          }
          if (t.halted) {
            break;
          }
          // Pieces shared by neighbouring cells leave spurs on the outer
          // path; fold them away.
          std::vector<size_t> folded;
          for (auto v : child.outer) {
            if (folded.size() >= 2 && folded[folded.size() - 2] == v) {
              folded.pop_back();
            } else if (folded.empty() || folded.back() != v) {
              folded.push_back(v);
            }
          }
          child.outer  = std::move(folded);
          child.member = member;
          child.member.resize(t.element.size(), 0);
          for (auto const& e : exts) {
            for (auto v : e.verts[idx[&e - exts.data()]]) {
              child.member[v] = 1;
            }
          }
          for (auto v : new_vertices) {
            child.member[v] = 1;
          }
          next_layer.push_back(t.branches.size());
          t.branches.push_back(std::move(child));
        }
      }
      if (!t.halted) {
        t.layers.push_back(std::move(next_layer));
      }
    }

    // Horizontal branching: most new cells of one child meeting one cell of
    // its parent branch.
    for (auto const& b : t.branches) {
      if (b.parent < 0) {
        continue;
      }
      std::vector<size_t> old_cells;
      for (long a = b.parent; a >= 0; a = t.branches[a].parent) {
        old_cells.insert(old_cells.end(), t.branches[a].cells.begin(),
                         t.branches[a].cells.end());
      }
      for (auto oc : old_cells) {
        std::set<size_t> ov(t.cells[oc].boundary.begin(), t.cells[oc].boundary.end());
        size_t           meet = 0;
        for (auto nc : b.cells) {
          auto const& bd = t.cells[nc].boundary;
          meet += std::any_of(bd.begin(), bd.end(),
                              [&](size_t v) { return ov.count(v) > 0; });
        }
        t.achieved_H = std::max(t.achieved_H, meet);
      }
    }
    return t;
  }

  ////////////////////////////////////////////////////////////////////////
  // Checks
  ////////////////////////////////////////////////////////////////////////

  inline std::vector<size_t> branch_cells(RoundTree const& t, size_t b) {
    std::vector<size_t> out;
    for (long a = static_cast<long>(b); a >= 0; a = t.branches[a].parent) {
      out.insert(out.end(), t.branches[a].cells.begin(), t.branches[a].cells.end());
    }
    return out;
  }

  inline std::set<size_t> branch_elements(RoundTree const& t, size_t b) {
    std::set<size_t> out;
    for (auto c : branch_cells(t, b)) {
      for (auto v : t.cells[c].boundary) {
        out.insert(t.element[v]);
      }
    }
    return out;
  }

  struct NestingReport {
    size_t pairs      = 0;
    size_t violations = 0;
  };

  // For leaves a, b agreeing to depth n and differing at n+1:
  // A_{a_n} in A_a n A_b in A_{a_{n+1}}, on group elements.
  inline NestingReport check_nesting(RoundTree const& t) {
    NestingReport r;
    if (t.layers.size() < 2) {
      return r;
    }
    auto const& leaves = t.layers.back();
    std::map<size_t, std::set<size_t>> cache;
    auto elems = [&](size_t b) -> std::set<size_t> const& {
      auto it = cache.find(b);
      if (it == cache.end()) {
        it = cache.emplace(b, branch_elements(t, b)).first;
      }
      return it->second;
    };
    auto ancestor = [&](size_t b, size_t depth) {
      while (t.branches[b].prefix.size() > depth) {
        b = static_cast<size_t>(t.branches[b].parent);
      }
      return b;
    };
    for (size_t i = 0; i < leaves.size(); ++i) {
      for (size_t j = i + 1; j < leaves.size(); ++j) {
        auto const& pa = t.branches[leaves[i]].prefix;
        auto const& pb = t.branches[leaves[j]].prefix;
        size_t      n  = 0;
        while (pa[n] == pb[n]) {
          ++n;
        }
        std::set<size_t> both;
        auto const&      A = elems(leaves[i]);
        auto const&      Bs = elems(leaves[j]);
        std::set_intersection(A.begin(), A.end(), Bs.begin(), Bs.end(),
                              std::inserter(both, both.begin()));
        auto const& lo = elems(ancestor(leaves[i], n));
        auto const& hi = elems(ancestor(leaves[i], n + 1));
        bool ok = std::includes(both.begin(), both.end(), lo.begin(), lo.end())
                  && std::includes(hi.begin(), hi.end(), both.begin(), both.end());
        ++r.pairs;
        r.violations += !ok;
      }
    }
    return r;
  }

  struct VHReport {
    size_t V = 0, H = 0;
    size_t max_new_cells = 0;  // over all cells of A_n, new cells of A_{n+1}
    bool   ok = true;
  };

  // Each cell of A_n meets at most V H cells of A_{n+1} \ A_n.
  inline VHReport check_vh(RoundTree const& t) {
    VHReport r;
    r.V = t.achieved_V;
    r.H = t.achieved_H;
    for (size_t n = 0; n + 1 < t.layers.size(); ++n) {
      std::set<size_t> old_cells, new_cells;
      for (auto b : t.layers[n]) {
        auto c = branch_cells(t, b);
        old_cells.insert(c.begin(), c.end());
      }
      for (auto b : t.layers[n + 1]) {
        new_cells.insert(t.branches[b].cells.begin(), t.branches[b].cells.end());
      }
      std::unordered_map<size_t, std::vector<size_t>> cells_at;
      for (auto nc : new_cells) {
        for (auto v : t.cells[nc].boundary) {
          cells_at[v].push_back(nc);
        }
      }
      for (auto oc : old_cells) {
        std::set<size_t> meet;
        for (auto v : t.cells[oc].boundary) {
          if (auto it = cells_at.find(v); it != cells_at.end()) {
            meet.insert(it->second.begin(), it->second.end());
          }
        }
        r.max_new_cells = std::max(r.max_new_cells, meet.size());
      }
    }
    r.ok = r.max_new_cells <= r.V * r.H;
    return r;
  }

  // BFS distances in A^(1) from tree vertex s.
  inline std::vector<size_t> tree_distances(RoundTree const& t, size_t s) {
    std::vector<size_t> d(t.element.size(), SIZE_MAX);
    std::deque<size_t>  q{s};
    d[s] = 0;
    while (!q.empty()) {
      size_t v = q.front();
      q.pop_front();
      for (auto w : t.adj[v]) {
        if (d[w] == SIZE_MAX) {
          d[w] = d[v] + 1;
          q.push_back(w);
        }
      }
    }
    return d;
  }

  struct QiGap {
    size_t pairs       = 0;
    size_t exact_pairs = 0;  // d_X known exactly
    size_t max_gap     = 0;  // upper bound on max (d_A - d_X)
    size_t violations  = 0;  // pairs with d_X > d_A
  };

  // Sampled pairs of tree vertices; d_X comes from the ball oracle, exact
  // inside it and a lower bound outside, so the gap reported is an upper
  // bound on the true one.
  inline QiGap qi_gap(CayleyComplex& X, RoundTree const& t, size_t samples,
                      uint64_t seed) {
    QiGap r;
    auto  g = make_stream(seed, {0x9147});
    for (size_t i = 0; i < samples; ++i) {
      size_t x  = uniform_below(g, t.element.size());
      size_t y  = uniform_below(g, t.element.size());
      auto   dA = tree_distances(t, x)[y];
      auto   dX = X.distance(t.element[x], t.element[y]);
      ++r.pairs;
      r.exact_pairs += dX.exact;
      if (dX.value > dA) {
        ++r.violations;
      } else {
        r.max_gap = std::max(r.max_gap, dA - dX.value);
      }
    }
    return r;
  }

  struct GeodesicReport {
    size_t checked    = 0;  // vertices with d_X(1, p) exact
    size_t mismatches = 0;  // d_X(1, p) != d_A(1, p)
  };

  // Every geodesic to 1 runs inside A, so d_X(1, p) = d_A(1, p); checked
  // wherever the oracle is exact.
  inline GeodesicReport check_geodesics_to_base(CayleyComplex& X, RoundTree const& t) {
    GeodesicReport r;
    auto           dA = tree_distances(t, 0);
    for (size_t v = 0; v < t.element.size(); ++v) {
      auto dX = X.distance(X.identity(), t.element[v]);
      if (!dX.exact) {
        continue;
      }
      ++r.checked;
      r.mismatches += dX.value != dA[v];
    }
    return r;
  }

}  // namespace cdim

#endif  // CDIM_ROUNDTREE_HPP_
