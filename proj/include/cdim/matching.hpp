// Balanced bipartite graphs, perfect matchings and Hall violators.

#ifndef CDIM_MATCHING_HPP_
#define CDIM_MATCHING_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "dehn.hpp"
#include "words.hpp"

namespace cdim {

  struct MatchGraph {
    size_t                           size = 0;  // vertices per side
    std::vector<std::vector<size_t>> adj;       // left -> right neighbours
    std::vector<word_type>           left_labels, right_labels;

    explicit MatchGraph(size_t n = 0) : size(n), adj(n) {}

    void add_edge(size_t u, size_t v) {
      adj[u].push_back(v);
    }

    size_t edge_count() const {
      size_t e = 0;
      for (auto const& a : adj) {
        e += a.size();
      }
      return e;
    }
  };

  struct HallViolator {
    bool                left_side = true;  // W lies among the left vertices
    std::vector<size_t> set;               // W
    std::vector<size_t> neighbours;        // N(W)
  };

  struct MatchResult {
    bool                        perfect = false;
    std::vector<long>           mate;  // left -> right, -1 if unmatched
    std::optional<HallViolator> violator;
  };

  // N(W) for W on the given side.
  inline std::vector<size_t> neighbourhood(MatchGraph const&          g,
                                           std::vector<size_t> const& w,
                                           bool                       left) {
    std::set<size_t> out;
    if (left) {
      for (auto u : w) {
        out.insert(g.adj[u].begin(), g.adj[u].end());
      }
    } else {
      std::set<size_t> ws(w.begin(), w.end());
      for (size_t u = 0; u < g.size; ++u) {
        for (auto v : g.adj[u]) {
          if (ws.count(v)) {
            out.insert(u);
            break;
          }
        }
      }
    }
    return {out.begin(), out.end()};
  }

  inline bool violates_hall(MatchGraph const& g, HallViolator const& h) {
    auto n = neighbourhood(g, h.set, h.left_side);
    return n.size() < h.set.size() && n == h.neighbours;
  }

  // Augmenting paths (Kuhn).  On failure the violator is the alternating
  // reachability set of an unmatched left vertex, so |W| = |N(W)| + 1.  With
  // `minimal`, W is also brought to size at most ceil(|T|/2) by passing to
  // the complement of N(W) on the other side.
  inline MatchResult perfect_matching(MatchGraph const& g, bool minimal = false) {
    size_t const      n = g.size;
    std::vector<long> mate_l(n, -1), mate_r(n, -1);
    std::vector<char> seen(n);

    std::function<bool(size_t)> augment = [&](size_t u) {
      for (auto v : g.adj[u]) {
        if (seen[v]) {
          continue;
        }
        seen[v] = 1;
        if (mate_r[v] < 0 || augment(static_cast<size_t>(mate_r[v]))) {
          mate_l[u] = static_cast<long>(v);
          mate_r[v] = static_cast<long>(u);
          return true;
        }
      }
      return false;
    };

    MatchResult res;
    long        free_left = -1;
    for (size_t u = 0; u < n; ++u) {
      std::fill(seen.begin(), seen.end(), 0);
      if (!augment(u) && free_left < 0) {
        free_left = static_cast<long>(u);
      }
    }
    res.mate    = mate_l;
    res.perfect = free_left < 0;
    if (res.perfect) {
      return res;
    }

    std::vector<char>   in_w(n, 0), in_n(n, 0);
    std::vector<size_t> stack{static_cast<size_t>(free_left)};
    in_w[free_left] = 1;
    while (!stack.empty()) {
      size_t u = stack.back();
      stack.pop_back();
      for (auto v : g.adj[u]) {
        if (in_n[v]) {
          continue;
        }
        in_n[v] = 1;
        long w  = mate_r[v];
        if (w >= 0 && !in_w[w]) {
          in_w[w] = 1;
          stack.push_back(static_cast<size_t>(w));
        }
      }
    }
    HallViolator h;
    for (size_t i = 0; i < n; ++i) {
      if (in_w[i]) {
        h.set.push_back(i);
      }
      if (in_n[i]) {
        h.neighbours.push_back(i);
      }
    }
    if (minimal && h.set.size() > (n + 1) / 2) {
      HallViolator c;
      c.left_side = false;
      for (size_t v = 0; v < n; ++v) {
        if (!in_n[v]) {
          c.set.push_back(v);
        }
      }
      c.neighbours = neighbourhood(g, c.set, false);
      while (c.set.size() > c.neighbours.size() + 1) {
        c.set.pop_back();
        c.neighbours = neighbourhood(g, c.set, false);
      }
      h = std::move(c);
    }
    res.violator = std::move(h);
    return res;
  }

  ////////////////////////////////////////////////////////////////////////
  // The graphs H_w
  ////////////////////////////////////////////////////////////////////////

  // Reduced words of length n, in shortlex order, avoiding `first_not` as
  // first letter and `last_not` as last letter.
  inline std::vector<word_type> reduced_words(size_t      m,
                                              size_t      n,
                                              letter_type first_not = 0,
                                              letter_type last_not  = 0) {
    std::vector<word_type> out;
    word_type              w;
    std::function<void()>  rec = [&]() {
      if (w.size() == n) {
        if (n == 0 || w.back() != last_not) {
          out.push_back(w);
        }
        return;
      }
      for (int r = 0; r < static_cast<int>(2 * m); ++r) {
        letter_type x = letter_from_rank(r);
        if (w.empty() ? x == first_not : x == inverse(w.back())) {
          continue;
        }
        w.push_back(x);
        rec();
        w.pop_back();
      }
    };
    rec();
    return out;
  }

  // Every cyclic subword of length n of every relator and its inverse.
  inline std::unordered_set<word_type, WordHash> window_set(Presentation const& p,
                                                            size_t n) {
    std::unordered_set<word_type, WordHash> out;
    for (auto const& r : p.relators) {
      if (r.size() < n) {
        continue;
      }
      for (auto const& s : {r, inverse(r)}) {
        for (size_t i = 0; i < s.size(); ++i) {
          word_type w(n);
          for (size_t j = 0; j < n; ++j) {
            w[j] = s[(i + j) % s.size()];
          }
          out.insert(std::move(w));
        }
      }
    }
    return out;
  }

  // Left vertices: words x of length eta-3 read from a leaf into the start
  // of w; right vertices: words y read from the end of w out to a leaf.
  // Edge x -- y iff x w y is a subword of some relator.
  inline MatchGraph build_match_graph(Presentation const& p,
                                      word_type const&    w,
                                      size_t              eta,
                                      size_t              cap = 1 << 16) {
    if (w.size() < 9 || w.size() > 12) {
      throw cdim_error("build_match_graph: need 9 <= |w| <= 12 (got "
                       + std::to_string(w.size()) + ")");
    }
    if (!is_freely_reduced(w)) {
      throw cdim_error("build_match_graph: w must be reduced");
    }
    if (eta < 3) {
      throw cdim_error("build_match_graph: need eta >= 3");
    }
    size_t const m = p.rank;
    size_t const k = eta - 3;
    double       t = std::pow(2.0 * m - 1.0, static_cast<double>(k));
    if (t > static_cast<double>(cap)) {
      throw cdim_error("build_match_graph: |T| = (2m-1)^(eta-3) exceeds cap "
                       + std::to_string(cap));
    }
    auto left  = reduced_words(m, k, 0, inverse(w.front()));
    auto right = reduced_words(m, k, inverse(w.back()), 0);
    MatchGraph g(left.size());
    g.left_labels  = left;
    g.right_labels = right;
    std::map<word_type, size_t, WordLess> right_index;
    for (size_t i = 0; i < right.size(); ++i) {
      right_index.emplace(right[i], i);
    }
    size_t const L = 2 * k + w.size();
    std::set<std::pair<size_t, size_t>> edges;
    std::map<word_type, size_t, WordLess> left_index;
    for (size_t i = 0; i < left.size(); ++i) {
      left_index.emplace(left[i], i);
    }
    for (auto const& s : window_set(p, L)) {
      if (!std::equal(w.begin(), w.end(), s.begin() + static_cast<long>(k))) {
        continue;
      }
      word_type x(s.begin(), s.begin() + static_cast<long>(k));
      word_type y(s.begin() + static_cast<long>(k + w.size()), s.end());
      auto      a = left_index.find(x);
      auto      b = right_index.find(y);
      if (a != left_index.end() && b != right_index.end()) {
        edges.emplace(a->second, b->second);
      }
    }
    for (auto [u, v] : edges) {
      g.add_edge(u, v);
    }
    return g;
  }

}  // namespace cdim

#endif  // CDIM_MATCHING_HPP_
