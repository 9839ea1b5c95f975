// Pieces, the C'(lambda) condition, generator occurrences, repeated subwords
// and subword coverage.
//
// A piece is compared between two distinct tagged occurrences (relator,
// orientation, offset).  Its length is the longest common prefix of the two
// periodic words, and is at most min(|r|, |r'|) - 1: a common prefix of full
// length would make the two boundary cycles coincide.

#ifndef CDIM_CANCELLATION_HPP_
#define CDIM_CANCELLATION_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "numeric.hpp"
#include "suffix_array.hpp"
#include "words.hpp"

namespace cdim {

  struct Occurrence {
    size_t relator     = 0;
    int    orientation = +1;
    size_t offset      = 0;

    bool operator==(Occurrence const&) const = default;
    auto operator<=>(Occurrence const&) const = default;
  };

  // The occurrence's cyclic conjugate of r or r^-1.
  inline word_type conjugate_of(Presentation const& p, Occurrence const& o) {
    word_type const& r = p.relators[o.relator];
    return rotate(o.orientation > 0 ? r : inverse(r), o.offset);
  }

  // Letter at position k of the periodic word of occurrence o.
  inline letter_type periodic_letter(Presentation const& p,
                                     Occurrence const&   o,
                                     size_t              k) {
    word_type const& r = p.relators[o.relator];
    size_t const     n = r.size();
    size_t           i = (o.offset + k) % n;
    return o.orientation > 0 ? r[i] : -r[n - 1 - i];
  }

  namespace detail {

    struct OccurrenceText {
      std::vector<int>        text;
      std::vector<Occurrence> occ_at;   // valid where is_occ
      std::vector<char>       is_occ;
    };

    // Concatenates w w # for each relator and orientation.
    inline OccurrenceText occurrence_text(Presentation const& p) {
      OccurrenceText t;
      int const      sep_base = static_cast<int>(2 * p.rank) + 1;
      int            sep      = sep_base;
      for (size_t i = 0; i < p.relators.size(); ++i) {
        for (int o : {+1, -1}) {
          word_type w = o > 0 ? p.relators[i] : inverse(p.relators[i]);
          for (int rep = 0; rep < 2; ++rep) {
            for (size_t s = 0; s < w.size(); ++s) {
              t.text.push_back(letter_rank(w[s]) + 1);
              t.is_occ.push_back(rep == 0);
              t.occ_at.push_back({i, o, s});
            }
          }
          t.text.push_back(sep++);
          t.is_occ.push_back(0);
          t.occ_at.push_back({});
        }
      }
      return t;
    }

    struct MergeEdge {
      size_t h;
      size_t left;  // index into the filtered order; joins left and left + 1
    };

    class UnionFind {
     public:
      explicit UnionFind(size_t n) : _parent(n) {
        std::iota(_parent.begin(), _parent.end(), 0);
      }
      size_t find(size_t x) {
        while (_parent[x] != x) {
          _parent[x] = _parent[_parent[x]];
          x          = _parent[x];
        }
        return x;
      }
      void attach(size_t child_root, size_t root) {
        _parent[child_root] = root;
      }

     private:
      std::vector<size_t> _parent;
    };

    // Occurrences in suffix order with the LCP of neighbours.
    struct OrderedOccurrences {
      std::vector<Occurrence> order;
      std::vector<MergeEdge>  edges;  // sorted by decreasing h
    };

    inline OrderedOccurrences ordered_occurrences(Presentation const& p) {
      OrderedOccurrences r;
      auto               t = occurrence_text(p);
      if (t.text.empty()) {
        return r;
      }
      auto   sa      = suffix_array(t.text);
      auto   lcp     = lcp_array(t.text, sa);
      size_t running = SIZE_MAX;
      bool   started = false;
      for (size_t k = 0; k < sa.size(); ++k) {
        if (k > 0) {
          running = std::min(running, lcp[k]);
        }
        if (!t.is_occ[sa[k]]) {
          continue;
        }
        if (started) {
          r.edges.push_back({running, r.order.size() - 1});
        }
        r.order.push_back(t.occ_at[sa[k]]);
        started = true;
        running = SIZE_MAX;
      }
      std::stable_sort(r.edges.begin(),
                       r.edges.end(),
                       [](MergeEdge const& a, MergeEdge const& b) {
                         return a.h > b.h;
                       });
      return r;
    }

  }  // namespace detail

  struct CancellationReport {
    size_t            max_piece = 0;
    rational          lambda_star = 0;
    size_t            k           = 0;
    std::vector<bool> proper_power;
    // Symmetric relator-by-relator table of maximal pieces; empty when the
    // presentation has more than pair_table_limit relators.
    std::vector<std::vector<size_t>> pair_pieces;
    // A pair of occurrences realising max_piece (absent if max_piece == 0).
    Occurrence witness_a, witness_b;
  };

  inline constexpr size_t pair_table_limit = 64;

  // Maximal piece over all pairs of distinct occurrences, computed on the
  // suffix array of the doubled relators.
  inline size_t max_piece_length(Presentation const& p,
                                 Occurrence*         wa = nullptr,
                                 Occurrence*         wb = nullptr) {
    auto oo = detail::ordered_occurrences(p);
    size_t const        N = oo.order.size();
    detail::UnionFind   uf(N);
    std::vector<size_t> best(N);  // occurrence with largest cap in the group
    auto cap = [&](size_t i) {
      return p.relators[oo.order[i].relator].size() - 1;
    };
    std::iota(best.begin(), best.end(), 0);
    size_t result = 0;
    for (auto const& e : oo.edges) {
      size_t a = uf.find(e.left), b = uf.find(e.left + 1);
      size_t ia = best[a], ib = best[b];
      size_t v  = std::min({e.h, cap(ia), cap(ib)});
      if (v > result) {
        result = v;
        if (wa != nullptr) {
          *wa = oo.order[ia];
          *wb = oo.order[ib];
        }
      }
      uf.attach(b, a);
      if (cap(ib) > cap(ia)) {
        best[a] = ib;
      }
    }
    return result;
  }

  inline rational lambda_star(Presentation const& p) {
    if (p.relators.empty()) {
      return 0;
    }
    return rational(max_piece_length(p), p.min_relator_length());
  }

  // True iff every piece between occurrences of r and r' is shorter than
  // lambda * min(|r|, |r'|).
  inline bool is_c_prime(Presentation const& p, rational const& lambda) {
    auto oo = detail::ordered_occurrences(p);
    size_t const      N = oo.order.size();
    detail::UnionFind uf(N);
    std::vector<std::set<size_t>> lengths(N);
    for (size_t i = 0; i < N; ++i) {
      lengths[i].insert(p.relators[oo.order[i].relator].size());
    }
    // A pair with shorter length L violates at level h iff
    // min(h, L - 1) >= lambda * L.
    auto violates = [&](size_t L, size_t h) {
      rational t = lambda * rational(L);
      return rational(std::min(h, L - 1)) >= t;
    };
    // Does some L in s, with L <= bound, violate at level h?  The violating
    // L form an interval, so scan from its lower end.
    auto any_violating = [&](std::set<size_t> const& s, size_t bound, size_t h) {
      for (auto it = s.begin(); it != s.end() && *it <= bound; ++it) {
        if (violates(*it, h)) {
          return true;
        }
        if (rational(*it) * lambda > rational(h)) {
          return false;
        }
      }
      return false;
    };
    for (auto const& e : oo.edges) {
      size_t a = uf.find(e.left), b = uf.find(e.left + 1);
      if (lengths[a].size() < lengths[b].size()) {
        std::swap(a, b);
      }
      size_t max_a = *lengths[a].rbegin(), max_b = *lengths[b].rbegin();
      if (any_violating(lengths[a], max_b, e.h)
          || any_violating(lengths[b], max_a, e.h)) {
        return false;
      }
      lengths[a].insert(lengths[b].begin(), lengths[b].end());
      lengths[b].clear();
      uf.attach(b, a);
    }
    return true;
  }

  // Maximal piece for each unordered pair of relators (including a relator
  // with itself).
  inline std::vector<std::vector<size_t>> pair_piece_table(
      Presentation const& p) {
    size_t const n = p.relators.size();
    std::vector<std::vector<size_t>> table(n, std::vector<size_t>(n, 0));
    auto oo = detail::ordered_occurrences(p);
    size_t const      N = oo.order.size();
    detail::UnionFind uf(N);
    std::vector<std::vector<size_t>> members(N);
    for (size_t i = 0; i < N; ++i) {
      members[i].push_back(oo.order[i].relator);
    }
    for (auto const& e : oo.edges) {
      size_t a = uf.find(e.left), b = uf.find(e.left + 1);
      for (size_t x : members[a]) {
        for (size_t y : members[b]) {
          size_t v = std::min({e.h,
                               p.relators[x].size() - 1,
                               p.relators[y].size() - 1});
          table[x][y] = std::max(table[x][y], v);
          table[y][x] = table[x][y];
        }
      }
      std::vector<size_t> merged;
      std::set_union(members[a].begin(),
                     members[a].end(),
                     members[b].begin(),
                     members[b].end(),
                     std::back_inserter(merged));
      members[a] = std::move(merged);
      members[b].clear();
      uf.attach(b, a);
    }
    return table;
  }

  inline size_t generator_occurrences(Presentation const& p) {
    std::vector<size_t> count(p.rank + 1, 0);
    for (auto const& r : p.relators) {
      for (auto x : r) {
        ++count[static_cast<size_t>(std::abs(x))];
      }
    }
    return *std::max_element(count.begin(), count.end());
  }

  inline CancellationReport analyze(Presentation const& p) {
    CancellationReport rep;
    rep.max_piece   = max_piece_length(p, &rep.witness_a, &rep.witness_b);
    rep.lambda_star = p.relators.empty()
                          ? rational(0)
                          : rational(rep.max_piece, p.min_relator_length());
    rep.k           = generator_occurrences(p);
    for (auto const& r : p.relators) {
      rep.proper_power.push_back(is_proper_power(r));
    }
    if (p.relators.size() <= pair_table_limit) {
      rep.pair_pieces = pair_piece_table(p);
    }
    return rep;
  }

  ////////////////////////////////////////////////////////////////////////
  // Repeated subwords
  ////////////////////////////////////////////////////////////////////////

  struct WordLess {
    bool operator()(word_type const& u, word_type const& v) const {
      return word_less(u, v);
    }
  };

  using RepeatIndex = std::map<word_type, std::vector<Occurrence>, WordLess>;

  // Every length-`length` window of every cyclic conjugate of r and r^-1,
  // grouped by the subword read.
  inline RepeatIndex find_repeats(Presentation const& p, size_t length) {
    if (length == 0) {
      throw cdim_error("find_repeats: length must be positive");
    }
    RepeatIndex index;
    for (size_t i = 0; i < p.relators.size(); ++i) {
      if (p.relators[i].size() < length) {
        continue;
      }
      for (int o : {+1, -1}) {
        for (size_t s = 0; s < p.relators[i].size(); ++s) {
          Occurrence occ{i, o, s};
          word_type  w(length);
          for (size_t k = 0; k < length; ++k) {
            w[k] = periodic_letter(p, occ, k);
          }
          index[w].push_back(occ);
        }
      }
    }
    return index;
  }

  inline size_t max_multiplicity(RepeatIndex const& index) {
    size_t best = 0;
    for (auto const& [w, occ] : index) {
      best = std::max(best, occ.size());
    }
    return best;
  }

  // Same value as max_multiplicity(find_repeats(p, length)) without building
  // the map.  Windows of r^-1 are inverses of windows of r, so w occurs as
  // often as the class {w, w^-1} among windows of r alone; those are hashed
  // under min(hash(u), hash(u^-1)) and equal-hash runs split exactly.
  inline size_t max_multiplicity(Presentation const& p, size_t length) {
    if (length == 0) {
      throw cdim_error("max_multiplicity: length must be positive");
    }
    uint64_t const B   = 1000003ULL;
    uint64_t       pow = 1;
    for (size_t k = 0; k < length; ++k) {
      pow *= B;
    }
    auto rolling = [&](word_type const& w, std::vector<uint64_t>& h) {
      size_t const n = w.size();
      h.resize(n);
      uint64_t c = 0;
      for (size_t k = 0; k < length; ++k) {
        c = c * B + static_cast<uint64_t>(letter_rank(w[k % n]) + 1);
      }
      for (size_t s = 0; s < n; ++s) {
        h[s]         = c;
        uint64_t out = static_cast<uint64_t>(letter_rank(w[s]) + 1);
        uint64_t in  = static_cast<uint64_t>(letter_rank(w[(s + length) % n]) + 1);
        c            = c * B + in - out * pow;
      }
    };
    // Window s of r, inverted, is window (n - s - length) mod n of r^-1.
    auto for_each_key = [&](auto&& f) {
      std::vector<uint64_t> hf, hi;
      for (size_t i = 0; i < p.relators.size(); ++i) {
        auto const&  r = p.relators[i];
        size_t const n = r.size();
        if (n < length) {
          continue;
        }
        rolling(r, hf);
        rolling(inverse(r), hi);
        for (size_t s = 0; s < n; ++s) {
          size_t t = (2 * n - s - length % n) % n;
          f(std::min(hf[s], hi[t]), i, s);
        }
      }
    };
    std::vector<uint64_t> keys;
    for_each_key([&](uint64_t k, size_t, size_t) { keys.push_back(k); });
    if (keys.empty()) {
      return 0;
    }
    std::sort(keys.begin(), keys.end());
    std::unordered_set<uint64_t> repeated;
    for (size_t i = 0; i + 1 < keys.size(); ++i) {
      if (keys[i] == keys[i + 1]) {
        repeated.insert(keys[i]);
      }
    }
    keys.clear();
    keys.shrink_to_fit();
    size_t best = 1;
    std::map<word_type, size_t, WordLess> classes;
    for_each_key([&](uint64_t k, size_t i, size_t s) {
      if (!repeated.count(k)) {
        return;
      }
      auto const& r = p.relators[i];
      word_type   u(length);
      for (size_t j = 0; j < length; ++j) {
        u[j] = r[(s + j) % r.size()];
      }
      word_type v = inverse(u);
      size_t    c = ++classes[word_less(v, u) ? v : u];
      best        = std::max(best, c);
    });
    return best;
  }

  ////////////////////////////////////////////////////////////////////////
  // Subword coverage
  ////////////////////////////////////////////////////////////////////////

  struct CoverageResult {
    bool                   covered = true;
    size_t                 total   = 0;  // reduced words of length t
    std::vector<word_type> missing;      // in shortlex order
  };

  // Calls f on every freely reduced word of length t, in lexicographic order.
  template <typename F>
  void for_each_reduced_word(size_t m, size_t t, F&& f) {
    if (t == 0) {
      f(word_type{});
      return;
    }
    word_type w(t);
    auto      rec = [&](auto&& self, size_t pos) -> void {
      if (pos == t) {
        f(static_cast<word_type const&>(w));
        return;
      }
      for (int r = 0; r < static_cast<int>(2 * m); ++r) {
        letter_type x = letter_from_rank(r);
        if (pos > 0 && x == -w[pos - 1]) {
          continue;
        }
        w[pos] = x;
        self(self, pos + 1);
      }
    };
    rec(rec, 0);
  }

  // Checks whether every reduced word of length t occurs in some cyclic
  // conjugate of some r^{+-1}.  Refuses when the enumeration exceeds cap.
  inline CoverageResult subword_coverage(Presentation const& p,
                                         size_t              t,
                                         size_t              cap = 10000000) {
    CoverageResult res;
    if (t == 0) {
      res.total = 1;
      return res;
    }
    bigint need = 2 * bigint(p.rank)
                  * boost::multiprecision::pow(bigint(2 * p.rank - 1),
                                               static_cast<unsigned>(t - 1));
    if (need > cap) {
      throw cdim_error("subword_coverage: " + need.str()
                       + " words to enumerate exceeds cap "
                       + std::to_string(cap) + "; rerun with cap >= "
                       + need.str());
    }
    res.total            = need.convert_to<size_t>();
    uint64_t const base  = 2 * p.rank;
    // Codes fit in 64 bits when base^t does.
    bool fits = true;
    {
      bigint b = boost::multiprecision::pow(bigint(base),
                                            static_cast<unsigned>(t));
      fits     = b <= bigint(UINT64_MAX);
    }
    auto code_of = [&](auto&& letter_at) {
      uint64_t c = 0;
      for (size_t k = 0; k < t; ++k) {
        c = c * base + static_cast<uint64_t>(letter_rank(letter_at(k)));
      }
      return c;
    };
    if (fits) {
      std::vector<uint64_t> seen;
      for (size_t i = 0; i < p.relators.size(); ++i) {
        size_t const n = p.relators[i].size();
        if (n < t) {
          continue;
        }
        for (int o : {+1, -1}) {
          word_type w = o > 0 ? p.relators[i] : inverse(p.relators[i]);
          uint64_t  pw = 1;
          for (size_t k = 1; k < t; ++k) {
            pw *= base;
          }
          uint64_t c = code_of([&](size_t k) { return w[k]; });
          for (size_t s = 0; s < n; ++s) {
            seen.push_back(c);
            c = (c - static_cast<uint64_t>(letter_rank(w[s])) * pw) * base
                + static_cast<uint64_t>(letter_rank(w[(s + t) % n]));
          }
        }
      }
      std::sort(seen.begin(), seen.end());
      seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
      for_each_reduced_word(p.rank, t, [&](word_type const& w) {
        uint64_t c = code_of([&](size_t k) { return w[k]; });
        if (!std::binary_search(seen.begin(), seen.end(), c)) {
          res.missing.push_back(w);
        }
      });
    } else {
      auto index = find_repeats(p, t);
      for_each_reduced_word(p.rank, t, [&](word_type const& w) {
        if (index.find(w) == index.end()) {
          res.missing.push_back(w);
        }
      });
    }
    res.covered = res.missing.empty();
    return res;
  }

}  // namespace cdim

#endif  // CDIM_CANCELLATION_HPP_
