// Dehn's algorithm for C'(1/6) presentations, an abelianisation invariant, and
// a table of group elements with exact identification.

#ifndef CDIM_DEHN_HPP_
#define CDIM_DEHN_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cancellation.hpp"
#include "numeric.hpp"
#include "words.hpp"

namespace cdim {

  struct WordHash {
    size_t operator()(word_type const& w) const noexcept {
      uint64_t h = 0x9e3779b97f4a7c15ULL ^ w.size();
      for (auto x : w) {
        h ^= static_cast<uint64_t>(static_cast<int64_t>(x)) + 0x9e3779b97f4a7c15ULL
             + (h << 6) + (h >> 2);
      }
      return static_cast<size_t>(h);
    }
  };

  class DehnKernel {
   public:
    // Throws if lambda_star(p) >= 1/6, where the algorithm no longer solves
    // the word problem.
    explicit DehnKernel(Presentation const& p) : rank_(p.rank) {
      if (lambda_star(p) >= rational(1, 6)) {
        throw cdim_error("Dehn's algorithm needs lambda_star < 1/6 (got "
                         + to_string(lambda_star(p)) + ")");
      }
      nodes_.emplace_back(2 * rank_);
      for (auto const& r : p.relators) {
        for (auto const& c : cyclic_conjugates(r, true)) {
          insert(c.word);
        }
      }
    }

    size_t max_match() const noexcept {
      return max_len_;
    }

    // Longest u starting at w[i] that is more than half of a relator
    // conjugate; returns (|u|, index of the replacement) or (0, 0).
    std::pair<size_t, size_t> longest_match(word_type const& w, size_t i,
                                            bool half = false) const {
      size_t node = 0, best = 0, rep = 0;
      for (size_t j = i; j < w.size(); ++j) {
        int next = nodes_[node].child[letter_rank(w[j])];
        if (next < 0) {
          break;
        }
        node        = static_cast<size_t>(next);
        auto const& n = nodes_[node];
        long r        = half ? n.half : n.rep;
        if (r >= 0) {
          best = j - i + 1;
          rep  = static_cast<size_t>(r);
        }
      }
      return {best, rep};
    }

    word_type reduce(word_type w) const {
      w        = free_reduce(w);
      size_t i = 0;
      while (i < w.size()) {
        auto [len, rep] = longest_match(w, i);
        if (len == 0) {
          ++i;
          continue;
        }
        word_type out(w.begin(), w.begin() + i);
        auto const& z = replacements_[rep];
        out.insert(out.end(), z.begin(), z.end());
        out.insert(out.end(), w.begin() + i + len, w.end());
        w = free_reduce(out);
        i = i > 2 * max_len_ ? i - 2 * max_len_ : 0;
      }
      return w;
    }

    bool is_trivial(word_type const& w) const {
      return reduce(w).empty();
    }

    bool equal(word_type const& u, word_type const& v) const {
      return reduce(multiply(u, inverse(v))).empty();
    }

    // A Dehn-reduced word for w, further lowered in shortlex order by swapping
    // half-relators.  Equal keys mean equal elements; the converse can fail.
    word_type key(word_type const& w) const {
      word_type cur = reduce(w);
      if (!has_half_) {
        return cur;
      }
      bool improved = true;
      while (improved) {
        improved = false;
        for (size_t i = 0; i < cur.size() && !improved; ++i) {
          size_t node = 0;
          for (size_t j = i; j < cur.size(); ++j) {
            int next = nodes_[node].child[letter_rank(cur[j])];
            if (next < 0) {
              break;
            }
            node = static_cast<size_t>(next);
            if (nodes_[node].half < 0) {
              continue;
            }
            word_type cand(cur.begin(), cur.begin() + i);
            auto const& z = replacements_[static_cast<size_t>(nodes_[node].half)];
            cand.insert(cand.end(), z.begin(), z.end());
            cand.insert(cand.end(), cur.begin() + j + 1, cur.end());
            cand = reduce(cand);
            if (shortlex_less(cand, cur)) {
              cur      = std::move(cand);
              improved = true;
              break;
            }
          }
        }
      }
      return cur;
    }

   private:
    struct Node {
      explicit Node(size_t width) : child(width, -1) {}
      std::vector<int> child;
      long             rep  = -1;  // more than half
      long             half = -1;  // exactly half
    };

    void insert(word_type const& c) {
      size_t const n    = c.size();
      size_t       node = 0;
      for (size_t L = 1; L <= n; ++L) {
        int& slot = nodes_[node].child[letter_rank(c[L - 1])];
        if (slot < 0) {
          slot = static_cast<int>(nodes_.size());
          nodes_.emplace_back(2 * rank_);
        }
        node = static_cast<size_t>(slot);
        if (2 * L < n) {
          continue;
        }
        word_type z = inverse(word_type(c.begin() + L, c.end()));
        long&     target = (2 * L == n) ? nodes_[node].half : nodes_[node].rep;
        if (target >= 0 && replacements_[target].size() <= z.size()) {
          continue;
        }
        target = static_cast<long>(replacements_.size());
        replacements_.push_back(std::move(z));
        if (2 * L == n) {
          has_half_ = true;
        } else {
          max_len_ = std::max(max_len_, L);
        }
      }
    }

    size_t                 rank_;
    std::vector<Node>      nodes_;
    std::vector<word_type> replacements_;
    size_t                 max_len_  = 0;
    bool                   has_half_ = false;
  };

  // Image of a word in Z^m modulo the relator lattice, in a canonical form
  // given by the Hermite normal form of the relator exponent vectors.
  class AbelianInvariant {
   public:
    explicit AbelianInvariant(Presentation const& p) : rank_(p.rank) {
      std::vector<std::vector<bigint>> rows;
      for (auto const& r : p.relators) {
        std::vector<bigint> v(rank_, 0);
        for (auto x : r) {
          v[std::abs(x) - 1] += (x > 0 ? 1 : -1);
        }
        rows.push_back(std::move(v));
      }
      size_t top = 0;
      for (size_t col = 0; col < rank_ && top < rows.size(); ++col) {
        while (true) {
          size_t piv = rows.size();
          for (size_t i = top; i < rows.size(); ++i) {
            if (rows[i][col] != 0
                && (piv == rows.size()
                    || abs(rows[i][col]) < abs(rows[piv][col]))) {
              piv = i;
            }
          }
          if (piv == rows.size()) {
            break;
          }
          std::swap(rows[top], rows[piv]);
          bool clean = true;
          for (size_t i = top + 1; i < rows.size(); ++i) {
            if (rows[i][col] == 0) {
              continue;
            }
            bigint q = rows[i][col] / rows[top][col];
            for (size_t c = col; c < rank_; ++c) {
              rows[i][c] -= q * rows[top][c];
            }
            clean = clean && rows[i][col] == 0;
          }
          if (clean) {
            if (rows[top][col] < 0) {
              for (auto& e : rows[top]) {
                e = -e;
              }
            }
            pivots_.push_back(col);
            ++top;
            break;
          }
        }
      }
      rows.resize(top);
      for (size_t i = 0; i < rows.size(); ++i) {
        for (size_t k = 0; k < i; ++k) {
          bigint p = rows[i][pivots_[i]];
          bigint q = floor(rational(rows[k][pivots_[i]], p));
          for (size_t c = 0; c < rank_; ++c) {
            rows[k][c] -= q * rows[i][c];
          }
        }
      }
      bigint const limit = bigint(1) << 40;
      for (auto const& row : rows) {
        std::vector<int64_t> r64;
        for (auto const& e : row) {
          if (abs(e) > limit) {
            enabled_ = false;
            return;
          }
          r64.push_back(e.convert_to<int64_t>());
        }
        hnf_.push_back(std::move(r64));
      }
    }

    bool enabled() const noexcept {
      return enabled_;
    }

    std::vector<int64_t> operator()(word_type const& w) const {
      std::vector<int64_t> v(rank_, 0);
      if (!enabled_) {
        return v;
      }
      for (auto x : w) {
        v[std::abs(x) - 1] += (x > 0 ? 1 : -1);
      }
      for (size_t i = 0; i < hnf_.size(); ++i) {
        int64_t p = hnf_[i][pivots_[i]];
        int64_t a = v[pivots_[i]];
        int64_t q = a >= 0 ? a / p : -((-a + p - 1) / p);
        if (q != 0) {
          for (size_t c = 0; c < rank_; ++c) {
            v[c] -= q * hnf_[i][c];
          }
        }
      }
      return v;
    }

   private:
    size_t                            rank_;
    std::vector<size_t>               pivots_;
    std::vector<std::vector<int64_t>> hnf_;
    bool                              enabled_ = true;
  };

  // Images of words under homomorphisms onto permutation groups, found by a
  // seeded random search.  A coarse but exact invariant of group elements.
  class PermutationInvariant {
   public:
    explicit PermutationInvariant(Presentation const& p,
                                  size_t              wanted = 8,
                                  uint64_t            seed   = 0x5eed) {
      uint64_t state = seed;
      auto     next  = [&state]() {
        state += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state;
        z          = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z          = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
      };
      for (size_t degree : {7, 6, 5}) {
        for (size_t trial = 0; trial < 40000 && homs_.size() < wanted; ++trial) {
          Hom h;
          h.degree = degree;
          for (size_t g = 0; g < p.rank; ++g) {
            std::vector<uint8_t> s(degree);
            for (size_t i = 0; i < degree; ++i) {
              s[i] = static_cast<uint8_t>(i);
            }
            for (size_t i = degree; i > 1; --i) {
              std::swap(s[i - 1], s[next() % i]);
            }
            std::vector<uint8_t> t(degree);
            for (size_t i = 0; i < degree; ++i) {
              t[s[i]] = static_cast<uint8_t>(i);
            }
            h.image.push_back(std::move(s));
            h.image.push_back(std::move(t));
          }
          bool ok = true;
          for (auto const& r : p.relators) {
            if (image(h, r) != identity_code(degree)) {
              ok = false;
              break;
            }
          }
          if (ok && !trivial(h)) {
            homs_.push_back(std::move(h));
          }
        }
      }
    }

    size_t count() const noexcept {
      return homs_.size();
    }

    void append(word_type const& w, std::vector<int64_t>& out) const {
      for (auto const& h : homs_) {
        out.push_back(image(h, w));
      }
    }

   private:
    struct Hom {
      size_t                            degree = 0;
      std::vector<std::vector<uint8_t>> image;  // indexed by letter rank
    };

    static int64_t identity_code(size_t degree) {
      int64_t c = 0;
      for (size_t i = degree; i-- > 0;) {
        c = c * 8 + static_cast<int64_t>(i);
      }
      return c;
    }

    static bool trivial(Hom const& h) {
      for (auto const& s : h.image) {
        for (size_t i = 0; i < s.size(); ++i) {
          if (s[i] != i) {
            return false;
          }
        }
      }
      return true;
    }

    // Code of the permutation i -> i.w (letters act on the right).
    static int64_t image(Hom const& h, word_type const& w) {
      uint8_t pt[8];
      for (size_t i = 0; i < h.degree; ++i) {
        pt[i] = static_cast<uint8_t>(i);
      }
      for (auto x : w) {
        auto const& s = h.image[letter_rank(x)];
        for (size_t i = 0; i < h.degree; ++i) {
          pt[i] = s[pt[i]];
        }
      }
      int64_t c = 0;
      for (size_t i = h.degree; i-- > 0;) {
        c = c * 8 + pt[i];
      }
      return c;
    }

    std::vector<Hom> homs_;
  };

  struct VectorHash {
    size_t operator()(std::vector<int64_t> const& v) const noexcept {
      uint64_t h = 0xcbf29ce484222325ULL;
      for (auto x : v) {
        h = (h ^ static_cast<uint64_t>(x)) * 0x100000001b3ULL;
      }
      return static_cast<size_t>(h);
    }
  };

  // Group elements up to equality.  Lookup goes through the Dehn key first;
  // a miss is settled by testing the element against every stored element
  // with the same abelian and permutation images, so identification is
  // exact.
  class ElementTable {
   public:
    using filter_type = std::function<bool(size_t)>;

    ElementTable(DehnKernel const& dehn, Presentation const& p)
        : dehn_(&dehn), inv_(p), perm_(p) {}

    size_t size() const noexcept {
      return keys_.size();
    }

    // A Dehn key for the element (a word representing it).
    word_type const& key(size_t id) const {
      return keys_[id];
    }

    // Id of the element w, if stored.  When given, `candidate` restricts
    // which stored elements the exact fallback examines.
    std::optional<size_t> find(word_type const& w,
                               filter_type const& candidate = {}) const {
      return find_with_key(dehn_->key(w), candidate);
    }

    // (id, true) if w was new.
    std::pair<size_t, bool> intern(word_type const& w,
                                   filter_type const& candidate = {}) {
      word_type k = dehn_->key(w);
      if (auto id = find_with_key(k, candidate)) {
        if (!by_key_.count(k)) {
          by_key_.emplace(std::move(k), *id);
        }
        return {*id, false};
      }
      size_t id = keys_.size();
      buckets_[bucket(k)].push_back(id);
      by_key_.emplace(k, id);
      keys_.push_back(std::move(k));
      return {id, true};
    }

    DehnKernel const& dehn() const noexcept {
      return *dehn_;
    }

   private:
    std::optional<size_t> find_with_key(word_type const&   k,
                                        filter_type const& candidate) const {
      if (auto it = by_key_.find(k); it != by_key_.end()) {
        return it->second;
      }
      auto b = buckets_.find(bucket(k));
      if (b == buckets_.end()) {
        return std::nullopt;
      }
      word_type kinv = inverse(k);
      for (size_t id : b->second) {
        if (candidate && !candidate(id)) {
          continue;
        }
        if (keys_[id].size() == k.size() && keys_[id] == k) {
          return id;
        }
        if (dehn_->is_trivial(multiply(keys_[id], kinv))) {
          return id;
        }
      }
      return std::nullopt;
    }

    std::vector<int64_t> bucket(word_type const& k) const {
      auto v = inv_(k);
      perm_.append(k, v);
      return v;
    }

    DehnKernel const*    dehn_;
    AbelianInvariant     inv_;
    PermutationInvariant perm_;
    std::vector<word_type>                                   keys_;
    std::unordered_map<word_type, size_t, WordHash>          by_key_;
    std::unordered_map<std::vector<int64_t>, std::vector<size_t>, VectorHash>
        buckets_;
  };

}  // namespace cdim

#endif  // CDIM_DEHN_HPP_
