// Free group words, cyclic words and presentations.
//
// A letter is a nonzero int: generator i is +i, its inverse is -i.  In text,
// a..z are generators 1..26 and A..Z their inverses.

#ifndef CDIM_WORDS_HPP_
#define CDIM_WORDS_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cdim {

  using letter_type = int;
  using word_type   = std::vector<letter_type>;

  class cdim_error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  inline letter_type inverse(letter_type x) noexcept {
    return -x;
  }

  inline word_type inverse(word_type const& w) {
    word_type result(w.rbegin(), w.rend());
    for (auto& x : result) {
      x = -x;
    }
    return result;
  }

  // Position of x in the order 1 < -1 < 2 < -2 < ...
  inline int letter_rank(letter_type x) noexcept {
    return 2 * (std::abs(x) - 1) + (x < 0 ? 1 : 0);
  }

  inline letter_type letter_from_rank(int rank) noexcept {
    int g = rank / 2 + 1;
    return rank % 2 == 0 ? g : -g;
  }

  inline bool letter_less(letter_type x, letter_type y) noexcept {
    return letter_rank(x) < letter_rank(y);
  }

  inline bool word_less(word_type const& u, word_type const& v) {
    return std::lexicographical_compare(
        u.begin(), u.end(), v.begin(), v.end(), letter_less);
  }

  // Length first, then lexicographic in the letter order.
  inline bool shortlex_less(word_type const& u, word_type const& v) {
    if (u.size() != v.size()) {
      return u.size() < v.size();
    }
    return word_less(u, v);
  }

  inline bool is_freely_reduced(word_type const& w) {
    for (size_t i = 1; i < w.size(); ++i) {
      if (w[i] == -w[i - 1]) {
        return false;
      }
    }
    return true;
  }

  inline bool is_cyclically_reduced(word_type const& w) {
    return is_freely_reduced(w) && (w.size() < 2 || w.front() != -w.back());
  }

  inline word_type free_reduce(word_type const& w) {
    word_type out;
    out.reserve(w.size());
    for (auto x : w) {
      if (!out.empty() && out.back() == -x) {
        out.pop_back();
      } else {
        out.push_back(x);
      }
    }
    return out;
  }

  inline word_type concat(word_type u, word_type const& v) {
    u.insert(u.end(), v.begin(), v.end());
    return u;
  }

  // Freely reduced product u*v.
  inline word_type multiply(word_type const& u, word_type const& v) {
    size_t k = 0;
    while (k < u.size() && k < v.size() && u[u.size() - 1 - k] == -v[k]) {
      ++k;
    }
    word_type out(u.begin(), u.end() - k);
    out.insert(out.end(), v.begin() + k, v.end());
    return out;
  }

  // Strips conjugating letters from a freely reduced word.  Throws if nothing
  // is left, since the empty word has no cyclic form.
  inline word_type cyclic_reduce(word_type const& w) {
    word_type v = free_reduce(w);
    size_t    i = 0, j = v.size();
    while (j - i >= 2 && v[i] == -v[j - 1]) {
      ++i;
      --j;
    }
    if (i == j) {
      throw cdim_error("cyclic_reduce: word is trivial in the free group");
    }
    return word_type(v.begin() + i, v.begin() + j);
  }

  inline word_type rotate(word_type const& w, size_t offset) {
    if (w.empty()) {
      return w;
    }
    offset %= w.size();
    word_type out(w.begin() + offset, w.end());
    out.insert(out.end(), w.begin(), w.begin() + offset);
    return out;
  }

  // Least rotation (Booth) under letter_less.
  inline size_t least_rotation(word_type const& w) {
    size_t const     n = w.size();
    if (n == 0) {
      return 0;
    }
    std::vector<long> f(2 * n, -1);
    size_t            k = 0;
    auto at = [&](size_t i) { return letter_rank(w[i % n]); };
    for (size_t j = 1; j < 2 * n; ++j) {
      int  sj = at(j);
      long i  = f[j - k - 1];
      while (i != -1 && sj != at(k + i + 1)) {
        if (sj < at(k + i + 1)) {
          k = j - i - 1;
        }
        i = f[i];
      }
      if (sj != at(k + i + 1)) {
        if (sj < at(k)) {
          k = j;
        }
        f[j - k] = -1;
      } else {
        f[j - k] = i + 1;
      }
    }
    return k % n;
  }

  inline word_type canonical_rotation(word_type const& w) {
    return rotate(w, least_rotation(w));
  }

  // The smallest period p of w as a cyclic word; w is a proper power iff
  // p < |w|.
  inline size_t cyclic_period(word_type const& w) {
    size_t const n = w.size();
    for (size_t p = 1; p < n; ++p) {
      if (n % p != 0) {
        continue;
      }
      bool ok = true;
      for (size_t i = p; i < n && ok; ++i) {
        ok = (w[i] == w[i - p]);
      }
      if (ok) {
        return p;
      }
    }
    return n;
  }

  inline bool is_proper_power(word_type const& w) {
    return !w.empty() && cyclic_period(w) < w.size();
  }

  struct tagged_word {
    word_type word;
    int       orientation;  // +1 for r, -1 for r^-1
    size_t    offset;

    bool operator==(tagged_word const&) const = default;
  };

  inline std::vector<tagged_word> cyclic_conjugates(word_type const& r,
                                                    bool include_inverse) {
    std::vector<tagged_word> out;
    for (size_t s = 0; s < r.size(); ++s) {
      out.push_back({rotate(r, s), +1, s});
    }
    if (include_inverse) {
      word_type ri = inverse(r);
      for (size_t s = 0; s < ri.size(); ++s) {
        out.push_back({rotate(ri, s), -1, s});
      }
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Text syntax
  ////////////////////////////////////////////////////////////////////////

  inline letter_type parse_letter(char c) {
    if (c >= 'a' && c <= 'z') {
      return c - 'a' + 1;
    } else if (c >= 'A' && c <= 'Z') {
      return -(c - 'A' + 1);
    }
    throw cdim_error(std::string("invalid letter '") + c + "'");
  }

  inline char format_letter(letter_type x) {
    int g = std::abs(x);
    if (x == 0 || g > 26) {
      throw cdim_error("letter " + std::to_string(x)
                       + " has no single-character form");
    }
    return static_cast<char>(x > 0 ? 'a' + g - 1 : 'A' + g - 1);
  }

  // "1" denotes the empty word, as does "".
  inline word_type parse_word(std::string const& s) {
    word_type w;
    if (s == "1") {
      return w;
    }
    for (char c : s) {
      w.push_back(parse_letter(c));
    }
    return w;
  }

  inline std::string to_string(word_type const& w) {
    std::string s;
    for (auto x : w) {
      s.push_back(format_letter(x));
    }
    return s;
  }

  inline std::string to_display(word_type const& w) {
    return w.empty() ? std::string("1") : to_string(w);
  }

  ////////////////////////////////////////////////////////////////////////
  // Presentations
  ////////////////////////////////////////////////////////////////////////

  struct Presentation {
    size_t                 rank = 0;
    std::vector<word_type> relators;
    std::string            provenance = "manual";

    size_t max_relator_length() const {
      size_t M = 0;
      for (auto const& r : relators) {
        M = std::max(M, r.size());
      }
      return M;
    }

    size_t min_relator_length() const {
      if (relators.empty()) {
        return 0;
      }
      size_t M = relators.front().size();
      for (auto const& r : relators) {
        M = std::min(M, r.size());
      }
      return M;
    }

    // Throws unless every relator is a nonempty cyclically reduced word over
    // generators 1..rank.
    void validate() const {
      if (rank == 0) {
        throw cdim_error("presentation: rank must be positive");
      }
      for (size_t i = 0; i < relators.size(); ++i) {
        auto const& r = relators[i];
        if (r.empty()) {
          throw cdim_error("relator " + std::to_string(i) + " is empty");
        }
        for (auto x : r) {
          if (x == 0 || static_cast<size_t>(std::abs(x)) > rank) {
            throw cdim_error("relator " + std::to_string(i)
                             + " uses a generator outside the rank");
          }
        }
        if (!is_cyclically_reduced(r)) {
          throw cdim_error("relator " + std::to_string(i)
                           + " is not cyclically reduced");
        }
      }
    }

    bool operator==(Presentation const&) const = default;
  };

  // Builds a presentation, cyclically reducing each word and rejecting any
  // that reduce to nothing.
  inline Presentation make_presentation(size_t                        rank,
                                        std::vector<std::string> const& rels) {
    Presentation p;
    p.rank = rank;
    for (auto const& s : rels) {
      p.relators.push_back(cyclic_reduce(parse_word(s)));
    }
    p.validate();
    return p;
  }

  inline Presentation parse_presentation(std::istream& in) {
    Presentation p;
    bool         have_gens = false;
    std::string  line;
    size_t       lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto h = line.find('#'); h != std::string::npos) {
        line.erase(h);
      }
      std::istringstream ls(line);
      std::string        tok;
      if (!(ls >> tok)) {
        continue;
      }
      if (!have_gens) {
        size_t m = 0;
        if (tok != "gens" || !(ls >> m)) {
          throw cdim_error("line " + std::to_string(lineno)
                           + ": expected 'gens m'");
        }
        p.rank    = m;
        have_gens = true;
        continue;
      }
      word_type w;
      try {
        w = parse_word(tok);
      } catch (cdim_error const& e) {
        throw cdim_error("line " + std::to_string(lineno) + ": " + e.what());
      }
      word_type r = free_reduce(w);
      if (r.empty() || !is_cyclically_reduced(r)) {
        // Conjugating letters are harmless; a trivial word is not.
        try {
          r = cyclic_reduce(r);
        } catch (cdim_error const&) {
          throw cdim_error("line " + std::to_string(lineno)
                           + ": relator is trivial in the free group");
        }
      }
      p.relators.push_back(std::move(r));
    }
    if (!have_gens) {
      throw cdim_error("presentation: missing 'gens m' line");
    }
    p.validate();
    return p;
  }

  inline Presentation read_presentation(std::string const& path) {
    std::ifstream in(path);
    if (!in) {
      throw cdim_error("cannot open " + path);
    }
    return parse_presentation(in);
  }

  inline std::string format_presentation(Presentation const& p) {
    std::string s = "gens " + std::to_string(p.rank) + "\n";
    if (p.provenance != "manual") {
      s += "# model " + p.provenance + "\n";
    }
    for (auto const& r : p.relators) {
      s += to_string(r) + "\n";
    }
    return s;
  }

  // The genus-g surface group presentation [a1,b1]...[ag,bg].
  inline Presentation surface_group(size_t genus) {
    Presentation p;
    p.rank = 2 * genus;
    word_type r;
    for (size_t i = 0; i < genus; ++i) {
      letter_type a = static_cast<letter_type>(2 * i + 1);
      letter_type b = a + 1;
      r.insert(r.end(), {a, b, -a, -b});
    }
    p.relators.push_back(r);
    return p;
  }

}  // namespace cdim

#endif  // CDIM_WORDS_HPP_
