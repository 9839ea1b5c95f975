#include <catch_amalgamated.hpp>

#include <set>
#include <sstream>

#include <cdim/rng.hpp>
#include <cdim/words.hpp>

using namespace cdim;

namespace {

  word_type random_word(rng_type& g, size_t m, size_t n) {
    word_type w;
    for (size_t i = 0; i < n; ++i) {
      letter_type x = static_cast<letter_type>(1 + uniform_below(g, m));
      w.push_back(uniform_below(g, 2) ? x : -x);
    }
    return w;
  }

  // Reference free reduction: repeatedly delete the leftmost cancelling pair.
  word_type naive_reduce(word_type w) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t i = 0; i + 1 < w.size(); ++i) {
        if (w[i] == -w[i + 1]) {
          w.erase(w.begin() + static_cast<long>(i), w.begin() + static_cast<long>(i) + 2);
          changed = true;
          break;
        }
      }
    }
    return w;
  }

}  // namespace

TEST_CASE("text round trip", "[words]") {
  auto w = parse_word("abAB");
  REQUIRE(w == word_type{1, 2, -1, -2});
  REQUIRE(to_string(w) == "abAB");
  REQUIRE(to_display(w).find("a") != std::string::npos);
  REQUIRE_THROWS_AS(parse_word("ab1"), cdim_error);
}

TEST_CASE("free reduction", "[words]") {
  REQUIRE(to_string(free_reduce(parse_word("abBa"))) == "aa");
  REQUIRE(free_reduce(parse_word("abAaBA")).empty());
  REQUIRE(free_reduce(word_type{}).empty());
  REQUIRE(is_freely_reduced(parse_word("abAB")));
  REQUIRE_FALSE(is_freely_reduced(parse_word("abBa")));
}

TEST_CASE("free reduction agrees with naive cancellation", "[words][property]") {
  auto g = make_stream(11, {});
  for (int i = 0; i < 2000; ++i) {
    auto w = random_word(g, 1 + uniform_below(g, 3), uniform_below(g, 20));
    auto r = free_reduce(w);
    REQUIRE(r == naive_reduce(w));
    REQUIRE(is_freely_reduced(r));
    REQUIRE(free_reduce(r) == r);
    REQUIRE(free_reduce(concat(w, inverse(w))).empty());
  }
}

TEST_CASE("cyclic reduction", "[words]") {
  REQUIRE(to_string(cyclic_reduce(parse_word("abA"))) == "b");
  REQUIRE(to_string(cyclic_reduce(parse_word("babAB"))) == "b");
  REQUIRE_THROWS_AS(cyclic_reduce(parse_word("abBA")), cdim_error);
  REQUIRE_THROWS_AS(cyclic_reduce(word_type{}), cdim_error);
}

TEST_CASE("cyclic reduction yields a conjugate", "[words][property]") {
  auto g = make_stream(12, {});
  for (int i = 0; i < 2000; ++i) {
    auto w = free_reduce(random_word(g, 2, 1 + uniform_below(g, 16)));
    if (w.empty()) {
      continue;
    }
    auto c = cyclic_reduce(w);
    REQUIRE(is_cyclically_reduced(c));
    // w = u c u^-1 for the stripped prefix u.
    size_t    k = (w.size() - c.size()) / 2;
    word_type u(w.begin(), w.begin() + static_cast<long>(k));
    REQUIRE(multiply(multiply(u, c), inverse(u)) == w);
  }
}

TEST_CASE("cyclic conjugates", "[words]") {
  auto r  = parse_word("abAB");
  auto cs = cyclic_conjugates(r, true);
  REQUIRE(cs.size() == 8);
  std::set<std::string> distinct;
  for (auto const& c : cs) {
    distinct.insert(to_string(c.word));
  }
  REQUIRE(distinct.size() == 8);
  REQUIRE(cs[1].word == parse_word("bABa"));
  REQUIRE(cs[4].orientation == -1);
  REQUIRE(cs[4].word == inverse(r));
  REQUIRE(cyclic_conjugates(parse_word("abab"), false).size() == 4);
}

TEST_CASE("letter order and canonical rotation", "[words]") {
  REQUIRE(letter_less(1, -1));
  REQUIRE(letter_less(-1, 2));
  REQUIRE(letter_less(2, -2));
  REQUIRE(to_string(canonical_rotation(parse_word("BAba"))) == "aBAb");
  REQUIRE(to_string(canonical_rotation(parse_word("bAAb"))) == "AAbb");
  REQUIRE(shortlex_less(parse_word("B"), parse_word("aa")));
}

TEST_CASE("canonical rotation is least among rotations", "[words][property]") {
  auto g = make_stream(13, {});
  for (int i = 0; i < 1000; ++i) {
    auto w = random_word(g, 2, 1 + uniform_below(g, 12));
    auto best = w;
    for (size_t s = 0; s < w.size(); ++s) {
      if (word_less(rotate(w, s), best)) {
        best = rotate(w, s);
      }
    }
    REQUIRE(canonical_rotation(w) == best);
    REQUIRE(canonical_rotation(rotate(w, uniform_below(g, w.size()))) == best);
  }
}

TEST_CASE("proper powers", "[words]") {
  REQUIRE(is_proper_power(parse_word("abab")));
  REQUIRE(is_proper_power(parse_word("aaaaaa")));
  REQUIRE_FALSE(is_proper_power(parse_word("abAB")));
  REQUIRE(cyclic_period(parse_word("abcabc")) == 3);
}

TEST_CASE("presentations", "[words]") {
  std::istringstream in("gens 2\n# comment\nabAB\n aBAb \n");
  auto p = parse_presentation(in);
  REQUIRE(p.rank == 2);
  REQUIRE(p.relators.size() == 2);
  REQUIRE(p.max_relator_length() == 4);

  std::istringstream conj("gens 2\nbabAB\n");
  REQUIRE(to_string(parse_presentation(conj).relators[0]) == "b");

  std::istringstream trivial("gens 2\nabBA\n");
  REQUIRE_THROWS_AS(parse_presentation(trivial), cdim_error);
  std::istringstream range("gens 1\nab\n");
  REQUIRE_THROWS_AS(parse_presentation(range), cdim_error);
  std::istringstream nogens("ab\n");
  REQUIRE_THROWS_AS(parse_presentation(nogens), cdim_error);

  auto s = surface_group(2);
  REQUIRE(to_string(s.relators[0]) == "abABcdCD");
  std::istringstream back(format_presentation(s));
  REQUIRE(parse_presentation(back).relators == s.relators);
  REQUIRE(read_presentation(CDIM_DATA_DIR "/genus2.txt").relators == s.relators);
}
