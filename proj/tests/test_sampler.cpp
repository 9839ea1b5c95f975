#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include <cdim/sampler.hpp>

using namespace cdim;

namespace {

  // All words of length l over m generators, filtered by a predicate.
  template <typename F>
  std::vector<word_type> enumerate(size_t m, size_t l, F&& keep) {
    std::vector<word_type> out;
    word_type              w(l);
    size_t                 total = 1;
    for (size_t i = 0; i < l; ++i) {
      total *= 2 * m;
    }
    for (size_t code = 0; code < total; ++code) {
      size_t c = code;
      for (size_t i = 0; i < l; ++i) {
        w[i] = letter_from_rank(static_cast<int>(c % (2 * m)));
        c /= 2 * m;
      }
      if (keep(w)) {
        out.push_back(w);
      }
    }
    return out;
  }

}  // namespace

TEST_CASE("counting reduced words", "[sampler]") {
  REQUIRE(count_reduced(2, 1) == 4);
  REQUIRE(count_reduced(2, 3) == 36);
  REQUIRE(count_reduced(3, 2) == 30);
  REQUIRE(count_reduced(2, 200).str().size() > 90);
  for (size_t m = 1; m <= 3; ++m) {
    for (size_t l = 1; l <= 6; ++l) {
      auto red = enumerate(m, l, is_freely_reduced);
      auto cyc = enumerate(m, l, is_cyclically_reduced);
      REQUIRE(count_reduced(m, l) == red.size());
      REQUIRE(count_cyclically_reduced(m, l) == cyc.size());
    }
  }
}

TEST_CASE("single letters are uniform", "[sampler]") {
  auto                  g = make_stream(1, {});
  std::map<int, size_t> seen;
  for (int i = 0; i < 40000; ++i) {
    ++seen[sample_cyclically_reduced(2, 1, g)[0]];
  }
  REQUIRE(seen.size() == 4);
  for (auto [x, c] : seen) {
    REQUIRE(std::abs(static_cast<double>(c) - 10000.0) < 4 * std::sqrt(7500.0));
  }
}

TEST_CASE("cyclically reduced sampling is uniform", "[sampler][property]") {
  for (auto [m, l] : {std::pair<size_t, size_t>{2, 2}, {2, 3}, {2, 4}, {3, 3}}) {
    auto support = enumerate(m, l, is_cyclically_reduced);
    std::map<word_type, size_t> seen;
    for (auto const& w : support) {
      seen[w] = 0;
    }
    auto         g = make_stream(2, {m, l});
    size_t const N = 100000;
    for (size_t i = 0; i < N; ++i) {
      auto w = sample_cyclically_reduced(m, l, g);
      REQUIRE(seen.count(w) == 1);
      ++seen[w];
    }
    double const e   = static_cast<double>(N) / support.size();
    double       chi = 0;
    for (auto const& [w, c] : seen) {
      chi += (c - e) * (c - e) / e;
    }
    double const k = static_cast<double>(support.size() - 1);
    REQUIRE(chi < k + 4 * std::sqrt(2 * k));
  }
  REQUIRE(enumerate(2, 2, is_cyclically_reduced).size() == 12);
}

TEST_CASE("rejection acceptance rate", "[sampler]") {
  // Acceptance is the ratio of cyclically reduced to reduced words.
  auto rate = [](size_t m, size_t l) {
    return static_cast<double>(enumerate(m, l, is_cyclically_reduced).size())
           / static_cast<double>(enumerate(m, l, is_freely_reduced).size());
  };
  REQUIRE(rate(2, 2) == 1.0);
  REQUIRE(rate(2, 3) == Catch::Approx(28.0 / 36.0));
  auto   g      = make_stream(3, {});
  size_t accept = 0, N = 60000;
  for (size_t i = 0; i < N; ++i) {
    accept += is_cyclically_reduced(sample_reduced(2, 3, g));
  }
  double p = 28.0 / 36.0;
  REQUIRE(std::abs(accept / static_cast<double>(N) - p) < 4 * std::sqrt(p * (1 - p) / N));
}

TEST_CASE("model relator counts", "[sampler]") {
  ModelSpec s;
  s.model = Model::density;
  s.m     = 2;
  s.d     = rational(1, 4);
  s.l     = 16;
  REQUIRE(relator_count(s) == 81);
  auto p = sample_presentation(s);
  REQUIRE(p.relators.size() == 81);
  for (auto const& r : p.relators) {
    REQUIRE(r.size() == 16);
    REQUIRE(is_cyclically_reduced(r));
  }

  ModelSpec q;
  q.model = Model::poly;
  q.C     = 1;
  q.K     = 2;
  q.l     = 10;
  REQUIRE(relator_count(q) == 100);
  for (auto const& r : sample_presentation(q).relators) {
    REQUIRE(r.size() >= 1);
    REQUIRE(r.size() <= 10);
    REQUIRE(is_cyclically_reduced(r));
  }

  ModelSpec f;
  f.model = Model::few;
  f.n     = 1;
  f.l     = 12;
  f.seed  = 99;
  REQUIRE(sample_presentation(f).relators.size() == 1);

  ModelSpec big = s;
  big.l         = 100;
  REQUIRE_THROWS_AS(relator_count(big), cdim_error);
}

TEST_CASE("sampling is deterministic and worker independent", "[sampler]") {
  ModelSpec s;
  s.model   = Model::poly;
  s.C       = 3;
  s.K       = 1;
  s.l       = 40;
  s.seed    = 7;
  s.lengths = LengthDist::union_weighted;
  auto a    = sample_presentation(s, 1);
  REQUIRE(a == sample_presentation(s, 1));
  REQUIRE(a == sample_presentation(s, 4));
  s.seed = 8;
  REQUIRE_FALSE(a == sample_presentation(s, 1));
}

TEST_CASE("union-weighted lengths concentrate near l", "[sampler]") {
  ModelSpec s;
  s.model   = Model::few;
  s.n       = 2000;
  s.l       = 60;
  s.lengths = LengthDist::union_weighted;
  auto   p  = sample_presentation(s);
  size_t short_ones = 0;
  for (auto const& r : p.relators) {
    short_ones += r.size() < 55;
  }
  // P(length < 55) is about 3^-6 under the union weights.
  REQUIRE(short_ones < 40);
  auto cdf = union_length_cdf(2, 60);
  REQUIRE(cdf.back() == Catch::Approx(1.0));
}
