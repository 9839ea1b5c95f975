#include <catch_amalgamated.hpp>

#include <deque>

#include <cdim/cayley.hpp>
#include <cdim/rng.hpp>

using namespace cdim;

namespace {

  word_type random_reduced(rng_type& g, size_t m, size_t n) {
    word_type w;
    while (w.size() < n) {
      letter_type x = static_cast<letter_type>(1 + uniform_below(g, m));
      x             = uniform_below(g, 2) ? x : -x;
      if (w.empty() || w.back() != -x) {
        w.push_back(x);
      }
    }
    return w;
  }

  // A product of conjugates of relators: trivial in the group.
  word_type random_trivial(rng_type& g, Presentation const& p, size_t factors) {
    word_type w;
    for (size_t i = 0; i < factors; ++i) {
      auto u = random_reduced(g, p.rank, uniform_below(g, 4));
      auto r = p.relators[uniform_below(g, p.relators.size())];
      if (uniform_below(g, 2)) {
        r = inverse(r);
      }
      w = multiply(w, multiply(multiply(u, r), inverse(u)));
    }
    return w;
  }

}  // namespace

TEST_CASE("Dehn reduction", "[cayley]") {
  auto       g2 = surface_group(2);
  DehnKernel k(g2);
  REQUIRE(to_string(k.reduce(parse_word("abABcdC"))) == "d");
  REQUIRE(k.is_trivial(parse_word("abABcdCD")));
  REQUIRE(k.is_trivial(parse_word("cdCDabAB")));
  REQUIRE_FALSE(k.is_trivial(parse_word("abAB")));
  REQUIRE(k.equal(parse_word("abAB"), parse_word("dcDC")));
  REQUIRE_THROWS_AS(DehnKernel(make_presentation(2, {"abAB"})), cdim_error);
}

TEST_CASE("Dehn kernel recognises products of conjugates", "[cayley][property]") {
  auto       g2 = surface_group(2);
  DehnKernel k(g2);
  auto       g = make_stream(31, {});
  for (int i = 0; i < 500; ++i) {
    auto w = random_trivial(g, g2, 1 + uniform_below(g, 4));
    REQUIRE(k.is_trivial(w));
    auto u = random_reduced(g, 4, 1 + uniform_below(g, 6));
    // Short nontrivial words stay nontrivial: every relator has length 8.
    if (u.size() <= 3) {
      REQUIRE_FALSE(k.is_trivial(u));
    }
    REQUIRE(k.equal(multiply(u, w), u));
  }
}

TEST_CASE("small genus-2 balls", "[cayley]") {
  auto b1 = build_ball(surface_group(2), 1);
  REQUIRE(b1.size() == 9);
  REQUIRE(b1.edge_count() == 8);
  REQUIRE(b1.cells.empty());
  auto b4 = build_ball(surface_group(2), 4);
  REQUIRE(b4.sphere_sizes() == std::vector<size_t>{1, 8, 56, 392, 2736});
  REQUIRE(b4.cells.size() > 0);
  auto audit = audit_cells(b4);
  REQUIRE(audit.non_embedded == 0);
  REQUIRE(audit.disconnected_meet == 0);
}

TEST_CASE("octagon corners and geodesics", "[cayley]") {
  auto b = build_ball(surface_group(2), 5);
  auto x = b.locate(parse_word("abAB"));
  REQUIRE(x.has_value());
  REQUIRE(b.dist[*x] == 4);
  REQUIRE(non_extending_neighbours(b, *x) == 2);
  auto y = b.locate(parse_word("ab"));
  REQUIRE(non_extending_neighbours(b, *y) == 1);
  auto q = geodesics(b, 0, *x, true);
  REQUIRE(q.distance == 4);
  REQUIRE(q.count == 2);
  REQUIRE(q.paths.size() == 2);
  REQUIRE(to_string(q.paths[0]) == "abAB");
  REQUIRE(to_string(q.paths[1]) == "dcDC");
  REQUIRE_THROWS_AS(geodesics(b, *x, 0, false), cdim_error);
}

TEST_CASE("ball distances match breadth-first search", "[cayley][property]") {
  auto b = build_ball(surface_group(2), 4);
  // Independent BFS over the adjacency.
  std::vector<long>  d(b.size(), -1);
  std::deque<size_t> q{0};
  d[0] = 0;
  while (!q.empty()) {
    size_t u = q.front();
    q.pop_front();
    for (long v : b.adj[u]) {
      if (v >= 0 && d[v] < 0) {
        d[v] = d[u] + 1;
        q.push_back(static_cast<size_t>(v));
      }
    }
  }
  for (size_t v = 0; v < b.size(); ++v) {
    REQUIRE(d[v] == static_cast<long>(b.dist[v]));
    REQUIRE(b.words[v].size() == b.dist[v]);
    REQUIRE(b.locate(b.words[v]) == v);
  }
}

TEST_CASE("unbounded complex", "[cayley]") {
  CayleyComplex X(surface_group(2), 4);
  auto          g = X.element(parse_word("abAB"));
  REQUIRE(g == X.element(parse_word("dcDC")));
  REQUIRE(X.distance(X.identity(), g).value == 4);
  REQUIRE(X.distance(X.identity(), g).exact);
  auto far = X.element(parse_word("abcdabcdab"));
  auto d   = X.distance(X.identity(), far);
  REQUIRE_FALSE(d.exact);
  REQUIRE(d.value <= 10);
  auto f = X.face(X.identity(), 0);
  REQUIRE(X.perimeter(f) == 8);
  auto vs = X.face_vertices(f);
  REQUIRE(vs.size() == 8);
  REQUIRE(X.faces_through(X.edge(X.identity(), 1)).size() == 2);
  REQUIRE(X.walk(X.identity(), parse_word("abABcdCD")) == X.identity());
}

TEST_CASE("complex distances agree with the ball", "[cayley][property]") {
  auto          p = surface_group(2);
  CayleyComplex X(p, 5);
  auto          b = build_ball(p, 5);
  auto          g = make_stream(32, {});
  for (int i = 0; i < 300; ++i) {
    auto u = random_reduced(g, 4, uniform_below(g, 5));
    auto v = random_reduced(g, 4, uniform_below(g, 5));
    // d(u, v) = |u^-1 v| in the group, read off the ball.
    auto w  = multiply(inverse(u), v);
    auto at = b.locate(w);
    auto dx = X.distance(X.element(u), X.element(v));
    if (at && b.dist[*at] < 5) {
      REQUIRE(dx.value == b.dist[*at]);
    }
    REQUIRE(dx.value <= w.size());
  }
}
