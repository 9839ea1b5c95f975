#include <catch_amalgamated.hpp>

#include <cdim/dehn.hpp>
#include <cdim/diagrams.hpp>
#include <cdim/io.hpp>

using namespace cdim;

namespace {

  Presentation commutator() {
    return make_presentation(2, {"abAB"});
  }

  // Boundary position of the first boundary dart lying on `edge`.
  size_t boundary_position(DiscDiagram const& d, size_t edge) {
    auto m  = analyse(d);
    auto bd = boundary_darts(d, m);
    for (size_t i = 0; i < bd.size(); ++i) {
      if (bd[i] / 2 == edge) {
        return i;
      }
    }
    FAIL("edge not on the boundary");
    return 0;
  }

  // Euler characteristic of the cell structure, counted from the raw lists.
  long euler(DiscDiagram const& d) {
    return static_cast<long>(d.vertices) - static_cast<long>(d.edges.size())
           + static_cast<long>(d.faces.size());
  }

}  // namespace

TEST_CASE("single face", "[diagrams]") {
  auto g2 = surface_group(2);
  auto d  = single_face_diagram(g2, 0);
  auto c  = validate(d, g2);
  REQUIRE(c.valid);
  REQUIRE(c.boundary == g2.relators[0]);
  REQUIRE(boundary_length(d) == 8);
  auto a = curvature_audit(d);
  REQUIRE(a.total == 6);
  REQUIRE(a.vertices.size() == 1);
  REQUIRE(a.vertex_total == 2);
  REQUIRE(a.contribution == std::vector<long>{4});
  REQUIRE(cancellable_pairs(d).empty());
  REQUIRE(pseudoshells(d) == std::vector<size_t>{0});
  auto lad = classify_ladder(d);
  REQUIRE(lad.is_ladder);
  REQUIRE(lad.sequence.size() == 1);
  REQUIRE(isoperimetric_check(d, rational(0), rational(0), 8));
  REQUIRE(isoperimetric_check(d, rational(1, 4), rational(1, 10), 8));
}

TEST_CASE("face labels are checked", "[diagrams]") {
  auto g2 = surface_group(2);
  auto d  = single_face_diagram(g2, 0);
  d.edges[3].label = 3;
  auto c = validate(d, g2);
  REQUIRE_FALSE(c.valid);
  bool label_defect = false;
  for (auto const& s : c.defects) {
    label_defect = label_defect || s.find("label") != std::string::npos;
  }
  REQUIRE(label_defect);
}

TEST_CASE("two squares sharing an edge", "[diagrams]") {
  auto p = commutator();
  auto d = single_face_diagram(p, 0);
  REQUIRE(attach_relator(d, p, 0, 1, 0, false));
  auto c = validate(d, p);
  REQUIRE(c.valid);
  REQUIRE(boundary_length(d) == 6);
  auto a = curvature_audit(d);
  REQUIRE(a.vertex_total == 0);
  REQUIRE(a.contribution == std::vector<long>{3, 3});
  REQUIRE(a.total == 6);
  REQUIRE(cancellable_pairs(d).empty());
  REQUIRE(pseudoshells(d) == std::vector<size_t>{0, 1});
  REQUIRE(classify_ladder(d).is_ladder);
  REQUIRE(isoperimetric_check(d, rational(1, 5), rational(1, 20), 4));
  // Overlap a = 1 fails once (2d + eps) l / 2 < 1.
  REQUIRE(isoperimetric_check(d, rational(1, 5), rational(1, 10), 4));
  REQUIRE_FALSE(isoperimetric_check(d, rational(1, 100), rational(1, 100), 4));
}

TEST_CASE("doubled square reduces away", "[diagrams]") {
  auto p = commutator();
  auto d = single_face_diagram(p, 0);
  REQUIRE(attach_relator(d, p, 0, 1, 0, true));
  REQUIRE(validate(d, p).valid);
  auto pairs = cancellable_pairs(d);
  REQUIRE(pairs.size() == 1);
  auto r = reduce(d);
  REQUIRE(r.defects.empty());
  REQUIRE(r.steps == 1);
  REQUIRE(r.diagram.faces.empty());
  REQUIRE(free_reduce(boundary_word(r.diagram)) == free_reduce(boundary_word(d)));

  auto fixed = reduce(single_face_diagram(p, 0));
  REQUIRE(fixed.steps == 0);
  REQUIRE(fixed.diagram.faces.size() == 1);
}

TEST_CASE("ladders", "[diagrams]") {
  auto p = commutator();
  auto d = single_face_diagram(p, 0);
  REQUIRE(attach_relator(d, p, 0, 1, 0, false));
  // Edge 2 is the side of the first square opposite edge 0.
  REQUIRE(attach_relator(d, p, boundary_position(d, 2), 1, 0, false));
  REQUIRE(validate(d, p).valid);
  auto lad = classify_ladder(d);
  REQUIRE(lad.is_ladder);
  REQUIRE(lad.sequence.size() == 3);
  REQUIRE(lad.sequence[1] == 0);
  REQUIRE(curvature_audit(d).total == 6);

  // Three faces around a vertex, each sharing an edge with the others.
  auto        g5 = make_stream(5, {});
  DiscDiagram t  = random_disc_diagram(g5, 1, 4, 4).first;
  attach_face(t, 0, 1, {10, 11, 12}, 1, false, 0);
  auto   m  = analyse(t);
  auto   bd = boundary_darts(t, m);
  auto   inner = [&](size_t x) { return std::max(m.face[x], m.face[x ^ 1]); };
  size_t at    = bd.size();
  for (size_t i = 0; i < bd.size(); ++i) {
    if (inner(bd[i]) != inner(bd[(i + 1) % bd.size()])) {
      at = i;
      break;
    }
  }
  REQUIRE(at < bd.size());
  attach_face(t, at, 2, {20, 21}, 2, false, 0);
  REQUIRE(t.faces.size() == 3);
  REQUIRE_FALSE(classify_ladder(t).is_ladder);
  REQUIRE(curvature_audit(t).total == 6);
}

TEST_CASE("curvature identity on random discs", "[diagrams][property]") {
  auto g = make_stream(41, {});
  for (int trial = 0; trial < 300; ++trial) {
    size_t faces  = 1 + uniform_below(g, trial < 100 ? 3 : 12);
    auto [d, p]   = random_disc_diagram(g, faces);
    auto c        = validate(d, p);
    REQUIRE(c.valid);
    REQUIRE(d.faces.size() == faces);
    auto a = curvature_audit(d);
    REQUIRE(a.total == 6);
    REQUIRE(euler(d) == 1);
    REQUIRE(a.vertex_total + a.face_total == a.total);
    for (auto f : pseudoshells(d)) {
      REQUIRE(2 * exterior_counts(d, analyse(d))[f] > face_word(d, d.faces[f]).size());
    }
  }
}

TEST_CASE("reduction preserves the boundary in the group", "[diagrams][property]") {
  auto       g2 = surface_group(2);
  DehnKernel k(g2);
  auto       g        = make_stream(42, {});
  size_t     reduced  = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto d = random_diagram_over(g2, g, 2 + uniform_below(g, 4), 1 + uniform_below(g, 3));
    REQUIRE(validate(d, g2).valid);
    REQUIRE(curvature_audit(d).total == 6);
    auto before = boundary_word(d);
    REQUIRE(k.is_trivial(before));
    auto r = reduce(d);
    REQUIRE(r.diagram.faces.size() <= d.faces.size());
    REQUIRE(r.diagram.faces.size() + 2 * r.steps == d.faces.size());
    if (r.defects.empty()) {
      REQUIRE(cancellable_pairs(r.diagram).empty());
      REQUIRE(validate(r.diagram, g2).valid);
      REQUIRE(k.equal(boundary_word(r.diagram), before));
      reduced += r.steps > 0;
    }
  }
  REQUIRE(reduced > 0);
}

TEST_CASE("diagram JSON round trip", "[diagrams]") {
  auto g = make_stream(43, {});
  for (int trial = 0; trial < 20; ++trial) {
    auto [d, p] = random_disc_diagram(g, 1 + uniform_below(g, 6));
    auto j      = to_json(d);
    auto back   = diagram_from_json(json::parse(j.dump()));
    REQUIRE(to_json(back) == j);
    REQUIRE(curvature_audit(back).total == 6);
  }
  REQUIRE_THROWS_AS(diagram_from_json(json::parse(R"({"vertices": 1})")), cdim_error);
  auto sample = read_json(CDIM_DATA_DIR "/two_squares.json");
  auto d      = diagram_from_json(sample);
  auto audit  = diagram_audit_json(d, commutator());
  REQUIRE(audit["valid"] == true);
  REQUIRE(audit["curvature"]["total"] == 6);
  REQUIRE(audit["boundary_length"] == 6);
}
