// JSON forms of diagrams, balls, reports and constructions.

#ifndef CDIM_IO_HPP_
#define CDIM_IO_HPP_

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bounds.hpp"
#include "cancellation.hpp"
#include "cayley.hpp"
#include "diagrams.hpp"
#include "matching.hpp"
#include "roundtree.hpp"
#include "walls.hpp"

namespace cdim {

  using json = nlohmann::ordered_json;

  inline std::string letter_text(letter_type x) {
    return std::string(1, format_letter(x));
  }

  ////////////////////////////////////////////////////////////////////////
  // Diagrams
  ////////////////////////////////////////////////////////////////////////

  // {"vertices": n, "base": v, "edges": [[tail, head, "a"], ...],
  //  "faces": [{"darts": [1, -3, ...], "relator": j, "inverted": false,
  //             "offset": s}, ...]}
  // Darts are signed 1-based edge indices; a face lies to the left of its
  // darts.  An optional "rotation" lists outgoing darts counter-clockwise.
  inline json to_json(DiscDiagram const& d) {
    json j;
    j["vertices"] = d.vertices;
    j["base"]     = d.base;
    j["edges"]    = json::array();
    for (auto const& e : d.edges) {
      j["edges"].push_back({e.tail, e.head, letter_text(e.label)});
    }
    j["faces"] = json::array();
    for (auto const& f : d.faces) {
      j["faces"].push_back({{"darts", f.darts},
                            {"relator", f.relator},
                            {"inverted", f.inverted},
                            {"offset", f.offset}});
    }
    if (!d.rotation.empty()) {
      j["rotation"] = d.rotation;
    }
    return j;
  }

  inline DiscDiagram diagram_from_json(json const& j) {
    DiscDiagram d;
    try {
      d.vertices = j.at("vertices").get<size_t>();
      d.base     = j.value("base", size_t(0));
      for (auto const& e : j.at("edges")) {
        auto lab = e.at(2).get<std::string>();
        if (lab.size() != 1) {
          throw cdim_error("edge label must be one letter");
        }
        d.edges.push_back({e.at(0).get<size_t>(), e.at(1).get<size_t>(),
                           parse_letter(lab[0])});
      }
      for (auto const& f : j.at("faces")) {
        DFace F;
        F.darts    = f.at("darts").get<std::vector<dart_type>>();
        F.relator  = f.value("relator", size_t(0));
        F.inverted = f.value("inverted", false);
        F.offset   = f.value("offset", size_t(0));
        d.faces.push_back(std::move(F));
      }
      if (j.contains("rotation")) {
        d.rotation = j.at("rotation").get<std::vector<std::vector<dart_type>>>();
      }
    } catch (json::exception const& e) {
      throw cdim_error(std::string("malformed diagram JSON: ") + e.what());
    }
    for (auto const& e : d.edges) {
      if (e.tail >= d.vertices || e.head >= d.vertices) {
        throw cdim_error("diagram edge endpoint out of range");
      }
    }
    return d;
  }

  inline json read_json(std::string const& path) {
    std::ifstream f(path);
    if (!f) {
      throw cdim_error("cannot open " + path);
    }
    try {
      return json::parse(f);
    } catch (json::exception const& e) {
      throw cdim_error(path + ": " + e.what());
    }
  }

  inline json diagram_audit_json(DiscDiagram const& d, Presentation const& p) {
    json j;
    auto chk     = validate(d, p);
    j["valid"]   = chk.valid;
    j["defects"] = chk.defects;
    if (!chk.valid) {
      return j;
    }
    j["boundary"]        = to_string(chk.boundary);
    j["boundary_length"] = boundary_length(d);
    auto a               = curvature_audit(d);
    j["curvature"]       = {{"vertex_total", a.vertex_total},
                            {"face_total", a.face_total},
                            {"total", a.total},
                            {"face_contributions", a.contribution}};
    auto pairs = cancellable_pairs(d);
    j["cancellable_pairs"] = json::array();
    for (auto [x, y] : pairs) {
      j["cancellable_pairs"].push_back({x, y});
    }
    j["reduced"]      = pairs.empty();
    j["pseudoshells"] = pseudoshells(d);
    auto lad          = classify_ladder(d);
    j["ladder"]       = lad.is_ladder;
    if (lad.is_ladder) {
      j["ladder_sequence"] = lad.sequence;
    }
    if (!pairs.empty()) {
      auto r                  = reduce(d);
      j["reduction_steps"]    = r.steps;
      j["reduced_faces"]      = r.diagram.faces.size();
      j["reduction_defects"]  = r.defects;
      if (r.defects.empty()) {
        j["reduced_boundary"] = to_string(boundary_word(r.diagram));
      }
    }
    return j;
  }

  ////////////////////////////////////////////////////////////////////////
  // Balls and reports
  ////////////////////////////////////////////////////////////////////////

  inline json to_json(BallComplex const& b) {
    json j;
    j["radius"]   = b.radius;
    j["vertices"] = json::array();
    for (auto const& w : b.words) {
      j["vertices"].push_back(to_string(w));
    }
    j["sphere_sizes"] = b.sphere_sizes();
    j["edges"]        = json::array();
    for (size_t v = 0; v < b.size(); ++v) {
      for (size_t r = 0; r < b.adj[v].size(); r += 2) {
        if (b.adj[v][r] >= 0) {
          j["edges"].push_back({v, letter_text(letter_from_rank(static_cast<int>(r))),
                                b.adj[v][r]});
        }
      }
    }
    j["cells"] = json::array();
    for (auto const& c : b.cells) {
      j["cells"].push_back({{"cycle", c.cycle},
                            {"relator", c.relator},
                            {"orientation", c.orientation},
                            {"offset", c.offset}});
    }
    return j;
  }

  inline json to_json(CancellationReport const& r, std::optional<rational> lambda,
                      Presentation const& p) {
    json j;
    j["max_piece"]   = r.max_piece;
    j["lambda_star"] = to_string(r.lambda_star);
    j["k"]           = r.k;
    j["proper_powers"] = json::array();
    for (bool b : r.proper_power) {
      j["proper_powers"].push_back(b);
    }
    if (!r.pair_pieces.empty()) {
      j["pair_pieces"] = r.pair_pieces;
    }
    if (lambda) {
      j["lambda"]  = to_string(*lambda);
      j["c_prime"] = is_c_prime(p, *lambda);
    }
    return j;
  }

  inline json to_json(BoundReport const& r) {
    json j;
    j["inputs"] = json::object();
    for (auto const& [k, v] : r.inputs) {
      j["inputs"][k] = v;
    }
    j["outputs"] = json::array();
    for (auto const& o : r.outputs) {
      json x{{"name", o.name}, {"formula", o.formula}, {"value", o.value}};
      if (!o.note.empty()) {
        x["note"] = o.note;
      }
      j["outputs"].push_back(std::move(x));
    }
    return j;
  }

  inline json to_json(MatchGraph const& g, MatchResult const& r) {
    json j;
    j["size"]    = g.size;
    j["edges"]   = g.edge_count();
    j["perfect"] = r.perfect;
    auto label   = [&](bool left, size_t i) {
      auto const& v = left ? g.left_labels : g.right_labels;
      return i < v.size() ? to_string(v[i]) : std::to_string(i);
    };
    if (r.perfect) {
      j["matching"] = json::array();
      for (size_t u = 0; u < g.size; ++u) {
        j["matching"].push_back({label(true, u), label(false, r.mate[u])});
      }
    } else {
      auto const& h = *r.violator;
      j["violator"] = {{"side", h.left_side ? "left" : "right"}, {"set", json::array()},
                       {"neighbours", json::array()}};
      for (auto x : h.set) {
        j["violator"]["set"].push_back(label(h.left_side, x));
      }
      for (auto x : h.neighbours) {
        j["violator"]["neighbours"].push_back(label(!h.left_side, x));
      }
    }
    return j;
  }

  ////////////////////////////////////////////////////////////////////////
  // Walls and round trees
  ////////////////////////////////////////////////////////////////////////

  inline json to_json(CayleyComplex& X, BranchingWall const& w) {
    json j;
    j["root"]   = {{"tail", to_string(X.word(w.root.tail))},
                   {"label", letter_text(w.root.letter)}};
    j["lambda"] = to_string(w.lambda);
    j["depth"]  = w.depth;
    j["nodes"]  = json::array();
    for (auto const& n : w.nodes) {
      json x{{"black", n.black}, {"parent", n.parent}, {"layer", n.layer}};
      if (n.black) {
        x["edge"]     = {to_string(X.word(n.edge.tail)), letter_text(n.edge.letter)};
        x["position"] = n.position;
      } else {
        x["face"] = {to_string(X.word(n.face.base)), n.face.relator};
      }
      j["nodes"].push_back(std::move(x));
    }
    return j;
  }

  inline json to_json(EPCReport const& r) {
    return {{"valid", r.valid},
            {"defects", r.defects},
            {"m_min", r.m_min},
            {"max_perimeter", r.max_perimeter},
            {"k", r.k},
            {"min_black", r.min_black},
            {"frontier", r.frontier}};
  }

  inline json to_json(RoundTree const& t) {
    json j;
    auto const& q = t.params;
    j["params"] = {{"mode", q.mode == TreeMode::few ? "few" : "density"},
                   {"segments", {q.seg_min, q.seg_max}},
                   {"K", q.K},
                   {"eta", q.eta},
                   {"T", q.T},
                   {"layers", q.layers},
                   {"mstar", q.mstar}};
    j["halted"] = t.halted;
    if (t.halted) {
      j["halt_reason"] = t.halt_reason;
      if (!t.missing_word.empty()) {
        j["missing_word"] = to_string(t.missing_word);
      }
      if (t.violator) {
        j["violator"] = {{"side", t.violator->left_side ? "left" : "right"},
                         {"set", t.violator->set},
                         {"neighbours", t.violator->neighbours}};
      }
    }
    j["vertices"]        = t.vertex_count();
    j["cells"]           = t.cells.size();
    j["layers"]          = json::array();
    for (auto const& L : t.layers) {
      j["layers"].push_back(L.size());
    }
    j["V"]               = t.achieved_V;
    j["H"]               = t.achieved_H;
    j["collisions"]      = t.collisions;
    j["shared_vertices"] = t.shared_vertices;
    j["beyond_formula"]  = t.beyond_formula;
    return j;
  }

}  // namespace cdim

#endif  // CDIM_IO_HPP_
