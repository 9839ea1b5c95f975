// Command-line front end.

#include <cdim/bounds.hpp>
#include <cdim/harness.hpp>
#include <cdim/io.hpp>
#include <cdim/roundtree.hpp>
#include <cdim/sampler.hpp>
#include <cdim/walls.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace cdim;

namespace {

  void emit(std::string const& text, std::string const& path) {
    if (path.empty() || path == "-") {
      std::cout << text;
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text) || !f.flush()) {
      throw cdim_error("cannot write '" + path + "'");
    }
  }

  std::string fmt(real50 const& x, int digits) {
    return format_real(x, digits);
  }

  // "<word>/<label>", e.g. "aB/a"; the empty word is written "" or "1".
  EdgeRef parse_edge(CayleyComplex& X, std::string const& s) {
    auto slash = s.rfind('/');
    if (slash == std::string::npos || slash + 2 != s.size()) {
      throw cdim_error("edge must be <word>/<letter>, got '" + s + "'");
    }
    std::string w = s.substr(0, slash);
    if (w == "1") {
      w.clear();
    }
    size_t g = X.element(parse_word(w));
    return X.edge(g, parse_letter(s.back()));
  }

  ////////////////////////////////////////////////////////////////////////

  int run_bounds(std::string const& formula, bool all, bool as_json, int digits,
                 size_t m, std::string const& l_text, std::string const& d_text,
                 std::string const& k_text, std::string const& lambda_text, size_t K,
                 std::string const& V_text, std::string const& H_text,
                 std::string const& M_text, std::string const& Mstar_text,
                 std::string const& rel_text) {
    BoundReport r;
    auto        need = [](std::string const& v, char const* name) {
      if (v.empty()) {
        throw cdim_error(std::string("missing --") + name);
      }
      return v;
    };
    auto add = [&](std::string n, std::string f, std::string v, std::string note = "") {
      r.outputs.push_back({std::move(n), std::move(f), std::move(v), std::move(note)});
    };
    if (all) {
      r = bounds_all(m, bigint(need(l_text, "l")), parse_rational(need(d_text, "d")), K);
    } else if (formula == "sc-upper") {
      bigint   k(need(k_text, "k"));
      rational lam = parse_rational(need(lambda_text, "lambda"));
      r.inputs     = {{"k", k.str()}, {"lambda", to_string(lam)}};
      add("sc_upper", "1 + log(k-1)/log(floor(1/(8 lambda))+1)",
          fmt(upper_bound_sc(k, lam), digits));
    } else if (formula == "sc-upper-relaxed") {
      bigint   n(need(rel_text, "relators"));
      bigint   M(need(M_text, "M"));
      rational lam = parse_rational(need(lambda_text, "lambda"));
      r.inputs     = {{"relators", n.str()}, {"M", M.str()}, {"lambda", to_string(lam)}};
      add("sc_upper_relaxed", "1 + log(|R| M)/log(floor(1/(8 lambda))+1)",
          fmt(upper_bound_sc_relaxed(n, M, lam), digits));
    } else if (formula == "roundtree") {
      bigint V(need(V_text, "V")), H(need(H_text, "H"));
      r.inputs = {{"V", V.str()}, {"H", H.str()}};
      add("roundtree_lower", "1 + log V / log H", fmt(lower_bound_roundtree(V, H), digits));
    } else if (formula == "poly-window") {
      bigint l(need(l_text, "l"));
      r.inputs = {{"l", l.str()}, {"K", std::to_string(K)}};
      auto w   = few_rel_window(l, K);
      add("lower", "2 + K - 5 loglog l / log l", fmt(w.lower, digits));
      add("upper", "2 + K + 2(K+1) loglog l / log l", fmt(w.upper, digits));
    } else if (formula == "density-window") {
      bigint   l(need(l_text, "l"));
      rational d = parse_rational(need(d_text, "d"));
      r.inputs   = {{"m", std::to_string(m)}, {"l", l.str()}, {"d", to_string(d)}};
      auto w     = density_window(m, l, d);
      if (w.lower) {
        add("lower", "1 + d l log(2m-1) / (4 log(24/d))", fmt(*w.lower, digits));
      }
      add("upper_small", "C (d/|log d|) l log(2m-1)", fmt(w.upper_small, digits),
          unspecified_constant);
      add("upper_large", "C (1/(1-2d)) l log(2m-1)", fmt(w.upper_large, digits),
          unspecified_constant);
      add("upper_branch", "argmax", w.large_branch ? "1/(1-2d)" : "d/|log d|");
    } else if (formula == "sc-explicit") {
      bigint M(need(M_text, "M")), Ms(need(Mstar_text, "Mstar"));
      r.inputs = {{"m", std::to_string(m)}, {"M", M.str()}, {"Mstar", Ms.str()}};
      add("sc_explicit_lower", "C log(2m) M* / log(M/M*)",
          fmt(lower_bound_sc_explicit(m, M, Ms), digits), unspecified_constant);
    } else if (formula == "thresholds") {
      bigint l(need(l_text, "l"));
      r.inputs = {{"m", std::to_string(m)}, {"l", l.str()}, {"K", std::to_string(K)}};
      auto th  = aas_thresholds(m, l, K);
      add("cprime_lambda", "6(K+2) log l / (l log(2m-1))", fmt(th.lambda, digits));
      add("coverage_t", "((K+1) log l - 3 loglog l) / log(2m-1)", fmt(th.t_real, digits));
      add("coverage_t_length", "floor(t)", std::to_string(th.t));
      add("matching_eta", "((K+1) log l - 4 loglog l) / log(2m-1)",
          fmt(th.eta_real, digits));
      add("matching_eta_length", "floor(eta)", std::to_string(th.eta));
      add("omitted_exponent", "2/(2m-1)^(l/2-1) - l/(9 g (2m-1)^g), g = floor(log l)",
          fmt(th.omitted.exponent, digits));
      if (!d_text.empty()) {
        rational d  = parse_rational(d_text);
        bigint   ms = density_mstar(d, l);
        add("density_Mstar", "ceil(4 d l / 5)", ms.str());
        add("density_K", "floor(M*/3)", density_K(ms).str());
      }
    } else if (formula == "detection") {
      bigint   l(need(l_text, "l"));
      rational d = parse_rational(need(d_text, "d"));
      r.inputs   = {{"m", std::to_string(m)}, {"l", l.str()}, {"d", to_string(d)}};
      auto det   = detection_statistic(m, l, d);
      add("chi", "1 - m + floor((2m-1)^(dl))", det.chi ? det.chi->str() : "symbolic",
          det.symbolic ? "o(1) term dropped" : "");
      add("log_chi", "log chi", fmt(det.log_chi, digits));
      add("log_chi_over_upper", "log chi / upper", fmt(det.ratio_low, digits),
          unspecified_constant);
      if (det.ratio_high) {
        add("log_chi_over_lower", "log chi / lower", fmt(*det.ratio_high, digits));
      }
      add("abs_log_d", "|log d|", fmt(det.abs_log_d, digits));
      add("abs_log_d_between", "", det.between ? "true" : "false");
    } else {
      throw cdim_error("unknown formula '" + formula
                       + "' (sc-upper, sc-upper-relaxed, roundtree, poly-window, "
                         "density-window, sc-explicit, thresholds, detection)");
    }
    if (as_json) {
      std::cout << to_json(r).dump(2) << "\n";
    } else {
      for (auto const& o : r.outputs) {
        std::cout << o.name << " = " << o.value;
        if (!o.note.empty()) {
          std::cout << "  (" << o.note << ")";
        }
        std::cout << "\n";
      }
    }
    return 0;
  }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Small-cancellation and random-group toolkit"};
  app.require_subcommand(1);

  // sample
  std::string s_model = "density", s_lengths = "union", s_out, s_d = "0", s_C = "1";
  size_t      s_m = 2, s_l = 16, s_K = 0, s_n = 1;
  uint64_t    s_seed = 0;
  auto*       sample = app.add_subcommand("sample", "Sample a random presentation");
  sample->add_option("--model", s_model, "density | poly | few");
  sample->add_option("-m", s_m, "Generators");
  sample->add_option("-l", s_l, "Relator length (maximum for poly and few)");
  sample->add_option("-d", s_d, "Density");
  sample->add_option("-K", s_K, "Polynomial exponent");
  sample->add_option("-C", s_C, "Polynomial coefficient");
  sample->add_option("-n", s_n, "Relator count (few model)");
  sample->add_option("--lengths", s_lengths, "union | uniform");
  sample->add_option("--seed", s_seed);
  sample->add_option("-o", s_out, "Output file (default stdout)");

  // analyze
  std::string a_pres, a_lambda;
  bool        a_json = false;
  auto*       analyze = app.add_subcommand("analyze", "Pieces and small cancellation");
  analyze->add_option("presentation", a_pres)->required();
  analyze->add_option("--lambda", a_lambda, "Test C'(lambda)");
  analyze->add_flag("--json", a_json);

  // ball
  std::string b_pres, b_out;
  size_t      b_R = 4;
  auto*       ball = app.add_subcommand("ball", "Build a ball in the Cayley complex");
  ball->add_option("presentation", b_pres)->required();
  ball->add_option("-R", b_R, "Radius");
  ball->add_option("-o", b_out, "Output JSON (default stdout)");

  // wall
  std::string w_pres, w_edge = "1/a", w_lambda = "1/8";
  size_t      w_ball = 5, w_depth = 2, w_vpaths = 0;
  bool        w_json = false;
  auto*       wall = app.add_subcommand("wall", "Grow a branching wall");
  wall->add_option("presentation", w_pres)->required();
  wall->add_option("--ball", w_ball, "Exact-distance oracle radius");
  wall->add_option("--edge", w_edge, "Root edge <word>/<letter>");
  wall->add_option("--depth", w_depth, "White layers");
  wall->add_option("--lambda", w_lambda, "Crossing parameter");
  wall->add_option("--vpaths", w_vpaths, "Also check all V-paths up to this length");
  wall->add_flag("--json", w_json);

  // roundtree
  std::string t_pres, t_mode = "density", t_density = "9/100", t_eps = "1/24";
  size_t      t_T = 2, t_eta = 0, t_K = 1, t_layers = 2, t_smin = 0, t_smax = 0;
  size_t      t_mstar = 0, t_oracle = 8, t_samples = 50;
  uint64_t    t_seed = 0;
  bool        t_json = false;
  auto*       rtree = app.add_subcommand("roundtree", "Build a combinatorial round tree");
  rtree->add_option("presentation", t_pres)->required();
  rtree->add_option("--mode", t_mode, "few | density");
  rtree->add_option("--T", t_T, "Branches per endpoint");
  rtree->add_option("--eta", t_eta, "Extension length (few) or fixed part (density)");
  rtree->add_option("--K", t_K, "Extension length (density)");
  rtree->add_option("--layers", t_layers);
  rtree->add_option("--seg-min", t_smin, "Shortest segment (default 3 few, 1 density)");
  rtree->add_option("--seg-max", t_smax, "Longest segment (default 6 few, 2 density)");
  rtree->add_option("--mstar", t_mstar, "Covering length M* (default: measured)");
  rtree->add_option("--density", t_density);
  rtree->add_option("--epsilon", t_eps);
  rtree->add_option("--oracle", t_oracle, "Exact-distance oracle radius");
  rtree->add_option("--samples", t_samples, "Pairs sampled for the gap");
  rtree->add_option("--seed", t_seed);
  rtree->add_flag("--json", t_json);

  // match
  std::string h_pres, h_w;
  size_t      h_eta = 5;
  auto*       match = app.add_subcommand("match", "Closing graph of a word");
  match->add_option("presentation", h_pres)->required();
  match->add_option("--w", h_w, "Reduced word of length 9..12")->required();
  match->add_option("--eta", h_eta);

  // diagram audit
  std::string d_file, d_pres;
  auto*       diagram = app.add_subcommand("diagram", "Van Kampen diagrams");
  diagram->require_subcommand(1);
  auto* audit = diagram->add_subcommand("audit", "Validate and audit a diagram");
  audit->add_option("diagram", d_file)->required();
  audit->add_option("presentation", d_pres)->required();

  // bounds
  std::string f_formula, f_l, f_d, f_k, f_lambda, f_V, f_H, f_M, f_Ms, f_rel;
  size_t      f_m = 2, f_K = 0;
  int         f_digits = 20;
  bool        f_all = false, f_json = false;
  auto*       bounds = app.add_subcommand("bounds", "Evaluate bound formulas");
  bounds->add_option("--formula", f_formula,
                     "sc-upper | sc-upper-relaxed | roundtree | poly-window | "
                     "density-window | sc-explicit | thresholds | detection");
  bounds->add_flag("--all", f_all, "Every formula applying to (m, l, d, K)");
  bounds->add_option("-m", f_m);
  bounds->add_option("-l", f_l);
  bounds->add_option("-d", f_d);
  bounds->add_option("-k", f_k, "Generator occurrences");
  bounds->add_option("--lambda", f_lambda);
  bounds->add_option("-K", f_K);
  bounds->add_option("-V", f_V);
  bounds->add_option("-H", f_H);
  bounds->add_option("-M", f_M, "Longest relator length");
  bounds->add_option("--Mstar", f_Ms);
  bounds->add_option("--relators", f_rel, "Number of relators");
  bounds->add_option("--digits", f_digits, "Significant digits printed");
  bounds->add_flag("--json", f_json);

  // experiment
  std::string e_cfg, e_out;
  size_t      e_workers = 0;
  auto*       exper = app.add_subcommand("experiment", "Run a Monte Carlo experiment");
  exper->add_option("config", e_cfg)->required();
  exper->add_option("-o", e_out, "Output directory (default: config's output)");
  exper->add_option("--workers", e_workers, "Override the worker count");

  // toy-relator
  size_t   c_m = 2, c_t = 4;
  uint64_t c_seed = 0;
  std::string c_out;
  auto* toy = app.add_subcommand("toy-relator",
                                 "Relator containing every reduced t-word exactly once");
  toy->add_option("-m", c_m);
  toy->add_option("-t", c_t);
  toy->add_option("--seed", c_seed);
  toy->add_option("-o", c_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sample) {
      ModelSpec s;
      s.model   = parse_model(s_model);
      s.m       = s_m;
      s.l       = s_l;
      s.d       = parse_rational(s_d);
      s.K       = s_K;
      s.C       = parse_rational(s_C);
      s.n       = s_n;
      s.lengths = parse_length_dist(s_lengths);
      s.seed    = s_seed;
      emit(format_presentation(sample_presentation(s)), s_out);
    } else if (*analyze) {
      auto p   = read_presentation(a_pres);
      auto rep = cdim::analyze(p);
      std::optional<rational> lam;
      if (!a_lambda.empty()) {
        lam = parse_rational(a_lambda);
      }
      if (a_json) {
        std::cout << to_json(rep, lam, p).dump(2) << "\n";
      } else {
        std::cout << "max_piece " << rep.max_piece << "\nlambda_star "
                  << to_string(rep.lambda_star) << "\nk " << rep.k << "\n";
        if (lam) {
          std::cout << "c_prime(" << to_string(*lam) << ") "
                    << (is_c_prime(p, *lam) ? "yes" : "no") << "\n";
        }
      }
    } else if (*ball) {
      auto p = read_presentation(b_pres);
      emit(to_json(build_ball(p, b_R)).dump() + "\n", b_out);
    } else if (*wall) {
      auto          p = read_presentation(w_pres);
      CayleyComplex X(p, w_ball);
      rational      lam  = parse_rational(w_lambda);
      EdgeRef       root = parse_edge(X, w_edge);
      auto          bw   = grow_branching_wall(X, root, w_depth, lam);
      auto          epc  = validate_epc(to_epc(bw));
      json          j;
      j["wall"]      = to_json(X, bw);
      j["epc"]       = to_json(epc);
      j["embedded"]  = check_wall_embedding(bw);
      j["generator_occurrences"] = generator_occurrences(p);
      j["branching_violations"]  = branching_pair_violations(bw);
      rational worst = -1;
      size_t   paths = 0, invalid = 0, inexact = 0;
      auto     visit = [&](VPath const& a) {
        ++paths;
        invalid += !validate_vpath(X, a).valid;
        auto r = quasiconvexity_ratio(X, a);
        inexact += !r.distance.exact;
        if (worst < 0 || r.value < worst) {
          worst = r.value;
        }
      };
      for (auto const& a : wall_paths(bw)) {
        if (a.length() > 0) {
          visit(a);
        }
      }
      j["wall_paths"] = {{"count", paths}, {"invalid", invalid}};
      if (w_vpaths > 0) {
        for_each_vpath(X, root, w_vpaths, visit);
      }
      j["quasiconvexity"] = {{"paths", paths},
                             {"invalid", invalid},
                             {"min_ratio_lower_bound", paths ? to_string(worst) : "none"},
                             {"lower_bounds_only", inexact},
                             {"at_least_one_sixth", paths == 0 || worst >= rational(1, 6)}};
      if (w_json) {
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "nodes " << bw.nodes.size() << " white " << bw.white_count()
                  << "\nembedded " << j["embedded"] << "\nepc valid " << epc.valid
                  << " k " << epc.k << " m_min " << epc.m_min << "\nquasiconvexity "
                  << j["quasiconvexity"].dump() << "\n";
      }
    } else if (*rtree) {
      auto            p = read_presentation(t_pres);
      RoundTreeParams q;
      q.mode    = t_mode == "few" ? TreeMode::few : TreeMode::density;
      if (t_mode != "few" && t_mode != "density") {
        throw cdim_error("unknown mode '" + t_mode + "'");
      }
      bool few  = q.mode == TreeMode::few;
      q.seg_min = t_smin ? t_smin : (few ? 3 : 1);
      q.seg_max = t_smax ? t_smax : (few ? 6 : 2);
      q.T       = t_T;
      q.eta     = t_eta;
      q.K       = t_K;
      q.layers  = t_layers;
      q.density = parse_rational(t_density);
      q.epsilon = parse_rational(t_eps);
      q.mstar   = t_mstar;
      if (q.mstar == 0 && !few) {
        while (subword_coverage(p, q.mstar + 1).covered) {
          ++q.mstar;
        }
      }
      CayleyComplex X(p, t_oracle);
      auto          chk = check_params(p, q);
      json          j;
      j["checks"] = {{"violations", chk.violations},
                     {"notes", chk.notes},
                     {"formula_T", chk.formula_T.str()}};
      if (!chk.ok()) {
        std::cout << j.dump(2) << "\n";
        return 2;
      }
      auto t      = build_round_tree(X, q);
      j["tree"]   = to_json(t);
      if (!t.halted) {
        auto ne      = check_nesting(t);
        auto vh      = check_vh(t);
        auto gap     = qi_gap(X, t, t_samples, t_seed);
        auto geo     = check_geodesics_to_base(X, t);
        size_t l     = p.min_relator_length();
        j["nesting"] = {{"pairs", ne.pairs}, {"violations", ne.violations}};
        j["vh"]      = {{"V", vh.V}, {"H", vh.H}, {"max_new_cells", vh.max_new_cells},
                        {"ok", vh.ok}};
        j["qi_gap"]  = {{"pairs", gap.pairs}, {"exact_pairs", gap.exact_pairs},
                        {"max_gap_upper_bound", gap.max_gap},
                        {"bound", 8 * l},
                        {"violations", gap.violations},
                        {"ok", gap.violations == 0 && gap.max_gap <= 8 * l}};
        j["geodesics_to_base"] = {{"checked", geo.checked},
                                  {"mismatches", geo.mismatches}};
        j["injective"]         = t.collisions == 0;
        if (vh.V >= 2 && vh.H >= 2) {
          j["lower_bound"] = fmt(lower_bound_roundtree(bigint(vh.V), bigint(vh.H)), 20);
        }
      }
      if (t_json) {
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << j.dump() << "\n";
      }
      return t.halted ? 3 : 0;
    } else if (*match) {
      auto p  = read_presentation(h_pres);
      auto g  = build_match_graph(p, parse_word(h_w), h_eta);
      auto mr = perfect_matching(g, true);
      std::cout << to_json(g, mr).dump(2) << "\n";
    } else if (*audit) {
      auto p = read_presentation(d_pres);
      auto d = diagram_from_json(read_json(d_file));
      auto j = diagram_audit_json(d, p);
      std::cout << j.dump(2) << "\n";
      return j["valid"].get<bool>() ? 0 : 1;
    } else if (*bounds) {
      if (!f_all && f_formula.empty()) {
        throw cdim_error("bounds needs --formula or --all");
      }
      return run_bounds(f_formula, f_all, f_json, f_digits, f_m, f_l, f_d, f_k, f_lambda,
                        f_K, f_V, f_H, f_M, f_Ms, f_rel);
    } else if (*exper) {
      auto cfg = load_config(e_cfg);
      if (e_workers) {
        cfg.workers = e_workers;
      }
      auto r = run_experiment(cfg);
      emit_report(r, e_out.empty() ? cfg.output : e_out);
      std::cout << summary(r);
    } else if (*toy) {
      auto r = covering_relator(c_m, c_t, c_seed);
      if (r.empty()) {
        throw cdim_error("no covering relator found within the search budget");
      }
      Presentation p;
      p.rank       = c_m;
      p.relators   = {r};
      p.provenance = "covering relator m=" + std::to_string(c_m) + " t="
                     + std::to_string(c_t) + " seed=" + std::to_string(c_seed);
      emit(format_presentation(p), c_out);
    }
  } catch (cdim_error const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
