// Acceptance runner: one PASS/FAIL line per criterion.  With no arguments
// every criterion runs; otherwise only the ids given (1 .. 9, 10a, 10b, 10c,
// 11).

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <cdim/bounds.hpp>
#include <cdim/cancellation.hpp>
#include <cdim/diagrams.hpp>
#include <cdim/harness.hpp>
#include <cdim/io.hpp>
#include <cdim/matching.hpp>
#include <cdim/roundtree.hpp>
#include <cdim/walls.hpp>

using namespace cdim;
namespace fs = std::filesystem;

namespace {

  struct Outcome {
    bool        pass = false;
    std::string detail;
  };

  class Clock {
   public:
    double seconds() const {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
          .count();
    }

   private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
  };

  std::string num(double x, int prec = 3) {
    std::ostringstream s;
    s.precision(prec);
    s << std::fixed << x;
    return s.str();
  }

  ////////////////////////////////////////////////////////////////////////
  // Oracles
  ////////////////////////////////////////////////////////////////////////

  word_type random_cyclically_reduced(rng_type& g, size_t m, size_t n) {
    for (;;) {
      word_type w;
      while (w.size() < n) {
        letter_type x = static_cast<letter_type>(1 + uniform_below(g, m));
        x             = uniform_below(g, 2) ? x : -x;
        if (w.empty() || w.back() != -x) {
          w.push_back(x);
        }
      }
      if (n < 2 || w.front() != -w.back()) {
        return w;
      }
    }
  }

  // Longest piece over all pairs of distinct (relator, orientation, offset)
  // tags, by direct comparison of rotations.
  size_t oracle_max_piece(Presentation const& p) {
    struct Tag {
      word_type w;
    };
    std::vector<Tag> tags;
    for (auto const& r : p.relators) {
      word_type inv(r.rbegin(), r.rend());
      for (auto& x : inv) {
        x = -x;
      }
      for (auto const* s : std::vector<word_type const*>{&r, &inv}) {
        for (size_t k = 0; k < s->size(); ++k) {
          word_type c(s->begin() + static_cast<long>(k), s->end());
          c.insert(c.end(), s->begin(), s->begin() + static_cast<long>(k));
          tags.push_back({c});
        }
      }
    }
    size_t best = 0;
    for (size_t i = 0; i < tags.size(); ++i) {
      for (size_t j = i + 1; j < tags.size(); ++j) {
        auto const& a   = tags[i].w;
        auto const& b   = tags[j].w;
        size_t      cap = std::min(a.size(), b.size()) - 1;
        size_t      k   = 0;
        while (k < cap && a[k % a.size()] == b[k % b.size()]) {
          ++k;
        }
        best = std::max(best, k);
      }
    }
    return best;
  }

  rational oracle_lambda_star(Presentation const& p) {
    size_t shortest = SIZE_MAX;
    for (auto const& r : p.relators) {
      shortest = std::min(shortest, r.size());
    }
    return rational(oracle_max_piece(p), shortest);
  }

  // Hall's condition over every nonempty left subset.
  bool oracle_hall(MatchGraph const& g) {
    for (size_t mask = 1; mask < (size_t(1) << g.size); ++mask) {
      size_t hood = 0;
      for (size_t u = 0; u < g.size; ++u) {
        if (mask >> u & 1) {
          for (auto v : g.adj[u]) {
            hood |= size_t(1) << v;
          }
        }
      }
      if (__builtin_popcountll(hood) < __builtin_popcountll(mask)) {
        return false;
      }
    }
    return true;
  }

  std::string run_command(std::string const& cmd, int* status = nullptr) {
    std::string out;
    FILE*       f = popen(cmd.c_str(), "r");
    if (f == nullptr) {
      throw cdim_error("cannot run '" + cmd + "'");
    }
    std::array<char, 4096> buf;
    size_t                 k;
    while ((k = fread(buf.data(), 1, buf.size(), f)) > 0) {
      out.append(buf.data(), k);
    }
    int s = pclose(f);
    if (status != nullptr) {
      *status = s;
    }
    return out;
  }

  std::string slurp(fs::path const& p) {
    std::ifstream     f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }

  ////////////////////////////////////////////////////////////////////////
  // Criteria
  ////////////////////////////////////////////////////////////////////////

  Outcome small_cancellation() {
    Clock    clock;
    auto     g2   = surface_group(2);
    auto     comm = make_presentation(2, {"abAB"});
    bool     ok   = lambda_star(g2) == rational(1, 8) && lambda_star(comm) == rational(1, 4)
              && oracle_lambda_star(g2) == rational(1, 8)
              && oracle_lambda_star(comm) == rational(1, 4);
    auto     g          = make_stream(2024, {1});
    size_t   mismatches = 0;
    for (int i = 0; i < 100; ++i) {
      Presentation p;
      p.rank   = 2;
      size_t n = 1 + uniform_below(g, 4);
      for (size_t j = 0; j < n; ++j) {
        p.relators.push_back(random_cyclically_reduced(g, 2, 1 + uniform_below(g, 30)));
      }
      mismatches += lambda_star(p) != oracle_lambda_star(p);
      mismatches += max_piece_length(p) != oracle_max_piece(p);
    }
    double t = clock.seconds();
    return {ok && mismatches == 0 && t < 10,
            "lambda*(genus 2) = " + to_string(lambda_star(g2)) + ", lambda*(commutator) = "
                + to_string(lambda_star(comm)) + ", " + std::to_string(mismatches)
                + " mismatches on 100 random presentations, " + num(t) + " s"};
  }

  Outcome upper_bound_formula() {
    using boost::multiprecision::abs;
    using boost::multiprecision::log;
    bool   exact = upper_bound_sc(5, rational(1, 8)) == real50(3);
    real50 ref   = 1 + log(real50(4)) / log(real50(3));
    real50 err   = abs(upper_bound_sc(5, rational(1, 16)) - ref);
    return {exact && err < real50("5e-13"),
            std::string("upper(5, 1/8) ") + (exact ? "== 3" : "!= 3")
                + ", upper(5, 1/16) = " + format_real(upper_bound_sc(5, rational(1, 16)), 15)
                + ", |error| = " + format_real(err, 3)};
  }

  Outcome named_formulas() {
    using boost::multiprecision::abs;
    using boost::multiprecision::log;
    using boost::multiprecision::pow;
    using R = real100;
    std::vector<std::string> bad;
    real50                   worst = 0;
    auto check = [&](std::string const& name, real50 const& got, R const& want) {
      real50 e = real50(abs(R(got) - want));
      worst    = std::max(worst, e);
      if (!(e < real50("1e-12"))) {
        bad.push_back(name);
      }
    };
    R const l3 = log(R(3));
    for (long k : {3L, 5L, 17L}) {
      for (long q : {9L, 16L, 20L}) {
        // floor(1/(8 lambda)) + 1 with lambda = 1/q.
        long b = q / 8 + 1;
        check("upper_sc", upper_bound_sc(k, rational(1, q)), 1 + log(R(k - 1)) / log(R(b)));
      }
    }
    check("upper_sc_relaxed", upper_bound_sc_relaxed(2, 8, rational(1, 16)),
          1 + log(R(16)) / log(R(3)));
    for (auto [V, H] : {std::pair{2L, 26L}, {5L, 3L}, {100L, 7L}}) {
      check("roundtree", lower_bound_roundtree(V, H), 1 + log(R(V)) / log(R(H)));
    }
    for (long l : {100L, 1000L, 1000000L}) {
      for (size_t K : {0u, 1u, 2u}) {
        R L = log(R(l)), LL = log(L);
        auto w = few_rel_window(l, K);
        check("window_lower", w.lower, R(2 + K) - 5 * LL / L);
        check("window_upper", w.upper, R(2 + K) + R(2 * (K + 1)) * LL / L);
        check("cprime_lambda", cprime_lambda(2, l, K), R(6 * (K + 2)) * L / (R(l) * l3));
        check("coverage_length", coverage_length(2, l, K), (R(K + 1) * L - 3 * LL) / l3);
      }
    }
    for (auto d : {rational(1, 10), rational(1, 20), rational(3, 10)}) {
      R    D = to_real<R>(d);
      auto w = density_window(2, 1000, d);
      if (w.lower) {
        check("density_lower", *w.lower, 1 + D * 1000 * l3 / (4 * log(24 / D)));
      }
      check("density_upper", w.upper(),
            std::max(R(D / abs(log(D))), R(1 / (1 - 2 * D))) * 1000 * l3);
    }
    for (auto [M, Ms] : {std::pair{1000L, 100L}, {5000L, 12L}}) {
      check("sc_explicit", lower_bound_sc_explicit(2, M, Ms),
            log(R(4)) * R(Ms) / log(R(M) / R(Ms)));
    }
    // chi = 1 - m + floor((2m-1)^(dl)); here dl is an integer.
    for (auto [l, d] : {std::pair{20L, rational(1, 10)}, {16L, rational(1, 4)}, {200L, rational(1, 20)}}) {
      long e   = static_cast<long>(floor(rational(d * l)));
      R    chi = 1 - 2 + pow(R(3), e);
      check("detection", detection_statistic(2, l, d).log_chi, log(chi));
    }
    auto   w6 = few_rel_window(1000000, 0);
    double lo = w6.lower.convert_to<double>(), hi = w6.upper.convert_to<double>();
    bool   stated = std::abs(lo - 1.0497) < 1e-3 && std::abs(hi - 2.3801) < 1e-3;
    if (!stated) {
      bad.push_back("window(10^6, 0) digits");
    }
    std::string detail = "max |error| " + format_real(worst, 3) + ", window(10^6, 0) = ("
                         + num(lo, 4) + ", " + num(hi, 4) + ")";
    for (auto const& b : bad) {
      detail += "; mismatch in " + b;
    }
    return {bad.empty(), detail};
  }

  Outcome curvature() {
    Clock  clock;
    size_t failures = 0;
    auto   g        = make_stream(2024, {4});
    for (int i = 0; i < 100; ++i) {
      auto [d, p] = random_disc_diagram(g, 1 + uniform_below(g, 12));
      failures += !validate(d, p).valid || curvature_audit(d).total != 6;
    }
    auto g2     = surface_group(2);
    auto single = single_face_diagram(g2, 0);
    failures += !validate(single, g2).valid || curvature_audit(single).total != 6;
    auto squares = diagram_from_json(read_json(CDIM_DATA_DIR "/two_squares.json"));
    auto comm    = make_presentation(2, {"abAB"});
    failures += !validate(squares, comm).valid || curvature_audit(squares).total != 6
                || squares.faces.size() != 2;
    double t = clock.seconds();
    return {failures == 0 && t < 5, std::to_string(failures) + " failures on 102 diagrams, "
                                        + num(t) + " s"};
  }

  Outcome hall_matching() {
    auto   g          = make_stream(2024, {5});
    size_t mismatches = 0, violators = 0, bad_violators = 0;
    for (int i = 0; i < 500; ++i) {
      size_t     n = 1 + uniform_below(g, 12);
      MatchGraph m(n);
      // Edge probability between 1/n and about 3/n keeps both verdicts common.
      size_t num_ = 1 + uniform_below(g, 3);
      for (size_t u = 0; u < n; ++u) {
        for (size_t v = 0; v < n; ++v) {
          if (uniform_below(g, n) < num_) {
            m.add_edge(u, v);
          }
        }
      }
      auto r = perfect_matching(m, i % 2 == 1);
      mismatches += r.perfect != oracle_hall(m);
      if (!r.perfect) {
        ++violators;
        bad_violators += !r.violator || !violates_hall(m, *r.violator);
      }
    }
    return {mismatches == 0 && bad_violators == 0,
            std::to_string(mismatches) + " mismatches, " + std::to_string(violators)
                + " violators, " + std::to_string(bad_violators) + " invalid"};
  }

  Outcome branching_count() {
    size_t cases = 0, failures = 0;
    for (long q : {8L, 10L, 12L, 16L, 20L}) {
      rational lam(1, q);
      for (size_t P = 9; P <= 200; ++P) {
        if (lam * P <= 1) {
          continue;
        }
        ++cases;
        size_t t = vprime_targets(P, 0, lam, true).size();
        failures += t < static_cast<size_t>(q / 8 + 1);
      }
    }
    size_t t24 = vprime_targets(24, 0, rational(1, 12), true).size();
    return {failures == 0 && t24 == 7, std::to_string(failures) + " failures over "
                                           + std::to_string(cases) + " grid points, t(24, 1/12) = "
                                           + std::to_string(t24)};
  }

  Outcome vpath_quasiconvexity() {
    Clock         clock;
    CayleyComplex X(surface_group(2), 5);
    size_t        paths = 0, failures = 0;
    rational      worst = 1000;
    // Every edge is a translate of one at the identity, and the group acts
    // by isometries, so these roots cover all V-paths up to translation.
    for (letter_type x : {1, 2, 3, 4}) {
      for_each_vpath(X, X.edge(X.identity(), x), 6, [&](VPath const& a) {
        ++paths;
        auto q = quasiconvexity_ratio(X, a);
        worst  = std::min(worst, q.value);
        failures += q.value < rational(1, 6);
      });
    }
    double t = clock.seconds();
    return {failures == 0 && t < 60,
            std::to_string(paths) + " V-paths, min ratio " + to_string(worst) + ", "
                + std::to_string(failures) + " below 1/6, " + num(t) + " s"};
  }

  Outcome wall_structure() {
    auto          g2 = surface_group(2);
    CayleyComplex X(g2, 5);
    auto          w   = grow_branching_wall(X, X.edge(X.identity(), 1), 2, rational(13, 100));
    auto          rep = validate_epc(to_epc(w));
    bool          inj = check_wall_embedding(w);
    size_t        k   = generator_occurrences(g2);
    bool          ok  = rep.valid && inj && k == 2 && rep.k <= k && rep.min_black >= 2
              && rep.m_min >= 3;
    return {ok, std::to_string(w.nodes.size()) + " nodes, EPC "
                    + (rep.valid ? "valid" : "invalid") + ", black thickness in ["
                    + std::to_string(rep.min_black) + ", " + std::to_string(rep.k)
                    + "], k = " + std::to_string(k) + ", embedding "
                    + (inj ? "injective" : "not injective")};
  }

  Outcome round_tree() {
    auto            p = read_presentation(CDIM_DATA_DIR "/toy_m2_t4.txt");
    CayleyComplex   X(p, 8);
    RoundTreeParams q;
    q.mode    = TreeMode::density;
    q.seg_min = 1;
    q.seg_max = 2;
    q.K       = 1;
    q.eta     = 0;
    q.T       = 2;
    q.layers  = 2;
    q.mstar   = 4;
    auto t    = build_round_tree(X, q);
    if (t.halted) {
      return {false, "construction halted: " + t.halt_reason};
    }
    auto   ne  = check_nesting(t);
    auto   vh  = check_vh(t);
    auto   gap = qi_gap(X, t, 50, 0);
    size_t l   = p.min_relator_length();
    bool   ok  = ne.violations == 0 && ne.pairs > 0 && vh.ok && gap.violations == 0
              && gap.max_gap <= 8 * l && t.collisions == 0;
    return {ok, std::to_string(t.vertex_count()) + " vertices, nesting "
                    + std::to_string(ne.violations) + "/" + std::to_string(ne.pairs)
                    + " violations, new cells " + std::to_string(vh.max_new_cells)
                    + " <= VH = " + std::to_string(vh.V * vh.H) + ", qi gap <= "
                    + std::to_string(gap.max_gap) + " (bound " + std::to_string(8 * l)
                    + "), collisions " + std::to_string(t.collisions)};
  }

  ExperimentResult experiment(char const* name) {
    return run_experiment(load_config(std::string(CDIM_DATA_DIR "/") + name));
  }

  std::string rates(std::vector<EventCount> const& s) {
    std::string out;
    for (auto const& e : s) {
      out += (out.empty() ? "" : ", ") + num(e.rate());
    }
    return out;
  }

  std::vector<EventCount> only_series(ExperimentResult const& r) {
    auto s = series_by_l(r);
    return s.size() == 1 ? s.begin()->second : std::vector<EventCount>{};
  }

  // Failure counts as successes, so that non-increasing failure reads as
  // non-decreasing.
  std::vector<EventCount> failures_of(std::vector<EventCount> s) {
    for (auto& e : s) {
      e.successes = e.trials - e.successes;
    }
    return s;
  }

  bool all_run(ExperimentResult const& r) {
    for (auto const& c : r.cells) {
      if (c.skipped) {
        return false;
      }
    }
    return !r.partial;
  }

  Outcome monte_carlo_cprime() {
    Clock clock;
    auto  r = experiment("exp_10a.toml");
    auto  s = only_series(r);
    bool  ok = all_run(r) && s.size() == 3 && s.back().rate() >= 0.90
              && nondecreasing_within(s);
    return {ok, "C' success rates at l = 200, 400, 800: " + rates(s) + ", " + num(clock.seconds())
                    + " s"};
  }

  Outcome monte_carlo_coverage() {
    Clock clock;
    auto  r  = experiment("exp_10b.toml");
    auto  s  = only_series(r);
    auto  f  = failures_of(s);
    std::reverse(f.begin(), f.end());
    bool ok = all_run(r) && s.size() == 3 && nondecreasing_within(f);
    return {ok, "coverage success rates at l = 500, 1000, 2000: " + rates(s) + ", "
                    + num(clock.seconds()) + " s"};
  }

  Outcome monte_carlo_repeat() {
    Clock       clock;
    auto        r = experiment("exp_10c.toml");
    std::string skipped;
    for (auto const& c : r.cells) {
      if (c.skipped) {
        skipped += (skipped.empty() ? "" : ", ") + std::string("l=") + std::to_string(c.l);
      }
    }
    auto s      = only_series(r);
    auto f      = failures_of(s);
    std::string rate_text = "repeat-free rates " + rates(s);
    if (!all_run(r)) {
      return {false, rate_text + "; partial: " + skipped
                         + " not run (relator count over the sampling cap), "
                         + num(clock.seconds()) + " s"};
    }
    std::reverse(f.begin(), f.end());
    bool ok = s.size() == 3 && nondecreasing_within(f) && s.back().rate() >= 0.9;
    return {ok, rate_text + ", " + num(clock.seconds()) + " s"};
  }

  Outcome determinism() {
    std::string const cli  = CDIM_CLI;
    std::string const data = CDIM_DATA_DIR;
    fs::path          tmp  = fs::temp_directory_path() / "cdim_acceptance";
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    std::vector<std::string> cmds = {
        "sample --model density -m 2 -l 40 -d 1/10 --seed 5",
        "sample --model poly -m 3 -l 30 -K 1 -C 1/2 --seed 6",
        "sample --model few -m 2 -l 50 -n 3 --lengths uniform --seed 7",
        "analyze " + data + "/genus2.txt --json --lambda 1/6",
        "analyze " + data + "/toy_m2_t4.txt --json",
        "ball " + data + "/genus2.txt -R 3",
        "wall " + data + "/genus2.txt --depth 2 --lambda 13/100 --json",
        "roundtree " + data + "/toy_m2_t4.txt --samples 20 --seed 4 --json",
        "match " + data + "/toy_m2_t4.txt --w abaBAbabA --eta 4",
        "diagram audit " + data + "/two_squares.json " + data + "/commutator.txt",
        "bounds --all -m 2 -l 1000 -d 1/10 --json",
        "toy-relator -m 2 -t 3 --seed 11",
    };
    std::vector<std::string> differ;
    for (auto const& c : cmds) {
      int         s1 = 0, s2 = 0;
      std::string a  = run_command(cli + " " + c + " 2>&1", &s1);
      std::string b  = run_command(cli + " " + c + " 2>&1", &s2);
      if (a != b || s1 != 0 || a.empty()) {
        differ.push_back(c.substr(0, c.find(' ')));
      }
    }
    // Experiment files across two runs and two worker counts.
    std::ofstream(tmp / "det.toml") << "name = det\nmodel = poly\nm = [2]\nl = [60, 120]\n"
                                       "K = [0, 1]\nC = [1]\n"
                                       "events = [cprime, coverage, repeat, matching]\n"
                                       "lambda = 1/5\ntrials = 16\nseed = 77\n";
    std::vector<std::string> outputs;
    for (auto [dir, workers] : {std::pair{"w1", 1}, {"w1b", 1}, {"w8", 8}}) {
      int s = 0;
      run_command(cli + " experiment " + (tmp / "det.toml").string() + " -o "
                      + (tmp / dir).string() + " --workers " + std::to_string(workers)
                      + " >/dev/null 2>&1",
                  &s);
      outputs.push_back(s == 0 ? slurp(tmp / dir / "det.csv") + slurp(tmp / dir / "det.json")
                               : "");
    }
    if (outputs[0].empty() || outputs[0] != outputs[1] || outputs[0] != outputs[2]) {
      differ.push_back("experiment");
    }
    fs::remove_all(tmp);
    std::string detail = std::to_string(cmds.size() + 1) + " invocations";
    for (auto const& d : differ) {
      detail += "; differs or fails: " + d;
    }
    return {differ.empty(), detail};
  }

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1", small_cancellation},    {"2", upper_bound_formula},
      {"3", named_formulas},        {"4", curvature},
      {"5", hall_matching},         {"6", branching_count},
      {"7", vpath_quasiconvexity},  {"8", wall_structure},
      {"9", round_tree},            {"10a", monte_carlo_cprime},
      {"10b", monte_carlo_coverage}, {"10c", monte_carlo_repeat},
      {"11", determinism}};
  std::set<std::string> wanted(argv + 1, argv + argc);
  for (auto const& w : wanted) {
    bool known = false;
    for (auto const& c : criteria) {
      known = known || c.first == w;
    }
    if (!known) {
      std::cerr << "unknown criterion '" << w << "'\n";
      return 2;
    }
  }
  bool all_pass = true;
  for (auto const& [id, run] : criteria) {
    if (!wanted.empty() && !wanted.count(id)) {
      continue;
    }
    Outcome o;
    try {
      o = run();
    } catch (std::exception const& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all_pass = all_pass && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << o.detail
              << std::endl;
  }
  return all_pass ? 0 : 1;
}
