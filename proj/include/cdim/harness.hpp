// Monte Carlo experiments over grids of random-presentation models: config
// parsing, seeded trials, CSV/JSON/summary output.

#ifndef CDIM_HARNESS_HPP_
#define CDIM_HARNESS_HPP_

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bounds.hpp"
#include "cancellation.hpp"
#include "matching.hpp"
#include "parallel.hpp"
#include "sampler.hpp"

namespace cdim {

  enum class Event { cprime, coverage, repeat, matching };

  inline std::string to_string(Event e) {
    switch (e) {
      case Event::cprime:
        return "cprime";
      case Event::coverage:
        return "coverage";
      case Event::repeat:
        return "repeat_absent";
      case Event::matching:
        return "matching";
    }
    return "?";
  }

  inline Event parse_event(std::string const& s) {
    if (s == "cprime") {
      return Event::cprime;
    } else if (s == "coverage") {
      return Event::coverage;
    } else if (s == "repeat" || s == "repeat_absent") {
      return Event::repeat;
    } else if (s == "matching") {
      return Event::matching;
    }
    throw cdim_error("unknown event '" + s + "'");
  }

  struct ExperimentConfig {
    std::string           name  = "experiment";
    Model                 model = Model::poly;
    LengthDist            lengths = LengthDist::union_weighted;
    std::vector<size_t>   m{2}, l{100};
    std::vector<rational> d{rational(1, 20)}, C{1};
    std::vector<size_t>   K{0}, n{1};
    std::vector<Event>    events{Event::cprime};
    size_t                trials = 10;
    uint64_t              seed   = 0;
    size_t                workers = 1;
    // Thresholds: empty means the model's a.a.s. value.
    std::optional<rational> lambda;      // cprime; required for repeat
    std::optional<size_t>   coverage_t;
    std::optional<size_t>   eta;         // matching extension length
    size_t                  repeat_N         = 2;
    size_t                  matching_samples = 4;
    // Cells whose trials would sample more letters than this are skipped.
    double      max_letters = 2e9;
    std::string output      = "out";
  };

  struct Cell {
    ModelSpec                          spec;
    std::map<std::string, std::string> params;  // extra parameters, as text
  };

  struct EventCount {
    Event       event      = Event::cprime;
    std::string threshold;  // the value under test, as text
    size_t      trials     = 0;
    size_t      successes  = 0;

    double rate() const {
      return trials == 0 ? 0.0 : static_cast<double>(successes) / trials;
    }

    bool operator==(EventCount const&) const = default;
  };

  struct CellResult {
    std::string                        model;
    size_t                             m = 0, l = 0;
    std::map<std::string, std::string> params;
    bool                               skipped = false;
    std::string                        reason;
    std::vector<EventCount>            events;

    bool operator==(CellResult const&) const = default;
  };

  struct ExperimentResult {
    std::string             name;
    uint64_t                seed    = 0;
    size_t                  trials  = 0;
    bool                    partial = false;
    std::vector<CellResult> cells;
    double                  seconds = 0;  // summary only

    bool operator==(ExperimentResult const& o) const {
      return name == o.name && seed == o.seed && trials == o.trials
             && partial == o.partial && cells == o.cells;
    }
  };

  ////////////////////////////////////////////////////////////////////////
  // Config
  ////////////////////////////////////////////////////////////////////////

  namespace detail {
    inline std::string trim(std::string s) {
      auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
      while (!s.empty() && ws(s.back())) {
        s.pop_back();
      }
      size_t i = 0;
      while (i < s.size() && ws(s[i])) {
        ++i;
      }
      s = s.substr(i);
      if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'')
          && s.back() == s.front()) {
        s = s.substr(1, s.size() - 2);
      }
      return s;
    }

    inline std::vector<std::string> split_list(std::string s) {
      s = trim(s);
      if (!s.empty() && s.front() == '[' && s.back() == ']') {
        s = s.substr(1, s.size() - 2);
      }
      std::vector<std::string> out;
      std::stringstream        ss(s);
      std::string              item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
          out.push_back(item);
        }
      }
      return out;
    }

    inline size_t parse_size(std::string const& s) {
      size_t pos = 0;
      unsigned long long v;
      try {
        v = std::stoull(s, &pos);
      } catch (std::exception const&) {
        throw cdim_error("not a non-negative integer: '" + s + "'");
      }
      if (pos != s.size() || s.front() == '-') {
        throw cdim_error("not a non-negative integer: '" + s + "'");
      }
      return static_cast<size_t>(v);
    }

    template <typename T, typename F>
    std::vector<T> parse_list(std::string const& s, F&& f) {
      std::vector<T> out;
      for (auto const& x : split_list(s)) {
        out.push_back(f(x));
      }
      return out;
    }
  }  // namespace detail

  // Flat "key = value" lines; lists are comma separated, optionally in
  // brackets; '#' starts a comment.
  inline ExperimentConfig parse_config(std::string const& text) {
    ExperimentConfig   c;
    std::istringstream in(text);
    std::string        line;
    size_t             lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto h = line.find('#'); h != std::string::npos) {
        line = line.substr(0, h);
      }
      line = detail::trim(line);
      if (line.empty() || line.front() == '[') {
        continue;
      }
      auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw cdim_error("config line " + std::to_string(lineno)
                         + ": expected key = value");
      }
      std::string k = detail::trim(line.substr(0, eq));
      std::string v = detail::trim(line.substr(eq + 1));
      auto        sz = [](std::string const& x) { return detail::parse_size(x); };
      try {
        if (k == "name") {
          c.name = v;
        } else if (k == "model") {
          c.model = parse_model(v);
        } else if (k == "lengths") {
          c.lengths = parse_length_dist(v);
        } else if (k == "m") {
          c.m = detail::parse_list<size_t>(v, sz);
        } else if (k == "l") {
          c.l = detail::parse_list<size_t>(v, sz);
        } else if (k == "d") {
          c.d = detail::parse_list<rational>(v, parse_rational);
        } else if (k == "C") {
          c.C = detail::parse_list<rational>(v, parse_rational);
        } else if (k == "K") {
          c.K = detail::parse_list<size_t>(v, sz);
        } else if (k == "n") {
          c.n = detail::parse_list<size_t>(v, sz);
        } else if (k == "events") {
          c.events = detail::parse_list<Event>(v, parse_event);
        } else if (k == "trials") {
          c.trials = sz(v);
        } else if (k == "seed") {
          c.seed = sz(v);
        } else if (k == "workers") {
          c.workers = sz(v);
        } else if (k == "lambda") {
          if (v != "auto") {
            c.lambda = parse_rational(v);
          }
        } else if (k == "coverage_t") {
          if (v != "auto") {
            c.coverage_t = sz(v);
          }
        } else if (k == "eta") {
          if (v != "auto") {
            c.eta = sz(v);
          }
        } else if (k == "repeat_N") {
          c.repeat_N = sz(v);
        } else if (k == "matching_samples") {
          c.matching_samples = sz(v);
        } else if (k == "max_letters") {
          c.max_letters = to_double(parse_rational(v));
        } else if (k == "output") {
          c.output = v;
        } else {
          throw cdim_error("unknown key '" + k + "'");
        }
      } catch (cdim_error const& e) {
        throw cdim_error("config line " + std::to_string(lineno) + ": " + e.what());
      }
    }
    if (c.trials < 1) {
      throw cdim_error("config: trials must be at least 1");
    }
    if (c.repeat_N < 2) {
      throw cdim_error("config: repeat_N must be at least 2");
    }
    return c;
  }

  inline ExperimentConfig load_config(std::string const& path) {
    std::ifstream f(path);
    if (!f) {
      throw cdim_error("cannot read config '" + path + "'");
    }
    std::stringstream ss;
    ss << f.rdbuf();
    try {
      return parse_config(ss.str());
    } catch (cdim_error const& e) {
      throw cdim_error(path + ": " + e.what());
    }
  }

  // The grid, in the order m, l, then the model's own parameters.
  inline std::vector<Cell> expand_grid(ExperimentConfig const& c) {
    std::vector<Cell> out;
    for (auto m : c.m) {
      for (auto l : c.l) {
        ModelSpec s;
        s.model   = c.model;
        s.m       = m;
        s.l       = l;
        s.lengths = c.lengths;
        switch (c.model) {
          case Model::few:
            for (auto n : c.n) {
              s.n = n;
              out.push_back({s, {{"n", std::to_string(n)}}});
            }
            break;
          case Model::poly:
            for (auto const& C : c.C) {
              for (auto K : c.K) {
                s.C = C;
                s.K = K;
                out.push_back({s, {{"C", to_string(C)}, {"K", std::to_string(K)}}});
              }
            }
            break;
          case Model::density:
            for (auto const& d : c.d) {
              s.d = d;
              out.push_back({s, {{"d", to_string(d)}}});
            }
            break;
        }
      }
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Running
  ////////////////////////////////////////////////////////////////////////

  // Truncation of x to `digits` decimals, as an exact rational.
  inline rational rational_from_real(real50 const& x, unsigned digits = 30) {
    bigint scale = boost::multiprecision::pow(bigint(10), digits);
    real50 y     = x * real50(scale);
    using std::floor;
    return rational(floor(y).convert_to<bigint>(), scale);
  }

  namespace detail {
    struct Thresh {
      rational lambda;
      size_t   t = 0, eta = 0, repeat_length = 0;
    };

    inline size_t cell_K(ModelSpec const& s) {
      return s.model == Model::poly ? s.K : 0;
    }

    inline Thresh thresholds_for(ExperimentConfig const& c, ModelSpec const& s) {
      Thresh th;
      size_t K = cell_K(s);
      th.lambda = c.lambda ? *c.lambda
                           : rational_from_real(cprime_lambda(s.m, bigint(s.l), K));
      th.t   = c.coverage_t ? *c.coverage_t
                            : floor_length(coverage_length(s.m, bigint(s.l), K));
      th.eta = c.eta ? *c.eta : floor_length(matching_length(s.m, bigint(s.l), K));
      th.repeat_length = ceil(th.lambda * rational(s.l)).convert_to<size_t>();
      return th;
    }

    inline std::string threshold_text(Event e, ExperimentConfig const& c,
                                      Thresh const& th) {
      switch (e) {
        case Event::cprime:
          return "lambda=" + format_real(to_real<real50>(th.lambda), 12);
        case Event::coverage:
          return "t=" + std::to_string(th.t);
        case Event::repeat:
          return "N=" + std::to_string(c.repeat_N)
                 + ";length=" + std::to_string(th.repeat_length);
        case Event::matching:
          return "eta=" + std::to_string(th.eta)
                 + ";samples=" + std::to_string(c.matching_samples);
      }
      return "";
    }

    // True when every sampled w (reduced, length 9..12) has a perfect
    // matching in its closing graph.
    inline bool matching_event(Presentation const& p, size_t eta, size_t samples,
                               rng_type& g) {
      for (size_t i = 0; i < samples; ++i) {
        size_t len = 9 + uniform_below(g, 4);
        auto   w   = sample_reduced(p.rank, len, g);
        auto   mg  = build_match_graph(p, w, eta);
        if (!perfect_matching(mg).perfect) {
          return false;
        }
      }
      return true;
    }
  }  // namespace detail

  inline ExperimentResult run_experiment(ExperimentConfig const& c) {
    auto const       start = std::chrono::steady_clock::now();
    ExperimentResult res;
    res.name   = c.name;
    res.seed   = c.seed;
    res.trials = c.trials;
    auto cells = expand_grid(c);
    for (size_t ci = 0; ci < cells.size(); ++ci) {
      auto const& cell = cells[ci];
      CellResult  cr;
      cr.model  = to_string(cell.spec.model);
      cr.m      = cell.spec.m;
      cr.l      = cell.spec.l;
      cr.params = cell.params;
      auto th   = detail::thresholds_for(c, cell.spec);
      for (auto e : c.events) {
        EventCount ec;
        ec.event     = e;
        ec.threshold = detail::threshold_text(e, c, th);
        cr.events.push_back(ec);
      }
      size_t nrel = 0;
      try {
        nrel = relator_count(cell.spec);
        double letters = static_cast<double>(nrel) * cell.spec.l * c.trials;
        if (letters > c.max_letters) {
          throw cdim_error("work estimate " + std::to_string(letters)
                           + " letters exceeds max_letters");
        }
        for (auto e : c.events) {
          if (e == Event::matching && th.eta < 3) {
            throw cdim_error("matching needs eta >= 3 (got "
                             + std::to_string(th.eta) + ")");
          }
        }
      } catch (cdim_error const& err) {
        cr.skipped  = true;
        cr.reason   = err.what();
        res.partial = true;
        res.cells.push_back(std::move(cr));
        continue;
      }
      std::vector<std::vector<char>> ok(c.trials,
                                        std::vector<char>(c.events.size(), 0));
      parallel_for(c.trials, c.workers, [&](size_t trial) {
        ModelSpec s = cell.spec;
        s.seed      = derive_seed(c.seed, {ci, trial});
        auto p      = sample_presentation(s);
        auto g      = make_stream(c.seed, {ci, trial, 0x77});
        for (size_t k = 0; k < c.events.size(); ++k) {
          bool v = false;
          switch (c.events[k]) {
            case Event::cprime:
              v = is_c_prime(p, th.lambda);
              break;
            case Event::coverage:
              v = subword_coverage(p, th.t).covered;
              break;
            case Event::repeat:
              v = th.repeat_length == 0
                  || max_multiplicity(p, th.repeat_length) < c.repeat_N;
              break;
            case Event::matching:
              v = detail::matching_event(p, th.eta, c.matching_samples, g);
              break;
          }
          ok[trial][k] = v;
        }
      });
      for (size_t k = 0; k < c.events.size(); ++k) {
        cr.events[k].trials = c.trials;
        for (size_t t = 0; t < c.trials; ++t) {
          cr.events[k].successes += ok[t][k];
        }
      }
      res.cells.push_back(std::move(cr));
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                      .count();
    return res;
  }

  ////////////////////////////////////////////////////////////////////////
  // Directionality
  ////////////////////////////////////////////////////////////////////////

  // Rates may drop between consecutive entries by at most `sigmas` standard
  // errors of the difference.
  inline bool nondecreasing_within(std::vector<EventCount> const& seq,
                                   double                         sigmas = 3.0) {
    for (size_t i = 0; i + 1 < seq.size(); ++i) {
      double p = seq[i].rate(), q = seq[i + 1].rate();
      double se = std::sqrt(p * (1 - p) / std::max<size_t>(seq[i].trials, 1)
                            + q * (1 - q) / std::max<size_t>(seq[i + 1].trials, 1));
      if (q < p - sigmas * se) {
        return false;
      }
    }
    return true;
  }

  // Per event and per non-(m, l) parameter set, the cells in order of l.
  inline std::map<std::string, std::vector<EventCount>>
  series_by_l(ExperimentResult const& r) {
    std::map<std::string, std::vector<std::pair<size_t, EventCount>>> tmp;
    for (auto const& c : r.cells) {
      if (c.skipped) {
        continue;
      }
      std::string key = "m=" + std::to_string(c.m);
      for (auto const& [k, v] : c.params) {
        key += ";" + k + "=" + v;
      }
      for (auto const& e : c.events) {
        tmp[to_string(e.event) + " " + key].push_back({c.l, e});
      }
    }
    std::map<std::string, std::vector<EventCount>> out;
    for (auto& [k, v] : tmp) {
      std::stable_sort(v.begin(), v.end(),
                       [](auto const& a, auto const& b) { return a.first < b.first; });
      for (auto& x : v) {
        out[k].push_back(x.second);
      }
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Output
  ////////////////////////////////////////////////////////////////////////

  namespace detail {
    inline std::string extra_params(CellResult const& c, EventCount const& e) {
      std::string s;
      for (auto const& [k, v] : c.params) {
        s += (s.empty() ? "" : ";") + k + "=" + v;
      }
      if (!e.threshold.empty()) {
        s += (s.empty() ? "" : ";") + e.threshold;
      }
      return s;
    }

    inline std::string rate_text(double r) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6f", r);
      return buf;
    }
  }  // namespace detail

  inline std::string to_csv(ExperimentResult const& r) {
    std::string out = "model,m,l,extra-params,event,trials,successes,rate\n";
    for (auto const& c : r.cells) {
      for (auto const& e : c.events) {
        out += c.model + "," + std::to_string(c.m) + "," + std::to_string(c.l) + ","
               + detail::extra_params(c, e) + "," + to_string(e.event) + ","
               + std::to_string(e.trials) + "," + std::to_string(e.successes) + ","
               + (c.skipped ? "skipped" : detail::rate_text(e.rate())) + "\n";
      }
    }
    return out;
  }

  inline nlohmann::ordered_json to_json(ExperimentResult const& r) {
    nlohmann::ordered_json j;
    j["name"]    = r.name;
    j["seed"]    = r.seed;
    j["trials"]  = r.trials;
    j["partial"] = r.partial;
    j["cells"]   = nlohmann::ordered_json::array();
    for (auto const& c : r.cells) {
      nlohmann::ordered_json cj;
      cj["model"]   = c.model;
      cj["m"]       = c.m;
      cj["l"]       = c.l;
      cj["params"]  = c.params;
      cj["skipped"] = c.skipped;
      cj["reason"]  = c.reason;
      cj["events"]  = nlohmann::ordered_json::array();
      for (auto const& e : c.events) {
        cj["events"].push_back({{"event", to_string(e.event)},
                                {"threshold", e.threshold},
                                {"trials", e.trials},
                                {"successes", e.successes},
                                {"rate", e.rate()}});
      }
      j["cells"].push_back(std::move(cj));
    }
    return j;
  }

  inline ExperimentResult from_json(nlohmann::ordered_json const& j) {
    ExperimentResult r;
    r.name    = j.at("name").get<std::string>();
    r.seed    = j.at("seed").get<uint64_t>();
    r.trials  = j.at("trials").get<size_t>();
    r.partial = j.at("partial").get<bool>();
    for (auto const& cj : j.at("cells")) {
      CellResult c;
      c.model   = cj.at("model").get<std::string>();
      c.m       = cj.at("m").get<size_t>();
      c.l       = cj.at("l").get<size_t>();
      c.params  = cj.at("params").get<std::map<std::string, std::string>>();
      c.skipped = cj.at("skipped").get<bool>();
      c.reason  = cj.at("reason").get<std::string>();
      for (auto const& ej : cj.at("events")) {
        EventCount e;
        e.event     = parse_event(ej.at("event").get<std::string>());
        e.threshold = ej.at("threshold").get<std::string>();
        e.trials    = ej.at("trials").get<size_t>();
        e.successes = ej.at("successes").get<size_t>();
        c.events.push_back(e);
      }
      r.cells.push_back(std::move(c));
    }
    return r;
  }

  // Plain-text comparison of measured rates with the expected direction:
  // every event is an a.a.s. success, so rates should rise towards 1 in l.
  inline std::string summary(ExperimentResult const& r) {
    std::ostringstream s;
    s << "experiment " << r.name << " seed " << r.seed << " trials " << r.trials
      << (r.partial ? " (partial)" : "") << "\n";
    for (auto const& c : r.cells) {
      if (c.skipped) {
        s << "  skipped " << c.model << " m=" << c.m << " l=" << c.l << ": "
          << c.reason << "\n";
      }
    }
    for (auto const& [key, seq] : series_by_l(r)) {
      s << "  " << key << ":";
      for (auto const& e : seq) {
        s << " " << detail::rate_text(e.rate());
      }
      s << "  nondecreasing within 3 sigma: "
        << (nondecreasing_within(seq) ? "yes" : "no") << "\n";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "  wall clock %.2f s\n", r.seconds);
    s << buf;
    return s.str();
  }

  namespace detail {
    inline void write_file(std::filesystem::path const& p, std::string const& text) {
      std::ofstream f(p, std::ios::binary);
      if (!f || !(f << text) || !f.flush()) {
        throw cdim_error("cannot write '" + p.string() + "'");
      }
    }
  }  // namespace detail

  // Writes <dir>/<name>.csv, .json and .txt.
  inline void emit_report(ExperimentResult const& r, std::filesystem::path const& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
      throw cdim_error("cannot create '" + dir.string() + "': " + ec.message());
    }
    detail::write_file(dir / (r.name + ".csv"), to_csv(r));
    detail::write_file(dir / (r.name + ".json"), to_json(r).dump(2) + "\n");
    detail::write_file(dir / (r.name + ".txt"), summary(r));
  }

}  // namespace cdim

#endif  // CDIM_HARNESS_HPP_
