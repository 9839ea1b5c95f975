// Closed-form bounds on conformal dimension and the thresholds used by the
// random models, over exact rationals and high-precision reals.
//
// Unspecified absolute constants are set to 1 and labelled as such.

#ifndef CDIM_BOUNDS_HPP_
#define CDIM_BOUNDS_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "numeric.hpp"

namespace cdim {

  inline constexpr char const* unspecified_constant
      = "constant unspecified; C = 1 substituted";

  ////////////////////////////////////////////////////////////////////////
  // Upper bounds
  ////////////////////////////////////////////////////////////////////////

  // floor(1/(8 lambda)) + 1
  inline bigint sc_branching(rational const& lambda) {
    return floor(rational(1) / (8 * lambda)) + 1;
  }

  // 1 + log(k-1) / log(floor(1/(8 lambda)) + 1), for a C'(lambda)
  // presentation in which each generator occurs at most k times.
  template <typename Real = real50>
  Real upper_bound_sc(bigint const& k, rational const& lambda) {
    if (k < 2) {
      throw cdim_error("upper_bound_sc: need k >= 2");
    }
    if (lambda <= 0 || lambda > rational(1, 8)) {
      throw cdim_error("upper_bound_sc: need 0 < lambda <= 1/8");
    }
    bigint const b = sc_branching(lambda);
    if (auto q = exact_log_ratio(k - 1, b)) {
      return Real(1) + to_real<Real>(*q);
    }
    using std::log;
    return Real(1) + log(Real(k - 1)) / log(Real(b));
  }

  // The same bound with k - 1 relaxed to |R| M (relators times longest
  // relator length).
  template <typename Real = real50>
  Real upper_bound_sc_relaxed(bigint const&   relators,
                              bigint const&   max_length,
                              rational const& lambda) {
    if (relators * max_length < 1) {
      throw cdim_error("upper_bound_sc_relaxed: need |R| M >= 1");
    }
    return upper_bound_sc<Real>(relators * max_length + 1, lambda);
  }

  ////////////////////////////////////////////////////////////////////////
  // Lower bounds
  ////////////////////////////////////////////////////////////////////////

  // 1 + log V / log H for a round tree with vertical branching V and
  // horizontal branching H.
  template <typename Real = real50>
  Real lower_bound_roundtree(bigint const& V, bigint const& H) {
    if (V < 2 || H < 2) {
      throw cdim_error("lower_bound_roundtree: need V >= 2 and H >= 2");
    }
    if (auto q = exact_log_ratio(V, H)) {
      return Real(1) + to_real<Real>(*q);
    }
    using std::log;
    return Real(1) + log(Real(V)) / log(Real(H));
  }

  template <typename Real>
  struct Window {
    Real lower, upper;
  };

  // Few-relator (K = 0) and polynomial (n = C l^K) windows:
  // 2 + K - 5 loglog l / log l <= Cdim <= 2 + K + 2(K+1) loglog l / log l.
  template <typename Real = real50>
  Window<Real> few_rel_window(bigint const& l, size_t K) {
    if (l < 16) {
      throw cdim_error("few_rel_window: need l >= 16 so that log log l > 0");
    }
    using std::log;
    Real L  = log(Real(l));
    Real LL = log(L);
    Real c  = Real(2 + K);
    return {c - 5 * LL / L, c + Real(2 * (K + 1)) * LL / L};
  }

  template <typename Real>
  struct DensityWindow {
    std::optional<Real> lower;        // needs d < 1/8
    Real                upper_small;  // (d/|log d|) l log(2m-1)
    Real                upper_large;  // (1/(1-2d)) l log(2m-1)
    bool                large_branch;  // which branch attains the max

    Real upper() const {
      return large_branch ? upper_large : upper_small;
    }
  };

  // Density model: lower 1 + d l log(2m-1) / (4 log(24/d)); upper
  // C log(2m-1) max(d/|log d|, 1/(1-2d)) l with C = 1.
  template <typename Real = real50>
  DensityWindow<Real> density_window(size_t m, bigint const& l, rational const& d) {
    if (m < 2) {
      throw cdim_error("density_window: need m >= 2");
    }
    if (d <= 0 || d >= rational(1, 2)) {
      throw cdim_error("density_window: need 0 < d < 1/2");
    }
    using std::abs;
    using std::log;
    Real const D  = to_real<Real>(d);
    Real const lg = log(Real(2 * m - 1));
    Real const L  = Real(l);
    DensityWindow<Real> w;
    if (d < rational(1, 8)) {
      w.lower = Real(1) + D * L * lg / (4 * log(Real(24) / D));
    }
    w.upper_small  = D / abs(log(D)) * L * lg;
    w.upper_large  = Real(1) / (1 - 2 * D) * L * lg;
    w.large_branch = w.upper_large >= w.upper_small;
    return w;
  }

  // log(2m) M* / log(M/M*), the explicit bound up to its constant.
  template <typename Real = real50>
  Real lower_bound_sc_explicit(size_t m, bigint const& M, bigint const& Mstar) {
    if (Mstar < 12) {
      throw cdim_error("lower_bound_sc_explicit: need M* >= 12");
    }
    if (M <= Mstar) {
      throw cdim_error("lower_bound_sc_explicit: need M > M*");
    }
    using std::log;
    return log(Real(2 * m)) * Real(Mstar) / log(Real(M) / Real(Mstar));
  }

  ////////////////////////////////////////////////////////////////////////
  // Thresholds
  ////////////////////////////////////////////////////////////////////////

  // lambda = 6(K+2) log l / (l log(2m-1)): the small-cancellation constant
  // reached a.a.s. in the polynomial model.
  template <typename Real = real50>
  Real cprime_lambda(size_t m, bigint const& l, size_t K) {
    if (m < 2 || l < 2) {
      throw cdim_error("cprime_lambda: need m >= 2 and l >= 2");
    }
    using std::log;
    return Real(6 * (K + 2)) * log(Real(l)) / (Real(l) * log(Real(2 * m - 1)));
  }

  // t = ((K+1) log l - 3 loglog l) / log(2m-1): every reduced word of this
  // length is a subword a.a.s.
  template <typename Real = real50>
  Real coverage_length(size_t m, bigint const& l, size_t K) {
    if (m < 2 || l < 3) {
      throw cdim_error("coverage_length: need m >= 2 and l >= 3");
    }
    using std::log;
    Real L = log(Real(l));
    return (Real(K + 1) * L - 3 * log(L)) / log(Real(2 * m - 1));
  }

  // eta = ((K+1) log l - 4 loglog l) / log(2m-1): extension length for which
  // the closing graphs have perfect matchings a.a.s.
  template <typename Real = real50>
  Real matching_length(size_t m, bigint const& l, size_t K) {
    if (m < 2 || l < 3) {
      throw cdim_error("matching_length: need m >= 2 and l >= 3");
    }
    using std::log;
    Real L = log(Real(l));
    return (Real(K + 1) * L - 4 * log(L)) / log(Real(2 * m - 1));
  }

  // Real thresholds used as word lengths are floored (0 if negative).
  template <typename Real>
  size_t floor_length(Real const& x) {
    if (x < 0) {
      return 0;
    }
    using std::floor;
    return static_cast<size_t>(floor(x).template convert_to<long long>());
  }

  template <typename Real>
  struct OmittedBound {
    Real exponent;  // 2/(2m-1)^(l/2 - 1) - l j / (9 g (2m-1)^g)
    Real value;     // exp(exponent)
  };

  // Bound on the probability that a fixed reduced word of length g is
  // omitted by j random relators of length l.
  template <typename Real = real50>
  OmittedBound<Real> omitted_subword_bound(size_t m, bigint const& l, bigint const& j,
                                           size_t g) {
    if (m < 2 || g == 0) {
      throw cdim_error("omitted_subword_bound: need m >= 2 and g >= 1");
    }
    using std::exp;
    using std::pow;
    Real const b = Real(2 * m - 1);
    Real const L = Real(l);
    Real e = Real(2) / pow(b, L / 2 - 1) - L * Real(j) / (9 * Real(g) * pow(b, Real(g)));
    return {e, exp(e)};
  }

  // M* = ceil(4 d l / 5) and K = floor(M*/3).
  inline bigint density_mstar(rational const& d, bigint const& l) {
    return ceil(rational(4 * d * l / 5));
  }

  inline bigint density_K(bigint const& Mstar) {
    return Mstar / 3;
  }

  template <typename Real = real50>
  struct Thresholds {
    Real   lambda;
    Real   t_real, eta_real;
    size_t t = 0, eta = 0;
    OmittedBound<Real> omitted;  // j = 1, g = floor(log l)
  };

  template <typename Real = real50>
  Thresholds<Real> aas_thresholds(size_t m, bigint const& l, size_t K) {
    using std::floor;
    using std::log;
    Thresholds<Real> th;
    th.lambda   = cprime_lambda<Real>(m, l, K);
    th.t_real   = coverage_length<Real>(m, l, K);
    th.eta_real = matching_length<Real>(m, l, K);
    th.t        = floor_length(th.t_real);
    th.eta      = floor_length(th.eta_real);
    auto g      = floor_length(log(Real(l)));
    th.omitted  = omitted_subword_bound<Real>(m, l, 1, std::max<size_t>(g, 1));
    return th;
  }

  ////////////////////////////////////////////////////////////////////////
  // Detection statistic
  ////////////////////////////////////////////////////////////////////////

  template <typename Real = real50>
  struct Detection {
    std::optional<bigint> chi;      // 1 - m + floor((2m-1)^(dl)), if exact
    Real                  log_chi;  // exact log, or d l log(2m-1) when symbolic
    bool                  symbolic = false;
    Real                  ratio_low;   // log chi / upper end
    std::optional<Real>   ratio_high;  // log chi / lower end, when d < 1/8
    Real                  abs_log_d;
    bool                  between = false;
  };

  // Euler characteristic of the density-model group and log chi divided by
  // the ends of the conformal dimension window (the lower end needs
  // d < 1/8).  Beyond `digit_cap`
  // decimal digits the o(1) term is dropped and the result flagged.
  template <typename Real = real50>
  Detection<Real> detection_statistic(size_t m, bigint const& l, rational const& d,
                                      size_t digit_cap = 4000) {
    if (d <= 0 || d >= rational(1, 2)) {
      throw cdim_error("detection_statistic: need 0 < d < 1/2");
    }
    using std::abs;
    using std::log;
    Detection<Real> r;
    Real const lg = log(Real(2 * m - 1));
    Real const dl = to_real<Real>(d) * Real(l);
    if (dl * lg / log(Real(10)) < Real(digit_cap)) {
      bigint big = bigint(1) << (static_cast<unsigned>(
                       (dl * lg / log(Real(2))).template convert_to<double>())
                   + 8);
      bigint n = floor_rational_power(bigint(2 * m - 1), d * rational(l), big);
      r.chi    = 1 - bigint(m) + n;
      if (*r.chi < 1) {
        throw cdim_error("detection_statistic: chi < 1, log undefined");
      }
      r.log_chi = log(Real(*r.chi));
    } else {
      r.symbolic = true;
      r.log_chi  = dl * lg;
    }
    auto w      = density_window<Real>(m, l, d);
    r.ratio_low = r.log_chi / w.upper();
    r.abs_log_d = abs(log(to_real<Real>(d)));
    if (w.lower) {
      r.ratio_high = r.log_chi / *w.lower;
      r.between    = r.ratio_low <= r.abs_log_d && r.abs_log_d <= *r.ratio_high;
    }
    return r;
  }

  ////////////////////////////////////////////////////////////////////////
  // Reports
  ////////////////////////////////////////////////////////////////////////

  struct NamedValue {
    std::string name;
    std::string formula;
    std::string value;  // exact rational or 50 significant digits
    std::string note;
  };

  struct BoundReport {
    std::vector<std::pair<std::string, std::string>> inputs;
    std::vector<NamedValue>                          outputs;
  };

  // Every formula that applies to (m, l, d), with the polynomial exponent K
  // for the threshold family.
  inline BoundReport bounds_all(size_t m, bigint const& l, rational const& d,
                                size_t K = 0) {
    BoundReport r;
    r.inputs = {{"m", std::to_string(m)},
                {"l", l.str()},
                {"d", to_string(d)},
                {"K", std::to_string(K)}};
    auto fmt = [](real50 const& x) { return format_real(x, 50); };
    auto add = [&](std::string n, std::string f, std::string v, std::string note = "") {
      r.outputs.push_back({std::move(n), std::move(f), std::move(v), std::move(note)});
    };
    auto fw = few_rel_window(l, K);
    add("poly_window_lower", "2 + K - 5 loglog l / log l", fmt(fw.lower));
    add("poly_window_upper", "2 + K + 2(K+1) loglog l / log l", fmt(fw.upper));
    if (d > 0 && d < rational(1, 2)) {
      auto dw = density_window(m, l, d);
      if (dw.lower) {
        add("density_lower", "1 + d l log(2m-1) / (4 log(24/d))", fmt(*dw.lower));
      }
      add("density_upper_small", "C (d/|log d|) l log(2m-1)", fmt(dw.upper_small),
          unspecified_constant);
      add("density_upper_large", "C (1/(1-2d)) l log(2m-1)", fmt(dw.upper_large),
          unspecified_constant);
      add("density_upper_branch", "argmax", dw.large_branch ? "1/(1-2d)" : "d/|log d|");
      if (d < rational(1, 8)) {
        auto ms = density_mstar(d, l);
        add("density_Mstar", "ceil(4 d l / 5)", ms.str());
        add("density_K", "floor(M*/3)", density_K(ms).str());
        auto det = detection_statistic(m, l, d);
        add("chi", "1 - m + (2m-1)^(dl)", det.chi ? det.chi->str() : "symbolic",
            det.symbolic ? "o(1) term dropped" : "");
        add("log_chi", "log chi", fmt(det.log_chi));
        add("log_chi_over_upper", "log chi / upper", fmt(det.ratio_low),
            unspecified_constant);
        add("log_chi_over_lower", "log chi / lower", fmt(*det.ratio_high));
        add("abs_log_d", "|log d|", fmt(det.abs_log_d));
        add("abs_log_d_between", "ratio_low <= |log d| <= ratio_high",
            det.between ? "true" : "false");
      }
    }
    auto th = aas_thresholds(m, l, K);
    add("cprime_lambda", "6(K+2) log l / (l log(2m-1))", fmt(th.lambda));
    add("coverage_t", "((K+1) log l - 3 loglog l) / log(2m-1)", fmt(th.t_real));
    add("coverage_t_length", "floor(t)", std::to_string(th.t));
    add("matching_eta", "((K+1) log l - 4 loglog l) / log(2m-1)", fmt(th.eta_real));
    add("matching_eta_length", "floor(eta)", std::to_string(th.eta));
    add("omitted_exponent", "2/(2m-1)^(l/2-1) - l j/(9 g (2m-1)^g), j=1, g=floor(log l)",
        fmt(th.omitted.exponent));
    return r;
  }

}  // namespace cdim

#endif  // CDIM_BOUNDS_HPP_
