#include <catch_amalgamated.hpp>

#include <cmath>

#include <cdim/bounds.hpp>

using namespace cdim;
using boost::multiprecision::abs;
using boost::multiprecision::exp;
using boost::multiprecision::log;

namespace {

  bool close(real50 const& a, real100 const& b, char const* tol = "1e-40") {
    return abs(real100(a) - b) < real100(tol);
  }

  real100 ln(long v) {
    return log(real100(v));
  }

}  // namespace

TEST_CASE("small-cancellation upper bound", "[bounds]") {
  REQUIRE(upper_bound_sc(5, rational(1, 8)) == real50(3));
  REQUIRE(upper_bound_sc(2, rational(1, 8)) == real50(1));
  auto v = upper_bound_sc(5, rational(1, 16));
  REQUIRE(close(v, 1 + ln(4) / ln(3)));
  REQUIRE(format_real(v, 20) == "2.2618595071429148742");
  // floor(1/(8 lambda)) + 1 for lambda = 1/20 is 3.
  REQUIRE(close(upper_bound_sc(10, rational(1, 20)), 1 + ln(9) / ln(3)));
  REQUIRE_THROWS_AS(upper_bound_sc(1, rational(1, 8)), cdim_error);
  REQUIRE_THROWS_AS(upper_bound_sc(5, rational(1, 6)), cdim_error);
  REQUIRE(close(upper_bound_sc_relaxed(2, 8, rational(1, 16)), 1 + ln(16) / ln(3)));
}

TEST_CASE("round-tree lower bound", "[bounds]") {
  REQUIRE(lower_bound_roundtree(2, 2) == real50(2));
  REQUIRE(close(lower_bound_roundtree(9, 3), real100(3)));
  REQUIRE(close(lower_bound_roundtree(2, 4), real100("1.5")));
  REQUIRE_THROWS_AS(lower_bound_roundtree(1, 4), cdim_error);
}

TEST_CASE("polynomial-model window", "[bounds]") {
  auto w = few_rel_window(bigint(1000000), 0);
  // Reference digits: log 10^6 = 13.8155..., log log 10^6 = 2.62579...
  REQUIRE(std::abs(w.lower.convert_to<double>() - (2 - 5 * 2.62579 / 13.8155)) < 1e-3);
  REQUIRE(std::abs(w.upper.convert_to<double>() - (2 + 2 * 2.62579 / 13.8155)) < 1e-3);
  real100 L = ln(1000000), LL = log(L);
  REQUIRE(close(w.lower, 2 - 5 * LL / L));
  REQUIRE(close(w.upper, 2 + 2 * LL / L));
  auto w1 = few_rel_window(bigint(1000000), 1);
  REQUIRE(close(w1.lower, 3 - 5 * LL / L));
  REQUIRE(close(w1.upper, 3 + 4 * LL / L));
  REQUIRE(std::abs(w1.lower.convert_to<double>() - 2.04966) < 1e-4);
  REQUIRE_THROWS_AS(few_rel_window(bigint(15), 0), cdim_error);
  // Both ends approach 2 + K.
  auto far = few_rel_window(bigint(boost::multiprecision::pow(bigint(10), 40)), 0);
  REQUIRE(far.lower > w.lower);
  REQUIRE(far.upper < w.upper);
}

TEST_CASE("density window", "[bounds]") {
  auto w = density_window(2, 1000, rational(1, 10));
  REQUIRE(w.lower.has_value());
  real100 d("0.1");
  REQUIRE(close(*w.lower, 1 + d * 1000 * ln(3) / (4 * log(24 / d))));
  REQUIRE(std::abs(w.lower->convert_to<double>() - 6.0115) < 1e-3);
  REQUIRE(w.large_branch);
  REQUIRE(close(w.upper_small, d / abs(log(d)) * 1000 * ln(3)));
  REQUIRE(close(w.upper_large, 1000 * ln(3) / (1 - 2 * d)));
  REQUIRE_FALSE(density_window(2, 1000, rational(1, 5)).lower.has_value());
  REQUIRE_THROWS_AS(density_window(2, 1000, rational(1, 2)), cdim_error);
  // d -> 0 with d l fixed pushes the lower end towards 1.
  auto tiny = density_window(2, bigint(boost::multiprecision::pow(bigint(10), 9)), rational(1, 10000000));
  REQUIRE(*tiny.lower < *w.lower);
}

TEST_CASE("explicit small-cancellation lower bound", "[bounds]") {
  REQUIRE(close(lower_bound_sc_explicit(2, 1000, 100), ln(4) * 100 / ln(10)));
  REQUIRE(std::abs(lower_bound_sc_explicit(2, 1000, 100).convert_to<double>() - 60.206) < 1e-3);
  REQUIRE(close(lower_bound_sc_explicit(2, 200, 100), real100(200)));
  REQUIRE_THROWS_AS(lower_bound_sc_explicit(2, 100, 100), cdim_error);
  REQUIRE_THROWS_AS(lower_bound_sc_explicit(2, 100, 11), cdim_error);
}

TEST_CASE("a.a.s. thresholds", "[bounds]") {
  auto th = aas_thresholds(2, 1000, 0);
  REQUIRE(close(th.lambda, 12 * ln(1000) / (1000 * ln(3))));
  REQUIRE(std::abs(th.lambda.convert_to<double>() - 0.0754525) < 1e-6);
  REQUIRE(close(th.t_real, (ln(1000) - 3 * log(ln(1000))) / ln(3)));
  REQUIRE(th.t == 1);
  REQUIRE(close(th.eta_real, (ln(1000) - 4 * log(ln(1000))) / ln(3)));
  REQUIRE(th.eta == 0);
  // g = floor(log 1000) = 6, j = 1.
  real100 e = 2 / boost::multiprecision::pow(real100(3), 499)
              - real100(1000) / (9 * 6 * boost::multiprecision::pow(real100(3), 6));
  REQUIRE(close(th.omitted.exponent, e));
  REQUIRE(std::abs(th.omitted.exponent.convert_to<double>() + 0.0254026) < 1e-6);
  REQUIRE(density_mstar(rational(1, 10), 1000) == 80);
  REQUIRE(density_K(80) == 26);
}

TEST_CASE("detection statistic", "[bounds]") {
  auto a = detection_statistic(2, 20, rational(1, 10));
  REQUIRE(a.chi == bigint(8));
  REQUIRE(close(a.log_chi, ln(8)));
  REQUIRE(detection_statistic(2, 16, rational(1, 4)).chi == bigint(80));
  auto big = detection_statistic(2, 100000, rational(1, 10), 100);
  REQUIRE(big.symbolic);
  REQUIRE_FALSE(big.chi.has_value());
  // log chi / (d l log 3) tends to 1.
  auto mid = detection_statistic(2, 4000, rational(1, 10));
  double r = (mid.log_chi / (real50(400) * log(real50(3)))).convert_to<double>();
  REQUIRE(std::abs(r - 1) < 1e-3);
}

TEST_CASE("50- and 100-digit evaluations agree", "[bounds][property]") {
  for (long l : {16L, 100L, 1000L, 123457L, 1000000L}) {
    for (size_t K : {0u, 1u, 3u}) {
      auto a = few_rel_window<real50>(l, K);
      auto b = few_rel_window<real100>(l, K);
      REQUIRE(close(a.lower, b.lower, "1e-45"));
      REQUIRE(close(a.upper, b.upper, "1e-45"));
      REQUIRE(close(cprime_lambda<real50>(3, l, K), cprime_lambda<real100>(3, l, K), "1e-45"));
    }
  }
  for (long k = 2; k < 40; k += 3) {
    for (long q = 8; q < 80; q += 7) {
      rational lam(1, q);
      REQUIRE(close(upper_bound_sc<real50>(k, lam), upper_bound_sc<real100>(k, lam), "1e-45"));
    }
  }
}

TEST_CASE("bounds report", "[bounds]") {
  auto r = bounds_all(2, 1000, rational(1, 10), 0);
  REQUIRE(r.outputs.size() >= 8);
  bool saw = false;
  for (auto const& o : r.outputs) {
    saw = saw || o.name == "poly_window_lower";
    REQUIRE_FALSE(o.value.empty());
  }
  REQUIRE(saw);
}

TEST_CASE("exact log ratios", "[bounds][property]") {
  // log a / log b = x / y exactly when a^y = b^x.
  for (long a = 1; a <= 300; ++a) {
    for (long b = 2; b <= 300; ++b) {
      std::optional<rational> want;
      for (unsigned y = 1; y <= 9 && !want; ++y) {
        for (unsigned x = 0; x <= 9 && !want; ++x) {
          if (boost::multiprecision::pow(bigint(a), y) == boost::multiprecision::pow(bigint(b), x)) {
            want = rational(x, y);
          }
        }
      }
      REQUIRE(exact_log_ratio(a, b) == want);
    }
  }
  REQUIRE(exact_log_ratio(bigint(1) << 60, bigint(1) << 36) == rational(5, 3));
}
