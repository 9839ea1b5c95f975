// Exact rationals, big integers and high-precision reals.

#ifndef CDIM_NUMERIC_HPP_
#define CDIM_NUMERIC_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "words.hpp"

namespace cdim {

  using bigint   = boost::multiprecision::cpp_int;
  using rational = boost::multiprecision::cpp_rational;
  using real50   = boost::multiprecision::cpp_dec_float_50;
  using real100  = boost::multiprecision::cpp_dec_float_100;

  // Accepts integers, fractions "p/q" and decimals "0.125"; no exponents.
  inline rational parse_rational(std::string const& s) {
    auto fail = [&]() { throw cdim_error("not a rational number: '" + s + "'"); };
    if (s.empty()) {
      fail();
    }
    auto digits_only = [](std::string const& t, size_t from) {
      if (from >= t.size()) {
        return false;
      }
      for (size_t i = from; i < t.size(); ++i) {
        if (t[i] < '0' || t[i] > '9') {
          return false;
        }
      }
      return true;
    };
    size_t      sign_len = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    bool        neg      = s[0] == '-';
    std::string body     = s.substr(sign_len);
    rational    r;
    if (auto slash = body.find('/'); slash != std::string::npos) {
      std::string num = body.substr(0, slash), den = body.substr(slash + 1);
      if (!digits_only(num, 0) || !digits_only(den, 0)) {
        fail();
      }
      bigint d(den);
      if (d == 0) {
        throw cdim_error("zero denominator in '" + s + "'");
      }
      r = rational(bigint(num), d);
    } else if (auto dot = body.find('.'); dot != std::string::npos) {
      std::string ip = body.substr(0, dot), fp = body.substr(dot + 1);
      if ((ip.empty() && fp.empty()) || (!ip.empty() && !digits_only(ip, 0))
          || (!fp.empty() && !digits_only(fp, 0))) {
        fail();
      }
      bigint scale = boost::multiprecision::pow(bigint(10),
                                                static_cast<unsigned>(fp.size()));
      bigint num   = bigint(ip.empty() ? "0" : ip) * scale
                   + bigint(fp.empty() ? "0" : fp);
      r = rational(num, scale);
    } else {
      if (!digits_only(body, 0)) {
        fail();
      }
      r = rational(bigint(body));
    }
    return neg ? rational(-r) : r;
  }

  inline std::string to_string(rational const& q) {
    return q.str();
  }

  template <typename Real>
  Real to_real(rational const& q) {
    return Real(boost::multiprecision::numerator(q))
           / Real(boost::multiprecision::denominator(q));
  }

  inline double to_double(rational const& q) {
    return static_cast<double>(to_real<real50>(q));
  }

  inline bigint floor(rational const& q) {
    bigint n = boost::multiprecision::numerator(q);
    bigint d = boost::multiprecision::denominator(q);
    bigint f = n / d;
    if (n < 0 && f * d != n) {
      f -= 1;
    }
    return f;
  }

  inline bigint ceil(rational const& q) {
    return -floor(rational(-q));
  }

  template <typename Real>
  std::string format_real(Real const& x, int digits = 20) {
    return x.str(digits, std::ios_base::fmtflags(0));
  }

  // Largest n >= 0 with n^q <= b^p, i.e. floor(b^(p/q)) for b >= 1, p >= 0,
  // q >= 1.  Answers above cap are reported as cap + 1.
  inline bigint floor_rational_power(bigint const& b,
                                     rational const& e,
                                     bigint const& cap) {
    bigint p = boost::multiprecision::numerator(e);
    bigint q = boost::multiprecision::denominator(e);
    if (b < 1 || p < 0) {
      throw cdim_error("floor_rational_power: unsupported arguments");
    }
    unsigned qq = q.convert_to<unsigned>();
    unsigned pp = p.convert_to<unsigned>();
    bigint   target = boost::multiprecision::pow(b, pp);
    auto     le     = [&](bigint const& n) {
      return boost::multiprecision::pow(n, qq) <= target;
    };
    if (le(cap + 1)) {
      return cap + 1;
    }
    bigint lo = 0, hi = cap;  // le(lo) true, answer in [lo, hi]
    while (lo < hi) {
      bigint mid = (lo + hi + 1) / 2;
      if (le(mid)) {
        lo = mid;
      } else {
        hi = mid - 1;
      }
    }
    return lo;
  }

  // log a / log b when it is rational, i.e. when a and b are powers of a
  // common integer; a >= 1, b >= 2.
  inline std::optional<rational> exact_log_ratio(bigint const& a, bigint const& b) {
    if (a < 1 || b < 2) {
      return std::nullopt;
    }
    if (a == 1) {
      return rational(0);
    }
    // Integer e-th root of n, if n is a perfect e-th power.
    auto root = [](bigint const& n, unsigned e) -> std::optional<bigint> {
      bigint lo = 1, hi = n;
      while (lo <= hi) {
        bigint mid = (lo + hi) / 2;
        bigint v   = boost::multiprecision::pow(mid, e);
        if (v == n) {
          return mid;
        }
        if (v < n) {
          lo = mid + 1;
        } else {
          hi = mid - 1;
        }
      }
      return std::nullopt;
    };
    // b = c^y with c not itself a perfect power.
    unsigned const top = static_cast<unsigned>(boost::multiprecision::msb(b));
    bigint         c   = b;
    unsigned       y   = 1;
    for (unsigned e = top; e >= 2; --e) {
      if (auto r = root(b, e)) {
        c = *r;
        y = e;
        break;
      }
    }
    bigint   v = 1;
    unsigned x = 0;
    while (v < a) {
      v *= c;
      ++x;
    }
    if (v != a) {
      return std::nullopt;
    }
    return rational(x, y);
  }

}  // namespace cdim

#endif  // CDIM_NUMERIC_HPP_
