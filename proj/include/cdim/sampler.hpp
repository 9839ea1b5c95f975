// Uniform cyclically reduced words and the three random presentation models.

#ifndef CDIM_SAMPLER_HPP_
#define CDIM_SAMPLER_HPP_

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "numeric.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "words.hpp"

namespace cdim {

  // Number of freely reduced words of length l over m generators.
  inline bigint count_reduced(size_t m, size_t l) {
    if (m < 1) {
      throw cdim_error("count_reduced: m must be positive");
    }
    if (l == 0) {
      return 1;
    }
    return bigint(2 * m)
           * boost::multiprecision::pow(bigint(2 * m - 1),
                                        static_cast<unsigned>(l - 1));
  }

  // Number of cyclically reduced words of length l >= 1.
  inline bigint count_cyclically_reduced(size_t m, size_t l) {
    if (l == 0) {
      return 1;
    }
    bigint b = boost::multiprecision::pow(bigint(2 * m - 1),
                                          static_cast<unsigned>(l));
    return b + 1 + bigint(m - 1) * (l % 2 == 0 ? 2 : 0);
  }

  inline word_type sample_reduced(size_t m, size_t l, rng_type& g) {
    word_type w;
    w.reserve(l);
    if (l == 0) {
      return w;
    }
    w.push_back(letter_from_rank(static_cast<int>(uniform_below(g, 2 * m))));
    for (size_t i = 1; i < l; ++i) {
      int forbidden = letter_rank(-w.back());
      int r         = static_cast<int>(uniform_below(g, 2 * m - 1));
      if (r >= forbidden) {
        ++r;
      }
      w.push_back(letter_from_rank(r));
    }
    return w;
  }

  // Exactly uniform over cyclically reduced words of length l, by rejection.
  inline word_type sample_cyclically_reduced(size_t m, size_t l, rng_type& g) {
    if (l == 0) {
      throw cdim_error("sample_cyclically_reduced: length must be positive");
    }
    while (true) {
      word_type w = sample_reduced(m, l, g);
      if (is_cyclically_reduced(w)) {
        return w;
      }
    }
  }

  enum class Model { few, poly, density };

  // How relator lengths are drawn in the "length <= l" models.
  enum class LengthDist { uniform, union_weighted };

  inline std::string to_string(Model m) {
    switch (m) {
      case Model::few:
        return "few";
      case Model::poly:
        return "poly";
      default:
        return "density";
    }
  }

  inline Model parse_model(std::string const& s) {
    if (s == "few") {
      return Model::few;
    } else if (s == "poly" || s == "polynomial") {
      return Model::poly;
    } else if (s == "density") {
      return Model::density;
    }
    throw cdim_error("unknown model '" + s + "'");
  }

  inline std::string to_string(LengthDist d) {
    return d == LengthDist::uniform ? "uniform" : "union";
  }

  inline LengthDist parse_length_dist(std::string const& s) {
    if (s == "uniform") {
      return LengthDist::uniform;
    } else if (s == "union" || s == "union_weighted") {
      return LengthDist::union_weighted;
    }
    throw cdim_error("unknown length distribution '" + s + "'");
  }

  struct ModelSpec {
    Model      model = Model::few;
    size_t     m     = 2;
    size_t     l     = 1;
    size_t     n     = 1;         // few-relator count
    rational   C     = 1;         // polynomial coefficient
    size_t     K     = 0;         // polynomial exponent
    rational   d     = 0;         // density
    uint64_t   seed  = 0;
    LengthDist lengths = LengthDist::uniform;
    size_t     cap     = 1000000;  // maximum number of relators
  };

  inline size_t relator_count(ModelSpec const& s) {
    bigint n;
    switch (s.model) {
      case Model::few:
        n = s.n;
        break;
      case Model::poly: {
        rational v = s.C
                     * rational(boost::multiprecision::pow(
                         bigint(s.l), static_cast<unsigned>(s.K)));
        n = ceil(v);
        break;
      }
      case Model::density: {
        if (s.d <= 0 || s.d >= 1) {
          throw cdim_error("density must lie strictly between 0 and 1");
        }
        n = floor_rational_power(bigint(2 * s.m - 1),
                                 s.d * rational(s.l),
                                 bigint(s.cap));
        break;
      }
    }
    if (n > s.cap) {
      throw cdim_error("model needs more than " + std::to_string(s.cap)
                       + " relators (raise the cap or lower d*l)");
    }
    return n.convert_to<size_t>();
  }

  // Relative weights of lengths 1..l under the union-weighted rule,
  // proportional to the number of cyclically reduced words of each length.
  inline std::vector<double> union_length_cdf(size_t m, size_t l) {
    std::vector<double> logw(l);
    double const        lb = std::log(static_cast<double>(2 * m - 1));
    for (size_t j = 1; j <= l; ++j) {
      double extra = 1.0 + ((j % 2 == 0) ? 2.0 * (m - 1) : 0.0);
      logw[j - 1]  = j * lb + std::log1p(extra * std::exp(-(j * lb)));
    }
    double              top = logw.back();
    std::vector<double> cdf(l);
    double              acc = 0;
    for (size_t j = 0; j < l; ++j) {
      acc += std::exp(logw[j] - top);
      cdf[j] = acc;
    }
    for (auto& c : cdf) {
      c /= acc;
    }
    return cdf;
  }

  inline size_t draw_length(ModelSpec const&            s,
                            std::vector<double> const& cdf,
                            rng_type&                  g) {
    if (s.model == Model::density) {
      return s.l;
    }
    if (s.lengths == LengthDist::uniform) {
      return 1 + uniform_below(g, s.l);
    }
    double u = uniform_unit(g);
    auto   it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) {
      --it;
    }
    return 1 + static_cast<size_t>(it - cdf.begin());
  }

  inline std::string describe(ModelSpec const& s) {
    std::string t = to_string(s.model) + " m=" + std::to_string(s.m)
                    + " l=" + std::to_string(s.l);
    switch (s.model) {
      case Model::few:
        t += " n=" + std::to_string(s.n);
        break;
      case Model::poly:
        t += " C=" + to_string(s.C) + " K=" + std::to_string(s.K);
        break;
      case Model::density:
        t += " d=" + to_string(s.d);
        break;
    }
    if (s.model != Model::density) {
      t += " lengths=" + to_string(s.lengths);
    }
    return t + " seed=" + std::to_string(s.seed);
  }

  // Relator i is drawn from the stream (seed, i), so any worker count gives
  // the same presentation.
  inline Presentation sample_presentation(ModelSpec const& s,
                                          size_t           workers = 1) {
    if (s.m < 2) {
      throw cdim_error("sampled presentations need m >= 2");
    }
    if (s.l < 1) {
      throw cdim_error("relator length must be positive");
    }
    size_t              n = relator_count(s);
    std::vector<double> cdf;
    if (s.model != Model::density && s.lengths == LengthDist::union_weighted) {
      cdf = union_length_cdf(s.m, s.l);
    }
    Presentation p;
    p.rank       = s.m;
    p.provenance = describe(s);
    p.relators.resize(n);
    parallel_for(n, workers, [&](size_t i) {
      rng_type g      = make_stream(s.seed, {i});
      size_t   len    = draw_length(s, cdf, g);
      p.relators[i]   = sample_cyclically_reduced(s.m, len, g);
    });
    return p;
  }

}  // namespace cdim

#endif  // CDIM_SAMPLER_HPP_
