// Suffix array by prefix doubling, LCP array by Kasai's algorithm.

#ifndef CDIM_SUFFIX_ARRAY_HPP_
#define CDIM_SUFFIX_ARRAY_HPP_

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

namespace cdim {

  // Symbols must be nonnegative.  Returns sa with text[sa[0]..] < text[sa[1]..]
  // < ...
  inline std::vector<size_t> suffix_array(std::vector<int> const& text) {
    size_t const        n = text.size();
    std::vector<size_t> sa(n), tmp(n);
    std::vector<long>   rank(n);
    std::iota(sa.begin(), sa.end(), 0);
    for (size_t i = 0; i < n; ++i) {
      rank[i] = text[i];
    }
    for (size_t k = 1; n > 1; k <<= 1) {
      auto key = [&](size_t i) {
        return std::make_pair(rank[i], i + k < n ? rank[i + k] : -1L);
      };
      std::sort(sa.begin(), sa.end(), [&](size_t a, size_t b) {
        return key(a) < key(b);
      });
      tmp[sa[0]] = 0;
      for (size_t i = 1; i < n; ++i) {
        tmp[sa[i]] = tmp[sa[i - 1]] + (key(sa[i - 1]) < key(sa[i]) ? 1 : 0);
      }
      for (size_t i = 0; i < n; ++i) {
        rank[i] = static_cast<long>(tmp[i]);
      }
      if (tmp[sa[n - 1]] == n - 1) {
        break;
      }
    }
    return sa;
  }

  // lcp[i] = longest common prefix of suffixes sa[i-1] and sa[i]; lcp[0] = 0.
  inline std::vector<size_t> lcp_array(std::vector<int> const&    text,
                                       std::vector<size_t> const& sa) {
    size_t const        n = text.size();
    std::vector<size_t> rank(n), lcp(n, 0);
    for (size_t i = 0; i < n; ++i) {
      rank[sa[i]] = i;
    }
    size_t h = 0;
    for (size_t i = 0; i < n; ++i) {
      if (rank[i] == 0) {
        h = 0;
        continue;
      }
      size_t j = sa[rank[i] - 1];
      while (i + h < n && j + h < n && text[i + h] == text[j + h]) {
        ++h;
      }
      lcp[rank[i]] = h;
      if (h > 0) {
        --h;
      }
    }
    return lcp;
  }

}  // namespace cdim

#endif  // CDIM_SUFFIX_ARRAY_HPP_
