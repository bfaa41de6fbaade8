#pragma once

// Kauffman bracket by brute-force state sum, and the conventions shared by
// every route to the Jones polynomial.

#include <cstdint>
#include <numeric>
#include <vector>

#include "kwgauge/laurent.hpp"
#include "kwgauge/pd.hpp"

namespace kwg {

namespace knot_conventions {

// Smoothing X[a,b,c,d] with weight A joins a-b and c-d (the corners cut off
// are the B-regions); weight 1/A joins a-d and b-c.
inline constexpr std::array<std::array<int, 4>, 2> kSmoothingPairs{{{0, 1, 2, 3}, {3, 0, 1, 2}}};
inline constexpr std::array<int, 2> kSmoothingAExponent{1, -1};

inline constexpr int kMaxBracketCrossings = 20;

/// delta = -A^2 - A^-2, the value of a free loop.
inline LaurentPolynomial loop_value() {
  return LaurentPolynomial::monomial(-1, 2) + LaurentPolynomial::monomial(-1, -2);
}

/// (-A^3)^(-w).
inline LaurentPolynomial writhe_factor(int w) {
  return LaurentPolynomial::monomial((w % 2 == 0) ? 1 : -1, -3 * w);
}

/// A -> q^(-1/4). Bracket keys are A-exponents; Jones keys are doubled q-exponents.
inline LaurentPolynomial a_to_q(const LaurentPolynomial& p) {
  LaurentPolynomial out;
  for (const auto& [k, c] : p.terms()) {
    if (k % 2 != 0) throw numerical_fault("A-exponent " + std::to_string(k) + " has no image in q^(1/2)");
    out.add(-k / 2, c);
  }
  return out;
}

}  // namespace knot_conventions

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace detail

/// <K> as a Laurent polynomial in A, normalized so that the unknot is 1.
inline LaurentPolynomial kauffman_bracket(const PDCode& pd) {
  using namespace knot_conventions;
  const int n = pd.size();
  if (n > kMaxBracketCrossings)
    throw invalid_argument("kauffman_bracket: " + std::to_string(n) + " crossings exceed the limit of " +
                           std::to_string(kMaxBracketCrossings));
  const auto st = analyze(pd);
  const int ne = static_cast<int>(st.labels.size());

  // Loops per state, tallied by A-exponent.
  std::vector<std::vector<std::int64_t>> tally(n + 1);  // [#A-smoothings][loops]
  for (auto& t : tally) t.assign(ne + 1, 0);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    detail::UnionFind uf(ne);
    int loops = ne, a_count = 0;
    for (int c = 0; c < n; ++c) {
      const int kind = (mask >> c) & 1;
      if (kind == 0) ++a_count;
      const auto& pr = kSmoothingPairs[kind];
      const auto& x = pd.crossings[c];
      loops -= uf.unite(st.index.at(x[pr[0]]), st.index.at(x[pr[1]]));
      loops -= uf.unite(st.index.at(x[pr[2]]), st.index.at(x[pr[3]]));
    }
    ++tally[a_count][loops];
  }
  const LaurentPolynomial delta = loop_value();
  std::vector<LaurentPolynomial> dpow{LaurentPolynomial(1)};
  for (int k = 1; k <= ne + pd.free_loops; ++k) dpow.push_back(dpow.back() * delta);

  LaurentPolynomial out;
  for (int a = 0; a <= n; ++a)
    for (int l = 0; l <= ne; ++l) {
      if (!tally[a][l]) continue;
      const int exponent = kSmoothingAExponent[0] * a + kSmoothingAExponent[1] * (n - a);
      const int loops = l + pd.free_loops - 1;  // normalization: one loop counts as 1
      out += LaurentPolynomial::monomial(tally[a][l], exponent) * dpow[loops];
    }
  return out;
}

}  // namespace kwg
