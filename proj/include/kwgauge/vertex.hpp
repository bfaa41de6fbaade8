#pragma once

// Vertex-model evaluation of the bracket.
//
// The diagram is first given a rectilinear presentation: every crossing has
// four right angles and each edge carries a net number of quarter-turn bends,
// chosen so that each bounded face turns by +4 quarter turns and the outer
// face by -4. In such a presentation every simple closed curve made of edge
// pieces turns by +-4, which plays the role of the cap/cup count of a height
// function.
//
// Edges are then labelled by a direction (the spin). Each crossing contributes
// its smoothing weight A^(+-1) times nu^(turn) for the two arcs of the
// smoothing, and each edge contributes nu^(+-bends). With nu^4 = -A^2 an
// oriented loop weighs (-A^2)^(+-1), and summing its two orientations gives
// the loop value -A^2 - A^-2. Arithmetic stays in Z[A^+-1, nu^+-1] until the
// end, where nu^4 -> -A^2 is applied.

#include <cstdint>
#include <map>
#include <queue>
#include <utility>

#include "kwgauge/bracket.hpp"

namespace kwg {

struct RectilinearPresentation {
  PDStructure structure;
  PlanarMap map;
  std::vector<int> bends;        // per edge, left quarter turns when traversed ends[0] -> ends[1]
  std::vector<int> outer_faces;  // one per connected piece of the diagram
};

/// Solves the face-rotation conditions on a spanning tree of the dual graph.
inline RectilinearPresentation rectilinear_presentation(const PDCode& pd) {
  RectilinearPresentation rp;
  rp.structure = analyze(pd);
  const auto& st = rp.structure;
  rp.map = planar_map(pd, st);
  const auto& pm = rp.map;
  const int ne = static_cast<int>(st.labels.size());
  const int nf = static_cast<int>(pm.faces.size());
  rp.bends.assign(ne, 0);

  // Edge e separates left(e) = face leaving through ends[0] and right(e) = face leaving through ends[1].
  std::vector<int> left(ne), right(ne);
  std::vector<std::vector<int>> incident(nf);
  for (int e = 0; e < ne; ++e) {
    left[e] = pm.face_of_slot[st.ends[e][0]];
    right[e] = pm.face_of_slot[st.ends[e][1]];
    if (left[e] == right[e])
      throw invalid_argument("rectilinear presentation: edge " + std::to_string(st.labels[e]) +
                             " has the same face on both sides");
    incident[left[e]].push_back(e);
    incident[right[e]].push_back(e);
  }

  // Outer face: the lowest-numbered face of each piece; deterministic.
  std::vector<int> target(nf), piece_outer(pm.graph_components, -1);
  for (int f = 0; f < nf; ++f) {
    const int piece = pm.graph_component[pm.faces[f].front() / 4];
    if (piece_outer[piece] < 0) piece_outer[piece] = f;
  }
  rp.outer_faces = piece_outer;
  for (int f = 0; f < nf; ++f) {
    const int piece = pm.graph_component[pm.faces[f].front() / 4];
    const int corners = static_cast<int>(pm.faces[f].size());
    target[f] = (piece_outer[piece] == f ? -4 : 4) - corners;
  }

  // Breadth-first dual tree from each outer face, then settle faces leaves-first.
  std::vector<int> parent_edge(nf, -1), order;
  std::vector<char> seen(nf, 0);
  for (int root : piece_outer) {
    std::queue<int> q;
    q.push(root);
    seen[root] = 1;
    while (!q.empty()) {
      const int f = q.front();
      q.pop();
      order.push_back(f);
      for (int e : incident[f]) {
        const int g = left[e] == f ? right[e] : left[e];
        if (!seen[g]) {
          seen[g] = 1;
          parent_edge[g] = e;
          q.push(g);
        }
      }
    }
  }
  auto face_sum = [&](int f) {
    int s = 0;
    for (int e : incident[f]) s += (left[e] == f ? rp.bends[e] : -rp.bends[e]);
    return s;
  };
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int f = *it, e = parent_edge[f];
    if (e < 0) continue;
    const int missing = target[f] - face_sum(f);
    rp.bends[e] += left[e] == f ? missing : -missing;
  }
  for (int f = 0; f < nf; ++f)
    if (face_sum(f) != target[f])
      throw invalid_argument("rectilinear presentation: face rotation conditions are inconsistent");
  return rp;
}

namespace detail {

// Polynomials in A and nu, keyed by (A-exponent, nu-exponent).
using BiPoly = std::map<std::pair<int, int>, std::int64_t>;

inline void bi_add(BiPoly& p, std::pair<int, int> k, std::int64_t c) {
  if (!c) return;
  auto [it, fresh] = p.emplace(k, c);
  if (!fresh) {
    it->second = checked_add(it->second, c);
    if (!it->second) p.erase(it);
  }
}

inline BiPoly bi_mul(const BiPoly& a, const BiPoly& b) {
  BiPoly out;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) bi_add(out, {ka.first + kb.first, ka.second + kb.second}, checked_mul(ca, cb));
  return out;
}

// Crossing weight for the given in/out pattern of its four half-edges.
inline BiPoly crossing_weight(const std::array<bool, 4>& incoming) {
  using namespace knot_conventions;
  BiPoly w;
  for (int kind = 0; kind < 2; ++kind) {
    const auto& pr = kSmoothingPairs[kind];
    int turn = 0;
    bool ok = true;
    for (int arc = 0; arc < 2; ++arc) {
      const int p = pr[2 * arc], q = pr[2 * arc + 1];  // q = p + 1 mod 4: corner p
      if (incoming[p] == incoming[q]) {
        ok = false;
        break;
      }
      turn += incoming[p] ? -1 : 1;  // entering at p and leaving at p+1 is a right turn
    }
    if (ok) bi_add(w, {kSmoothingAExponent[kind], turn}, 1);
  }
  return w;
}

}  // namespace detail

/// <K> from the vertex model, normalized so that the unknot is 1.
inline LaurentPolynomial vertex_model_bracket(const PDCode& pd) {
  using namespace knot_conventions;
  LaurentPolynomial delta_free = loop_value().pow(pd.free_loops);
  if (pd.crossings.empty()) return delta_free.divided_by(loop_value());

  const auto rp = rectilinear_presentation(pd);
  const auto& st = rp.structure;
  const int n = pd.size();
  const int ne = static_cast<int>(st.labels.size());
  if (ne > 64) throw invalid_argument("vertex model: at most 32 crossings are supported");

  // Visit crossings breadth-first so the open boundary stays small.
  std::vector<int> order;
  std::vector<char> placed(n, 0);
  for (int c0 = 0; c0 < n; ++c0) {
    if (placed[c0]) continue;
    std::queue<int> q;
    q.push(c0);
    placed[c0] = 1;
    while (!q.empty()) {
      const int c = q.front();
      q.pop();
      order.push_back(c);
      for (int p = 0; p < 4; ++p) {
        const int d = st.other_end(4 * c + p, pd) / 4;
        if (!placed[d]) {
          placed[d] = 1;
          q.push(d);
        }
      }
    }
  }
  std::vector<int> remaining_ends(ne, 2);

  // spin bit 0: the edge runs ends[0] -> ends[1].
  std::map<std::uint64_t, detail::BiPoly> states{{0, detail::BiPoly{{{0, 0}, 1}}}};
  std::uint64_t assigned = 0;
  for (int c : order) {
    std::array<int, 4> edge;
    for (int p = 0; p < 4; ++p) edge[p] = st.edge_of(4 * c + p, pd);
    std::vector<int> fresh;
    for (int p = 0; p < 4; ++p)
      if (!((assigned >> edge[p]) & 1) && std::find(fresh.begin(), fresh.end(), edge[p]) == fresh.end())
        fresh.push_back(edge[p]);

    std::map<std::uint64_t, detail::BiPoly> next;
    for (const auto& [mask, poly] : states) {
      for (std::uint32_t choice = 0; choice < (1u << fresh.size()); ++choice) {
        std::uint64_t m = mask;
        detail::BiPoly w{{{0, 0}, 1}};
        for (std::size_t k = 0; k < fresh.size(); ++k) {
          const int e = fresh[k];
          const bool rev = (choice >> k) & 1;
          if (rev) m |= std::uint64_t(1) << e;
          w = detail::bi_mul(w, detail::BiPoly{{{0, rev ? -rp.bends[e] : rp.bends[e]}, 1}});
        }
        std::array<bool, 4> in;
        for (int p = 0; p < 4; ++p) {
          const int slot = 4 * c + p, e = edge[p];
          const bool rev = (m >> e) & 1;
          in[p] = (slot == st.ends[e][1]) != rev;
        }
        const auto cw = detail::crossing_weight(in);
        if (cw.empty()) continue;
        auto& dst = next[m];
        for (const auto& [k, v] : detail::bi_mul(detail::bi_mul(poly, w), cw)) detail::bi_add(dst, k, v);
      }
    }
    for (int e : fresh) assigned |= std::uint64_t(1) << e;
    // Edges with both ends placed leave the boundary; forget their spins.
    std::uint64_t closed = 0;
    for (int p = 0; p < 4; ++p)
      if (--remaining_ends[edge[p]] == 0) closed |= std::uint64_t(1) << edge[p];
    states.clear();
    for (auto& [mask, poly] : next) {
      auto& dst = states[mask & ~closed];
      for (const auto& [k, v] : poly) detail::bi_add(dst, k, v);
    }
  }
  if (states.size() != 1 || states.begin()->first != 0)
    throw numerical_fault("vertex model: open edges remain after contraction");

  LaurentPolynomial total;
  for (const auto& [k, c] : states.begin()->second) {
    const auto [ea, nu] = k;
    if (nu % 4 != 0) throw numerical_fault("vertex model: loop rotations are not integral");
    total.add(ea + nu / 2, (nu / 4) % 2 == 0 ? c : -c);  // nu^4 = -A^2
  }
  return (total * delta_free).divided_by(loop_value());
}

}  // namespace kwg
