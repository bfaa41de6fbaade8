#pragma once

// Planar-diagram (PD) codes.
//
// A crossing X[a,b,c,d] lists the four incident strand labels counterclockwise,
// starting from the incoming under-strand, so the under-strand runs a -> c and
// the over-strand joins b and d. The crossing is positive when the over-strand
// runs d -> b. Every label names one edge of the diagram and occurs exactly
// twice. "U" adds a crossingless unknotted component.
//
// Slots number the crossing positions: slot 4*i + p is position p of crossing i.

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "kwgauge/error.hpp"

namespace kwg {

struct PDCode {
  std::vector<std::array<int, 4>> crossings;
  int free_loops = 0;  // crossingless unknots
  int components = 0;  // filled in by parse_pd / analyze

  int size() const { return static_cast<int>(crossings.size()); }
  int label_at(int slot) const { return crossings[slot / 4][slot % 4]; }
  int max_label() const {
    int m = 0;
    for (const auto& x : crossings)
      for (int v : x) m = std::max(m, v);
    return m;
  }
};

inline std::string to_string(const PDCode& pd) {
  std::ostringstream os;
  bool first = true;
  for (const auto& x : pd.crossings) {
    os << (first ? "" : " ") << "X[" << x[0] << ',' << x[1] << ',' << x[2] << ',' << x[3] << ']';
    first = false;
  }
  for (int k = 0; k < pd.free_loops; ++k) {
    os << (first ? "" : " ") << 'U';
    first = false;
  }
  return os.str();
}

/// Edge structure and orientation derived from a PD code.
struct PDStructure {
  std::vector<int> labels;               // distinct labels, sorted
  std::map<int, int> index;              // label -> position in `labels`
  std::vector<std::array<int, 2>> ends;  // the two slots of each label, ascending
  std::vector<int> head;                 // slot where each oriented edge arrives
  std::vector<int> component;            // component id of each label
  int traced_components = 0;

  int edge_of(int slot, const PDCode& pd) const { return index.at(pd.label_at(slot)); }
  int other_end(int slot, const PDCode& pd) const {
    const auto& e = ends[edge_of(slot, pd)];
    return e[0] == slot ? e[1] : e[0];
  }
  int tail(int e) const { return ends[e][0] == head[e] ? ends[e][1] : ends[e][0]; }
};

inline PDStructure analyze(const PDCode& pd) {
  PDStructure st;
  std::map<int, std::vector<int>> occ;
  for (int i = 0; i < pd.size(); ++i)
    for (int p = 0; p < 4; ++p) occ[pd.crossings[i][p]].push_back(4 * i + p);
  for (const auto& [label, slots] : occ) {
    if (slots.size() != 2)
      throw invalid_argument("PD code: label " + std::to_string(label) + " occurs " + std::to_string(slots.size()) +
                             " times, expected 2");
    st.index[label] = static_cast<int>(st.labels.size());
    st.labels.push_back(label);
    st.ends.push_back({slots[0], slots[1]});
  }
  const int ne = static_cast<int>(st.labels.size());
  st.head.assign(ne, -1);
  st.component.assign(ne, -1);

  // Trace each component once, in the direction of travel from ends[e][0].
  for (int start = 0; start < ne; ++start) {
    if (st.component[start] >= 0) continue;
    const int cid = st.traced_components++;
    std::vector<std::pair<int, int>> walk;  // (edge, arrival slot)
    int forward = 0, backward = 0;
    int e = start, from = st.ends[start][0];
    do {
      const int to = st.ends[e][0] == from ? st.ends[e][1] : st.ends[e][0];
      st.component[e] = cid;
      walk.emplace_back(e, to);
      const int pos = to % 4;
      if (pos == 0) ++forward;
      if (pos == 2) ++backward;
      from = 4 * (to / 4) + (pos + 2) % 4;
      e = st.edge_of(from, pd);
    } while (!(e == start && from == st.ends[start][0]));
    if (forward && backward)
      throw invalid_argument("PD code: inconsistent orientation (a component passes an under-strand both ways)");
    bool flip = backward > 0;
    if (!forward && !backward) {
      // Over-strands only: take labels as increasing along the orientation at
      // the first passage, i.e. d -> b is positive when b = d + 1 (or wraps).
      const int arrive = walk.front().second, pos = arrive % 4;
      const auto& x = pd.crossings[arrive / 4];
      const int j = x[1], l = x[3];
      const bool l_to_j = (j - l == 1) || (l - j > 1);
      flip = (pos == 3) != l_to_j;
    }
    for (const auto& [edge, to] : walk) {
      const int other = st.ends[edge][0] == to ? st.ends[edge][1] : st.ends[edge][0];
      st.head[edge] = flip ? other : to;
    }
  }
  return st;
}

/// Parses "X[a,b,c,d] X[...] ..." with optional commas and an optional
/// surrounding "PD[...]". "U" tokens add crossingless unknots.
inline PDCode parse_pd(const std::string& text) {
  PDCode pd;
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto fail = [&](const std::string& msg) -> Error {
    return invalid_argument("PD parse error at offset " + std::to_string(i) + ": " + msg);
  };
  auto skip = [&] {
    while (i < n && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ',')) ++i;
  };
  auto read_int = [&]() -> int {
    skip();
    std::size_t j = i;
    if (j < n && (text[j] == '-' || text[j] == '+')) ++j;
    const std::size_t digits = j;
    while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    if (j == digits) throw fail("expected an integer label");
    const long long v = std::stoll(text.substr(i, j - i));
    if (v < -1000000000LL || v > 1000000000LL) throw fail("label out of range");
    i = j;
    return static_cast<int>(v);
  };
  skip();
  bool wrapped = false;
  if (text.compare(i, 3, "PD[") == 0) {
    wrapped = true;
    i += 3;
  }
  bool any = false;
  while (true) {
    skip();
    if (i >= n) break;
    if (wrapped && text[i] == ']') {
      ++i;
      wrapped = false;
      skip();
      if (i < n) throw fail("trailing characters after PD[...]");
      break;
    }
    if (text[i] == 'U') {
      ++i;
      ++pd.free_loops;
      any = true;
      continue;
    }
    if (text[i] != 'X') throw fail(std::string("unexpected character '") + text[i] + "'");
    ++i;
    if (i >= n || text[i] != '[') throw fail("expected '[' after X");
    ++i;
    std::vector<int> vals;
    while (true) {
      skip();
      if (i < n && text[i] == ']') {
        ++i;
        break;
      }
      if (i >= n) throw fail("unterminated crossing");
      vals.push_back(read_int());
    }
    if (vals.size() != 4) throw fail("a crossing needs 4 labels, got " + std::to_string(vals.size()));
    pd.crossings.push_back({vals[0], vals[1], vals[2], vals[3]});
    any = true;
  }
  if (wrapped) throw fail("missing closing ']'");
  if (!any) throw invalid_argument("PD parse error: empty input (write U for the unknot)");
  pd.components = analyze(pd).traced_components + pd.free_loops;
  return pd;
}

/// Sign of each crossing under the traced orientation.
inline std::vector<int> crossing_signs(const PDCode& pd, const PDStructure& st) {
  std::vector<int> out;
  out.reserve(pd.crossings.size());
  for (int c = 0; c < pd.size(); ++c) {
    const int s3 = 4 * c + 3;
    out.push_back(st.head[st.edge_of(s3, pd)] == s3 ? 1 : -1);
  }
  return out;
}

inline int writhe(const PDCode& pd) {
  const auto st = analyze(pd);
  const auto signs = crossing_signs(pd, st);
  return std::accumulate(signs.begin(), signs.end(), 0);
}

/// Swaps over and under at every crossing, keeping the orientation.
inline PDCode mirror(const PDCode& pd) {
  const auto st = analyze(pd);
  const auto signs = crossing_signs(pd, st);
  PDCode out = pd;
  for (int c = 0; c < pd.size(); ++c) {
    const auto& x = pd.crossings[c];
    // The incoming over-slot becomes position 0.
    out.crossings[c] = signs[c] > 0 ? std::array<int, 4>{x[3], x[0], x[1], x[2]}
                                    : std::array<int, 4>{x[1], x[2], x[3], x[0]};
  }
  return out;
}

namespace detail {

inline void relabel_slot(PDCode& pd, int slot, int label) { pd.crossings[slot / 4][slot % 4] = label; }

}  // namespace detail

/// Connected sum along the first edge of each diagram (respecting orientation).
inline PDCode connected_sum(const PDCode& a, const PDCode& b) {
  if (a.crossings.empty() || b.crossings.empty()) {
    PDCode out = a.crossings.empty() ? b : a;
    out.free_loops = a.free_loops + b.free_loops - 1;
    if (out.free_loops < 0) out.free_loops = 0;
    out.components = analyze(out).traced_components + out.free_loops;
    return out;
  }
  const auto sa = analyze(a), sb = analyze(b);
  const int off = a.max_label() - *std::min_element(sb.labels.begin(), sb.labels.end()) + 1;
  PDCode out = a;
  for (auto x : b.crossings) {
    for (int& v : x) v += off;
    out.crossings.push_back(x);
  }
  out.free_loops = a.free_loops + b.free_loops;
  const int x_head = sa.head[0], y_head = sb.head[0] + 4 * a.size();
  const int x = sa.labels[0], y = sb.labels[0] + off;
  detail::relabel_slot(out, x_head, y);
  detail::relabel_slot(out, y_head, x);
  out.components = analyze(out).traced_components + out.free_loops;
  return out;
}

/// Inserts a Reidemeister I kink on the edge `label`. The four variants cover
/// both crossing signs with the loop on either side of the strand.
inline PDCode add_kink(const PDCode& pd, int label, int variant) {
  const auto st = analyze(pd);
  auto it = st.index.find(label);
  if (it == st.index.end()) throw invalid_argument("add_kink: unknown label");
  if (variant < 0 || variant > 3) throw invalid_argument("add_kink: variant must be 0..3");
  PDCode out = pd;
  const int m = pd.max_label() + 1, n = m + 1, x = label;
  detail::relabel_slot(out, st.head[it->second], n);
  static const std::array<std::array<int, 4>, 4> shapes{{{0, 2, 1, 1}, {0, 1, 1, 2}, {1, 0, 2, 1}, {1, 1, 2, 0}}};
  std::array<int, 4> cr;
  for (int p = 0; p < 4; ++p) cr[p] = shapes[variant][p] == 0 ? x : (shapes[variant][p] == 1 ? m : n);
  out.crossings.push_back(cr);
  out.components = analyze(out).traced_components + out.free_loops;
  return out;
}

// ---------------------------------------------------------------------------
// Planar structure

/// Faces of the diagram as cycles of leaving slots. Leaving a crossing at slot
/// s, the edge arrives at t; the face on the left continues from the slot
/// clockwise of t. Corner p (between positions p and p+1) of a crossing belongs
/// to the face that leaves through position p.
struct PlanarMap {
  std::vector<std::vector<int>> faces;
  std::vector<int> face_of_slot;     // face leaving through each slot
  std::vector<int> graph_component;  // per crossing
  int graph_components = 0;
};

inline PlanarMap planar_map(const PDCode& pd, const PDStructure& st) {
  PlanarMap pm;
  const int ns = 4 * pd.size();
  pm.face_of_slot.assign(ns, -1);
  for (int s0 = 0; s0 < ns; ++s0) {
    if (pm.face_of_slot[s0] >= 0) continue;
    std::vector<int> face;
    int s = s0;
    do {
      pm.face_of_slot[s] = static_cast<int>(pm.faces.size());
      face.push_back(s);
      const int t = st.other_end(s, pd);
      s = 4 * (t / 4) + (t % 4 + 3) % 4;
    } while (s != s0);
    pm.faces.push_back(std::move(face));
  }
  // Connected components of the crossing graph and the Euler check per component.
  pm.graph_component.assign(pd.size(), -1);
  for (int c0 = 0; c0 < pd.size(); ++c0) {
    if (pm.graph_component[c0] >= 0) continue;
    const int id = pm.graph_components++;
    std::queue<int> q;
    q.push(c0);
    pm.graph_component[c0] = id;
    while (!q.empty()) {
      const int c = q.front();
      q.pop();
      for (int p = 0; p < 4; ++p) {
        const int d = st.other_end(4 * c + p, pd) / 4;
        if (pm.graph_component[d] < 0) {
          pm.graph_component[d] = id;
          q.push(d);
        }
      }
    }
  }
  std::vector<int> v(pm.graph_components, 0), f(pm.graph_components, 0);
  for (int c = 0; c < pd.size(); ++c) ++v[pm.graph_component[c]];
  for (const auto& face : pm.faces) ++f[pm.graph_component[face.front() / 4]];
  for (int k = 0; k < pm.graph_components; ++k)
    if (v[k] - 2 * v[k] + f[k] != 2)
      throw invalid_argument("PD code: the strand data is not planar (Euler characteristic " +
                             std::to_string(v[k] - 2 * v[k] + f[k]) + ")");
  return pm;
}

/// Reidemeister II: pushes the boundary edge at index i of face f over the one
/// at index j, inside f.
inline PDCode add_r2(const PDCode& pd, int f, int i, int j) {
  const auto st = analyze(pd);
  const auto pm = planar_map(pd, st);
  if (f < 0 || f >= static_cast<int>(pm.faces.size())) throw invalid_argument("add_r2: face out of range");
  const auto& face = pm.faces[f];
  const int k = static_cast<int>(face.size());
  if (i < 0 || j < 0 || i >= k || j >= k) throw invalid_argument("add_r2: boundary index out of range");
  const int s1 = face[i], s2 = face[j];
  const int e1 = st.edge_of(s1, pd), e2 = st.edge_of(s2, pd);
  if (e1 == e2) throw invalid_argument("add_r2: edges must differ");
  const bool along1 = st.tail(e1) == s1, along2 = st.tail(e2) == s2;
  const int l1 = st.labels[e1], l2 = st.labels[e2];

  PDCode out = pd;
  int next = pd.max_label() + 1;
  // Pieces in boundary order: e1 = a, b, c and e2 = u, v, w.
  int a, c, u, w;
  const int b = next++, v = next++;
  if (along1) {
    a = l1;
    c = next++;
    detail::relabel_slot(out, st.head[e1], c);
  } else {
    c = l1;
    a = next++;
    detail::relabel_slot(out, st.head[e1], a);
  }
  if (along2) {
    u = l2;
    w = next++;
    detail::relabel_slot(out, st.head[e2], w);
  } else {
    w = l2;
    u = next++;
    detail::relabel_slot(out, st.head[e2], u);
  }
  // Counterclockwise from east at each new crossing: C1 = (v, b, w, a), C2 = (u, b, v, c),
  // rotated so that the incoming under-strand (a piece of e2) comes first.
  if (along2) {
    out.crossings.push_back({v, b, w, a});
    out.crossings.push_back({u, b, v, c});
  } else {
    out.crossings.push_back({w, a, v, b});
    out.crossings.push_back({v, c, u, b});
  }
  out.components = analyze(out).traced_components + out.free_loops;
  return out;
}

/// Every diagram one Reidemeister I kink or II push away: four kinks per edge
/// and one push per ordered pair of distinct edges on a face.
inline std::vector<PDCode> reidemeister_variants(const PDCode& pd) {
  std::vector<PDCode> out;
  if (pd.crossings.empty()) return out;
  const auto st = analyze(pd);
  for (int label : st.labels)
    for (int v = 0; v < 4; ++v) out.push_back(add_kink(pd, label, v));
  const auto pm = planar_map(pd, st);
  for (int f = 0; f < static_cast<int>(pm.faces.size()); ++f) {
    const int k = static_cast<int>(pm.faces[f].size());
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        if (i != j && st.edge_of(pm.faces[f][i], pd) != st.edge_of(pm.faces[f][j], pd))
          out.push_back(add_r2(pd, f, i, j));
  }
  return out;
}

}  // namespace kwg
