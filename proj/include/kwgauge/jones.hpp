#pragma once

// Jones polynomial of oriented links, V = (-A^3)^(-w) <K> at A = q^(-1/4),
// by either the bracket state sum or the vertex model; and the counting
// function sum_n a_n q^n.

#include <map>
#include <string>

#include "kwgauge/vertex.hpp"

namespace kwg {

enum class DualGroup { SU2 };
enum class Representation { Fundamental };

struct KnotLabel {
  DualGroup dual_group = DualGroup::SU2;
  Representation representation = Representation::Fundamental;

  void validate() const {
    if (dual_group != DualGroup::SU2 || representation != Representation::Fundamental)
      throw invalid_argument("only SU(2) with the fundamental representation is supported");
  }
};

inline KnotLabel parse_knot_label(const std::string& group, const std::string& rep) {
  if (group != "SU2" && group != "su2") throw invalid_argument("unsupported dual group '" + group + "'");
  if (rep != "fundamental" && rep != "fund") throw invalid_argument("unsupported representation '" + rep + "'");
  return {};
}

enum class JonesMethod { Bracket, Vertex };

inline LaurentPolynomial vertex_model_jones(const PDCode& pd, const KnotLabel& label = {}) {
  label.validate();
  return knot_conventions::a_to_q(knot_conventions::writhe_factor(writhe(pd)) * vertex_model_bracket(pd));
}

/// Keys of the result are doubled exponents of q.
inline LaurentPolynomial jones_polynomial(const PDCode& pd, const KnotLabel& label = {},
                                          JonesMethod method = JonesMethod::Bracket) {
  label.validate();
  if (method == JonesMethod::Vertex) return vertex_model_jones(pd, label);
  return knot_conventions::a_to_q(knot_conventions::writhe_factor(writhe(pd)) * kauffman_bracket(pd));
}

/// sum_n a_n q^n, in doubled-exponent keys like the Jones polynomial.
inline LaurentPolynomial counting_function(const std::map<int, std::int64_t>& counts) {
  LaurentPolynomial out;
  for (const auto& [n, a] : counts) out.add(2 * n, a);
  return out;
}

}  // namespace kwg
