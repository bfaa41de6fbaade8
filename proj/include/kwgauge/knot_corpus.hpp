#pragma once

// Reference diagrams. Labels increase along the orientation.

#include <string>
#include <vector>

namespace kwg {

struct CorpusEntry {
  std::string name;
  std::string knot;  // diagrams of the same link share this
  std::string pd;
};

inline const std::vector<CorpusEntry>& knot_corpus() {
  static const std::vector<CorpusEntry> corpus{
      {"unknot", "0_1", "U"},
      {"unknot-kink", "0_1", "X[1,1,2,2]"},
      {"unknot-two-kinks", "0_1", "X[1,1,2,4] X[2,3,3,4]"},
      {"trefoil-right", "3_1", "X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]"},
      {"trefoil-left", "3_1*", "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]"},
      {"figure-eight", "4_1", "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]"},
      {"hopf", "L2a1", "X[4,1,3,2] X[2,3,1,4]"},
      {"hopf-reversed", "L2a1'", "X[3,2,4,1] X[2,3,1,4]"},
      {"cinquefoil", "5_1", "X[1,6,2,7] X[3,8,4,9] X[5,10,6,1] X[7,2,8,3] X[9,4,10,5]"},
      {"three-twist", "5_2", "X[1,4,2,5] X[3,8,4,9] X[5,10,6,1] X[9,6,10,7] X[7,2,8,3]"},
  };
  return corpus;
}

}  // namespace kwg
