// The built-in corpus of target functions used by experiments and the
// property suites: steps, gated and clipped linears, folded waves, and a
// mixture. Each is an exact PiecewiseTrig.
#pragma once

#include <string>
#include <vector>

#include "circlenet/geometry.hpp"

namespace circlenet {

struct NamedTarget {
  std::string name;
  PiecewiseTrig fn;
};

// All twelve corpus targets, in a fixed order.
const std::vector<NamedTarget>& target_corpus();

// Subset whose anti-symmetric part is linear (the class universal_approx
// accepts).
const std::vector<NamedTarget>& lal_corpus();

std::vector<std::string> target_names();
const PiecewiseTrig& target_by_name(const std::string& name);

}  // namespace circlenet
