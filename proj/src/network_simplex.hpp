#pragma once

#include <cstddef>
#include <vector>

namespace needlekit::detail {

struct PlanArc {
  std::size_t source;
  std::size_t sink;
  double flow;
};

struct TransportPlan {
  std::vector<PlanArc> arcs;      ///< basic arcs with positive flow
  std::vector<double> source_pi;  ///< cost(i, j) + source_pi[i] - sink_pi[j] >= 0
  std::vector<double> sink_pi;
  std::size_t pivots = 0;
};

/// Balanced transportation problem on the complete bipartite graph, solved by
/// the primal network simplex with block search pricing. `cost` is row-major
/// with one row per source.
TransportPlan solve_transportation(const std::vector<double>& supply,
                                   const std::vector<double>& demand,
                                   const std::vector<double>& cost);

}  // namespace needlekit::detail
