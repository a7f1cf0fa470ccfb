#ifndef PF_ENUMERATE_HPP
#define PF_ENUMERATE_HPP

#include "pf/graph.hpp"

#include <map>
#include <vector>

namespace pf {

// Complete duplicate-free list of canonical graphs over the listed
// generators with `weight` vertices, arity (m, n) and genus <= max_genus.
// `use` restricts the generator indices that may decorate vertices.
std::vector<LevelGraph> enumerate_graphs(const GenTable& T, const std::vector<int>& use, int m,
                                         int n, int weight, int max_genus);

// Number of distinct Sigma-orbit shapes among the given canonical graphs.
int count_shapes(const GenTable& T, const std::vector<LevelGraph>& graphs);

} // namespace pf

#endif
