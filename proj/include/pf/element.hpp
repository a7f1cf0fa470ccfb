#ifndef PF_ELEMENT_HPP
#define PF_ELEMENT_HPP

#include "pf/graph.hpp"
#include "pf/sparse.hpp"

#include <map>
#include <utility>
#include <vector>

namespace pf {

// Linear combination of canonical level graphs of one arity.
struct GraphElem {
  int m = 0, n = 0;
  std::map<Key, std::pair<LevelGraph, Rational>> terms;

  bool zero() const { return terms.empty(); }
  SparseVec vec() const;
  GraphElem& operator*=(const Rational& c);
  GraphElem& operator+=(const GraphElem& o);
};

GraphElem make_elem(const GenTable& T, const LevelGraph& g, Rational c = Rational(1));
GraphElem elem_sum(std::vector<GraphElem> xs);

// Single-vertex corolla on generator `gen` with the identity wiring.
LevelGraph corolla(const GenTable& T, int gen);
LevelGraph trivial_edge();

// Grafts g2 upstream of g1: `pairs` lists (output leg of g2, input leg of g1).
// Remaining legs are relabeled by the standard re-indexation: g2's inputs
// replace the slot of the smallest paired input of g1, and g1's outputs
// replace the slot of the smallest paired output of g2.
GraphElem compose(const GenTable& T, const GraphElem& g1,
                  const std::vector<std::pair<int, int>>& pairs, const GraphElem& g2);

// Output labels relabel by tau (label i becomes tau(i)), inputs by sigma
// acting on the right (leg l carries the input formerly labeled sigma(l)).
GraphElem sigma_act(const GenTable& T, const GraphElem& g, const std::vector<int>& tau,
                    const std::vector<int>& sigma);

// Replaces each vertex v by images[v] (arity-matched), simultaneously.
GraphElem substitute_all(const GenTable& T, const LevelGraph& g,
                         const std::vector<const GraphElem*>& images);

// Replaces the single vertex v by h, keeping every other vertex.
GraphElem substitute_one(const GenTable& T, const LevelGraph& g, int v, const GraphElem& h);

std::vector<int> id_perm(int k);
std::vector<int> transposition(int k, int a, int b);

} // namespace pf

#endif
