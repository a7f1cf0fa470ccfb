#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pf/element.hpp"
#include "pf/enumerate.hpp"

using namespace pf;

namespace {

// A small table: mu (1,2) even, de (2,1) odd, plus an antisymmetric
// zigzag-style generator and a unit.
GenTable table() {
  GenTable T;
  T.add({"mu", 1, 2, 0, 0, {}});
  T.add({"de", 2, 1, -1, 0, {}});
  GenSym flip{{1, 0}, {1, 0}, -1};
  T.add({"zz", 2, 2, -1, 0, {flip}});
  T.add({"un", 1, 0, 1, 0, {}});
  return T;
}

} // namespace

TEST_CASE("single vertex is canonical with sign +1") {
  auto T = table();
  auto g = corolla(T, T.index_of("mu"));
  auto c = canonicalize(T, g);
  CHECK(c.sign == 1);
  CHECK(!c.zero);
  CHECK(c.key == serialize(T, c.graph));
  auto c2 = canonicalize(T, c.graph);
  CHECK(c2.sign == 1);
  CHECK(c2.key == c.key);
}

TEST_CASE("two incomparable odd vertices swap with sign -1") {
  auto T = table();
  int de = T.index_of("de");
  int mu = T.index_of("mu");
  // de (x1) and de (x2) both feeding a mu-collector through two extra mu's
  // is overkill; use two de's whose outputs are all global.
  LevelGraph g;
  g.nin = 2;
  g.verts.push_back({de, {gin(1)}});
  g.verts.push_back({de, {gin(2)}});
  g.verts.push_back({mu, {port(0, 1), port(1, 1)}});
  g.outs = {port(2, 1), port(0, 2), port(1, 2)};
  auto a = canonicalize(T, g);

  LevelGraph h = g; // exchange the levels of the two incomparable de's
  h.verts[0] = g.verts[1];
  h.verts[1] = g.verts[0];
  h.verts[2] = {mu, {port(1, 1), port(0, 1)}};
  h.outs = {port(2, 1), port(1, 2), port(0, 2)};
  auto b = canonicalize(T, h);
  CHECK(a.key == b.key);
  CHECK(a.sign == -b.sign);
}

TEST_CASE("re-levelization consistency over all linear extensions") {
  auto T = table();
  int de = T.index_of("de");
  int mu = T.index_of("mu");
  // Three incomparable odd de's under one cap: every levelization of the
  // de's must canonicalize to the same key with the permutation's sign.
  LevelGraph base;
  base.nin = 3;
  base.verts.push_back({de, {gin(1)}});
  base.verts.push_back({de, {gin(2)}});
  base.verts.push_back({de, {gin(3)}});
  base.verts.push_back({mu, {port(0, 1), port(1, 1)}});
  base.verts.push_back({mu, {port(3, 1), port(2, 1)}});
  base.outs = {port(4, 1), port(0, 2), port(1, 2), port(2, 2)};
  auto c0 = canonicalize(T, base);

  int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  int signs[6] = {1, -1, -1, 1, 1, -1};
  for (int p = 0; p < 6; ++p) {
    LevelGraph g;
    g.nin = 3;
    // position i holds the de originally at perm[p][i]
    std::vector<int> pos(3);
    for (int i = 0; i < 3; ++i) pos[perm[p][i]] = i;
    for (int i = 0; i < 3; ++i) g.verts.push_back({de, {gin(perm[p][i] + 1)}});
    g.verts.push_back({mu, {port(pos[0], 1), port(pos[1], 1)}});
    g.verts.push_back({mu, {port(3, 1), port(pos[2], 1)}});
    g.outs = {port(4, 1), port(pos[0], 2), port(pos[1], 2), port(pos[2], 2)};
    auto c = canonicalize(T, g);
    CHECK(c.key == c0.key);
    CHECK(c.sign == signs[p] * c0.sign);
  }
}

TEST_CASE("generator symmetry identifies wirings with sign") {
  auto T = table();
  int zz = T.index_of("zz");
  auto z = make_elem(T, corolla(T, zz));
  auto swapped = sigma_act(T, z, transposition(2, 1, 2), transposition(2, 1, 2));
  CHECK(swapped.terms.size() == 1);
  CHECK(swapped.terms.begin()->first == z.terms.begin()->first);
  CHECK(swapped.terms.begin()->second.second == Rational(-1));
  // one-sided swap is a different basis vector
  auto one = sigma_act(T, z, transposition(2, 1, 2), id_perm(2));
  CHECK(one.terms.begin()->first != z.terms.begin()->first);
}

TEST_CASE("odd automorphism kills the class") {
  auto T = table();
  int de = T.index_of("de");
  int mu = T.index_of("mu");
  // mu(de1.1, de2.1) with remaining ports symmetric: exchanging the two odd
  // de's is an automorphism of the underlying wiring pattern only if the
  // global labels also match; build the symmetric version via a second mu.
  LevelGraph g;
  g.nin = 1;
  g.verts.push_back({de, {gin(1)}});
  g.verts.push_back({mu, {port(0, 1), port(0, 2)}});
  g.outs = {port(1, 1)};
  auto c = canonicalize(T, g);
  CHECK(!c.zero); // comparable pair, no freedom
}

TEST_CASE("identity edge composes to identity") {
  auto T = table();
  auto mu = make_elem(T, corolla(T, T.index_of("mu")));
  auto edge = make_elem(T, trivial_edge());
  auto r1 = compose(T, mu, {{1, 1}}, edge);
  CHECK(r1.terms == mu.terms);
  auto r2 = compose(T, mu, {{1, 2}}, edge);
  CHECK(r2.terms == mu.terms);
  auto r3 = compose(T, edge, {{1, 1}}, mu);
  CHECK(r3.terms == mu.terms);
}

TEST_CASE("composing two corollas in both level orders") {
  auto T = table();
  auto mu = make_elem(T, corolla(T, T.index_of("mu")));
  auto de = make_elem(T, corolla(T, T.index_of("de")));
  // de below mu via one edge, in both presentation orders
  auto a = compose(T, mu, {{1, 1}}, de); // de upstream of mu
  CHECK(a.m == 2);
  CHECK(a.n == 2);
  CHECK(a.terms.size() == 1);
  // composing through the other leg ordering gives another canonical graph
  auto b = compose(T, mu, {{2, 1}}, de);
  CHECK(b.terms.size() == 1);
  CHECK(a.terms.begin()->first != b.terms.begin()->first);
}

TEST_CASE("compose relabels by standard re-indexation") {
  auto T = table();
  auto mu = make_elem(T, corolla(T, T.index_of("mu")));
  auto de = make_elem(T, corolla(T, T.index_of("de")));
  // plug de's output 1 into mu's input 2: inputs of the composite are
  // (mu.1, de.1); outputs (de-out... check arity bookkeeping only here.
  auto r = compose(T, mu, {{1, 2}}, de);
  CHECK(r.m == 2);
  CHECK(r.n == 2);
  // associativity of grafting: ((mu o de) o de') equals (mu o (de o de'))
  // where de' lands in the leg that is de's input on both sides
  auto lhs = compose(T, compose(T, mu, {{1, 1}}, de), {{1, 1}}, de);
  auto rhs = compose(T, mu, {{1, 1}}, compose(T, de, {{1, 1}}, de));
  CHECK(lhs.m == rhs.m);
  CHECK(lhs.n == rhs.n);
  CHECK(lhs.terms == rhs.terms);
}

TEST_CASE("degree additivity and genus") {
  auto T = table();
  auto mu = make_elem(T, corolla(T, T.index_of("mu")));
  auto de = make_elem(T, corolla(T, T.index_of("de")));
  auto comp = compose(T, mu, {{1, 1}, {2, 2}}, de); // both legs: genus 1
  REQUIRE(comp.terms.size() == 1);
  const auto& g = comp.terms.begin()->second.first;
  CHECK(genus(T, g) == 1);
  CHECK(graph_degree(T, g) == -1);
  CHECK(g.nout() == 1);
  CHECK(g.nin == 1);
  auto tree = compose(T, mu, {{1, 1}}, de);
  CHECK(genus(T, tree.terms.begin()->second.first) == 0);
}

TEST_CASE("sigma action laws") {
  auto T = table();
  auto de = make_elem(T, corolla(T, T.index_of("de")));
  auto both = sigma_act(T, de, transposition(2, 1, 2), id_perm(1));
  CHECK(both.terms.begin()->first != de.terms.begin()->first);
  auto back = sigma_act(T, both, transposition(2, 1, 2), id_perm(1));
  CHECK(back.terms == de.terms);

  // (tau sigma)-action equals action composition on a 2-output, 2-input graph
  auto mu = make_elem(T, corolla(T, T.index_of("mu")));
  auto g = compose(T, mu, {{1, 1}}, de);
  std::vector<int> tau = {2, 1}, sig = {2, 1};
  auto once = sigma_act(T, g, tau, sig);
  auto twice = sigma_act(T, sigma_act(T, g, tau, id_perm(2)), id_perm(2), sig);
  CHECK(once.terms == twice.terms);
}

TEST_CASE("enumeration basics") {
  auto T = table();
  std::vector<int> use = {T.index_of("mu"), T.index_of("de")};
  auto e0 = enumerate_graphs(T, use, 1, 1, 0, 1);
  CHECK(e0.size() == 1); // trivial edge
  auto e1 = enumerate_graphs(T, use, 1, 2, 1, 0);
  CHECK(e1.size() == 2); // mu and its input swap
  auto e2 = enumerate_graphs(T, use, 1, 3, 2, 0);
  CHECK(e2.size() == 12); // two shapes of mu-mu trees, 6 labelings each
  auto shapes = count_shapes(T, e2);
  CHECK(shapes == 2);
}

TEST_CASE("substitute one vertex by an element") {
  auto T = table();
  auto mu = make_elem(T, corolla(T, T.index_of("mu")));
  auto assoc1 = compose(T, mu, {{1, 1}}, mu); // mu(mu(x1,x2),x3)
  // substituting a sum distributes
  GraphElem sum = mu;
  GraphElem mu2 = sigma_act(T, mu, id_perm(1), transposition(2, 1, 2));
  sum += mu2;
  const auto& g = assoc1.terms.begin()->second.first;
  auto sub = substitute_one(T, g, 0, sum);
  CHECK(sub.terms.size() == 2);
}
