#ifndef PF_GRAPH_HPP
#define PF_GRAPH_HPP

#include "pf/generator.hpp"
#include "pf/rational.hpp"

#include <string>
#include <vector>

namespace pf {

// Producer of a value: a global input leg or an output port of a vertex.
struct Src {
  int kind = 0; // 0 = global input leg, 1 = vertex output port
  int a = 0;    // kind 0: leg label (1-based); kind 1: vertex index (0-based)
  int b = 0;    // kind 1: port (1-based)
  bool operator==(const Src& o) const { return kind == o.kind && a == o.a && b == o.b; }
};

inline Src gin(int leg) { return Src{0, leg, 0}; }
inline Src port(int v, int p) { return Src{1, v, p}; }

struct GVertex {
  int gen = -1;
  std::vector<Src> in;
  bool operator==(const GVertex& o) const { return gen == o.gen && in == o.in; }
};

// Decorated connected directed graph with a total vertex order. Vertices are
// listed upstream-first: every kind-1 source of verts[i] points to a vertex
// of strictly smaller index. The drawn level of a vertex counts from the
// output side, so verts.back() sits at level 1.
struct LevelGraph {
  int nin = 0;
  std::vector<GVertex> verts;
  std::vector<Src> outs; // global output label i+1

  int weight() const { return static_cast<int>(verts.size()); }
  int nout() const { return static_cast<int>(outs.size()); }
  bool operator==(const LevelGraph& o) const {
    return nin == o.nin && verts == o.verts && outs == o.outs;
  }
};

void validate(const GenTable& T, const LevelGraph& g); // throws on bad port matching
bool connected(const LevelGraph& g);
int internal_edges(const LevelGraph& g);
int genus(const GenTable& T, const LevelGraph& g);
int graph_degree(const GenTable& T, const LevelGraph& g);
std::string serialize(const GenTable& T, const LevelGraph& g);

struct Canonical {
  LevelGraph graph;
  int sign = 1;      // +1 or -1
  bool zero = false; // an odd automorphism kills the class
  std::string key;   // serialize(graph)
};

// Unique representative of the class of g under admissible level exchanges
// and generator symmetries; the sign is the accumulated Koszul sign.
Canonical canonicalize(const GenTable& T, const LevelGraph& g);

// Shape key: canonical form after minimizing over all relabelings of the
// global legs (used for counting Sigma-orbits).
std::string shape_key(const GenTable& T, const LevelGraph& g);

void clear_canonical_cache();

} // namespace pf

#endif
