#include "pf/enumerate.hpp"

#include "pf/element.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace pf {

namespace {

struct Wiring {
  const GenTable& T;
  const std::vector<int>& seq; // generator index per vertex, upstream-first
  int m, n, max_genus;
  LevelGraph g;
  std::vector<bool> leg_used;
  std::vector<std::vector<bool>> port_used;
  std::map<std::string, LevelGraph>& out;

  Wiring(const GenTable& t, const std::vector<int>& s, int m_, int n_, int mg,
         std::map<std::string, LevelGraph>& o)
      : T(t), seq(s), m(m_), n(n_), max_genus(mg), out(o) {
    g.nin = n;
    g.verts.resize(seq.size());
    for (size_t i = 0; i < seq.size(); ++i) g.verts[i].gen = seq[i];
    leg_used.assign(n + 1, false);
    port_used.resize(seq.size());
    for (size_t i = 0; i < seq.size(); ++i) port_used[i].assign(T[seq[i]].m + 1, false);
  }

  int slots_after(int vi, int sj) const {
    int s = static_cast<int>(T[seq[vi]].n) - sj - 1;
    for (size_t k = vi + 1; k < seq.size(); ++k) s += T[seq[k]].n;
    return s;
  }

  void finish() {
    for (int l = 1; l <= n; ++l)
      if (!leg_used[l]) return;
    std::vector<Src> free_ports;
    for (size_t i = 0; i < seq.size(); ++i)
      for (int p = 1; p <= T[seq[i]].m; ++p)
        if (!port_used[i][p]) free_ports.push_back(port(static_cast<int>(i), p));
    if (static_cast<int>(free_ports.size()) != m) return;
    if (!connected(g)) return;

    std::vector<int> lab(m);
    for (int i = 0; i < m; ++i) lab[i] = i;
    std::sort(lab.begin(), lab.end());
    do {
      for (int i = 0; i < m; ++i) g.outs[lab[i]] = free_ports[i];
      int gg = genus(T, g);
      if (gg < 0 || gg > max_genus) continue;
      auto c = canonicalize(T, g);
      if (!c.zero) out.emplace(c.key, c.graph);
    } while (std::next_permutation(lab.begin(), lab.end()));
  }

  void wire(int vi, int sj) {
    if (vi == static_cast<int>(seq.size())) {
      finish();
      return;
    }
    if (sj == T[seq[vi]].n) {
      wire(vi + 1, 0);
      return;
    }
    int legs_left = 0;
    for (int l = 1; l <= n; ++l)
      if (!leg_used[l]) ++legs_left;
    if (legs_left > slots_after(vi, sj) + 1) return; // cannot place all legs

    for (int l = 1; l <= n; ++l) {
      if (leg_used[l]) continue;
      leg_used[l] = true;
      g.verts[vi].in[sj] = gin(l);
      wire(vi, sj + 1);
      leg_used[l] = false;
    }
    for (int a = 0; a < vi; ++a)
      for (int p = 1; p <= T[seq[a]].m; ++p) {
        if (port_used[a][p]) continue;
        port_used[a][p] = true;
        g.verts[vi].in[sj] = port(a, p);
        wire(vi, sj + 1);
        port_used[a][p] = false;
      }
  }

  void run() {
    for (size_t i = 0; i < seq.size(); ++i) g.verts[i].in.resize(T[seq[i]].n);
    g.outs.resize(m);
    wire(0, 0);
  }
};

} // namespace

std::vector<LevelGraph> enumerate_graphs(const GenTable& T, const std::vector<int>& use, int m,
                                         int n, int weight, int max_genus) {
  std::map<std::string, LevelGraph> found;
  if (weight == 0) {
    if (m == 1 && n == 1) found.emplace("edge", trivial_edge());
    std::vector<LevelGraph> r;
    for (auto& [k, g] : found) r.push_back(g);
    return r;
  }

  // Choose the generator multiset, then the level sequence, then the wiring.
  std::vector<int> counts(use.size(), 0);
  std::function<void(size_t, int)> pick = [&](size_t gi, int left) {
    if (gi == use.size()) {
      if (left) return;
      int in_slots = 0, out_ports = 0, intr = 0;
      for (size_t i = 0; i < use.size(); ++i) {
        in_slots += counts[i] * T[use[i]].n;
        out_ports += counts[i] * T[use[i]].m;
        intr += counts[i] * T[use[i]].intrinsic_genus;
      }
      int edges = in_slots - n;
      if (edges < 0 || edges != out_ports - m) return;
      int gg = edges - weight + 1 + intr;
      if (gg < 0 || gg > max_genus) return;

      std::vector<int> seq;
      for (size_t i = 0; i < use.size(); ++i)
        for (int c = 0; c < counts[i]; ++c) seq.push_back(use[i]);
      std::sort(seq.begin(), seq.end());
      do {
        Wiring w(T, seq, m, n, max_genus, found);
        w.run();
      } while (std::next_permutation(seq.begin(), seq.end()));
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts[gi] = c;
      pick(gi + 1, left - c);
    }
    counts[gi] = 0;
  };
  pick(0, weight);

  std::vector<LevelGraph> r;
  r.reserve(found.size());
  for (auto& [k, g] : found) r.push_back(g);
  return r;
}

int count_shapes(const GenTable& T, const std::vector<LevelGraph>& graphs) {
  std::set<std::string> shapes;
  for (const auto& g : graphs) shapes.insert(shape_key(T, g));
  return static_cast<int>(shapes.size());
}

} // namespace pf
