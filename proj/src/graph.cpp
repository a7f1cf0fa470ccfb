#include "pf/graph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace pf {

void validate(const GenTable& T, const LevelGraph& g) {
  const int w = g.weight();
  std::vector<int> leg_used(g.nin + 1, 0);
  std::map<std::pair<int, int>, int> port_used;

  auto check_src = [&](const Src& s, int consumer) {
    if (s.kind == 0) {
      if (s.a < 1 || s.a > g.nin) throw std::invalid_argument("bad input leg");
      leg_used[s.a]++;
    } else {
      if (s.a < 0 || s.a >= w) throw std::invalid_argument("bad vertex ref");
      if (consumer >= 0 && s.a >= consumer)
        throw std::invalid_argument("source must be a strictly earlier vertex");
      if (s.b < 1 || s.b > T[g.verts[s.a].gen].m)
        throw std::invalid_argument("bad output port");
      port_used[{s.a, s.b}]++;
    }
  };

  for (int i = 0; i < w; ++i) {
    const auto& v = g.verts[i];
    if (v.gen < 0 || v.gen >= static_cast<int>(T.size()))
      throw std::invalid_argument("bad generator index");
    if (static_cast<int>(v.in.size()) != T[v.gen].n)
      throw std::invalid_argument("input arity mismatch");
    for (const auto& s : v.in) check_src(s, i);
  }
  for (const auto& s : g.outs) check_src(s, -1);
  if (w == 0) {
    if (g.nin != 1 || g.outs.size() != 1 || g.outs[0].kind != 0)
      throw std::invalid_argument("weight-0 graph must be the trivial edge");
  }

  for (int l = 1; l <= g.nin; ++l)
    if (leg_used[l] != 1) throw std::invalid_argument("input leg not matched exactly once");
  for (int i = 0; i < w; ++i)
    for (int p = 1; p <= T[g.verts[i].gen].m; ++p) {
      auto it = port_used.find({i, p});
      if (it == port_used.end() || it->second != 1)
        throw std::invalid_argument("output port not matched exactly once");
    }
  if (!connected(g)) throw std::invalid_argument("graph not connected");
}

bool connected(const LevelGraph& g) {
  const int w = g.weight();
  if (w <= 1) return g.nin <= 1 || w == 1;
  std::vector<int> parent(w);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < w; ++i)
    for (const auto& s : g.verts[i].in)
      if (s.kind == 1) parent[find(s.a)] = find(i);
  int root = find(0);
  for (int i = 1; i < w; ++i)
    if (find(i) != root) return false;
  return true;
}

int internal_edges(const LevelGraph& g) {
  int e = 0;
  for (const auto& v : g.verts)
    for (const auto& s : v.in)
      if (s.kind == 1) ++e;
  return e;
}

int genus(const GenTable& T, const LevelGraph& g) {
  if (g.weight() == 0) return 0;
  int gg = internal_edges(g) - g.weight() + 1;
  for (const auto& v : g.verts) gg += T[v.gen].intrinsic_genus;
  return gg;
}

int graph_degree(const GenTable& T, const LevelGraph& g) {
  int d = 0;
  for (const auto& v : g.verts) d += T[v.gen].degree;
  return d;
}

static void append_src(std::string& out, const Src& s) {
  if (s.kind == 0) {
    out += 'i';
    out += std::to_string(s.a);
  } else {
    out += std::to_string(s.a);
    out += '.';
    out += std::to_string(s.b);
  }
}

std::string serialize(const GenTable& T, const LevelGraph& g) {
  std::string s;
  s += std::to_string(g.nout());
  s += ',';
  s += std::to_string(g.nin);
  s += '|';
  for (const auto& v : g.verts) {
    s += T[v.gen].id;
    s += '(';
    for (size_t j = 0; j < v.in.size(); ++j) {
      if (j) s += ',';
      append_src(s, v.in[j]);
    }
    s += ");";
  }
  s += '|';
  for (size_t j = 0; j < g.outs.size(); ++j) {
    if (j) s += ',';
    append_src(s, g.outs[j]);
  }
  return s;
}

namespace {

struct CanonSearch {
  const GenTable& T;
  const LevelGraph& g;
  int w;
  std::vector<int> pos;     // orig index -> new index (-1 unplaced)
  std::vector<int> sym;     // orig index -> chosen symmetry (in group list)
  std::vector<int> order;   // new index -> orig index
  std::string best;
  int best_sign = 0;
  bool zero = false;
  std::vector<int> best_order, best_sym;

  CanonSearch(const GenTable& t, const LevelGraph& gr) : T(t), g(gr), w(gr.weight()) {
    pos.assign(w, -1);
    sym.assign(w, -1);
  }

  // Port of vertex a as cited by consumers, after a's chosen symmetry.
  int cited_port(int a, int b) const {
    const auto& sy = T[g.verts[a].gen].syms[sym[a]];
    // new name q satisfies out_perm[q] == b-1
    for (size_t q = 0; q < sy.out_perm.size(); ++q)
      if (sy.out_perm[q] == b - 1) return static_cast<int>(q) + 1;
    return b;
  }

  std::string token(int v, int symidx) const {
    const auto& gen = T[g.verts[v].gen];
    const auto& sy = gen.syms[symidx];
    std::string t = gen.id;
    t += '(';
    for (int j = 0; j < gen.n; ++j) {
      if (j) t += ',';
      const Src& s = g.verts[v].in[sy.in_perm[j]];
      if (s.kind == 0) {
        t += 'i';
        t += std::to_string(s.a);
      } else {
        t += std::to_string(pos[s.a]);
        t += '.';
        t += std::to_string(cited_port(s.a, s.b));
      }
    }
    t += ");";
    return t;
  }

  int level_sign(const std::vector<int>& ord) const {
    // Koszul sign of the permutation orig order -> new order.
    int inv = 0;
    for (int i = 0; i < w; ++i)
      for (int j = i + 1; j < w; ++j) {
        int oi = ord[i], oj = ord[j];
        if (oi > oj && parity(T[g.verts[oi].gen].degree) && parity(T[g.verts[oj].gen].degree))
          ++inv;
      }
    return inv % 2 ? -1 : 1;
  }

  void finalize(const std::string& prefix) {
    std::string s = std::to_string(g.nout());
    s += ',';
    s += std::to_string(g.nin);
    s += '|';
    s += prefix;
    s += '|';
    for (size_t j = 0; j < g.outs.size(); ++j) {
      if (j) s += ',';
      const Src& o = g.outs[j];
      if (o.kind == 0) {
        s += 'i';
        s += std::to_string(o.a);
      } else {
        s += std::to_string(pos[o.a]);
        s += '.';
        s += std::to_string(cited_port(o.a, o.b));
      }
    }
    int sg = level_sign(order);
    for (int v = 0; v < w; ++v) sg *= T[g.verts[v].gen].syms[sym[v]].sign;
    if (best_sign == 0 || s < best) {
      best = s;
      best_sign = sg;
      zero = false;
      best_order = order;
      best_sym = sym;
    } else if (s == best && sg != best_sign) {
      zero = true;
    }
  }

  void dfs(const std::string& prefix) {
    if (static_cast<int>(order.size()) == w) {
      finalize(prefix);
      return;
    }
    struct Cand {
      std::string tok;
      int v, sy;
    };
    std::vector<Cand> cands;
    for (int v = 0; v < w; ++v) {
      if (pos[v] >= 0) continue;
      bool ready = true;
      for (const auto& s : g.verts[v].in)
        if (s.kind == 1 && pos[s.a] < 0) ready = false;
      if (!ready) continue;
      const auto& syms = T[g.verts[v].gen].syms;
      for (size_t y = 0; y < syms.size(); ++y) {
        // The token must be computable: consumers cite the candidate later,
        // but the candidate's own cited ports depend on its sym choice only.
        sym[v] = static_cast<int>(y);
        cands.push_back({token(v, static_cast<int>(y)), v, static_cast<int>(y)});
        sym[v] = -1;
      }
    }
    std::sort(cands.begin(), cands.end(),
              [](const Cand& a, const Cand& b) { return a.tok < b.tok; });
    for (const auto& c : cands) {
      std::string next = prefix + c.tok;
      if (best_sign != 0) {
        // Prune branches that are already lexicographically worse.
        size_t hdr = best.find('|') + 1;
        size_t len = std::min(next.size(), best.size() - hdr);
        int cmp = next.compare(0, len, best, hdr, len);
        if (cmp > 0) continue;
      }
      pos[c.v] = static_cast<int>(order.size());
      sym[c.v] = c.sy;
      order.push_back(c.v);
      dfs(next);
      order.pop_back();
      pos[c.v] = -1;
      sym[c.v] = -1;
    }
  }

  LevelGraph rebuild() const {
    LevelGraph h;
    h.nin = g.nin;
    h.verts.resize(w);
    std::vector<int> p(w), sy(w);
    for (int i = 0; i < w; ++i) p[best_order[i]] = i;
    auto map_src = [&](const Src& s) {
      if (s.kind == 0) return s;
      const auto& symm = T[g.verts[s.a].gen].syms[best_sym[s.a]];
      int q = s.b;
      for (size_t k = 0; k < symm.out_perm.size(); ++k)
        if (symm.out_perm[k] == s.b - 1) {
          q = static_cast<int>(k) + 1;
          break;
        }
      return port(p[s.a], q);
    };
    for (int i = 0; i < w; ++i) {
      int ov = best_order[i];
      const auto& gen = T[g.verts[ov].gen];
      const auto& symm = gen.syms[best_sym[ov]];
      GVertex nv;
      nv.gen = g.verts[ov].gen;
      nv.in.resize(gen.n);
      for (int j = 0; j < gen.n; ++j) nv.in[j] = map_src(g.verts[ov].in[symm.in_perm[j]]);
      h.verts[i] = std::move(nv);
    }
    h.outs.resize(g.outs.size());
    for (size_t j = 0; j < g.outs.size(); ++j) h.outs[j] = map_src(g.outs[j]);
    return h;
  }
};

std::mutex cache_mutex;
std::unordered_map<std::string, Canonical>* canon_cache() {
  static std::unordered_map<std::string, Canonical> c;
  return &c;
}

} // namespace

void clear_canonical_cache() {
  std::lock_guard<std::mutex> lk(cache_mutex);
  canon_cache()->clear();
}

Canonical canonicalize(const GenTable& T, const LevelGraph& g) {
  validate(T, g);
  if (g.weight() == 0) {
    Canonical c;
    c.graph = g;
    c.sign = 1;
    c.key = serialize(T, g);
    return c;
  }
  std::string in_key = T.fingerprint() + "\n" + serialize(T, g);
  {
    std::lock_guard<std::mutex> lk(cache_mutex);
    auto it = canon_cache()->find(in_key);
    if (it != canon_cache()->end()) return it->second;
  }
  CanonSearch search(T, g);
  search.dfs("");
  Canonical c;
  c.sign = search.best_sign;
  c.zero = search.zero;
  c.graph = search.rebuild();
  c.key = serialize(T, c.graph);
  {
    std::lock_guard<std::mutex> lk(cache_mutex);
    canon_cache()->emplace(in_key, c);
  }
  return c;
}

std::string shape_key(const GenTable& T, const LevelGraph& g) {
  // Minimize the canonical key over relabelings of inputs and outputs.
  std::vector<int> inp(g.nin), outp(g.nout());
  std::iota(inp.begin(), inp.end(), 1);
  std::iota(outp.begin(), outp.end(), 1);
  std::string best;
  std::vector<int> ip = inp;
  do {
    std::vector<int> op = outp;
    do {
      LevelGraph h = g;
      for (auto& v : h.verts)
        for (auto& s : v.in)
          if (s.kind == 0) s.a = ip[s.a - 1];
      std::vector<Src> no(h.outs.size());
      for (size_t j = 0; j < h.outs.size(); ++j) no[op[j] - 1] = h.outs[j];
      for (auto& s : no)
        if (s.kind == 0) s.a = ip[s.a - 1];
      h.outs = no;
      auto c = canonicalize(T, h);
      if (best.empty() || c.key < best) best = c.key;
    } while (std::next_permutation(op.begin(), op.end()));
  } while (std::next_permutation(ip.begin(), ip.end()));
  return best;
}

} // namespace pf
