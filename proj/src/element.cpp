#include "pf/element.hpp"

#include <functional>
#include <set>
#include <stdexcept>

namespace pf {

SparseVec GraphElem::vec() const {
  SparseVec v;
  for (const auto& [k, tc] : terms) v.set(k, tc.second);
  return v;
}

GraphElem& GraphElem::operator*=(const Rational& c) {
  if (c == 0) {
    terms.clear();
    return *this;
  }
  for (auto& [k, tc] : terms) tc.second *= c;
  return *this;
}

GraphElem& GraphElem::operator+=(const GraphElem& o) {
  for (const auto& [k, tc] : o.terms) {
    auto it = terms.find(k);
    if (it == terms.end()) {
      terms.emplace(k, tc);
    } else {
      it->second.second += tc.second;
      if (it->second.second == 0) terms.erase(it);
    }
  }
  if (terms.empty() && o.m) {
    m = o.m;
    n = o.n;
  }
  return *this;
}

GraphElem make_elem(const GenTable& T, const LevelGraph& g, Rational c) {
  GraphElem e;
  e.m = g.nout();
  e.n = g.nin;
  auto can = canonicalize(T, g);
  if (can.zero || c == 0) return e;
  e.terms.emplace(can.key, std::make_pair(can.graph, c * can.sign));
  return e;
}

GraphElem elem_sum(std::vector<GraphElem> xs) {
  GraphElem e;
  for (auto& x : xs) {
    if (e.m == 0 && x.m) {
      e.m = x.m;
      e.n = x.n;
    }
    e += x;
  }
  return e;
}

LevelGraph corolla(const GenTable& T, int gen) {
  LevelGraph g;
  g.nin = T[gen].n;
  GVertex v;
  v.gen = gen;
  for (int j = 1; j <= T[gen].n; ++j) v.in.push_back(gin(j));
  g.verts.push_back(std::move(v));
  for (int p = 1; p <= T[gen].m; ++p) g.outs.push_back(port(0, p));
  return g;
}

LevelGraph trivial_edge() {
  LevelGraph g;
  g.nin = 1;
  g.outs.push_back(gin(1));
  return g;
}

static LevelGraph graft(const LevelGraph& t1, const std::vector<std::pair<int, int>>& pairs,
                        const LevelGraph& t2) {
  std::set<int> U, Ts;
  int u_min = 1 << 30, t_min = 1 << 30;
  for (auto [t, u] : pairs) {
    if (!Ts.insert(t).second || !U.insert(u).second)
      throw std::invalid_argument("compose: repeated leg in pairing");
    if (u < 1 || u > t1.nin || t < 1 || t > t2.nout())
      throw std::invalid_argument("compose: leg out of range");
    u_min = std::min(u_min, u);
    t_min = std::min(t_min, t);
  }
  if (pairs.empty()) throw std::invalid_argument("compose: empty pairing");

  const int w2 = t2.weight();
  const int n2 = t2.nin;
  const int m1 = t1.nout();

  auto in1_label = [&](int j) { // unpaired input leg of t1
    int pos = 0;
    for (int x = 1; x < j; ++x)
      if (!U.count(x)) ++pos;
    return pos + 1 + (j > u_min ? n2 : 0);
  };
  int base2 = 0;
  for (int x = 1; x < u_min; ++x)
    if (!U.count(x)) ++base2;
  auto in2_label = [&](int k) { return base2 + k; };

  auto out2_label = [&](int b) { // unpaired output leg of t2
    int pos = 0;
    for (int x = 1; x < b; ++x)
      if (!Ts.count(x)) ++pos;
    return pos + 1 + (b > t_min ? m1 : 0);
  };
  int baseo = 0;
  for (int x = 1; x < t_min; ++x)
    if (!Ts.count(x)) ++baseo;
  auto out1_label = [&](int a) { return baseo + a; };

  auto map2 = [&](const Src& s) { return s.kind == 0 ? gin(in2_label(s.a)) : s; };
  auto map1 = [&](const Src& s) -> Src {
    if (s.kind == 1) return port(s.a + w2, s.b);
    if (!U.count(s.a)) return gin(in1_label(s.a));
    for (auto [t, u] : pairs)
      if (u == s.a) return map2(t2.outs[t - 1]);
    return s; // unreachable
  };

  LevelGraph r;
  r.nin = t1.nin + n2 - static_cast<int>(pairs.size());
  for (const auto& v : t2.verts) {
    GVertex nv;
    nv.gen = v.gen;
    for (const auto& s : v.in) nv.in.push_back(map2(s));
    r.verts.push_back(std::move(nv));
  }
  for (const auto& v : t1.verts) {
    GVertex nv;
    nv.gen = v.gen;
    for (const auto& s : v.in) nv.in.push_back(map1(s));
    r.verts.push_back(std::move(nv));
  }
  r.outs.resize(m1 + t2.nout() - pairs.size());
  for (int b = 1; b <= t2.nout(); ++b)
    if (!Ts.count(b)) r.outs[out2_label(b) - 1] = map2(t2.outs[b - 1]);
  for (int a = 1; a <= m1; ++a) r.outs[out1_label(a) - 1] = map1(t1.outs[a - 1]);
  return r;
}

GraphElem compose(const GenTable& T, const GraphElem& g1,
                  const std::vector<std::pair<int, int>>& pairs, const GraphElem& g2) {
  GraphElem r;
  r.m = g1.m + g2.m - static_cast<int>(pairs.size());
  r.n = g1.n + g2.n - static_cast<int>(pairs.size());
  for (const auto& [k1, tc1] : g1.terms)
    for (const auto& [k2, tc2] : g2.terms)
      r += make_elem(T, graft(tc1.first, pairs, tc2.first), tc1.second * tc2.second);
  return r;
}

GraphElem sigma_act(const GenTable& T, const GraphElem& g, const std::vector<int>& tau,
                    const std::vector<int>& sigma) {
  if (static_cast<int>(tau.size()) != g.m || static_cast<int>(sigma.size()) != g.n)
    throw std::invalid_argument("sigma_act: permutation size mismatch");
  std::vector<int> sinv(sigma.size() + 1);
  for (size_t i = 0; i < sigma.size(); ++i) sinv[sigma[i]] = static_cast<int>(i) + 1;
  GraphElem r;
  r.m = g.m;
  r.n = g.n;
  for (const auto& [k, tc] : g.terms) {
    LevelGraph h = tc.first;
    for (auto& v : h.verts)
      for (auto& s : v.in)
        if (s.kind == 0) s.a = sinv[s.a];
    std::vector<Src> no(h.outs.size());
    for (size_t i = 0; i < h.outs.size(); ++i) {
      Src s = h.outs[i];
      if (s.kind == 0) s.a = sinv[s.a];
      no[tau[i] - 1] = s;
    }
    h.outs = std::move(no);
    r += make_elem(T, h, tc.second);
  }
  return r;
}

GraphElem substitute_all(const GenTable& T, const LevelGraph& g,
                         const std::vector<const GraphElem*>& images) {
  const int w = g.weight();
  if (static_cast<int>(images.size()) != w)
    throw std::invalid_argument("substitute_all: one image per vertex required");
  for (int v = 0; v < w; ++v) {
    const auto& gen = T[g.verts[v].gen];
    if (images[v]->m != gen.m || images[v]->n != gen.n)
      throw std::invalid_argument("substitute_all: image arity mismatch for " + gen.id);
  }

  GraphElem total;
  total.m = g.nout();
  total.n = g.nin;

  // Cartesian product over the chosen term of each image.
  std::vector<std::map<Key, std::pair<LevelGraph, Rational>>::const_iterator> pick(w);
  for (int v = 0; v < w; ++v) {
    if (images[v]->terms.empty()) return total;
    pick[v] = images[v]->terms.begin();
  }
  while (true) {
    std::vector<int> off(w + 1, 0);
    for (int v = 0; v < w; ++v) off[v + 1] = off[v] + pick[v]->second.first.weight();

    std::function<Src(const Src&)> resolve = [&](const Src& s) -> Src {
      if (s.kind == 0) return s;
      const LevelGraph& h = pick[s.a]->second.first;
      Src o = h.outs[s.b - 1];
      if (o.kind == 1) return port(off[s.a] + o.a, o.b);
      return resolve(g.verts[s.a].in[o.a - 1]);
    };

    LevelGraph r;
    r.nin = g.nin;
    for (int v = 0; v < w; ++v) {
      const LevelGraph& h = pick[v]->second.first;
      for (const auto& hv : h.verts) {
        GVertex nv;
        nv.gen = hv.gen;
        for (const auto& s : hv.in) {
          if (s.kind == 1) nv.in.push_back(port(off[v] + s.a, s.b));
          else nv.in.push_back(resolve(g.verts[v].in[s.a - 1]));
        }
        r.verts.push_back(std::move(nv));
      }
    }
    for (const auto& o : g.outs) r.outs.push_back(resolve(o));

    Rational c(1);
    for (int v = 0; v < w; ++v) c *= pick[v]->second.second;
    total += make_elem(T, r, c);

    int v = w - 1;
    while (v >= 0) {
      if (++pick[v] != images[v]->terms.end()) break;
      pick[v] = images[v]->terms.begin();
      --v;
    }
    if (v < 0) break;
  }
  return total;
}

GraphElem substitute_one(const GenTable& T, const LevelGraph& g, int v, const GraphElem& h) {
  std::vector<GraphElem> idents;
  idents.reserve(g.weight());
  std::vector<const GraphElem*> imgs(g.weight());
  for (int i = 0; i < g.weight(); ++i) {
    if (i == static_cast<int>(v)) {
      imgs[i] = &h;
    } else {
      idents.push_back(make_elem(T, corolla(T, g.verts[i].gen)));
      imgs[i] = &idents.back();
    }
  }
  return substitute_all(T, g, imgs);
}

std::vector<int> id_perm(int k) {
  std::vector<int> p(k);
  for (int i = 0; i < k; ++i) p[i] = i + 1;
  return p;
}

std::vector<int> transposition(int k, int a, int b) {
  auto p = id_perm(k);
  std::swap(p[a - 1], p[b - 1]);
  return p;
}

} // namespace pf
