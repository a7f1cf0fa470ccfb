#include "pf/presentation.hpp"

#include "json.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace pf {

namespace {

std::string g_cache_dir; // set via set_cache_dir / PF_CACHE_DIR
std::mutex g_cache_mu;

// ---------------------------------------------------------------------------
// Builtin presentations. Graphs are written with the upstream vertex first;
// gin(k) is the global input leg k, port(v,p) the output port p of vertex v.
// ---------------------------------------------------------------------------

struct TermBuilder {
  const GenTable& T;
  LevelGraph g;
  TermBuilder(const GenTable& t, int nin) : T(t) { g.nin = nin; }
  TermBuilder& v(const std::string& gen, std::vector<Src> in) {
    GVertex vx;
    vx.gen = T.index_of(gen);
    vx.in = std::move(in);
    g.verts.push_back(std::move(vx));
    return *this;
  }
  GraphElem outs(std::vector<Src> o, Rational c = Rational(1)) {
    g.outs = std::move(o);
    return make_elem(T, g, c);
  }
};

GraphElem edge_elem(const GenTable& T, Rational c) {
  return make_elem(T, trivial_edge(), c);
}

PresPtr make_bib(int lam) {
  auto p = std::make_shared<Presentation>();
  p->name = "BIB";
  p->lambda = lam;
  p->gen_ids.push_back(p->gens.add({"mu", 1, 2, 0, 0, {}}));
  p->gen_ids.push_back(p->gens.add({"de", 2, 1, lam, 0, {}}));
  const auto& T = p->gens;
  Rational sl = sign_pow(lam);

  // mu(mu(x1,x2),x3) - mu(x1,mu(x2,x3))
  auto a1 = TermBuilder(T, 3).v("mu", {gin(1), gin(2)}).v("mu", {port(0, 1), gin(3)}).outs({port(1, 1)});
  auto a2 = TermBuilder(T, 3).v("mu", {gin(2), gin(3)}).v("mu", {gin(1), port(0, 1)}).outs({port(1, 1)}, -1);
  p->rels.push_back({"assoc", elem_sum({a1, a2})});

  // (de x 1)de - (-1)^lam (1 x de)de
  auto c1 = TermBuilder(T, 1).v("de", {gin(1)}).v("de", {port(0, 1)}).outs({port(1, 1), port(1, 2), port(0, 2)});
  auto c2 = TermBuilder(T, 1).v("de", {gin(1)}).v("de", {port(0, 2)}).outs({port(0, 1), port(1, 1), port(1, 2)}, -sl);
  p->rels.push_back({"coassoc", elem_sum({c1, c2})});

  // de mu(x1,x2) - (mu(x1,de'x2) (x) de''x2) - (de'x1 (x) mu(de''x1,x2))
  auto lA = TermBuilder(T, 2).v("mu", {gin(1), gin(2)}).v("de", {port(0, 1)}).outs({port(1, 1), port(1, 2)});
  auto lB = TermBuilder(T, 2).v("de", {gin(2)}).v("mu", {gin(1), port(0, 1)}).outs({port(1, 1), port(0, 2)}, -1);
  auto lC = TermBuilder(T, 2).v("de", {gin(1)}).v("mu", {port(0, 2), gin(2)}).outs({port(0, 1), port(1, 1)}, -1);
  p->rels.push_back({"leibniz", elem_sum({lA, lB, lC})});

  // balanced relation
  auto t1 = TermBuilder(T, 2).v("de", {gin(1)}).v("mu", {gin(2), port(0, 2)}).outs({port(1, 1), port(0, 1)}, sl);
  auto t2 = TermBuilder(T, 2).v("de", {gin(2)}).v("mu", {gin(1), port(0, 2)}).outs({port(0, 1), port(1, 1)});
  auto t3 = TermBuilder(T, 2).v("de", {gin(2)}).v("mu", {port(0, 1), gin(1)}).outs({port(1, 1), port(0, 2)}, -1);
  auto t4 = TermBuilder(T, 2).v("de", {gin(1)}).v("mu", {port(0, 1), gin(2)}).outs({port(0, 2), port(1, 1)}, -sl);
  p->rels.push_back({"balanced", elem_sum({t1, t2, t3, t4})});
  return p;
}

void add_bibdual_gens(Presentation& p, int lam) {
  p.gen_ids.push_back(p.gens.add({"nu", 1, 2, -1, 0, {}}));
  p.gen_ids.push_back(p.gens.add({"rho", 2, 1, -lam - 1, 0, {}}));
}

void add_bibdual_rels(Presentation& p, int lam) {
  const auto& T = p.gens;
  Rational sl = sign_pow(lam);

  auto k1 = TermBuilder(T, 3).v("nu", {gin(2), gin(3)}).v("nu", {gin(1), port(0, 1)}).outs({port(1, 1)});
  auto k2 = TermBuilder(T, 3).v("nu", {gin(1), gin(2)}).v("nu", {port(0, 1), gin(3)}).outs({port(1, 1)});
  p.rels.push_back({"nu-assoc", elem_sum({k1, k2})});

  auto r1 = TermBuilder(T, 1).v("rho", {gin(1)}).v("rho", {port(0, 2)}).outs({port(0, 1), port(1, 1), port(1, 2)});
  auto r2 = TermBuilder(T, 1).v("rho", {gin(1)}).v("rho", {port(0, 1)}).outs({port(1, 1), port(1, 2), port(0, 2)}, sl);
  p.rels.push_back({"rho-coassoc", elem_sum({r1, r2})});

  auto stackA = [&](Rational c) {
    return TermBuilder(T, 2).v("nu", {gin(1), gin(2)}).v("rho", {port(0, 1)}).outs({port(1, 1), port(1, 2)}, c);
  };
  auto kB = TermBuilder(T, 2).v("rho", {gin(2)}).v("nu", {gin(1), port(0, 1)}).outs({port(1, 1), port(0, 2)});
  p.rels.push_back({"leib-b", elem_sum({stackA(sl), kB})});
  auto kC = TermBuilder(T, 2).v("rho", {gin(1)}).v("nu", {port(0, 2), gin(2)}).outs({port(0, 1), port(1, 1)});
  p.rels.push_back({"leib-c", elem_sum({stackA(sl), kC})});

  auto zm2 = [&](Rational c) {
    return TermBuilder(T, 2).v("rho", {gin(2)}).v("nu", {gin(1), port(0, 2)}).outs({port(0, 1), port(1, 1)}, c);
  };
  auto zm1 = TermBuilder(T, 2).v("rho", {gin(1)}).v("nu", {gin(2), port(0, 2)}).outs({port(1, 1), port(0, 1)}, -sl);
  p.rels.push_back({"zig-a", elem_sum({zm2(Rational(1)), zm1})});
  auto zb = TermBuilder(T, 2).v("rho", {gin(2)}).v("nu", {port(0, 1), gin(1)}).outs({port(1, 1), port(0, 2)});
  p.rels.push_back({"zig-b", elem_sum({zm2(Rational(1)), zb})});

  auto bub1 = TermBuilder(T, 1).v("rho", {gin(1)}).v("nu", {port(0, 1), port(0, 2)}).outs({port(1, 1)});
  p.rels.push_back({"bubble", bub1});
  auto bub2 = TermBuilder(T, 1).v("rho", {gin(1)}).v("nu", {port(0, 2), port(0, 1)}).outs({port(1, 1)});
  p.rels.push_back({"bubble-tw", bub2});
}

PresPtr make_bibdual(int lam) {
  auto p = std::make_shared<Presentation>();
  p->name = "BIB!";
  p->lambda = lam;
  add_bibdual_gens(*p, lam);
  add_bibdual_rels(*p, lam);
  return p;
}

PresPtr make_ubibdual() {
  auto p = std::make_shared<Presentation>();
  p->name = "uBIB!";
  p->lambda = -1;
  p->unital = true;
  add_bibdual_gens(*p, -1);
  p->gen_ids.push_back(p->gens.add({"u", 1, 0, 1, 0, {}}));
  add_bibdual_rels(*p, -1);
  const auto& T = p->gens;
  auto u1 = TermBuilder(T, 1).v("u", {}).v("nu", {gin(1), port(0, 1)}).outs({port(1, 1)});
  p->rels.push_back({"unit-r", elem_sum({u1, edge_elem(T, Rational(-1))})});
  auto u2 = TermBuilder(T, 1).v("u", {}).v("nu", {port(0, 1), gin(1)}).outs({port(1, 1)});
  p->rels.push_back({"unit-l", elem_sum({u2, edge_elem(T, Rational(1))})});
  return p;
}

PresPtr make_udpoisdual() {
  auto p = std::make_shared<Presentation>();
  p->name = "uDPois!";
  p->lambda = -1;
  p->unital = true;
  p->gen_ids.push_back(p->gens.add({"b", 1, 2, -1, 0, {}}));
  GenSym zsym{{1, 0}, {1, 0}, -1};
  p->gen_ids.push_back(p->gens.add({"z", 2, 2, -1, 0, {zsym}}));
  p->gen_ids.push_back(p->gens.add({"u", 1, 0, 1, 0, {}}));
  const auto& T = p->gens;

  auto d1 = TermBuilder(T, 3).v("b", {gin(2), gin(3)}).v("b", {gin(1), port(0, 1)}).outs({port(1, 1)});
  auto d2 = TermBuilder(T, 3).v("b", {gin(1), gin(2)}).v("b", {port(0, 1), gin(3)}).outs({port(1, 1)});
  p->rels.push_back({"b-assoc", elem_sum({d1, d2})});

  auto u1 = TermBuilder(T, 1).v("u", {}).v("b", {gin(1), port(0, 1)}).outs({port(1, 1)});
  p->rels.push_back({"unit-r", elem_sum({u1, edge_elem(T, Rational(-1))})});
  auto u2 = TermBuilder(T, 1).v("u", {}).v("b", {port(0, 1), gin(1)}).outs({port(1, 1)});
  p->rels.push_back({"unit-l", elem_sum({u2, edge_elem(T, Rational(1))})});

  // bracket against the product in the first slot
  auto e1 = TermBuilder(T, 3).v("z", {gin(2), gin(3)}).v("b", {gin(1), port(0, 1)}).outs({port(1, 1), port(0, 2)});
  auto e2 = TermBuilder(T, 3).v("b", {gin(1), gin(3)}).v("z", {gin(2), port(0, 1)}).outs({port(1, 1), port(1, 2)});
  p->rels.push_back({"zb-1", elem_sum({e1, e2})});

  // bracket against the product in the second slot
  auto f1 = TermBuilder(T, 3).v("z", {gin(3), gin(1)}).v("b", {port(0, 2), gin(2)}).outs({port(1, 1), port(0, 1)}, -1);
  auto f2 = TermBuilder(T, 3).v("b", {gin(1), gin(2)}).v("z", {port(0, 1), gin(3)}).outs({port(1, 1), port(1, 2)});
  p->rels.push_back({"zb-2", elem_sum({f1, f2})});

  // double-bracket jacobi, dual side
  auto j1 = TermBuilder(T, 3).v("z", {gin(2), gin(3)}).v("z", {gin(1), port(0, 1)}).outs({port(1, 1), port(1, 2), port(0, 2)});
  auto j2 = TermBuilder(T, 3).v("z", {gin(3), gin(1)}).v("z", {gin(2), port(0, 1)}).outs({port(0, 2), port(1, 1), port(1, 2)}, -1);
  p->rels.push_back({"zz-jac", elem_sum({j1, j2})});

  auto g1 = TermBuilder(T, 2).v("z", {gin(1), gin(2)}).v("b", {port(0, 1), port(0, 2)}).outs({port(1, 1)});
  p->rels.push_back({"z-loop", g1});
  auto g2 = TermBuilder(T, 2).v("z", {gin(1), gin(2)}).v("z", {port(0, 1), port(0, 2)}).outs({port(1, 1), port(1, 2)});
  p->rels.push_back({"zz-loop", g2});
  return p;
}

PresPtr make_lieb(int lam) {
  auto p = std::make_shared<Presentation>();
  p->name = "LieB";
  p->lambda = lam;
  GenSym bsym{{0}, {1, 0}, -1};
  p->gen_ids.push_back(p->gens.add({"br", 1, 2, 0, 0, {bsym}}));
  GenSym csym{{1, 0}, {0}, parity(lam + 1) ? -1 : 1};
  p->gen_ids.push_back(p->gens.add({"cb", 2, 1, lam, 0, {csym}}));
  const auto& T = p->gens;

  auto jt = [&](int a, int b, int c) {
    return TermBuilder(T, 3).v("br", {gin(a), gin(b)}).v("br", {port(0, 1), gin(c)}).outs({port(1, 1)});
  };
  p->rels.push_back({"jacobi", elem_sum({jt(1, 2, 3), jt(2, 3, 1), jt(3, 1, 2)})});

  auto ct = TermBuilder(T, 1).v("cb", {gin(1)}).v("cb", {port(0, 1)}).outs({port(1, 1), port(1, 2), port(0, 2)});
  std::vector<int> rot = {2, 3, 1};
  auto ct2 = sigma_act(T, ct, rot, id_perm(1));
  auto ct3 = sigma_act(T, ct2, rot, id_perm(1));
  p->rels.push_back({"cojacobi", elem_sum({ct, ct2, ct3})});

  auto s = TermBuilder(T, 2).v("br", {gin(1), gin(2)}).v("cb", {port(0, 1)}).outs({port(1, 1), port(1, 2)}, -1);
  auto lb = TermBuilder(T, 2).v("cb", {gin(2)}).v("br", {gin(1), port(0, 1)}).outs({port(1, 1), port(0, 2)});
  auto lc = TermBuilder(T, 2).v("cb", {gin(1)}).v("br", {port(0, 2), gin(2)}).outs({port(0, 1), port(1, 1)});
  auto l4 = TermBuilder(T, 2).v("cb", {gin(1)}).v("br", {port(0, 1), gin(2)}).outs({port(1, 1), port(0, 2)});
  auto l5 = TermBuilder(T, 2).v("cb", {gin(2)}).v("br", {gin(1), port(0, 2)}).outs({port(0, 1), port(1, 1)});
  p->rels.push_back({"lieb-leibniz", elem_sum({s, lb, lc, l4, l5})});
  return p;
}

PresPtr make_liebdual() {
  auto p = std::make_shared<Presentation>();
  p->name = "LieB!";
  p->lambda = -1;
  GenSym nsym{{0}, {1, 0}, -1};
  p->gen_ids.push_back(p->gens.add({"nu", 1, 2, -1, 0, {nsym}}));
  GenSym rsym{{1, 0}, {0}, 1};
  p->gen_ids.push_back(p->gens.add({"rho", 2, 1, 0, 0, {rsym}}));
  const auto& T = p->gens;

  auto k1 = TermBuilder(T, 3).v("nu", {gin(2), gin(3)}).v("nu", {gin(1), port(0, 1)}).outs({port(1, 1)});
  auto k2 = TermBuilder(T, 3).v("nu", {gin(1), gin(2)}).v("nu", {gin(3), port(0, 1)}).outs({port(1, 1)}, -1);
  p->rels.push_back({"nu-jac", elem_sum({k1, k2})});

  auto r1 = TermBuilder(T, 1).v("rho", {gin(1)}).v("rho", {port(0, 2)}).outs({port(0, 1), port(1, 1), port(1, 2)});
  auto r2 = TermBuilder(T, 1).v("rho", {gin(1)}).v("rho", {port(0, 2)}).outs({port(1, 1), port(1, 2), port(0, 1)}, -1);
  p->rels.push_back({"rho-cojac", elem_sum({r1, r2})});

  auto stack = [&] {
    return TermBuilder(T, 2).v("nu", {gin(1), gin(2)}).v("rho", {port(0, 1)}).outs({port(1, 1), port(1, 2)});
  };
  auto fb = TermBuilder(T, 2).v("rho", {gin(2)}).v("nu", {gin(1), port(0, 1)}).outs({port(1, 1), port(0, 2)}, -1);
  p->rels.push_back({"frob-b", elem_sum({stack(), fb})});
  auto fc = TermBuilder(T, 2).v("rho", {gin(1)}).v("nu", {port(0, 2), gin(2)}).outs({port(0, 1), port(1, 1)}, -1);
  p->rels.push_back({"frob-c", elem_sum({stack(), fc})});
  return p;
}

} // namespace

GraphElem bibdual_rel2b(const Presentation& p) {
  const auto& T = p.gens;
  Rational sl = sign_pow(p.lambda);
  auto zm2 = TermBuilder(T, 2).v("rho", {gin(2)}).v("nu", {gin(1), port(0, 2)}).outs({port(0, 1), port(1, 1)});
  auto zb1 = TermBuilder(T, 2).v("rho", {gin(1)}).v("nu", {port(0, 1), gin(2)}).outs({port(0, 2), port(1, 1)}, sl);
  return elem_sum({zm2, zb1});
}

GraphElem comb_out(const Presentation& p, const std::string& gen, int j) {
  const auto& T = p.gens;
  if (j == 0) return make_elem(T, trivial_edge());
  LevelGraph g;
  g.nin = 1;
  int gi = T.index_of(gen);
  for (int i = 0; i < j; ++i) {
    GVertex v;
    v.gen = gi;
    v.in.push_back(i == 0 ? gin(1) : port(i - 1, 1));
    g.verts.push_back(std::move(v));
  }
  g.outs.resize(j + 1);
  g.outs[0] = port(j - 1, 1);
  for (int k = 0; k < j; ++k) g.outs[k + 1] = port(j - 1 - k, 2);
  return make_elem(T, g);
}

GraphElem comb_in(const Presentation& p, const std::string& gen, int k) {
  const auto& T = p.gens;
  if (k == 0) return make_elem(T, trivial_edge());
  LevelGraph g;
  g.nin = k + 1;
  int gi = T.index_of(gen);
  for (int i = 0; i < k; ++i) {
    GVertex v;
    v.gen = gi;
    int leg = k - i; // deepest vertex first
    v.in.push_back(gin(leg));
    v.in.push_back(i == 0 ? gin(k + 1) : port(i - 1, 1));
    g.verts.push_back(std::move(v));
  }
  g.outs = {port(k - 1, 1)};
  return make_elem(T, g);
}

PresPtr builtin(const std::string& name, int lambda) {
  if (name == "BIB") return make_bib(lambda);
  if (name == "BIB!") return make_bibdual(lambda);
  if (name == "LieB") return make_lieb(lambda);
  if (name == "LieB!") return make_liebdual();
  if (name == "uBIB!") return make_ubibdual();
  if (name == "uDPois!") return make_udpoisdual();
  throw std::invalid_argument("unknown presentation: " + name);
}

// ---------------------------------------------------------------------------
// Sigma closure, cells, ideals, quotients
// ---------------------------------------------------------------------------

const std::vector<Relation>& Presentation::closed_rels() const {
  std::lock_guard<std::mutex> lk(mu);
  if (!closed_.empty()) return closed_;
  std::set<std::string> seen;
  for (const auto& r : rels) {
    std::vector<int> tau = id_perm(r.elem.m), sig = id_perm(r.elem.n);
    std::sort(tau.begin(), tau.end());
    do {
      std::vector<int> sig2 = id_perm(r.elem.n);
      std::sort(sig2.begin(), sig2.end());
      do {
        auto img = sigma_act(gens, r.elem, tau, sig2);
        if (img.zero()) continue;
        auto serial = [](const GraphElem& e) {
          std::string key;
          for (const auto& [k, tc] : e.terms) key += k + "#" + rat_str(tc.second) + ";";
          return key;
        };
        auto neg = img;
        neg *= Rational(-1);
        if (seen.count(serial(img)) || seen.count(serial(neg))) continue;
        seen.insert(serial(img));
        closed_.push_back({r.name, img});
      } while (std::next_permutation(sig2.begin(), sig2.end()));
    } while (std::next_permutation(tau.begin(), tau.end()));
  }
  return closed_;
}

std::string Presentation::signature() const {
  std::string s = name + "|lam=" + std::to_string(lambda) + "|";
  for (int gi : gen_ids) {
    const auto& g = gens[gi];
    s += g.id + "(" + std::to_string(g.m) + "," + std::to_string(g.n) + "," +
         std::to_string(g.degree) + ",syms=" + std::to_string(g.syms.size()) + ");";
  }
  s += "|rels:";
  for (const auto& r : rels) {
    s += r.name + "{";
    for (const auto& [k, tc] : r.elem.terms) s += k + "#" + rat_str(tc.second) + ";";
    s += "}";
  }
  return s;
}

namespace {

// Merge the adjacent pair (up feeds dn) of h into a placeholder vertex.
struct Context {
  LevelGraph g;
  int ph_pos = -1;
  int mr = 0, nr = 0;
};

std::optional<Context> excise_pair(GenTable& T, const LevelGraph& h, int up, int dn,
                                   std::map<std::pair<int, int>, int>& ph_gens) {
  const int w = h.weight();
  std::vector<Src> ph_in;
  for (const auto& s : h.verts[up].in) ph_in.push_back(s);
  bool adjacent = false;
  for (const auto& s : h.verts[dn].in) {
    if (s.kind == 1 && s.a == up) {
      adjacent = true;
      continue;
    }
    ph_in.push_back(s);
  }
  if (!adjacent) return std::nullopt;

  // external ports: up's ports consumed outside the pair, then dn's ports
  std::vector<std::pair<int, int>> ph_ports;
  for (int pp = 1; pp <= T[h.verts[up].gen].m; ++pp) {
    bool internal = false;
    for (const auto& s : h.verts[dn].in)
      if (s.kind == 1 && s.a == up && s.b == pp) internal = true;
    if (!internal) ph_ports.push_back({up, pp});
  }
  for (int pp = 1; pp <= T[h.verts[dn].gen].m; ++pp) ph_ports.push_back({dn, pp});

  int mr = static_cast<int>(ph_ports.size());
  int nr = static_cast<int>(ph_in.size());

  auto key = std::make_pair(mr, nr);
  if (!ph_gens.count(key)) {
    Generator ph;
    ph.id = "@" + std::to_string(mr) + "." + std::to_string(nr);
    ph.m = mr;
    ph.n = nr;
    ph_gens[key] = T.add(ph);
  }
  int ph_gen = ph_gens[key];

  const int PH = -1;
  std::vector<int> nodes;
  for (int i = 0; i < w; ++i)
    if (i != up && i != dn) nodes.push_back(i);
  nodes.push_back(PH);

  auto port_of_pair = [&](const Src& s) -> int {
    for (size_t q = 0; q < ph_ports.size(); ++q)
      if (ph_ports[q].first == s.a && ph_ports[q].second == s.b) return static_cast<int>(q) + 1;
    return 0;
  };

  std::map<int, int> newpos;
  std::vector<int> order;
  auto rank = [&](int x) { return x == PH ? dn : x; };
  std::vector<int> rem = nodes;
  std::sort(rem.begin(), rem.end(), [&](int a, int b) { return rank(a) < rank(b); });
  while (!rem.empty()) {
    bool progressed = false;
    for (size_t i = 0; i < rem.size(); ++i) {
      int x = rem[i];
      auto src_ready = [&](const Src& s) {
        if (s.kind != 1) return true;
        if (s.a == up || s.a == dn) return newpos.count(PH) > 0;
        return newpos.count(s.a) > 0;
      };
      bool ready = true;
      if (x == PH) {
        for (const auto& s : ph_in)
          if (!src_ready(s)) ready = false;
      } else {
        for (const auto& s : h.verts[x].in)
          if (!src_ready(s)) ready = false;
      }
      if (!ready) continue;
      newpos[x] = static_cast<int>(order.size());
      order.push_back(x);
      rem.erase(rem.begin() + i);
      progressed = true;
      break;
    }
    if (!progressed) return std::nullopt; // the excision would create a cycle
  }

  auto map_src = [&](const Src& s) -> Src {
    if (s.kind == 0) return s;
    if (s.a == up || s.a == dn) return port(newpos[PH], port_of_pair(s));
    return port(newpos[s.a], s.b);
  };

  Context c;
  c.mr = mr;
  c.nr = nr;
  c.g.nin = h.nin;
  c.g.verts.resize(order.size());
  for (size_t i = 0; i < order.size(); ++i) {
    int x = order[i];
    GVertex v;
    if (x == PH) {
      v.gen = ph_gen;
      for (const auto& s : ph_in) v.in.push_back(map_src(s));
      c.ph_pos = static_cast<int>(i);
    } else {
      v.gen = h.verts[x].gen;
      for (const auto& s : h.verts[x].in) v.in.push_back(map_src(s));
    }
    c.g.verts[i] = std::move(v);
  }
  for (const auto& o : h.outs) c.g.outs.push_back(map_src(o));
  return c;
}

struct CellKey {
  std::string pres;
  int m, n, genus;
  std::vector<int> weights;
  bool operator<(const CellKey& o) const {
    return std::tie(pres, m, n, genus, weights) < std::tie(o.pres, o.m, o.n, o.genus, o.weights);
  }
};

std::map<CellKey, QuotientCell> g_cells;
std::mutex g_cells_mu;

std::string fnv1a(const std::string& s) {
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", h);
  return buf;
}

std::string cell_cache_path(const Presentation& p, const CellKey& k) {
  if (g_cache_dir.empty()) return "";
  std::string material = p.signature() + "|m=" + std::to_string(k.m) + "|n=" +
                         std::to_string(k.n) + "|genus=" + std::to_string(k.genus) + "|w=";
  for (int w : k.weights) material += std::to_string(w) + ",";
  return g_cache_dir + "/" + fnv1a(material) + ".json";
}

bool load_cell(const std::string& path, QuotientCell& cell) {
  std::ifstream f(path);
  if (!f) return false;
  nlohmann::json j = nlohmann::json::parse(f, nullptr, false);
  if (j.is_discarded() || j.value("version", "") != "pf-cache-v1") return false;
  for (const auto& k : j["free"]) cell.free_keys.push_back(k.get<std::string>());
  for (const auto& row : j["pivots"]) {
    SparseVec v;
    for (auto it = row.begin(); it != row.end(); ++it)
      v.set(it.key(), rat_parse(it.value().get<std::string>()));
    if (!v.empty()) cell.ideal.rows.emplace(v.lead(), v);
  }
  for (const auto& k : j["reps"]) cell.reps.push_back(k.get<std::string>());
  return true;
}

void store_cell(const std::string& path, const QuotientCell& cell) {
  if (path.empty()) return;
  nlohmann::json j;
  j["version"] = "pf-cache-v1";
  j["free"] = cell.free_keys;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [p, row] : cell.ideal.rows) {
    nlohmann::json r = nlohmann::json::object();
    for (const auto& [k, c] : row.e) r[k] = rat_str(c);
    rows.push_back(std::move(r));
  }
  j["pivots"] = std::move(rows);
  j["reps"] = cell.reps;
  std::error_code ec;
  std::filesystem::create_directories(g_cache_dir, ec);
  std::ofstream f(path);
  if (f) f << j.dump();
}

QuotientCell compute_cell(const Presentation& p, int m, int n, const std::vector<int>& weights,
                          int max_genus) {
  QuotientCell cell;
  GenTable T = p.gens; // local copy so placeholders stay cell-local
  std::map<std::pair<int, int>, int> ph_gens;

  std::vector<SparseVec> ideal_vecs;
  for (int w : weights) {
    auto graphs = enumerate_graphs(T, p.gen_ids, m, n, w, max_genus);
    for (auto& h : graphs) {
      cell.free_graphs.push_back(h);
      cell.free_keys.push_back(serialize(T, h));
      for (int upv = 0; upv < h.weight(); ++upv)
        for (int dnv = upv + 1; dnv < h.weight(); ++dnv) {
          auto ctx = excise_pair(T, h, upv, dnv, ph_gens);
          if (!ctx) continue;
          for (const auto& r : p.closed_rels()) {
            if (r.elem.m != ctx->mr || r.elem.n != ctx->nr) continue;
            auto filled = substitute_one(T, ctx->g, ctx->ph_pos, r.elem);
            if (!filled.zero()) ideal_vecs.push_back(filled.vec());
          }
        }
    }
  }
  std::sort(cell.free_keys.begin(), cell.free_keys.end());
  cell.ideal = rref(ideal_vecs);
  std::set<Key> piv;
  for (const auto& [k, r] : cell.ideal.rows) piv.insert(k);
  for (const auto& k : cell.free_keys)
    if (!piv.count(k)) cell.reps.push_back(k);
  return cell;
}

} // namespace

const QuotientCell& cell(const Presentation& p, int m, int n, std::vector<int> weights,
                         int max_genus) {
  std::sort(weights.begin(), weights.end());
  weights.erase(std::unique(weights.begin(), weights.end()), weights.end());
  CellKey key{p.signature(), m, n, max_genus, weights};
  {
    std::lock_guard<std::mutex> lk(g_cells_mu);
    auto it = g_cells.find(key);
    if (it != g_cells.end()) return it->second;
  }
  QuotientCell c;
  std::string path = cell_cache_path(p, key);
  bool loaded = false;
  if (!path.empty()) {
    std::lock_guard<std::mutex> lk(g_cache_mu);
    loaded = load_cell(path, c);
  }
  if (loaded) {
    GenTable T = p.gens;
    for (int w : weights)
      for (auto& h : enumerate_graphs(T, p.gen_ids, m, n, w, max_genus))
        c.free_graphs.push_back(h);
  } else {
    c = compute_cell(p, m, n, weights, max_genus);
    if (!path.empty()) {
      std::lock_guard<std::mutex> lk(g_cache_mu);
      store_cell(path, c);
    }
  }
  std::lock_guard<std::mutex> lk(g_cells_mu);
  return g_cells.emplace(std::move(key), std::move(c)).first->second;
}

RowBasis ideal_span(const Presentation& p, int m, int n, int weight, int max_genus) {
  return cell(p, m, n, {weight}, max_genus).ideal;
}

int quotient_dim(const Presentation& p, int m, int n, int weight, int max_genus) {
  return cell(p, m, n, {weight}, max_genus).dim();
}

std::vector<int> unital_weights(const Presentation& p, int m, int n, int extra_units) {
  // Tree weights at (m, n) for unit counts 0..extra_units; both unital
  // builtins give weight m + n - 2 + 2c for c units.
  std::vector<int> ws;
  if (m == 1 && n == 1) ws.push_back(0);
  for (int c = 0; c <= extra_units; ++c) {
    int w = m + n - 2 + 2 * c;
    if (w >= 1) ws.push_back(w);
  }
  (void)p;
  return ws;
}

SparseVec normal_form(const Presentation& p, const GraphElem& x, int m, int n,
                      std::vector<int> weights, int max_genus) {
  const auto& c = cell(p, m, n, std::move(weights), max_genus);
  return c.ideal.reduce(x.vec());
}

SparseVec normal_form_w(const Presentation& p, const GraphElem& x, int weight, int max_genus) {
  return normal_form(p, x, x.m, x.n, {weight}, max_genus);
}

// ---------------------------------------------------------------------------
// Koszul dual
// ---------------------------------------------------------------------------

PresPtr koszul_dual(const Presentation& p) {
  auto d = std::make_shared<Presentation>();
  d->name = p.name + "!";
  d->lambda = p.lambda;
  auto rename = [&](const std::string& id) -> std::string {
    if (id == "mu" || id == "br") return "nu";
    if (id == "de" || id == "cb") return "rho";
    return id + "*";
  };
  std::map<int, int> gmap;
  for (int gi : p.gen_ids) {
    const auto& g = p.gens[gi];
    Generator dg;
    dg.id = rename(g.id);
    dg.m = g.m;
    dg.n = g.n;
    dg.degree = -1 - g.degree;
    dg.syms = g.syms;
    gmap[gi] = d->gens.add(dg);
    d->gen_ids.push_back(gmap[gi]);
  }

  auto remap = [&](const LevelGraph& g) {
    LevelGraph h = g;
    for (auto& v : h.verts) v.gen = gmap.at(v.gen);
    return h;
  };

  int max_m = 0, max_n = 0;
  for (int gi : p.gen_ids) {
    max_m += p.gens[gi].m;
    max_n += p.gens[gi].n;
  }
  for (int m = 1; m <= max_m; ++m)
    for (int n = 0; n <= max_n; ++n) {
      auto primal = enumerate_graphs(p.gens, p.gen_ids, m, n, 2, 1);
      if (primal.empty()) continue;
      auto dual = enumerate_graphs(d->gens, d->gen_ids, m, n, 2, 1);
      if (dual.empty()) continue;

      std::vector<Key> pk, dk;
      std::map<Key, std::pair<Key, Rational>> match; // primal key -> (dual key, sign)
      for (const auto& g : primal) {
        Key k = serialize(p.gens, g);
        pk.push_back(k);
        auto can = canonicalize(d->gens, remap(g));
        Rational s = can.zero ? Rational(0)
                              : sign_pow(p.gens[g.verts[0].gen].degree) * can.sign;
        match[k] = {can.key, s};
      }
      for (const auto& g : dual) dk.push_back(serialize(d->gens, g));
      std::sort(pk.begin(), pk.end());
      std::sort(dk.begin(), dk.end());
      if (pk.size() != dk.size())
        throw std::logic_error("koszul_dual: primal and dual cell dimensions differ");

      auto pairing = [&](const Key& a, const Key& b) -> Rational {
        auto it = match.find(a);
        if (it == match.end()) return Rational(0);
        return it->second.first == b ? it->second.second : Rational(0);
      };

      std::vector<SparseVec> slice;
      for (const auto& r : p.closed_rels())
        if (r.elem.m == m && r.elem.n == n) slice.push_back(r.elem.vec());
      auto rbasis = rref(slice);
      auto comp = orthogonal_complement(rbasis, pk, dk, pairing);

      std::map<Key, LevelGraph> by_key;
      for (const auto& g : dual) by_key[serialize(d->gens, g)] = g;
      int idx = 0;
      for (const auto& [piv, row] : comp.rows) {
        GraphElem e;
        e.m = m;
        e.n = n;
        for (const auto& [k, c] : row.e) e += make_elem(d->gens, by_key.at(k), c);
        d->rels.push_back({"dual-" + std::to_string(m) + "-" + std::to_string(n) + "-" +
                               std::to_string(idx++),
                           e});
      }
    }
  return d;
}

void set_cache_dir(const std::string& dir) {
  std::lock_guard<std::mutex> lk(g_cache_mu);
  g_cache_dir = dir;
}

std::string cache_dir() {
  std::lock_guard<std::mutex> lk(g_cache_mu);
  return g_cache_dir;
}

} // namespace pf
