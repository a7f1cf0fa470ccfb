#include "pf/generator.hpp"

#include <map>
#include <stdexcept>

namespace pf {

GenSym identity_sym(int m, int n) {
  GenSym s;
  s.out_perm.resize(m);
  s.in_perm.resize(n);
  for (int i = 0; i < m; ++i) s.out_perm[i] = i;
  for (int i = 0; i < n; ++i) s.in_perm[i] = i;
  s.sign = 1;
  return s;
}

static std::vector<int> compose_perm(const std::vector<int>& a, const std::vector<int>& b) {
  // (a after b): x -> a[b[x]]
  std::vector<int> c(b.size());
  for (size_t i = 0; i < b.size(); ++i) c[i] = a[b[i]];
  return c;
}

std::vector<GenSym> close_group(int m, int n, std::vector<GenSym> gens) {
  std::map<std::pair<std::vector<int>, std::vector<int>>, int> seen;
  std::vector<GenSym> group{identity_sym(m, n)};
  seen[{group[0].out_perm, group[0].in_perm}] = 1;
  std::vector<GenSym> frontier = gens;
  while (!frontier.empty()) {
    GenSym s = frontier.back();
    frontier.pop_back();
    auto key = std::make_pair(s.out_perm, s.in_perm);
    auto it = seen.find(key);
    if (it != seen.end()) {
      if (it->second != s.sign)
        throw std::invalid_argument("generator symmetry group forces a zero generator");
      continue;
    }
    seen[key] = s.sign;
    group.push_back(s);
    for (const auto& g : gens) {
      GenSym t;
      t.out_perm = compose_perm(g.out_perm, s.out_perm);
      t.in_perm = compose_perm(g.in_perm, s.in_perm);
      t.sign = g.sign * s.sign;
      frontier.push_back(std::move(t));
    }
  }
  return group;
}

int GenTable::add(Generator g) {
  g.syms = close_group(g.m, g.n, g.syms);
  fp_ += g.id + ":" + std::to_string(g.m) + "," + std::to_string(g.n) + "," +
         std::to_string(g.degree) + "," + std::to_string(g.syms.size());
  for (const auto& s : g.syms) {
    fp_ += "[";
    for (int x : s.out_perm) fp_ += std::to_string(x);
    fp_ += "/";
    for (int x : s.in_perm) fp_ += std::to_string(x);
    fp_ += s.sign < 0 ? "-" : "+";
    fp_ += "]";
  }
  fp_ += ";";
  gens_.push_back(std::move(g));
  return static_cast<int>(gens_.size()) - 1;
}

int GenTable::index_of(const std::string& id) const {
  for (size_t i = 0; i < gens_.size(); ++i)
    if (gens_[i].id == id) return static_cast<int>(i);
  throw std::out_of_range("unknown generator: " + id);
}

} // namespace pf
