#include "pf/sparse.hpp"

namespace pf {

void SparseVec::add(const Key& k, const Rational& c) {
  auto it = e.find(k);
  if (it == e.end()) {
    if (c != 0) e.emplace(k, c);
    return;
  }
  it->second += c;
  if (it->second == 0) e.erase(it);
}

void SparseVec::axpy(const Rational& c, const SparseVec& v) {
  if (c == 0) return;
  for (const auto& [k, x] : v.e) add(k, c * x);
}

void SparseVec::scale(const Rational& c) {
  if (c == 0) {
    e.clear();
    return;
  }
  for (auto& [k, x] : e) x *= c;
}

SparseVec RowBasis::reduce(SparseVec v) const {
  for (const auto& [p, row] : rows) {
    Rational c = v.coeff(p);
    if (c != 0) v.axpy(-c, row);
  }
  return v;
}

bool RowBasis::insert(SparseVec v) {
  v = reduce(v);
  if (v.empty()) return false;
  Key p = v.lead();
  v.scale(Rational(1) / v.coeff(p));
  for (auto& [q, row] : rows) {
    Rational c = row.coeff(p);
    if (c != 0) row.axpy(-c, v);
  }
  rows.emplace(std::move(p), std::move(v));
  return true;
}

std::vector<Key> RowBasis::pivots() const {
  std::vector<Key> ps;
  ps.reserve(rows.size());
  for (const auto& [p, _] : rows) ps.push_back(p);
  return ps;
}

RowBasis rref(const std::vector<SparseVec>& vectors) {
  RowBasis b;
  for (const auto& v : vectors) b.insert(v);
  return b;
}

Membership membership(const RowBasis& basis, const SparseVec& v) {
  Membership m;
  SparseVec r = v;
  for (const auto& [p, row] : basis.rows) {
    Rational c = r.coeff(p);
    if (c != 0) {
      m.coords[p] = c;
      r.axpy(-c, row);
    }
  }
  if (r.empty()) {
    m.member = true;
  } else {
    m.member = false;
    m.coords.clear();
    m.residual = std::move(r);
  }
  return m;
}

RowBasis orthogonal_complement(const RowBasis& basis,
                               const std::vector<Key>& primal_keys,
                               const std::vector<Key>& dual_keys,
                               const Pairing& pairing) {
  if (primal_keys.size() != dual_keys.size())
    throw std::invalid_argument("orthogonal_complement: ambient dimensions differ");

  // Perfect-pairing check on the full ambient spaces.
  {
    RowBasis gram;
    for (const auto& pk : primal_keys) {
      SparseVec row;
      for (const auto& dk : dual_keys) row.set(dk, pairing(pk, dk));
      gram.insert(std::move(row));
    }
    if (gram.rank() != primal_keys.size())
      throw std::invalid_argument("orthogonal_complement: degenerate pairing");
  }

  // Constraint matrix: one functional on the dual keys per basis row.
  RowBasis constraints;
  for (const auto& [p, row] : basis.rows) {
    SparseVec f;
    for (const auto& dk : dual_keys) {
      Rational s(0);
      for (const auto& [k, c] : row.e) s += c * pairing(k, dk);
      f.set(dk, s);
    }
    constraints.insert(std::move(f));
  }

  // Kernel by back-substitution over the free keys.
  std::vector<SparseVec> kernel;
  auto piv = constraints.rows;
  for (const auto& dk : dual_keys) {
    if (piv.count(dk)) continue;
    SparseVec v;
    v.set(dk, Rational(1));
    for (const auto& [p, row] : piv) v.set(p, -row.coeff(dk));
    kernel.push_back(std::move(v));
  }
  return rref(kernel);
}

bool same_span(const RowBasis& a, const RowBasis& b) {
  if (a.rank() != b.rank()) return false;
  for (const auto& [p, row] : a.rows)
    if (!b.contains(row)) return false;
  return true;
}

} // namespace pf
