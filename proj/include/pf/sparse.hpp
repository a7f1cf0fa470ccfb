#ifndef PF_SPARSE_HPP
#define PF_SPARSE_HPP

#include "pf/rational.hpp"

#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace pf {

// Basis keys are canonical serializations; lexicographic order on the key
// strings is the pivot order everywhere, so runs are reproducible.
using Key = std::string;

struct SparseVec {
  std::map<Key, Rational> e;

  bool empty() const { return e.empty(); }
  const Key& lead() const { return e.begin()->first; }
  Rational coeff(const Key& k) const {
    auto it = e.find(k);
    return it == e.end() ? Rational(0) : it->second;
  }
  void set(const Key& k, const Rational& c) {
    if (c == 0) e.erase(k);
    else e[k] = c;
  }
  void add(const Key& k, const Rational& c);
  // *this += c * v
  void axpy(const Rational& c, const SparseVec& v);
  void scale(const Rational& c);
  bool operator==(const SparseVec& o) const { return e == o.e; }
};

// Rows in reduced row-echelon form: unit pivot coefficients, strictly
// increasing pivot keys, pivots eliminated from every other row.
struct RowBasis {
  std::map<Key, SparseVec> rows; // pivot key -> row

  size_t rank() const { return rows.size(); }
  // Reduce v in place by the current rows; returns the residual.
  SparseVec reduce(SparseVec v) const;
  // Insert the span of v; true if the rank grew.
  bool insert(SparseVec v);
  std::vector<Key> pivots() const;
  bool contains(const SparseVec& v) const { return reduce(v).empty(); }
};

RowBasis rref(const std::vector<SparseVec>& vectors);

// Coordinates of v in the row basis, or the nonzero residual on failure.
struct Membership {
  bool member = false;
  std::map<Key, Rational> coords; // pivot key -> coefficient
  SparseVec residual;
};
Membership membership(const RowBasis& basis, const SparseVec& v);

// Basis of {w in span(dual_keys) : <r, w> = 0 for all rows r}, where the
// pairing is given entrywise on keys. Checks that the pairing between the
// two ambient key lists is perfect and throws otherwise.
using Pairing = std::function<Rational(const Key&, const Key&)>;
RowBasis orthogonal_complement(const RowBasis& basis,
                               const std::vector<Key>& primal_keys,
                               const std::vector<Key>& dual_keys,
                               const Pairing& pairing);

bool same_span(const RowBasis& a, const RowBasis& b);

} // namespace pf

#endif
